"""Closed-form parameters of the wall/thinness duality.

The constants g(l), w(l) and h(s, t) come from results outside this package
and default to unset.  Numeric values are only produced once they are
configured; otherwise :meth:`Parameters.symbolic` gives sympy expressions.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import ceil, comb

import sympy as sp


def _lookup(table, *args):
    """Constant, callable or lookup table keyed by ``"a"`` / ``"a,b"``."""
    if table is None:
        return None
    if callable(table):
        return table(*args)
    if isinstance(table, int):
        return table
    key = ",".join(str(a) for a in args)
    return table.get(key, table.get(args if len(args) > 1 else args[0]))


@dataclass
class Parameters:
    ell: int
    g_fn: object = None
    w_fn: object = None
    h_fn: object = None
    notes: list = field(default_factory=list)

    @classmethod
    def from_json(cls, ell: int, path_or_dict) -> "Parameters":
        data = path_or_dict
        if not isinstance(data, dict):
            with open(path_or_dict) as fh:
                data = json.load(fh)
        return cls(ell, data.get("g"), data.get("w"), data.get("h"))

    @property
    def p(self) -> int:
        return 6 * self.ell ** 2

    @property
    def star_leaves(self) -> int:
        return 2 * self.ell ** 2

    @property
    def g(self):
        return _lookup(self.g_fn, self.ell)

    @property
    def w(self):
        return _lookup(self.w_fn, self.ell)

    @property
    def h(self):
        return _lookup(self.h_fn, 2 * self.ell ** 2, 6 * self.ell ** 2)

    @property
    def d(self):
        if self.g is None or self.h is None:
            return None
        return self.g * self.p * self.h ** 2

    @property
    def a(self):
        if self.d is None or self.w is None:
            return None
        return (2 * self.w + 2) * self.d

    @property
    def k(self):
        if self.d is None or self.w is None:
            return None
        return (self.d + 1) * (self.w + 1)

    @property
    def alpha(self):
        """Closed-form alpha(l), rounded up, or None while constants are unset."""
        if self.k is None:
            return None
        return int(ceil(alpha_expression(self.ell).subs(
            {G: self.g, W: self.w, H: self.h})))

    def symbolic(self) -> dict:
        e = self.ell
        exprs = {"p": sp.Integer(6 * e * e), "d": d_expression(e), "a": a_expression(e),
                 "k": k_expression(e), "alpha": alpha_expression(e)}
        subs = {s: v for s, v in ((G, self.g), (W, self.w), (H, self.h)) if v is not None}
        return {name: sp.simplify(x.subs(subs)) for name, x in exprs.items()}

    def report(self) -> dict:
        out = {"ell": self.ell, "p": self.p}
        for name, val in (("d", self.d), ("a", self.a), ("k", self.k), ("alpha", self.alpha)):
            out[name] = val if val is not None else str(self.symbolic()[name])
        return out


G, W, H = sp.symbols("g w h", positive=True, integer=True)


def d_expression(ell: int):
    return G * 6 * ell ** 2 * H ** 2


def a_expression(ell: int):
    return (2 * W + 2) * d_expression(ell)


def k_expression(ell: int):
    return (d_expression(ell) + 1) * (W + 1)


def alpha_expression(ell: int):
    p = 6 * ell ** 2
    k = k_expression(ell)
    first = k * (8 * ell ** 2 + 1 + 6 * ell ** 2 * 16 * ell ** 4)
    second = (p * (6 * ell ** 2) ** 2 + comb(16 * ell ** 4, 2) * p * (6 * ell ** 2) ** 2
              + k * d_expression(ell) / 2 + a_expression(ell) * k)
    return sp.Max(first, second)


def ell_of_alpha(alpha: int) -> int:
    """Wall size forced by almost-alpha-thin decompositions of adhesion alpha."""
    a = alpha
    first = (a * a + 1) * (2 * (a + 1) + 4) + a * a + a
    second = a * ((a * a + 1) * (2 * (a + 1) + a + 2) + a * a + a)
    return first + second + 2
