"""Constructive pipeline from a multigraph to either a certified tree-cut
decomposition or a strong immersion of a wall."""
