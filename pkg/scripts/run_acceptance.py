#!/usr/bin/env python3
"""Run the acceptance gate and print one PASS/FAIL line per criterion.

Exit status is pytest's: non-zero when any criterion fails.
"""
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    extra = sys.argv[1:]
    sys.exit(pytest.main([str(ROOT / "tests" / "test_acceptance.py"), "-q", "-p", "no:cacheprovider", *extra]))
