"""Checker and elaborator for a type theory of higher categories with lax limits."""

import sys

if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)
