"""Hypothesis strategies and small naive reference implementations."""

from fractions import Fraction
from itertools import combinations

from hypothesis import strategies as st

from polypart.geometry import PointSet


def lattice_points(min_size=1, max_size=10, lo=0, hi=8):
    coord = st.tuples(st.integers(lo, hi), st.integers(lo, hi))
    return st.lists(coord, min_size=min_size, max_size=max_size, unique=True).map(PointSet)


def rational_points(min_size=1, max_size=8):
    q = st.fractions(min_value=-4, max_value=4, max_denominator=4)
    return st.lists(st.tuples(q, q), min_size=min_size, max_size=max_size, unique=True).map(PointSet)


def naive_cross(o, a, b):
    return (Fraction(a[0]) - o[0]) * (Fraction(b[1]) - o[1]) - (Fraction(a[1]) - o[1]) * (Fraction(b[0]) - o[0])


def naive_between(p, a, b):
    if naive_cross(a, b, p) != 0:
        return False
    lo_x, hi_x = sorted((a[0], b[0]))
    lo_y, hi_y = sorted((a[1], b[1]))
    return lo_x <= p[0] <= hi_x and lo_y <= p[1] <= hi_y and p != a and p != b


def naive_visible(ps, i, j):
    return not any(naive_between(ps[k], ps[i], ps[j]) for k in range(len(ps)) if k not in (i, j))


def naive_induced_path(ps, cap=None):
    """Longest induced path of the visibility graph, by trying every vertex order."""
    n = len(ps)
    vis = {(i, j): naive_visible(ps, i, j) for i, j in combinations(range(n), 2)}

    def adj(a, b):
        return vis[(min(a, b), max(a, b))]

    best = 1 if n else 0

    def grow(path):
        nonlocal best
        best = max(best, len(path))
        if cap is not None and best >= cap:
            return
        for v in range(n):
            if v in path or not adj(path[-1], v):
                continue
            if any(adj(u, v) for u in path[:-1]):
                continue
            grow(path + [v])

    for s in range(n):
        grow([s])
    return best
