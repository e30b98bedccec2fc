"""Seeded random point sets for tests, acceptance runs and the CLI."""

from __future__ import annotations

import math
import random

from .geometry import PointSet


def _lattice_line(rng: random.Random, size: int, lo: int, hi: int):
    """All lattice points of the box on a random line with a short direction."""
    while True:
        dx, dy = rng.randint(-3, 3), rng.randint(-3, 3)
        if (dx, dy) != (0, 0) and math.gcd(dx, dy) == 1:
            break
    x0, y0 = rng.randint(lo, hi), rng.randint(lo, hi)
    pts = []
    for t in range(-2 * (hi - lo) - 2, 2 * (hi - lo) + 3):
        x, y = x0 + t * dx, y0 + t * dy
        if lo <= x <= hi and lo <= y <= hi:
            pts.append((x, y))
    return pts


def random_point_set(rng: random.Random, n: int, *, collinear: int = 0, lines: int = 1,
                     lo: int = 0, hi: int = 20) -> PointSet:
    """``n`` distinct lattice points in ``[lo, hi]^2``.

    With ``collinear > 0``, that many points are first forced onto each of
    ``lines`` random lattice lines (fewer if a line is too short).
    """
    chosen: set = set()
    for _ in range(lines if collinear else 0):
        for _ in range(50):
            cand = [p for p in _lattice_line(rng, n, lo, hi) if p not in chosen]
            if len(cand) >= min(collinear, n - len(chosen)):
                break
        take = min(collinear, n - len(chosen), len(cand))
        chosen.update(rng.sample(cand, take))
    while len(chosen) < n:
        chosen.add((rng.randint(lo, hi), rng.randint(lo, hi)))
    pts = sorted(chosen)
    rng.shuffle(pts)
    return PointSet(pts)
