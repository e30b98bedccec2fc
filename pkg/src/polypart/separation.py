"""Line-separable subsets and a feasibility-guided peeling search.

Used as the last resort of the constructive partitioners: whenever a
hand-built step fails its exact check, a part that a straight line cuts off
from the rest is peeled instead, keeping the remainder feasible.
"""

from __future__ import annotations

from itertools import combinations

from .geometry import convex_hull, polygon_order


def separable_subsets(pts, indices, size: int):
    """Distinct ``size``-subsets of ``indices`` that a line strictly separates.

    Every such subset is a prefix of the order induced by some generic linear
    functional.  Those orders are all reached by sorting on a pair normal with
    the pair direction as tie-break, in both signs of each.
    """
    idx = list(indices)
    if not 0 < size < len(idx):
        return
    seen = set()
    for i, j in combinations(idx, 2):
        ux, uy = pts[j][0] - pts[i][0], pts[j][1] - pts[i][1]
        for nx, ny in ((-uy, ux), (uy, -ux)):
            for tx, ty in ((ux, uy), (-ux, -uy)):
                order = sorted(idx, key=lambda k: (nx * pts[k][0] + ny * pts[k][1],
                                                   tx * pts[k][0] + ty * pts[k][1]))
                part = frozenset(order[:size])
                if part not in seen:
                    seen.add(part)
                    yield tuple(sorted(part, key=lambda k: pts[k]))


def peel_search(ps, indices, sizes, feasible, max_steps: int = 100_000):
    """Partition ``indices`` into non-flat groups of ``sizes`` by separable peeling.

    ``feasible(indices, sizes)`` decides whether a remainder is still worth
    exploring.  Returns a list of groups in polygon order, or ``None``.
    """
    pts = ps.grid
    steps = [0]

    def go(rest, left):
        if len(left) == 1:
            if convex_hull(pts, rest).degenerate:
                return None
            coords = [pts[i] for i in rest]
            return [[rest[k] for k in polygon_order(coords)]]
        for size in sorted(set(left)):
            remaining = list(left)
            remaining.remove(size)
            for part in separable_subsets(pts, rest, size):
                steps[0] += 1
                if steps[0] > max_steps:
                    return None
                if convex_hull(pts, part).degenerate:
                    continue
                others = [i for i in rest if i not in part]
                if not feasible(others, remaining):
                    continue
                tail = go(others, remaining)
                if tail is not None:
                    coords = [pts[i] for i in part]
                    return [[part[k] for k in polygon_order(coords)]] + tail
        return None

    return go(list(indices), list(sizes))
