"""Exact checks that a list of index groups is a disjoint polygon partition."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .geometry import PointSet, convex_hull, is_simple_polygon, point_in_hull, segments_intersect


@dataclass(frozen=True)
class Check:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


OK = Check(True)


def _hull_edges(vs):
    if len(vs) == 1:
        return [(vs[0], vs[0])]
    if len(vs) == 2:
        return [(vs[0], vs[1])]
    return list(zip(vs, vs[1:] + vs[:1]))


def hull_relation(pts, a, b) -> str:
    """``"disjoint"``, ``"crossing"`` (boundaries meet) or ``"nested"``."""
    ha, hb = convex_hull(pts, a), convex_hull(pts, b)
    va = [pts[i] for i in ha.vertex_indices]
    vb = [pts[i] for i in hb.vertex_indices]
    for p, q in _hull_edges(va):
        for r, s in _hull_edges(vb):
            if segments_intersect(p, q, r, s):
                return "crossing"
    if point_in_hull(pts, hb, va[0]) or point_in_hull(pts, ha, vb[0]):
        return "nested"
    return "disjoint"


def check_groups(ps: PointSet, groups, sizes=None, require_simple=True) -> Check:
    """Coverage, sizes, simplicity and pairwise hull-disjointness of ``groups``.

    Each group is an index sequence in cycle order.  Reasons are short codes
    followed by detail: coverage, overlap, size, degenerate, non-simple,
    crossing, hull-overlap.
    """
    n = len(ps)
    seen = Counter(i for g in groups for i in g)
    dup = sorted(i for i, c in seen.items() if c > 1)
    if dup:
        return Check(False, f"overlap: index {dup[0]} used {seen[dup[0]]} times")
    bad = sorted(i for i in seen if not 0 <= i < n)
    if bad:
        return Check(False, f"coverage: index {bad[0]} out of range")
    if len(seen) != n:
        missing = min(set(range(n)) - set(seen))
        return Check(False, f"coverage: index {missing} not covered")
    if sizes is not None and sorted(map(len, groups)) != sorted(sizes):
        return Check(False, f"size: got {sorted(map(len, groups))}, want {sorted(sizes)}")
    pts = ps.grid
    for k, g in enumerate(groups):
        coords = [pts[i] for i in g]
        if len(g) < 3 or convex_hull(coords).degenerate:
            return Check(False, f"degenerate: polygon {k} is flat or too small")
        if require_simple and not is_simple_polygon(coords):
            return Check(False, f"non-simple: polygon {k}")
    for a in range(len(groups)):
        for b in range(a + 1, len(groups)):
            rel = hull_relation(pts, groups[a], groups[b])
            if rel == "crossing":
                return Check(False, f"crossing: polygons {a} and {b}")
            if rel == "nested":
                return Check(False, f"hull-overlap: polygons {a} and {b}")
    return OK
