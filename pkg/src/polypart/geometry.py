"""Exact planar predicates, point sets and convex hulls.

Coordinates are ``fractions.Fraction`` values.  A :class:`PointSet` also keeps
an integer copy of its coordinates, scaled by the least common denominator,
so the hot loops elsewhere in the package only ever multiply Python ints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence


class Orientation(IntEnum):
    CW = -1
    COLLINEAR = 0
    CCW = 1


class Point(NamedTuple):
    x: Fraction
    y: Fraction

    @classmethod
    def of(cls, x, y) -> "Point":
        return cls(Fraction(x), Fraction(y))

    def __str__(self) -> str:
        return f"{format_coord(self.x)} {format_coord(self.y)}"


def cross(o, a, b):
    """Twice the signed area of triangle (o, a, b)."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def orientation(a, b, c) -> Orientation:
    d = cross(a, b, c)
    if d > 0:
        return Orientation.CCW
    if d < 0:
        return Orientation.CW
    return Orientation.COLLINEAR


def _in_box(p, a, b) -> bool:
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def strictly_between(p, a, b) -> bool:
    """True iff ``p`` lies on the open segment (a, b)."""
    if a[0] == b[0] and a[1] == b[1]:
        raise ValueError("degenerate segment: a == b")
    if cross(a, b, p) != 0:
        return False
    if (p[0] == a[0] and p[1] == a[1]) or (p[0] == b[0] and p[1] == b[1]):
        return False
    return _in_box(p, a, b)


def on_segment(p, a, b) -> bool:
    """Closed-segment membership; ``a == b`` is allowed."""
    return cross(a, b, p) == 0 and _in_box(p, a, b)


def segments_intersect(a, b, c, d) -> bool:
    """Closed segments [a, b] and [c, d] share at least one point."""
    d1 = cross(c, d, a)
    d2 = cross(c, d, b)
    d3 = cross(a, b, c)
    d4 = cross(a, b, d)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and \
            ((d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)):
        return True
    return ((d1 == 0 and on_segment(a, c, d)) or (d2 == 0 and on_segment(b, c, d))
            or (d3 == 0 and on_segment(c, a, b)) or (d4 == 0 and on_segment(d, a, b)))


def segments_cross(a, b, c, d) -> bool:
    """Segments meet somewhere other than at an endpoint they share.

    Used for non-crossing checks on matchings and polygon edges: two edges that
    merely share an endpoint are fine, anything else counts as a crossing
    (including collinear overlap and an endpoint touching the other segment).
    """
    shared = {tuple(a), tuple(b)} & {tuple(c), tuple(d)}
    if not shared:
        return segments_intersect(a, b, c, d)
    if len(shared) == 2:
        return True
    s = shared.pop()
    u = b if tuple(a) == s else a
    w = d if tuple(c) == s else c
    # sharing one endpoint: they overlap only if collinear and pointing the same way
    if cross(s, u, w) != 0:
        return False
    return (u[0] - s[0]) * (w[0] - s[0]) + (u[1] - s[1]) * (w[1] - s[1]) > 0


def parse_coord(token: str) -> Fraction:
    """Parse ``"7"``, ``"-3"`` or ``"p/q"``; decimals like ``"0.5"`` are accepted too."""
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad coordinate {token!r}") from exc


def format_coord(v: Fraction) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


class PointSet:
    """An ordered set of distinct points; indices are stable identifiers."""

    __slots__ = ("points", "scale", "grid")

    def __init__(self, points: Iterable):
        pts = tuple(p if isinstance(p, Point) else Point.of(*p) for p in points)
        if len(set(pts)) != len(pts):
            seen = {}
            for i, p in enumerate(pts):
                if p in seen:
                    raise ValueError(f"duplicate point {p} at indices {seen[p]} and {i}")
                seen[p] = i
        self.points = pts
        self.scale = math.lcm(*(c.denominator for p in pts for c in p)) if pts else 1
        s = self.scale
        self.grid = tuple((int(p.x * s), int(p.y * s)) for p in pts)

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, i: int) -> Point:
        return self.points[i]

    def __iter__(self):
        return iter(self.points)

    def __repr__(self) -> str:
        return f"PointSet({[(format_coord(p.x), format_coord(p.y)) for p in self.points]})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PointSet) and self.points == other.points

    def __hash__(self) -> int:
        return hash(self.points)

    def subset(self, indices: Sequence[int]) -> "PointSet":
        return PointSet(self.points[i] for i in indices)

    @classmethod
    def parse(cls, text: str) -> "PointSet":
        pts = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected 'x y', got {line!r}")
            try:
                pts.append(Point(parse_coord(parts[0]), parse_coord(parts[1])))
            except ValueError as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
        try:
            return cls(pts)
        except ValueError as exc:
            raise ValueError(f"point file: {exc}") from None

    def dumps(self) -> str:
        return "".join(f"{p}\n" for p in self.points)


@dataclass(frozen=True)
class Hull:
    """Convex hull as index lists into the owning point set.

    ``vertex_indices`` are the strict corners in counterclockwise order.
    ``boundary_indices`` additionally holds points in the interior of hull
    edges, in the same counterclockwise traversal, starting at the first vertex.
    """

    vertex_indices: tuple
    boundary_indices: tuple

    @property
    def degenerate(self) -> bool:
        return len(self.vertex_indices) < 3


def _coords(ps):
    return ps.grid if isinstance(ps, PointSet) else ps


def convex_hull(ps, indices: Sequence[int] | None = None) -> Hull:
    """Monotone-chain hull that keeps edge-interior points on the boundary.

    ``ps`` is a :class:`PointSet` (or a plain sequence of coordinate pairs);
    ``indices`` optionally restricts the hull to a subset.
    """
    pts = _coords(ps)
    idx = list(range(len(pts))) if indices is None else list(indices)
    if not idx:
        raise ValueError("convex hull of an empty set")
    idx.sort(key=lambda i: pts[i])
    if len(idx) == 1:
        return Hull((idx[0],), (idx[0],))

    def chain(seq):
        out = []
        for i in seq:
            while len(out) >= 2 and cross(pts[out[-2]], pts[out[-1]], pts[i]) <= 0:
                out.pop()
            out.append(i)
        return out

    lower = chain(idx)
    upper = chain(reversed(idx))
    verts = lower[:-1] + upper[:-1]
    if len(verts) == 2 or all(cross(pts[idx[0]], pts[idx[-1]], pts[i]) == 0 for i in idx):
        # all collinear: endpoints are the vertices, boundary is the whole line
        return Hull((idx[0], idx[-1]), tuple(idx))

    vset = set(verts)
    rest = [i for i in idx if i not in vset]
    boundary = []
    h = len(verts)
    for k in range(h):
        u, w = pts[verts[k]], pts[verts[(k + 1) % h]]
        boundary.append(verts[k])
        on_edge = [i for i in rest if cross(u, w, pts[i]) == 0 and _in_box(pts[i], u, w)]
        on_edge.sort(key=lambda i: abs(pts[i][0] - u[0]) + abs(pts[i][1] - u[1]))
        boundary.extend(on_edge)
    return Hull(tuple(verts), tuple(boundary))


def point_in_hull(pts, hull: Hull, q, strict: bool = False) -> bool:
    """Is ``q`` inside (or on, unless ``strict``) the hull polygon?"""
    vs = [pts[i] for i in hull.vertex_indices]
    if len(vs) == 1:
        return not strict and tuple(q) == tuple(vs[0])
    if len(vs) == 2:
        return not strict and on_segment(q, vs[0], vs[1])
    for k in range(len(vs)):
        d = cross(vs[k], vs[(k + 1) % len(vs)], q)
        if d < 0 or (strict and d == 0):
            return False
    return True


def hulls_disjoint(a: Sequence, b: Sequence) -> bool:
    """Closed convex hulls of two coordinate lists share no point.

    Two convex sets meet iff a vertex of one lies in the other or two of their
    edges intersect; degenerate hulls (points, segments) are handled the same way.
    """
    ha, hb = convex_hull(a), convex_hull(b)
    va = [a[i] for i in ha.vertex_indices]
    vb = [b[i] for i in hb.vertex_indices]
    if any(point_in_hull(b, hb, p) for p in va) or any(point_in_hull(a, ha, p) for p in vb):
        return False
    ea = list(zip(va, va[1:] + va[:1])) if len(va) > 2 else [(va[0], va[-1])]
    eb = list(zip(vb, vb[1:] + vb[:1])) if len(vb) > 2 else [(vb[0], vb[-1])]
    return not any(segments_intersect(p, q, r, s) for p, q in ea for r, s in eb)


def _external_check(pts, hull: Hull, e) -> None:
    if point_in_hull(pts, hull, e):
        raise ValueError("external point lies inside or on the hull")


def hull_tangents(ps, hull: Hull, external) -> tuple[int, int]:
    """Indices of the two tangent vertices of ``hull`` seen from ``external``.

    The left tangent comes first in counterclockwise order along the near side.
    When ``external`` is collinear with a hull edge, the far end of that edge is
    the tangent vertex.
    """
    left, right, _ = _tangent_walk(ps, hull, external)
    return left, right


def facing_chain(ps, hull: Hull, external) -> list[int]:
    """Boundary indices from the left to the right tangent along the near side."""
    return _tangent_walk(ps, hull, external)[2]


def _tangent_walk(ps, hull: Hull, e):
    pts = _coords(ps)
    e = tuple(e)
    _external_check(pts, hull, e)
    vs = hull.vertex_indices
    bd = hull.boundary_indices
    if len(vs) == 1:
        return vs[0], vs[0], [vs[0]]
    if len(vs) == 2:
        u, w = vs
        d = cross(pts[u], pts[w], e)
        if d < 0:
            return u, w, list(bd)
        if d > 0:
            return w, u, list(reversed(bd))
        # external on the line of the segment: order from nearest to farthest
        near_u = abs(pts[u][0] - e[0]) + abs(pts[u][1] - e[1]) < abs(pts[w][0] - e[0]) + abs(pts[w][1] - e[1])
        chain = list(bd) if near_u else list(reversed(bd))
        return chain[0], chain[-1], chain

    h = len(vs)
    sides = [cross(pts[vs[k]], pts[vs[(k + 1) % h]], e) for k in range(h)]
    facing = [s < 0 for s in sides]
    # first facing edge whose predecessor is not facing
    start = next(k for k in range(h) if facing[k] and not facing[k - 1])
    end = start
    while facing[(end + 1) % h]:
        end = (end + 1) % h
    lo = start            # chain starts at vertex vs[lo]
    hi = (end + 1) % h    # and ends at vertex vs[hi]
    if sides[(lo - 1) % h] == 0:
        lo = (lo - 1) % h
    if sides[hi] == 0:
        hi = (hi + 1) % h
    pos = {i: k for k, i in enumerate(bd)}
    a, b = pos[vs[lo]], pos[vs[hi]]
    chain = [bd[(a + t) % len(bd)] for t in range((b - a) % len(bd) + 1)]
    return vs[lo], vs[hi], chain


def is_simple_polygon(coords: Sequence) -> bool:
    """Closed polygon through ``coords`` in order is simple and not flat.

    Straight angles (consecutive collinear edges pointing the same way) are
    allowed; folding back, touching and crossing are not.
    """
    k = len(coords)
    if k < 3 or len(set(map(tuple, coords))) != k:
        return False
    if all(cross(coords[0], coords[1], c) == 0 for c in coords[2:]):
        return False
    edges = [(coords[i], coords[(i + 1) % k]) for i in range(k)]
    for i in range(k):
        a, b = edges[i]
        for j in range(i + 1, k):
            c, d = edges[j]
            if j == i + 1 or (i == 0 and j == k - 1):
                if segments_cross(a, b, c, d):
                    return False
            elif segments_intersect(a, b, c, d):
                return False
    return True


def convex_polygons_disjoint(va: Sequence, vb: Sequence) -> bool:
    """Separating-axis test for two proper convex polygons given CCW.

    Closed polygons are disjoint iff all of one lies strictly outside some
    edge of the other.
    """
    for p, q in ((va, vb), (vb, va)):
        n = len(p)
        for i in range(n):
            a, b = p[i], p[(i + 1) % n]
            if all(cross(a, b, r) < 0 for r in q):
                return True
    return False


def polygon_order(coords) -> list[int]:
    """A simple-polygon ordering (positions into ``coords``) of a non-flat set.

    Splits by the line from the lexicographically smallest to the largest
    point: one x-monotone chain takes the points on one side (plus the points
    on the line), the other chain returns through the strict other side.
    """
    k = len(coords)
    order = sorted(range(k), key=lambda i: tuple(coords[i]))
    p, q = coords[order[0]], coords[order[-1]]
    mid = order[1:-1]
    above = [i for i in mid if cross(p, q, coords[i]) > 0]
    below = [i for i in mid if cross(p, q, coords[i]) < 0]
    on = [i for i in mid if cross(p, q, coords[i]) == 0]
    if below:
        upper, lower = sorted(above + on, key=lambda i: tuple(coords[i])), below
    else:
        upper, lower = above, sorted(below + on, key=lambda i: tuple(coords[i]))
    result = [order[0], *upper, order[-1], *reversed(lower)]
    if not is_simple_polygon([coords[i] for i in result]):
        raise ValueError("point list admits no simple polygon (collinear?)")
    return result
