"""Disjoint triangle partitions of 3n-point sets.

The main loop peels one triangle at a time off the convex hull: a hull
vertex plus two consecutive points of the remaining hull that face it.  When
no such peel keeps the remainder partitionable, the set has a heavy line
or two heavy hull lines, and a dedicated repair finishes the job.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .feasibility import FeasibilityVerdict, check_triangle_feasible
from .geometry import PointSet, convex_hull, cross, facing_chain, hulls_disjoint
from .separation import peel_search
from .verify import Check, check_groups
from .visibility import LineGroup, hull_edge_lines, line_through, max_collinear


class InfeasibleError(ValueError):
    """The requested partition does not exist; ``verdict`` holds the certificate."""

    def __init__(self, verdict: FeasibilityVerdict):
        super().__init__(verdict.describe())
        self.verdict = verdict


class RepairFailed(RuntimeError):
    """A repair procedure's precondition or final check did not hold."""


@dataclass(frozen=True)
class Triangle:
    indices: tuple


@dataclass
class TrianglePartition:
    triangles: list
    # how each triangle was produced: "peel", "line", "two-lines", "search"
    sources: Counter = field(default_factory=Counter)

    @property
    def groups(self) -> list:
        return [list(t.indices) for t in self.triangles]


def verify_partition(ps: PointSet, tp: TrianglePartition) -> Check:
    if len(ps) % 3:
        return Check(False, "size: point count not divisible by 3")
    return check_groups(ps, tp.groups, [3] * (len(ps) // 3))


def _flat(pts, a, b, c) -> bool:
    return cross(pts[a], pts[b], pts[c]) == 0


def _residual_ok(ps: PointSet, tri, rest) -> bool:
    pts = ps.grid
    if _flat(pts, *tri):
        return False
    if not hulls_disjoint([pts[i] for i in tri], [pts[i] for i in rest]):
        return False
    return bool(check_triangle_feasible(ps.subset(rest)))


def _peel_candidates(pts, residual):
    """Hull vertex plus a facing pair, at least one of which is on the outer hull."""
    hull = convex_hull(pts, residual)
    boundary = set(hull.boundary_indices)
    for p in hull.vertex_indices:
        others = [i for i in residual if i != p]
        chain = facing_chain(pts, convex_hull(pts, others), pts[p])
        for j, k in zip(chain, chain[1:]):
            if j in boundary or k in boundary:
                yield p, j, k


def partition_triangles(ps: PointSet, indices=None) -> TrianglePartition:
    """Disjoint triangle partition of ``ps`` (or of the subset ``indices``)."""
    residual = list(range(len(ps)) if indices is None else indices)
    sub = ps if indices is None else ps.subset(residual)
    verdict = check_triangle_feasible(sub)
    if not verdict:
        if indices is not None:
            verdict = FeasibilityVerdict(False, verdict.kind, verdict.certificate, verdict.bound)
        raise InfeasibleError(verdict)
    pts = ps.grid
    tp = TrianglePartition([])
    while residual:
        if len(residual) == 3:
            tp.triangles.append(Triangle(tuple(residual)))
            tp.sources["peel"] += 1
            break
        step = None
        for tri in _peel_candidates(pts, residual):
            rest = [i for i in residual if i not in tri]
            if _residual_ok(ps, tri, rest):
                step = tri
                break
        if step is None:
            _finish_stuck(ps, residual, tp)
            break
        tp.triangles.append(Triangle(step))
        tp.sources["peel"] += 1
        residual = [i for i in residual if i not in step]
    if indices is None:
        check = verify_partition(ps, tp)
        if not check:
            raise RuntimeError(f"internal error: triangle partition failed verification ({check.reason})")
    return tp


def _finish_stuck(ps: PointSet, residual, tp: TrianglePartition):
    """Every peel breaks feasibility: run the matching repair, else search."""
    sub = ps.subset(residual)
    k = len(residual) // 3
    count, group = max_collinear(sub)
    tried = []
    if count in (2 * k - 1, 2 * k):
        line = LineGroup(group.line, tuple(residual[i] for i in group.member_indices))
        tried.append("line")
        try:
            part = repair_collinear_line(ps, line, residual)
            tp.triangles.extend(part.triangles)
            tp.sources.update(part.sources)
            return
        except RepairFailed:
            pass
    for l1, l2 in _stuck_line_pairs(ps, residual):
        tried.append("two-lines")
        try:
            part = repair_two_lines(ps, l1, l2, residual)
            tp.triangles.extend(part.triangles)
            tp.sources.update(part.sources)
            return
        except (RepairFailed, InfeasibleError):
            continue
    groups = peel_search(ps, residual, [3] * k,
                         lambda rest, sizes: bool(check_triangle_feasible(ps.subset(rest))))
    if groups is None:
        raise RuntimeError(f"internal error: no triangle partition found after {tried}")
    tp.triangles.extend(Triangle(tuple(g)) for g in groups)
    tp.sources["search"] += len(groups)


def _stuck_line_pairs(ps: PointSet, residual):
    """Hull-line pairs carrying the independent set that blocked a peel."""
    from .visibility import max_independent_structured

    pts = ps.grid
    seen = set()
    for tri in _peel_candidates(pts, residual):
        rest = [i for i in residual if i not in tri]
        if _flat(pts, *tri):
            continue
        sub = ps.subset(rest)
        size, witness = max_independent_structured(sub)
        if size <= len(rest) // 3:
            continue
        lines = hull_edge_lines(sub)
        members = set(witness)
        for a in range(len(lines)):
            for b in range(a + 1, len(lines)):
                if members <= set(lines[a]) | set(lines[b]):
                    key = (frozenset(rest[i] for i in lines[a]), frozenset(rest[i] for i in lines[b]))
                    if key in seen:
                        continue
                    seen.add(key)
                    l1 = line_through(ps.subset(residual), lines_in(residual, rest, lines[a]))
                    l2 = line_through(ps.subset(residual), lines_in(residual, rest, lines[b]))
                    yield (LineGroup(l1.line, tuple(residual[i] for i in l1.member_indices)),
                           LineGroup(l2.line, tuple(residual[i] for i in l2.member_indices)))


def lines_in(residual, rest, local):
    """Map indices local to ``rest`` to positions local to ``residual``."""
    pos = {g: k for k, g in enumerate(residual)}
    return [pos[rest[i]] for i in local]


def side_of_line(ps: PointSet, line: LineGroup, i: int) -> int:
    a, b, c = line.line
    x, y = ps[i]
    v = a * Fraction(x) + b * Fraction(y) - c
    return (v > 0) - (v < 0)


def max_angle_point(pts, r, cands, turn: int):
    """Candidate with the largest angle at ``r`` turning by ``turn``; nearer on ties."""
    best = None
    for q in cands:
        if best is None:
            best = q
            continue
        d = turn * cross(pts[r], pts[best], pts[q])
        if d > 0:
            best = q
        elif d == 0:
            db = abs(pts[best][0] - pts[r][0]) + abs(pts[best][1] - pts[r][1])
            dq = abs(pts[q][0] - pts[r][0]) + abs(pts[q][1] - pts[r][1])
            if dq < db:
                best = q
    return best


def repair_collinear_line(ps: PointSet, line: LineGroup, indices=None) -> TrianglePartition:
    """Triangles on consecutive pairs of a heavy line, apexes by maximum angle.

    The line must hold 2k - 1 or 2k of the 3k points.  Points on the positive
    side of the line's equation are used first, left to right, then the
    negative side.
    """
    residual = list(range(len(ps)) if indices is None else indices)
    k = len(residual) // 3
    if len(residual) % 3:
        raise RepairFailed("point count not divisible by 3")
    inside = set(residual)
    on = [i for i in line.member_indices if i in inside]
    if len(on) not in (2 * k - 1, 2 * k):
        raise RepairFailed(f"line holds {len(on)} of {3 * k} points, need {2 * k - 1} or {2 * k}")
    pts = ps.grid
    on.sort(key=lambda i: pts[i])
    first, last = on[0], on[-1]
    off = [i for i in residual if i not in set(on)]
    sides = {i: side_of_line(ps, line, i) for i in off}
    # turn direction of the positive side relative to the left-to-right direction
    probe = next((i for i in off if sides[i] > 0), None)
    up_turn = 1
    if probe is not None:
        up_turn = 1 if cross(pts[first], pts[last], pts[probe]) > 0 else -1
    else:
        neg = next(i for i in off if sides[i] < 0)
        up_turn = -1 if cross(pts[first], pts[last], pts[neg]) > 0 else 1
    free = {1: [i for i in off if sides[i] > 0], -1: [i for i in off if sides[i] < 0]}
    segments = [on[t:t + 2] for t in range(0, len(on), 2)]
    triangles, apexes = [], []
    for seg in segments:
        if len(seg) == 1:
            break
        side = 1 if free[1] else -1
        apex = max_angle_point(pts, seg[1], free[side], up_turn * side)
        free[side].remove(apex)
        triangles.append((apex, seg[0], seg[1]))
        apexes.append((apex, side))
    if len(on) == 2 * k - 1:
        lone = on[-1]
        rest = free[1] + free[-1]
        if len(rest) != 2:
            raise RepairFailed("terminal step expected two free points")
        if len(free[1]) == 2 or len(free[-1]) == 2:
            triangles.append((lone, rest[0], rest[1]))
        else:
            # opposite sides: the last apex pairs with its same-side free point
            apex, side = apexes[-1]
            same, other = free[side][0], free[-side][0]
            l_prev, r_prev = triangles[-1][1], triangles[-1][2]
            triangles[-1] = (apex, same, lone)
            triangles.append((l_prev, r_prev, other))
    tp = TrianglePartition([Triangle(t) for t in triangles])
    tp.sources["line"] += len(triangles)
    sub_ids = sorted(residual)
    remap = {g: k for k, g in enumerate(sub_ids)}
    local = [[remap[i] for i in t] for t in triangles]
    check = check_groups(ps.subset(sub_ids), local, [3] * k)
    if not check:
        raise RepairFailed(f"line repair produced an invalid partition: {check.reason}")
    return tp


def _ends(pts, members):
    ordered = sorted(members, key=lambda i: pts[i])
    return ordered, list(reversed(ordered))


def repair_two_lines(ps: PointSet, l1: LineGroup, l2: LineGroup, indices=None) -> TrianglePartition:
    """Re-choose the peeled triple from the ends of two heavy hull lines.

    First tries triples lying entirely on the two lines (two end points of
    one line and the nearest point of the other), then a line end-point
    plus a facing pair of the remaining hull.  The remainder continues
    through :func:`partition_triangles`.
    """
    residual = list(range(len(ps)) if indices is None else indices)
    inside = set(residual)
    m1 = [i for i in l1.member_indices if i in inside]
    m2 = [i for i in l2.member_indices if i in inside]
    if len(m1) < 2 or len(m2) < 2:
        raise RepairFailed("each line needs at least two points of the set")
    pts = ps.grid
    candidates = []
    for a, b in ((m1, m2), (m2, m1)):
        for run in _ends(pts, a):
            near = min((i for i in b if i not in run[:2]),
                       key=lambda i: abs(pts[i][0] - pts[run[0]][0]) + abs(pts[i][1] - pts[run[0]][1]),
                       default=None)
            if near is not None:
                candidates.append((run[0], run[1], near))
    hull = convex_hull(pts, residual)
    corners = set(hull.vertex_indices)
    for a in (m1, m2):
        for run in _ends(pts, a):
            p = run[0]
            if p not in corners:
                continue
            others = [i for i in residual if i != p]
            chain = facing_chain(pts, convex_hull(pts, others), pts[p])
            candidates.extend((p, j, k) for j, k in zip(chain, chain[1:]))
    for tri in candidates:
        if len(set(tri)) < 3:
            continue
        rest = [i for i in residual if i not in tri]
        if _residual_ok(ps, tri, rest):
            tp = TrianglePartition([Triangle(tri)])
            tp.sources["two-lines"] += 1
            tail = partition_triangles(ps, rest)
            tp.triangles.extend(tail.triangles)
            tp.sources.update(tail.sources)
            return tp
    raise RepairFailed("no end triple of the two lines keeps the remainder feasible")
