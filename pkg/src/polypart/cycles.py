"""Disjoint cycle partitions for size specs with at least one polygon of 4+.

Cycles are peeled off in ascending size, each cut from the outside of the
residual hull.  As soon as the residual carries a line too heavy for the
cycles that would remain, the heavy-line construction finishes the set.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cmp_to_key

from .feasibility import PartitionSpec, as_spec, check_cycle_feasible
from .geometry import (PointSet, convex_hull, cross, facing_chain, hulls_disjoint, is_simple_polygon,
                       polygon_order, segments_intersect)
from .separation import peel_search
from .triangles import InfeasibleError, RepairFailed, max_angle_point, partition_triangles, side_of_line
from .verify import Check, check_groups
from .visibility import LineGroup, max_collinear


class SeparationDegenerate(RuntimeError):
    """The chosen seed vertex produced a flat or non-separated cycle."""


@dataclass(frozen=True)
class Polygon:
    indices: tuple

    def __len__(self) -> int:
        return len(self.indices)


@dataclass
class CyclePartition:
    polygons: list
    spec: PartitionSpec
    # how polygons were produced: "peel", "bigline", "triangles", "search", "final"
    sources: Counter = field(default_factory=Counter)

    @property
    def groups(self) -> list:
        return [list(p.indices) for p in self.polygons]


@dataclass(frozen=True)
class Matching:
    pairs: tuple


def verify_cycles(ps: PointSet, cp: CyclePartition) -> Check:
    return check_groups(ps, cp.groups, cp.spec.sizes)


def verify_matching(ps: PointSet, m: Matching) -> Check:
    used = [i for pair in m.pairs for i in pair]
    if sorted(used) != list(range(len(ps))):
        return Check(False, "coverage: pairs do not cover every point exactly once")
    pts = ps.grid
    segs = [(pts[a], pts[b]) for a, b in m.pairs]
    for x in range(len(segs)):
        for y in range(x + 1, len(segs)):
            if segments_intersect(*segs[x], *segs[y]):
                return Check(False, f"crossing: pairs {m.pairs[x]} and {m.pairs[y]}")
    return Check(True)


def noncrossing_matching(ps: PointSet) -> Matching:
    """Pair a hull vertex with its next boundary point, repeatedly."""
    n = len(ps)
    if n < 2 or n % 2:
        raise ValueError(f"need an even number of points >= 2, got {n}")
    pts = ps.grid
    residual = list(range(n))
    pairs = []
    while residual:
        bd = convex_hull(pts, residual).boundary_indices
        p, q = bd[0], bd[1]
        pairs.append((p, q))
        residual = [i for i in residual if i != p and i != q]
    return Matching(tuple(pairs))


def _fan_order(pts, p, others):
    """Order ``others`` by angle around hull vertex ``p``; nearer first on ties,
    except on the closing ray where farther comes first."""
    def dist(i):
        return abs(pts[i][0] - pts[p][0]) + abs(pts[i][1] - pts[p][1])

    def cmp(a, b):
        c = cross(pts[p], pts[a], pts[b])
        if c:
            return -1 if c > 0 else 1
        return dist(a) - dist(b)

    order = sorted(others, key=cmp_to_key(cmp))
    tail = [i for i in order if cross(pts[p], pts[order[-1]], pts[i]) == 0]
    if len(tail) > 1 and len(tail) < len(order):
        order = order[:-len(tail)] + sorted(tail, key=dist, reverse=True)
    return [p] + order


def _cycle_order(pts, group, preferred=None):
    order = list(preferred) if preferred is not None else None
    if order is None or not is_simple_polygon([pts[i] for i in order]):
        coords = [pts[i] for i in group]
        order = [group[k] for k in polygon_order(coords)]
    return order


def _seed_order(pts, hull):
    vs = list(hull.vertex_indices)
    start = min(range(len(vs)), key=lambda k: (pts[vs[k]][1], pts[vs[k]][0]))
    return vs[start:] + vs[:start]


def separate_cycle(ps: PointSet, L: int, indices=None, seed=None):
    """Cut an ``L``-cycle off the outside of the hull; returns ``(Polygon, rest)``.

    The cycle starts at a hull vertex p and takes consecutive points of the
    remaining hull's chain facing p, from the left tangent onward; when a
    chain runs out the left tangent point becomes the next apex.  Seeds are
    tried from the lowest (then leftmost) hull vertex counterclockwise.
    """
    residual = list(range(len(ps)) if indices is None else indices)
    if L < 3 or len(residual) <= L:
        raise ValueError(f"need 3 <= L < {len(residual)}, got L = {L}")
    pts = ps.grid
    hull = convex_hull(pts, residual)
    if hull.degenerate:
        raise ValueError("points are collinear")
    seeds = _seed_order(pts, hull) if seed is None else [seed]
    for p in seeds:
        try:
            return _separate_from(pts, residual, L, p)
        except SeparationDegenerate:
            continue
    if seed is None:
        found = _sweep_separation(pts, residual, L)
        if found is not None:
            return found
    raise SeparationDegenerate(f"no seed vertex yields a separated {L}-cycle")


def _half(d):
    return 0 if d[1] > 0 or (d[1] == 0 and d[0] > 0) else 1


def _sweep_separation(pts, residual, L):
    """First ``L`` points along a generic direction; a line always separates them.

    Directions strictly between consecutive critical directions (normals of
    point differences) realise every distinct sweep order.
    """
    crit = set()
    for a in range(len(residual)):
        for b in range(a + 1, len(residual)):
            dx = pts[residual[b]][0] - pts[residual[a]][0]
            dy = pts[residual[b]][1] - pts[residual[a]][1]
            g = math.gcd(dx, dy)
            crit.update({(-dy // g, dx // g), (dy // g, -dx // g)})

    def cmp(u, w):
        if _half(u) != _half(w):
            return _half(u) - _half(w)
        c = u[0] * w[1] - u[1] * w[0]
        return -1 if c > 0 else (1 if c < 0 else 0)

    dirs = sorted(crit, key=cmp_to_key(cmp))
    for u, w in zip(dirs, dirs[1:] + dirs[:1]):
        d = (u[0] + w[0], u[1] + w[1])
        if d == (0, 0):
            continue
        order = sorted(residual, key=lambda i: d[0] * pts[i][0] + d[1] * pts[i][1])
        cycle, rest = order[:L], order[L:]
        if convex_hull(pts, cycle).degenerate:
            continue
        if hulls_disjoint([pts[i] for i in cycle], [pts[i] for i in rest]):
            return Polygon(tuple(_cycle_order(pts, cycle))), sorted(rest)
    return None


def _separate_from(pts, residual, L, p):
    """Grow from ``p`` along facing chains.

    The window starting at the left tangent is tried first, then the one
    ending at the right tangent, then the windows in between; a short chain
    is taken whole and continued from either tangent point.
    """
    def finish(cycle):
        taken = set(cycle)
        rest = [i for i in residual if i not in taken]
        if convex_hull(pts, cycle).degenerate:
            return None
        if not hulls_disjoint([pts[i] for i in cycle], [pts[i] for i in rest]):
            return None
        return rest

    def grow(cycle, apex):
        taken = set(cycle)
        rest = [i for i in residual if i not in taken]
        try:
            chain = facing_chain(pts, convex_hull(pts, rest), pts[apex])
        except ValueError:
            return None
        need = L - len(cycle)
        if len(chain) >= need:
            starts = [0, len(chain) - need] + list(range(1, len(chain) - need))
            for take in (chain[k:k + need] for k in dict.fromkeys(starts)):
                rest = finish(cycle + take)
                if rest is not None:
                    return cycle + take, rest
            return None
        for nxt in (chain[0], chain[-1]):
            found = grow(cycle + chain, nxt)
            if found is not None:
                return found
        return None

    found = grow([p], p)
    if found is None:
        raise SeparationDegenerate(f"seed {p} yields no separated {L}-cycle")
    cycle, rest = found
    order = _cycle_order(pts, cycle, _fan_order(pts, p, cycle[1:]))
    return Polygon(tuple(order)), rest


def _local_check(ps, residual, groups, sizes) -> Check:
    ids = sorted(residual)
    pos = {g: k for k, g in enumerate(ids)}
    return check_groups(ps.subset(ids), [[pos[i] for i in g] for g in groups], sizes)


def bigline_partition(ps: PointSet, spec, line: LineGroup, indices=None) -> CyclePartition:
    """Partition around a heavy line; the last size in ``spec`` closes the line.

    The line's points are cut left to right into blocks of L_i - 1, each
    closed into a cycle by one off-line apex chosen by the maximum-angle rule
    (one side first, then the other); the last cycle takes the leftover line
    points and every free apex candidate.
    """
    spec = as_spec(spec)
    residual = list(range(len(ps)) if indices is None else indices)
    if spec.total != len(residual):
        raise ValueError(f"spec {spec} covers {spec.total} points, set has {len(residual)}")
    pts = ps.grid
    inside = set(residual)
    on = sorted((i for i in line.member_indices if i in inside), key=lambda i: pts[i])
    sizes = list(spec.sizes)
    head = sizes[:-1]
    lo = sum(s - 1 for s in head) + 1
    hi = spec.collinear_bound
    if not lo <= len(on) <= hi:
        raise ValueError(f"line holds {len(on)} points, outside the band [{lo}, {hi}]")
    if not head:
        order = _cycle_order(pts, residual)
        return CyclePartition([Polygon(tuple(order))], spec, Counter(bigline=1))
    if all(s == 3 for s in head):
        raise ValueError("a cycle of length >= 4 must precede the closing cycle")
    onset = set(on)
    off = [i for i in residual if i not in onset]
    first, last = on[0], on[-1]
    turn = {}
    free = {1: [], -1: []}
    for i in off:
        s = side_of_line(ps, line, i)
        free[s].append(i)
        turn[s] = 1 if cross(pts[first], pts[last], pts[i]) > 0 else -1
    need = len(head)
    # the side with at most ``need`` points goes first; prefer the positive side
    order = [1, -1] if len(free[1]) <= need or len(free[-1]) > need else [-1, 1]
    both_heavy = len(free[1]) > need and len(free[-1]) > need
    failure = None
    # the procedure as stated first; then mirrored along the line and with sides swapped
    for runs in (on, on[::-1]):
        flip = 1 if runs is on else -1
        for primary in order:
            try:
                cycles, closing = _assign_apexes(pts, runs, head, {s: list(v) for s, v in free.items()},
                                                 {s: t * flip for s, t in turn.items()}, primary, both_heavy)
            except RepairFailed as exc:
                failure = exc
                continue
            groups = [_cycle_order(pts, c, c) for c in cycles] + [_cycle_order(pts, closing)]
            check = _local_check(ps, residual, groups, sizes)
            if check:
                return CyclePartition([Polygon(tuple(g)) for g in groups], spec, Counter(bigline=len(groups)))
            failure = RepairFailed(f"heavy-line construction failed: {check.reason}")
    raise failure


def _assign_apexes(pts, on, head, free, turn, primary, both_heavy):
    cycles, apexes, pos = [], [], 0
    for size in head:
        block = on[pos:pos + size - 1]
        pos += size - 1
        side = primary if free[primary] else -primary
        apex = max_angle_point(pts, block[-1], free[side], turn[side])
        free[side].remove(apex)
        cycles.append([apex] + block)
        apexes.append((apex, side))
    tail = on[pos:]
    closing = tail + free[1] + free[-1]
    if convex_hull(pts, closing).degenerate or (both_heavy and len(tail) == 1):
        # release the last block's end point by rotating onto the nearest free point
        apex, side = apexes[-1]
        pool = free[side]
        if not pool:
            raise RepairFailed("no free point on the last apex's side to release the line end")
        block = cycles[-1][1:]
        t = block[-1]
        swap = max_angle_point(pts, t, pool, turn[side])
        cycles[-1] = [apex] + block[:-1] + [swap]
        pool.remove(swap)
        closing = [t] + tail + free[1] + free[-1]
    return cycles, closing


def _feasible_rest(ps):
    def ok(rest, sizes):
        return bool(check_cycle_feasible(ps.subset(rest), sizes))
    return ok


def partition_cycles(ps: PointSet, spec) -> CyclePartition:
    spec = as_spec(spec)
    verdict = check_cycle_feasible(ps, spec)
    if not verdict:
        raise InfeasibleError(verdict)
    pts = ps.grid
    if spec.all_triangles:
        tp = partition_triangles(ps)
        return CyclePartition([Polygon(t.indices) for t in tp.triangles], spec, Counter(triangles=len(tp.triangles)))
    residual = list(range(len(ps)))
    sizes = sorted(spec.sizes)
    cp = CyclePartition([], spec)
    while True:
        if len(sizes) == 1:
            cp.polygons.append(Polygon(tuple(_cycle_order(pts, residual))))
            cp.sources["final"] += 1
            break
        small, others = sizes[0], sizes[1:]
        count, group = max_collinear(ps.subset(residual))
        if count >= sum(s - 1 for s in others) + 1:
            line = LineGroup(group.line, tuple(residual[i] for i in group.member_indices))
            try:
                part = bigline_partition(ps, others + [small], line, residual)
                cp.polygons.extend(part.polygons)
                cp.sources.update(part.sources)
            except RepairFailed:
                _search_rest(ps, residual, sizes, cp)
            break
        try:
            poly, residual = separate_cycle(ps, small, residual)
        except SeparationDegenerate:
            _search_rest(ps, residual, sizes, cp)
            break
        cp.polygons.append(poly)
        cp.sources["peel"] += 1
        sizes = others
    check = verify_cycles(ps, cp)
    if not check:
        raise RuntimeError(f"internal error: cycle partition failed verification ({check.reason})")
    return cp


def _search_rest(ps, residual, sizes, cp):
    groups = peel_search(ps, residual, sizes, _feasible_rest(ps))
    if groups is None:
        raise RuntimeError("internal error: no cycle partition found for a feasible residual")
    cp.polygons.extend(Polygon(tuple(g)) for g in groups)
    cp.sources["search"] += len(groups)
