"""Point visibility graphs, collinear runs and independent sets."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .geometry import PointSet, convex_hull


class SearchExhausted(RuntimeError):
    """A bounded search hit its node budget before finishing."""


@dataclass(frozen=True)
class VisibilityGraph:
    n: int
    adjacency: tuple            # tuple of frozensets
    blocker_witness: dict = field(repr=False)   # (i, j) with i < j -> blocking index

    @property
    def masks(self) -> tuple:
        return tuple(sum(1 << j for j in nb) for nb in self.adjacency)

    def visible(self, i: int, j: int) -> bool:
        return j in self.adjacency[i]

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in sorted(self.adjacency[i]) if i < j]

    def blocker(self, i: int, j: int):
        return self.blocker_witness.get((min(i, j), max(i, j)))

    def induced(self, indices) -> dict:
        keep = set(indices)
        return {i: self.adjacency[i] & keep for i in keep}


def _direction(dx: int, dy: int) -> tuple[int, int]:
    g = math.gcd(dx, dy)
    return dx // g, dy // g


def build_pvg(ps: PointSet) -> VisibilityGraph:
    """Exact visibility graph in O(n^2) by bucketing primitive directions.

    From each point the others are grouped by primitive direction vector; along
    a direction only the nearest point is visible and every farther point is
    blocked by its predecessor in that bucket.
    """
    pts = ps.grid
    n = len(pts)
    adj = [set() for _ in range(n)]
    blockers = {}
    for i in range(n):
        xi, yi = pts[i]
        buckets: dict = {}
        for j in range(n):
            if j != i:
                dx, dy = pts[j][0] - xi, pts[j][1] - yi
                buckets.setdefault(_direction(dx, dy), []).append((abs(dx) + abs(dy), j))
        for run in buckets.values():
            run.sort()
            adj[i].add(run[0][1])
            for (_, prev), (_, j) in zip(run, run[1:]):
                if i < j:
                    blockers[(i, j)] = prev
    return VisibilityGraph(n, tuple(frozenset(a) for a in adj), blockers)


@dataclass(frozen=True)
class LineGroup:
    """A maximal set of >= 2 collinear points.

    ``line`` is the primitive integer triple (a, b, c) with a*x + b*y = c in the
    original rational coordinates, sign-normalised so a > 0, or a == 0 and b > 0.
    """

    line: tuple
    member_indices: tuple

    def __len__(self) -> int:
        return len(self.member_indices)


def canonical_line(p, q) -> tuple[int, int, int]:
    """Primitive normalised (a, b, c) for the line through two exact points."""
    a = Fraction(q[1]) - Fraction(p[1])
    b = Fraction(p[0]) - Fraction(q[0])
    c = a * Fraction(p[0]) + b * Fraction(p[1])
    den = math.lcm(a.denominator, b.denominator, c.denominator)
    ai, bi, ci = int(a * den), int(b * den), int(c * den)
    g = math.gcd(ai, bi, ci)
    ai, bi, ci = ai // g, bi // g, ci // g
    if ai < 0 or (ai == 0 and bi < 0):
        ai, bi, ci = -ai, -bi, -ci
    return ai, bi, ci


def _grid_line_key(p, q) -> tuple[int, int, int]:
    a, b = q[1] - p[1], p[0] - q[0]
    c = a * p[0] + b * p[1]
    g = math.gcd(a, b, c)
    a, b, c = a // g, b // g, c // g
    if a < 0 or (a == 0 and b < 0):
        a, b, c = -a, -b, -c
    return a, b, c


def line_groups(ps: PointSet) -> list[LineGroup]:
    """All maximal collinear subsets of size >= 2, sorted along their lines."""
    pts = ps.grid
    groups: dict = {}
    for i, j in combinations(range(len(pts)), 2):
        groups.setdefault(_grid_line_key(pts[i], pts[j]), set()).update((i, j))
    out = []
    for members in groups.values():
        ordered = tuple(sorted(members, key=lambda k: pts[k]))
        out.append(LineGroup(canonical_line(ps[ordered[0]], ps[ordered[1]]), ordered))
    out.sort(key=lambda g: (-len(g), g.member_indices))
    return out


def max_collinear(ps: PointSet) -> tuple[int, LineGroup | None]:
    if len(ps) < 2:
        return len(ps), None
    best = line_groups(ps)[0]
    return len(best), best


def line_through(ps: PointSet, indices) -> LineGroup:
    """The maximal group containing the given (collinear) indices."""
    i, j = list(indices)[:2]
    key = _grid_line_key(ps.grid[i], ps.grid[j])
    members = [k for k in range(len(ps)) if k == i or _grid_line_key(ps.grid[i], ps.grid[k]) == key]
    ordered = tuple(sorted(members, key=lambda k: ps.grid[k]))
    return LineGroup(canonical_line(ps[ordered[0]], ps[ordered[1]]), ordered)


def max_independent_set(masks, candidates: int, budget: int | None = None) -> int:
    """Exact maximum independent set over a vertex bitmask (branch and bound).

    ``masks[v]`` is the neighbourhood bitmask of v.  Returns the bitmask of one
    maximum independent set inside ``candidates``.
    """
    best = 0
    best_size = 0
    nodes = 0

    def popcount(x):
        return x.bit_count()

    def search(cand: int, chosen: int, size: int):
        nonlocal best, best_size, nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise SearchExhausted(f"independent-set search exceeded {budget} nodes")
        # take every vertex with no candidate neighbour for free
        while True:
            free = 0
            c = cand
            while c:
                low = c & -c
                v = low.bit_length() - 1
                if not masks[v] & cand:
                    free |= low
                c ^= low
            if not free:
                break
            chosen |= free
            size += popcount(free)
            cand &= ~free
        if not cand:
            if size > best_size:
                best, best_size = chosen, size
            return
        if size + popcount(cand) <= best_size:
            return
        # branch on the vertex of maximum degree inside cand
        v = max((u for u in _bits(cand)), key=lambda u: popcount(masks[u] & cand))
        search(cand & ~(1 << v) & ~masks[v], chosen | (1 << v), size + 1)
        search(cand & ~(1 << v), chosen, size)

    search(candidates, 0, 0)
    return best


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def hull_edge_lines(ps: PointSet) -> list[tuple]:
    """Point-index sets of the lines supporting the hull edges of the set."""
    hull = convex_hull(ps)
    vs = hull.vertex_indices
    if len(vs) < 3:
        return [tuple(hull.boundary_indices)] if len(vs) == 2 else []
    out = []
    bd = list(hull.boundary_indices)
    pos = {v: k for k, v in enumerate(bd)}
    for k in range(len(vs)):
        a, b = pos[vs[k]], pos[vs[(k + 1) % len(vs)]]
        out.append(tuple(bd[(a + t) % len(bd)] for t in range((b - a) % len(bd) + 1)))
    return out


def max_independent_structured(ps: PointSet, g: VisibilityGraph | None = None):
    """Largest independent set of the two shapes a large one can take.

    Either every member lies on one line (best: every other point of the
    line), or all members lie on the union of two lines supporting hull edges
    (searched exactly on that union, with visibility taken in the whole set).
    Returns ``(size, witness)`` with the witness as a sorted index tuple.
    """
    n = len(ps)
    if n == 0:
        return 0, ()
    best = (1, (0,))
    for grp in line_groups(ps):
        m = len(grp)
        if (m + 1) // 2 > best[0]:
            best = ((m + 1) // 2, tuple(sorted(grp.member_indices[::2])))
    if g is None:
        g = build_pvg(ps)
    masks = g.masks
    lines = hull_edge_lines(ps)
    for l1, l2 in combinations(lines, 2):
        cand = 0
        for i in set(l1) | set(l2):
            cand |= 1 << i
        if cand.bit_count() <= best[0]:
            continue
        found = max_independent_set(masks, cand)
        if found.bit_count() > best[0]:
            best = (found.bit_count(), tuple(_bits(found)))
    return best


def is_independent(g: VisibilityGraph, indices) -> bool:
    idx = list(indices)
    return all(not g.visible(i, j) for i, j in combinations(idx, 2))


def longest_induced_path_atmost(g: VisibilityGraph, k: int, max_nodes: int | None = None):
    """Longest induced path (vertex count), stopping as soon as ``k`` is reached.

    Depth-first over ordered starts; a vertex may extend the path only if it is
    adjacent to the current end and to no earlier path vertex.  Raises
    :class:`SearchExhausted` when ``max_nodes`` is exceeded.
    """
    if k < 1:
        raise ValueError("bound k must be >= 1")
    if g.n == 0:
        return 0, None
    masks = g.masks
    best_len, best_path = 1, [0]
    nodes = 0

    def extend(path, blocked):
        # blocked: the path plus every neighbour of a non-final path vertex
        nonlocal best_len, best_path, nodes
        nodes += 1
        if max_nodes is not None and nodes > max_nodes:
            raise SearchExhausted(f"induced-path search exceeded {max_nodes} nodes")
        if len(path) > best_len:
            best_len, best_path = len(path), list(path)
        if best_len >= k:
            return True
        last = path[-1]
        for v in _bits(masks[last] & ~blocked):
            path.append(v)
            if extend(path, blocked | masks[last] | (1 << v)):
                return True
            path.pop()
        return False

    for s in range(g.n):
        if extend([s], 1 << s):
            break
    return min(best_len, k), best_path[:k]
