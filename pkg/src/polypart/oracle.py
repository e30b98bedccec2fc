"""Exhaustive ground-truth solvers for small instances.

These are deliberately naive: they enumerate rather than reason, so they can
be trusted to judge the constructive algorithms.  Every search runs under an
:class:`OracleBudget` and raises :class:`Exhausted` instead of guessing.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations

from .geometry import PointSet, convex_hull, convex_polygons_disjoint, cross, point_in_hull, polygon_order
from .visibility import build_pvg


class Exhausted(RuntimeError):
    """The search budget ran out before the answer was proven."""


@dataclass(frozen=True)
class OracleBudget:
    max_points: int = 16
    max_nodes: int = 5_000_000

    def __post_init__(self):
        if self.max_points <= 0 or self.max_nodes <= 0:
            raise ValueError("budget limits must be positive")


class _Counter:
    def __init__(self, budget: OracleBudget):
        self.limit = budget.max_nodes
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.nodes > self.limit:
            raise Exhausted(f"search exceeded {self.limit} nodes")


def brute_force_cycle_partition(ps: PointSet, spec, budget: OracleBudget = OracleBudget()):
    """First disjoint cycle partition found by exhaustive search, or ``None``.

    Groups are built anchored at the smallest unassigned index; a group is
    admissible when its points are not all collinear and its hull is disjoint
    from the hulls of the groups already chosen.  Returns a list of index
    lists, each in simple-polygon order.
    """
    sizes = sorted(spec)
    n = len(ps)
    if sum(sizes) != n:
        raise ValueError(f"spec total {sum(sizes)} != {n} points")
    if n > budget.max_points:
        raise Exhausted(f"{n} points exceeds budget of {budget.max_points}")
    if any(s < 3 for s in sizes):
        raise ValueError("cycle sizes must be >= 3")
    pts = ps.grid
    counter = _Counter(budget)
    hull_cache: dict = {}

    def hull_of(group):
        # None marks an unusable group: flat, or its hull swallows a foreign point
        if group in hull_cache:
            return hull_cache[group]
        hull = convex_hull(pts, group)
        h = None
        if len(hull.vertex_indices) >= 3:
            inside = set(group)
            if not any(point_in_hull(pts, hull, pts[i]) for i in range(n) if i not in inside):
                h = [pts[i] for i in hull.vertex_indices]
        hull_cache[group] = h
        return h

    chosen: list = []

    def search(free: tuple, remaining: Counter):
        counter.tick()
        if not free:
            return True
        anchor, rest = free[0], free[1:]
        for size in sorted(remaining):
            left = remaining.copy()
            left[size] -= 1
            if not left[size]:
                del left[size]
            for others in combinations(rest, size - 1):
                group = (anchor, *others)
                h = hull_of(group)
                if h is None:
                    continue
                if not all(convex_polygons_disjoint(h, hull_of(g)) for g in chosen):
                    continue
                chosen.append(group)
                if search(tuple(i for i in rest if i not in others), left):
                    return True
                chosen.pop()
        return False

    if not search(tuple(range(n)), Counter(sizes)):
        return None
    out = []
    for group in chosen:
        order = polygon_order([pts[i] for i in group])
        out.append([group[i] for i in order])
    return out


def brute_force_clique_partition(ps: PointSet, k: int, budget: OracleBudget = OracleBudget(),
                                 graph=None):
    """Partition into ``k``-sets of pairwise visible points, or ``None``.

    Exact cover over the k-cliques of the visibility graph.  Each node
    branches on the uncovered point with the fewest cliques among uncovered
    points; cliques are enumerated lazily with a cap at the best count so far,
    so dense points are never fully expanded.

    Two sound prunes: a group holds at most one point of any independent set,
    so a greedy independent set larger than the number of groups still to
    form refutes the node; refuted point sets are remembered.
    """
    n = len(ps)
    if k < 1 or n % k:
        raise ValueError(f"{n} points cannot be split into groups of {k}")
    if n > budget.max_points:
        raise Exhausted(f"{n} points exceeds budget of {budget.max_points}")
    g = graph if graph is not None else build_pvg(ps)
    masks = g.masks
    counter = _Counter(budget)

    def cliques_with(v, free):
        """Lazily yield the k-cliques through ``v`` inside ``free``."""
        def grow(clique, cand, need):
            if need == 0:
                yield clique
                return
            while cand:
                if cand.bit_count() < need:
                    return
                low = cand & -cand
                cand ^= low
                counter.tick()
                yield from grow(clique | low, cand & masks[low.bit_length() - 1], need - 1)

        return grow(1 << v, masks[v] & free, k - 1)

    def count_upto(v, free, cap):
        c = 0
        for _ in cliques_with(v, free):
            c += 1
            if c > cap:
                break
        return c

    def independent_bound(free):
        size, cand = 0, free
        while cand:
            best_v, best_d = -1, None
            x = cand
            while x:
                low = x & -x
                v = low.bit_length() - 1
                x ^= low
                d = (masks[v] & cand).bit_count()
                if best_d is None or d < best_d:
                    best_v, best_d = v, d
                    if d == 0:
                        break
            size += 1
            cand &= ~masks[best_v] & ~(1 << best_v)
        return size

    solution = []
    failed = set()

    def search(free: int) -> bool:
        counter.tick()
        if not free:
            return True
        if free in failed:
            return False
        if independent_bound(free) > free.bit_count() // k:
            failed.add(free)
            return False
        verts = []
        x = free
        while x:
            low = x & -x
            v = low.bit_length() - 1
            x ^= low
            deg = (masks[v] & free).bit_count()
            if deg < k - 1:
                failed.add(free)
                return False
            verts.append((deg, v))
        verts.sort()
        # branching point: fewest cliques, counted only up to a small cap
        best_v, best_c = verts[0][1], None
        for _, v in verts:
            c = count_upto(v, free, 8 if best_c is None else min(8, best_c - 1))
            if c == 0:
                failed.add(free)
                return False
            if best_c is None or c < best_c:
                best_v, best_c = v, c
                if c == 1:
                    break
        for c in cliques_with(best_v, free):
            solution.append(c)
            if search(free & ~c):
                return True
            solution.pop()
        failed.add(free)
        return False

    if not search((1 << n) - 1):
        return None
    return [[i for i in range(n) if c >> i & 1] for c in solution]


def brute_force_mis(ps: PointSet, budget: OracleBudget = OracleBudget()):
    """Maximum independent set of the visibility graph by plain branching."""
    n = len(ps)
    if n > budget.max_points:
        raise Exhausted(f"{n} points exceeds budget of {budget.max_points}")
    g = build_pvg(ps)
    masks = g.masks
    counter = _Counter(budget)
    best = [0, 0]

    def search(cand: int, chosen: int, size: int):
        counter.tick()
        if size + cand.bit_count() <= best[0]:
            return
        if not cand:
            best[:] = [size, chosen]
            return
        v = cand.bit_length() - 1
        search(cand & ~masks[v] & ~(1 << v), chosen | (1 << v), size + 1)
        search(cand & ~(1 << v), chosen, size)

    search((1 << n) - 1, 0, 0)
    return best[0], tuple(i for i in range(n) if best[1] >> i & 1)


SAT_VAR_CAP = 24


def brute_force_sat(formula):
    """First satisfying assignment in lexicographic order (x1 most significant).

    ``formula`` is anything with ``num_vars`` and ``clauses`` (lists of signed
    ints).  Returns a dict ``{var: 0 or 1}`` or ``None``.
    """
    n = formula.num_vars
    if n > SAT_VAR_CAP:
        raise ValueError(f"{n} variables exceeds the cap of {SAT_VAR_CAP}")
    clauses = [tuple(c) for c in formula.clauses]
    values = [None] * (n + 1)

    def falsified(c):
        return all(values[abs(l)] is not None and values[abs(l)] != (l > 0) for l in c)

    watch = [[] for _ in range(n + 1)]
    for c in clauses:
        if not c:
            return None
        for l in c:
            watch[abs(l)].append(c)

    def assign(v: int) -> bool:
        if v > n:
            return True
        for bit in (False, True):
            values[v] = bit
            if not any(falsified(c) for c in watch[v]) and assign(v + 1):
                return True
        values[v] = None
        return False

    if not assign(1):
        return None
    return {v: int(values[v]) for v in range(1, n + 1)}


def cnf_satisfied(clauses, assignment) -> bool:
    return all(any(assignment.get(abs(l), 0) == (l > 0) for l in c) for c in clauses)


def collinear(coords) -> bool:
    return all(cross(coords[0], coords[1], c) == 0 for c in coords[2:])
