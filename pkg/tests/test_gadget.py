from fractions import Fraction
from itertools import combinations

import pytest

from polypart.formula import Formula, normalize_formula
from polypart.gadget import (CLAUSE_Y, EXTRA_Y, BLOCK_Y, VAR_Y, GadgetError, MalformedPartition, PartialGrid,
                             audit_gadget, bit_bound, build_gadget, build_partition_from_assignment,
                             coordinate_bits, extend_gadget, extract_assignment, gadget_params,
                             partial_grid_min_blockers)
from polypart.oracle import OracleBudget, brute_force_clique_partition, brute_force_sat, cnf_satisfied
from polypart.visibility import build_pvg

TWO_BY_TWO = Formula(2, ((1, -1), (2, -2)))
UNSAT = Formula(2, ((1,), (2, -2), (-1,)))
THREE_OCC = Formula(3, ((1, -1, 2), (3, -3), (1, 2, -2)))
BUDGET = OracleBudget(max_points=10**6, max_nodes=5_000_000)


@pytest.fixture(scope="module")
def small():
    g = build_gadget(TWO_BY_TWO)
    return g, build_pvg(g.points)


@pytest.fixture(scope="module")
def three():
    g = build_gadget(THREE_OCC)
    return g, build_pvg(g.points)


class TestParams:
    def test_closed_forms(self):
        p = gadget_params(TWO_BY_TWO)
        assert (p.n1, p.n2, p.n, p.m) == (2, 0, 2, 2)
        assert p.v == 7
        assert p.b_n == 4
        assert (p.e, p.b, p.c) == (15, 16, 5)

    def test_closed_forms_are_not_a_multiple_of_five(self):
        # taken literally these counts describe 49 points
        p = gadget_params(TWO_BY_TWO)
        assert p.m + p.e + p.b + p.b_n + p.v + p.c == 49

    def test_built_counts_are_consistent(self, small):
        g, _ = small
        p = g.params
        assert p.v == gadget_params(TWO_BY_TWO).v
        assert p.e == p.b_n + 2 * p.v - 5 * p.m - 1
        assert p.b == p.e + p.m - 1
        assert p.c == 2 * (p.b_n - p.m - 1)
        assert len(g.points) == 5 * (p.b_n + p.v - 2 * p.m - 1)


class TestLayout:
    def test_lines(self, small):
        g, _ = small
        heights = {"clause": CLAUSE_Y, "padding": CLAUSE_Y, "extra": EXTRA_Y, "blocking": BLOCK_Y,
                   "variable": VAR_Y, "variable_blocker": VAR_Y}
        for i, role in enumerate(g.roles):
            assert g.points[i].y == heights[role]

    def test_clause_points_unit_spaced(self, small):
        g, _ = small
        xs = sorted(g.points[i].x for i in g.indices("clause"))
        assert all(b - a == 1 for a, b in zip(xs, xs[1:]))

    def test_size_divisible_by_five(self, small, three):
        for g, _ in (small, three):
            assert len(g.points) % 5 == 0

    def test_role_counts(self, small):
        g, _ = small
        c, p = g.role_counts(), g.params
        assert c["clause"] == p.m and c["extra"] == p.e and c["padding"] == p.c
        assert c["blocking"] == p.b + p.b_n
        assert c["variable"] + c["variable_blocker"] == p.v

    def test_roles_sidecar(self, small):
        g, _ = small
        lines = g.dumps_roles().splitlines()
        assert len(lines) == len(g.points)
        bound = [l for l in lines if len(l.split()) > 2]
        assert len(bound) == len(g.bindings)

    def test_unnormalized_rejected(self):
        with pytest.raises(GadgetError):
            build_gadget(Formula(2, ((1, 2), (-1, -2))))

    def test_only_k5(self):
        with pytest.raises(ValueError):
            build_gadget(TWO_BY_TWO, k=6)


class TestAudit:
    def test_small_passes(self, small):
        g, pvg = small
        rep = audit_gadget(g, pvg)
        assert rep.ok, rep.failures()

    def test_clause_points_see_no_extra_point(self, three):
        g, pvg = three
        for c in g.indices("clause"):
            for x in g.indices("extra"):
                assert not pvg.visible(c, x)

    def test_variable_points_see_their_clauses(self, three):
        g, pvg = three
        clauses = g.indices("clause")
        for i, binds in g.bindings.items():
            want = {clauses[cl] for _, _, cl in binds}
            assert {c for c in clauses if pvg.visible(i, c)} == want

    def test_bit_length(self, three):
        g, _ = three
        assert coordinate_bits(g.points) <= bit_bound(g.params.m, g.params.n)


class TestPartitions:
    def test_construct_and_extract(self, small):
        g, pvg = small
        a = brute_force_sat(TWO_BY_TWO)
        groups = build_partition_from_assignment(g, a, pvg)
        assert sorted(i for grp in groups for i in grp) == list(range(len(g.points)))
        for grp in groups:
            assert len(grp) == 5
            assert all(pvg.visible(x, y) for x, y in combinations(grp, 2))
        back = extract_assignment(g, groups)
        assert cnf_satisfied(TWO_BY_TWO.clauses, back)

    def test_every_satisfying_assignment(self, three):
        g, pvg = three
        for bits in range(8):
            a = {v: bits >> (v - 1) & 1 for v in (1, 2, 3)}
            if not cnf_satisfied(THREE_OCC.clauses, a):
                with pytest.raises(ValueError):
                    build_partition_from_assignment(g, a, pvg)
                continue
            groups = build_partition_from_assignment(g, a, pvg)
            assert cnf_satisfied(THREE_OCC.clauses, extract_assignment(g, groups))

    def test_unsatisfiable_has_no_partition(self):
        g = build_gadget(UNSAT)
        assert brute_force_sat(UNSAT) is None
        assert brute_force_clique_partition(g.points, 5, BUDGET) is None

    def test_satisfiable_oracle_partition_extracts(self, small):
        g, pvg = small
        groups = brute_force_clique_partition(g.points, 5, BUDGET, graph=pvg)
        assert groups is not None
        assert cnf_satisfied(TWO_BY_TWO.clauses, extract_assignment(g, groups))

    def test_clause_point_without_literal_pair(self, small):
        g, pvg = small
        groups = [list(grp) for grp in build_partition_from_assignment(g, brute_force_sat(TWO_BY_TWO), pvg)]
        cp = g.indices("clause")[0]
        blockers = g.indices("blocking")[:4]
        # regroup the clause point with blocking points only
        mangled = [[cp] + blockers] + [[i for i in grp if i != cp and i not in blockers] for grp in groups]
        with pytest.raises(MalformedPartition):
            extract_assignment(g, mangled)

    def test_two_clause_points_in_one_group(self, small):
        g, _ = small
        with pytest.raises(MalformedPartition):
            extract_assignment(g, [g.indices("clause")])


class TestPartialGrid:
    def test_single_pair(self):
        count, grid = partial_grid_min_blockers(1, 1)
        assert count == 1 and grid.visible_pairs() == []

    @pytest.mark.parametrize("p,q", [(2, 2), (3, 4), (1, 5), (8, 8)])
    def test_every_crossing_needs_its_own_point(self, p, q):
        count, grid = partial_grid_min_blockers(p, q)
        assert count == p + q - 1
        assert grid.visible_pairs() == []
        for drop in range(count):
            fewer = PartialGrid(p, q, grid.mid[:drop] + grid.mid[drop + 1:])
            assert fewer.visible_pairs()

    def test_half_as_many_points_leave_pairs_visible(self):
        # two mid points at 0 and 1/2 leave the pair (1, 1) -> crossing at x = 1
        assert PartialGrid(2, 2, (Fraction(0), Fraction(1, 2))).visible_pairs() == [(1, 1)]

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            partial_grid_min_blockers(0, 3)


class TestExtensions:
    def test_k7_adds_one_fully_visible_row(self, small):
        g, _ = small
        e = extend_gadget(g, 7)
        y = len(g.points) // 5
        assert e.role_counts()["auxiliary"] == 2 * y
        assert len(e.points) % 7 == 0
        rep = audit_gadget(e)
        assert rep.ok, rep.failures()

    def test_k6_parity_layout(self, small):
        g, _ = small
        e = extend_gadget(g, 6)
        p = e.params
        assert 2 * p.b == p.m + p.e
        assert len(e.points) % 6 == 0
        pvg = build_pvg(e.points)
        clauses, extras = e.indices("clause"), sorted(e.indices("extra"), key=lambda i: e.points[i].x)
        for c in clauses:
            for x, y in zip(extras, extras[1:]):
                assert not (pvg.visible(c, x) and pvg.visible(c, y))
        assert audit_gadget(e, pvg).ok

    def test_k8(self, small):
        g, _ = small
        e = extend_gadget(g, 8)
        assert len(e.points) % 8 == 0 and audit_gadget(e).ok

    def test_small_k_rejected(self, small):
        g, _ = small
        with pytest.raises(ValueError):
            extend_gadget(g, 5)


def test_normalized_random_formula_round_trip():
    f = normalize_formula(Formula(3, ((1, 2), (-1, 3), (-2, -3))))
    g = build_gadget(f)
    a = brute_force_sat(f)
    groups = build_partition_from_assignment(g, a)
    back = extract_assignment(g, groups)
    assert cnf_satisfied(f.clauses, back)
    assert cnf_satisfied(((1, 2), (-1, 3), (-2, -3)), f.restore_assignment(back))
