"""Point sets whose K5-partitions encode 3-occurrence SAT.

Layout (all lines horizontal):

* clause line ``y = 0``: one point per clause at x = 0, 1, ..., then padding
  far to the right;
* blocking line ``y = -1``: a half-unit row of regular blockers from x = 0
  that hides every clause point from every extra point, plus one blocker per
  sightline that has to be cut;
* variable line ``y = -3/2``: three or four points per variable (one per
  literal pair boundary), separated by variable blockers;
* extra line ``y = -2``: unit-spaced filler points.

A clause point sees exactly the variable points of its literals, so a K5
through it must be the clause point, two consecutive blockers and the two
variable points of one literal.  Overlapping literal pairs of a variable keep
the choices consistent.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .formula import Formula
from .geometry import Point, PointSet
from .visibility import build_pvg

ROLES = ("clause", "extra", "blocking", "variable", "variable_blocker", "padding", "auxiliary")

CLAUSE_Y = Fraction(0)
BLOCK_Y = Fraction(-1)
VAR_Y = Fraction(-3, 2)
EXTRA_Y = Fraction(-2)

# coordinate bit-length bound: BITS_SCALE * log2(m*n + 2) + BITS_OFFSET
BITS_SCALE = 4
BITS_OFFSET = 16


class GadgetError(RuntimeError):
    """Construction or audit failure."""


class MalformedPartition(ValueError):
    """A supposed K5-partition does not have the shape the gadget forces."""


@dataclass(frozen=True)
class GadgetParams:
    v: int
    b_n: int
    e: int
    b: int
    c: int
    m: int
    n: int
    n1: int
    n2: int


def gadget_params(f: Formula) -> GadgetParams:
    """The closed-form counts of the construction, taken literally.

    These do not always describe a consistent point set (the total need not
    be a multiple of 5); :func:`build_gadget` derives its own counts and
    stores them on the gadget.
    """
    n1, n2, n, m = f.n1, f.n2, f.num_vars, f.m
    v = 3 * n1 + 4 * n2 + n - 1
    b_n = 3 * m * n + m * n2 - 3 * n - n1
    e = b_n + 2 * v - m - 1
    return GadgetParams(v=v, b_n=b_n, e=e, b=e + m - 1, c=e + 2 * m - 2 * v,
                        m=m, n=n, n1=n1, n2=n2)


@dataclass(frozen=True)
class LiteralPair:
    var: int
    sign: int       # +1 or -1
    clause: int     # 0-based clause index
    points: tuple   # two adjacent variable-line point indices


@dataclass(frozen=True)
class Gadget:
    points: PointSet
    roles: tuple
    bindings: dict          # variable point -> ((var, sign, clause), ...)
    params: GadgetParams
    formula: Formula
    pairs: tuple = ()
    cuts: dict = field(default_factory=dict)   # blocker -> (a, b) pair it hides
    k: int = 5

    def indices(self, role: str) -> list:
        return [i for i, r in enumerate(self.roles) if r == role]

    def role_counts(self) -> Counter:
        return Counter(self.roles)

    def dumps_roles(self) -> str:
        """Sidecar role map: ``index role [var sign clause]`` per line."""
        lines = []
        for i, r in enumerate(self.roles):
            extra = ""
            for var, sign, clause in self.bindings.get(i, ()):
                extra += f" {var} {'+' if sign > 0 else '-'} {clause + 1}"
            lines.append(f"{i} {r}{extra}")
        return "\n".join(lines) + "\n"


def _variable_slots(f: Formula):
    """Variable-line slots left to right as (role, var, visible clauses), plus
    literal pairs as (var, sign, clause, (slot, slot))."""
    occ = {v: [] for v in range(1, f.num_vars + 1)}
    for ci, clause in enumerate(f.clauses):
        for lit in clause:
            occ[abs(lit)].append((ci, 1 if lit > 0 else -1))
    slots, pairs = [], []
    for var in range(1, f.num_vars + 1):
        if var > 1:
            slots.append(("variable_blocker", None, frozenset()))
        pos = [c for c, s in occ[var] if s > 0]
        neg = [c for c, s in occ[var] if s < 0]
        base = len(slots)
        if len(occ[var]) == 2:
            p, q = pos[0], neg[0]
            slots += [("variable", var, frozenset(s)) for s in ({p}, {p, q}, {q})]
            pairs += [(var, 1, p, (base, base + 1)), (var, -1, q, (base + 1, base + 2))]
        elif len(occ[var]) == 3:
            major, minor, sgn = (pos, neg, 1) if len(pos) == 2 else (neg, pos, -1)
            j, k = major
            l = minor[0]
            slots += [("variable", var, frozenset(s)) for s in ({j}, {j, l}, {k, l}, {k})]
            pairs += [(var, sgn, j, (base, base + 1)), (var, -sgn, l, (base + 1, base + 2)),
                      (var, sgn, k, (base + 2, base + 3))]
        else:
            raise GadgetError(f"variable {var} occurs {len(occ[var])} times; normalize first")
    return slots, pairs


def _scan(s: int):
    # interior sub-interval endpoints first, the integer point last
    return list(range(1, s)) + [0]


def _place_variable_line(m, slots, start, blockers: set, extras: int, s: int):
    """Choose x for every slot in ``[start + i, start + i + 1)`` on a 1/s grid.

    A position is accepted when its cut blockers land on fresh spots, none of
    the required clause sightlines (old or new) is blocked, and no variable
    line point sits between a blocker and an extra point.
    Returns (xs, cuts) with cuts as (blocker x, clause, slot).
    """
    required = set()
    xs, cuts = [], []
    for slot, (_, _, vis) in enumerate(slots):
        for t in _scan(s):
            xu = start + slot + Fraction(t, s)
            new = [((c + 2 * xu) / 3, c) for c in range(m) if c not in vis]
            need = [(c + 2 * xu) / 3 for c in vis]
            new_x = {x for x, _ in new}
            if new_x & blockers or new_x & required or any(x in blockers for x in need):
                continue
            if any(2 * xu - xe in blockers or 2 * xu - xe in new_x for xe in range(extras)):
                continue
            hit = False
            for x in new_x:
                for w in xs + [xu]:
                    d = 2 * w - x
                    if d.denominator == 1 and 0 <= d < extras:
                        hit = True
                        break
                if hit:
                    break
            if hit:
                continue
            break
        else:
            raise GadgetError(f"no admissible position for variable-line slot {slot} on a 1/{s} grid")
        xs.append(xu)
        required.update(need)
        blockers |= new_x
        cuts.extend((x, c, slot) for x, c in new)
    return xs, cuts


@dataclass
class _Layout:
    m: int
    e: int
    regular: list           # regular blocker x's
    dummies: list
    slots: list
    pairs: list
    xs: list = field(default_factory=list)
    cuts: list = field(default_factory=list)     # (x, clause, slot)
    pad_cuts: list = field(default_factory=list)  # (x, slot)
    pads: list = field(default_factory=list)


def _counts(f: Formula, even: bool):
    """Blocker, extra, regular and padding counts for the k=5 or k=6 layout."""
    m = f.m
    slots, pairs = _variable_slots(f)
    v = len(slots)
    last = m - 1
    cut_count = sum(m - len(vis) for _, _, vis in slots)
    pad_cut = sum(1 for _, _, vis in slots if last in vis)
    b_n = cut_count + pad_cut
    if not even:
        # e = b_n + 2v - 5m - 1 extras, c = 2(b_n - m - 1) padding
        dummies = max(0, m + 1 - b_n, 5 * m + 2 - b_n - 2 * v)
        b_n += dummies
        e = b_n + 2 * v - 5 * m - 1
        b = e + m - 1
        c = 2 * e - 4 * v + 8 * m
    else:
        dummies = max(0, v - m - b_n, (m + 1) // 2 - b_n)
        b_n += dummies
        e = 2 * b_n - m
        b = b_n
        c = 2 * b_n - v
    return slots, pairs, dict(v=v, b_n=b_n, e=e, b=b, c=c, dummies=dummies)


def _subdivision(f: Formula) -> int:
    return max(8, 4 * f.m * max(1, f.num_vars))


def _layout(f: Formula, even: bool, s: int) -> tuple[_Layout, dict]:
    slots, pairs, cnt = _counts(f, even)
    m, e, b = f.m, cnt["e"], cnt["b"]
    step = Fraction(1) if even else Fraction(1, 2)
    regular = [h * step for h in range(b)]
    dummies = [-(h + 1) * step for h in range(cnt["dummies"])]
    lay = _Layout(m, e, regular, dummies, slots, pairs)
    blockers = set(regular) | set(dummies)
    lay.xs, lay.cuts = _place_variable_line(m, slots, e, blockers, e, s)
    return lay, cnt


def _next_prime(x: int) -> int:
    x = max(2, x)
    while any(x % d == 0 for d in range(2, math.isqrt(x) + 1)):
        x += 1
    return x


def _pad_positions(lay: _Layout, c: int, attempt: int, s: int):
    """Padding far right with spacing 1 + 1/p.

    With p prime and larger than both c and the subdivision, j * spacing is
    never twice a difference of variable x's, so no padding sightline runs
    through a blocker that cuts the first padding point.
    """
    right = max([Fraction(lay.e)] + lay.xs + [Fraction(lay.m)])
    x0 = 8 * (math.floor(right) + 1) + attempt
    gap = 1 + Fraction(1, _next_prime(max(c, 3 * s) + 1 + attempt))
    pads = [Fraction(x0 + j * gap) for j in range(c)]
    cuts = [((x0 + 2 * lay.xs[slot]) / 3, slot) for slot, (_, _, vis) in enumerate(lay.slots)
            if lay.m - 1 in vis]
    return pads, cuts


def _assemble(f: Formula, lay: _Layout, cnt: dict, k: int) -> Gadget:
    coords, roles = [], []
    bindings, cuts = {}, {}

    def add(x, y, role):
        coords.append(Point(Fraction(x), Fraction(y)))
        roles.append(role)
        return len(coords) - 1

    clause_idx = [add(i, CLAUSE_Y, "clause") for i in range(lay.m)]
    for j in range(lay.e):
        add(j, EXTRA_Y, "extra")
    for x in lay.dummies + lay.regular:
        add(x, BLOCK_Y, "blocking")
    slot_idx = [add(x, VAR_Y, role) for x, (role, _, _) in zip(lay.xs, lay.slots)]
    pad_idx = [add(x, CLAUSE_Y, "padding") for x in lay.pads]
    for x, clause, slot in lay.cuts:
        cuts[add(x, BLOCK_Y, "blocking")] = (clause_idx[clause], slot_idx[slot])
    for x, slot in lay.pad_cuts:
        target = pad_idx[0] if pad_idx else -1
        cuts[add(x, BLOCK_Y, "blocking")] = (target, slot_idx[slot])
    pairs = []
    for var, sign, clause, (a, b) in lay.pairs:
        lp = LiteralPair(var, sign, clause, (slot_idx[a], slot_idx[b]))
        pairs.append(lp)
        for i in lp.points:
            bindings.setdefault(i, ())
            bindings[i] += ((var, sign, clause),)
    params = GadgetParams(v=cnt["v"], b_n=cnt["b_n"], e=cnt["e"], b=cnt["b"], c=cnt["c"],
                          m=f.m, n=f.num_vars, n1=f.n1, n2=f.n2)
    return Gadget(PointSet(coords), tuple(roles), bindings, params, f, tuple(pairs), cuts, k)


def _construct(f: Formula, even: bool, k: int, audit: bool = True) -> Gadget:
    if not f.is_normalized():
        raise GadgetError("formula is not normalized (see normalize_formula)")
    s = _subdivision(f)
    lay, cnt = None, None
    for scale in (1, 2, 4):
        try:
            lay, cnt = _layout(f, even, s * scale)
            s *= scale
            break
        except GadgetError:
            continue
    if lay is None:
        raise GadgetError("variable-line perturbation failed on every subdivision tried")
    last_report = None
    for attempt in range(12):
        lay.pads, lay.pad_cuts = _pad_positions(lay, cnt["c"], attempt, s)
        g = _assemble(f, lay, cnt, k)
        if not audit:
            return g
        last_report = audit_gadget(g)
        if last_report.ok:
            return g
    raise GadgetError(f"gadget audit failed: {last_report.failures()}")


def build_gadget(f: Formula, k: int = 5, audit: bool = True) -> Gadget:
    """Point gadget for a normalized formula; K5-partitionable iff satisfiable."""
    if k != 5:
        raise ValueError("build_gadget builds the k=5 gadget; use extend_gadget for k >= 6")
    return _construct(f, even=False, k=5, audit=audit)


# ---------------------------------------------------------------- audit


@dataclass
class AuditReport:
    checks: list = field(default_factory=list)     # (name, ok, detail)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def add(self, name, ok, detail=""):
        self.checks.append((name, bool(ok), detail))

    def failures(self) -> list:
        return [(n, d) for n, ok, d in self.checks if not ok]

    def lines(self) -> list:
        return [f"{'pass' if ok else 'FAIL'} {name}" + (f": {d}" if d else "") for name, ok, d in self.checks]


def coordinate_bits(ps: PointSet) -> int:
    return max((max(abs(c.numerator).bit_length(), c.denominator.bit_length())
                for p in ps for c in p), default=0)


def bit_bound(m: int, n: int) -> int:
    return BITS_SCALE * math.ceil(math.log2(m * n + 2)) + BITS_OFFSET


def audit_gadget(g: Gadget, graph=None) -> AuditReport:
    """Exact visibility audit of every structural property the reduction uses."""
    rep = AuditReport()
    pvg = graph if graph is not None else build_pvg(g.points)
    adj = pvg.adjacency
    counts = g.role_counts()
    p = g.params
    base = 6 if g.k % 2 == 0 else 5
    want = {"clause": p.m, "extra": p.e, "blocking": p.b + p.b_n,
            "padding": p.c}
    got = {r: counts.get(r, 0) for r in want}
    got_v = counts.get("variable", 0) + counts.get("variable_blocker", 0)
    rep.add("role counts", got == want and got_v == p.v and counts.get("variable_blocker", 0) == max(0, p.n - 1),
            f"{dict(counts)} vs {want}, v={p.v}")
    core = len(g.points) - counts.get("auxiliary", 0)
    rep.add(f"size divisible by {base}", core % base == 0, f"{core} points")
    if g.k > base:
        rep.add(f"size divisible by {g.k}", len(g.points) % g.k == 0, f"{len(g.points)} points")
    clauses, extras = g.indices("clause"), g.indices("extra")
    pts = g.points
    if g.k % 2 == 0:
        seen = [(c, x) for c in clauses for x in extras
                if x in adj[c] and (pts[c].x - pts[x].x) % 2 == 0]
        rep.add("no clause point sees an extra point of equal x parity", not seen,
                f"{len(seen)} visible pairs" if seen else "")
    else:
        seen = [(c, x) for c in clauses for x in extras if x in adj[c]]
        rep.add("no clause point sees an extra point", not seen, f"{len(seen)} visible pairs" if seen else "")
    if g.k % 2 == 0:
        bad = [c for c in clauses for x in extras
               if x + 1 in extras and x in adj[c] and x + 1 in adj[c]]
        rep.add("no clause point sees two consecutive extra points", not bad)
    expect = {i: {clauses[cl] for _, _, cl in b} for i, b in g.bindings.items()}
    wrong = []
    for i in g.indices("variable") + g.indices("variable_blocker"):
        sees = {c for c in clauses if c in adj[i]}
        if sees != expect.get(i, set()):
            wrong.append(i)
    rep.add("variable points see exactly their clauses", not wrong, f"points {wrong[:5]}" if wrong else "")
    blockers = g.indices("blocking")
    hidden = [(b, x) for b in blockers for x in extras if x not in adj[b]]
    rep.add("blocking points see every extra point", not hidden, f"{len(hidden)} hidden" if hidden else "")
    pads = g.indices("padding")
    cut = {frozenset(v) for v in g.cuts.values()}
    others = [i for i, r in enumerate(g.roles) if r not in ("clause", "padding")]
    pad_bad = [(q, i) for q in pads for i in others
               if (i in adj[q]) == (frozenset((q, i)) in cut)]
    rep.add("padding sees all off-line points except the cut ones", not pad_bad,
            f"{pad_bad[:3]}" if pad_bad else "")
    stray = [b for b, (a, t) in g.cuts.items() if a >= 0 and pvg.blocker(a, t) is None]
    rep.add("every cut sightline is blocked", not stray, f"{stray[:5]}" if stray else "")
    aux = g.indices("auxiliary")
    if aux:
        n = len(g.points)
        missing = [i for i in aux if len(adj[i]) != n - 1]
        rep.add("auxiliary points see every point", not missing, f"{len(missing)} not fully visible" if missing else "")
    bits, bound = coordinate_bits(g.points), bit_bound(p.m, p.n)
    rep.add("coordinate bit-length", bits <= bound, f"{bits} <= {bound}")
    return rep


# ---------------------------------------------------------- partitions


def _is_clique(adj, group) -> bool:
    return all(b in adj[a] for i, a in enumerate(group) for b in group[i + 1:])


def build_partition_from_assignment(g: Gadget, assignment: dict, graph=None) -> list:
    """K5-partition following a satisfying assignment, leftmost points first."""
    if g.k != 5:
        raise ValueError("only the k=5 gadget has a constructive partition here")
    f = g.formula
    val = {v: int(assignment.get(v, 0)) for v in range(1, f.num_vars + 1)}
    for ci, clause in enumerate(f.clauses):
        if not any(val[abs(l)] == (l > 0) for l in clause):
            raise ValueError(f"assignment does not satisfy clause {ci + 1}")
    pts = g.points
    by_x = lambda i: pts[i].x
    blockers = sorted(g.indices("blocking"), key=by_x)
    extras = sorted(g.indices("extra"), key=by_x)
    pads = sorted(g.indices("padding"), key=by_x)
    varline = sorted(g.indices("variable") + g.indices("variable_blocker"), key=by_x)
    clauses = sorted(g.indices("clause"), key=by_x)
    groups, used = [], set()
    bi = 0
    for ci, cp in enumerate(clauses):
        pick = next(lp for lp in g.pairs
                    if lp.clause == ci and val[lp.var] == (lp.sign > 0) and not used & set(lp.points))
        used |= set(pick.points)
        groups.append([cp, blockers[bi], blockers[bi + 1], *pick.points])
        bi += 2
    rest_var = [i for i in varline if i not in used]
    p = g.params
    assert len(rest_var) == p.v - 2 * p.m
    assert len(blockers) - bi == p.b + p.b_n - 2 * p.m
    ei = 0
    for u in rest_var:
        groups.append([u, blockers[bi], blockers[bi + 1], extras[ei], extras[ei + 1]])
        bi += 2
        ei += 2
    pi = 0
    for x in extras[ei:]:
        groups.append([x, blockers[bi], blockers[bi + 1], pads[pi], pads[pi + 1]])
        bi += 2
        pi += 2
    assert bi == len(blockers) and pi == len(pads), "points left over after the last phase"
    adj = (graph if graph is not None else build_pvg(pts)).adjacency
    for grp in groups:
        if not _is_clique(adj, grp):
            raise GadgetError(f"constructed group {grp} is not a clique")
    return groups


def extract_assignment(g: Gadget, partition) -> dict:
    """Read the truth values off the literal pairs the clause points took."""
    clause_of = {i: k for k, i in enumerate(g.indices("clause"))}
    pair_of = {(lp.clause, frozenset(lp.points)): lp for lp in g.pairs}
    val = {}
    for grp in partition:
        cps = [i for i in grp if i in clause_of]
        if not cps:
            continue
        if len(cps) > 1:
            raise MalformedPartition(f"group {sorted(grp)} holds {len(cps)} clause points")
        ci = clause_of[cps[0]]
        var_pts = frozenset(i for i in grp if i in g.bindings)
        lp = pair_of.get((ci, var_pts))
        if lp is None:
            raise MalformedPartition(f"clause point {cps[0]} is not grouped with one of its literal pairs")
        want = int(lp.sign > 0)
        if val.get(lp.var, want) != want:
            raise MalformedPartition(f"variable {lp.var} taken with both signs")
        val[lp.var] = want
    return {v: val.get(v, 0) for v in range(1, g.formula.num_vars + 1)}


# ----------------------------------------------------------- partial grid


@dataclass(frozen=True)
class PartialGrid:
    p: int
    q: int
    mid: tuple      # x positions on y = 0

    def point_set(self) -> PointSet:
        pts = [Point(Fraction(x), Fraction(1)) for x in range(self.p)]
        pts += [Point(Fraction(x), Fraction(-1)) for x in range(self.q)]
        pts += [Point(Fraction(x), Fraction(0)) for x in self.mid]
        return PointSet(pts)

    def visible_pairs(self) -> list:
        """Top/bottom pairs that still see each other."""
        adj = build_pvg(self.point_set()).adjacency
        return [(i, j) for i in range(self.p) for j in range(self.q) if self.p + j in adj[i]]


def partial_grid_min_blockers(p: int, q: int) -> tuple[int, PartialGrid]:
    """Fewest middle points hiding every top point from every bottom point.

    A top point at x1 and a bottom point at x2 only meet the middle line at
    (x1 + x2) / 2, so each of the p + q - 1 half-integers 0 .. (p + q - 2) / 2
    needs its own point.
    """
    if p < 1 or q < 1:
        raise ValueError("p and q must be positive")
    count = p + q - 1
    return count, PartialGrid(p, q, tuple(Fraction(h, 2) for h in range(count)))


# ------------------------------------------------------------ extensions


def _aux_points(base: PointSet, rows: int, per_row: int, attempt: int):
    """``rows`` rows of ``per_row`` points above the clause line on one
    strictly convex arc, so no three new points are collinear."""
    xs = [p.x for p in base]
    lo, hi = min(xs), max(xs)
    width = hi - lo + 1
    total = rows * per_row
    step = width / max(1, total) + Fraction(1, 7 + attempt)
    out = []
    for r in range(rows):
        for j in range(per_row):
            t = r * per_row + j
            x = lo + t * step + Fraction(attempt, 13)
            h = 3 + r + Fraction(t * t, total * total + 1)
            out.append(Point(x, Fraction(h) + Fraction(attempt, 11)))
    return out


def _fully_visible(pts, new_start: int) -> bool:
    from .visibility import _direction

    grid = pts.grid
    n = len(grid)
    for i in range(new_start, n):
        xi, yi = grid[i]
        seen = set()
        for j in range(n):
            if j == i:
                continue
            d = _direction(grid[j][0] - xi, grid[j][1] - yi)
            if d in seen:
                return False
            seen.add(d)
    return True


def extend_gadget(g: Gadget, k: int) -> Gadget:
    """Gadget for K_k-partitions, k >= 6.

    Even k rebuilds the base with the k=6 layout (unit-spaced regular
    blockers).  Every further step of two adds one row of 2y points above
    the clause line that see every point, y being the number of base groups.
    """
    if k < 6:
        raise ValueError("extend_gadget needs k >= 6")
    if k % 2 == 0:
        base = _construct(g.formula, even=True, k=6)
        rows = (k - 6) // 2
        size = 6
    else:
        base = g if g.k == 5 else build_gadget(g.formula)
        rows = (k - 5) // 2
        size = 5
    if rows == 0:
        return base
    y = len(base.points) // size
    for attempt in range(20):
        new = _aux_points(base.points, rows, 2 * y, attempt)
        ps = PointSet(list(base.points) + new)
        if _fully_visible(ps, len(base.points)):
            break
    else:
        raise GadgetError("could not place auxiliary rows in general position")
    roles = base.roles + ("auxiliary",) * len(new)
    return Gadget(ps, roles, base.bindings, base.params, base.formula, base.pairs, base.cuts, k)
