"""CNF formulas with at most three occurrences per variable.

:func:`normalize_formula` brings a formula into the shape the point gadget
needs: every variable occurs both positively and negatively, and adjacent
clauses never share a variable.  The result remembers how to turn one of its
satisfying assignments back into one for the input.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import permutations


class FormulaError(ValueError):
    pass


@dataclass(frozen=True)
class Formula:
    num_vars: int
    clauses: tuple
    # original variable -> ("var", j) | ("or", j, j2) | ("and", j, j2) | ("const", 0/1)
    restore: dict = field(default_factory=dict, compare=False)
    source_vars: int = 0

    def occurrences(self) -> Counter:
        return Counter(abs(l) for c in self.clauses for l in c)

    @property
    def n1(self) -> int:
        return sum(1 for v in range(1, self.num_vars + 1) if self.occurrences()[v] == 2)

    @property
    def n2(self) -> int:
        return sum(1 for v in range(1, self.num_vars + 1) if self.occurrences()[v] == 3)

    @property
    def m(self) -> int:
        return len(self.clauses)

    def is_normalized(self) -> bool:
        occ = self.occurrences()
        for v in range(1, self.num_vars + 1):
            signs = {l > 0 for c in self.clauses for l in c if abs(l) == v}
            if occ[v] not in (2, 3) or signs != {True, False}:
                return False
        if any(len(set(c)) != len(c) for c in self.clauses):
            return False
        return all(not ({abs(l) for l in a} & {abs(l) for l in b})
                   for a, b in zip(self.clauses, self.clauses[1:]))

    def restore_assignment(self, assignment: dict) -> dict:
        """Map an assignment of this formula back to the source formula."""
        if not self.restore:
            return dict(assignment)
        out = {}
        for v, rule in self.restore.items():
            kind = rule[0]
            if kind == "var":
                out[v] = assignment.get(rule[1], 0)
            elif kind == "or":
                out[v] = int(assignment.get(rule[1], 0) or assignment.get(rule[2], 0))
            elif kind == "and":
                out[v] = int(assignment.get(rule[1], 0) and assignment.get(rule[2], 0))
            else:
                out[v] = rule[1]
        return out


def parse_dimacs(text: str) -> Formula:
    """Parse DIMACS CNF.  Errors carry the offending line number."""
    num_vars = None
    declared = None
    clauses, current = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormulaError(f"line {lineno}: bad problem line {line!r}")
            try:
                num_vars, declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise FormulaError(f"line {lineno}: bad problem line {line!r}") from None
            continue
        if num_vars is None:
            raise FormulaError(f"line {lineno}: clause before the 'p cnf' line")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise FormulaError(f"line {lineno}: bad literal {tok!r}") from None
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            elif abs(lit) > num_vars:
                raise FormulaError(f"line {lineno}: variable {abs(lit)} exceeds declared {num_vars}")
            else:
                current.append(lit)
    if current:
        clauses.append(tuple(current))
    if num_vars is None:
        raise FormulaError("missing 'p cnf' line")
    if declared is not None and declared != len(clauses):
        raise FormulaError(f"header declares {declared} clauses, found {len(clauses)}")
    return Formula(num_vars, tuple(clauses))


def dumps_dimacs(f: Formula) -> str:
    lines = [f"p cnf {f.num_vars} {len(f.clauses)}"]
    lines += [" ".join(map(str, c)) + " 0" for c in f.clauses]
    return "\n".join(lines) + "\n"


def _order_clauses(clauses, fresh):
    """Reorder so neighbours share no variable, inserting (s or not s) separators
    where no such order is found."""
    vs = [frozenset(abs(l) for l in c) for c in clauses]
    m = len(clauses)
    if m <= 7:
        for perm in permutations(range(m)):
            if all(not (vs[a] & vs[b]) for a, b in zip(perm, perm[1:])):
                return [clauses[i] for i in perm], fresh
    # greedy: keep taking a clause that shares nothing with the previous one
    left = list(range(m))
    out = [left.pop(0)]
    while left:
        nxt = next((i for i in left if not (vs[i] & vs[out[-1]])), None)
        if nxt is None:
            out.append(None)
            nxt = left[0]
        left.remove(nxt)
        out.append(nxt)
    result = []
    for i in out:
        if i is None:
            fresh += 1
            result.append((fresh, -fresh))
        else:
            result.append(clauses[i])
    return result, fresh


def normalize_formula(f: Formula) -> Formula:
    """Equisatisfiable normalized copy of ``f`` with a restore map.

    * duplicate literals inside a clause are dropped; empty clauses are kept;
    * a variable used with one sign only gets a clause ``(other sign, y, -y)``
      for a fresh y, after splitting off one occurrence into a fresh variable
      if it already occurs three times;
    * clauses are reordered (or separated by ``(s, -s)``) so that adjacent
      clauses share no variable;
    * unused variables are dropped and the rest renumbered.
    """
    if not f.clauses:
        raise FormulaError("empty formula (no clauses)")
    clauses = [list(dict.fromkeys(c)) for c in f.clauses]
    occ = Counter(abs(l) for c in clauses for l in c)
    over = sorted(v for v, k in occ.items() if k > 3)
    if over:
        raise FormulaError(f"variable {over[0]} occurs {occ[over[0]]} times (limit 3)")
    fresh = f.num_vars
    restore = {}
    extra = []
    for v in range(1, f.num_vars + 1):
        if occ[v] == 0:
            restore[v] = ("const", 0)
            continue
        signs = {l > 0 for c in clauses for l in c if abs(l) == v}
        if len(signs) == 2:
            restore[v] = ("var", v)
            continue
        pos = signs == {True}
        group = [v]
        if occ[v] == 3:
            fresh += 1
            # rename the last occurrence
            for c in reversed(clauses):
                hit = [k for k, l in enumerate(c) if abs(l) == v]
                if hit:
                    c[hit[-1]] = fresh if pos else -fresh
                    break
            group.append(fresh)
            restore[v] = ("or", v, fresh) if pos else ("and", v, fresh)
        else:
            restore[v] = ("var", v)
        for u in group:
            fresh += 1
            extra.append([-u if pos else u, fresh, -fresh])
    clauses = [tuple(c) for c in clauses + extra]
    clauses, fresh = _order_clauses(clauses, fresh)
    used = sorted({abs(l) for c in clauses for l in c})
    renum = {v: k + 1 for k, v in enumerate(used)}
    clauses = tuple(tuple((1 if l > 0 else -1) * renum[abs(l)] for l in c) for c in clauses)

    def rn(rule):
        if rule[0] == "const":
            return rule
        return (rule[0],) + tuple(renum[j] for j in rule[1:])

    out = Formula(len(used), clauses, {v: rn(r) for v, r in restore.items()}, f.num_vars)
    assert out.is_normalized(), out
    return out
