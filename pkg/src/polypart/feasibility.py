"""Feasibility verdicts with re-checkable certificates."""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import PointSet
from .visibility import LineGroup, build_pvg, is_independent, max_collinear, max_independent_structured


@dataclass(frozen=True)
class PartitionSpec:
    """Requested polygon sizes (a multiset, kept in the order given)."""

    sizes: tuple

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        if not self.sizes:
            raise ValueError("empty partition spec")
        bad = [s for s in self.sizes if s < 3]
        if bad:
            raise ValueError(f"polygon sizes must be >= 3, got {bad}")

    @property
    def total(self) -> int:
        return sum(self.sizes)

    @property
    def all_triangles(self) -> bool:
        return all(s == 3 for s in self.sizes)

    @property
    def collinear_bound(self) -> int:
        """Most collinear points any partition into these sizes can absorb."""
        return self.total - len(self.sizes)

    @classmethod
    def parse(cls, text: str, n_points: int | None = None) -> "PartitionSpec":
        """``"3,4,5"``, or ``"triangles"`` (needs the point count)."""
        text = text.strip()
        if text in ("triangles", "t"):
            if n_points is None or n_points % 3:
                raise ValueError(f"'triangles' needs a point count divisible by 3, got {n_points}")
            return cls((3,) * (n_points // 3))
        try:
            sizes = [int(tok) for tok in text.replace(" ", "").split(",") if tok]
        except ValueError:
            raise ValueError(f"bad spec {text!r}: expected comma-separated integers") from None
        return cls(sizes)

    def __str__(self) -> str:
        return ",".join(map(str, self.sizes))


def as_spec(spec) -> PartitionSpec:
    return spec if isinstance(spec, PartitionSpec) else PartitionSpec(tuple(spec))


@dataclass(frozen=True)
class FeasibilityVerdict:
    feasible: bool
    kind: str | None = None          # "independent_set" or "collinear" when infeasible
    certificate: tuple | LineGroup | None = None
    bound: int | None = None

    def __bool__(self) -> bool:
        return self.feasible

    def describe(self) -> str:
        if self.feasible:
            return "feasible"
        if self.kind == "independent_set":
            return (f"infeasible: independent set of {len(self.certificate)} points "
                    f"(limit {self.bound}): {' '.join(map(str, self.certificate))}")
        return (f"infeasible: {len(self.certificate)} collinear points (limit {self.bound}): "
                f"{' '.join(map(str, self.certificate.member_indices))}")


def check_triangle_feasible(ps: PointSet) -> FeasibilityVerdict:
    """Triangle partition exists iff no independent set of n + 1 points (|ps| = 3n)."""
    if len(ps) < 3 or len(ps) % 3:
        raise ValueError(f"triangle partition needs 3n >= 3 points, got {len(ps)}")
    n = len(ps) // 3
    size, witness = max_independent_structured(ps)
    if size <= n:
        return FeasibilityVerdict(True)
    return FeasibilityVerdict(False, "independent_set", tuple(witness[: n + 1]), n)


def check_cycle_feasible(ps: PointSet, spec) -> FeasibilityVerdict:
    spec = as_spec(spec)
    if spec.total != len(ps):
        raise ValueError(f"spec {spec} covers {spec.total} points but the set has {len(ps)}")
    if spec.all_triangles:
        return check_triangle_feasible(ps)
    count, group = max_collinear(ps)
    if count <= spec.collinear_bound:
        return FeasibilityVerdict(True)
    return FeasibilityVerdict(False, "collinear", group, spec.collinear_bound)


def recheck_certificate(ps: PointSet, verdict: FeasibilityVerdict) -> bool:
    """Independently confirm that an infeasibility certificate is genuine."""
    if verdict.feasible:
        return verdict.certificate is None
    if verdict.kind == "independent_set":
        return len(verdict.certificate) > verdict.bound and is_independent(build_pvg(ps), verdict.certificate)
    members = verdict.certificate.member_indices
    pts = ps.grid
    flat = all((pts[members[1]][0] - pts[members[0]][0]) * (pts[k][1] - pts[members[0]][1])
               == (pts[members[1]][1] - pts[members[0]][1]) * (pts[k][0] - pts[members[0]][0])
               for k in members)
    return flat and len(members) > verdict.bound
