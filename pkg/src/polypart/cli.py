"""Command-line front end.

Exit codes: 0 success or feasible, 2 infeasible / unsatisfiable / does not
verify, 3 bad input, 4 internal audit failure or exhausted oracle budget.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .cycles import partition_cycles, verify_cycles
from .feasibility import PartitionSpec, check_cycle_feasible
from .formula import FormulaError, normalize_formula, parse_dimacs
from .gadget import GadgetError, audit_gadget, build_gadget, extend_gadget
from .geometry import PointSet
from .oracle import (Exhausted, OracleBudget, brute_force_clique_partition, brute_force_cycle_partition,
                     brute_force_mis, brute_force_sat)
from .triangles import InfeasibleError
from .verify import check_groups
from .visibility import build_pvg

EXIT_OK, EXIT_NO, EXIT_INPUT, EXIT_INTERNAL = 0, 2, 3, 4


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    input: str | None = None
    spec: str | None = None
    output: str | None = None
    seed: int = 0           # every subcommand is deterministic; kept for reproducible scripts
    flags: dict = field(default_factory=dict)


# ------------------------------------------------------------------ files


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _load_points(path: str) -> PointSet:
    try:
        return PointSet.parse(_read(path))
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def _parse_spec(text: str | None, n: int) -> PartitionSpec:
    if text is None:
        raise InputError("--spec is required")
    try:
        spec = PartitionSpec.parse(text, n)
    except ValueError as exc:
        raise InputError(f"spec: {exc}") from None
    if spec.total != n:
        raise InputError(f"spec: {spec} covers {spec.total} points but the file has {n}")
    return spec


def dumps_partition(groups, spec, key: str = "spec") -> str:
    lines = [f"# {key} {spec}"] + [" ".join(map(str, g)) for g in groups]
    return "\n".join(lines) + "\n"


def parse_partition(text: str):
    """Returns (groups, spec text or None)."""
    groups, spec = [], None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].split()
            if len(body) == 2 and body[0] == "spec":
                spec = body[1]
            continue
        try:
            groups.append([int(tok) for tok in line.split()])
        except ValueError:
            raise InputError(f"line {lineno}: expected space-separated indices, got {line!r}") from None
    return groups, spec


def _emit(text: str, output: str | None):
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------------- svg


def _decimal(v, digits: int = 12) -> str:
    """Exact decimal expansion of a rational, truncated after ``digits`` places."""
    v = Fraction(v)
    sign = "-" if v < 0 else ""
    v = abs(v)
    whole, rem = divmod(v.numerator, v.denominator)
    frac = ""
    for _ in range(digits):
        if not rem:
            break
        rem *= 10
        d, rem = divmod(rem, v.denominator)
        frac += str(d)
    frac = frac.rstrip("0")
    if not frac and whole == 0:
        sign = ""
    return f"{sign}{whole}" + (f".{frac}" if frac else "")


ROLE_COLORS = {
    "clause": "red", "blocking": "gray", "variable": "blue", "variable_blocker": "navy",
    "extra": "green", "padding": "black", "auxiliary": "purple",
}

SVG_WIDTH = 800


def render_svg(ps: PointSet, groups=None, roles=None) -> str:
    """SVG of the points, optional polygons (one hue each) and role colours."""
    xs = [p.x for p in ps] or [Fraction(0)]
    ys = [-p.y for p in ps] or [Fraction(0)]
    lo_x, hi_x, lo_y, hi_y = min(xs), max(xs), min(ys), max(ys)
    w = max(hi_x - lo_x, Fraction(1))
    h = max(hi_y - lo_y, Fraction(1))
    mx, my = w / 20, h / 20
    vb = (lo_x - mx, lo_y - my, w + 2 * mx, h + 2 * my)
    px = vb[2] / SVG_WIDTH
    height = round(SVG_WIDTH * vb[3] / vb[2])
    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SVG_WIDTH}" height="{height}" '
           f'viewBox="{" ".join(_decimal(c) for c in vb)}">']
    groups = groups or []
    for k, g in enumerate(groups):
        hue = round(360 * k / len(groups))
        pts = " ".join(f"{_decimal(ps[i].x)},{_decimal(-ps[i].y)}" for i in g)
        out.append(f'<polygon points="{pts}" fill="hsl({hue},70%,50%)" fill-opacity="0.3" '
                   f'stroke="hsl({hue},70%,35%)" stroke-width="{_decimal(px)}"/>')
    r = _decimal(3 * px)
    for i, p in enumerate(ps):
        color = ROLE_COLORS.get(roles[i], "black") if roles else "black"
        out.append(f'<circle cx="{_decimal(p.x)}" cy="{_decimal(-p.y)}" r="{r}" fill="{color}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _parse_roles(text: str) -> list:
    roles = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts:
            continue
        if len(parts) < 2 or not parts[0].isdigit() or int(parts[0]) != len(roles):
            raise InputError(f"line {lineno}: expected 'index role ...' in order")
        roles.append(parts[1])
    return roles


# -------------------------------------------------------------- commands


def _cmd_pvg(cfg: RunConfig) -> int:
    ps = _load_points(cfg.input)
    g = build_pvg(ps)
    edges = g.edges()
    text = f"# {len(ps)} points, {len(edges)} edges\n" + "".join(f"{i} {j}\n" for i, j in edges)
    text += "".join(f"# blocked {i} {j} by {k}\n" for (i, j), k in sorted(g.blocker_witness.items()))
    _emit(text, cfg.output)
    return EXIT_OK


def _cmd_check(cfg: RunConfig) -> int:
    ps = _load_points(cfg.input)
    spec = _parse_spec(cfg.spec, len(ps))
    verdict = check_cycle_feasible(ps, spec)
    print(verdict.describe())
    return EXIT_OK if verdict else EXIT_NO


def _cmd_partition(cfg: RunConfig) -> int:
    ps = _load_points(cfg.input)
    spec = _parse_spec(cfg.spec, len(ps))
    try:
        cp = partition_cycles(ps, spec)
    except InfeasibleError as exc:
        print(exc.verdict.describe())
        return EXIT_NO
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    check = verify_cycles(ps, cp)
    if not check:
        print(f"error: partition failed verification: {check.reason}", file=sys.stderr)
        return EXIT_INTERNAL
    _emit(dumps_partition(cp.groups, spec), cfg.output)
    if cfg.flags.get("svg"):
        Path(cfg.flags["svg"]).write_text(render_svg(ps, cp.groups))
    return EXIT_OK


def _cmd_verify(cfg: RunConfig) -> int:
    ps = _load_points(cfg.input)
    groups, header = parse_partition(_read(cfg.flags["partition"]))
    text = cfg.spec or header
    sizes = _parse_spec(text, len(ps)).sizes if text else None
    check = check_groups(ps, groups, sizes)
    print("ok" if check else f"invalid: {check.reason}")
    return EXIT_OK if check else EXIT_NO


def _cmd_gadget(cfg: RunConfig) -> int:
    try:
        formula = parse_dimacs(_read(cfg.input))
    except FormulaError as exc:
        raise InputError(f"{cfg.input}: {exc}") from None
    try:
        norm = normalize_formula(formula)
    except FormulaError as exc:
        raise InputError(f"{cfg.input}: {exc}") from None
    k = cfg.flags.get("k", 5)
    try:
        g = build_gadget(norm)
        if k != 5:
            g = extend_gadget(g, k)
    except GadgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    _emit(g.points.dumps(), cfg.output)
    roles_path = cfg.flags.get("roles") or (cfg.output + ".roles" if cfg.output else None)
    if roles_path:
        Path(roles_path).write_text(g.dumps_roles())
    p = g.params
    print(f"# gadget k={k}: {len(g.points)} points, m={p.m} n={p.n} v={p.v} b_n={p.b_n} "
          f"e={p.e} b={p.b} c={p.c}", file=sys.stderr)
    if cfg.flags.get("verify"):
        report = audit_gadget(g)
        for line in report.lines():
            print(line, file=sys.stderr)
        if not report.ok:
            return EXIT_INTERNAL
    return EXIT_OK


def _cmd_oracle(cfg: RunConfig) -> int:
    budget = OracleBudget(cfg.flags.get("max_points", 16), cfg.flags.get("max_nodes", 5_000_000))
    try:
        if cfg.flags.get("cnf"):
            try:
                formula = parse_dimacs(_read(cfg.input))
            except FormulaError as exc:
                raise InputError(f"{cfg.input}: {exc}") from None
            try:
                a = brute_force_sat(formula)
            except ValueError as exc:
                raise InputError(str(exc)) from None
            if a is None:
                print("oracle: unsat")
                return EXIT_NO
            print("oracle: sat " + " ".join(str(v if a[v] else -v) for v in sorted(a)))
            return EXIT_OK
        ps = _load_points(cfg.input)
        if cfg.flags.get("mis"):
            size, witness = brute_force_mis(ps, budget)
            print(f"oracle: independent set of {size}: {' '.join(map(str, witness))}")
            return EXIT_OK
        if cfg.flags.get("clique"):
            k = cfg.flags["clique"]
            if len(ps) % k:
                raise InputError(f"{len(ps)} points cannot be split into groups of {k}")
            groups = brute_force_clique_partition(ps, k, budget)
            label, key = f"K{k}", "clique"
        else:
            spec = _parse_spec(cfg.spec, len(ps))
            groups = brute_force_cycle_partition(ps, spec.sizes, budget)
            label, key = str(spec), "spec"
    except Exhausted as exc:
        print(f"oracle: exhausted ({exc})")
        return EXIT_INTERNAL
    if groups is None:
        print(f"oracle: infeasible ({label})")
        return EXIT_NO
    print(f"oracle: feasible ({label})")
    _emit(dumps_partition(groups, label if key == "spec" else k, key), cfg.output)
    return EXIT_OK


def _cmd_render(cfg: RunConfig) -> int:
    ps = _load_points(cfg.input)
    groups = None
    if cfg.flags.get("partition"):
        groups, _ = parse_partition(_read(cfg.flags["partition"]))
        bad = [i for g in groups for i in g if not 0 <= i < len(ps)]
        if bad:
            raise InputError(f"partition index {bad[0]} out of range")
    roles = _parse_roles(_read(cfg.flags["roles"])) if cfg.flags.get("roles") else None
    if roles is not None and len(roles) != len(ps):
        raise InputError(f"role map has {len(roles)} entries for {len(ps)} points")
    _emit(render_svg(ps, groups, roles), cfg.output)
    return EXIT_OK


COMMANDS = {
    "pvg": _cmd_pvg, "check": _cmd_check, "partition": _cmd_partition, "verify": _cmd_verify,
    "gadget": _cmd_gadget, "oracle": _cmd_oracle, "render": _cmd_render,
}


def run(cfg: RunConfig) -> int:
    try:
        return COMMANDS[cfg.subcommand](cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors (3), not the "infeasible" code argparse uses
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="polypart", description="Disjoint polygon partitions of point sets.")
    ap.add_argument("--seed", type=int, default=0, help="recorded for reproducibility; output is deterministic")
    sub = ap.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("pvg", help="visibility graph edge list")
    p.add_argument("input")
    p.add_argument("-o", "--output")

    p = sub.add_parser("check", help="feasibility verdict with certificate")
    p.add_argument("input")
    p.add_argument("--spec", required=True, help="sizes like 3,4,5 or 'triangles'")

    p = sub.add_parser("partition", help="construct and verify a partition")
    p.add_argument("input")
    p.add_argument("--spec", required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--svg", help="also write an SVG rendering")

    p = sub.add_parser("verify", help="recheck a partition file")
    p.add_argument("input")
    p.add_argument("partition")
    p.add_argument("--spec", help="defaults to the file's '# spec' header")

    p = sub.add_parser("gadget", help="DIMACS CNF to gadget points and roles")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.add_argument("--roles", help="role map path (default: OUTPUT.roles)")
    p.add_argument("-k", type=int, default=5, help="clique size (default 5)")
    p.add_argument("--verify", action="store_true", help="run the full structural audit")

    p = sub.add_parser("oracle", help="exhaustive ground truth")
    p.add_argument("input")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--spec")
    mode.add_argument("--clique", type=int, metavar="K")
    mode.add_argument("--mis", action="store_true")
    mode.add_argument("--cnf", action="store_true", help="input is DIMACS; brute-force SAT")
    p.add_argument("-o", "--output")
    p.add_argument("--max-points", type=int, default=16)
    p.add_argument("--max-nodes", type=int, default=5_000_000)

    p = sub.add_parser("render", help="SVG of points, partition and roles")
    p.add_argument("input")
    p.add_argument("--partition")
    p.add_argument("--roles")
    p.add_argument("-o", "--output")
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    flags = {k: v for k, v in vars(args).items()
             if k not in ("subcommand", "input", "spec", "output", "seed")}
    cfg = RunConfig(args.subcommand, args.input, getattr(args, "spec", None),
                    getattr(args, "output", None), args.seed, flags)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
