import re
from fractions import Fraction

import pytest

from polypart.cli import (EXIT_INPUT, EXIT_INTERNAL, EXIT_NO, EXIT_OK, RunConfig, _decimal, main, parse_partition,
                          render_svg, run)
from polypart.geometry import PointSet

SIX = "0 0\n4 1\n1 3\n9 0\n12 2\n10 4\n"
SEVEN = "0 0\n5 1\n7 4\n4 7\n1 5\n3 3\n6 6\n"
LINE = "0 0\n1 0\n2 0\n3 0\n4 0\n2 3\n"
CNF = "p cnf 2 2\n1 -1 0\n2 -2 0\n"


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


def test_check_feasible(files, capsys):
    assert main(["check", files("p.txt", SIX), "--spec", "3,3"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "feasible"


def test_check_infeasible_prints_certificate(files, capsys):
    assert main(["check", files("p.txt", LINE), "--spec", "triangles"]) == EXIT_NO
    assert "0 2 4" in capsys.readouterr().out


def test_partition_then_verify(files, tmp_path, capsys):
    pts = files("p.txt", SEVEN)
    out = str(tmp_path / "part.txt")
    svg = str(tmp_path / "part.svg")
    assert main(["partition", pts, "--spec", "3,4", "-o", out, "--svg", svg]) == EXIT_OK
    groups, spec = parse_partition(open(out).read())
    assert spec == "3,4" and sorted(map(len, groups)) == [3, 4]
    assert open(svg).read().count("<polygon") == 2
    assert main(["verify", pts, out]) == EXIT_OK
    assert capsys.readouterr().out.strip().endswith("ok")


def test_partition_infeasible(files):
    assert main(["partition", files("p.txt", LINE), "--spec", "3,3"]) == EXIT_NO


def test_verify_rejects_overlap(files, capsys):
    pts = files("p.txt", SIX)
    part = files("bad.txt", "# spec 3,3\n0 1 2\n2 3 4\n")
    assert main(["verify", pts, part]) == EXIT_NO
    assert "invalid: overlap" in capsys.readouterr().out


def test_gadget_verify(files, tmp_path, capsys):
    out = str(tmp_path / "g.txt")
    assert main(["gadget", files("f.cnf", CNF), "-o", out, "--verify"]) == EXIT_OK
    err = capsys.readouterr().err
    assert "pass no clause point sees an extra point" in err
    assert "FAIL" not in err
    ps = PointSet.parse(open(out).read())
    roles = open(out + ".roles").read().splitlines()
    assert len(roles) == len(ps) and len(ps) % 5 == 0


def test_gadget_k7(files, tmp_path):
    out = str(tmp_path / "g.txt")
    assert main(["gadget", files("f.cnf", CNF), "-o", out, "-k", "7", "--verify"]) == EXIT_OK
    assert len(PointSet.parse(open(out).read())) % 7 == 0


def test_gadget_bad_cnf(files, capsys):
    assert main(["gadget", files("f.cnf", "p cnf 1 1\n1 q 0\n")]) == EXIT_INPUT
    assert "line 2" in capsys.readouterr().err


def test_oracle_modes(files, capsys):
    pts = files("p.txt", LINE)
    assert main(["oracle", pts, "--spec", "3,3"]) == EXIT_NO
    assert main(["oracle", pts, "--mis"]) == EXIT_OK
    assert main(["oracle", files("f.cnf", CNF), "--cnf"]) == EXIT_OK
    assert main(["oracle", files("u.cnf", "p cnf 1 2\n1 0\n-1 0\n"), "--cnf"]) == EXIT_NO
    out = capsys.readouterr().out.splitlines()
    assert all(line.startswith(("oracle:", "#")) or line[0].isdigit() for line in out)
    assert "oracle: independent set of 3: 0 2 4" in out
    assert "oracle: unsat" in out


def test_oracle_exhausted(files, capsys):
    assert main(["oracle", files("p.txt", SIX), "--spec", "3,3", "--max-nodes", "1"]) == EXIT_INTERNAL
    assert "exhausted" in capsys.readouterr().out


def test_pvg_lists_blockers(files, capsys):
    assert main(["pvg", files("p.txt", "0 0\n1 0\n2 0\n")]) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert "0 1" in out and "1 2" in out and "# blocked 0 2 by 1" in out


@pytest.mark.parametrize("text,needle", [
    ("0 0\n1 x\n", "line 2"),
    ("0 0\n0 0\n", "duplicate"),
])
def test_malformed_point_file(files, capsys, text, needle):
    assert main(["check", files("p.txt", text), "--spec", "3"]) == EXIT_INPUT
    assert needle in capsys.readouterr().err


def test_bad_spec(files, capsys):
    assert main(["check", files("p.txt", SIX), "--spec", "3,2,1"]) == EXIT_INPUT
    assert main(["check", files("p.txt", SIX), "--spec", "3,4"]) == EXIT_INPUT


def test_missing_file():
    assert run(RunConfig("check", "/nonexistent/points.txt", "3")) == EXIT_INPUT


def test_usage_error_is_input_error():
    with pytest.raises(SystemExit) as info:
        main(["partition"])
    assert info.value.code == EXIT_INPUT


def test_render_with_roles(files, tmp_path):
    out = str(tmp_path / "g.txt")
    main(["gadget", files("f.cnf", CNF), "-o", out])
    svg_path = str(tmp_path / "g.svg")
    assert main(["render", out, "--roles", out + ".roles", "-o", svg_path]) == EXIT_OK
    svg = open(svg_path).read()
    for colour in ("red", "gray", "blue", "green", "black"):
        assert f'fill="{colour}"' in svg


class TestSvg:
    def test_points_only(self):
        svg = render_svg(PointSet.parse(SIX))
        assert svg.count("<circle") == 6 and "<polygon" not in svg

    def test_two_triangles_distinct_hues(self):
        svg = render_svg(PointSet.parse(SIX), [[0, 1, 2], [3, 4, 5]])
        fills = re.findall(r'<polygon[^>]*fill="([^"]+)"', svg)
        assert len(fills) == 2 and fills[0] != fills[1]
        assert svg.count('fill-opacity="0.3"') == 2

    def test_deterministic(self):
        ps = PointSet.parse(SEVEN)
        assert render_svg(ps, [[0, 1, 2]]) == render_svg(ps, [[0, 1, 2]])

    def test_decimal_truncation(self):
        assert _decimal(1) == "1"
        assert _decimal(Fraction(-1, 4)) == "-0.25"
        assert _decimal(Fraction(1, 3)) == "0.333333333333"


def test_output_is_byte_identical(files, tmp_path):
    pts = files("p.txt", SEVEN)
    a, b = str(tmp_path / "a"), str(tmp_path / "b")
    main(["partition", pts, "--spec", "3,4", "-o", a])
    main(["--seed", "7", "partition", pts, "--spec", "3,4", "-o", b])
    assert open(a).read() == open(b).read()
