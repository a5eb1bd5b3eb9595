"""Exit codes, determinism, and output shape of the command line."""
import json

import pytest

from nscurves.cli import main, sigma_weight


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- info --------------------------------------------------------------------


def test_info_trigonal(capsys):
    code, out, _ = run(capsys, "info", "3", "4")
    assert code == 0
    assert "genus        3" in out
    assert "gaps         1, 2, 5" in out
    assert "sigma weight -5" in out


def test_info_elliptic(capsys):
    code, out, _ = run(capsys, "info", "2", "3")
    assert code == 0
    assert "genus        1" in out
    assert "gaps         1" in out
    assert "sigma weight -1" in out


def test_info_rejects_common_factor(capsys):
    code, _, err = run(capsys, "info", "4", "6")
    assert code == 2
    assert "factor" in err


def test_sigma_weight_values():
    assert sigma_weight(3, 4) == -5
    assert sigma_weight(2, 3) == -1
    assert sigma_weight(3, 5) == -8


# -- expand and differentials ------------------------------------------------


def test_expand_json_lists_gap_series(capsys):
    code, out, _ = run(capsys, "expand", "2", "5", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert set(data) == {"x", "y", "dx/f_y", "u_1", "u_3"}
    assert data["u_1"].startswith("xi + -1/10*l4*xi^5")


def test_expand_rejects_shallow_order(capsys):
    code, _, err = run(capsys, "expand", "2", "5", "--order", "3")
    assert code == 2
    assert "2g+2" in err


def test_differentials_show_corrected_numerator(capsys):
    code, out, _ = run(capsys, "differentials", "3", "4")
    assert code == 0
    assert "dr_2 = (2*y*x) dx / f_y" in out


# -- formulas ----------------------------------------------------------------


@pytest.mark.parametrize(
    "n,s,m", [(3, 4, 1), (3, 7, 2), (4, 7, 1), (5, 9, 1), (2, 5, 2)]
)
def test_formulas_check_golden_passes(capsys, n, s, m):
    code, out, _ = run(capsys, "formulas", str(n), str(s), str(m), "--check-golden")
    assert code == 0
    assert out.strip() == f"PASS system_{n}_{s}.json"


def test_formulas_json_emission_parses(capsys):
    code, out, _ = run(capsys, "formulas", "3", "5", "1", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["n"] == 3 and data["s"] == 5 and data["m"] == 1


def test_formulas_family_index_must_match(capsys):
    code, _, err = run(capsys, "formulas", "3", "4", "2")
    assert code == 2
    assert "does not match" in err


def test_formulas_rank_cap(capsys):
    code, _, err = run(capsys, "formulas", "6", "7", "1")
    assert code == 2
    assert "rank" in err


def test_formulas_no_golden_store(capsys):
    code, _, err = run(capsys, "formulas", "5", "11", "2", "--check-golden")
    assert code == 2
    assert "no frozen system" in err


# -- roundtrip ---------------------------------------------------------------


CURVE_25 = """\
n = 2
s = 5
lambda.4 = -1
lambda.6 = 1/2
lambda.8 = 1/4
lambda.10 = -3/4
"""


def test_roundtrip_passes_and_is_deterministic(capsys, tmp_path):
    path = tmp_path / "curve.txt"
    path.write_text(CURVE_25)
    code, first, _ = run(capsys, "roundtrip", str(path), "--count", "4", "--seed", "3")
    assert code == 0
    assert first.count("PASS") == 5
    code, second, _ = run(capsys, "roundtrip", str(path), "--count", "4", "--seed", "3")
    assert code == 0
    assert first == second


def test_roundtrip_needs_numeric_lambda(capsys, tmp_path):
    path = tmp_path / "curve.txt"
    path.write_text("n = 3\ns = 4\nlambda.2 = sym\n")
    code, _, err = run(capsys, "roundtrip", str(path))
    assert code == 2


def test_roundtrip_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "roundtrip", str(tmp_path / "absent.txt"))
    assert code == 2


# -- hyper-demo --------------------------------------------------------------


def test_hyper_demo_genus1(capsys):
    code, out, _ = run(capsys, "hyper-demo", "1", "--seed", "4")
    assert code == 0
    data = json.loads(out)
    assert data["curve"]["s"] == 3
    assert data["max_abs_err"] < 1e-6
    assert [r["identity"] for r in data["report"]] == ["x = wp_11", "y = -wp_111/2"]


def test_hyper_demo_genus2_deterministic(capsys):
    code, first, _ = run(capsys, "hyper-demo", "2", "--seed", "9")
    assert code == 0
    data = json.loads(first)
    assert data["max_abs_err"] < 1e-6
    assert len(data["report"]) == 4
    code, second, _ = run(capsys, "hyper-demo", "2", "--seed", "9")
    assert first == second


def test_hyper_demo_rejects_other_genus(capsys):
    code, _, err = run(capsys, "hyper-demo", "3")
    assert code == 2


# -- output flag -------------------------------------------------------------


def test_output_writes_file(capsys, tmp_path):
    target = tmp_path / "report.txt"
    code, out, _ = run(capsys, "info", "2", "3", "--output", str(target))
    assert code == 0
    assert out == ""
    assert "genus        1" in target.read_text()
