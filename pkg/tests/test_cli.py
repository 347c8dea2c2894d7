import json
import re
import subprocess
import sys

import pytest

from posetassoc.cli import VerificationReport, main
from posetassoc.perms import narayana_nk
from posetassoc.polyalg import h_to_f


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def fields(out):
    return dict(line.split(": ", 1) for line in out.splitlines() if ": " in line)


# --- hvector ------------------------------------------------------------

@pytest.mark.parametrize(
    "expr, h",
    [("chain:4", "1 + 3t + t^2"), ("osum(antichain:1,antichain:3)", "1 + 4t + t^2"), ("chain:2", "1")],
)
def test_hvector_examples(capsys, expr, h):
    code, out, _ = run(capsys, "hvector", "--build", expr)
    assert code == 0
    assert fields(out)["h"] == h


def test_hvector_census_lines(capsys):
    code, out, _ = run(capsys, "hvector", "--build", "chain:5")
    assert code == 0
    assert re.findall(r"^k (\d+) (\d+)$", out, re.M) == [("0", "1"), ("1", "9"), ("2", "21"), ("3", "14")]
    assert fields(out)["f"] == "14 + 21t + 9t^2 + t^3"
    assert fields(out)["gamma"] == "1 + 3t"


def test_hvector_from_file_and_json(capsys, tmp_path):
    path = tmp_path / "broom.txt"
    path.write_text("# C_3 + A_2\nn 5\n1 < 2\n2 < 3\n3 < 4\n3 < 5\n")
    code, out, _ = run(capsys, "hvector", "--poset", str(path), "--json")
    assert code == 0
    data = json.loads(out)
    # oracle: the broom's h-polynomial is the stack-sorting polynomial N_{2,2}
    h = narayana_nk(2, 2)
    f = h_to_f(h)
    assert data["h"] == h.render("t")
    assert data["census"] == {str(3 - i): c for i, c in enumerate(f.coeffs)}


def test_hvector_list(capsys):
    code, out, _ = run(capsys, "hvector", "--build", "chain:4", "--list")
    tubings = [line for line in out.splitlines() if line.startswith("{")]
    assert len(tubings) == 11
    assert "{1,2},{3,4}" in tubings and "{}" in tubings


@pytest.mark.parametrize(
    "argv",
    [
        ["hvector", "--build", "antichain:3"],
        ["hvector", "--build", "lattice:3"],
        ["hvector"],
        ["hvector", "--poset", "/nonexistent/poset.txt"],
    ],
)
def test_hvector_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("error:")


# --- verify-theorem -----------------------------------------------------

@pytest.mark.parametrize("expr, chain", [("chain:4", "2,3"), ("chain:5", "2,3,4"), ("chain:4", "3")])
def test_verify_theorem(capsys, expr, chain):
    code, out, _ = run(capsys, "verify-theorem", "--build", expr, "--chain", chain)
    assert code == 0
    f = fields(out)
    assert f["equal"] == "true" and f["lhs"] == f["rhs"]


def test_verify_theorem_two_chain_value(capsys):
    _, out, _ = run(capsys, "verify-theorem", "--build", "chain:4", "--chain", "2,3")
    assert fields(out)["lhs"] == "1 + 3x + x^2"


def test_verify_theorem_names_failing_pair(capsys):
    code, _, err = run(capsys, "verify-theorem", "--build", "claw:3", "--chain", "2,3")
    assert code == 2
    assert "2 and 3" in err
    code, _, err = run(capsys, "verify-theorem", "--build", "chain:4", "--chain", "2,4")
    assert code == 2 and "3" in err


# --- verify-prop / verify-corollary -------------------------------------

def test_verify_prop(capsys):
    code, out, _ = run(capsys, "verify-prop", "--n", "3", "--which", "eq2")
    assert code == 0
    assert fields(out)["lhs"] == "t(12 + 12x + 2x^2) + t^2(6 + 3x) + t^3"
    code, out, _ = run(capsys, "verify-prop", "--n", "3", "--which", "eq3")
    assert fields(out)["rhs"] == "t(2 + 12x + 12x^2) + t^2(3 + 6x) + t^3"
    code, out, _ = run(capsys, "verify-prop", "--n", "1")
    assert code == 0
    assert [l for l in out.splitlines() if l.startswith("lhs")] == ["lhs: t", "lhs: t"]


@pytest.mark.parametrize(
    "argv, value",
    [
        (["--name", "5.1", "--n", "2"], "1 + x"),
        (["--name", "5.2", "--n", "1", "--k", "2"], "1 + 3x + x^2"),
        (["--name", "5.5", "--n", "1", "--k", "1"], "2 + 2x"),
        (["--name", "final-prop", "--n", "2", "--k", "1"], None),
    ],
)
def test_verify_corollary(capsys, argv, value):
    code, out, _ = run(capsys, "verify-corollary", *argv)
    assert code == 0
    if value:
        assert fields(out)["lhs"] == value


def test_verify_corollary_json(capsys):
    code, out, _ = run(capsys, "verify-corollary", "--name", "final-prop", "--n", "2", "--k", "2", "--json")
    data = json.loads(out)
    assert code == 0 and data["all_equal"]
    assert [r["name"] for r in data["reports"]] == ["final-prop:tubing", "final-prop:descents"]


def test_verify_corollary_missing_k(capsys):
    code, _, err = run(capsys, "verify-corollary", "--name", "5.4", "--n", "2")
    assert code == 2 and "--k" in err


# --- enumerate ----------------------------------------------------------

def test_enumerate_examples(capsys):
    _, out, _ = run(capsys, "enumerate", "--graph", "cycle:3")
    assert re.findall(r"^k .*$", out, re.M) == ["k 0 1", "k 1 6", "k 2 6"]
    _, out, _ = run(capsys, "enumerate", "--graph", "path:1")
    assert re.findall(r"^k .*$", out, re.M) == ["k 0 1"]


def test_enumerate_bottom_excluding_per_dp(capsys):
    code, out, _ = run(capsys, "enumerate", "--graph", "perm-cycles:231", "--bottom-excluding", "--json")
    data = json.loads(out)
    assert code == 0
    assert len(data) == 3
    assert all(d["census"] == {"1": 1, "2": 2} for d in data)


def test_enumerate_list(capsys):
    _, out, _ = run(capsys, "enumerate", "--graph", "path:3", "--bottom-excluding", "--list")
    listed = sorted(l for l in out.splitlines() if l.startswith("{"))
    assert listed == ["{2,3}", "{2},{2,3}", "{3},{2,3}"]


def test_enumerate_bad_spec(capsys):
    code, _, err = run(capsys, "enumerate", "--graph", "torus:2")
    assert code == 2 and err.startswith("error:")


# --- guardrails ---------------------------------------------------------

def test_guardrails(capsys):
    code, _, err = run(capsys, "hvector", "--build", "chain:10")
    assert code == 3 and "--force" in err and "362880" in err
    code, _, err = run(capsys, "verify-prop", "--n", "9")
    assert code == 3 and "362880 permutations" in err
    code, _, err = run(capsys, "verify-corollary", "--name", "5.4", "--n", "5", "--k", "4")
    assert code == 3


def test_force_overrides_guardrail(capsys):
    code, out, _ = run(capsys, "verify-prop", "--n", "9", "--which", "eq2", "--force")
    assert code == 0 and fields(out)["equal"] == "true"


# --- reproducibility and caching ----------------------------------------

def strip_elapsed(out):
    return re.sub(r"elapsed: .*", "", out)


def test_reruns_are_byte_identical(capsys):
    argv = ("verify-theorem", "--build", "osum(antichain:1,chain:2,antichain:2)", "--chain", "2,3")
    _, first, _ = run(capsys, *argv)
    _, cached, _ = run(capsys, *argv)
    _, fresh, _ = run(capsys, *argv, "--no-cache")
    assert strip_elapsed(first) == strip_elapsed(cached) == strip_elapsed(fresh)


def test_cached_and_fresh_censuses_agree(capsys, tmp_path):
    cache = str(tmp_path / "c")
    for expr in ("chain:6", "broom:2,2", "osum(antichain:2,chain:2,antichain:2)"):
        _, warm, _ = run(capsys, "hvector", "--build", expr, "--cache-dir", cache)
        _, hot, _ = run(capsys, "hvector", "--build", expr, "--cache-dir", cache)
        _, fresh, _ = run(capsys, "hvector", "--build", expr, "--no-cache")
        assert warm == hot == fresh
    assert len(list((tmp_path / "c").glob("*.json"))) == 3


def test_report_text_layout():
    r = VerificationReport("eq2", {"n": 1}, "t", "t", True, 0.5)
    assert r.to_text().splitlines() == [
        "identity: eq2",
        "parameters: n=1",
        "lhs: t",
        "rhs: t",
        "equal: true",
        "elapsed: 0.5000s",
    ]


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "posetassoc.cli", "hvector", "--build", "claw:3", "--no-cache"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "h: 1 + 4t + t^2" in proc.stdout


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0
    assert out.count("[PASS]") == 10
