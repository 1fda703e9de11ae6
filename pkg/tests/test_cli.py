import json
import os
from pathlib import Path

import pytest

from lewis_hecke.cli import SCHEMA_VERSION, RunConfig, UsageError, main

GOLDEN = Path(__file__).parent / "golden"
GOLDEN_LEVELS = [2, 3, 4, 6, 12]
GOLDEN_COMMANDS = {
    "cosets": lambda n: ["cosets", str(n)],
    "chains": lambda n: ["chains", str(n)],
    "psi": lambda n: ["psi", str(n)],
    "hecke-tilde": lambda n: ["hecke", str(n)],
    "hecke-full": lambda n: ["hecke", str(n), "--variant", "full"],
    "kappa": lambda n: ["hecke-kappa", str(n)],
    "rho-tM": lambda n: ["rho", str(n), "tM"],
    "cosets-csv": lambda n: ["cosets", str(n), "--format", "csv"],
}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("n", GOLDEN_LEVELS)
@pytest.mark.parametrize("name", sorted(GOLDEN_COMMANDS))
def test_golden(capsys, name, n):
    code, out, _ = run(capsys, *GOLDEN_COMMANDS[name](n))
    assert code == 0
    path = GOLDEN / f"{name}-{n}.{'csv' if name.endswith('csv') else 'json'}"
    if os.environ.get("LEWIS_HECKE_REGEN"):
        path.write_text(out)
    assert out == path.read_text()


def test_cosets_4(capsys):
    code, out, _ = run(capsys, "cosets", "4")
    doc = json.loads(out)
    assert code == 0 and doc["schema_version"] == SCHEMA_VERSION
    rows = doc["result"]["cosets"]
    assert len(rows) == 6 and (rows[-1]["c"], rows[-1]["b"]) == (4, 0)
    assert rows[4] == {"c": 2, "b": 1, "d": 3, "A": [2, 1, 0, 2], "x": "1/2"}


def test_hecke_kappa_3(capsys):
    code, out, _ = run(capsys, "hecke-kappa", "3")
    assert code == 0 and json.loads(out)["result"]["kappa"] == 4


def test_partition(capsys):
    code, out, _ = run(capsys, "partition", "2/3")
    res = json.loads(out)["result"]
    assert res["points"] == ["2/3", "1/2", "0/1", "-inf"]
    assert [t["matrix"] for t in res["m"]] == [[3, -2, 2, -1], [2, -1, 1, 0], [1, 0, 0, 1]]


def test_rho_one_line(capsys):
    code, out, _ = run(capsys, "rho", "2", "t")
    assert json.loads(out)["result"]["one_line"] == [1, 0, 2]


def test_verify_lewis(capsys):
    code, out, _ = run(capsys, "verify", "lewis", "12", "-1")
    res = json.loads(out)["result"]
    assert code == 0 and res["passed"] and res["components"] == 24
    code, _, _ = run(capsys, "verify", "lewis", "4", "3")
    assert code == 2


def test_verify_all(capsys):
    code, out, err = run(capsys, "verify", "all", "--max-n", "30")
    res = json.loads(out)["result"]
    assert code == 0 and res["passed"] and len(res["criteria"]) == 11
    assert err.count("PASS") == 11


def test_spectrum_and_plot(capsys, tmp_path):
    png = tmp_path / "spec.png"
    code, out, _ = run(capsys, "spectrum", "--n", "1", "--s", "1", "--order", "32", "--count", "2", "--plot", str(png))
    ev = json.loads(out)["result"]["eigenvalues"]
    assert code == 0 and len(ev) == 2 and abs(ev[0][0] - 1) < 1e-10
    assert png.stat().st_size > 0


def test_complex_weight(capsys):
    code, out, _ = run(capsys, "zeta", "--n", "2", "--s", "0.5,14.13", "--order", "16")
    res = json.loads(out)["result"]
    assert code == 0 and res["s"] == [0.5, 14.13]


def test_zeta_sweep_csv(capsys, tmp_path):
    png = tmp_path / "zeta.png"
    code, out, _ = run(capsys, "zeta", "--n", "1", "--s", "1", "--order", "16",
                       "--sweep", "0.8:1.2:5", "--axis", "re", "--plot", str(png))
    lines = out.strip().splitlines()
    assert code == 0 and lines[0].startswith("re_s") and len(lines) == 6
    assert png.exists()


def test_lewis_check(capsys):
    code, out, _ = run(capsys, "lewis-check", "--phi", "inv", "--s", "1", "--lambda", "1")
    res = json.loads(out)["result"]
    assert code == 0 and res["exact_zero"] and res["exact_residual"] == "0"
    code, out, _ = run(capsys, "lewis-check", "--phi", "const", "--s", "0")
    assert code == 1 and not json.loads(out)["result"]["passed"]
    code, out, _ = run(capsys, "lewis-check", "--phi", "eigen", "--s", "1", "--n", "3", "--order", "24")
    assert code == 0 and json.loads(out)["result"]["residual"] < 1e-8


@pytest.mark.parametrize(
    "argv",
    [
        ["cosets", "0"],
        ["spectrum", "--n", "2", "--order", "200"],
        ["spectrum", "--n", "2", "--order", "3"],
        ["partition", "3/0"],
        ["partition", "0"],
        ["rho", "4", "X"],
        ["cosets", "4", "--format", "xml"],
        ["bogus"],
        ["zeta", "--n", "1", "--s", "0.5", "--order", "8"],
        ["cosets"],
    ],
)
def test_usage_errors(capsys, argv):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    capsys.readouterr()
    assert code == 2


def test_run_config_validation():
    with pytest.raises(UsageError):
        RunConfig("cosets", n=0)
    with pytest.raises(UsageError):
        RunConfig("spectrum", order=129)
    with pytest.raises(UsageError):
        RunConfig("cosets", fmt="xml")
    assert RunConfig("cosets", n=3).order == 32


def test_deterministic(capsys):
    _, a, _ = run(capsys, "psi", "12")
    _, b, _ = run(capsys, "psi", "12")
    assert a == b
