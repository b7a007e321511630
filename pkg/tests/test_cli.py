import json
from pathlib import Path

import pytest

from noisyodds import cli, fairsolver
from noisyodds.errors import NoRootError


def run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_fair_odds_even_money(capsys):
    code, out, _ = run(["fair-odds", "--pc", "0.5", "--eps", "0.5"], capsys)
    assert code == 0
    assert "m                  = 0" in out
    assert "fair odds          = 2" in out
    assert "segment            = iii" in out


def test_fair_odds_longshot_and_favorite(capsys):
    code, out_lo, _ = run(["fair-odds", "--pc", "0.3", "--eps", "0.5"], capsys)
    assert code == 0
    m_lo = float([l for l in out_lo.splitlines() if l.startswith("m ")][0].split("=")[1])
    odds = float([l for l in out_lo.splitlines()
                  if l.startswith("fair odds")][0].split("=")[1])
    assert m_lo > 0
    assert odds < 1 / 0.3
    code, out_hi, _ = run(["fair-odds", "--pc", "0.7", "--eps", "0.5"], capsys)
    m_hi = float([l for l in out_hi.splitlines() if l.startswith("m ")][0].split("=")[1])
    assert m_hi == pytest.approx(-m_lo, abs=1e-12)


def test_fair_odds_validation_exit_code(capsys):
    code, _, err = run(["fair-odds", "--pc", "1.5", "--eps", "0.5"], capsys)
    assert code == 2
    assert "error" in err


def test_no_root_exit_code(capsys, monkeypatch):
    def boom(p_c, epsilon):
        raise NoRootError("synthetic")
    monkeypatch.setattr(cli, "solve_fair_adjustment", boom)
    code, _, err = run(["fair-odds", "--pc", "0.3", "--eps", "0.5"], capsys)
    assert code == 3
    assert "synthetic" in err


def test_unknown_flag_exits_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["fair-odds", "--pc", "0.5", "--eps", "0.5", "--bogus", "1"])
    assert exc.value.code == 2


def test_w1star_command(capsys):
    code, out, _ = run(["w1star", "--pt", "0.3", "--eps", "1.0"], capsys)
    assert code == 0
    assert "w1*        = 0" in out
    code, out, _ = run(["w1star", "--pt", "0.3", "--eps", "0"], capsys)
    assert code == 0
    assert "degenerate = True" in out


def test_margin_command_with_mc(capsys):
    code, out, _ = run(["margin", "--pt", "0.3", "--eps", "0.5",
                        "--mc-trials", "100000", "--seed", "4"], capsys)
    assert code == 0
    assert "mean expected seller margin" in out
    assert "monte carlo" in out


def test_posterior_command(capsys, tmp_path):
    out_csv = tmp_path / "dens.csv"
    code, out, _ = run(["posterior", "--pc", "0.5", "--eps", "1",
                        "--out", str(out_csv)], capsys)
    assert code == 0
    assert "support       = [0.25" in out
    assert out_csv.exists()
    manifest = json.loads((tmp_path / "dens.manifest.json").read_text())
    assert manifest["command"] == "posterior"
    assert str(out_csv) in manifest["output_paths"]


def test_posterior_degenerate_exit_2(capsys):
    code, _, err = run(["posterior", "--pc", "0", "--eps", "0.5"], capsys)
    assert code == 2


def test_simulate_reproducible_ledger(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        code, _, _ = run(["simulate", "--pt", "0.5", "--eps", "1",
                          "--trials", "5000", "--seed", "7", "--out", str(path)],
                         capsys)
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    manifest = json.loads((tmp_path / "a.manifest.json").read_text())
    assert manifest["seed"] == 7
    assert manifest["parameters"]["trials"] == 5000


def test_simulate_strategist_profits(capsys):
    code, out, _ = run(["simulate", "--eps", "0.5", "--trials", "300000",
                        "--seed", "2", "--strategy", "figure5"], capsys)
    assert code == 0
    line = [l for l in out.splitlines() if "player 1 mean payoff" in l][0]
    assert line.split("=")[1].strip().startswith("+")


def test_simulate_binned_margins(capsys):
    code, out, _ = run(["simulate", "--eps", "0.5", "--trials", "200000",
                        "--seed", "2", "--bins", "0.3", "0.7"], capsys)
    assert code == 0
    assert "p_c in [0.295, 0.305]" in out


@pytest.mark.parametrize("figure_id", [1, 2, 3, 4, 6, 7, 8, 9])
def test_figures_emit_csv_and_manifest(figure_id, capsys, tmp_path):
    code, out, _ = run(["figures", "--id", str(figure_id),
                        "--out", str(tmp_path)], capsys)
    assert code == 0
    csv_path = tmp_path / f"figure{figure_id}.csv"
    assert csv_path.exists()
    header = csv_path.read_text().splitlines()[0]
    assert "," in header
    manifest = json.loads((tmp_path / f"figure{figure_id}.manifest.json").read_text())
    assert manifest["parameters"]["id"] == figure_id


def test_figures_reproducible(tmp_path, capsys):
    d1, d2 = tmp_path / "one", tmp_path / "two"
    for d in (d1, d2):
        assert run(["figures", "--id", "7", "--out", str(d)], capsys)[0] == 0
    assert (d1 / "figure7.csv").read_bytes() == (d2 / "figure7.csv").read_bytes()


def test_figures_unknown_id_exit_2(capsys):
    code, _, err = run(["figures", "--id", "5", "--out", "/tmp"], capsys)
    assert code == 2


def test_figure3_series_flat_below_chance(tmp_path, capsys):
    run(["figures", "--id", "3", "--out", str(tmp_path)], capsys)
    import csv as csvmod
    with open(tmp_path / "figure3.csv", newline="") as fh:
        rows = [r for r in csvmod.DictReader(fh)
                if r["w1"] == "0.5" and r["epsilon"] == "1"
                and float(r["p_t"]) < 0.5]
    vals = [float(r["mean_seller_margin"]) for r in rows]
    assert max(vals) - min(vals) < 1e-12


def test_figure7_crosses_zero_at_even_odds(tmp_path, capsys):
    run(["figures", "--id", "7", "--out", str(tmp_path)], capsys)
    import csv as csvmod
    with open(tmp_path / "figure7.csv", newline="") as fh:
        for r in csvmod.DictReader(fh):
            if r["p_c"] == "0.5":
                assert abs(float(r["m"])) < 1e-12


def test_figure1_envelope_endpoints(tmp_path, capsys):
    run(["figures", "--id", "1", "--out", str(tmp_path)], capsys)
    import csv as csvmod
    with open(tmp_path / "figure1.csv", newline="") as fh:
        for r in csvmod.DictReader(fh):
            if r["p_t"] == "0.5" and r["epsilon"] == "1":
                assert float(r["l"]) == 0.0
                assert float(r["h"]) == 1.0


def test_seed_env_default(monkeypatch):
    monkeypatch.setenv("NOISYODDS_SEED", "99")
    parser = cli.build_parser()
    args = parser.parse_args(["verify"])
    assert args.seed == 99


def test_run_verify_passes_on_small_grid(tmp_path):
    out = tmp_path / "findings.csv"
    code, findings = cli.run_verify(mc_trials=300_000, out=str(out))
    assert code == 0
    assert out.exists()
    assert (tmp_path / "findings.manifest.json").exists()
    statuses = {f.status for f in findings}
    assert statuses <= {"ok", "documented-discrepancy"}
    assert any(f.quantity == "asymmetry-sign-claim"
               and f.status == "documented-discrepancy" for f in findings)


def test_run_verify_flags_tampered_constant(monkeypatch):
    original = fairsolver._basic_low

    def tampered(p_c, e):
        i0, i1 = original(p_c, e)
        return i0 * 1.001, i1  # corrupt one closed form

    monkeypatch.setattr(fairsolver, "_basic_low", tampered)
    code, findings = cli.run_verify(mc_trials=300_000)
    assert code == 1
    assert any(f.status == "fail" and f.variant == "basic-game" for f in findings)
