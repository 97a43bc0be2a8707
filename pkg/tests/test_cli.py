import csv
import json

import numpy as np
import pytest

from vollab import cli, fgarch, market_data
from vollab.innovations import InnovationSpec


@pytest.fixture
def prices_csv(tmp_path):
    path = tmp_path / "prices.csv"
    rng = np.random.default_rng(0)
    closes = 100.0 * np.exp(np.cumsum(0.01 * rng.standard_normal(40)))
    rows = ["date,close"]
    for i, c in enumerate(closes):
        rows.append(f"2021-01-{i + 1:02d},{c:.6f}" if i < 28
                    else f"2021-02-{i - 27:02d},{c:.6f}")
    path.write_text("\n".join(rows) + "\n")
    return path


@pytest.fixture
def returns_csv(tmp_path):
    # enough simulated GARCH data for a fit
    p = fgarch.FGarchParams(omega=0.05, alpha=(0.08,), beta=(0.88,),
                            innovation=InnovationSpec("norm"))
    r = fgarch.simulate(p, 1200, 500, seed=1)
    import datetime as dt
    dates = tuple(dt.date(2015, 1, 1) + dt.timedelta(days=i) for i in range(len(r)))
    path = tmp_path / "returns.csv"
    market_data.write_returns_csv(market_data.ReturnSeries(dates, r), path)
    return path


def test_ingest(prices_csv, tmp_path, capsys):
    out = tmp_path / "returns.csv"
    rc = cli.main(["ingest", "--in", str(prices_csv), "--out", str(out)])
    assert rc == 0
    assert "wrote 39 returns" in capsys.readouterr().out
    back = market_data.read_returns_csv(out)
    assert len(back) == 39


def test_fit_writes_json(returns_csv, tmp_path, capsys):
    out = tmp_path / "fit.json"
    rc = cli.main(["fit", str(returns_csv), "--model", "garch",
                   "--innovation", "norm", "--starts", "1",
                   "--out", str(out)])
    assert rc == 0
    text = capsys.readouterr().out
    assert "persistence:" in text and "converged: True" in text
    fit = json.loads(out.read_text())
    assert fit["model"] == "garch"
    assert 0.8 < fit["persistence"] < 1.0
    assert len(fit["sigma"]) == 1200


def test_simulate_and_diagnose(tmp_path, capsys):
    cfg = tmp_path / "sim.toml"
    cfg.write_text(
        '[dgp]\nmodel = "garch"\nomega = 0.05\nalpha = 0.08\nbeta = 0.88\n'
        'family = "std"\nshape = [6.0]\n\n'
        "[simulate]\nn = 600\nseed = 3\nburn = 200\n")
    out = tmp_path / "sim.csv"
    assert cli.main(["simulate", "--config", str(cfg), "--out", str(out)]) == 0

    # the simulated series carries ARCH effects at every lag tested
    import datetime as dt
    with open(out) as fh:
        vals = [float(row["return_pct"]) for row in csv.DictReader(fh)]
    dates = tuple(dt.date(2015, 1, 1) + dt.timedelta(days=i) for i in range(len(vals)))
    rpath = tmp_path / "r.csv"
    market_data.write_returns_csv(market_data.ReturnSeries(dates, np.array(vals)), rpath)

    dout = tmp_path / "diag.csv"
    rc = cli.main(["diagnose", str(rpath), "--lags", "5,9",
                   "--tests", "wlb,archlm,pq", "--out", str(dout)])
    assert rc == 0
    with open(dout) as fh:
        rows = list(csv.DictReader(fh))
    kinds = {r["test"] for r in rows}
    assert kinds == {"WLB-SR", "WLB-SSR", "ARCH-LM", "PQ"}
    assert len(rows) == 8  # four tests at two lags
    arch_p = [float(r["p_value"]) for r in rows if r["test"] == "ARCH-LM"]
    assert max(arch_p) < 0.05


def test_mcs_and_scale_override(tmp_path, capsys):
    design = tmp_path / "design.toml"
    design.write_text(
        'innovations = ["norm"]\n\n'
        '[dgp]\nmodel = "garch"\nomega = 0.05\nalpha = 0.08\nbeta = 0.88\n'
        'family = "norm"\n\n'
        '[study]\ntruth = 0.96\ntarget = "alpha+beta"\nseed = 11\n'
        "sample_sizes = [400]\nreplications = 2\nmax_failure_rate = 0.9\n\n"
        "[scale.tiny]\nreplications = 1\n")
    out = tmp_path / "report.csv"
    rc = cli.main(["mcs", "--design", str(design), "--out", str(out),
                   "--scale", "tiny"])
    assert rc == 0
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 1
    assert int(rows[0]["n_ok"]) + int(rows[0]["n_failed"]) == 1

    rc = cli.main(["mcs", "--design", str(design), "--out", str(out),
                   "--scale", "missing"])
    assert rc == 2  # configuration error


def test_report_plot_data(returns_csv, tmp_path):
    fit_file = tmp_path / "fit.json"
    rc = cli.main(["fit", str(returns_csv), "--model", "garch",
                   "--starts", "1", "--no-robust-se", "--out", str(fit_file)])
    assert rc == 0
    out_dir = tmp_path / "plots"
    assert cli.main(["report", "--fit", str(fit_file),
                     "--out-dir", str(out_dir)]) == 0
    assert (out_dir / "decay.csv").exists()
    assert (out_dir / "conditional_sd.csv").exists()
    with open(out_dir / "decay.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 100
    assert float(rows[0]["value"]) > float(rows[-1]["value"])


def test_bad_config_exit_code(tmp_path, capsys):
    missing = tmp_path / "nope.toml"
    assert cli.main(["simulate", "--config", str(missing),
                     "--out", str(tmp_path / "x.csv")]) == 2
    bad = tmp_path / "bad.toml"
    bad.write_text("not toml ][")
    assert cli.main(["simulate", "--config", str(bad),
                     "--out", str(tmp_path / "x.csv")]) == 2
