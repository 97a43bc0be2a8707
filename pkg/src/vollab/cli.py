"""Command-line front end.

Subcommands: ingest, fit, simulate, mcs, diagnose, report.  Configuration
files are TOML; every output is deterministic given the config and seed.
Exit codes: 0 success, 1 runtime error, 2 configuration error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import diagnostics, estimator, fgarch, market_data, mcs, mean_filter


class ConfigError(Exception):
    pass


def _load_toml(path):
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"bad TOML in {path}: {exc}") from exc


def _jobs(args):
    if getattr(args, "jobs", None):
        return args.jobs
    env = os.environ.get("VOLLAB_JOBS")
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise ConfigError(f"VOLLAB_JOBS must be an integer, got {env!r}") from exc
    return 1


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_ingest(args):
    prices = market_data.read_prices_csv(args.infile)
    returns = market_data.to_log_returns(prices)
    market_data.write_returns_csv(returns, args.out)
    stats = market_data.describe(returns) if len(returns) >= 4 else None
    print(f"wrote {len(returns)} returns to {args.out}")
    if stats:
        print(f"mean={stats.mean:.6f} variance={stats.variance:.6f} "
              f"skewness={stats.skewness:.4f} kurtosis={stats.kurtosis:.4f} "
              f"annualized_vol_pct={stats.annualized_vol_pct:.2f}")
    return 0


def _spec_from_args(args, cfg):
    model_cfg = cfg.get("model", {}) if cfg else {}
    fix = dict(model_cfg.get("fix", {}))
    return estimator.ModelSpec(
        args.model,
        family=args.innovation,
        fs_skew=bool(model_cfg.get("fs_skew", False)),
        free_gamma=bool(model_cfg.get("free_gamma", args.model == "fgarch")),
        free_zeta=bool(model_cfg.get("free_zeta", args.model == "fgarch")),
        components=int(model_cfg.get("components", 1)),
        scaling_power=float(model_cfg.get("scaling_power", 0.0)),
        link=model_cfg.get("link", "log"),
        include_location=bool(model_cfg.get("include_location", True)),
        fix=fix)


def _prepare_series(args, cfg):
    returns = market_data.read_returns_csv(args.data)
    mean_cfg = (cfg or {}).get("arma", {})
    m = int(mean_cfg.get("m", 0))
    n = int(mean_cfg.get("n", 0))
    include_mean = bool(mean_cfg.get("include_mean", True))
    if m or n:
        raise ConfigError(
            "fit with a nonzero ARMA order requires pre-filtering; "
            "run the mean fit separately and pass the residuals")
    if include_mean:
        return mean_filter.demean(returns), returns.dates
    return returns.values, returns.dates


def _fit_report(fr, spec):
    lines = [f"model: {fr.model}", f"innovation: {spec.family}",
             f"n_obs: {fr.n_obs}", f"loglik: {fr.loglik:.6f}"]
    for k in ("AIC", "BIC", "SIC", "HQIC"):
        lines.append(f"{k}: {fr.criteria[k]:.6f}")
    for name, val in fr.params.items():
        se = fr.se_robust.get(name)
        se_txt = f" (robust se {se:.4f})" if se is not None else ""
        lines.append(f"{name}: {val:.6f}{se_txt}")
    P = _persistence_of(fr)
    if P is not None:
        lines.append(f"persistence: {P:.6f}")
        if 0 < P < 1:
            lines.append(f"half_life_days: {fgarch.half_life(P):.4f}")
    conv = fr.convergence
    lines.append(f"converged: {conv['converged']} "
                 f"(iterations {conv['iterations']}, "
                 f"grad_norm {conv['grad_norm']:.3g})")
    return "\n".join(lines)


def _persistence_of(fr):
    p = fr.params
    if fr.model in ("garch", "fgarch"):
        from .innovations import InnovationSpec, StandardizedDensity
        shape = tuple(p[n] for n in estimator._SHAPE_NAMES[fr.spec.family])
        d = StandardizedDensity(InnovationSpec(
            fr.spec.family, shape, p.get("eta", 1.0)))
        fp = fgarch.FGarchParams(
            p["omega"], (p["alpha"],), (p["beta"],), p.get("gamma", 2.0),
            (p.get("zeta1", 0.0),), (p.get("zeta2", 0.0),), d)
        return fgarch.persistence(fp)
    if fr.model == "tgarch":
        return None
    if fr.model == "gas":
        return p.get("b_sigma")
    if fr.model == "cgarch":
        return p.get("rho")
    if fr.model == "betaegarch":
        return p.get("phi1")
    return None


def cmd_fit(args):
    cfg = _load_toml(args.config) if args.config else {}
    spec = _spec_from_args(args, cfg)
    data, dates = _prepare_series(args, cfg)
    fr = estimator.fit(spec, data, seed=args.seed, n_starts=args.starts,
                       compute_se=args.robust_se)
    print(_fit_report(fr, spec))
    if args.out:
        payload = {
            "model": fr.model, "family": spec.family, "params": fr.params,
            "se_plain": fr.se_plain, "se_robust": fr.se_robust,
            "loglik": fr.loglik, "criteria": fr.criteria,
            "convergence": fr.convergence, "n_obs": fr.n_obs,
            "persistence": _persistence_of(fr),
            "dates": [d.isoformat() for d in dates],
            "sigma": (list(map(float, fr.path.sigma))
                      if fr.path is not None and hasattr(fr.path, "sigma")
                      else None),
        }
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=1, sort_keys=True)
        print(f"wrote fit file {args.out}")
    return 0


def cmd_simulate(args):
    cfg = _load_toml(args.config)
    if "dgp" not in cfg or "simulate" not in cfg:
        raise ConfigError("simulate config needs [dgp] and [simulate] sections")
    sim = mcs.build_simulator(dict(cfg["dgp"]))
    s = cfg["simulate"]
    try:
        n, burn, seed = int(s["n"]), int(s.get("burn", 2000)), int(s["seed"])
    except KeyError as exc:
        raise ConfigError(f"missing simulate key: {exc}") from exc
    x = sim(n, burn, seed)
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "return_pct"])
        for t, v in enumerate(x):
            w.writerow([t, repr(float(v))])
    print(f"wrote {n} simulated returns to {args.out}")
    return 0


def cmd_mcs(args):
    cfg = _load_toml(args.design)
    if args.scale:
        override = cfg.get("scale", {}).get(args.scale)
        if override is None:
            raise ConfigError(f"design has no [scale.{args.scale}] section")
        cfg = dict(cfg)
        cfg["study"] = {**cfg["study"], **override}
    try:
        design = mcs.design_from_dict(cfg)
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"bad design: {exc}") from exc
    report = mcs.run_study(design, jobs=_jobs(args))
    report.to_csv(args.out)
    print(f"wrote study report to {args.out} "
          f"({len(report.rows)} cells, {len(report.failures)} failed fits)")
    return 0


def cmd_diagnose(args):
    returns = market_data.read_returns_csv(args.data)
    x = mean_filter.demean(returns)
    lags = [int(s) for s in args.lags.split(",") if s]
    tests = [t.strip() for t in args.tests.split(",") if t.strip()]
    rows = []
    for lag in lags:
        if "wlb" in tests:
            for kind, series in (("WLB-SR", x), ("WLB-SSR", x * x)):
                t = diagnostics.weighted_ljung_box(series, lag, kind=kind)
                rows.append((t.kind, lag, t.statistic, t.p_value))
        if "archlm" in tests:
            t = diagnostics.arch_lm(x, lag)
            rows.append((t.kind, lag, t.statistic, t.p_value))
        if "pq" in tests:
            t = diagnostics.portmanteau_q(x * x, lag)
            rows.append((t.kind, lag, t.statistic, t.p_value))
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["test", "lag", "statistic", "p_value"])
        for r in rows:
            w.writerow([r[0], r[1], repr(r[2]), repr(r[3])])
    for r in rows:
        print(f"{r[0]:8s} lag={r[1]:<3d} stat={r[2]:12.4f} p={r[3]:.4f}")
    return 0


def cmd_report(args):
    with open(args.fit, encoding="utf-8") as fh:
        fit = json.load(fh)
    os.makedirs(args.out_dir, exist_ok=True)
    emit_plot_data(fit, args.out_dir)
    print(f"wrote plot data to {args.out_dir}")
    return 0


def emit_plot_data(fit: dict, out_dir, days=100):
    """Write per-figure CSVs: persistence decay, news impact (threshold
    fits), and the conditional standard-deviation path."""
    P = fit.get("persistence")
    if P is not None and 0 < P < 1:
        with open(os.path.join(out_dir, "decay.csv"), "w", newline="",
                  encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["day", "value"])
            for d, v in enumerate(fgarch.decay_curve(P, days), start=1):
                w.writerow([d, repr(float(v))])
    if fit.get("model") == "tgarch":
        p = fit["params"]
        t = fgarch.TGarchParams(p["omega"], p["alpha"], p["beta"],
                                p["gamma_lev"])
        grid = np.linspace(-5.0, 5.0, 201)
        ni = fgarch.news_impact(t, grid)
        with open(os.path.join(out_dir, "news_impact.csv"), "w", newline="",
                  encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["eps", "sigma2"])
            for e, v in zip(grid, ni):
                w.writerow([repr(float(e)), repr(float(v))])
    if fit.get("sigma"):
        dates = fit.get("dates") or list(range(len(fit["sigma"])))
        with open(os.path.join(out_dir, "conditional_sd.csv"), "w",
                  newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["date", "sigma"])
            for d, s in zip(dates, fit["sigma"]):
                w.writerow([d, repr(float(s))])


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(prog="vollab",
                                 description="conditional-volatility toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="prices CSV to percent log-returns")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("fit", help="maximum-likelihood model fit")
    p.add_argument("data", help="returns CSV (date,return_pct)")
    p.add_argument("--model", required=True,
                   choices=sorted(estimator._ADAPTERS))
    p.add_argument("--innovation", default="norm")
    p.add_argument("--config", help="TOML with [model]/[arma] sections")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--starts", type=int, default=5)
    p.add_argument("--robust-se", action=argparse.BooleanOptionalAction,
                   default=True)
    p.add_argument("--out", help="write a JSON fit file")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("simulate", help="simulate a model path")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("mcs", help="run a Monte Carlo study design")
    p.add_argument("--design", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--scale", help="apply the design's [scale.<name>] overrides")
    p.add_argument("--jobs", type=int)
    p.set_defaults(func=cmd_mcs)

    p = sub.add_parser("diagnose", help="residual diagnostics")
    p.add_argument("data")
    p.add_argument("--lags", default="5")
    p.add_argument("--tests", default="wlb,archlm,pq")
    p.add_argument("--out", default="diagnostics.csv")
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("report", help="emit plot-data CSVs from a fit file")
    p.add_argument("--fit", required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failure
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
