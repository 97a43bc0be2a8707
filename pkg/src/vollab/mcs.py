"""Monte Carlo simulation-study harness.

A design pairs a data-generating process with a set of assumed innovation
families and sample sizes.  Each replication derives its seed from the
master seed and the replication index, so serial and parallel executions
produce identical reports.  Per cell the report carries the mean
estimate, bias, the averaged QMLE robust standard error, the Monte Carlo
standard deviation of the estimates, and the true-parameter-recovery rate

    TPR = (K - ((theta - theta_hat)/theta) K) %
"""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import beta_egarch, cgarch, estimator, fgarch, gas
from .innovations import InnovationSpec


@dataclass(frozen=True)
class TprInput:
    theta: float
    theta_hat: float
    K: float = 95.0

    def __post_init__(self):
        if not self.theta > 0:
            raise ValueError("true parameter must be > 0")


def tpr(i: TprInput) -> float:
    """True-parameter-recovery percentage."""
    return i.K - ((i.theta - i.theta_hat) / i.theta) * i.K


def bias(estimates, truth) -> float:
    """mean(estimates) - truth."""
    return float(np.mean(np.asarray(estimates, dtype=float)) - truth)


def _dgp_innovation(d):
    return InnovationSpec(d.get("family", "norm"),
                          tuple(d.get("shape", ())),
                          float(d.get("skew", 1.0)))


def build_simulator(dgp: dict):
    """Turn a DGP description dict into simulate(n, burn, seed)."""
    model = dgp["model"]
    if model in ("garch", "fgarch"):
        p = fgarch.FGarchParams(
            omega=dgp["omega"], alpha=(dgp["alpha"],), beta=(dgp["beta"],),
            gamma=dgp.get("gamma", 2.0),
            zeta1=(dgp.get("zeta1", 0.0),), zeta2=(dgp.get("zeta2", 0.0),),
            innovation=_dgp_innovation(dgp))
        return lambda n, burn, seed: fgarch.simulate(p, n, burn, seed)
    if model == "gas":
        p = gas.GasParams.from_targets(
            dgp.get("mu_star", 0.0), dgp.get("sigma_star", 1.0),
            (dgp.get("a_mu", 0.0), dgp["a_sigma"]),
            (dgp.get("b_mu", 0.5), dgp["b_sigma"]),
            _dgp_innovation(dgp), dgp.get("scaling_power", 0.0))
        if "score_clip" in dgp:
            p = gas.GasParams(p.kappa, p.a, p.b, p.innovation,
                              p.scaling_power, float(dgp["score_clip"]))
        return lambda n, burn, seed: gas.gas_simulate(p, n, burn, seed)
    if model == "cgarch":
        p = cgarch.CGarchParams(
            dgp["omega"], dgp["rho"], dgp["phi"], dgp["alpha"], dgp["beta"],
            _dgp_innovation(dgp))
        return lambda n, burn, seed: cgarch.simulate(p, n, burn, seed)
    if model == "betaegarch":
        p = beta_egarch.BetaEgarchParams(
            omega=dgp["omega"], phi1=dgp["phi1"], kappa1=dgp["kappa1"],
            kappa_star=dgp.get("kappa_star", 0.0), nu=dgp["nu"],
            eta=dgp.get("eta", 1.0), components=dgp.get("components", 1),
            phi2=dgp.get("phi2", 0.0), kappa2=dgp.get("kappa2", 0.0))
        return lambda n, burn, seed: beta_egarch.simulate_beta(p, n, burn, seed)
    raise ValueError(f"unknown DGP model {model!r}")


@dataclass(frozen=True)
class McsDesign:
    """Study description: DGP, fit specs, sizes, and meta-parameters."""

    dgp: dict
    truth: float
    target: str
    seed: int
    sample_sizes: tuple
    replications: int
    fit_specs: tuple  # (label, ModelSpec) pairs
    burn: int = 2000
    K: float = 95.0
    n_starts: int = 1
    max_failure_rate: float = 0.2

    def __post_init__(self):
        if self.replications < 1:
            raise ValueError("need at least one replication")
        if not self.sample_sizes:
            raise ValueError("need at least one sample size")
        build_simulator(self.dgp)  # validate eagerly


@dataclass
class McsReport:
    """Aggregated per (innovation, N) results plus the failure log."""

    rows: list
    failures: list
    design: McsDesign = None

    def to_csv(self, path):
        cols = ["innovation", "N", "mean_estimate", "bias", "se_qmle",
                "sd_mc", "tpr_pct", "n_ok", "n_failed"]
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(cols)
            for r in self.rows:
                w.writerow([r[c] if isinstance(r[c], (str, int)) else repr(r[c])
                            for c in cols])

    def cell(self, innovation, N):
        for r in self.rows:
            if r["innovation"] == innovation and r["N"] == N:
                return r
        raise KeyError((innovation, N))


def _run_replication(design: McsDesign, rep: int):
    """One replication: simulate once, fit every (spec, N) cell.

    Returns a list of (label, N, estimate, robust_se) tuples with None
    entries marking failures.
    """
    sim = build_simulator(design.dgp)
    n_max = max(design.sample_sizes)
    data = sim(n_max, design.burn, [design.seed, rep])
    out = []
    for label, spec in design.fit_specs:
        for N in design.sample_sizes:
            try:
                fr = estimator.fit(spec, data[:N], seed=design.seed,
                                   n_starts=design.n_starts)
                if not fr.convergence["converged"]:
                    raise ArithmeticError("did not converge")
                est = fr.estimand(design.target)
                se = fr.se_robust.get(design.target)
                if se is None or not np.isfinite(est):
                    raise ArithmeticError("no usable standard error")
                out.append((label, N, float(est), float(se)))
            except (ArithmeticError, ValueError, KeyError,
                    np.linalg.LinAlgError) as exc:
                out.append((label, N, None, str(exc)))
    return out


def run_study(design: McsDesign, jobs: int = 1) -> McsReport:
    """Execute the study; deterministic for any `jobs` setting."""
    reps = range(design.replications)
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=int(jobs)) as pool:
            per_rep = list(pool.map(_run_replication, [design] * design.replications, reps))
    else:
        per_rep = [_run_replication(design, r) for r in reps]

    cells = {}
    failures = []
    for rep, results in enumerate(per_rep):
        for label, N, est, se in results:
            cell = cells.setdefault((label, N), {"est": [], "se": []})
            if est is None:
                failures.append({"innovation": label, "N": N, "rep": rep,
                                 "reason": se})
            else:
                cell["est"].append(est)
                cell["se"].append(se)

    total = design.replications * len(design.fit_specs) * len(design.sample_sizes)
    if total and len(failures) / total > design.max_failure_rate:
        raise RuntimeError(
            f"{len(failures)}/{total} replication fits failed "
            f"(> {design.max_failure_rate:.0%} tolerated)")

    rows = []
    for label, _spec in design.fit_specs:
        for N in design.sample_sizes:
            cell = cells.get((label, N), {"est": [], "se": []})
            est = np.asarray(cell["est"])
            n_ok = est.shape[0]
            n_failed = sum(1 for f in failures
                           if f["innovation"] == label and f["N"] == N)
            if n_ok == 0:
                rows.append({"innovation": label, "N": N,
                             "mean_estimate": float("nan"),
                             "bias": float("nan"), "se_qmle": float("nan"),
                             "sd_mc": float("nan"), "tpr_pct": float("nan"),
                             "n_ok": 0, "n_failed": n_failed})
                continue
            mean_est = float(np.mean(est))
            rows.append({
                "innovation": label,
                "N": N,
                "mean_estimate": mean_est,
                "bias": bias(est, design.truth),
                "se_qmle": float(np.mean(cell["se"])),
                "sd_mc": float(np.std(est, ddof=1)) if n_ok > 1 else 0.0,
                "tpr_pct": tpr(TprInput(design.truth, mean_est, design.K)),
                "n_ok": n_ok,
                "n_failed": n_failed,
            })
    return McsReport(rows=rows, failures=failures, design=design)


def design_from_dict(cfg: dict) -> McsDesign:
    """Build a design from a parsed config mapping with sections
    `dgp`, `study`, and `innovations`."""
    dgp = dict(cfg["dgp"])
    study = dict(cfg["study"])
    innov = cfg.get("innovations", [])
    model = study.get("fit_model", "garch")
    fit_specs = []
    for entry in innov:
        if isinstance(entry, str):
            entry = {"family": entry}
        family = entry["family"]
        fix = dict(entry.get("fix", {}))
        spec = estimator.ModelSpec(
            model, family=family, fs_skew=bool(entry.get("fs_skew", False)),
            components=int(entry.get("components", study.get("components", 1))),
            scaling_power=float(entry.get("scaling_power",
                                          study.get("scaling_power", 0.0))),
            link=entry.get("link", study.get("link", "log")),
            include_location=bool(entry.get("include_location",
                                            study.get("include_location", True))),
            score_clip=entry.get("score_clip", study.get("score_clip")),
            fix=fix)
        fit_specs.append((entry.get("label", family), spec))
    return McsDesign(
        dgp=dgp,
        truth=float(study["truth"]),
        target=study["target"],
        seed=int(study["seed"]),
        sample_sizes=tuple(int(n) for n in study["sample_sizes"]),
        replications=int(study["replications"]),
        fit_specs=tuple(fit_specs),
        burn=int(study.get("burn", 2000)),
        K=float(study.get("K", 95.0)),
        n_starts=int(study.get("n_starts", 1)),
        max_failure_rate=float(study.get("max_failure_rate", 0.2)))
