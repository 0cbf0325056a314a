"""Command-line experiment harness.

Every experiment is a named subcommand with a checked-in JSON config,
writing per-run trajectory files (CSV by default), per-run and aggregate
JSON summaries, and (with --plots) PNG figures. Exit code 0 on success,
1 when any run fails to converge, 2 on config/usage errors.
"""

from __future__ import annotations

import argparse
import importlib.resources
import json
import math
import sys
from pathlib import Path

import numpy as np

from newtonlab import diagnostics, linalg, optimizers
from newtonlab.models import ModelSpec, build
from newtonlab.objectives import (
    Quadrature1D,
    Quadrature2D,
    TorusSpec,
    circle_loss,
    diffusion_reaction_exact,
    pinn1d_loss,
    pinn2d_loss,
    regression_loss,
    sine_target,
    torus_loss,
    torus_point,
)

TWO_PI = 2.0 * math.pi


class ConfigError(ValueError):
    pass


def _report_or_none(objective, theta):
    """Stationary-point report at theta, or None when the endpoint of a
    diverged run has no finite derivatives to classify."""
    from newtonlab.diffgraph import NonFiniteDerivative

    try:
        return diagnostics.StationaryPointReport.from_objective(objective, theta)
    except (NonFiniteDerivative, np.linalg.LinAlgError):
        return None


def _max_abs_or_nan(fn, theta):
    try:
        values = np.asarray(fn(theta), dtype=float)
    except (ArithmeticError, FloatingPointError, ValueError):
        return float("nan")
    if not np.any(np.isfinite(values)):
        return float("nan")
    return float(np.nanmax(np.abs(values)))


# ---------------------------------------------------------------------------
# config plumbing
# ---------------------------------------------------------------------------

def load_config(experiment: str, path=None) -> dict:
    """Checked-in config for the experiment, or a user-supplied file."""
    if path is not None:
        try:
            with open(path) as fh:
                return json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
    ref = importlib.resources.files("newtonlab.configs") / f"{experiment}.json"
    with ref.open() as fh:
        return json.load(fh)


def parse_seeds(text: str):
    """Seed list syntax: "3", "0..9", or "0,2,5"."""
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(tok) for tok in text.split(",") if tok != ""]


def _model_from(cfg: dict) -> ModelSpec:
    try:
        return ModelSpec.from_json_dict(cfg["model"])
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad model spec: {exc}") from exc


def _target_from(cfg: dict, key: str, dim: int = 1):
    t = cfg[key]
    return sine_target(float(t["amplitude"]), int(t["cycles"]), dim=dim)


def _quad_from(cfg: dict, dim: int = 1):
    q = cfg.get("quadrature", {"rule": "midpoint", "n": 100})
    n = int(q.get("n", 100))
    if dim == 2:
        return Quadrature2D.midpoint(n)
    if q.get("rule", "midpoint") == "endpoint":
        return Quadrature1D.endpoint(n)
    return Quadrature1D.midpoint(n)


def _optcfg_from(block: dict) -> optimizers.OptimizerConfig:
    try:
        return optimizers.OptimizerConfig(**block)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad optimizer config: {exc}") from exc


def _write_json(path: Path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_traj(rec: optimizers.TrajectoryRecord, path_base: Path, fmt: str):
    if fmt == "json":
        rows = list(rec.csv_rows())
        header, data = rows[0], rows[1:]
        _write_json(path_base.with_suffix(".json"), [dict(zip(header, r)) for r in data])
    else:
        rec.to_csv(path_base.with_suffix(".csv"))


def _wrap_angles(theta: np.ndarray) -> np.ndarray:
    return np.mod(theta, TWO_PI)


def _merge_mod_2pi(points, tol: float):
    """Cluster angle vectors modulo 2 pi with the given merge tolerance."""
    reps = []
    for p in points:
        p = _wrap_angles(np.asarray(p, dtype=float))
        for rep in reps:
            d = np.abs(p - rep)
            d = np.minimum(d, TWO_PI - d)
            if np.max(d) < tol:
                break
        else:
            reps.append(p)
    return reps


# ---------------------------------------------------------------------------
# experiment runners
# ---------------------------------------------------------------------------

def run_circle(cfg, out: Path, fmt: str, plots: bool):
    obj = circle_loss()
    optcfg = _optcfg_from(cfg["optimizer"])
    rng = np.random.default_rng(int(cfg.get("seed", 0)))
    runs = []
    for i in range(int(cfg.get("inits", 20))):
        theta0 = rng.uniform(0.0, TWO_PI, size=1)
        rec = optimizers.run(obj, theta0, optcfg)
        theta_star = float(_wrap_angles(rec.theta_final)[0])
        bundle = obj.derivatives(rec.theta_final)
        runs.append({
            "theta0": float(theta0[0]),
            "theta_star": theta_star,
            "converged": rec.converged,
            "second_derivative": float(bundle.hessian[0, 0]),
            "classification": diagnostics.classify(
                np.diag(bundle.hessian), diagnostics.default_zero_tol(np.diag(bundle.hessian))
            ),
        })
    summary = {"experiment": "circle", "runs": runs,
               "all_converged": all(r["converged"] for r in runs)}
    _write_json(out / "summary_circle.json", summary)
    if plots:
        _plot_circle(runs, out / "fig_circle_0.png")
    return (0 if summary["all_converged"] else 1), summary


def _torus_runs(cfg, optcfg, ortho=False):
    spec = TorusSpec(**cfg.get("torus", {}))
    obj = torus_loss(spec)
    rng = np.random.default_rng(int(cfg.get("seed", 0)))
    recs = []
    for _ in range(int(cfg.get("inits", 25))):
        theta0 = rng.uniform(0.0, TWO_PI, size=2)
        recs.append((theta0, optimizers.run(obj, theta0, optcfg)))
    return spec, obj, recs


def run_torus(cfg, out: Path, fmt: str, plots: bool):
    spec, obj, recs = _torus_runs(cfg, _optcfg_from(cfg["optimizer"]))
    runs = []
    for i, (theta0, rec) in enumerate(recs):
        _write_traj(rec, out / f"traj_torus_seed{i}", fmt)
        report = diagnostics.StationaryPointReport.from_objective(obj, rec.theta_final)
        runs.append({
            "theta0": list(theta0),
            "theta_star": list(_wrap_angles(rec.theta_final)),
            "converged": rec.converged,
            "loss": report.loss,
            "classification": report.classification,
        })
    summary = {"experiment": "torus", "runs": runs,
               "all_converged": all(r["converged"] for r in runs)}
    _write_json(out / "summary_torus.json", summary)
    if plots:
        _plot_torus(runs, out / "fig_torus_0.png")
    return (0 if summary["all_converged"] else 1), summary


def run_torus_census(cfg, out: Path, fmt: str, plots: bool):
    spec, obj, recs = _torus_runs(cfg, _optcfg_from(cfg["optimizer"]))
    merge_tol = float(cfg.get("merge_tol", 1e-5))
    endpoints = [rec.theta_final for _, rec in recs if rec.converged]
    reps = _merge_mod_2pi(endpoints, merge_tol)
    points = []
    counts = {"minimum": 0, "maximum": 0, "saddle": 0, "degenerate": 0}
    for rep in sorted(reps, key=lambda p: (round(p[0], 6), round(p[1], 6))):
        report = diagnostics.StationaryPointReport.from_objective(obj, rep)
        counts[report.classification] += 1
        points.append({
            "theta": list(rep),
            "position": list(torus_point(spec, rep)),
            "x3": float(torus_point(spec, rep)[2]),
            "hessian_diag": [float(report.eigenvalues[0]), float(report.eigenvalues[-1])],
            "eigenvalues": list(report.eigenvalues),
            "loss": report.loss,
            "classification": report.classification,
        })
    summary = {
        "experiment": "torus_census",
        "n_runs": len(recs),
        "n_converged": len(endpoints),
        "stationary_points": points,
        "counts": counts,
    }
    _write_json(out / "summary_torus_census.json", summary)
    if plots:
        _plot_torus_census(points, out / "fig_torus-census_0.png")
    return (0 if len(endpoints) == len(recs) else 1), summary


def _run_training_family(cfg, out: Path, fmt: str, plots: bool, experiment: str, mode: str):
    """Shared driver for regression-* and pinn1d: per-seed LM Newton runs
    with per-epoch orthogonality tracking and trivial-solution detection."""
    spec = _model_from(cfg)
    quad = _quad_from(cfg, dim=1)
    key = "forcing" if mode == "pinn1d" else "target"
    target = _target_from(cfg, key)
    optcfg = _optcfg_from(cfg["optimizer"])
    trivial_tol = float(cfg.get("trivial_tol", 1e-3))
    runs = []
    for seed in cfg["seeds"]:
        model = build(spec, int(seed))
        if mode == "pinn1d":
            obj = pinn1d_loss(model, target, quad)
            ortho_fn = lambda th: diagnostics.orthogonality_pinn(model, th, target, quad, "pinn1d")
        else:
            obj = regression_loss(model, target, quad)
            ortho_fn = lambda th: diagnostics.orthogonality_regression(model, th, target, quad)
        rec = optimizers.run(obj, model.initial_params(), optcfg, ortho_fn=ortho_fn)
        _write_traj(rec, out / f"traj_{experiment}_seed{seed}", fmt)
        theta = model.param_vector(rec.theta_final)
        report = _report_or_none(obj, theta)
        info = {
            "seed": int(seed),
            "converged": rec.converged,
            "epochs": rec.epochs,
            "failure": rec.failure,
            "final_loss": rec.loss[-1],
            "final_grad_norm": rec.grad_norm[-1],
            "trivial": bool(rec.converged and diagnostics.detect_trivial(theta, model, quad, trivial_tol)),
            "max_abs_ortho": _max_abs_or_nan(ortho_fn, theta),
            "classification": report.classification if report else "non-finite",
            "eigenvalues": list(report.eigenvalues) if report else [],
        }
        runs.append(info)
        _write_json(out / f"summary_{experiment}_seed{seed}.json", info)
        if plots:
            _plot_training(model, theta, target, quad, rec, out / f"fig_{experiment}_{seed}.png")
    summary = {
        "experiment": experiment,
        "runs": runs,
        "n_converged": sum(r["converged"] for r in runs),
        "n_trivial": sum(r["trivial"] for r in runs),
    }
    _write_json(out / f"summary_{experiment}.json", summary)
    code = 0 if summary["n_converged"] == len(runs) else 1
    return code, summary


def run_regression_mlp(cfg, out, fmt, plots):
    return _run_training_family(cfg, out, fmt, plots, "regression_mlp", "regression")


def run_regression_siren(cfg, out, fmt, plots):
    return _run_training_family(cfg, out, fmt, plots, "regression_siren", "regression")


def run_regression_fourier(cfg, out, fmt, plots):
    return _run_training_family(cfg, out, fmt, plots, "regression_fourier", "regression")


def run_pinn1d(cfg, out, fmt, plots):
    return _run_training_family(cfg, out, fmt, plots, "pinn1d", "pinn1d")


def run_pinn2d(cfg, out: Path, fmt: str, plots: bool):
    spec = _model_from(cfg)
    quad = _quad_from(cfg, dim=2)
    forcing = _target_from(cfg, "forcing", dim=2)
    exact = diffusion_reaction_exact(float(cfg["forcing"]["amplitude"]), int(cfg["forcing"]["cycles"]))
    trivial_tol = float(cfg.get("trivial_tol", 1e-2))
    u_exact = exact.on_points(quad.points)
    u_norm = math.sqrt(quad.weight * float(np.sum(u_exact ** 2)))
    runs = []
    for seed in cfg["seeds"]:
        model = build(spec, int(seed))
        obj = pinn2d_loss(model, forcing, quad)
        ortho_fn = lambda th: diagnostics.orthogonality_pinn(model, th, forcing, quad, "pinn2d")
        newton_rec = optimizers.run(obj, model.initial_params(), _optcfg_from(cfg["newton"]), ortho_fn=ortho_fn)
        _write_traj(newton_rec, out / f"traj_pinn2d_newton_seed{seed}", fmt)
        theta_n = model.param_vector(newton_rec.theta_final)
        report = _report_or_none(obj, theta_n)

        adam_rec = optimizers.run(obj, model.initial_params(), _optcfg_from(cfg["adam"]))
        theta_a = model.param_vector(adam_rec.theta_final)
        u_adam = model.forward(theta_a, quad.points)
        rel_l2 = math.sqrt(quad.weight * float(np.sum((u_adam - u_exact) ** 2))) / u_norm
        info = {
            "seed": int(seed),
            "newton": {
                "converged": newton_rec.converged,
                "epochs": newton_rec.epochs,
                "failure": newton_rec.failure,
                "final_loss": newton_rec.loss[-1],
                "trivial": bool(newton_rec.converged
                                and diagnostics.detect_trivial(theta_n, model, quad, trivial_tol)),
                "classification": report.classification if report else "non-finite",
                "eigenvalues": list(report.eigenvalues) if report else [],
            },
            "adam": {
                "epochs": adam_rec.epochs,
                "final_loss": adam_rec.loss[-1],
                "relative_l2_error": rel_l2,
            },
        }
        runs.append(info)
        _write_json(out / f"summary_pinn2d_seed{seed}.json", info)
        if plots:
            _plot_pinn2d(model, theta_a, theta_n, exact, quad, out / f"fig_pinn2d_{seed}.png")
    summary = {"experiment": "pinn2d", "runs": runs,
               "n_newton_converged": sum(r["newton"]["converged"] for r in runs)}
    _write_json(out / "summary_pinn2d.json", summary)
    code = 0 if summary["n_newton_converged"] == len(runs) else 1
    return code, summary


def run_random_hessian(cfg, out: Path, fmt: str, plots: bool):
    n = int(cfg["n"])
    trials = int(cfg["trials"])
    seed = int(cfg.get("seed", 0))
    counts = linalg.random_hessian_census(n, trials, seed)
    summary = {"experiment": "random_hessian", "n": n, "trials": trials, "seed": seed,
               "counts": counts,
               "definite_fraction": (counts["definite_positive"] + counts["definite_negative"]) / trials}
    _write_json(out / "summary_random_hessian.json", summary)
    if plots:
        _plot_census(n, seed, out / "fig_random-hessian_0.png")
    return 0, summary


def run_quasi_compare(cfg, out: Path, fmt: str, plots: bool):
    spec = TorusSpec(**cfg.get("torus", {}))
    obj = torus_loss(spec)
    inits = int(cfg.get("inits", 15))
    rng = np.random.default_rng(int(cfg.get("seed", 0)))
    theta0s = [rng.uniform(0.0, TWO_PI, size=2) for _ in range(inits)]
    summary = {"experiment": "quasi_compare", "methods": {}}
    all_ok = True
    for label, block in (("bfgs", cfg["optimizer"]), ("saddle_free", cfg["saddle_free"])):
        optcfg = _optcfg_from(block)
        runs = []
        for i, theta0 in enumerate(theta0s):
            rec = optimizers.run(obj, theta0, optcfg)
            _write_traj(rec, out / f"traj_quasi_compare_{label}_seed{i}", fmt)
            report = diagnostics.StationaryPointReport.from_objective(obj, rec.theta_final)
            losses = np.asarray(rec.loss)
            runs.append({
                "theta0": list(theta0),
                "theta_star": list(_wrap_angles(rec.theta_final)),
                "converged": rec.converged,
                "classification": report.classification,
                "loss_non_increasing": bool(np.all(np.diff(losses) <= 1e-12)),
            })
            all_ok = all_ok and rec.converged
        summary["methods"][label] = {
            "runs": runs,
            "n_minima": sum(r["classification"] == "minimum" for r in runs),
        }
    _write_json(out / "summary_quasi_compare.json", summary)
    if plots:
        _plot_quasi(summary, out / "fig_quasi-compare_0.png")
    return (0 if all_ok else 1), summary


# ---------------------------------------------------------------------------
# plots (matplotlib only imported on demand)
# ---------------------------------------------------------------------------

def _mpl():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def _plot_circle(runs, path):
    plt = _mpl()
    fig, ax = plt.subplots(figsize=(5, 5))
    th = np.linspace(0, TWO_PI, 200)
    ax.plot(np.cos(th), np.sin(th), "k-", lw=0.8)
    ends = np.array([r["theta_star"] for r in runs])
    ax.plot(np.cos(ends), np.sin(ends), "bo", label="converged angles")
    ax.plot([2], [2], "r*", ms=12, label="target")
    ax.legend()
    ax.set_aspect("equal")
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _plot_torus(runs, path):
    plt = _mpl()
    fig, ax = plt.subplots(figsize=(5, 5))
    for r in runs:
        ax.plot([r["theta0"][0]], [r["theta0"][1]], "k.", ms=3)
        ax.plot([r["theta_star"][0]], [r["theta_star"][1]], "bo", ms=5)
    ax.set_xlim(0, TWO_PI)
    ax.set_ylim(0, TWO_PI)
    ax.set_xlabel("theta_1")
    ax.set_ylabel("theta_2")
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _plot_torus_census(points, path):
    plt = _mpl()
    fig, ax = plt.subplots(figsize=(5, 5))
    colors = {"minimum": "g", "maximum": "r", "saddle": "b", "degenerate": "k"}
    for p in points:
        ax.plot([p["theta"][0]], [p["theta"][1]], "o", color=colors[p["classification"]])
        ax.annotate(p["classification"][:3], p["theta"], fontsize=7)
    ax.set_xlim(-0.2, TWO_PI)
    ax.set_ylim(-0.2, TWO_PI)
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _plot_training(model, theta, target, quad, rec, path):
    plt = _mpl()
    fig, axes = plt.subplots(1, 3, figsize=(13, 3.6))
    axes[0].semilogy(rec.loss, label="loss")
    axes[0].semilogy(rec.grad_norm, label="||grad||")
    axes[0].legend()
    axes[0].set_xlabel("epoch")
    x = quad.points[:, 0]
    h = model.basis(theta, quad.points)
    norms = np.sqrt(quad.weight * np.sum(h * h, axis=0))
    norms[norms == 0] = 1.0
    axes[1].plot(x, h / norms, lw=0.8)
    axes[1].set_title("normalized basis functions")
    axes[2].plot(x, target.on_points(quad.points), "k--", label="target")
    axes[2].plot(x, model.forward(theta, quad.points), "b-", label="network")
    axes[2].legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _plot_pinn2d(model, theta_adam, theta_newton, exact, quad, path):
    plt = _mpl()
    n = int(round(math.sqrt(quad.n)))
    fig, axes = plt.subplots(1, 3, figsize=(13, 3.6))
    fields = [
        ("exact", exact.on_points(quad.points)),
        ("adam", model.forward(theta_adam, quad.points)),
        ("newton", model.forward(theta_newton, quad.points)),
    ]
    for ax, (title, z) in zip(axes, fields):
        im = ax.imshow(np.asarray(z).reshape(n, n), origin="lower", extent=(0, 1, 0, 1))
        ax.set_title(title)
        fig.colorbar(im, ax=ax)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _plot_census(n, seed, path):
    plt = _mpl()
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((n, n))
    lam = np.linalg.eigvalsh(0.5 * (m + m.T))
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.hist(lam, bins=40)
    ax.set_xlabel("eigenvalue")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _plot_quasi(summary, path):
    plt = _mpl()
    fig, axes = plt.subplots(1, 2, figsize=(9, 4.2))
    for ax, (label, block) in zip(axes, summary["methods"].items()):
        for r in block["runs"]:
            ax.plot([r["theta0"][0]], [r["theta0"][1]], "k.", ms=3)
            ax.plot([r["theta_star"][0]], [r["theta_star"][1]], "go", ms=5)
        ax.set_title(label)
        ax.set_xlim(-0.2, TWO_PI)
        ax.set_ylim(-0.2, TWO_PI)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


# ---------------------------------------------------------------------------
# registry / reproduction report
# ---------------------------------------------------------------------------

EXPERIMENTS = {
    "circle": run_circle,
    "torus": run_torus,
    "torus-census": run_torus_census,
    "regression-mlp": run_regression_mlp,
    "regression-siren": run_regression_siren,
    "regression-fourier": run_regression_fourier,
    "pinn1d": run_pinn1d,
    "pinn2d": run_pinn2d,
    "random-hessian": run_random_hessian,
    "quasi-compare": run_quasi_compare,
}

_CONFIG_NAME = {k: k.replace("-", "_") for k in EXPERIMENTS}


def _experiment_status(name: str, summary: dict) -> bool:
    """Coarse per-experiment health check used by the reproduction report."""
    if name == "circle":
        return summary["all_converged"] and all(
            min(abs(r["theta_star"] - math.pi / 4), abs(r["theta_star"] - 5 * math.pi / 4)) < 1e-6
            for r in summary["runs"]
        )
    if name == "torus":
        return summary["all_converged"]
    if name == "torus-census":
        return (len(summary["stationary_points"]) == 8
                and summary["counts"] == {"minimum": 2, "maximum": 2, "saddle": 4, "degenerate": 0})
    if name == "regression-mlp":
        return summary["n_trivial"] >= 6
    if name == "regression-siren":
        return summary["n_trivial"] >= 2
    if name == "regression-fourier":
        return summary["n_trivial"] >= 2
    if name == "pinn1d":
        return summary["n_trivial"] >= 3
    if name == "pinn2d":
        return all(r["newton"]["trivial"] and r["adam"]["relative_l2_error"] < 0.05
                   for r in summary["runs"])
    if name == "random-hessian":
        return (summary["counts"]["definite_positive"] == 0
                and summary["counts"]["definite_negative"] == 0)
    if name == "quasi-compare":
        return all(
            len(block["runs"]) == block["n_minima"] for block in summary["methods"].values()
        )
    return False


def reproduce_all(out_dir, experiments=None, config_overrides=None, fmt="csv", plots=False) -> dict:
    """Run the full reproduction matrix with the checked-in (pinned-seed)
    configs and write a Markdown + JSON report, one row per experiment.

    `config_overrides` maps experiment name to a dict merged over its
    config (used for reduced smoke runs). Individual failures are
    recorded; the report is always produced.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    names = list(experiments) if experiments is not None else list(EXPERIMENTS)
    rows = []
    for name in names:
        cfg = load_config(_CONFIG_NAME[name])
        if config_overrides and name in config_overrides:
            cfg = {**cfg, **config_overrides[name]}
        sub = out / name.replace("-", "_")
        sub.mkdir(exist_ok=True)
        try:
            _, summary = EXPERIMENTS[name](cfg, sub, fmt, plots)
            ok = _experiment_status(name, summary)
            rows.append({"experiment": name, "status": "pass" if ok else "fail", "error": None})
        except Exception as exc:  # individual failures must not kill the report
            rows.append({"experiment": name, "status": "error", "error": str(exc)})
    report = {"rows": rows, "n_pass": sum(r["status"] == "pass" for r in rows)}
    _write_json(out / "report.json", report)
    with open(out / "report.md", "w") as fh:
        fh.write("# Reproduction report\n\n| experiment | status |\n|---|---|\n")
        for r in rows:
            fh.write(f"| {r['experiment']} | {r['status']} |\n")
    return report


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="newtonlab",
        description="Second-order optimization experiments on small nonlinear discretizations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", type=str, default=None, help="JSON config overriding the checked-in one")
        p.add_argument("--seed", type=str, default=None, help="seed or seed list: 3, 0..9, 0,2,5")
        p.add_argument("--out", type=str, default=".", help="output directory")
        p.add_argument("--format", choices=("csv", "json"), default="csv", help="trajectory file format")
        p.add_argument("--plots", action="store_true", help="also write PNG figures")
        if name == "random-hessian":
            p.add_argument("--trials", type=int, default=None)
            p.add_argument("--n", type=int, default=None)
    p = sub.add_parser("reproduce-all", help="run every experiment and write a report")
    p.add_argument("--out", type=str, default="reproduction")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--plots", action="store_true")
    return parser


def cli(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if args.command == "reproduce-all":
            report = reproduce_all(args.out, fmt=args.format, plots=args.plots)
            return 0 if report["n_pass"] == len(report["rows"]) else 1
        cfg = load_config(_CONFIG_NAME[args.command], args.config)
        if args.seed is not None:
            seeds = parse_seeds(args.seed)
            if "seeds" in cfg:
                cfg["seeds"] = seeds
            else:
                cfg["seed"] = seeds[0]
        if args.command == "random-hessian":
            if args.trials is not None:
                cfg["trials"] = args.trials
            if args.n is not None:
                cfg["n"] = args.n
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        code, _ = EXPERIMENTS[args.command](cfg, out, args.format, args.plots)
        return code
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (KeyError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli())


if __name__ == "__main__":
    main()
