"""Optimization procedures driving any Objective to its stopping rule.

Six methods: exact Newton, relaxed Levenberg-Marquardt Newton, BFGS with
a curvature-condition safeguard, saddle-free Newton (absolute-eigenvalue
Hessian), ADAM, and plain gradient descent. A run stops once the
gradient norm drops below the threshold T or the epoch budget is spent,
and records a per-epoch time series of loss, gradient norms, optional
basis/target orthogonality values, and step norms.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from newtonlab.diffgraph import DerivativeBundle, NonFiniteDerivative
from newtonlab.linalg import SingularSystem, solve_shifted, sym_eig
from newtonlab.params import ParamVector

__all__ = [
    "METHODS",
    "OptimizerConfig",
    "TrajectoryRecord",
    "StepFailure",
    "newton_step",
    "lm_newton_step",
    "saddle_free_step",
    "bfgs_run",
    "adam_run",
    "run",
]

METHODS = ("newton", "lm_newton", "bfgs", "saddle_free", "adam", "gd")


class StepFailure(RuntimeError):
    """No usable step could be produced (retries/line search exhausted)."""


@dataclass
class OptimizerConfig:
    method: str = "newton"
    eta: float = 1.0  # step relaxation, 0 < eta <= 1
    eps: float = 0.0  # convexity shift added to the Hessian
    grad_tol: float = 1e-5  # stopping threshold T on ||grad||
    max_iters: int = 1000
    # first-order settings
    lr: float = 1e-2
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    # BFGS line search (backtracking Armijo)
    armijo_c: float = 1e-4
    max_halvings: int = 50
    # saddle-free Newton
    sfn_damping: Optional[float] = None  # None -> 1e-3 * max|eigenvalue|
    sfn_line_search: bool = True

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if not 0.0 < self.eta <= 1.0:
            raise ValueError("require 0 < eta <= 1")
        if self.eps < 0.0:
            raise ValueError("require eps >= 0")
        if not self.grad_tol > 0.0:
            raise ValueError("require grad_tol > 0")
        if self.max_iters < 1:
            raise ValueError("require max_iters >= 1")


@dataclass
class TrajectoryRecord:
    """Per-epoch time series of one optimization run."""

    method: str
    loss: list = field(default_factory=list)
    grad_norm: list = field(default_factory=list)
    grad_inner: list = field(default_factory=list)  # ||g_I||^2 / |I|
    grad_outer: list = field(default_factory=list)  # ||g_O||^2 / |O|
    ortho: list = field(default_factory=list)  # per-epoch O_j vectors (may stay empty)
    step_norm: list = field(default_factory=list)
    converged: bool = False
    failure: Optional[str] = None
    theta_final: Optional[np.ndarray] = None

    @property
    def epochs(self) -> int:
        return len(self.loss)

    def _log(self, value, gnorm, theta: ParamVector, ortho_fn):
        self.loss.append(float(value))
        self.grad_norm.append(float(gnorm))
        if ortho_fn is not None:
            self.ortho.append(np.asarray(ortho_fn(theta), dtype=float))

    def _log_grad_split(self, grad: np.ndarray, theta: ParamVector):
        gi = grad[theta.inner_indices]
        go = grad[theta.outer_indices]
        self.grad_inner.append(float(gi @ gi) / max(gi.size, 1))
        self.grad_outer.append(float(go @ go) / max(go.size, 1))

    # -- serialization ---------------------------------------------------
    def csv_rows(self):
        """Rows (epoch, loss, grad_norm, grad_inner, grad_outer, O_1..O_k,
        step_norm), one per epoch."""
        k = self.ortho[0].size if self.ortho else 0
        header = ["epoch", "loss", "grad_norm", "grad_inner", "grad_outer"]
        header += [f"O_{j + 1}" for j in range(k)]
        header += ["step_norm"]
        yield header
        for i in range(self.epochs):
            row = [i, self.loss[i], self.grad_norm[i], self.grad_inner[i], self.grad_outer[i]]
            if k:
                row += list(self.ortho[i])
            row += [self.step_norm[i] if i < len(self.step_norm) else 0.0]
            yield row

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            for row in self.csv_rows():
                writer.writerow(row)

    def summary(self) -> dict:
        return {
            "method": self.method,
            "epochs": self.epochs,
            "converged": self.converged,
            "failure": self.failure,
            "final_loss": self.loss[-1] if self.loss else None,
            "final_grad_norm": self.grad_norm[-1] if self.grad_norm else None,
            "theta_final": None if self.theta_final is None else list(self.theta_final),
        }

    def to_json(self, path):
        with open(path, "w") as fh:
            json.dump(self.summary(), fh, indent=2, sort_keys=True)
            fh.write("\n")


# ---------------------------------------------------------------------------
# steps
# ---------------------------------------------------------------------------

def newton_step(bundle: DerivativeBundle) -> np.ndarray:
    """Full exact Newton step -H^{-1} g. SingularSystem propagates."""
    return -solve_shifted(bundle.hessian, 0.0, bundle.gradient)


def lm_newton_step(bundle: DerivativeBundle, eta: float, eps: float) -> np.ndarray:
    """Relaxed damped Newton step -eta (H + eps I)^{-1} g.

    On a singular shifted system the shift escalates tenfold, at most
    five retries, then StepFailure.
    """
    shift = eps
    for attempt in range(6):
        try:
            return -eta * solve_shifted(bundle.hessian, shift, bundle.gradient)
        except SingularSystem:
            shift = shift * 10.0 if shift > 0.0 else 1e-8
    raise StepFailure(f"shifted solve still singular at eps={shift / 10.0:.3e}")


def saddle_free_step(bundle: DerivativeBundle, damping: float = 0.0) -> np.ndarray:
    """Step -(V |Lambda| V^T + damping I)^{-1} g.

    Replacing eigenvalues by their absolute values makes the modified
    Hessian positive (semi-)definite, so the direction repels from
    saddles and maxima. EigFailure propagates.
    """
    lam, vec = sym_eig(bundle.hessian)
    denom = np.abs(lam) + damping
    if np.any(denom <= 0.0):
        raise StepFailure("absolute-eigenvalue Hessian is singular and damping is zero")
    return -vec @ ((vec.T @ bundle.gradient) / denom)


# ---------------------------------------------------------------------------
# runs
# ---------------------------------------------------------------------------

def _as_param_vector(objective, theta0) -> ParamVector:
    if isinstance(theta0, ParamVector):
        return theta0.copy()
    return objective.param_vector(np.asarray(theta0, dtype=float))


def _backtrack(objective, theta: ParamVector, f0: float, grad: np.ndarray,
               direction: np.ndarray, c: float, max_halvings: int):
    """Backtracking Armijo line search; returns (alpha, new values, new f)."""
    slope = float(grad @ direction)
    alpha = 1.0
    for _ in range(max_halvings + 1):
        trial = theta.values + alpha * direction
        f_trial = objective.value(theta.with_values(trial))
        if np.isfinite(f_trial) and f_trial <= f0 + c * alpha * slope:
            return alpha, trial, f_trial
        alpha *= 0.5
    raise StepFailure(f"line search failed after {max_halvings} halvings")


def bfgs_run(objective, theta0, config: OptimizerConfig,
             ortho_fn: Optional[Callable] = None) -> TrajectoryRecord:
    """BFGS on gradients only, with the curvature condition enforced by
    skipping updates where s.y <= 1e-10 ||s|| ||y||, keeping the inverse
    Hessian estimate positive definite; steps use backtracking Armijo."""
    theta = _as_param_vector(objective, theta0)
    rec = TrajectoryRecord(method="bfgs")
    n = theta.n
    h_inv = np.eye(n)
    grad = objective.gradient(theta)
    f = objective.value(theta)

    for _ in range(config.max_iters):
        gnorm = float(np.linalg.norm(grad))
        rec._log(f, gnorm, theta, ortho_fn)
        rec._log_grad_split(grad, theta)
        if gnorm < config.grad_tol:
            rec.converged = True
            rec.step_norm.append(0.0)
            break
        direction = -h_inv @ grad
        if float(direction @ grad) >= 0.0:
            # estimate lost positive definiteness numerically; restart
            h_inv = np.eye(n)
            direction = -grad
        try:
            alpha, new_values, f_new = _backtrack(
                objective, theta, f, grad, direction, config.armijo_c, config.max_halvings
            )
        except StepFailure as exc:
            rec.failure = str(exc)
            rec.step_norm.append(0.0)
            break
        s = new_values - theta.values
        theta = theta.with_values(new_values)
        new_grad = objective.gradient(theta)
        y = new_grad - grad
        sy = float(s @ y)
        if sy > 1e-10 * np.linalg.norm(s) * np.linalg.norm(y):
            rho = 1.0 / sy
            v = np.eye(n) - rho * np.outer(s, y)
            h_inv = v @ h_inv @ v.T + rho * np.outer(s, s)
        grad, f = new_grad, f_new
        rec.step_norm.append(float(np.linalg.norm(s)))

    rec.theta_final = theta.values.copy()
    rec.hessian_inverse_estimate = h_inv
    return rec


def adam_run(objective, theta0, config: OptimizerConfig,
             ortho_fn: Optional[Callable] = None) -> TrajectoryRecord:
    """ADAM with bias-corrected first/second moment averages."""
    theta = _as_param_vector(objective, theta0)
    rec = TrajectoryRecord(method="adam")
    m = np.zeros(theta.n)
    s = np.zeros(theta.n)
    for k in range(1, config.max_iters + 1):
        grad = objective.gradient(theta)
        gnorm = float(np.linalg.norm(grad))
        rec._log(objective.value(theta), gnorm, theta, ortho_fn)
        rec._log_grad_split(grad, theta)
        if gnorm < config.grad_tol:
            rec.converged = True
            rec.step_norm.append(0.0)
            break
        m = config.beta1 * m + (1.0 - config.beta1) * grad
        s = config.beta2 * s + (1.0 - config.beta2) * grad * grad
        m_hat = m / (1.0 - config.beta1 ** k)
        s_hat = s / (1.0 - config.beta2 ** k)
        step = -config.lr * m_hat / (np.sqrt(s_hat) + config.adam_eps)
        theta = theta.with_values(theta.values + step)
        rec.step_norm.append(float(np.linalg.norm(step)))
    rec.theta_final = theta.values.copy()
    return rec


def _gd_run(objective, theta0, config: OptimizerConfig,
            ortho_fn: Optional[Callable] = None) -> TrajectoryRecord:
    theta = _as_param_vector(objective, theta0)
    rec = TrajectoryRecord(method="gd")
    for _ in range(config.max_iters):
        grad = objective.gradient(theta)
        gnorm = float(np.linalg.norm(grad))
        rec._log(objective.value(theta), gnorm, theta, ortho_fn)
        rec._log_grad_split(grad, theta)
        if gnorm < config.grad_tol:
            rec.converged = True
            rec.step_norm.append(0.0)
            break
        step = -config.lr * grad
        theta = theta.with_values(theta.values + step)
        rec.step_norm.append(float(np.linalg.norm(step)))
    rec.theta_final = theta.values.copy()
    return rec


def _curvature_run(objective, theta0, config: OptimizerConfig,
                   ortho_fn: Optional[Callable] = None) -> TrajectoryRecord:
    theta = _as_param_vector(objective, theta0)
    rec = TrajectoryRecord(method=config.method)
    for _ in range(config.max_iters):
        try:
            bundle = objective.derivatives(theta)
        except NonFiniteDerivative as exc:
            # a diverged run ends with a recorded failure, not a crash
            rec.failure = str(exc)
            break
        gnorm = bundle.grad_norm
        rec._log(bundle.value, gnorm, theta, ortho_fn)
        rec._log_grad_split(bundle.gradient, theta)
        if gnorm < config.grad_tol:
            rec.converged = True
            rec.step_norm.append(0.0)
            break
        try:
            if config.method == "newton":
                step = newton_step(bundle)
            elif config.method == "lm_newton":
                step = lm_newton_step(bundle, config.eta, config.eps)
            else:  # saddle_free
                lam_max = float(np.max(np.abs(np.linalg.eigvalsh(bundle.hessian))))
                damping = config.sfn_damping
                if damping is None:
                    damping = 1e-3 * lam_max if lam_max > 0.0 else 1e-8
                direction = saddle_free_step(bundle, damping)
                if config.sfn_line_search:
                    _, new_values, _ = _backtrack(
                        objective, theta, bundle.value, bundle.gradient,
                        direction, config.armijo_c, config.max_halvings,
                    )
                    step = new_values - theta.values
                else:
                    step = direction
        except (SingularSystem, StepFailure) as exc:
            rec.failure = str(exc)
            rec.step_norm.append(0.0)
            break
        theta = theta.with_values(theta.values + step)
        rec.step_norm.append(float(np.linalg.norm(step)))
    rec.theta_final = theta.values.copy()
    return rec


def run(objective, theta0, config: OptimizerConfig,
        ortho_fn: Optional[Callable] = None) -> TrajectoryRecord:
    """Drive the configured method until ||grad|| < T or max_iters.

    `ortho_fn(theta) -> O_j vector`, when given, is evaluated each epoch
    and stored in the trajectory.
    """
    if config.method == "bfgs":
        return bfgs_run(objective, theta0, config, ortho_fn)
    if config.method == "adam":
        return adam_run(objective, theta0, config, ortho_fn)
    if config.method == "gd":
        return _gd_run(objective, theta0, config, ortho_fn)
    return _curvature_run(objective, theta0, config, ortho_fn)
