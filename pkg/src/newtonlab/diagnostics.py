"""Measurement apparatus: stationary-point classification from Hessian
spectra, basis/target orthogonality functionals, and trivial-solution
detection.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import torch

from newtonlab.linalg import sym_eig
from newtonlab.models import Model
from newtonlab.params import ParamVector

_DTYPE = torch.float64

__all__ = [
    "classify",
    "default_zero_tol",
    "StationaryPointReport",
    "orthogonality_regression",
    "orthogonality_pinn",
    "detect_trivial",
]


def default_zero_tol(eigenvalues: np.ndarray) -> float:
    """Relative zero threshold 1e-6 * max(1, |lambda|_max)."""
    lam_max = float(np.max(np.abs(eigenvalues))) if np.size(eigenvalues) else 0.0
    return 1e-6 * max(1.0, lam_max)


def classify(eigenvalues: np.ndarray, zero_tol: float) -> str:
    """minimum / maximum / saddle / degenerate from the spectrum.

    All eigenvalues above +tol -> minimum; all below -tol -> maximum;
    both signs beyond tol -> saddle; anything else (some eigenvalue
    within tol of zero and no sign conflict) -> degenerate.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    if not np.isfinite(lam).all():
        raise ValueError("eigenvalues must be finite")
    has_pos = bool(np.any(lam > zero_tol))
    has_neg = bool(np.any(lam < -zero_tol))
    if has_pos and has_neg:
        return "saddle"
    if has_pos and np.all(lam > zero_tol):
        return "minimum"
    if has_neg and np.all(lam < -zero_tol):
        return "maximum"
    return "degenerate"


@dataclass
class StationaryPointReport:
    """Converged parameters with spectrum and classification."""

    theta: np.ndarray
    eigenvalues: np.ndarray
    classification: str
    zero_tol: float
    loss: float
    grad_norm: float

    @classmethod
    def from_objective(cls, objective, theta, zero_tol: Optional[float] = None) -> "StationaryPointReport":
        bundle = objective.derivatives(theta)
        lam, _ = sym_eig(bundle.hessian)
        tol = default_zero_tol(lam) if zero_tol is None else zero_tol
        values = theta.values if isinstance(theta, ParamVector) else np.asarray(theta, dtype=float)
        return cls(
            theta=np.asarray(values, dtype=float).copy(),
            eigenvalues=lam,
            classification=classify(lam, tol),
            zero_tol=tol,
            loss=bundle.value,
            grad_norm=bundle.grad_norm,
        )

    def to_json_dict(self) -> dict:
        return {
            "theta": list(self.theta),
            "eigenvalues": list(self.eigenvalues),
            "classification": self.classification,
            "zero_tol": self.zero_tol,
            "loss": self.loss,
            "grad_norm": self.grad_norm,
        }

    def to_json(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


# ---------------------------------------------------------------------------
# orthogonality functionals
# ---------------------------------------------------------------------------

def _normalized_columns(values: np.ndarray, weight: float):
    """Columns scaled to unit quadrature L2 norm; zero-norm columns are
    flagged (returned mask False) and produce NaN entries."""
    norms = np.sqrt(weight * np.sum(values * values, axis=0))
    ok = norms > 0.0
    out = np.full_like(values, np.nan)
    out[:, ok] = values[:, ok] / norms[ok]
    return out, ok


def _basis_values(model: Model, theta, points: np.ndarray) -> np.ndarray:
    t = model._theta_tensor(theta)
    X = torch.as_tensor(points, dtype=_DTYPE)
    return model.torch_basis(t, X).detach().numpy()


def orthogonality_regression(model: Model, theta, target, quad) -> np.ndarray:
    """O_j = <v-hat, h-hat_j> on the quadrature grid.

    Both the target and each basis function are normalized to unit
    quadrature L2 norm; a zero-norm basis function yields NaN ("flagged
    entry"). |O_j| <= 1 up to quadrature slack by Cauchy-Schwarz.
    """
    v_hat = target.normalized_on(quad.points, quad.weight)
    h = _basis_values(model, theta, quad.points)
    h_hat, _ = _normalized_columns(h, quad.weight)
    return quad.weight * (v_hat @ h_hat)


def orthogonality_pinn(model: Model, theta, forcing, quad, mode: str) -> np.ndarray:
    """O_j = <v-hat, g-hat_j> where g_j is the image of basis function j
    under the differential operator: d2/dx2 in 1D ("pinn1d"), or
    laplacian + identity in 2D ("pinn2d")."""
    if mode not in ("pinn1d", "pinn2d"):
        raise ValueError("mode must be 'pinn1d' or 'pinn2d'")
    if (mode == "pinn1d") != (model.input_dim == 1):
        raise ValueError("mode does not match the model input dimension")
    t = model._theta_tensor(theta)
    X = torch.as_tensor(quad.points, dtype=_DTYPE)
    h, _, h2 = model.torch_basis_jet(t, X)
    if mode == "pinn1d":
        img = h2[:, 0, 0, :]
    else:
        img = h2[:, 0, 0, :] + h2[:, 1, 1, :] + h
    img = img.detach().numpy()
    v_hat = forcing.normalized_on(quad.points, quad.weight)
    img_hat, _ = _normalized_columns(img, quad.weight)
    return quad.weight * (v_hat @ img_hat)


def detect_trivial(theta, model: Model, quad, tol: float = 1e-3) -> bool:
    """True iff the outer coefficients and the network output both vanish:
    ||theta_O||_inf < tol and quadrature L2 norm of N(.; theta) < tol."""
    pv = theta if isinstance(theta, ParamVector) else model.param_vector(theta)
    if float(np.max(np.abs(pv.outer), initial=0.0)) >= tol:
        return False
    y = model.forward(pv, quad.points)
    l2 = math.sqrt(quad.weight * float(np.sum(np.square(y))))
    return l2 < tol
