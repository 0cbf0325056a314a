"""Exact differentiation of scalar objectives and spatial jets.

Parameter derivatives (value, gradient, dense Hessian) are computed
exactly with forward-over-reverse automatic differentiation; spatial
derivatives use order-2 jet propagation inside the model evaluators, so
mixed third derivatives (parameter derivatives of spatial seconds) come
out of the same machinery. Dense Hessians are fine here: every model in
scope has at most a few hundred parameters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch

from newtonlab.params import ParamVector, all_inner

__all__ = [
    "ParamVector",
    "all_inner",
    "SpatialJet",
    "DerivativeBundle",
    "NonFiniteDerivative",
    "UnsupportedDimension",
    "param_derivs",
    "spatial_jet",
]

_DTYPE = torch.float64


class NonFiniteDerivative(ArithmeticError):
    """A derivative evaluation produced inf/nan."""

    def __init__(self, what: str, index: int):
        self.index = index
        super().__init__(f"non-finite {what} at parameter index {index}")


class UnsupportedDimension(ValueError):
    """Spatial jets are only available for 1D and 2D inputs."""


@dataclass
class SpatialJet:
    """Value, spatial gradient and spatial second derivatives at a point."""

    value: float
    d1: np.ndarray  # [d]
    d2: np.ndarray  # [d, d], symmetric

    @property
    def laplacian(self) -> float:
        return float(np.trace(self.d2))


@dataclass
class DerivativeBundle:
    """Exact value, gradient and dense (symmetrized) Hessian of a scalar
    objective at one parameter setting."""

    value: float
    gradient: np.ndarray  # [n]
    hessian: np.ndarray  # [n, n], symmetric

    @property
    def n(self) -> int:
        return self.gradient.size

    @property
    def grad_norm(self) -> float:
        return float(np.linalg.norm(self.gradient))


def _check_finite(name: str, arr: np.ndarray):
    bad = ~np.isfinite(np.atleast_1d(arr))
    if bad.any():
        idx = int(np.argwhere(bad)[0].flat[0])
        raise NonFiniteDerivative(name, idx)


def param_derivs(objective, theta) -> DerivativeBundle:
    """Exact loss value, gradient and dense Hessian at theta.

    `objective` exposes `torch_fn(t)` mapping a flat float64 torch vector
    to a scalar torch value. The Hessian is computed forward-over-reverse
    and symmetrized as (H + H^T)/2.
    """
    values = theta.values if isinstance(theta, ParamVector) else np.asarray(theta, dtype=float).reshape(-1)
    t = torch.as_tensor(values, dtype=_DTYPE)
    fn = objective.torch_fn

    t_req = t.detach().requires_grad_(True)
    loss = fn(t_req)
    value = float(loss.detach())
    grad = torch.autograd.grad(loss, t_req)[0].detach().numpy()
    hess = torch.func.hessian(fn)(t).detach().numpy()

    if not np.isfinite(value):
        raise NonFiniteDerivative("value", -1)
    _check_finite("gradient", grad)
    if not np.isfinite(hess).all():
        row = int(np.argwhere(~np.isfinite(hess))[0][0])
        raise NonFiniteDerivative("hessian row", row)

    hess = 0.5 * (hess + hess.T)
    return DerivativeBundle(value=value, gradient=grad, hessian=hess)


def spatial_jet(model, theta, x) -> SpatialJet:
    """Order-2 spatial jet of the model output at a single point x.

    Returns N(x; theta), dN/dx_i and d2N/dx_i dx_j. d must be 1 or 2.
    """
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    d = x_arr.size
    if d > 2:
        raise UnsupportedDimension(f"spatial jets support d <= 2, got d={d}")
    if d != model.input_dim:
        raise UnsupportedDimension(
            f"point dimension {d} does not match model input dimension {model.input_dim}"
        )
    t = model._theta_tensor(theta)
    X = torch.as_tensor(x_arr.reshape(1, d), dtype=_DTYPE)
    y, y1, y2 = model.torch_forward_jet(t, X)
    d2 = y2[0].detach().numpy()
    d2 = 0.5 * (d2 + d2.T)
    return SpatialJet(value=float(y[0]), d1=y1[0].detach().numpy(), d2=d2)
