"""Scalar objectives: circle, ellipsoidal torus, grid-discretized
regression, and strong-form PDE (PINN) losses in 1D and 2D.

Each constructor returns an `Objective` whose `torch_fn` maps a flat
float64 torch parameter vector to a scalar torch loss; exact gradients
and Hessians come from `newtonlab.diffgraph.param_derivs`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import torch

from newtonlab import diffgraph
from newtonlab.models import Model
from newtonlab.params import ParamVector, all_inner

_DTYPE = torch.float64


# ---------------------------------------------------------------------------
# quadrature grids
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Quadrature1D:
    """Uniform quadrature on [0, 1]: N nodes, constant weight 1/N."""

    nodes: np.ndarray
    weight: float

    @classmethod
    def midpoint(cls, n: int) -> "Quadrature1D":
        """Midpoint rule, x_i = (i - 1/2)/n. Avoids the boundary nodes
        where masked bases vanish identically."""
        if n < 2:
            raise ValueError("need at least 2 nodes")
        return cls(nodes=(np.arange(n) + 0.5) / n, weight=1.0 / n)

    @classmethod
    def endpoint(cls, n: int) -> "Quadrature1D":
        """Equally spaced nodes including both endpoints, weight 1/n."""
        if n < 2:
            raise ValueError("need at least 2 nodes")
        return cls(nodes=np.linspace(0.0, 1.0, n), weight=1.0 / n)

    @property
    def n(self) -> int:
        return self.nodes.size

    @property
    def points(self) -> np.ndarray:
        """Nodes as [P, 1] points."""
        return self.nodes.reshape(-1, 1)


@dataclass(frozen=True)
class Quadrature2D:
    """Tensor-product uniform quadrature on [0, 1]^2."""

    points: np.ndarray  # [P, 2]
    weight: float

    @classmethod
    def midpoint(cls, n: int) -> "Quadrature2D":
        x = (np.arange(n) + 0.5) / n
        g1, g2 = np.meshgrid(x, x, indexing="ij")
        pts = np.column_stack([g1.ravel(), g2.ravel()])
        return cls(points=pts, weight=1.0 / (n * n))

    @property
    def n(self) -> int:
        return self.points.shape[0]


# ---------------------------------------------------------------------------
# targets / forcings
# ---------------------------------------------------------------------------

@dataclass
class TargetFunction:
    """Closed-form target v(x) (or v(x1, x2)) with a normalization helper."""

    fn: Callable[..., np.ndarray]
    name: str = "target"

    def __call__(self, x):
        return self.fn(np.asarray(x, dtype=float))

    def on_points(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 2 and pts.shape[1] == 1:
            return np.asarray(self.fn(pts[:, 0]), dtype=float)
        if pts.ndim == 2:
            return np.asarray(self.fn(pts[:, 0], pts[:, 1]), dtype=float)
        return np.asarray(self.fn(pts), dtype=float)

    def normalized_on(self, points: np.ndarray, weight: float) -> np.ndarray:
        """Values v-hat on the grid with quadrature L2 norm one."""
        v = self.on_points(points)
        nrm = math.sqrt(weight * float(np.sum(v * v)))
        if nrm == 0.0:
            raise ValueError("cannot normalize an identically-zero target on the grid")
        return v / nrm


def sine_target(amplitude: float, cycles: int, dim: int = 1) -> TargetFunction:
    """amplitude * sin(2 pi cycles x) in 1D, or the product of sines of
    the same frequency in both coordinates in 2D."""
    w = 2.0 * math.pi * cycles
    if dim == 1:
        return TargetFunction(lambda x: amplitude * np.sin(w * x), f"{amplitude}*sin({cycles}x)")
    return TargetFunction(
        lambda x1, x2: amplitude * np.sin(w * x1) * np.sin(w * x2),
        f"{amplitude}*sin({cycles}x1)sin({cycles}x2)",
    )


def diffusion_reaction_exact(amplitude: float = 100.0, cycles: int = 2) -> TargetFunction:
    """Closed-form solution of laplacian(u) + u + v = 0 on [0,1]^2 with
    v = amplitude * sin(2 pi c x1) sin(2 pi c x2) and zero boundaries.

    Substituting u = k sin sin gives (-2 w^2 + 1) k + amplitude = 0 with
    w = 2 pi c, so k = amplitude / (2 w^2 - 1).
    """
    w = 2.0 * math.pi * cycles
    k = amplitude / (2.0 * w * w - 1.0)
    return TargetFunction(
        lambda x1, x2: k * np.sin(w * x1) * np.sin(w * x2),
        f"{k:.6g}*sin({cycles}x1)sin({cycles}x2)",
    )


# ---------------------------------------------------------------------------
# objective wrapper
# ---------------------------------------------------------------------------

@dataclass
class Objective:
    """Scalar loss with exact value / gradient / dense Hessian contracts."""

    torch_fn: Callable[[torch.Tensor], torch.Tensor]
    n_params: int
    name: str = "objective"
    model: Optional[Model] = None
    quad: object = None
    target: Optional[TargetFunction] = None
    mode: Optional[str] = None  # "regression" | "pinn1d" | "pinn2d" | None

    def _tensor(self, theta) -> torch.Tensor:
        values = theta.values if isinstance(theta, ParamVector) else np.asarray(theta, dtype=float).reshape(-1)
        if values.size != self.n_params:
            raise ValueError(f"expected {self.n_params} parameters, got {values.size}")
        return torch.as_tensor(values, dtype=_DTYPE)

    def value(self, theta) -> float:
        return float(self.torch_fn(self._tensor(theta)).detach())

    def gradient(self, theta) -> np.ndarray:
        # one reverse pass; much cheaper than retracing with torch.func
        t = self._tensor(theta).requires_grad_(True)
        (g,) = torch.autograd.grad(self.torch_fn(t), t)
        return g.detach().numpy()

    def derivatives(self, theta) -> diffgraph.DerivativeBundle:
        return diffgraph.param_derivs(self, theta)

    def param_vector(self, values) -> ParamVector:
        if self.model is not None:
            return self.model.param_vector(values)
        return all_inner(values)


# ---------------------------------------------------------------------------
# analytic objectives
# ---------------------------------------------------------------------------

def circle_loss(target=(2.0, 2.0)) -> Objective:
    """Half squared distance from a point on the unit circle to the target.

    L(theta) = 1/2 ||(cos t, sin t) - v||^2, so dL/dt = 2(sin t - cos t)
    and d2L/dt2 = +-2 sqrt(2) at the two stationary angles for v=(2,2).
    """
    v = torch.as_tensor(np.asarray(target, dtype=float), dtype=_DTYPE)

    def fn(t: torch.Tensor) -> torch.Tensor:
        p = torch.stack([torch.cos(t[0]), torch.sin(t[0])])
        return 0.5 * torch.sum((p - v) ** 2)

    return Objective(torch_fn=fn, n_params=1, name="circle")


@dataclass(frozen=True)
class TorusSpec:
    """Ellipsoidal torus: axis radius R, tube radius r, eccentricity e."""

    R: float = 1.0
    r: float = 0.35
    e: float = 1.2

    def __post_init__(self):
        if not (self.R > self.r > 0.0):
            raise ValueError("require R > r > 0")
        if not self.e > 0.0:
            raise ValueError("require e > 0")


def torus_point(spec: TorusSpec, theta: np.ndarray) -> np.ndarray:
    """Embedding point of the parameterization at theta = (t1, t2)."""
    t1, t2 = float(theta[0]), float(theta[1])
    a = spec.R + spec.r * math.cos(t2)
    return np.array([a * math.cos(t1), a * spec.e * math.sin(t1), spec.r * math.sin(t2)])


def torus_loss(spec: TorusSpec = TorusSpec()) -> Objective:
    """Squared distance from the origin of the torus point,
    L(theta) = ||N(theta)||^2, theta taken modulo 2 pi."""
    R, r, e = spec.R, spec.r, spec.e

    def fn(t: torch.Tensor) -> torch.Tensor:
        a = R + r * torch.cos(t[1])
        x1 = a * torch.cos(t[0])
        x2 = a * e * torch.sin(t[0])
        x3 = r * torch.sin(t[1])
        return x1 * x1 + x2 * x2 + x3 * x3

    obj = Objective(torch_fn=fn, n_params=2, name="torus")
    obj.torus_spec = spec
    return obj


# ---------------------------------------------------------------------------
# network objectives
# ---------------------------------------------------------------------------

def regression_loss(model: Model, target: TargetFunction, quad: Quadrature1D) -> Objective:
    """L(theta) = 1/2 * dx * sum_i (N(x_i; theta) - v(x_i))^2."""
    if model.input_dim != 1:
        raise ValueError("regression_loss requires a 1D-input model")
    X = torch.as_tensor(quad.points, dtype=_DTYPE)
    v = torch.as_tensor(target.on_points(quad.points), dtype=_DTYPE)
    w = quad.weight

    def fn(t: torch.Tensor) -> torch.Tensor:
        y = model.torch_forward(t, X)
        return 0.5 * w * torch.sum((y - v) ** 2)

    return Objective(
        torch_fn=fn, n_params=model.n_params, name="regression",
        model=model, quad=quad, target=target, mode="regression",
    )


def pinn1d_loss(model: Model, forcing: TargetFunction, quad: Quadrature1D) -> Objective:
    """Strong-form loss 1/2 * dx * sum_i (d2N/dx2(x_i) + v(x_i))^2 for the
    1D Poisson problem u'' + v = 0 with zero Dirichlet boundaries built
    into the basis via the sin(pi x) mask."""
    if model.spec.boundary_mask != "sin_pi_x":
        raise ValueError("pinn1d_loss requires the sin(pi x) boundary mask")
    X = torch.as_tensor(quad.points, dtype=_DTYPE)
    v = torch.as_tensor(forcing.on_points(quad.points), dtype=_DTYPE)
    w = quad.weight

    def fn(t: torch.Tensor) -> torch.Tensor:
        _, _, y2 = model.torch_forward_jet(t, X)
        res = y2[:, 0, 0] + v
        return 0.5 * w * torch.sum(res * res)

    return Objective(
        torch_fn=fn, n_params=model.n_params, name="pinn1d",
        model=model, quad=quad, target=forcing, mode="pinn1d",
    )


def pinn2d_loss(model: Model, forcing: TargetFunction, quad: Quadrature2D) -> Objective:
    """Strong-form loss of the 2D diffusion-reaction problem
    laplacian(u) + u + v = 0 with zero Dirichlet boundaries:
    1/2 * w * sum_i (lap N + N + v)^2 on a tensor-product grid."""
    if model.spec.boundary_mask != "sin_pi_x1x2":
        raise ValueError("pinn2d_loss requires the sin(pi x1) sin(pi x2) mask")
    X = torch.as_tensor(quad.points, dtype=_DTYPE)
    v = torch.as_tensor(forcing.on_points(quad.points), dtype=_DTYPE)
    w = quad.weight

    def fn(t: torch.Tensor) -> torch.Tensor:
        y, _, y2 = model.torch_forward_jet(t, X)
        res = y2[:, 0, 0] + y2[:, 1, 1] + y + v
        return 0.5 * w * torch.sum(res * res)

    return Objective(
        torch_fn=fn, n_params=model.n_params, name="pinn2d",
        model=model, quad=quad, target=forcing, mode="pinn2d",
    )
