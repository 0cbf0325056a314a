"""Builders and evaluators for the small network discretizations.

Supported architectures: tanh MLP, sinusoidal (SIREN-style) MLP, and
tanh MLP over a frozen random Fourier feature embedding. All networks
have no bias on the output layer, so the output is a linear combination
of last-hidden-layer "basis functions". An optional distance-function
mask (sin(pi x) in 1D, sin(pi x1) sin(pi x2) in 2D) is applied to each
basis function so homogeneous Dirichlet conditions hold by construction.

Evaluation is done in torch (float64) so objectives built on top remain
exactly parameter-differentiable; the public API speaks numpy.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import torch

from newtonlab.params import ParamVector

_DTYPE = torch.float64

_ACTIVATIONS = ("tanh", "sine")
_MASKS = ("none", "sin_pi_x", "sin_pi_x1x2")


class ShapeError(ValueError):
    """Input dimensions disagree with the model."""


@dataclass(frozen=True)
class ModelSpec:
    """Architecture description.

    activation "sine" means sin(omega0 * z). fourier, when present, is a
    pair (f, sigma2): 2f frozen random Fourier features with frequency
    std sqrt(sigma2) on the input (1D inputs only).
    """

    input_dim: int
    hidden_widths: tuple
    activation: str = "tanh"
    omega0: float = 1.0
    fourier: Optional[tuple] = None
    boundary_mask: str = "none"
    output_bias: bool = False

    def __post_init__(self):
        object.__setattr__(self, "hidden_widths", tuple(int(w) for w in self.hidden_widths))
        if self.input_dim not in (1, 2):
            raise ValueError("input_dim must be 1 or 2")
        if not self.hidden_widths or any(w < 1 for w in self.hidden_widths):
            raise ValueError("hidden_widths must be a nonempty list of positive ints")
        if self.activation not in _ACTIVATIONS:
            raise ValueError(f"activation must be one of {_ACTIVATIONS}")
        if self.activation == "sine" and not self.omega0 > 0:
            raise ValueError("omega0 must be positive for sinusoidal activations")
        if self.fourier is not None:
            f, sigma2 = self.fourier
            if not (int(f) > 0 and sigma2 > 0):
                raise ValueError("fourier requires f > 0 and sigma2 > 0")
            if self.input_dim != 1:
                raise ValueError("Fourier features are defined for 1D inputs only")
            object.__setattr__(self, "fourier", (int(f), float(sigma2)))
        if self.boundary_mask not in _MASKS:
            raise ValueError(f"boundary_mask must be one of {_MASKS}")
        if self.boundary_mask == "sin_pi_x" and self.input_dim != 1:
            raise ValueError("sin_pi_x mask requires input_dim 1")
        if self.boundary_mask == "sin_pi_x1x2" and self.input_dim != 2:
            raise ValueError("sin_pi_x1x2 mask requires input_dim 2")
        if self.output_bias:
            raise ValueError("output_bias is not supported (outer layer is pure linear)")

    # -- JSON wire format ------------------------------------------------
    def to_json_dict(self) -> dict:
        d = {
            "input_dim": self.input_dim,
            "hidden_widths": list(self.hidden_widths),
            "activation": self.activation,
            "boundary_mask": self.boundary_mask,
            "output_bias": self.output_bias,
        }
        if self.activation == "sine":
            d["omega0"] = self.omega0
        if self.fourier is not None:
            d["fourier"] = {"f": self.fourier[0], "sigma2": self.fourier[1]}
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> "ModelSpec":
        fourier = d.get("fourier")
        if fourier is not None:
            fourier = (fourier["f"], fourier["sigma2"])
        return cls(
            input_dim=int(d["input_dim"]),
            hidden_widths=tuple(d["hidden_widths"]),
            activation=d.get("activation", "tanh"),
            omega0=float(d.get("omega0", 1.0)),
            fourier=fourier,
            boundary_mask=d.get("boundary_mask", "none"),
            output_bias=bool(d.get("output_bias", False)),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, s: str) -> "ModelSpec":
        return cls.from_json_dict(json.loads(s))


def fourier_embed(B: np.ndarray, x) -> np.ndarray:
    """Random Fourier features [sin(2 pi B x), cos(2 pi B x)].

    B has shape [f]; x is a scalar or a 1D array of points. Returns
    shape [2f] (scalar x) or [P, 2f].
    """
    B = np.asarray(B, dtype=float).reshape(-1)
    xs = np.asarray(x, dtype=float)
    z = 2.0 * np.pi * np.multiply.outer(xs, B)
    out = np.concatenate([np.sin(z), np.cos(z)], axis=-1)
    return out


class Model:
    """An immutable, evaluable network built from a ModelSpec.

    Holds layer shapes, the frozen Fourier matrix (if any), and the
    Xavier-initialized parameter vector drawn at build time. All
    evaluation methods are pure functions of the parameter values passed
    in; nothing here mutates after construction.
    """

    def __init__(self, spec: ModelSpec, seed: int):
        self.spec = spec
        self.seed = int(seed)
        rng = np.random.default_rng(self.seed)

        if spec.fourier is not None:
            f, sigma2 = spec.fourier
            self._B_np = rng.normal(0.0, math.sqrt(sigma2), size=f)
            self._B = torch.as_tensor(self._B_np, dtype=_DTYPE)
            in_dim = 2 * f
        else:
            self._B_np = None
            self._B = None
            in_dim = spec.input_dim

        widths = [in_dim, *spec.hidden_widths]
        self.layer_shapes = []  # [(W shape, has_bias), ...]
        sizes = []
        for i in range(1, len(widths)):
            self.layer_shapes.append(((widths[i], widths[i - 1]), True))
            sizes.extend([widths[i] * widths[i - 1], widths[i]])
        self.layer_shapes.append(((1, widths[-1]), False))  # output, no bias
        sizes.append(widths[-1])
        self._sizes = sizes
        self._offsets = np.concatenate([[0], np.cumsum(sizes)])
        self.n_params = int(self._offsets[-1])
        self.n_basis = widths[-1]

        self.outer_indices = np.arange(self.n_params - self.n_basis, self.n_params)
        self.inner_indices = np.arange(self.n_params - self.n_basis)

        # Xavier-uniform weights, zero biases, Xavier output layer.
        theta0 = np.zeros(self.n_params)
        k = 0
        for (out_d, in_d), has_bias in self.layer_shapes:
            bound = math.sqrt(6.0 / (in_d + out_d))
            w = rng.uniform(-bound, bound, size=out_d * in_d)
            theta0[self._offsets[k]:self._offsets[k] + w.size] = w
            k += 1
            if has_bias:
                k += 1  # biases stay zero
        self._theta0 = theta0

    # -- parameters ------------------------------------------------------
    def initial_params(self) -> ParamVector:
        return ParamVector(self._theta0.copy(), self.inner_indices, self.outer_indices)

    def param_vector(self, values) -> ParamVector:
        return ParamVector(np.asarray(values, dtype=float), self.inner_indices, self.outer_indices)

    @property
    def B(self) -> Optional[np.ndarray]:
        return None if self._B_np is None else self._B_np.copy()

    @property
    def input_dim(self) -> int:
        return self.spec.input_dim

    # -- torch internals -------------------------------------------------
    def _unpack(self, t: torch.Tensor):
        params = []
        k = 0
        for (out_d, in_d), has_bias in self.layer_shapes:
            w = t[self._offsets[k]:self._offsets[k + 1]].reshape(out_d, in_d)
            k += 1
            b = None
            if has_bias:
                b = t[self._offsets[k]:self._offsets[k + 1]]
                k += 1
            params.append((w, b))
        return params

    def _act(self, z: torch.Tensor) -> torch.Tensor:
        if self.spec.activation == "tanh":
            return torch.tanh(z)
        return torch.sin(self.spec.omega0 * z)

    def _act_jet(self, z: torch.Tensor):
        """(sigma(z), sigma'(z), sigma''(z)) elementwise."""
        if self.spec.activation == "tanh":
            y = torch.tanh(z)
            d1 = 1.0 - y * y
            d2 = -2.0 * y * d1
            return y, d1, d2
        w0 = self.spec.omega0
        s = torch.sin(w0 * z)
        c = torch.cos(w0 * z)
        return s, w0 * c, -w0 * w0 * s

    def _embed(self, X: torch.Tensor) -> torch.Tensor:
        """Input features [P, m0] (identity or Fourier lift)."""
        if self._B is None:
            return X
        z = 2.0 * math.pi * X[:, 0:1] * self._B[None, :]
        return torch.cat([torch.sin(z), torch.cos(z)], dim=1)

    def _embed_jet(self, X: torch.Tensor):
        """Feature jet: (y [P,m0], dy/dx [P,d,m0], d2y/dx2 [P,d,d,m0])."""
        P, d = X.shape
        if self._B is None:
            y = X
            d1 = torch.eye(d, dtype=X.dtype).expand(P, d, d)
            d2 = torch.zeros(P, d, d, d, dtype=X.dtype)
            return y, d1, d2
        tb = 2.0 * math.pi * self._B  # [f]
        z = X[:, 0:1] * tb[None, :]  # [P, f]
        s, c = torch.sin(z), torch.cos(z)
        y = torch.cat([s, c], dim=1)
        d1 = torch.cat([tb * c, -tb * s], dim=1).reshape(P, 1, -1)
        d2 = torch.cat([-tb * tb * s, -tb * tb * c], dim=1).reshape(P, 1, 1, -1)
        return y, d1, d2

    def _mask(self, X: torch.Tensor) -> torch.Tensor:
        if self.spec.boundary_mask == "none":
            return torch.ones(X.shape[0], dtype=X.dtype)
        if self.spec.boundary_mask == "sin_pi_x":
            return torch.sin(math.pi * X[:, 0])
        return torch.sin(math.pi * X[:, 0]) * torch.sin(math.pi * X[:, 1])

    def _mask_jet(self, X: torch.Tensor):
        """(m [P], dm/dx [P,d], d2m/dx2 [P,d,d]) for the boundary mask."""
        P, d = X.shape
        pi = math.pi
        if self.spec.boundary_mask == "none":
            return (
                torch.ones(P, dtype=X.dtype),
                torch.zeros(P, d, dtype=X.dtype),
                torch.zeros(P, d, d, dtype=X.dtype),
            )
        if self.spec.boundary_mask == "sin_pi_x":
            px = pi * X[:, 0]
            m = torch.sin(px)
            d1 = (pi * torch.cos(px)).reshape(P, 1)
            d2 = (-pi * pi * torch.sin(px)).reshape(P, 1, 1)
            return m, d1, d2
        s1, c1 = torch.sin(pi * X[:, 0]), torch.cos(pi * X[:, 0])
        s2, c2 = torch.sin(pi * X[:, 1]), torch.cos(pi * X[:, 1])
        m = s1 * s2
        d1 = pi * torch.stack([c1 * s2, s1 * c2], dim=1)
        dxx = -pi * pi * s1 * s2
        dxy = pi * pi * c1 * c2
        d2 = torch.stack(
            [torch.stack([dxx, dxy], dim=1), torch.stack([dxy, dxx], dim=1)], dim=1
        )
        return m, d1, d2

    def torch_raw_basis(self, t: torch.Tensor, X: torch.Tensor) -> torch.Tensor:
        """Unmasked last-hidden-layer activations h~_k, shape [P, k]."""
        y = self._embed(X)
        params = self._unpack(t)
        for w, b in params[:-1]:
            y = self._act(y @ w.T + b)
        return y

    def torch_basis(self, t: torch.Tensor, X: torch.Tensor) -> torch.Tensor:
        """Masked basis functions h_k = mask * h~_k, shape [P, k]."""
        return self._mask(X)[:, None] * self.torch_raw_basis(t, X)

    def torch_forward(self, t: torch.Tensor, X: torch.Tensor) -> torch.Tensor:
        """Network output N(x; theta), shape [P]."""
        theta_out = t[self._offsets[-2]:self._offsets[-1]]
        return self.torch_basis(t, X) @ theta_out

    def torch_basis_jet(self, t: torch.Tensor, X: torch.Tensor):
        """Masked basis spatial jet: (h [P,k], dh [P,d,k], d2h [P,d,d,k]).

        Order-2 jet propagation through the layers; entries remain
        parameter-differentiable torch tensors.
        """
        y, y1, y2 = self._embed_jet(X)
        params = self._unpack(t)
        for w, b in params[:-1]:
            z = y @ w.T + b
            z1 = torch.einsum("pdm,km->pdk", y1, w)
            z2 = torch.einsum("pdem,km->pdek", y2, w)
            a, a1, a2 = self._act_jet(z)
            y = a
            y1 = a1[:, None, :] * z1
            y2 = a2[:, None, None, :] * torch.einsum("pdk,pek->pdek", z1, z1) \
                + a1[:, None, None, :] * z2
        m, m1, m2 = self._mask_jet(X)
        h = m[:, None] * y
        h1 = m1[:, :, None] * y[:, None, :] + m[:, None, None] * y1
        h2 = (
            m2[:, :, :, None] * y[:, None, None, :]
            + m1[:, :, None, None] * y1[:, None, :, :]
            + m1[:, None, :, None] * y1[:, :, None, :]
            + m[:, None, None, None] * y2
        )
        return h, h1, h2

    def torch_forward_jet(self, t: torch.Tensor, X: torch.Tensor):
        """Network output jet: (N [P], dN/dx [P,d], d2N/dx2 [P,d,d])."""
        theta_out = t[self._offsets[-2]:self._offsets[-1]]
        h, h1, h2 = self.torch_basis_jet(t, X)
        return h @ theta_out, h1 @ theta_out, h2 @ theta_out

    # -- numpy-facing API ------------------------------------------------
    def _as_points(self, x) -> np.ndarray:
        X = np.asarray(x, dtype=float)
        if X.ndim == 0:
            X = X.reshape(1, 1)
        elif X.ndim == 1:
            if self.input_dim == 1:
                X = X.reshape(-1, 1)
            elif X.size == self.input_dim:
                X = X.reshape(1, -1)
            else:
                raise ShapeError(f"cannot interpret shape {X.shape} as points in {self.input_dim}D")
        if X.ndim != 2 or X.shape[1] != self.input_dim:
            raise ShapeError(f"expected points of dimension {self.input_dim}, got shape {X.shape}")
        return X

    def _theta_tensor(self, theta) -> torch.Tensor:
        values = theta.values if isinstance(theta, ParamVector) else np.asarray(theta, dtype=float)
        if values.size != self.n_params:
            raise ShapeError(f"expected {self.n_params} parameters, got {values.size}")
        return torch.as_tensor(values, dtype=_DTYPE)

    def forward(self, theta, x):
        """N(x; theta) as float (single point) or [P] array."""
        X = self._as_points(x)
        out = self.torch_forward(self._theta_tensor(theta), torch.as_tensor(X, dtype=_DTYPE))
        out = out.detach().numpy()
        return float(out[0]) if np.asarray(x).ndim in (0, 1) and out.size == 1 else out

    def basis(self, theta, x) -> np.ndarray:
        """Masked basis values h_k(x; theta_inner), shape [k] or [P, k]."""
        X = self._as_points(x)
        out = self.torch_basis(self._theta_tensor(theta), torch.as_tensor(X, dtype=_DTYPE))
        out = out.detach().numpy()
        return out[0] if np.asarray(x).ndim in (0, 1) and out.shape[0] == 1 else out


def build(spec: ModelSpec, seed: int) -> Model:
    """Build a model: Xavier-uniform weights, zero biases, frozen Fourier
    matrix drawn N(0, sigma2). Deterministic under seed."""
    return Model(spec, seed)
