"""Derivative engine checks against finite-difference and closed-form oracles."""

import math

import numpy as np
import pytest

from newtonlab import (
    ModelSpec,
    NonFiniteDerivative,
    UnsupportedDimension,
    build,
    circle_loss,
    param_derivs,
    regression_loss,
    spatial_jet,
)
from newtonlab.objectives import Objective, Quadrature1D, sine_target
from newtonlab.params import all_inner

from oracles import fd_gradient, fd_hessian_vector

import torch


def _poly_objective():
    return Objective(torch_fn=lambda t: t[0] ** 2 + t[1] ** 2, n_params=2, name="poly")


def test_polynomial_identity():
    b = param_derivs(_poly_objective(), np.array([1.0, 2.0]))
    assert b.value == pytest.approx(5.0)
    assert b.gradient == pytest.approx([2.0, 4.0])
    assert b.hessian == pytest.approx(np.diag([2.0, 2.0]))


def test_circle_second_derivative_at_quarter_pi():
    b = param_derivs(circle_loss(), np.array([math.pi / 4]))
    assert abs(b.gradient[0]) < 1e-12
    assert b.hessian[0, 0] == pytest.approx(2.0 * math.sqrt(2.0), abs=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_mlp_regression_derivs_match_finite_differences(seed):
    model = build(ModelSpec(1, (10, 10), "tanh"), seed)
    obj = regression_loss(model, sine_target(2.0, 2), Quadrature1D.midpoint(50))
    rng = np.random.default_rng(100 + seed)
    theta = rng.normal(0.0, 0.5, size=model.n_params)
    b = param_derivs(obj, theta)

    f = lambda v: obj.value(v)
    g_fd = fd_gradient(f, theta, h=1e-5)
    scale = max(1.0, np.max(np.abs(b.gradient)))
    assert np.max(np.abs(b.gradient - g_fd)) / scale < 1e-5

    v = rng.normal(size=model.n_params)
    v /= np.linalg.norm(v)
    hv_fd = fd_hessian_vector(lambda x: obj.gradient(x), theta, v)
    hv = b.hessian @ v
    assert np.max(np.abs(hv - hv_fd)) / max(1.0, np.max(np.abs(hv))) < 1e-4


def test_hessian_symmetry_exact_after_symmetrization():
    model = build(ModelSpec(1, (6, 6), "sine", omega0=4.0), 1)
    obj = regression_loss(model, sine_target(2.0, 2), Quadrature1D.midpoint(40))
    b = param_derivs(obj, model.initial_params())
    assert np.max(np.abs(b.hessian - b.hessian.T)) == 0.0


def test_presymmetrization_asymmetry_small():
    model = build(ModelSpec(1, (8, 8), "tanh"), 2)
    obj = regression_loss(model, sine_target(2.0, 2), Quadrature1D.midpoint(40))
    t = torch.as_tensor(model.initial_params().values, dtype=torch.float64)
    raw = torch.func.hessian(obj.torch_fn)(t).numpy()
    rel = np.max(np.abs(raw - raw.T)) / max(1.0, np.max(np.abs(raw)))
    assert rel < 1e-8


def test_nonfinite_derivative_names_index():
    bad = Objective(torch_fn=lambda t: torch.log(t[1]), n_params=2, name="bad")
    with pytest.raises(NonFiniteDerivative) as err:
        param_derivs(bad, np.array([1.0, -1.0]))
    assert err.value.index >= -1


# -- spatial jets ------------------------------------------------------------

def test_jet_pure_sine():
    # single-neuron path that reduces to sin(pi x): sine activation with
    # omega0 = pi, weight 1, bias 0, outer coefficient 1
    model = build(ModelSpec(1, (1,), "sine", omega0=math.pi), 0)
    theta = np.array([1.0, 0.0, 1.0])  # W1, b1, theta_O
    j = spatial_jet(model, theta, 0.5)
    assert j.value == pytest.approx(1.0, abs=1e-12)
    assert j.d1[0] == pytest.approx(0.0, abs=1e-12)
    assert j.d2[0, 0] == pytest.approx(-math.pi ** 2, abs=1e-10)


def test_jet_2d_product_of_sines():
    # sin(pi x1) sin(pi x2) via the boundary mask on a frozen unit basis is
    # awkward; instead check the masked model at theta_O = e_1 with the
    # hidden unit pinned to a constant via zero weights and sine activation.
    model = build(ModelSpec(2, (1,), "sine", omega0=1.0, boundary_mask="sin_pi_x1x2"), 0)
    # h~ = sin(0 x + b); pick b with sin(b) = 1 -> h = mask
    theta = np.array([0.0, 0.0, math.pi / 2, 1.0])
    j = spatial_jet(model, theta, np.array([0.5, 0.5]))
    assert j.value == pytest.approx(1.0, abs=1e-12)
    assert j.laplacian == pytest.approx(-2.0 * math.pi ** 2, rel=1e-10)


def test_jet_closed_form_sine_many_points():
    model = build(ModelSpec(1, (1,), "sine", omega0=math.pi), 0)
    theta = np.array([1.0, 0.0, 2.5])  # N(x) = 2.5 sin(pi x)
    xs = np.random.default_rng(0).uniform(0, 1, size=50)
    for x in xs:
        j = spatial_jet(model, theta, x)
        assert j.value == pytest.approx(2.5 * math.sin(math.pi * x), abs=1e-10)
        assert j.d1[0] == pytest.approx(2.5 * math.pi * math.cos(math.pi * x), abs=1e-10)
        assert j.d2[0, 0] == pytest.approx(-2.5 * math.pi ** 2 * math.sin(math.pi * x), abs=1e-8)


@pytest.mark.parametrize("spec", [
    ModelSpec(1, (10, 10), "sine", omega0=4.0),
    ModelSpec(1, (10, 10), "tanh", fourier=(5, 1.5)),
    ModelSpec(1, (10, 10), "sine", omega0=4.0, boundary_mask="sin_pi_x"),
])
def test_jet_matches_finite_differences(spec):
    model = build(spec, 7)
    theta = model.initial_params()
    x0 = 0.3
    j = spatial_jet(model, theta, x0)
    f = lambda x: model.forward(theta, np.array([x]))
    h = 1e-4
    d1 = (f(x0 + h) - f(x0 - h)) / (2 * h)
    d2 = (f(x0 + h) - 2 * f(x0) + f(x0 - h)) / h ** 2
    assert j.d1[0] == pytest.approx(d1, rel=1e-4, abs=1e-6)
    assert j.d2[0, 0] == pytest.approx(d2, rel=1e-4, abs=1e-4)


def test_jet_2d_finite_difference_laplacian():
    model = build(ModelSpec(2, (8, 8), "sine", omega0=5.0, boundary_mask="sin_pi_x1x2"), 3)
    theta = model.initial_params()
    x0 = np.array([0.37, 0.61])
    j = spatial_jet(model, theta, x0)
    h = 1e-4
    lap = 0.0
    for i in range(2):
        e = np.zeros(2)
        e[i] = h
        lap += (model.forward(theta, x0 + e) - 2 * model.forward(theta, x0) + model.forward(theta, x0 - e)) / h ** 2
    assert j.laplacian == pytest.approx(lap, rel=1e-5, abs=1e-4)
    assert np.max(np.abs(j.d2 - j.d2.T)) == 0.0


def test_jet_rejects_high_dimension():
    model = build(ModelSpec(2, (4,), "tanh"), 0)
    with pytest.raises(UnsupportedDimension):
        spatial_jet(model, model.initial_params(), np.array([0.1, 0.2, 0.3]))


def test_param_vector_partition_validation():
    with pytest.raises(ValueError):
        all_inner(np.array([]))
