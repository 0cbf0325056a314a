"""End-to-end acceptance suite: re-derives every headline claim from the
checked-in experiment configs and prints one pass/fail line per claim.

Run as `pytest tests/test_acceptance.py -v`. The training-family claims
(4-8) run real second-order training at 140-330 parameters and take
minutes each.
"""

import math

import numpy as np
import pytest

from newtonlab import ModelSpec, build, param_derivs, pinn1d_loss, pinn2d_loss, regression_loss
from newtonlab.expcli import (
    load_config,
    run_circle,
    run_pinn1d,
    run_pinn2d,
    run_quasi_compare,
    run_regression_fourier,
    run_regression_mlp,
    run_regression_siren,
    run_torus_census,
)
from newtonlab.linalg import random_hessian_census
from newtonlab.objectives import Quadrature1D, Quadrature2D, sine_target

from conftest import acceptance_lines
from oracles import fd_gradient, fd_hessian_vector

PI = math.pi


def report(n, ok, detail):
    status = "PASS" if ok else "FAIL"
    acceptance_lines.append(f"criterion {n:>2}: {status} - {detail}")
    print(acceptance_lines[-1])
    assert ok, detail


def _run(runner, name, tmp_path_factory, fmt="csv"):
    out = tmp_path_factory.mktemp(name)
    _, summary = runner(load_config(name), out, fmt, False)
    return summary


# -- shared heavy runs -------------------------------------------------------

@pytest.fixture(scope="session")
def mlp_summary(tmp_path_factory):
    return _run(run_regression_mlp, "regression_mlp", tmp_path_factory)


@pytest.fixture(scope="session")
def siren_summary(tmp_path_factory):
    return _run(run_regression_siren, "regression_siren", tmp_path_factory)


@pytest.fixture(scope="session")
def fourier_summary(tmp_path_factory):
    return _run(run_regression_fourier, "regression_fourier", tmp_path_factory)


@pytest.fixture(scope="session")
def pinn1d_summary(tmp_path_factory):
    return _run(run_pinn1d, "pinn1d", tmp_path_factory)


@pytest.fixture(scope="session")
def pinn2d_summary(tmp_path_factory):
    return _run(run_pinn2d, "pinn2d", tmp_path_factory)


@pytest.fixture(scope="session")
def census_summary(tmp_path_factory):
    return _run(run_torus_census, "torus_census", tmp_path_factory)


def _trivial_ok(run, plateau):
    return (run["trivial"]
            and abs(run["final_loss"] - plateau) <= 0.02 * plateau
            and run["max_abs_ortho"] < 5e-2)


# -- criterion 1: circle -----------------------------------------------------

def test_criterion_1_circle(tmp_path_factory):
    summary = _run(run_circle, "circle", tmp_path_factory)
    runs = summary["runs"]
    ok = summary["all_converged"] and len(runs) == 20
    worst_angle, worst_curv = 0.0, 0.0
    for r in runs:
        d = min(abs(r["theta_star"] - PI / 4), abs(r["theta_star"] - 5 * PI / 4))
        c = abs(abs(r["second_derivative"]) - 2.0 * math.sqrt(2.0))
        worst_angle = max(worst_angle, d)
        worst_curv = max(worst_curv, c)
    ok = ok and worst_angle < 1e-8 and worst_curv < 1e-8
    report(1, ok,
           f"20/20 Newton runs hit theta in {{pi/4, 5pi/4}} "
           f"(max angle err {worst_angle:.1e}, max |L''| err {worst_curv:.1e})")


# -- criterion 2: torus census -----------------------------------------------

def test_criterion_2_torus_census(census_summary):
    pts = census_summary["stationary_points"]
    counts = census_summary["counts"]
    max_x3 = max(abs(p["x3"]) for p in pts) if pts else float("inf")
    ok = (census_summary["n_converged"] == census_summary["n_runs"]
          and len(pts) == 8
          and max_x3 < 1e-8
          and counts == {"minimum": 2, "maximum": 2, "saddle": 4, "degenerate": 0})
    pairs_found = sum(
        any(max(abs(sorted(p["hessian_diag"])[0] - min(want)),
                abs(sorted(p["hessian_diag"])[1] - max(want))) <= 0.05 for p in pts)
        for want in [(1.6, -0.7), (-1.6, -1.1)]
    )
    ok = ok and pairs_found == 2
    report(2, ok,
           f"{len(pts)} stationary points ({counts['minimum']} min / "
           f"{counts['maximum']} max / {counts['saddle']} saddle), max |x3| = {max_x3:.1e}, "
           f"2/2 attainable Hessian pairs found; the (3.7, 0.7) pair is a strict xfail "
           f"(true value (0.37, 0.7), decimal-point transcription)")


@pytest.mark.parametrize("want", [
    pytest.param((3.7, 0.7), marks=pytest.mark.xfail(
        strict=True,
        reason="no torus stationary point has Hessian diagonal near (3.7, 0.7); "
               "the actual minimum pair is (0.3718, 0.7) - a decimal-point "
               "transcription of 0.37 as 3.7. Verified by exact solution of the "
               "stationary equations and independent autodiff.")),
])
def test_criterion_2_reported_pair(census_summary, want):
    pts = census_summary["stationary_points"]
    assert any(
        abs(sorted(p["hessian_diag"])[0] - min(want)) <= 0.05
        and abs(sorted(p["hessian_diag"])[1] - max(want)) <= 0.05
        for p in pts
    )


# -- criterion 3: derivative correctness -------------------------------------

def test_criterion_3_derivatives():
    quad1 = Quadrature1D.midpoint(50)
    quad2 = Quadrature2D.midpoint(10)
    v2, v100 = sine_target(2.0, 2), sine_target(100.0, 2)
    cases = [
        (ModelSpec(1, (10, 10), "tanh"), "reg"),
        (ModelSpec(1, (10, 10), "sine", omega0=4.0), "reg"),
        (ModelSpec(1, (10, 10), "tanh", fourier=(10, 1.5)), "reg"),
        (ModelSpec(1, (10, 10), "sine", omega0=4.0, boundary_mask="sin_pi_x"), "pinn1d"),
        (ModelSpec(2, (10, 10), "sine", omega0=5.0, boundary_mask="sin_pi_x1x2"), "pinn2d"),
    ]
    worst_g, worst_h, worst_sym, draws = 0.0, 0.0, 0.0, 0
    rng = np.random.default_rng(0)
    for spec, mode in cases:
        for seed in range(4):
            model = build(spec, seed)
            if mode == "pinn1d":
                obj = pinn1d_loss(model, v100, quad1)
            elif mode == "pinn2d":
                obj = pinn2d_loss(model, sine_target(100.0, 2, dim=2), quad2)
            else:
                obj = regression_loss(model, v2, quad1)
            theta = rng.normal(0.0, 0.5, size=model.n_params)
            bundle = param_derivs(obj, theta)
            draws += 1

            g_fd = fd_gradient(obj.value, theta, h=1e-5)
            scale = max(1.0, float(np.max(np.abs(bundle.gradient))))
            worst_g = max(worst_g, float(np.max(np.abs(bundle.gradient - g_fd))) / scale)

            v = rng.normal(size=model.n_params)
            v /= np.linalg.norm(v)
            hv_fd = fd_hessian_vector(obj.gradient, theta, v)
            hv = bundle.hessian @ v
            hscale = max(1.0, float(np.max(np.abs(hv))))
            worst_h = max(worst_h, float(np.max(np.abs(hv - hv_fd))) / hscale)
            worst_sym = max(worst_sym, float(np.max(np.abs(bundle.hessian - bundle.hessian.T))))
    ok = draws == 20 and worst_g < 1e-5 and worst_h < 1e-4 and worst_sym == 0.0
    report(3, ok,
           f"{draws} random draws across 5 architectures: grad vs FD {worst_g:.1e} "
           f"(< 1e-5), Hessian-vec vs FD {worst_h:.1e} (< 1e-4), asymmetry {worst_sym:.1e}")


# -- criteria 4-5: tanh-MLP regression ---------------------------------------

def test_criterion_4_mlp_trivial_rate(mlp_summary):
    runs = mlp_summary["runs"]
    good = [r for r in runs if _trivial_ok(r, 1.0)]
    ok = len(runs) == 10 and len(good) >= 6
    report(4, ok,
           f"{len(good)}/10 seeds reached the trivial solution "
           f"(loss within 2% of 1.0, max|O_j| < 5e-2); need >= 6")


def test_criterion_5_saddle_signature(mlp_summary):
    trivial = [r for r in mlp_summary["runs"] if _trivial_ok(r, 1.0)]
    ok = bool(trivial)
    worst_zero_frac = 1.0
    for r in trivial:
        lam = np.asarray(r["eigenvalues"])
        tol = 1e-6 * float(np.max(np.abs(lam)))
        zero_frac = float(np.mean(np.abs(lam) <= tol))
        worst_zero_frac = min(worst_zero_frac, zero_frac)
        ok = ok and np.any(lam > tol) and np.any(lam < -tol) and zero_frac >= 0.5
    report(5, ok,
           f"all {len(trivial)} trivial solutions have mixed-sign spectra with "
           f">= 50% eigenvalues within tol of zero (worst fraction {worst_zero_frac:.0%})")


# -- criterion 6: SIREN and Fourier variants ---------------------------------

def test_criterion_6_siren_fourier(siren_summary, fourier_summary):
    s_good = [r for r in siren_summary["runs"] if _trivial_ok(r, 1.0)]
    f_good = [r for r in fourier_summary["runs"] if _trivial_ok(r, 1.0)]
    ok = (len(siren_summary["runs"]) == 5 and len(s_good) >= 2
          and len(fourier_summary["runs"]) == 10 and len(f_good) >= 2)
    report(6, ok,
           f"trivial solutions: sinusoidal {len(s_good)}/5 (need >= 2), "
           f"Fourier-feature {len(f_good)}/10 (need >= 2), each with loss within 2% of 1.0")


# -- criterion 7: PINN 1D ----------------------------------------------------

def test_criterion_7_pinn1d(pinn1d_summary):
    runs = pinn1d_summary["runs"]
    good = [r for r in runs if _trivial_ok(r, 2500.0)]
    ok = len(runs) == 5 and len(good) >= 3
    report(7, ok,
           f"{len(good)}/5 collocation runs reached the trivial solution "
           f"(loss within 2% of 2500, differential max|O_j| < 5e-2); need >= 3")


# -- criterion 8: PINN 2D ----------------------------------------------------

def test_criterion_8_pinn2d(pinn2d_summary):
    ok = bool(pinn2d_summary["runs"])
    details = []
    for r in pinn2d_summary["runs"]:
        lam = np.asarray(r["newton"]["eigenvalues"])
        if lam.size:
            tol = 1e-6 * max(1.0, float(np.max(np.abs(lam))))
            mixed = bool(np.any(lam > tol) and np.any(lam < -tol))
        else:  # diverged run: no finite Hessian to classify
            mixed = False
        rel = r["adam"]["relative_l2_error"]
        ok = ok and r["newton"]["trivial"] and mixed and rel < 0.05
        details.append(f"seed {r['seed']}: adam rel-L2 {rel:.3f}, newton trivial "
                       f"{r['newton']['trivial']}, mixed spectrum {mixed}")
    report(8, ok, "; ".join(details))


# -- criterion 9: random Hessian census --------------------------------------

def test_criterion_9_random_hessian():
    c = random_hessian_census(140, 10000, seed=0)
    big_ok = c["definite_positive"] == 0 and c["definite_negative"] == 0

    # analytic n=2 oracle: definite fraction = 2 * P(positive definite),
    # P(PD) = int_{a,d>0} phi(a) phi(d) erf(sqrt(ad)) da dd
    from scipy.integrate import dblquad
    from scipy.special import erf
    phi = lambda t: math.exp(-t * t / 2.0) / math.sqrt(2.0 * math.pi)
    p_pd, _ = dblquad(lambda d, a: phi(a) * phi(d) * erf(math.sqrt(a * d)),
                      0.0, 8.0, 0.0, 8.0)
    c2 = random_hessian_census(2, 100000, seed=1)
    frac = (c2["definite_positive"] + c2["definite_negative"]) / 100000
    small_ok = abs(frac - 2.0 * p_pd) <= 0.005
    report(9, big_ok and small_ok,
           f"n=140, 1e4 trials: 0 definite draws; n=2 definite fraction {frac:.4f} "
           f"vs analytic {2 * p_pd:.4f} (within 0.5%)")


# -- criterion 10: quasi-Newton comparison -----------------------------------

def test_criterion_10_quasi_newton(tmp_path_factory):
    summary = _run(run_quasi_compare, "quasi_compare", tmp_path_factory)
    n_min, n_runs, monotone = 0, 0, True
    for block in summary["methods"].values():
        n_runs += len(block["runs"])
        n_min += block["n_minima"]
        monotone = monotone and all(r["loss_non_increasing"] for r in block["runs"])
    ok = n_runs == 30 and n_min == 30 and monotone
    report(10, ok,
           f"{n_min}/{n_runs} BFGS + saddle-free runs terminated at minima "
           f"with non-increasing loss")
