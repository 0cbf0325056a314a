"""Damped Newton training a small tanh network to regress 2 sin(4 pi x),
watching it converge to the trivial solution.

The network ends with a linear layer, so it is a linear combination of
learned basis functions h_k with outer coefficients theta_O. There is a
stationary point at theta_O = 0 whenever every h_k is orthogonal to the
target on the grid: the network outputs zero everywhere, the loss equals
half the mean squared target, and the Hessian mixes positive, negative
and near-zero eigenvalues. Damped Newton walks straight into it.

Watch three numbers as epochs pass: the loss approaching 1.0 (the value
at zero output), ||theta_O|| collapsing, and max_j |O_j| (the normalized
basis/target inner products) sinking toward zero.
"""

import numpy as np

from newtonlab import (
    ModelSpec,
    OptimizerConfig,
    StationaryPointReport,
    build,
    detect_trivial,
    orthogonality_regression,
    regression_loss,
    run,
)
from newtonlab.objectives import Quadrature1D, sine_target


def main():
    # not every seed walks into the trivial saddle (some fit the target,
    # some stall at other stationary points); this one does, quickly
    seed = 3
    model = build(ModelSpec(1, (10, 10), "tanh"), seed)
    quad = Quadrature1D.midpoint(100)
    target = sine_target(2.0, 2)
    obj = regression_loss(model, target, quad)

    ortho = lambda th: orthogonality_regression(model, th, target, quad)
    cfg = OptimizerConfig(method="lm_newton", eta=5e-2, eps=5e-2,
                          grad_tol=1e-5, max_iters=2000)
    print(f"training {model.n_params}-parameter tanh network, seed {seed} ...")
    rec = run(obj, model.initial_params(), cfg, ortho_fn=ortho)

    print(f"\n{'epoch':>6} {'loss':>10} {'||grad||':>10} {'max|O_j|':>10}")
    marks = [0] + [min(2 ** k * 100, rec.epochs - 1) for k in range(12)]
    for i in sorted(set(m for m in marks if m < rec.epochs)):
        print(f"{i:>6} {rec.loss[i]:>10.5f} {rec.grad_norm[i]:>10.2e} "
              f"{np.nanmax(np.abs(rec.ortho[i])):>10.2e}")

    theta = model.param_vector(rec.theta_final)
    rep = StationaryPointReport.from_objective(obj, theta)
    lam = rep.eigenvalues
    near_zero = np.mean(np.abs(lam) <= rep.zero_tol)
    print(f"\nconverged: {rec.converged} after {rec.epochs} epochs")
    print(f"final loss           {rec.loss[-1]:.6f}   (zero-output value: 1.0)")
    print(f"||theta_O||_inf      {np.max(np.abs(theta.outer)):.2e}")
    print(f"trivial solution     {detect_trivial(theta, model, quad)}")
    print(f"classification       {rep.classification}")
    print(f"spectrum             {np.sum(lam > rep.zero_tol)} positive, "
          f"{np.sum(lam < -rep.zero_tol)} negative, "
          f"{near_zero:.0%} within tolerance of zero")


if __name__ == "__main__":
    main()
