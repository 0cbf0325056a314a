"""Safeguarded curvature methods refuse the saddles Newton walks into.

Same elliptic-torus distance field, same random starts, three solvers:

- exact Newton: jumps to whatever stationary point the local quadratic
  model predicts, minima and saddles alike;
- BFGS: builds its curvature estimate only from updates that keep it
  positive definite and accepts steps only if the loss decreases, so the
  loss is monotone and only minima can absorb it;
- saddle-free Newton: takes |H| = V |Lambda| V^T instead of H, turning
  every negative-curvature direction into a descent direction.
"""

import math

import numpy as np

from newtonlab import OptimizerConfig, StationaryPointReport, run, torus_loss


def main():
    obj = torus_loss()
    rng = np.random.default_rng(7)
    starts = [rng.uniform(0, 2 * math.pi, size=2) for _ in range(12)]

    configs = {
        "newton": OptimizerConfig(method="lm_newton", eta=0.9, eps=0.01,
                                  grad_tol=1e-10, max_iters=500),
        "bfgs": OptimizerConfig(method="bfgs", grad_tol=1e-10, max_iters=400),
        "saddle_free": OptimizerConfig(method="saddle_free", grad_tol=1e-10,
                                       max_iters=400),
    }

    print(f"{'method':>12} {'minima':>7} {'maxima':>7} {'saddles':>8} {'monotone':>9}")
    for label, cfg in configs.items():
        tally = {"minimum": 0, "maximum": 0, "saddle": 0, "degenerate": 0}
        monotone = 0
        for theta0 in starts:
            rec = run(obj, theta0, cfg)
            rep = StationaryPointReport.from_objective(obj, rec.theta_final)
            tally[rep.classification] += 1
            if np.all(np.diff(rec.loss) <= 1e-12):
                monotone += 1
        print(f"{label:>12} {tally['minimum']:>7} {tally['maximum']:>7} "
              f"{tally['saddle']:>8} {monotone:>5}/{len(starts)}")

    print("\nNewton's endpoints follow the landscape census (mostly saddles);")
    print("both safeguarded methods land on a minimum every single time.")


if __name__ == "__main__":
    main()
