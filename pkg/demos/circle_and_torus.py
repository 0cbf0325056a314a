"""Exact Newton on two toy geometries.

Closest point on the unit circle to (2, 2): Newton lands on the minimum
theta = pi/4 or the maximum theta = 5*pi/4 with equal ease, because the
pure Newton step solves for *any* stationary point. The squared-distance
field over an elliptic torus repeats the story in two dimensions: eight
stationary points, and multi-start Newton visits minima, maxima and
saddles alike.
"""

import math

import numpy as np

from newtonlab import (
    OptimizerConfig,
    StationaryPointReport,
    circle_loss,
    run,
    torus_loss,
)
from newtonlab.objectives import TorusSpec, torus_point


def main():
    rng = np.random.default_rng(0)

    print("=== circle ===")
    obj = circle_loss()
    cfg = OptimizerConfig(method="newton", grad_tol=1e-12, max_iters=100)
    for _ in range(8):
        theta0 = rng.uniform(0.0, 2 * math.pi, size=1)
        rec = run(obj, theta0, cfg)
        rep = StationaryPointReport.from_objective(obj, rec.theta_final)
        theta = float(np.mod(rec.theta_final[0], 2 * math.pi))
        print(f"  start {theta0[0]:5.2f} -> theta* = {theta:.6f} "
              f"({theta / math.pi:.2f} pi), {rep.classification}, "
              f"L'' = {rep.eigenvalues[0]:+.4f}")

    print("\n=== torus ===")
    spec = TorusSpec(R=1.0, r=0.35, e=1.2)
    obj = torus_loss(spec)
    cfg = OptimizerConfig(method="lm_newton", eta=0.9, eps=0.01,
                          grad_tol=1e-10, max_iters=500)
    for _ in range(10):
        theta0 = rng.uniform(0.0, 2 * math.pi, size=2)
        rec = run(obj, theta0, cfg)
        rep = StationaryPointReport.from_objective(obj, rec.theta_final)
        x = torus_point(spec, rec.theta_final)
        print(f"  L = {rep.loss:7.4f}  {rep.classification:10s} "
              f"eig = ({rep.eigenvalues[0]:+.4f}, {rep.eigenvalues[1]:+.4f})  "
              f"x3 = {x[2]:+.1e}")
    print("\nevery stationary point sits on the x3 = 0 equator;")
    print("Newton treats all of them as equally valid destinations.")


if __name__ == "__main__":
    main()
