"""Why saddle points dominate in high dimension.

Draw random symmetric matrices J = (M + M^T)/2 with standard normal
entries and count how often all eigenvalues share a sign. At n = 1 a
"matrix" is definite half the time; by n = 10 a definite draw is already
astronomically unlikely; at n = 140 (the parameter count of the small
networks in this package) every draw is indefinite. A generic stationary
point of a generic high-dimensional function is a saddle, and a solver
that targets stationary points without checking curvature will find them.
"""

import numpy as np

from newtonlab.linalg import random_hessian_census


def main():
    trials = 2000
    print(f"{'n':>4} {'pos.def.':>10} {'neg.def.':>10} {'indefinite':>11}")
    for n in (1, 2, 3, 5, 10, 140):
        t = trials if n < 100 else 200
        c = random_hessian_census(n, t, seed=0)
        print(f"{n:>4} {c['definite_positive'] / t:>10.3f} "
              f"{c['definite_negative'] / t:>10.3f} {c['indefinite'] / t:>11.3f}")

    m = np.random.default_rng(0).standard_normal((140, 140))
    lam = np.linalg.eigvalsh(0.5 * (m + m.T))
    neg = np.sum(lam < 0)
    print(f"\none n=140 draw: {neg} negative / {140 - neg} positive eigenvalues,")
    print("split evenly around zero, exactly the signature of a saddle.")


if __name__ == "__main__":
    main()
