"""Dense symmetric linear algebra for Newton steps and spectra.

Backed by LAPACK through numpy/scipy (symmetric-indefinite factorization
for shifted solves, full symmetric eigendecomposition). The random
Hessian census draws M with i.i.d. standard normal entries, symmetrizes
as (M + M^T)/2 and counts definiteness patterns of the spectra.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

__all__ = [
    "SingularSystem",
    "EigFailure",
    "symmetrize",
    "solve_shifted",
    "sym_eig",
    "random_hessian_census",
]


class SingularSystem(np.linalg.LinAlgError):
    """Shifted system is singular to working precision."""


class EigFailure(np.linalg.LinAlgError):
    """Eigendecomposition failed to converge."""


def symmetrize(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    return 0.5 * (a + a.T)


def solve_shifted(a: np.ndarray, shift: float, b: np.ndarray) -> np.ndarray:
    """Solve (A + shift*I) x = b for symmetric A via a pivoted
    symmetric-indefinite factorization.

    Raises SingularSystem when the factorization fails or the
    multiply-back residual exceeds 1e-8 * ||b|| (caller may raise the
    shift and retry).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float).reshape(-1)
    m = a + shift * np.eye(a.shape[0])
    try:
        x = scipy.linalg.solve(m, b, assume_a="sym")
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError, ValueError) as exc:
        raise SingularSystem(str(exc)) from exc
    resid = np.linalg.norm(m @ x - b)
    bnorm = np.linalg.norm(b)
    if not np.isfinite(x).all() or resid > 1e-8 * max(bnorm, 1e-300):
        raise SingularSystem(f"residual {resid:.3e} vs ||b|| {bnorm:.3e}")
    return x


def sym_eig(a: np.ndarray):
    """Full eigendecomposition of a symmetric matrix.

    Returns (eigenvalues ascending, eigenvector columns).
    """
    a = symmetrize(a)
    try:
        lam, vec = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise EigFailure(str(exc)) from exc
    return lam, vec


def random_hessian_census(n: int, trials: int, seed: int) -> dict:
    """Definiteness census of random symmetric matrices J = (M + M^T)/2,
    M_ij i.i.d. N(0, 1). Returns counts of positive-definite,
    negative-definite and indefinite draws (zero eigenvalues have
    probability zero and are lumped with indefinite)."""
    if n < 1 or trials < 1:
        raise ValueError("need n >= 1 and trials >= 1")
    rng = np.random.default_rng(seed)
    counts = {"definite_positive": 0, "definite_negative": 0, "indefinite": 0}
    for _ in range(trials):
        m = rng.standard_normal((n, n))
        j = 0.5 * (m + m.T)
        lam = np.linalg.eigvalsh(j)
        if lam[0] > 0.0:
            counts["definite_positive"] += 1
        elif lam[-1] < 0.0:
            counts["definite_negative"] += 1
        else:
            counts["indefinite"] += 1
    return counts
