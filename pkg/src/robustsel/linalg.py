"""Small dense linear-algebra kernel.

Thin wrappers over numpy/LAPACK with the error contracts the rest of the
package relies on: QR least squares with an explicit rank check, Cholesky-based
SPD inverse and log-determinant. Sized for designs with at most ~20 predictors.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "RankDeficiencyError",
    "NotSPDError",
    "solve_least_squares",
    "invert_spd",
    "log_det",
    "trace",
]

_PIVOT_RTOL = 1e-10
_SYM_TOL = 1e-10


class RankDeficiencyError(ValueError):
    """Design matrix is (numerically) rank deficient."""


class NotSPDError(ValueError):
    """Matrix is not symmetric positive definite."""


def solve_least_squares(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Minimize ||y - X b||_2 via QR; raises on near-singular designs."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
        raise ValueError(f"incompatible shapes {X.shape} and {y.shape}")
    if X.shape[0] < X.shape[1]:
        raise RankDeficiencyError(f"underdetermined system {X.shape}")
    Q, R = np.linalg.qr(X, mode="reduced")
    diag = np.abs(np.diag(R))
    if diag.min() < _PIVOT_RTOL * diag.max():
        raise RankDeficiencyError(
            f"pivot ratio {diag.min() / diag.max():.3e} below {_PIVOT_RTOL:.0e}"
        )
    from scipy.linalg import solve_triangular

    return solve_triangular(R, Q.T @ y, lower=False)


def _cholesky(M: np.ndarray) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"matrix must be square, got {M.shape}")
    scale = max(1.0, np.abs(M).max())
    if np.abs(M - M.T).max() > _SYM_TOL * scale:
        raise NotSPDError("matrix is not symmetric")
    try:
        return np.linalg.cholesky(M)
    except np.linalg.LinAlgError as exc:
        raise NotSPDError("matrix is not positive definite") from exc


def invert_spd(M: np.ndarray) -> np.ndarray:
    """Inverse of a symmetric positive-definite matrix via Cholesky."""
    L = _cholesky(M)
    from scipy.linalg import solve_triangular

    Linv = solve_triangular(L, np.eye(L.shape[0]), lower=True)
    out = Linv.T @ Linv
    # symmetrize away rounding noise
    return 0.5 * (out + out.T)


def log_det(M: np.ndarray) -> float:
    """log-determinant of an SPD matrix via its Cholesky factor."""
    L = _cholesky(M)
    return float(2.0 * np.sum(np.log(np.diag(L))))


def trace(M: np.ndarray) -> float:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"matrix must be square, got {M.shape}")
    return float(np.trace(M))
