"""Huber M-estimation by iteratively reweighted least squares.

The objective uses the quadratic/linear form u^2 inside [-k, k] and
2k|u| - k^2 outside (twice the textbook Huber loss; the weight function and
hence the IRLS fixed point are unaffected by the factor of two). The scale is
re-estimated from the MAD of the residuals at every iteration and the
coefficient covariance is the usual sandwich estimate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .linalg import invert_spd, solve_least_squares

__all__ = [
    "K_C0",
    "K_CLASSIC",
    "MAD_CONSISTENCY",
    "DegenerateScaleError",
    "AllTailError",
    "Dataset",
    "HuberConfig",
    "RobustFit",
    "huber_rho",
    "huber_psi",
    "huber_weight",
    "mad_scale",
    "irls_fit",
    "covariance_of_beta",
    "HuberIRLSRegressor",
]

#: grid-search tuning constant that zeroes the new penalty at the identity
K_C0 = 0.8875916
#: classical 95%-efficiency tuning constant
K_CLASSIC = 1.345

MAD_CONSISTENCY = 0.6745


class DegenerateScaleError(ValueError):
    """MAD of the residuals is zero (constant residuals)."""


class AllTailError(ValueError):
    """Every observation lies in the linear tail; psi' sums to zero."""


@dataclass(frozen=True)
class Dataset:
    """Design matrix (intercept column first, when requested) plus response."""

    X: np.ndarray
    y: np.ndarray
    names: tuple[str, ...] = ()

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        y = np.asarray(self.y, dtype=float)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
            raise ValueError(f"incompatible shapes {X.shape} and {y.shape}")
        if X.shape[0] <= X.shape[1]:
            raise ValueError(f"need n > p, got n={X.shape[0]}, p={X.shape[1]}")
        if not (np.isfinite(X).all() and np.isfinite(y).all()):
            raise ValueError("non-finite entries in dataset")

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]


@dataclass(frozen=True)
class HuberConfig:
    k: float = K_C0
    max_iter: int = 50
    tol: float = 1e-6

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError(f"k must be > 0, got {self.k}")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be > 0")


@dataclass
class RobustFit:
    beta: np.ndarray
    sigma: float
    residuals: np.ndarray
    weights: np.ndarray
    cov_beta: np.ndarray
    iterations: int
    converged: bool
    k: float = K_C0


def huber_rho(u, k: float):
    """Objective: u^2 inside [-k, k], 2k|u| - k^2 in the tails."""
    u = np.asarray(u, dtype=float)
    au = np.abs(u)
    out = np.where(au <= k, u * u, 2.0 * k * au - k * k)
    return float(out) if out.ndim == 0 else out


def huber_psi(u, k: float):
    """Score (d rho / d u): 2u inside, 2k sign(u) in the tails."""
    u = np.asarray(u, dtype=float)
    out = np.where(np.abs(u) <= k, 2.0 * u, 2.0 * k * np.sign(u))
    return float(out) if out.ndim == 0 else out


def huber_weight(u, k: float):
    """IRLS weight psi(u) / (2u): 1 inside, k/|u| in the tails; 1 at u = 0."""
    u = np.asarray(u, dtype=float)
    au = np.abs(u)
    with np.errstate(divide="ignore"):
        out = np.where(au <= k, 1.0, k / np.where(au > 0, au, 1.0))
    return float(out) if out.ndim == 0 else out


def mad_scale(residuals) -> float:
    """Median absolute deviation from the median, scaled for normal consistency."""
    r = np.asarray(residuals, dtype=float)
    if r.size < 2:
        raise ValueError("need at least two residuals")
    mad = float(np.median(np.abs(r - np.median(r))))
    if mad == 0.0:
        raise DegenerateScaleError("MAD of residuals is zero")
    return mad / MAD_CONSISTENCY


def irls_fit(data: Dataset, config: HuberConfig = HuberConfig()) -> RobustFit:
    """Fit by IRLS: OLS start, MAD scale refreshed each iteration."""
    X, y = data.X, data.y
    k = config.k
    beta = solve_least_squares(X, y)
    residuals = y - X @ beta
    converged = False
    iterations = 0
    sigma = None
    for iterations in range(1, config.max_iter + 1):
        try:
            sigma = mad_scale(residuals)
        except DegenerateScaleError:
            if np.max(np.abs(residuals)) < 1e-12:
                # interpolating fit: already at the optimum
                sigma = 1.0
                converged = True
                break
            raise
        w = huber_weight(residuals / sigma, k)
        sw = np.sqrt(w)
        beta_new = solve_least_squares(X * sw[:, None], y * sw)
        delta = np.abs(beta_new - beta)
        beta, residuals = beta_new, y - X @ beta_new
        if np.all(delta < config.tol * np.maximum(1.0, np.abs(beta_new))):
            converged = True
            break
    if sigma is None:
        sigma = mad_scale(residuals)
    weights = huber_weight(residuals / sigma, k)
    fit = RobustFit(
        beta=beta,
        sigma=float(sigma),
        residuals=residuals,
        weights=weights,
        cov_beta=np.empty((0, 0)),
        iterations=iterations,
        converged=converged,
        k=k,
    )
    fit.cov_beta = covariance_of_beta(fit, X)
    return fit


def covariance_of_beta(fit: RobustFit, X: np.ndarray) -> np.ndarray:
    """Sandwich covariance sigma^2 [ sum psi^2/(n-p) / (mean psi')^2 ] (X'X)^-1."""
    X = np.asarray(X, dtype=float)
    n, p = X.shape
    u = fit.residuals / fit.sigma
    psi = huber_psi(u, fit.k)
    psi_prime = 2.0 * (np.abs(u) <= fit.k)
    denom = np.mean(psi_prime)
    if denom == 0.0:
        raise AllTailError("all observations in the tails; psi' sums to zero")
    factor = (np.sum(psi**2) / (n - p)) / denom**2
    return fit.sigma**2 * factor * invert_spd(X.T @ X)


class HuberIRLSRegressor(BaseEstimator, RegressorMixin):
    """Robust linear regression via Huber IRLS with MAD scale.

    Parameters
    ----------
    k : tuning constant of the objective (default: the grid-search value).
    fit_intercept : prepend an all-ones column before fitting.
    max_iter, tol : IRLS stopping rule on the coefficient max-norm change.
    """

    def __init__(self, k: float = K_C0, fit_intercept: bool = True,
                 max_iter: int = 50, tol: float = 1e-6):
        self.k = k
        self.fit_intercept = fit_intercept
        self.max_iter = max_iter
        self.tol = tol

    def fit(self, X, y):
        X, y = check_X_y(X, y, y_numeric=True)
        design = np.column_stack([np.ones(len(y)), X]) if self.fit_intercept else X
        data = Dataset(design, y)
        config = HuberConfig(k=self.k, max_iter=self.max_iter, tol=self.tol)
        fit = irls_fit(data, config)
        if self.fit_intercept:
            self.intercept_ = float(fit.beta[0])
            self.coef_ = fit.beta[1:].copy()
        else:
            self.intercept_ = 0.0
            self.coef_ = fit.beta.copy()
        self.scale_ = fit.sigma
        self.residuals_ = fit.residuals
        self.weights_ = fit.weights
        self.cov_ = fit.cov_beta
        self.n_iter_ = fit.iterations
        self.converged_ = fit.converged
        self.fit_result_ = fit
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X)
        return X @ self.coef_ + self.intercept_
