"""Model-selection criteria for robust regression.

Each criterion scores a fitted model as lack_of_fit + penalty. Besides the
classical AIC baseline there are four robust criteria from the literature
(Hampel- and Ronchetti-style AIC variants, and two complexity-penalized forms)
plus the new criterion whose penalty is the expected-Huber-objective
complexity from :mod:`robustsel.complexity`.

The expectation matrices F (expected Hessian of the objective), R (expected
outer score product) and the combined Hampel matrix A are block diagonal in
(coefficients, scale); their entries are closed forms in incomplete gamma
functions evaluated at k^2/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .complexity import c0_rho_h, c1
from .linalg import invert_spd, trace
from .mest import Dataset, RobustFit, huber_rho
from .specfun import lower_incomplete_gamma, upper_incomplete_gamma

__all__ = [
    "CRITERION_NAMES",
    "CriterionScore",
    "CriterionContext",
    "aic",
    "fisher_F_matrix",
    "fisher_R_matrix",
    "hampel_A_matrix",
    "aic_h",
    "aic_r",
    "ricomp_ifim",
    "ricomp_m",
    "ricomp_c0_rho_h",
    "score",
    "score_all",
]

_SQRT_PI = math.sqrt(math.pi)
_SQRT_2 = math.sqrt(2.0)

CRITERION_NAMES = ("AIC", "AIC_H", "AIC_R", "RICOMP_IFIM", "RICOMP_M", "RICOMP_C0RH")


@dataclass(frozen=True)
class CriterionScore:
    criterion: str
    lack_of_fit: float
    penalty: float

    @property
    def value(self) -> float:
        return self.lack_of_fit + self.penalty


@dataclass(frozen=True)
class CriterionContext:
    fit: RobustFit
    data: Dataset
    k: float

    @property
    def s(self) -> int:
        # joint dimension: coefficients plus scale
        return self.data.p + 1


@lru_cache(maxsize=64)
def _gammas(k: float) -> dict[str, float]:
    """Incomplete gamma values at k^2/2 shared by the F, R and A matrices."""
    t = 0.5 * k * k
    return {
        "g12": lower_incomplete_gamma(0.5, t),
        "g32": lower_incomplete_gamma(1.5, t),
        "g52": lower_incomplete_gamma(2.5, t),
        "G12": upper_incomplete_gamma(0.5, t),
        "G32": upper_incomplete_gamma(1.5, t),
        "G1": upper_incomplete_gamma(1.0, t),  # = exp(-t)
    }


def _rho_sum(ctx: CriterionContext) -> float:
    return float(np.sum(huber_rho(ctx.fit.residuals / ctx.fit.sigma, ctx.k)))


def aic(ctx: CriterionContext) -> CriterionScore:
    """Classical Gaussian AIC at the robust parameter estimates."""
    n, p = ctx.data.n, ctx.data.p
    sigma2 = ctx.fit.sigma**2
    lack = n * math.log(2.0 * math.pi) + n * math.log(sigma2) + float(
        np.sum(ctx.fit.residuals**2) / sigma2
    )
    return CriterionScore("AIC", lack, 2.0 * (p + 1))


def fisher_F_matrix(ctx: CriterionContext) -> np.ndarray:
    """Expected Hessian of the objective; block diagonal in (beta, sigma)."""
    g = _gammas(ctx.k)
    X = ctx.data.X
    sigma2 = ctx.fit.sigma**2
    p = ctx.data.p
    F = np.zeros((p + 1, p + 1))
    F[:p, :p] = (X.T @ X) * (g["g12"] / (sigma2 * _SQRT_PI))
    F[p, p] = (6.0 * g["g32"] + 2.0 * _SQRT_2 * ctx.k * g["G1"]) / (sigma2 * _SQRT_PI)
    return F


def fisher_R_matrix(ctx: CriterionContext) -> np.ndarray:
    """Expected outer product of the score; block diagonal in (beta, sigma)."""
    g = _gammas(ctx.k)
    X = ctx.data.X
    sigma2 = ctx.fit.sigma**2
    k2 = ctx.k**2
    p = ctx.data.p
    R = np.zeros((p + 1, p + 1))
    R[:p, :p] = (X.T @ X) * ((2.0 * g["g32"] + k2 * g["G12"]) / (sigma2 * _SQRT_PI))
    R[p, p] = 2.0 * (2.0 * g["g52"] + k2 * g["G32"]) / (sigma2 * _SQRT_PI)
    return R


def hampel_A_matrix(ctx: CriterionContext) -> np.ndarray:
    """Combined penalty matrix A = F^-1 R F^-1-style form, entries as derived."""
    g = _gammas(ctx.k)
    X = ctx.data.X
    sigma2 = ctx.fit.sigma**2
    k = ctx.k
    k2 = k * k
    p = ctx.data.p
    num_b = 2.0 * g["g32"] + k2 * g["G12"]
    A = np.zeros((p + 1, p + 1))
    A[:p, :p] = np.eye(p) * (num_b / g["g12"]) + (
        num_b / g["g12"] ** 2
    ) * invert_spd(X.T @ X) * sigma2 * _SQRT_PI
    denom_s = 3.0 * g["g32"] + _SQRT_2 * k * g["G1"]
    A[p, p] = ((2.0 * g["g52"] + k2 * g["G32"]) / denom_s) * (
        1.0 + sigma2 * _SQRT_PI / (2.0 * denom_s)
    )
    return A


def aic_h(ctx: CriterionContext, scale_by_p: bool = False) -> CriterionScore:
    """Robust AIC with penalty trace(A)."""
    penalty = trace(hampel_A_matrix(ctx))
    if scale_by_p:
        penalty *= ctx.data.p
    return CriterionScore("AIC_H", 2.0 * _rho_sum(ctx), penalty)


def aic_r(ctx: CriterionContext, scale_by_p: bool = False) -> CriterionScore:
    """Robust AIC with penalty trace(F^-1 R)."""
    F = fisher_F_matrix(ctx)
    R = fisher_R_matrix(ctx)
    penalty = trace(invert_spd(F) @ R)
    if scale_by_p:
        penalty *= ctx.data.p
    return CriterionScore("AIC_R", 2.0 * _rho_sum(ctx), penalty)


def _ifim(ctx: CriterionContext) -> np.ndarray:
    """Inverse Fisher information: block diag of Cov(beta) and 2 sigma^2."""
    p = ctx.data.p
    M = np.zeros((p + 1, p + 1))
    M[:p, :p] = ctx.fit.cov_beta
    M[p, p] = 2.0 * ctx.fit.sigma**2
    return M


def ricomp_ifim(ctx: CriterionContext) -> CriterionScore:
    """Least-favorable lack of fit with 2 C1 of the inverse information."""
    n = ctx.data.n
    lack = (
        n * math.log(2.0 * math.pi)
        + 2.0 * n * math.log(ctx.fit.sigma)
        + 2.0 * _rho_sum(ctx)
    )
    return CriterionScore("RICOMP_IFIM", lack, 2.0 * c1(_ifim(ctx)))


def ricomp_m(ctx: CriterionContext) -> CriterionScore:
    """Objective lack of fit with 2 C1 of the coefficient covariance."""
    return CriterionScore("RICOMP_M", 2.0 * _rho_sum(ctx), 2.0 * c1(ctx.fit.cov_beta))


def ricomp_c0_rho_h(ctx: CriterionContext, regularized: bool = False) -> CriterionScore:
    """The new criterion: least-favorable lack of fit plus 2 C0^rho penalty."""
    n = ctx.data.n
    lack = (
        n * math.log(2.0 * math.pi)
        + n * math.log(ctx.fit.sigma**2)
        + 2.0 * _rho_sum(ctx)
    )
    penalty = 2.0 * c0_rho_h(ctx.fit.cov_beta, ctx.k, regularized=regularized)
    return CriterionScore("RICOMP_C0RH", lack, penalty)


_REGISTRY = {
    "AIC": aic,
    "AIC_H": aic_h,
    "AIC_R": aic_r,
    "RICOMP_IFIM": ricomp_ifim,
    "RICOMP_M": ricomp_m,
    "RICOMP_C0RH": ricomp_c0_rho_h,
}


def score(name: str, ctx: CriterionContext) -> CriterionScore:
    try:
        fn = _REGISTRY[name]
    except KeyError:
        raise ValueError(f"unknown criterion {name!r}; choose from {CRITERION_NAMES}")
    return fn(ctx)


def score_all(ctx: CriterionContext, names=CRITERION_NAMES) -> dict[str, CriterionScore]:
    return {name: score(name, ctx) for name in names}
