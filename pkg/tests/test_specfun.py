import math

import numpy as np
import pytest

from robustsel.specfun import (
    DomainError,
    erf,
    lower_incomplete_gamma,
    norm_cdf,
    norm_pdf,
    regularized_lower_gamma,
    regularized_upper_gamma,
    upper_incomplete_gamma,
)

# frozen quadrature oracles (mpmath, 30 digits)
GAMMA_LOW_15_0904513 = 0.3429939702569272
GAMMA_UP_25_0393909 = 1.2998341282403185
ERF_1 = 0.8427007929497149


def test_lower_complete_limit():
    assert lower_incomplete_gamma(1.5, float("inf")) == pytest.approx(
        math.sqrt(math.pi) / 2, rel=1e-12
    )


def test_lower_at_zero():
    assert lower_incomplete_gamma(0.5, 0.0) == 0.0


def test_lower_oracle():
    assert lower_incomplete_gamma(1.5, 0.904513) == pytest.approx(
        GAMMA_LOW_15_0904513, rel=1e-12
    )


def test_upper_at_zero_is_complete_gamma():
    assert upper_incomplete_gamma(0.5, 0.0) == pytest.approx(
        math.sqrt(math.pi), rel=1e-12
    )


@pytest.mark.parametrize("c", [0.0, 0.3, 1.0, 5.0, 17.2])
def test_upper_exponential_tail(c):
    # a = 1 collapses to e^-c
    assert upper_incomplete_gamma(1.0, c) == pytest.approx(math.exp(-c), rel=1e-12)


def test_upper_oracle():
    assert upper_incomplete_gamma(2.5, 0.393909) == pytest.approx(
        GAMMA_UP_25_0393909, rel=1e-12
    )


def test_erf_basics():
    assert erf(0.0) == 0.0
    assert erf(float("inf")) == 1.0
    assert erf(1.0) == pytest.approx(ERF_1, rel=1e-12)
    for x in (0.1, 0.7, 2.3):
        assert erf(-x) == -erf(x)
        assert -1.0 < erf(x) < 1.0


@pytest.mark.parametrize("a", [0.5, 1.0, 1.5, 2.0, 2.5])
def test_additivity_grid(a):
    for x in np.arange(0.0, 20.0 + 1e-9, 0.1):
        lo = lower_incomplete_gamma(a, float(x))
        hi = upper_incomplete_gamma(a, float(x))
        assert lo + hi == pytest.approx(math.gamma(a), rel=1e-10)
        assert 0.0 <= lo <= math.gamma(a) * (1 + 1e-12)


def test_erf_identity():
    # gamma(1/2, x) = sqrt(pi) erf(sqrt(x))
    for x in np.arange(0.0, 20.0 + 1e-9, 0.25):
        lhs = lower_incomplete_gamma(0.5, float(x)) if x > 0 else 0.0
        rhs = math.sqrt(math.pi) * erf(math.sqrt(x))
        assert lhs == pytest.approx(rhs, abs=1e-10)


@pytest.mark.parametrize("a", [0.5, 1.0, 1.5, 2.0])
def test_recurrence(a):
    # gamma(a+1, x) = a gamma(a, x) - x^a e^-x
    for x in np.arange(0.1, 20.0, 0.37):
        lhs = lower_incomplete_gamma(a + 1.0, float(x))
        rhs = a * lower_incomplete_gamma(a, float(x)) - x**a * math.exp(-x)
        assert lhs == pytest.approx(rhs, abs=1e-10)


def test_lower_monotone_in_x():
    vals = [lower_incomplete_gamma(1.5, float(x)) for x in np.linspace(0, 15, 400)]
    assert all(b >= a - 1e-14 for a, b in zip(vals, vals[1:]))


def test_regularized_forms():
    for a, x in [(0.5, 0.3), (1.5, 2.0), (2.5, 8.0)]:
        p = regularized_lower_gamma(a, x)
        q = regularized_upper_gamma(a, x)
        assert p + q == pytest.approx(1.0, rel=1e-12)
        assert 0.0 <= p <= 1.0


@pytest.mark.parametrize("a,x", [(0.0, 1.0), (-1.0, 1.0), (1.0, -0.1)])
def test_domain_errors(a, x):
    with pytest.raises(DomainError):
        lower_incomplete_gamma(a, x)
    with pytest.raises(DomainError):
        upper_incomplete_gamma(a, x)


def test_erf_nan_rejected():
    with pytest.raises(DomainError):
        erf(float("nan"))


def test_normal_helpers():
    assert norm_pdf(0.0) == pytest.approx(1.0 / math.sqrt(2 * math.pi), rel=1e-12)
    assert norm_cdf(0.0) == pytest.approx(0.5, rel=1e-12)
    assert norm_cdf(10.0) == pytest.approx(1.0, abs=1e-12)
