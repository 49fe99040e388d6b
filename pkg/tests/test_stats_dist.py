import math

import mpmath
import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import special

from c4detect.errors import DomainError
from c4detect.stats_dist import (
    MutualInfoReport,
    TDist,
    chi2_cdf,
    chi2_quantile,
    chi2_sample,
    gaussian_cdf,
    gaussian_quantile,
    mi_gaussian,
    mi_student_extra,
    mutual_information,
    t_cdf,
    t_quantile,
    tail_dependence,
)


def phi_erf(x):
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def t2_cdf(x):
    return 0.5 * (1.0 + x / math.sqrt(2.0 + x * x))


# -- t-Student CDF / quantile -----------------------------------------------

@pytest.mark.parametrize("nu", [0.5, 1, 2, 6, 30, 1e6])
def test_t_cdf_at_zero(nu):
    assert t_cdf(0.0, nu) == 0.5


def test_t_cdf_nu2_closed_form():
    assert t_cdf(1.0, 2) == pytest.approx(0.5 * (1 + 1 / math.sqrt(3)), abs=1e-14)
    xs = np.linspace(-50, 50, 401)
    assert_allclose(t_cdf(xs, 2), [t2_cdf(x) for x in xs], atol=1e-13)


def test_t_cdf_gaussian_limit():
    assert abs(t_cdf(1.5, 1e6) - phi_erf(1.5)) < 1e-4


def test_t_cdf_against_high_precision():
    mpmath.mp.dps = 40
    worst = 0.0
    for nu in [0.7, 1, 3, 6, 25, 1e3, 1e6]:
        for x in [-40.0, -3.0, -0.4, 0.01, 1.5, 2.49, 7.0]:
            z = mpmath.mpf(nu) / (nu + mpmath.mpf(x) ** 2)
            tail = mpmath.betainc(nu / 2, 0.5, 0, z, regularized=True) / 2
            ref = tail if x < 0 else 1 - tail
            worst = max(worst, abs(t_cdf(x, nu) - float(ref)))
    assert worst < 1e-12


def test_t_cdf_symmetry_and_limits():
    xs = np.linspace(-20, 20, 81)
    for nu in [1, 4.5, 6]:
        assert_allclose(t_cdf(-xs, nu), 1 - t_cdf(xs, nu), atol=1e-15)
    assert t_cdf(-np.inf, 3) == 0.0
    assert t_cdf(np.inf, 3) == 1.0


@pytest.mark.parametrize("nu", [0.8, 1, 3, 6, 40])
def test_t_cdf_monotone(nu):
    values = t_cdf(np.linspace(-60, 60, 20001), nu)
    assert np.all(np.diff(values) >= 0)
    assert values.min() >= 0 and values.max() <= 1


def test_t_quantile_basics():
    assert t_quantile(0.5, 6) == 0.0
    for x in [-3, -1, 0, 2]:
        assert abs(t_quantile(t_cdf(x, 6), 6) - x) < 1e-9
    assert t_quantile(0.788675, 2) == pytest.approx(1.0, abs=1e-5)


@pytest.mark.parametrize("nu", [1, 2.5, 6, 30, 1e6])
def test_t_quantile_round_trip(nu):
    u = np.linspace(1e-8, 1 - 1e-8, 5001)
    x = t_quantile(u, nu)
    assert np.max(np.abs(t_cdf(x, nu) - u)) < 1e-10
    assert np.all(np.diff(x) > 0)


@pytest.mark.parametrize("u", [0.0, 1.0, -0.1, 1.5, np.nan])
def test_t_quantile_domain(u):
    with pytest.raises(DomainError):
        t_quantile(u, 3)


def test_nonpositive_nu():
    with pytest.raises(DomainError):
        t_cdf(1.0, 0)


def test_tdist_moments():
    assert TDist(6).fourth_cumulant == pytest.approx(6.75)
    assert TDist(10).fourth_cumulant == pytest.approx(1.5625)
    assert TDist(6).variance == pytest.approx(1.5)
    with pytest.raises(DomainError):
        TDist(2).variance
    with pytest.raises(DomainError):
        TDist(4).fourth_cumulant


# -- Gaussian ---------------------------------------------------------------

def test_gaussian():
    assert gaussian_cdf(0.0) == 0.5
    assert gaussian_cdf(1.959964) == pytest.approx(0.975, abs=1e-7)
    for x in [-2, 0.3, 4]:
        assert abs(gaussian_quantile(gaussian_cdf(x)) - x) < 1e-9
    xs = np.linspace(-8, 8, 33)
    assert_allclose(gaussian_cdf(xs), [phi_erf(x) for x in xs], rtol=1e-14, atol=1e-16)
    with pytest.raises(DomainError):
        gaussian_quantile(1.0)


# -- chi-squared ------------------------------------------------------------

def test_chi2_sample_moments():
    draws = chi2_sample(6, np.random.default_rng(11), size=100_000)
    assert np.all(draws > 0)
    assert abs(draws.mean() - 6) < 0.15
    assert abs(draws.var() - 12) < 1


def test_chi2_sample_domain():
    with pytest.raises(DomainError):
        chi2_sample(0, np.random.default_rng(0))


def test_chi2_quantile():
    assert chi2_quantile(0.5, 2) == pytest.approx(2 * math.log(2), abs=1e-12)
    for n in [1, 3, 30]:
        for x in [0.1, 2.0, 17.0]:
            assert abs(chi2_quantile(chi2_cdf(x, n), n) - x) < 1e-8
    assert chi2_quantile(1 - 1e-15, 5) > 60
    with pytest.raises(DomainError):
        chi2_quantile(1.0, 3)
    with pytest.raises(DomainError):
        chi2_quantile(0.5, 0)


# -- tail dependence --------------------------------------------------------

def test_tail_dependence_values():
    for nu in [1, 3, 6, 50]:
        assert tail_dependence(1.0, nu) == 1.0
    assert tail_dependence(0.5, np.inf) == 0.0
    assert tail_dependence(0.0, 1) == pytest.approx(2 * t2_cdf(-math.sqrt(2)), abs=1e-14)
    assert tail_dependence(0.0, 1) == pytest.approx(0.292893, abs=1e-6)
    with pytest.raises(DomainError):
        tail_dependence(-1.0, 4)


def test_tail_dependence_monotone():
    sigmas = [-0.5, 0.0, 0.5, 0.9]
    grid = np.array([[tail_dependence(s, nu) for s in sigmas] for nu in range(1, 21)])
    assert np.all(np.diff(grid, axis=1) > 0)
    assert np.all(np.diff(grid, axis=0) < 0)


# -- mutual information -----------------------------------------------------

def test_mi_gaussian():
    assert mi_gaussian(np.eye(4)) == 0.0
    assert mi_gaussian([[1, 0.5], [0.5, 1]]) == pytest.approx(-0.5 * math.log(0.75), abs=1e-14)
    S = np.array([[1, 0.3, -0.2], [0.3, 1, 0.4], [-0.2, 0.4, 1]])
    p = [2, 0, 1]
    assert mi_gaussian(S[np.ix_(p, p)]) == pytest.approx(mi_gaussian(S), abs=1e-14)
    with pytest.raises(DomainError):
        mi_gaussian([[1, 1], [1, 1]])
    with pytest.raises(DomainError):
        mi_gaussian([[2, 0], [0, 1]])


@pytest.mark.parametrize("nu", [1, 3, 6, 100])
def test_mi_single_marginal_is_zero(nu):
    assert abs(mi_student_extra(nu, 1)) < 1e-12


def test_mi_against_arbitrary_precision():
    mpmath.mp.dps = 50
    nu, n = mpmath.mpf(6), mpmath.mpf(30)
    ref = (
        n * mpmath.log(mpmath.beta(nu / 2, 0.5))
        + mpmath.loggamma(n / 2)
        - n / 2 * mpmath.log(mpmath.pi)
        - mpmath.log(mpmath.beta(nu / 2, n / 2))
        - nu * (n - 1) / 2 * mpmath.digamma(nu / 2)
        + n * (nu + 1) / 2 * mpmath.digamma((nu + 1) / 2)
        - (nu + n) / 2 * mpmath.digamma((nu + n) / 2)
    )
    # frozen: 1.604280290840918307247757
    assert float(ref) == pytest.approx(1.604280290840918, rel=1e-15)
    assert mi_student_extra(6, 30) == pytest.approx(float(ref), rel=1e-8)


def test_mi_gaussian_limit():
    assert mi_student_extra(1e6, 30) <= 1e-3


def test_mi_positive_and_decreasing():
    for n in range(2, 51, 6):
        vals = np.array([mi_student_extra(nu, n) for nu in range(1, 101)])
        assert np.all(vals > 0)
        assert np.all(np.diff(vals) < 0)


def test_mutual_information_report():
    S = np.array([[1, 0.5], [0.5, 1]])
    rep = mutual_information(S, 6)
    assert isinstance(rep, MutualInfoReport)
    assert rep.total == rep.i_sigma + rep.i_nu_n
    assert set(rep.to_dict()) == {"i_sigma", "i_nu_n", "total"}


def test_digamma_at_one():
    assert special.digamma(1.0) == pytest.approx(-0.5772156649015329, abs=1e-10)
