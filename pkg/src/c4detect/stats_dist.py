"""
Univariate distributions, tail dependence and copula mutual information.

The t-Student CDF is evaluated through the regularized incomplete beta
function; special functions (incomplete beta/gamma and their inverses,
log-gamma, digamma) come from :mod:`scipy.special`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError

__all__ = [
    "TDist",
    "MutualInfoReport",
    "t_cdf",
    "t_quantile",
    "gaussian_cdf",
    "gaussian_quantile",
    "chi2_sample",
    "chi2_quantile",
    "tail_dependence",
    "mi_gaussian",
    "mi_student_extra",
    "mutual_information",
]


def _check_nu(nu):
    nu_arr = np.asarray(nu, dtype=float)
    if np.any(~(nu_arr > 0)):
        raise DomainError(f"degrees of freedom must be positive, got {nu!r}")
    return nu_arr


def _check_prob(u, name="u"):
    u_arr = np.asarray(u, dtype=float)
    if np.any(~((u_arr > 0) & (u_arr < 1))):
        raise DomainError(f"{name} must lie strictly inside (0, 1)")
    return u_arr


def _scalar_or_array(x):
    return x.item() if np.ndim(x) == 0 else x


def t_lower_tail(x, nu):
    """``P(T <= -|x|)`` for a t-Student variable, accurate far in the tail."""
    x = np.abs(np.asarray(x, dtype=float))
    nu = np.asarray(nu, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        x2 = x * x
        far = 0.5 * special.betainc(0.5 * nu, 0.5, nu / (nu + x2))
        # complementary form keeps precision when nu / (nu + x^2) is close to 1
        near = 0.5 - 0.5 * special.betainc(0.5, 0.5 * nu, x2 / (nu + x2))
        out = np.where(x2 < nu, near, far)
    return np.where(np.isinf(x), 0.0, out)


def t_cdf(x, nu):
    """
    CDF of the standard t-Student distribution with ``nu`` degrees of freedom.

    Accepts scalars or arrays; infinite ``x`` maps to 0 or 1.
    """
    _check_nu(nu)
    x = np.asarray(x, dtype=float)
    tail = t_lower_tail(x, nu)
    out = np.where(x < 0, tail, 1.0 - tail)
    return _scalar_or_array(out)


def t_quantile(u, nu):
    """Inverse of :func:`t_cdf`; ``u`` must lie in the open unit interval."""
    _check_nu(nu)
    u = _check_prob(u)
    # solve on the lower half, where u is represented without cancellation
    lower = np.minimum(u, 1.0 - u)
    x = -np.abs(_t_lower_quantile(lower, nu))
    out = np.where(u > 0.5, -x, x) + 0.0
    return _scalar_or_array(out)


def _t_lower_quantile(p, nu):
    """Negative x with ``P(T <= x) = p`` for ``p <= 1/2``."""
    nu = np.broadcast_to(np.asarray(nu, dtype=float), np.shape(p))
    x = special.stdtrit(nu, p)
    # one Newton step against our own CDF removes residual inversion error
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        pdf = np.exp(
            special.gammaln(0.5 * (nu + 1))
            - special.gammaln(0.5 * nu)
            - 0.5 * np.log(nu * np.pi)
            - 0.5 * (nu + 1) * np.log1p(x * x / nu)
        )
        step = (t_lower_tail(x, nu) - p) / pdf
    x = np.where(np.isfinite(step) & (pdf > 0), x - step, x)
    return np.minimum(x, 0.0)


def gaussian_cdf(x):
    """Standard normal CDF."""
    return _scalar_or_array(special.ndtr(np.asarray(x, dtype=float)))


def gaussian_quantile(u):
    """Standard normal quantile; ``u`` must lie in the open unit interval."""
    u = _check_prob(u)
    return _scalar_or_array(special.ndtri(u))


def gaussian_lower_tail(x):
    return special.ndtr(-np.abs(np.asarray(x, dtype=float)))


def chi2_sample(nu, rng: np.random.Generator, size=None):
    """Draw from the chi-squared distribution with ``nu`` degrees of freedom."""
    if nu < 1:
        raise DomainError(f"chi-squared degrees of freedom must be >= 1, got {nu}")
    return rng.chisquare(nu, size=size)


def chi2_quantile(p, n):
    """
    Inverse CDF of the chi-squared distribution with ``n`` degrees of freedom.

    Grows without bound as ``p`` approaches 1 (returns ``inf`` once ``p``
    rounds to 1 in the incomplete-gamma inversion).
    """
    if n < 1:
        raise DomainError(f"chi-squared degrees of freedom must be >= 1, got {n}")
    p = _check_prob(p, "p")
    return _scalar_or_array(2.0 * special.gammaincinv(0.5 * n, p))


def chi2_cdf(x, n):
    return _scalar_or_array(special.gammainc(0.5 * n, 0.5 * np.asarray(x, dtype=float)))


def tail_dependence(sigma, nu_c):
    """
    Lower (= upper) tail dependence of a bivariate t-Student copula.

    ``nu_c = inf`` is the Gaussian copula, whose tail dependence is zero
    unless ``sigma == 1``.
    """
    sigma = float(sigma)
    if not -1.0 < sigma <= 1.0:
        raise DomainError(f"correlation must lie in (-1, 1], got {sigma}")
    if sigma == 1.0:
        return 1.0
    if np.isinf(nu_c):
        return 0.0
    _check_nu(nu_c)
    arg = -np.sqrt(nu_c + 1.0) * np.sqrt((1.0 - sigma) / (1.0 + sigma))
    return float(2.0 * t_cdf(arg, nu_c + 1.0))


@dataclass(frozen=True)
class TDist:
    """Standard t-Student law with ``nu`` degrees of freedom."""

    nu: float

    def __post_init__(self):
        _check_nu(self.nu)

    @property
    def variance(self) -> float:
        if self.nu <= 2:
            raise DomainError(f"variance undefined for nu={self.nu} <= 2")
        return self.nu / (self.nu - 2.0)

    @property
    def fourth_cumulant(self) -> float:
        if self.nu <= 4:
            raise DomainError(f"fourth cumulant undefined for nu={self.nu} <= 4")
        return 6.0 / (self.nu - 4.0) * self.variance**2

    def cdf(self, x):
        return t_cdf(x, self.nu)

    def ppf(self, u):
        return t_quantile(u, self.nu)


@dataclass(frozen=True)
class MutualInfoReport:
    """Mutual information of a t-Student copula in nats."""

    i_sigma: float
    i_nu_n: float

    @property
    def total(self) -> float:
        return self.i_sigma + self.i_nu_n

    def to_dict(self) -> dict:
        return {"i_sigma": self.i_sigma, "i_nu_n": self.i_nu_n, "total": self.total}


def mi_gaussian(Sigma) -> float:
    """``-log(det Sigma) / 2`` for a unit-diagonal correlation matrix."""
    Sigma = np.asarray(Sigma, dtype=float)
    if Sigma.ndim != 2 or Sigma.shape[0] != Sigma.shape[1]:
        raise DomainError("correlation matrix must be square")
    if not np.allclose(Sigma, Sigma.T, rtol=0, atol=1e-12):
        raise DomainError("correlation matrix must be symmetric")
    if not np.allclose(np.diag(Sigma), 1.0, rtol=0, atol=1e-12):
        raise DomainError("correlation matrix must have unit diagonal")
    try:
        L = np.linalg.cholesky(Sigma)
    except np.linalg.LinAlgError:
        raise DomainError("correlation matrix is not positive definite") from None
    return float(-np.sum(np.log(np.diag(L)))) + 0.0


def _log_beta(a, b):
    return special.gammaln(a) + special.gammaln(b) - special.gammaln(a + b)


def mi_student_extra(nu_c, n) -> float:
    """
    Extra mutual information of an ``n``-variate t-Student copula with
    ``nu_c`` degrees of freedom over the Gaussian copula with the same
    correlation matrix.

    Evaluated in the log domain; vanishes for ``n = 1`` and as ``nu_c``
    grows without bound.
    """
    if not nu_c >= 1:
        raise DomainError(f"nu_c must be >= 1, got {nu_c}")
    if n < 1:
        raise DomainError(f"marginal count must be >= 1, got {n}")
    nu = float(nu_c)
    half = 0.5 * nu
    log_term = (
        n * _log_beta(half, 0.5)
        + special.gammaln(0.5 * n)
        - 0.5 * n * np.log(np.pi)
        - _log_beta(half, 0.5 * n)
    )
    return float(
        log_term
        - 0.5 * nu * (n - 1) * special.digamma(half)
        + 0.5 * n * (nu + 1) * special.digamma(0.5 * (nu + 1))
        - 0.5 * (nu + n) * special.digamma(0.5 * (nu + n))
    )


def mutual_information(Sigma, nu_c) -> MutualInfoReport:
    Sigma = np.asarray(Sigma, dtype=float)
    return MutualInfoReport(mi_gaussian(Sigma), mi_student_extra(nu_c, Sigma.shape[0]))
