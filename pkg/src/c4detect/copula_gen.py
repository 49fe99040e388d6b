"""
Artificial crisis data.

Ordinary rows follow a Gaussian copula; crisis rows get a t-Student copula on
a random half of the marginals.  Every marginal is t-Student with ``nu_u``
degrees of freedom in both cases, so only the cross-dependence of extremes
separates the two populations.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DomainError, NumericError
from .stats_dist import (
    chi2_sample,
    gaussian_lower_tail,
    t_lower_tail,
    t_quantile,
)

__all__ = [
    "CopulaSpec",
    "ExperimentDataset",
    "random_correlation",
    "check_correlation",
    "sample_gaussian",
    "gcop2tstudent",
    "make_experiment",
    "write_dataset",
    "read_dataset",
    "read_data_csv",
    "write_data_csv",
    "read_labels_csv",
]


def _rng(rng):
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def random_correlation(n: int, rng=None) -> np.ndarray:
    """
    Random full-rank correlation matrix.

    A Gram matrix ``A A^T + 0.1 I`` of an ``n x n`` standard normal ``A`` is
    rescaled to unit diagonal.
    """
    if n < 1:
        raise DomainError(f"dimension must be >= 1, got {n}")
    rng = _rng(rng)
    A = rng.standard_normal((n, n))
    B = A @ A.T + 0.1 * np.eye(n)
    s = np.sqrt(np.diag(B))
    S = B / np.outer(s, s)
    S = 0.5 * (S + S.T)
    np.fill_diagonal(S, 1.0)
    return S


def check_correlation(Sigma) -> np.ndarray:
    """Validate a correlation matrix and return it as a float array."""
    Sigma = np.asarray(Sigma, dtype=float)
    if Sigma.ndim != 2 or Sigma.shape[0] != Sigma.shape[1]:
        raise DomainError(f"correlation matrix must be square, got {Sigma.shape}")
    if np.any(np.diag(Sigma) != 1.0):
        raise DomainError("correlation matrix must have unit diagonal")
    if np.max(np.abs(Sigma - Sigma.T)) > 1e-12:
        raise DomainError("correlation matrix must be symmetric")
    if np.any(np.abs(Sigma) > 1.0):
        raise DomainError("correlations must lie in [-1, 1]")
    if np.linalg.eigvalsh(Sigma)[0] < -1e-10:
        raise DomainError("correlation matrix is not positive semi-definite")
    return Sigma


def sample_gaussian(Sigma, t: int, rng=None) -> np.ndarray:
    """``t`` iid rows from ``N(0, Sigma)`` via a Cholesky factor."""
    Sigma = check_correlation(Sigma)
    if t < 1:
        raise DomainError(f"sample count must be >= 1, got {t}")
    rng = _rng(rng)
    try:
        L = np.linalg.cholesky(Sigma)
    except np.linalg.LinAlgError:
        try:
            L = np.linalg.cholesky(Sigma + 1e-10 * np.eye(len(Sigma)))
        except np.linalg.LinAlgError:
            raise NumericError("Cholesky factorization failed after jitter") from None
    return rng.standard_normal((t, len(Sigma))) @ L.T


@dataclass(frozen=True)
class CopulaSpec:
    """t-Student copula injected into the marginals listed in ``subset``."""

    nu_c: int
    nu_u: float = 6.0
    subset: tuple = ()

    def __post_init__(self):
        if int(self.nu_c) != self.nu_c or self.nu_c < 3:
            raise DomainError(f"nu_c must be an integer >= 3, got {self.nu_c}")
        if not self.nu_u > 4:
            raise DomainError(f"nu_u must exceed 4, got {self.nu_u}")
        subset = tuple(sorted(int(i) for i in self.subset))
        if len(set(subset)) != len(subset) or (subset and subset[0] < 0):
            raise DomainError(f"invalid subset {self.subset}")
        object.__setattr__(self, "nu_c", int(self.nu_c))
        object.__setattr__(self, "subset", subset)


def _to_t_marginal(lower_tail, x, nu_u):
    # map through the lower tail on each side so extremes keep full precision
    q = t_quantile(np.clip(lower_tail, 1e-300, 0.5), nu_u)
    return np.where(x < 0, q, -q)


def gcop2tstudent(X, spec: CopulaSpec, rng=None) -> np.ndarray:
    """
    Turn ``N(0, Sigma)`` rows into t-Student-marginal rows with a t-Student
    copula on ``spec.subset``.

    Each row's subset entries are scaled by one shared ``sqrt(nu_c / v0)``,
    ``v0 ~ chi2(nu_c)``, which makes them jointly t-Student with ``nu_c``
    degrees of freedom.  Every column is then mapped to a t-Student marginal
    with ``nu_u`` degrees of freedom by the probability integral transform.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise DomainError("expected a 2-dimensional sample matrix")
    t, n = X.shape
    subset = np.asarray(spec.subset, dtype=np.intp)
    if subset.size and subset[-1] >= n:
        raise DomainError(f"subset index {subset[-1]} out of range for {n} marginals")
    rng = _rng(rng)

    mask = np.zeros(n, dtype=bool)
    mask[subset] = True
    Y = X.copy()
    tail = np.empty_like(X)
    if subset.size:
        v0 = chi2_sample(spec.nu_c, rng, size=t)
        Y[:, mask] *= np.sqrt(spec.nu_c / v0)[:, None]
        tail[:, mask] = t_lower_tail(Y[:, mask], spec.nu_c)
    tail[:, ~mask] = gaussian_lower_tail(Y[:, ~mask])
    return _to_t_marginal(tail, Y, spec.nu_u)


@dataclass
class ExperimentDataset:
    """Generated rows with outlier labels and everything needed to regenerate them."""

    data: np.ndarray
    labels: np.ndarray
    sigma: np.ndarray
    spec: CopulaSpec
    seed: int | None
    tau: int
    extra: dict = field(default_factory=dict)

    @property
    def t(self) -> int:
        return self.data.shape[0]

    @property
    def n(self) -> int:
        return self.data.shape[1]

    def meta(self) -> dict:
        return {
            "seed": self.seed,
            "t": self.t,
            "tau": self.tau,
            "n": self.n,
            "nu_c": self.spec.nu_c,
            "nu_u": self.spec.nu_u,
            "sigma": self.sigma.tolist(),
            "subset": list(self.spec.subset),
        }


def make_experiment(
    t: int = 1000,
    tau: int = 100,
    n: int = 30,
    nu_c: int = 6,
    nu_u: float = 6.0,
    seed=None,
) -> ExperimentDataset:
    """
    Labelled dataset with ``tau`` crisis rows among ``t``.

    One random correlation matrix drives both populations.  Crisis rows carry
    a t-Student copula on a random ``n // 2`` marginals and sit at random
    positions, recorded in ``labels``.
    """
    if n < 2:
        raise DomainError(f"need n >= 2 marginals, got {n}")
    if not 0 < tau < t / 2:
        raise DomainError(f"tau must satisfy 0 < tau < t/2, got tau={tau}, t={t}")
    rng = np.random.default_rng(seed)
    sigma = random_correlation(n, rng)
    X = sample_gaussian(sigma, t, rng)
    positions = np.sort(rng.choice(t, size=tau, replace=False))
    subset = tuple(np.sort(rng.choice(n, size=n // 2, replace=False)).tolist())

    labels = np.zeros(t, dtype=np.int8)
    labels[positions] = 1
    out = labels.astype(bool)
    data = np.empty_like(X)
    data[~out] = gcop2tstudent(X[~out], CopulaSpec(nu_c, nu_u, ()), rng)
    spec = CopulaSpec(nu_c, nu_u, subset)
    data[out] = gcop2tstudent(X[out], spec, rng)
    return ExperimentDataset(data, labels, sigma, spec, seed, int(tau))


def write_data_csv(path, data) -> None:
    data = np.asarray(data, dtype=float)
    header = ",".join(f"m{i + 1}" for i in range(data.shape[1]))
    np.savetxt(path, data, delimiter=",", header=header, comments="", fmt="%.17g")


def read_data_csv(path) -> np.ndarray:
    """Read a data CSV with a header row; returns a t x n float matrix."""
    try:
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2, encoding="utf-8")
    except ValueError as exc:
        raise DomainError(f"{path}: {exc}") from None
    return data


def read_labels_csv(path) -> np.ndarray:
    labels = np.loadtxt(path, delimiter=",", ndmin=1, encoding="utf-8")
    if not np.all((labels == 0) | (labels == 1)):
        raise DomainError(f"{path}: labels must be 0 or 1")
    return labels.astype(np.int8)


def write_dataset(ds: ExperimentDataset, prefix) -> tuple[Path, Path, Path]:
    """Write ``<prefix>_data.csv``, ``<prefix>_labels.csv`` and ``<prefix>_meta.json``."""
    prefix = Path(prefix)
    paths = tuple(
        prefix.with_name(prefix.name + suffix)
        for suffix in ("_data.csv", "_labels.csv", "_meta.json")
    )
    write_data_csv(paths[0], ds.data)
    np.savetxt(paths[1], ds.labels, fmt="%d")
    paths[2].write_text(json.dumps(ds.meta(), indent=1))
    return paths


def read_dataset(prefix) -> ExperimentDataset:
    prefix = Path(prefix)
    data = read_data_csv(prefix.with_name(prefix.name + "_data.csv"))
    labels = read_labels_csv(prefix.with_name(prefix.name + "_labels.csv"))
    meta = json.loads(prefix.with_name(prefix.name + "_meta.json").read_text())
    spec = CopulaSpec(meta["nu_c"], meta["nu_u"], tuple(meta["subset"]))
    return ExperimentDataset(
        data, labels, np.array(meta["sigma"]), spec, meta["seed"], meta["tau"]
    )
