"""
Symmetric tensors and the cumulant numerics built on them.

Moment and cumulant tensors of order ``d`` are fully symmetric, so only the
entries with a non-decreasing multi-index ``i1 <= ... <= id`` are stored
(``C(n + d - 1, d)`` values instead of ``n**d``).  Indices are 0-based.
"""
from __future__ import annotations

import json
from functools import lru_cache
from itertools import combinations_with_replacement, permutations
from math import comb, factorial

import numpy as np

from .errors import (
    DomainError,
    InsufficientDataError,
    InvalidOrderError,
    SingularCovarianceError,
)

__all__ = [
    "SymmetricTensor",
    "SpectralDirections",
    "as_data_matrix",
    "central_moment",
    "cumulants_upto_4",
    "fourth_cumulant",
    "contract_self",
    "leading_directions",
    "whiten",
]

# rows per block when accumulating products over realisations
_BLOCK = 1 << 15


def as_data_matrix(X) -> np.ndarray:
    """Validate a t x n matrix of realisations and return it as float64."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise DomainError(f"data matrix must be 2-dimensional, got shape {X.shape}")
    t, n = X.shape
    if n < 1:
        raise DomainError("data matrix needs at least one column")
    if t < 2:
        raise InsufficientDataError(f"need at least 2 realisations, got {t}")
    if not np.all(np.isfinite(X)):
        raise DomainError("data matrix contains non-finite entries")
    return X


@lru_cache(maxsize=32)
def _unique_indices(n: int, d: int) -> np.ndarray:
    idx = np.array(list(combinations_with_replacement(range(n), d)), dtype=np.intp)
    idx.setflags(write=False)
    return idx.reshape(-1, d)


@lru_cache(maxsize=16)
def _position_array(n: int, d: int) -> np.ndarray:
    """Dense n**d array mapping any multi-index to its storage slot."""
    idx = _unique_indices(n, d)
    pos = np.empty((n,) * d, dtype=np.intp)
    slots = np.arange(len(idx))
    for perm in set(permutations(range(d))):
        pos[tuple(idx[:, list(perm)].T)] = slots
    pos.setflags(write=False)
    return pos


@lru_cache(maxsize=16)
def _multiplicities(n: int, d: int) -> np.ndarray:
    """Number of distinct permutations of each stored multi-index."""
    idx = _unique_indices(n, d)
    out = np.empty(len(idx))
    for k, row in enumerate(idx):
        _, counts = np.unique(row, return_counts=True)
        denom = 1
        for c in counts:
            denom *= factorial(int(c))
        out[k] = factorial(d) // denom
    out.setflags(write=False)
    return out


class SymmetricTensor:
    """
    Fully symmetric order-``d`` tensor over ``n`` dimensions.

    Parameters
    ----------
    order : int
        Tensor order ``d``.
    dim : int
        Dimension ``n`` of every mode.
    values : array_like
        One value per non-decreasing multi-index, in lexicographic order
        (the order of ``itertools.combinations_with_replacement``).
    """

    __slots__ = ("order", "dim", "_values")

    def __init__(self, order: int, dim: int, values):
        if order < 1 or dim < 1:
            raise DomainError("order and dim must be positive")
        values = np.array(values, dtype=float)
        expected = comb(dim + order - 1, order)
        if values.shape != (expected,):
            raise DomainError(
                f"order-{order} tensor over {dim} dims stores {expected} values, "
                f"got shape {values.shape}"
            )
        values.setflags(write=False)
        self.order = int(order)
        self.dim = int(dim)
        self._values = values

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def indices(self) -> np.ndarray:
        """Stored multi-indices, one row per value."""
        return _unique_indices(self.dim, self.order)

    def __len__(self) -> int:
        return len(self._values)

    def __getitem__(self, index) -> float:
        index = tuple(sorted(int(i) for i in index))
        if len(index) != self.order:
            raise IndexError(f"expected {self.order} indices, got {len(index)}")
        if index[0] < 0 or index[-1] >= self.dim:
            raise IndexError(f"index {index} out of range for dim {self.dim}")
        return float(self._values[_position_array(self.dim, self.order)[index]])

    def to_dense(self) -> np.ndarray:
        return self._values[_position_array(self.dim, self.order)]

    @classmethod
    def from_dense(cls, A, atol: float = 1e-12) -> "SymmetricTensor":
        A = np.asarray(A, dtype=float)
        d, n = A.ndim, A.shape[0]
        if A.shape != (n,) * d:
            raise DomainError(f"dense tensor must be cubical, got shape {A.shape}")
        for perm in permutations(range(d)):
            if not np.allclose(A, A.transpose(perm), rtol=0.0, atol=atol):
                raise DomainError("dense tensor is not symmetric")
        return cls(d, n, A[tuple(_unique_indices(n, d).T)])

    def __eq__(self, other):
        if not isinstance(other, SymmetricTensor):
            return NotImplemented
        return (
            self.order == other.order
            and self.dim == other.dim
            and np.array_equal(self._values, other._values)
        )

    def __repr__(self):
        return f"SymmetricTensor(order={self.order}, dim={self.dim})"

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "dim": self.dim,
            "entries": [
                [*map(int, idx), float(v)] for idx, v in zip(self.indices, self._values)
            ],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, doc: dict) -> "SymmetricTensor":
        order, dim = int(doc["order"]), int(doc["dim"])
        pos = _position_array(dim, order)
        values = np.full(comb(dim + order - 1, order), np.nan)
        for entry in doc["entries"]:
            idx = tuple(int(i) for i in entry[:order])
            if list(idx) != sorted(idx):
                raise DomainError(f"entry index {idx} is not non-decreasing")
            values[pos[idx]] = float(entry[order])
        if np.isnan(values).any():
            raise DomainError("tensor document is missing entries")
        return cls(order, dim, values)

    @classmethod
    def from_json(cls, text: str) -> "SymmetricTensor":
        return cls.from_dict(json.loads(text))


class SpectralDirections:
    """Orthonormal directions (columns) with descending eigenvalues."""

    __slots__ = ("directions", "eigenvalues")

    def __init__(self, directions: np.ndarray, eigenvalues: np.ndarray):
        self.directions = directions
        self.eigenvalues = eigenvalues

    def __len__(self):
        return len(self.eigenvalues)

    def __repr__(self):
        return f"SpectralDirections(r={len(self)}, eigenvalues={self.eigenvalues!r})"


def _pair_products(Xc: np.ndarray, n: int):
    """Products of column pairs i <= j and a lookup from (i, j) to pair slot."""
    pairs = _unique_indices(n, 2)
    pos = _position_array(n, 2)
    return Xc[:, pairs[:, 0]] * Xc[:, pairs[:, 1]], pos


def _raw_central(Xc: np.ndarray, d: int):
    """Dense building blocks for the order-``d`` central moment."""
    t, n = Xc.shape
    if d == 2:
        return Xc.T @ Xc / t, None
    npairs = n * (n + 1) // 2
    acc = np.zeros((npairs, n if d == 3 else npairs))
    for start in range(0, t, _BLOCK):
        block = Xc[start:start + _BLOCK]
        P, _ = _pair_products(block, n)
        acc += P.T @ (block if d == 3 else P)
    return acc / t, _position_array(n, 2)


def _check_order(d):
    if d not in (2, 3, 4):
        raise InvalidOrderError(f"moment order must be 2, 3 or 4, got {d!r}")


def _moment_values(Xc: np.ndarray, d: int) -> np.ndarray:
    n = Xc.shape[1]
    idx = _unique_indices(n, d)
    raw, ppos = _raw_central(Xc, d)
    if d == 2:
        return raw[idx[:, 0], idx[:, 1]]
    if d == 3:
        return raw[ppos[idx[:, 0], idx[:, 1]], idx[:, 2]]
    return raw[ppos[idx[:, 0], idx[:, 1]], ppos[idx[:, 2], idx[:, 3]]]


def central_moment(X, d: int) -> SymmetricTensor:
    """
    Central moment tensor of order ``d`` (2, 3 or 4).

    Entries are ``mean_j prod_k (x[j, i_k] - mean[i_k])``; the estimator
    divides by the number of realisations ``t``.
    """
    _check_order(d)
    X = as_data_matrix(X)
    Xc = X - X.mean(axis=0)
    return SymmetricTensor(d, X.shape[1], _moment_values(Xc, d))


def _c4_values(Xc: np.ndarray) -> np.ndarray:
    n = Xc.shape[1]
    m2 = Xc.T @ Xc / Xc.shape[0]
    m4 = _moment_values(Xc, 4)
    i, j, k, l = _unique_indices(n, 4).T
    return m4 - m2[i, j] * m2[k, l] - m2[i, k] * m2[j, l] - m2[i, l] * m2[j, k]


def fourth_cumulant(X) -> SymmetricTensor:
    """Order-4 cumulant tensor of the realisations in ``X``."""
    X = as_data_matrix(X)
    Xc = X - X.mean(axis=0)
    return SymmetricTensor(4, X.shape[1], _c4_values(Xc))


def cumulants_upto_4(X):
    """
    Cumulant tensors of orders 2, 3 and 4.

    The second and third cumulants equal the central moments; the fourth
    subtracts the three pairings of second moments from the fourth central
    moment.

    Returns
    -------
    C2, C3, C4 : SymmetricTensor
    """
    X = as_data_matrix(X)
    n = X.shape[1]
    Xc = X - X.mean(axis=0)
    C2 = SymmetricTensor(2, n, _moment_values(Xc, 2))
    C3 = SymmetricTensor(3, n, _moment_values(Xc, 3))
    C4 = SymmetricTensor(4, n, _c4_values(Xc))
    return C2, C3, C4


@lru_cache(maxsize=16)
def _contraction_plan(n: int, d: int):
    # U[a, s] = c[sorted(a, *s)] for every stored (d-1)-multi-index s,
    # weighted by the number of orderings of s.
    rest = _unique_indices(n, d - 1)
    pos = _position_array(n, d)
    a = np.arange(n)[:, None]
    slots = pos[(a,) + tuple(rest[:, k][None, :] for k in range(d - 1))]
    weights = _multiplicities(n, d - 1) if d > 1 else np.ones(1)
    return slots, weights


def contract_self(C: SymmetricTensor) -> np.ndarray:
    """
    Contract a symmetric tensor with itself over all but one mode.

    Returns the n x n matrix ``M[a, b] = sum_{i2..id} c[a, i2..id] c[b, i2..id]``,
    which is symmetric positive semi-definite.
    """
    if not isinstance(C, SymmetricTensor):
        raise DomainError("contract_self expects a SymmetricTensor")
    if C.order < 2:
        raise InvalidOrderError("contraction needs a tensor of order >= 2")
    slots, weights = _contraction_plan(C.dim, C.order)
    U = C.values[slots]
    M = (U * weights) @ U.T
    return 0.5 * (M + M.T)


def leading_directions(M, r: int) -> SpectralDirections:
    """
    Eigenvectors of a symmetric matrix for its ``r`` largest eigenvalues.

    Equal eigenvalues are ordered by the position of each vector's dominant
    coordinate; every vector is signed so its first nonzero coordinate is
    positive.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {M.shape}")
    n = M.shape[0]
    if not 1 <= r <= n:
        raise DomainError(f"direction count r={r} must lie in [1, {n}]")
    asym = np.max(np.abs(M - M.T)) if n > 1 else 0.0
    if asym > 1e-8:
        raise DomainError(f"matrix is not symmetric (max asymmetry {asym:.3e})")
    lam, W = np.linalg.eigh(0.5 * (M + M.T))

    scale = max(1.0, float(np.max(np.abs(lam))))
    tie = 1e-12 * scale
    dominant = np.argmax(np.abs(W), axis=0)
    # group eigenvalues within tie tolerance, then order each group by index
    order = np.argsort(-lam, kind="stable")
    groups = []
    for k in order:
        if groups and abs(lam[groups[-1][0]] - lam[k]) <= tie:
            groups[-1].append(k)
        else:
            groups.append([k])
    order = [k for g in groups for k in sorted(g, key=lambda k: dominant[k])][:r]

    W = W[:, order].copy()
    for col in range(r):
        nz = np.flatnonzero(np.abs(W[:, col]) > 1e-12)
        if nz.size and W[nz[0], col] < 0:
            W[:, col] = -W[:, col]
    return SpectralDirections(W, lam[order].copy())


def whiten(X) -> np.ndarray:
    """
    Remove the mean and the linear cross-correlations from ``X``.

    Returns ``(X - mean) @ C2**(-1/2)`` with the symmetric inverse square root
    of the sample covariance (divided by ``t``), so the result has zero mean
    and identity covariance.

    Raises
    ------
    SingularCovarianceError
        If an eigenvalue of the covariance is at most ``1e-10`` times the
        largest one.
    """
    X = as_data_matrix(X)
    Xc = X - X.mean(axis=0)
    C2 = Xc.T @ Xc / X.shape[0]
    lam, V = np.linalg.eigh(C2)
    top = lam[-1]
    if top <= 0 or lam[0] <= 1e-10 * top:
        raise SingularCovarianceError(lam[0], top)
    root_inv = (V / np.sqrt(lam)) @ V.T
    Y = Xc @ root_inv
    return Y - Y.mean(axis=0)
