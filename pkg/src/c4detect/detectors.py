"""
Outlier detectors: the RX (Mahalanobis) baseline and the iterative
fourth-cumulant detector, plus ROC construction from swept flag sets.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, SingularCovarianceError
from .stats_dist import chi2_quantile
from .sym_tensor import (
    as_data_matrix,
    contract_self,
    fourth_cumulant,
    leading_directions,
    whiten,
)

__all__ = [
    "DetectionResult",
    "RocCurve",
    "rx_scores",
    "rx_detect",
    "excess_kurtosis",
    "flag_projections",
    "hosvd_c4_detect",
    "roc_point",
    "roc_curve",
    "DEFAULT_BETA_GRID",
]

DEFAULT_BETA_GRID = tuple(np.round(np.arange(1.0, 5.0 + 1e-9, 0.25), 10).tolist())

# fewest remaining rows for which a fourth cumulant is still computed
_MIN_ROWS = 5


def rx_scores(X) -> np.ndarray:
    """
    Squared Mahalanobis distance of every row to the sample mean.

    Mean and covariance (divided by ``t``) are estimated from all rows.
    """
    X = as_data_matrix(X)
    Xc = X - X.mean(axis=0)
    C2 = Xc.T @ Xc / X.shape[0]
    lam, V = np.linalg.eigh(C2)
    if lam[-1] <= 0 or lam[0] <= 1e-10 * lam[-1]:
        raise SingularCovarianceError(lam[0], lam[-1])
    Y = Xc @ V
    return np.maximum(np.sum(Y * Y / lam, axis=1), 0.0)


def rx_detect(X, threshold=None, percentile=None) -> np.ndarray:
    """
    Rows whose Mahalanobis score exceeds a threshold.

    Give either a raw ``threshold`` or a chi-squared ``percentile`` in (0, 1),
    which sets the threshold to the chi-squared quantile with ``n`` degrees of
    freedom.  Returns sorted row indices.
    """
    if (threshold is None) == (percentile is None):
        raise DomainError("give exactly one of threshold or percentile")
    scores = rx_scores(X)
    if percentile is not None:
        threshold = chi2_quantile(percentile, np.shape(X)[1])
    return np.flatnonzero(scores > threshold)


@dataclass
class DetectionResult:
    flagged: np.ndarray
    beta: float
    r: int
    iterations: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "flagged": [int(i) for i in self.flagged],
            "beta": float(self.beta),
            "r": int(self.r),
            "iterations": [
                {"k": float(it["k"]), "removed": int(it["removed"])}
                for it in self.iterations
            ],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, doc):
        return cls(
            np.asarray(doc["flagged"], dtype=np.intp),
            doc["beta"],
            doc["r"],
            [dict(it) for it in doc["iterations"]],
        )


def excess_kurtosis(Z) -> np.ndarray:
    """Fourth cumulant over squared variance, per column."""
    Z = np.asarray(Z, dtype=float)
    Zc = Z - Z.mean(axis=0)
    m2 = np.mean(Zc**2, axis=0)
    m4 = np.mean(Zc**4, axis=0)
    return m4 / m2**2 - 3.0


def flag_projections(Z, beta: float) -> np.ndarray:
    """
    Boolean mask of rows whose robust distance exceeds ``beta`` in any column.

    The distance in column ``i`` is ``|z - median| / MAD`` with the unscaled
    median absolute deviation; columns with zero MAD are skipped.
    """
    Z = np.asarray(Z, dtype=float)
    med = np.median(Z, axis=0)
    dev = np.abs(Z - med)
    mad = np.median(dev, axis=0)
    usable = mad > 0
    if not usable.any():
        return np.zeros(Z.shape[0], dtype=bool)
    return np.any(dev[:, usable] > beta * mad[usable], axis=1)


def hosvd_c4_detect(X, beta: float = 2.5, r: int = 3, max_fraction: float = 0.5):
    """
    Iterative fourth-cumulant outlier detector.

    The data are centred and whitened once.  Each pass computes the fourth
    cumulant tensor of the remaining rows, projects them on the ``r`` leading
    eigenvectors of its self-contraction, flags rows lying more than ``beta``
    MADs from the median along any projection, and removes them.  Passes
    continue while the root-sum-square excess kurtosis of the projections
    keeps falling.

    Parameters
    ----------
    X : array_like, shape (t, n)
        Realisations in rows.
    beta : float
        Sensitivity threshold in MAD units.
    r : int
        Number of projection directions.
    max_fraction : float
        Stop once more than this fraction of rows has been removed.

    Returns
    -------
    DetectionResult
        Flagged row indices (sorted, in the input numbering) with per-pass
        kurtosis and removal counts.  The pass that stops the loop is kept,
        including its removals.
    """
    X = as_data_matrix(X)
    t, n = X.shape
    if not beta > 0:
        raise DomainError(f"beta must be positive, got {beta}")
    if not 1 <= r <= n:
        raise DomainError(f"r={r} must lie in [1, {n}]")

    Y = whiten(X)
    remaining = np.arange(t)
    flagged = []
    iterations = []
    k_prev = np.inf
    while remaining.size >= _MIN_ROWS:
        Xr = Y[remaining]
        M = contract_self(fourth_cumulant(Xr))
        W = leading_directions(M, r).directions
        Z = Xr @ W
        k = float(np.sqrt(np.sum(excess_kurtosis(Z) ** 2)))
        hit = flag_projections(Z, beta)
        iterations.append({"k": k, "removed": int(hit.sum())})
        flagged.append(remaining[hit])
        remaining = remaining[~hit]
        if not hit.any() or k >= k_prev or t - remaining.size > max_fraction * t:
            break
        k_prev = k
    out = np.sort(np.concatenate(flagged)) if flagged else np.empty(0, np.intp)
    return DetectionResult(out, float(beta), int(r), iterations)


def roc_point(flagged, labels) -> tuple[float, float]:
    """``(FPR, TPR)`` of one flag set against binary labels."""
    labels = np.asarray(labels).astype(bool)
    mask = np.zeros(labels.size, dtype=bool)
    mask[np.asarray(flagged, dtype=np.intp)] = True
    pos = labels.sum()
    neg = labels.size - pos
    return float((mask & ~labels).sum() / neg), float((mask & labels).sum() / pos)


@dataclass
class RocCurve:
    """ROC points in sweep order (``params``) and the trapezoid AUC."""

    params: np.ndarray
    fpr: np.ndarray
    tpr: np.ndarray
    auc: float

    def sorted_points(self):
        order = np.lexsort((self.tpr, self.fpr))
        return self.fpr[order], self.tpr[order]

    def to_dict(self) -> dict:
        return {
            "params": self.params.tolist(),
            "fpr": self.fpr.tolist(),
            "tpr": self.tpr.tolist(),
            "auc": self.auc,
        }


def roc_curve(flag_sets, labels, params=None) -> RocCurve:
    """
    ROC points for a sweep of flag sets, one per detector setting.

    The AUC integrates the points sorted by FPR with the trapezoid rule
    after adding the corners ``(0, 0)`` and ``(1, 1)``.
    """
    labels = np.asarray(labels)
    pos = int(np.sum(labels == 1))
    if pos == 0 or pos == labels.size:
        raise DomainError("labels need at least one positive and one negative")
    flag_sets = list(flag_sets)
    if not flag_sets:
        raise DomainError("empty sweep")
    pts = np.array([roc_point(f, labels) for f in flag_sets])
    fpr, tpr = pts[:, 0], pts[:, 1]
    params = np.arange(len(flag_sets)) if params is None else np.asarray(params, float)
    order = np.lexsort((tpr, fpr))
    xs = np.concatenate([[0.0], fpr[order], [1.0]])
    ys = np.concatenate([[0.0], tpr[order], [1.0]])
    auc = float(np.sum(np.diff(xs) * (ys[1:] + ys[:-1]) / 2))
    return RocCurve(params, fpr, tpr, auc)
