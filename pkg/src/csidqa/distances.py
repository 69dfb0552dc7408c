"""Pairwise sample distances and dense distance matrices.

Three sample distances: plain Euclidean, Geman-McClure (bounded per
coordinate), and the cumulative-spectrum distance ECS, which is the L2 (or
Frobenius) distance between running sums and acts as a discrete CDF
distance on unit-sum spectra. ECS is defined for real inputs only.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .features import FeatureKind


class DistanceKind(str, Enum):
    EUCLIDEAN = "euclidean"
    GMC = "gmc"
    ECS = "ecs"


@dataclass(frozen=True)
class DistanceMatrix:
    """Dense nonnegative matrix of pairwise distances, row set vs column set.

    ``intra`` marks matrices computed within one set; those are symmetric
    with a zero diagonal by construction.
    """

    values: np.ndarray
    kind: DistanceKind
    feature: FeatureKind | None = None
    intra: bool = False

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2 or values.size == 0:
            raise ValueError(f"distance matrix must be a non-empty 2-D array, got {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("distance matrix contains non-finite entries")
        if np.any(values < 0):
            raise ValueError("distance matrix contains negative entries")
        if self.intra:
            if values.shape[0] != values.shape[1]:
                raise ValueError("intra-set distance matrix must be square")
            if np.any(np.diag(values) != 0.0) or not np.array_equal(values, values.T):
                raise ValueError("intra-set distance matrix must be symmetric with zero diagonal")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


def _as_vectors(x, y):
    x = np.asarray(x).ravel()
    y = np.asarray(y).ravel()
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    return x, y


def dist_euclidean(x, y) -> float:
    """L2 norm of the difference; accepts real or complex vectors."""
    x, y = _as_vectors(x, y)
    return float(np.sqrt(np.sum(np.abs(x - y) ** 2)))


def dist_gmc(x, y) -> float:
    """Geman-McClure distance: sum of |xi-yi|^2 / (1 + |xi-yi|^2).

    Each coordinate contributes less than 1, so the result is below the
    vector length regardless of outliers.
    """
    x, y = _as_vectors(x, y)
    sq = np.abs(x - y) ** 2
    return float(np.sum(sq / (1.0 + sq)))


def _require_real(arr, name: str) -> np.ndarray:
    arr = np.asarray(arr)
    if np.iscomplexobj(arr):
        raise ValueError(f"ECS distance is defined for real inputs only, got complex {name}")
    return arr.astype(np.float64)


def dist_ecs(x, y) -> float:
    """L2 distance between the cumulative sums of two real vectors."""
    x = _require_real(x, "x").ravel()
    y = _require_real(y, "y").ravel()
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    return dist_euclidean(np.cumsum(x), np.cumsum(y))


def dist_ecs_matrix(x, y) -> float:
    """Frobenius distance between 2-D cumulative sums of two real matrices."""
    x = _require_real(x, "x")
    y = _require_real(y, "y")
    if x.ndim != 2 or y.ndim != 2:
        raise ValueError("matrix ECS expects 2-D inputs")
    if x.shape != y.shape:
        raise ValueError(f"shape mismatch: {x.shape} vs {y.shape}")
    cx = np.cumsum(np.cumsum(x, axis=0), axis=1)
    cy = np.cumsum(np.cumsum(y, axis=0), axis=1)
    return dist_euclidean(cx.ravel(), cy.ravel())


def _stack_features(features) -> np.ndarray:
    arrs = [np.asarray(f) for f in features]
    if not arrs:
        raise ValueError("empty feature list")
    shape = arrs[0].shape
    for i, a in enumerate(arrs):
        if a.shape != shape:
            raise ValueError(f"feature {i} has shape {a.shape}, expected {shape}")
    return np.stack([a.ravel() for a in arrs])


def _ecs_transform(features) -> np.ndarray:
    """Cumulative-sum transform per feature: 1-D running sum for vectors and
    scalars, 2-D running sum for matrices. ECS then reduces to Euclidean
    distance between transforms."""
    out = []
    for i, f in enumerate(features):
        f = _require_real(f, f"feature {i}")
        if f.ndim <= 1:
            out.append(np.cumsum(f.ravel()))
        elif f.ndim == 2:
            out.append(np.cumsum(np.cumsum(f, axis=0), axis=1).ravel())
        else:
            raise ValueError(f"ECS supports vectors and matrices, feature {i} is {f.ndim}-D")
    return _stack_features(out)


def _pairwise_euclidean(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    out = np.empty((p.shape[0], q.shape[0]))
    for i in range(p.shape[0]):
        out[i] = np.sqrt(np.sum(np.abs(q - p[i]) ** 2, axis=1))
    return out


def _pairwise_gmc(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    out = np.empty((p.shape[0], q.shape[0]))
    for i in range(p.shape[0]):
        sq = np.abs(q - p[i]) ** 2
        out[i] = np.sum(sq / (1.0 + sq), axis=1)
    return out


def distance_matrix(features_a, features_b, kind: DistanceKind,
                    feature: FeatureKind | None = None) -> DistanceMatrix:
    """All pairwise distances between two feature lists.

    Passing the same list object for both sides marks the result as
    intra-set and guarantees exact symmetry and a zero diagonal.
    """
    kind = DistanceKind(kind)
    intra = features_a is features_b
    if kind == DistanceKind.ECS:
        p = _ecs_transform(features_a)
        q = p if intra else _ecs_transform(features_b)
        if p.shape[1] != q.shape[1]:
            raise ValueError(f"feature length mismatch: {p.shape[1]} vs {q.shape[1]}")
        values = _pairwise_euclidean(p, q)
    else:
        p = _stack_features(features_a)
        q = p if intra else _stack_features(features_b)
        if p.shape[1] != q.shape[1]:
            raise ValueError(f"feature length mismatch: {p.shape[1]} vs {q.shape[1]}")
        pair = _pairwise_euclidean if kind == DistanceKind.EUCLIDEAN else _pairwise_gmc
        values = pair(p, q)
    if intra:
        upper = np.triu(values, 1)
        values = upper + upper.T
    return DistanceMatrix(values=values, kind=kind, feature=feature, intra=intra)
