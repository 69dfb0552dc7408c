"""Intra-dataset diversity measures.

Scalar features get a normalized histogram entropy; spectral features get
the mean pairwise distance, a Gaussian-kernel log-determinant (repulsion
diagnostic in the determinantal-point-process sense), or the inverse byte
count of the JPEG-encoded mean feature image.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .distances import DistanceKind, DistanceMatrix, distance_matrix
from .features import FeatureKind, extract_features, feature_values
from .jpeg import encode_grayscale_jpeg
from .similarity import median_heuristic_bandwidth


@dataclass(frozen=True)
class Entropy:
    """Histogram entropy over ``bins`` bins, normalized by log(bins).

    ``edges`` None means uniform bins over the observed [min, max]; an
    explicit strictly increasing edge sequence overrides that.
    """
    bins: int = 32
    edges: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.edges is not None:
            edges = tuple(float(e) for e in self.edges)
            if len(edges) < 3 or any(b <= a for a, b in zip(edges, edges[1:])):
                raise ValueError("explicit edges must be strictly increasing with >= 2 bins")
            object.__setattr__(self, "edges", edges)
            object.__setattr__(self, "bins", len(edges) - 1)
        if self.bins < 2:
            raise ValueError(f"need at least 2 bins, got {self.bins}")


@dataclass(frozen=True)
class DistanceBased:
    kind: DistanceKind = DistanceKind.ECS


@dataclass(frozen=True)
class DPP:
    """Gaussian-kernel log-determinant; bandwidth=None selects the median heuristic."""
    bandwidth: float | None = None
    jitter: float = 0.0

    def __post_init__(self):
        if self.bandwidth is not None and not self.bandwidth > 0:
            raise ValueError(f"bandwidth must be positive, got {self.bandwidth}")
        if self.jitter < 0:
            raise ValueError(f"jitter must be nonnegative, got {self.jitter}")


@dataclass(frozen=True)
class Compression:
    quality: int = 75

    def __post_init__(self):
        if not 1 <= self.quality <= 100:
            raise ValueError(f"quality must be in 1..100, got {self.quality}")


DiversityMeasure = Entropy | DistanceBased | DPP | Compression


def diversity_entropy(values, bins: int = 32, edges=None) -> float:
    """Shannon entropy of binned scalar values divided by log(bins).

    1 when bin frequencies are exactly uniform, 0 when one bin holds
    everything (constant data included). With explicit edges only in-range
    values count toward the frequencies.
    """
    vals = np.asarray(list(values), dtype=np.float64)
    if vals.size == 0:
        raise ValueError("empty input")
    if not np.all(np.isfinite(vals)):
        raise ValueError("non-finite values")
    if edges is not None:
        edges = np.asarray(edges, dtype=np.float64)
        if edges.size < 3 or np.any(np.diff(edges) <= 0):
            raise ValueError("explicit edges must be strictly increasing with >= 2 bins")
        counts, _ = np.histogram(vals, bins=edges)
        bins = len(edges) - 1
    else:
        if bins < 2:
            raise ValueError(f"need at least 2 bins, got {bins}")
        lo, hi = float(vals.min()), float(vals.max())
        if lo == hi:
            return 0.0
        counts, _ = np.histogram(vals, bins=bins, range=(lo, hi))
    total = counts.sum()
    if total == 0:
        raise ValueError("no values fall inside the given edges")
    p = counts[counts > 0] / total
    return float(-np.sum(p * np.log(p)) / np.log(bins))


def diversity_distance(d: DistanceMatrix) -> float:
    """Mean over the n(n-1)/2 distinct intra-set pairs."""
    if not d.intra:
        raise ValueError("distance-based diversity needs an intra-set matrix")
    n = d.shape[0]
    if n < 2:
        raise ValueError("need at least 2 samples")
    iu = np.triu_indices(n, k=1)
    return float(np.mean(d.values[iu]))


def diversity_dpp(d: DistanceMatrix, bandwidth: float, jitter: float = 0.0) -> float:
    """log det of L + jitter*I with L_ij = exp(-d_ij^2 / 2 sigma^2).

    Log scale avoids underflow at moderate n. Returns -inf when the kernel
    matrix is numerically singular (e.g. duplicated samples with zero
    jitter); a factorization that fails outright raises.
    """
    if not d.intra:
        raise ValueError("DPP diversity needs an intra-set matrix")
    if not bandwidth > 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth}")
    if jitter < 0:
        raise ValueError(f"jitter must be nonnegative, got {jitter}")
    kernel = np.exp(-0.5 * (d.values / bandwidth) ** 2)
    if jitter:
        kernel = kernel + jitter * np.eye(kernel.shape[0])
    try:
        chol = np.linalg.cholesky(kernel)
        return float(2.0 * np.sum(np.log(np.diag(chol))))
    except np.linalg.LinAlgError:
        eigs = np.linalg.eigvalsh(kernel)
        cutoff = kernel.shape[0] * np.finfo(np.float64).eps * max(float(eigs[-1]), 1.0)
        if eigs[0] <= cutoff:
            return float("-inf")
        return float(np.sum(np.log(eigs)))


def diversity_compression(features, quality: int = 75) -> float:
    """Inverse byte count of the mean feature rendered as a grayscale JPEG.

    A diverse dataset averages to a blurry image that compresses well, so
    larger values mean more diversity. Entries of the mean are mapped
    affinely from [min, max] onto levels 0..255; a constant mean maps to
    mid-gray. Depends on the inputs only through their mean.
    """
    arrs = [np.atleast_2d(np.asarray(f, dtype=np.float64)) for f in features]
    if not arrs:
        raise ValueError("empty feature list")
    shape = arrs[0].shape
    if any(a.shape != shape for a in arrs):
        raise ValueError("features must share one shape")
    mean = np.mean(arrs, axis=0)
    lo, hi = float(mean.min()), float(mean.max())
    if hi > lo:
        levels = np.rint((mean - lo) / (hi - lo) * 255.0).astype(np.uint8)
    else:
        levels = np.full(shape, 128, dtype=np.uint8)
    return 1.0 / len(encode_grayscale_jpeg(levels, quality))


def diversity_from_features(values: list, feature: FeatureKind,
                            measure: DiversityMeasure) -> tuple[float, dict]:
    """Apply one diversity measure to pre-extracted feature values.

    Returns (value, resolved); resolved records the DPP bandwidth when the
    median heuristic picked it.
    """
    resolved: dict = {}
    if isinstance(measure, Entropy):
        if not feature.is_scalar:
            raise ValueError(f"entropy diversity applies to scalar features, not {feature.value}")
        return diversity_entropy(values, measure.bins, measure.edges), resolved
    if feature.is_scalar:
        raise ValueError(f"{type(measure).__name__} diversity needs a spectral feature, "
                         f"not {feature.value}")
    if isinstance(measure, DistanceBased):
        d = distance_matrix(values, values, measure.kind, feature)
        return diversity_distance(d), resolved
    if isinstance(measure, DPP):
        d = distance_matrix(values, values, DistanceKind.EUCLIDEAN, feature)
        bandwidth = measure.bandwidth
        if bandwidth is None:
            bandwidth = median_heuristic_bandwidth(d)
            resolved["bandwidth"] = bandwidth
        return diversity_dpp(d, bandwidth, measure.jitter), resolved
    if isinstance(measure, Compression):
        return diversity_compression(values, measure.quality), resolved
    raise TypeError(f"unknown diversity measure {measure!r}")


def dataset_diversity(dataset: Dataset, feature: FeatureKind,
                      measure: DiversityMeasure) -> float:
    """Extract one feature across the dataset and apply a diversity measure."""
    feature = FeatureKind(feature)
    values = feature_values(extract_features(dataset), feature)
    value, _ = diversity_from_features(values, feature, measure)
    return value
