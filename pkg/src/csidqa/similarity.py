"""Dataset-difference measures over distance matrices.

Four measures of how far apart two sample sets are: the mean pairwise
distance, a biased Gaussian-kernel MMD estimate, leave-one-out 1-NN
classification accuracy (NNCA), and the order-p Wasserstein distance
computed exactly by a transportation network simplex.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .distances import DistanceKind, DistanceMatrix, distance_matrix
from .features import FeatureKind, extract_features, feature_values
from .transport import solve_uniform_transport


@dataclass(frozen=True)
class MeanDistance:
    pass


@dataclass(frozen=True)
class MMD:
    """Kernel two-sample discrepancy; bandwidth=None selects the median heuristic."""
    bandwidth: float | None = None

    def __post_init__(self):
        if self.bandwidth is not None and not self.bandwidth > 0:
            raise ValueError(f"bandwidth must be positive, got {self.bandwidth}")


@dataclass(frozen=True)
class NNCA:
    pass


@dataclass(frozen=True)
class Wasserstein:
    p: float = 2.0

    def __post_init__(self):
        if not self.p >= 1:
            raise ValueError(f"order p must be >= 1, got {self.p}")


SimilarityMeasure = MeanDistance | MMD | NNCA | Wasserstein


@dataclass(frozen=True)
class TransportPlan:
    """Optimal coupling with uniform marginals; cost is the plan's transport
    cost <D^p, T> before the 1/p root."""

    coupling: np.ndarray
    cost: float

    def __post_init__(self):
        coupling = np.asarray(self.coupling, dtype=np.float64)
        n_x, n_y = coupling.shape
        if np.any(coupling < 0):
            raise ValueError("coupling has negative entries")
        if (np.max(np.abs(coupling.sum(axis=1) - 1.0 / n_x)) > 1e-9
                or np.max(np.abs(coupling.sum(axis=0) - 1.0 / n_y)) > 1e-9):
            raise ValueError("coupling marginals deviate from uniform")
        coupling.setflags(write=False)
        object.__setattr__(self, "coupling", coupling)


def mean_distance(d_xy: DistanceMatrix) -> float:
    """Average entry of the inter-set distance matrix."""
    return float(np.mean(d_xy.values))


def _check_intra(mat: DistanceMatrix, name: str) -> None:
    if not mat.intra:
        raise ValueError(f"{name} must be an intra-set distance matrix")


def mmd(d_xx: DistanceMatrix, d_xy: DistanceMatrix, d_yy: DistanceMatrix,
        bandwidth: float) -> float:
    """Biased MMD estimate with Gaussian kernel k(d) = exp(-d^2 / 2 sigma^2).

    The squared estimate is clamped at zero before the root; rounding can
    push the exact-zero case slightly negative.
    """
    if not bandwidth > 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth}")
    _check_intra(d_xx, "d_xx")
    _check_intra(d_yy, "d_yy")
    n_x, n_y = d_xy.shape
    if d_xx.shape != (n_x, n_x) or d_yy.shape != (n_y, n_y):
        raise ValueError("distance matrix shapes are inconsistent")
    scale = -0.5 / bandwidth ** 2

    def kmean(mat: DistanceMatrix) -> float:
        return float(np.mean(np.exp(scale * mat.values ** 2)))

    squared = kmean(d_xx) - 2.0 * kmean(d_xy) + kmean(d_yy)
    return float(np.sqrt(max(squared, 0.0)))


def median_heuristic_bandwidth(*matrices: DistanceMatrix) -> float:
    """Median of all strictly positive entries across the given matrices."""
    positive = np.concatenate([m.values[m.values > 0].ravel() for m in matrices])
    if positive.size == 0:
        raise ValueError("median heuristic undefined: all distances are zero")
    return float(np.median(positive))


def nnca(d_xx: DistanceMatrix, d_xy: DistanceMatrix, d_yy: DistanceMatrix) -> float:
    """Leave-one-out 1-NN accuracy with X labeled positive, Y negative.

    Near 0.5 for samples from one distribution, near 1 for well-separated
    sets. Ties go to the candidate with the smallest (set, index) key, X
    before Y; argmin over the X-then-Y block ordering implements exactly
    that rule.
    """
    _check_intra(d_xx, "d_xx")
    _check_intra(d_yy, "d_yy")
    n_x, n_y = d_xy.shape
    if d_xx.shape != (n_x, n_x) or d_yy.shape != (n_y, n_y):
        raise ValueError("distance matrix shapes are inconsistent")
    if n_x + n_y < 2:
        raise ValueError("need at least 2 samples overall")
    full = np.block([[d_xx.values, d_xy.values],
                     [d_xy.values.T, d_yy.values]])
    np.fill_diagonal(full, np.inf)
    nearest = np.argmin(full, axis=1)
    is_x = np.arange(n_x + n_y) < n_x
    return float(np.mean((nearest < n_x) == is_x))


def wasserstein(d_xy: DistanceMatrix, p: float = 2.0) -> tuple[float, TransportPlan]:
    """Order-p Wasserstein distance between the two sample sets.

    Solves the transportation problem min <D^p, T> over couplings with
    uniform marginals and returns (cost^(1/p), optimal basic plan).
    """
    if not p >= 1:
        raise ValueError(f"order p must be >= 1, got {p}")
    powered = d_xy.values ** p
    objective, coupling = solve_uniform_transport(powered)
    plan = TransportPlan(coupling=coupling, cost=float(objective))
    return float(objective ** (1.0 / p)), plan


def _resolve_bandwidth(measure: MMD, d_xx, d_xy, d_yy) -> float:
    if measure.bandwidth is not None:
        return measure.bandwidth
    return median_heuristic_bandwidth(d_xx, d_xy, d_yy)


def difference_from_features(features_x: list, features_y: list,
                             kind: DistanceKind, measure: SimilarityMeasure,
                             feature: FeatureKind | None = None) -> tuple[float, dict]:
    """Apply one dataset-difference measure to pre-extracted feature lists.

    Returns (value, resolved) where resolved records parameters fixed at
    run time (currently the MMD bandwidth) so a report can be replayed.
    """
    d_xy = distance_matrix(features_x, features_y, kind, feature)
    resolved: dict = {}
    if isinstance(measure, MeanDistance):
        return mean_distance(d_xy), resolved
    if isinstance(measure, Wasserstein):
        value, _ = wasserstein(d_xy, measure.p)
        return value, resolved
    d_xx = distance_matrix(features_x, features_x, kind, feature)
    d_yy = distance_matrix(features_y, features_y, kind, feature)
    if isinstance(measure, MMD):
        bandwidth = _resolve_bandwidth(measure, d_xx, d_xy, d_yy)
        resolved["bandwidth"] = bandwidth
        return mmd(d_xx, d_xy, d_yy, bandwidth), resolved
    if isinstance(measure, NNCA):
        return nnca(d_xx, d_xy, d_yy), resolved
    raise TypeError(f"unknown similarity measure {measure!r}")


def dataset_difference(x: Dataset, y: Dataset, feature: FeatureKind,
                       kind: DistanceKind = DistanceKind.ECS,
                       measure: SimilarityMeasure = Wasserstein()) -> float:
    """Extract one feature from both datasets and apply a difference measure."""
    feature = FeatureKind(feature)
    fx = feature_values(extract_features(x), feature)
    fy = feature_values(extract_features(y), feature)
    value, _ = difference_from_features(fx, fy, kind, measure, feature)
    return value
