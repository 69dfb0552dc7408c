"""Aggregation across features, end-to-end quality reports, and
similarity-guided selection of augmentation candidates.

Raw per-feature metric values live on incompatible scales, so reports
min-max normalize them over the compared collection before aggregating
with min, max, or a weighted average. Selection ranks candidate datasets
by aggregate difference to a reference set and keeps the top k (or all
below a threshold).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .dataset import Dataset, normalize_max_abs
from .distances import DistanceKind
from .diversity import (DPP, Compression, DistanceBased, DiversityMeasure, Entropy,
                        diversity_from_features)
from .features import (DEFAULT_FEATURES, FeatureKind, extract_features, feature_values)
from .similarity import (MMD, NNCA, MeanDistance, SimilarityMeasure, Wasserstein,
                         difference_from_features)

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Min:
    pass


@dataclass(frozen=True)
class Max:
    pass


@dataclass(frozen=True)
class WeightedAverage:
    weights: Mapping[FeatureKind, float]

    def __post_init__(self):
        weights = {FeatureKind(k): float(v) for k, v in self.weights.items()}
        if not weights:
            raise ValueError("weights must be non-empty")
        if any(not 0.0 <= w <= 1.0 for w in weights.values()):
            raise ValueError("each weight must lie in [0, 1]")
        if abs(sum(weights.values()) - 1.0) > 1e-9:
            raise ValueError(f"weights must sum to 1, got {sum(weights.values())}")
        object.__setattr__(self, "weights", weights)


AggregationRule = Min | Max | WeightedAverage


def equal_weights(features) -> WeightedAverage:
    features = list(features)
    return WeightedAverage({f: 1.0 / len(features) for f in features})


def normalize_scores(values: Mapping) -> dict:
    """Min-max normalize a map of finite values onto [0, 1].

    A constant (or singleton) collection maps to all zeros. Order is
    preserved: normalization is a monotone map.
    """
    if not values:
        raise ValueError("nothing to normalize")
    arr = np.array([float(v) for v in values.values()])
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite value in collection")
    lo, hi = float(arr.min()), float(arr.max())
    if hi == lo:
        return {k: 0.0 for k in values}
    return {k: (float(v) - lo) / (hi - lo) for k, v in values.items()}


def aggregate(normalized: Mapping[FeatureKind, float], rule: AggregationRule) -> float:
    """Fold normalized per-feature values into one score."""
    if not normalized:
        raise ValueError("nothing to aggregate")
    if isinstance(rule, Min):
        return float(min(normalized.values()))
    if isinstance(rule, Max):
        return float(max(normalized.values()))
    if isinstance(rule, WeightedAverage):
        if set(rule.weights) != set(normalized):
            raise ValueError(
                f"weights cover {sorted(k.value for k in rule.weights)}, "
                f"features are {sorted(k.value for k in normalized)}")
        return float(sum(rule.weights[k] * normalized[k] for k in normalized))
    raise TypeError(f"unknown aggregation rule {rule!r}")


@dataclass(frozen=True)
class QualityReport:
    """Per-feature raw and normalized metric values plus their aggregate.

    ``method_config`` records every method choice and resolved parameter,
    enough to replay the report exactly on the same datasets.
    """

    report: str
    per_feature: dict[FeatureKind, float]
    normalized: dict[FeatureKind, float]
    aggregate: float
    method_config: dict

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "report": self.report,
            "per_feature": {k.value: v for k, v in self.per_feature.items()},
            "normalized": {k.value: v for k, v in self.normalized.items()},
            "aggregate": self.aggregate,
            "method_config": self.method_config,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    @staticmethod
    def from_json_dict(data: dict) -> "QualityReport":
        return QualityReport(
            report=data["report"],
            per_feature={FeatureKind(k): float(v) for k, v in data["per_feature"].items()},
            normalized={FeatureKind(k): float(v) for k, v in data["normalized"].items()},
            aggregate=float(data["aggregate"]),
            method_config=data["method_config"],
        )


def _measure_config(measure) -> dict:
    if isinstance(measure, MeanDistance):
        return {"name": "mean"}
    if isinstance(measure, MMD):
        return {"name": "mmd", "bandwidth": measure.bandwidth}
    if isinstance(measure, NNCA):
        return {"name": "nnca"}
    if isinstance(measure, Wasserstein):
        return {"name": "wasserstein", "p": measure.p}
    if isinstance(measure, Entropy):
        return {"name": "entropy", "bins": measure.bins,
                "edges": None if measure.edges is None else list(measure.edges)}
    if isinstance(measure, DistanceBased):
        return {"name": "distance", "distance": measure.kind.value}
    if isinstance(measure, DPP):
        return {"name": "dpp", "bandwidth": measure.bandwidth, "jitter": measure.jitter}
    if isinstance(measure, Compression):
        return {"name": "compression", "quality": measure.quality}
    raise TypeError(f"unknown measure {measure!r}")


def similarity_measure_from_config(config: Mapping) -> SimilarityMeasure:
    name = config["name"]
    if name == "mean":
        return MeanDistance()
    if name == "mmd":
        return MMD(bandwidth=config.get("bandwidth"))
    if name == "nnca":
        return NNCA()
    if name == "wasserstein":
        return Wasserstein(p=float(config.get("p", 2.0)))
    raise ValueError(f"unknown similarity measure name {name!r}")


def diversity_measure_from_config(config: Mapping) -> DiversityMeasure:
    name = config["name"]
    if name == "entropy":
        edges = config.get("edges")
        return Entropy(bins=int(config.get("bins", 32)),
                       edges=None if edges is None else tuple(edges))
    if name == "distance":
        return DistanceBased(kind=DistanceKind(config.get("distance", "ecs")))
    if name == "dpp":
        return DPP(bandwidth=config.get("bandwidth"), jitter=float(config.get("jitter", 0.0)))
    if name == "compression":
        return Compression(quality=int(config.get("quality", 75)))
    raise ValueError(f"unknown diversity measure name {name!r}")


def _rule_config(rule: AggregationRule) -> dict:
    if isinstance(rule, Min):
        return {"name": "min"}
    if isinstance(rule, Max):
        return {"name": "max"}
    return {"name": "weighted_average",
            "weights": {k.value: v for k, v in rule.weights.items()}}


def rule_from_config(config: Mapping) -> AggregationRule:
    name = config["name"]
    if name == "min":
        return Min()
    if name == "max":
        return Max()
    if name == "weighted_average":
        return WeightedAverage({FeatureKind(k): float(v)
                                for k, v in config["weights"].items()})
    raise ValueError(f"unknown aggregation rule name {name!r}")


def _auto_features(dataset: Dataset, include_doppler: bool) -> tuple[FeatureKind, ...]:
    features = list(DEFAULT_FEATURES)
    if include_doppler and dataset.sample_shape[2] > 1:
        features.extend([FeatureKind.DOPPLER, FeatureKind.DOPPLER_SPARSITY])
    return tuple(features)


def similarity_report(x: Dataset, y: Dataset, features=None,
                      kind: DistanceKind = DistanceKind.ECS,
                      measure: SimilarityMeasure = Wasserstein(),
                      rule: AggregationRule | None = None) -> QualityReport:
    """Per-feature dataset differences, normalized over this call's feature
    collection, aggregated into one score (default: equal-weight average)."""
    features = tuple(FeatureKind(f) for f in features) if features else DEFAULT_FEATURES
    if rule is None:
        rule = equal_weights(features)
    bundles_x = extract_features(x)
    bundles_y = extract_features(y)
    raw: dict[FeatureKind, float] = {}
    resolved: dict[str, dict] = {}
    for feat in features:
        fx = feature_values(bundles_x, feat)
        fy = feature_values(bundles_y, feat)
        value, extra = difference_from_features(fx, fy, kind, measure, feat)
        raw[feat] = value
        if extra:
            resolved[feat.value] = extra
    normalized = normalize_scores(raw)
    config = {
        "schema_version": SCHEMA_VERSION,
        "report": "similarity",
        "features": [f.value for f in features],
        "distance": DistanceKind(kind).value,
        "measure": _measure_config(measure),
        "resolved": resolved,
        "rule": _rule_config(rule),
        "normalization": "minmax",
    }
    return QualityReport("similarity", raw, normalized, aggregate(normalized, rule), config)


def replay_similarity_report(x: Dataset, y: Dataset, method_config: Mapping) -> QualityReport:
    """Recompute a similarity report from its recorded method_config.

    Resolved parameters (e.g. a median-heuristic bandwidth) are reused
    verbatim so the replay is bit-identical.
    """
    measure = similarity_measure_from_config(method_config["measure"])
    if isinstance(measure, MMD) and measure.bandwidth is None:
        resolved = method_config.get("resolved", {})
        bandwidths = {f: cfg["bandwidth"] for f, cfg in resolved.items() if "bandwidth" in cfg}
        features = [FeatureKind(f) for f in method_config["features"]]
        kind = DistanceKind(method_config["distance"])
        rule = rule_from_config(method_config["rule"])
        bundles_x = extract_features(x)
        bundles_y = extract_features(y)
        raw = {}
        for feat in features:
            per_feature_measure = MMD(bandwidth=bandwidths.get(feat.value))
            value, _ = difference_from_features(
                feature_values(bundles_x, feat), feature_values(bundles_y, feat),
                kind, per_feature_measure, feat)
            raw[feat] = value
        normalized = normalize_scores(raw)
        return QualityReport("similarity", raw, normalized,
                             aggregate(normalized, rule), dict(method_config))
    return similarity_report(
        x, y,
        features=[FeatureKind(f) for f in method_config["features"]],
        kind=DistanceKind(method_config["distance"]),
        measure=measure,
        rule=rule_from_config(method_config["rule"]),
    )


def default_diversity_measures(bins: int = 32) -> dict[FeatureKind, DiversityMeasure]:
    """Entropy for sparsity scalars, ECS mean pairwise distance for spectra."""
    out: dict[FeatureKind, DiversityMeasure] = {}
    for feat in FeatureKind:
        out[feat] = Entropy(bins=bins) if feat.is_scalar else DistanceBased(DistanceKind.ECS)
    return out


def diversity_report(dataset: Dataset, features=None,
                     measures: Mapping[FeatureKind, DiversityMeasure] | None = None,
                     rule: AggregationRule | None = None) -> QualityReport:
    """Per-feature diversity values, normalized and aggregated.

    Default features are PDP, APS and their sparsities, plus the Doppler
    pair when the data carries more than one snapshot.
    """
    if features is None:
        features = _auto_features(dataset, include_doppler=True)
    else:
        features = tuple(FeatureKind(f) for f in features)
    measure_map = dict(default_diversity_measures())
    if measures:
        measure_map.update({FeatureKind(k): v for k, v in measures.items()})
    if rule is None:
        rule = equal_weights(features)
    bundles = extract_features(dataset)
    raw: dict[FeatureKind, float] = {}
    resolved: dict[str, dict] = {}
    for feat in features:
        values = feature_values(bundles, feat)
        value, extra = diversity_from_features(values, feat, measure_map[feat])
        raw[feat] = value
        if extra:
            resolved[feat.value] = extra
    normalized = normalize_scores(raw)
    config = {
        "schema_version": SCHEMA_VERSION,
        "report": "diversity",
        "features": [f.value for f in features],
        "measures": {f.value: _measure_config(measure_map[f]) for f in features},
        "resolved": resolved,
        "rule": _rule_config(rule),
        "normalization": "minmax",
    }
    return QualityReport("diversity", raw, normalized, aggregate(normalized, rule), config)


def replay_diversity_report(dataset: Dataset, method_config: Mapping) -> QualityReport:
    features = [FeatureKind(f) for f in method_config["features"]]
    resolved = method_config.get("resolved", {})
    measures = {}
    for feat in features:
        cfg = dict(method_config["measures"][feat.value])
        cfg.update(resolved.get(feat.value, {}))
        measures[feat] = diversity_measure_from_config(cfg)
    return diversity_report(dataset, features=features, measures=measures,
                            rule=rule_from_config(method_config["rule"]))


@dataclass(frozen=True)
class SelectionResult:
    """Candidates ranked by ascending aggregate difference to the reference."""

    ranking: tuple[int, ...]
    selected: tuple[int, ...]
    aggregates: tuple[float, ...]          # index-aligned with candidates
    per_feature_raw: tuple[dict[FeatureKind, float], ...]
    per_feature_normalized: tuple[dict[FeatureKind, float], ...]
    rankings_by_feature: dict[FeatureKind, tuple[int, ...]] = field(default_factory=dict)
    method_config: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "ranking": list(self.ranking),
            "selected": list(self.selected),
            "aggregates": list(self.aggregates),
            "per_feature_raw": [{k.value: v for k, v in row.items()}
                                for row in self.per_feature_raw],
            "per_feature_normalized": [{k.value: v for k, v in row.items()}
                                       for row in self.per_feature_normalized],
            "rankings_by_feature": {k.value: list(v)
                                    for k, v in self.rankings_by_feature.items()},
            "method_config": self.method_config,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)


def _candidate_differences(reference: Dataset, candidates, features, kind, measure,
                           normalize_inputs: bool):
    if normalize_inputs:
        reference = normalize_max_abs(reference)
        candidates = [normalize_max_abs(c) for c in candidates]
    bundles_ref = extract_features(reference)
    raw_rows: list[dict[FeatureKind, float]] = []
    for candidate in candidates:
        bundles_c = extract_features(candidate)
        row = {}
        for feat in features:
            value, _ = difference_from_features(
                feature_values(bundles_ref, feat), feature_values(bundles_c, feat),
                kind, measure, feat)
            row[feat] = value
        raw_rows.append(row)
    return raw_rows


def _rank(scores) -> tuple[int, ...]:
    order = np.argsort(np.asarray(scores), kind="stable")  # ties fall back to index order
    return tuple(int(i) for i in order)


def rank_candidates(reference: Dataset, candidates, features=None,
                    kind: DistanceKind = DistanceKind.ECS,
                    measure: SimilarityMeasure = Wasserstein(),
                    rule: AggregationRule | None = None,
                    normalize_inputs: bool = False):
    """Shared core of the selection entry points: per-candidate differences,
    per-feature min-max normalization across the candidate collection, and
    an aggregate-sorted ranking."""
    candidates = list(candidates)
    if not candidates:
        raise ValueError("candidate list is empty")
    features = tuple(FeatureKind(f) for f in features) if features else DEFAULT_FEATURES
    if rule is None:
        rule = equal_weights(features)
    raw_rows = _candidate_differences(reference, candidates, features, kind, measure,
                                      normalize_inputs)
    normalized_by_feature = {
        feat: normalize_scores({i: row[feat] for i, row in enumerate(raw_rows)})
        for feat in features
    }
    normalized_rows = [{feat: normalized_by_feature[feat][i] for feat in features}
                       for i in range(len(candidates))]
    aggregates = [aggregate(row, rule) for row in normalized_rows]
    ranking = _rank(aggregates)
    rankings_by_feature = {
        feat: _rank([raw_rows[i][feat] for i in range(len(candidates))])
        for feat in features
    }
    config = {
        "schema_version": SCHEMA_VERSION,
        "report": "selection",
        "features": [f.value for f in features],
        "distance": DistanceKind(kind).value,
        "measure": _measure_config(measure),
        "rule": _rule_config(rule),
        "normalize_inputs": normalize_inputs,
        "normalization": "minmax",
    }
    return ranking, aggregates, raw_rows, normalized_rows, rankings_by_feature, config


def augment_select(reference: Dataset, candidates, k: int, features=None,
                   kind: DistanceKind = DistanceKind.ECS,
                   measure: SimilarityMeasure = Wasserstein(),
                   rule: AggregationRule | None = None,
                   normalize_inputs: bool = False) -> SelectionResult:
    """Rank candidates by aggregate difference to the reference; keep the
    first k. Ties break deterministically by candidate index."""
    candidates = list(candidates)
    if not candidates:
        raise ValueError("candidate list is empty")
    if not 1 <= k <= len(candidates):
        raise ValueError(f"k must lie in 1..{len(candidates)}, got {k}")
    (ranking, aggregates, raw_rows, normalized_rows,
     rankings_by_feature, config) = rank_candidates(
        reference, candidates, features, kind, measure, rule, normalize_inputs)
    config["k"] = k
    return SelectionResult(
        ranking=ranking, selected=ranking[:k], aggregates=tuple(aggregates),
        per_feature_raw=tuple(raw_rows), per_feature_normalized=tuple(normalized_rows),
        rankings_by_feature=rankings_by_feature, method_config=config)


def threshold_select(reference: Dataset, candidates, threshold: float, features=None,
                     kind: DistanceKind = DistanceKind.ECS,
                     measure: SimilarityMeasure = Wasserstein(),
                     rule: AggregationRule | None = None,
                     normalize_inputs: bool = False) -> SelectionResult:
    """Keep every candidate whose aggregate difference is at most the threshold."""
    (ranking, aggregates, raw_rows, normalized_rows,
     rankings_by_feature, config) = rank_candidates(
        reference, candidates, features, kind, measure, rule, normalize_inputs)
    config["threshold"] = float(threshold)
    selected = tuple(i for i in ranking if aggregates[i] <= threshold)
    return SelectionResult(
        ranking=ranking, selected=selected, aggregates=tuple(aggregates),
        per_feature_raw=tuple(raw_rows), per_feature_normalized=tuple(normalized_rows),
        rankings_by_feature=rankings_by_feature, method_config=config)
