"""Command-line surface: generation, feature caches, similarity and
diversity reports, candidate selection, and corpus sweeps.

stdout carries only machine-readable payload (JSON or CSV); diagnostics go
to stderr. Exit codes: 0 success, 1 computation error, 2 usage error.
Every command prints or writes output derived solely from its arguments
and seed, so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import sys
from pathlib import Path

from . import synth
from .dataset import CsidFormatError, normalize_max_abs, read_dataset, write_dataset
from .distances import DistanceKind
from .diversity import DPP, Compression, DistanceBased, Entropy
from .features import FeatureKind, bundles_to_json, extract_features
from .similarity import MMD, NNCA, MeanDistance, Wasserstein
from .workflow import (Max, Min, augment_select, diversity_report, normalize_scores,
                       similarity_report, threshold_select)

PRESETS = ("appendix-a", "appendix-b-pool", "appendix-c-grid", "uma-proxy")
_MEASURES = ("mean", "mmd", "nnca", "wasserstein")
_DIVERSITY_MEASURES = ("distance", "dpp", "compression")


def _parse_interval(text: str, name: str) -> tuple[float, float]:
    try:
        lo, hi = (float(part) for part in text.split(":"))
    except ValueError:
        raise _UsageError(f"--{name} expects LO:HI, got {text!r}")
    return lo, hi


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        n_v, n_h = (int(part) for part in text.lower().split("x"))
    except ValueError:
        raise _UsageError(f"--grid expects ROWSxCOLS, got {text!r}")
    return n_v, n_h


class _UsageError(Exception):
    pass


def _similarity_measure(args):
    if args.measure == "mean":
        return MeanDistance()
    if args.measure == "mmd":
        return MMD(bandwidth=args.bandwidth)
    if args.measure == "nnca":
        return NNCA()
    return Wasserstein(p=args.p)


def _rule(args):
    if args.rule == "min":
        return Min()
    if args.rule == "max":
        return Max()
    return None  # reports default to an equal-weight average


def _features_arg(text: str | None):
    if not text:
        return None
    try:
        return [FeatureKind(part.strip()) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        valid = ", ".join(k.value for k in FeatureKind)
        raise _UsageError(f"{exc}; valid features: {valid}")


def _emit(payload: str, out: str | None) -> None:
    if out:
        Path(out).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)
        if not payload.endswith("\n"):
            sys.stdout.write("\n")


def _report_payload(report, fmt: str) -> str:
    if fmt == "json":
        return report.to_json()
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["field", "feature", "value"])
    for feat, value in report.per_feature.items():
        writer.writerow(["raw", feat.value, repr(value)])
    for feat, value in report.normalized.items():
        writer.writerow(["normalized", feat.value, repr(value)])
    writer.writerow(["aggregate", "", repr(report.aggregate)])
    return buf.getvalue()


def _base_config(args) -> synth.SynthConfig:
    grid = _parse_grid(args.grid) if args.grid else None
    defaults = synth.SynthConfig()
    return synth.SynthConfig(
        antenna_grid=grid or defaults.antenna_grid,
        n_snapshots=args.snapshots,
        n_samples=args.samples,
        seed=args.seed,
    )


def cmd_generate(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    cfg = _base_config(args)

    if args.preset == "appendix-a":
        offsets = ([float(o) for o in args.offsets.split(",")] if args.offsets
                   else list(synth.DEFAULT_WINDOW_OFFSETS_NS))
        datasets = synth.delay_window_corpus(cfg, offsets, width_ns=args.width)
        stems = [f"appendix-a-{int(o):05d}ns" for o in offsets]
    elif args.preset == "appendix-b-pool":
        if args.grid is None:
            cfg = dataclasses.replace(cfg, antenna_grid=(2, 8))
        datasets = synth.random_ranges_pool(cfg, n_datasets=args.datasets)
        stems = [f"appendix-b-pool-{k:03d}" for k in range(len(datasets))]
    elif args.preset == "appendix-c-grid":
        if args.grid is None:
            cfg = dataclasses.replace(cfg, antenna_grid=(2, 8))
        datasets = synth.range_grid_corpus(cfg)
        stems = [f"appendix-c-grid-{k:03d}" for k in range(len(datasets))]
    elif args.preset == "uma-proxy":
        if args.grid is None:
            cfg = dataclasses.replace(cfg, antenna_grid=(2, 8))
        datasets = [synth.generate_dataset(cfg, synth.wide_ranges())]
        stems = ["uma-proxy-000"]
    else:
        ranges = synth.PathRanges(
            path_count=tuple(int(v) for v in _parse_interval(args.paths, "paths")),
            delay_ns=_parse_interval(args.delay_ns, "delay-ns"),
            aod_deg=_parse_interval(args.aod, "aod"),
            zod_deg=_parse_interval(args.zod, "zod"),
            rms_ds_window_ns=(_parse_interval(args.rms_window, "rms-window")
                              if args.rms_window else None),
        )
        datasets = [synth.generate_dataset(cfg, ranges)]
        stems = ["custom-000"]

    if args.normalize:
        datasets = [normalize_max_abs(d) for d in datasets]

    manifest_files = []
    for dataset, stem in zip(datasets, stems):
        path = out_dir / f"{stem}.csid"
        write_dataset(dataset, path)
        entry = {
            "path": str(path),
            "n_samples": len(dataset),
            "seed": dataset.metadata.get("seed"),
            "rms_ds_mean_ns": dataset.metadata.get("rms_ds_mean_ns"),
            "rms_ds_min_ns": dataset.metadata.get("rms_ds_min_ns"),
            "rms_ds_max_ns": dataset.metadata.get("rms_ds_max_ns"),
        }
        manifest_files.append(entry)
    manifest = {
        "schema_version": 1,
        "command": "generate",
        "preset": args.preset,
        "seed": args.seed,
        "samples": args.samples,
        "snapshots": args.snapshots,
        "grid": args.grid,
        "normalize": bool(args.normalize),
        "out": str(out_dir),
        "files": manifest_files,
    }
    _emit(json.dumps(manifest, indent=2), None)
    return 0


def cmd_features(args) -> int:
    dataset = read_dataset(args.input)
    payload = json.dumps(bundles_to_json(extract_features(dataset)), indent=2)
    _emit(payload, args.out)
    return 0


def cmd_similarity(args) -> int:
    x = read_dataset(args.x)
    y = read_dataset(args.y)
    if args.normalize:
        x, y = normalize_max_abs(x), normalize_max_abs(y)
    features = _features_arg(args.features)
    report = similarity_report(
        x, y,
        features=features,
        kind=DistanceKind(args.distance),
        measure=_similarity_measure(args),
        rule=_rule(args),
    )
    _emit(_report_payload(report, args.format), args.out)
    return 0


def cmd_diversity(args) -> int:
    dataset = read_dataset(args.input)
    features = _features_arg(args.features)
    measures = {}
    spectral = {"distance": DistanceBased(DistanceKind(args.distance)),
                "dpp": DPP(bandwidth=args.bandwidth, jitter=args.jitter),
                "compression": Compression(quality=args.quality)}[args.measure]
    for feat in FeatureKind:
        measures[feat] = Entropy(bins=args.bins) if feat.is_scalar else spectral
    report = diversity_report(dataset, features=features, measures=measures,
                              rule=_rule(args))
    _emit(_report_payload(report, args.format), args.out)
    return 0


def _resolve_candidates(patterns) -> list[Path]:
    paths: list[Path] = []
    for pattern in patterns:
        p = Path(pattern)
        if p.exists():
            paths.append(p)
        else:
            paths.extend(sorted(p.parent.glob(p.name)))
    return paths


def cmd_select(args) -> int:
    paths = _resolve_candidates(args.candidates)
    if not paths:
        raise _UsageError("no candidate datasets match the given paths")
    if (args.k is None) == (args.threshold is None):
        raise _UsageError("exactly one of --k and --threshold is required")
    reference = read_dataset(args.reference)
    candidates = [read_dataset(p) for p in paths]
    features = _features_arg(args.features)
    kwargs = dict(features=features, kind=DistanceKind(args.distance),
                  measure=_similarity_measure(args), normalize_inputs=args.normalize)
    if args.k is not None:
        if not 1 <= args.k <= len(candidates):
            raise _UsageError(f"--k must lie in 1..{len(candidates)}")
        result = augment_select(reference, candidates, args.k, **kwargs)
    else:
        result = threshold_select(reference, candidates, args.threshold, **kwargs)
    payload = result.to_json_dict()
    payload["candidate_paths"] = [str(p) for p in paths]
    payload["selected_paths"] = [str(paths[i]) for i in result.selected]
    _emit(json.dumps(payload, indent=2), args.out)
    return 0


def cmd_sweep(args) -> int:
    corpus_dir = Path(args.corpus)
    paths = sorted(corpus_dir.glob("*.csid"))
    if len(paths) < 2:
        raise _UsageError(f"need at least 2 CSID files in {corpus_dir}")
    datasets = [read_dataset(p) for p in paths]
    names = [p.stem for p in paths]
    features = _features_arg(args.features) or [FeatureKind.PDP]

    rows = []
    if args.mode == "pairwise":
        measure = _similarity_measure(args)
        kind = DistanceKind(args.distance)
        from .features import feature_values
        from .similarity import difference_from_features
        bundles = [extract_features(d) for d in datasets]
        for feat in features:
            values = {}
            for i in range(len(datasets)):
                for j in range(i + 1, len(datasets)):
                    value, _ = difference_from_features(
                        feature_values(bundles[i], feat), feature_values(bundles[j], feat),
                        kind, measure, feat)
                    values[(i, j)] = value
            norm = normalize_scores(values)
            for (i, j), value in values.items():
                rows.append([names[i], names[j], feat.value, args.measure,
                             repr(value), repr(norm[(i, j)])])
    else:
        spectral = {"distance": DistanceBased(DistanceKind(args.distance)),
                    "dpp": DPP(bandwidth=args.bandwidth, jitter=args.jitter),
                    "compression": Compression(quality=args.quality)}[args.diversity_measure]
        from .diversity import dataset_diversity
        for feat in features:
            values = {}
            for i, dataset in enumerate(datasets):
                measure = Entropy(bins=args.bins) if feat.is_scalar else spectral
                values[i] = dataset_diversity(dataset, feat, measure)
            norm = normalize_scores(values)
            for i, value in values.items():
                rows.append([names[i], "", feat.value,
                             "entropy" if feat.is_scalar else args.diversity_measure,
                             repr(value), repr(norm[i])])

    rows.sort()
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["dataset_i", "dataset_j", "feature", "measure", "raw", "normalized"])
    writer.writerows(rows)
    _emit(buf.getvalue(), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="csidqa",
        description="Quality metrics for channel-state-information datasets.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="synthesize CSID corpora")
    gen.add_argument("--preset", choices=PRESETS)
    gen.add_argument("--out", required=True, help="output directory")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--samples", type=int, default=200)
    gen.add_argument("--snapshots", type=int, default=1)
    gen.add_argument("--datasets", type=int, default=100,
                     help="pool size for appendix-b-pool")
    gen.add_argument("--grid", help="antenna grid ROWSxCOLS")
    gen.add_argument("--offsets", help="comma list of window offsets (ns), appendix-a")
    gen.add_argument("--width", type=float, default=2000.0,
                     help="delay-spread window width (ns), appendix-a")
    gen.add_argument("--normalize", action="store_true",
                     help="scale each sample by its peak magnitude")
    gen.add_argument("--paths", help="explicit path-count interval LO:HI")
    gen.add_argument("--delay-ns", dest="delay_ns", help="explicit delay interval LO:HI (ns)")
    gen.add_argument("--aod", help="explicit AOD interval LO:HI (deg)")
    gen.add_argument("--zod", help="explicit ZOD interval LO:HI (deg)")
    gen.add_argument("--rms-window", dest="rms_window",
                     help="delay-spread window OFFSET:WIDTH (ns)")
    gen.set_defaults(func=cmd_generate)

    feat = sub.add_parser("features", help="extract a feature cache as JSON")
    feat.add_argument("input")
    feat.add_argument("--out")
    feat.set_defaults(func=cmd_features)

    sim = sub.add_parser("similarity", help="dataset-difference report for two CSID files")
    sim.add_argument("x")
    sim.add_argument("y")
    sim.add_argument("--features", help="comma list, default pdp,aps,pdp_sparsity,aps_sparsity")
    sim.add_argument("--distance", choices=[k.value for k in DistanceKind], default="ecs")
    sim.add_argument("--measure", choices=_MEASURES, default="wasserstein")
    sim.add_argument("--p", type=float, default=2.0, help="Wasserstein order")
    sim.add_argument("--bandwidth", type=float, help="MMD kernel bandwidth (default: median)")
    sim.add_argument("--rule", choices=("min", "max", "average"), default="average")
    sim.add_argument("--normalize", action="store_true")
    sim.add_argument("--format", choices=("json", "csv"), default="json")
    sim.add_argument("--out")
    sim.set_defaults(func=cmd_similarity)

    div = sub.add_parser("diversity", help="diversity report for one CSID file")
    div.add_argument("input")
    div.add_argument("--features", help="comma list, default auto")
    div.add_argument("--measure", choices=_DIVERSITY_MEASURES, default="distance",
                     help="measure for spectral features; sparsity always uses entropy")
    div.add_argument("--distance", choices=[k.value for k in DistanceKind], default="ecs")
    div.add_argument("--bins", type=int, default=32)
    div.add_argument("--bandwidth", type=float, help="DPP kernel bandwidth (default: median)")
    div.add_argument("--jitter", type=float, default=0.0)
    div.add_argument("--quality", type=int, default=75)
    div.add_argument("--rule", choices=("min", "max", "average"), default="average")
    div.add_argument("--format", choices=("json", "csv"), default="json")
    div.add_argument("--out")
    div.set_defaults(func=cmd_diversity)

    sel = sub.add_parser("select", help="rank candidates against a reference dataset")
    sel.add_argument("candidates", nargs="+", help="candidate CSID paths or glob patterns")
    sel.add_argument("--reference", required=True)
    sel.add_argument("--k", type=int)
    sel.add_argument("--threshold", type=float)
    sel.add_argument("--features")
    sel.add_argument("--distance", choices=[k.value for k in DistanceKind], default="ecs")
    sel.add_argument("--measure", choices=_MEASURES, default="wasserstein")
    sel.add_argument("--p", type=float, default=2.0)
    sel.add_argument("--bandwidth", type=float)
    sel.add_argument("--normalize", action="store_true",
                     help="max-abs normalize reference and candidates")
    sel.add_argument("--out")
    sel.set_defaults(func=cmd_select)

    swp = sub.add_parser("sweep", help="long-form CSV over a corpus directory")
    swp.add_argument("corpus", help="directory of CSID files")
    swp.add_argument("--mode", choices=("pairwise", "diversity"), default="pairwise")
    swp.add_argument("--features", help="comma list, default pdp")
    swp.add_argument("--distance", choices=[k.value for k in DistanceKind], default="ecs")
    swp.add_argument("--measure", choices=_MEASURES, default="wasserstein")
    swp.add_argument("--diversity-measure", dest="diversity_measure",
                     choices=_DIVERSITY_MEASURES, default="distance")
    swp.add_argument("--p", type=float, default=2.0)
    swp.add_argument("--bandwidth", type=float)
    swp.add_argument("--jitter", type=float, default=0.0)
    swp.add_argument("--bins", type=int, default=32)
    swp.add_argument("--quality", type=int, default=75)
    swp.add_argument("--out")
    swp.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "generate" and not args.preset:
        explicit = all(getattr(args, name) for name in ("paths", "delay_ns", "aod", "zod"))
        if not explicit:
            parser.error("generate needs --preset or all of --paths/--delay-ns/--aod/--zod")
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CsidFormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
