"""Synthetic geometric multipath channel generator.

Produces controlled CSI corpora for exercising the quality metrics: each
sample is a sum of discrete propagation paths with random delays, angles,
phases and Doppler shifts over a uniform planar array with half-wavelength
spacing. The RMS delay spread of a sample can be pinned exactly by an
affine rescale of its delays, which is what the corpus builders use to
sweep delay-spread settings.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass

import numpy as np

from .dataset import ChannelSample, Dataset, _check_seed

SPEED_OF_LIGHT = 299792458.0


@dataclass(frozen=True)
class SynthConfig:
    carrier_freq_hz: float = 2.16e9
    bandwidth_hz: float = 20e6
    subcarrier_spacing_hz: float = 60e3
    n_subcarriers: int = 52
    antenna_grid: tuple[int, int] = (8, 8)
    n_snapshots: int = 1
    snapshot_rate_hz: float = 200.0
    user_speed_mps: float = 3.0
    n_samples: int = 200
    seed: int = 0

    def __post_init__(self):
        if min(self.carrier_freq_hz, self.bandwidth_hz,
               self.subcarrier_spacing_hz, self.snapshot_rate_hz) <= 0:
            raise ValueError("rates and frequencies must be positive")
        if self.n_subcarriers < 2:
            raise ValueError("need at least 2 subcarriers")
        n_v, n_h = self.antenna_grid
        if n_v < 1 or n_h < 1:
            raise ValueError("antenna grid dimensions must be >= 1")
        if self.n_snapshots < 1 or self.n_samples < 1:
            raise ValueError("snapshot and sample counts must be >= 1")
        if self.user_speed_mps < 0:
            raise ValueError("user speed must be nonnegative")
        object.__setattr__(self, "seed", _check_seed(self.seed))
        object.__setattr__(self, "antenna_grid", (int(n_v), int(n_h)))


@dataclass(frozen=True)
class PathRanges:
    """Uniform sampling intervals for per-path parameters.

    ``rms_ds_window_ns`` = (offset, width) draws a target RMS delay spread
    from [offset, offset + width] and rescales the drawn delays to hit it
    exactly. ``power_concentration`` is the Dirichlet shape of the
    normalized path-power draw: 1 gives i.i.d. exponential gains, larger
    values pull the powers toward equal, which keeps the delay-spread ->
    spectrum mapping tight enough for metric sweeps.
    """

    path_count: tuple[int, int] = (8, 16)
    delay_ns: tuple[float, float] = (0.0, 2000.0)
    aod_deg: tuple[float, float] = (-90.0, 90.0)
    zod_deg: tuple[float, float] = (0.0, 180.0)
    rms_ds_window_ns: tuple[float, float] | None = None
    power_concentration: float = 8.0

    def __post_init__(self):
        lo, hi = self.path_count
        if not 1 <= lo <= hi:
            raise ValueError(f"path count interval must satisfy 1 <= lo <= hi, got {self.path_count}")
        if not 0 <= self.delay_ns[0] <= self.delay_ns[1]:
            raise ValueError(f"bad delay interval {self.delay_ns}")
        if not -90 <= self.aod_deg[0] <= self.aod_deg[1] <= 90:
            raise ValueError(f"AOD interval must lie in [-90, 90], got {self.aod_deg}")
        if not 0 <= self.zod_deg[0] <= self.zod_deg[1] <= 180:
            raise ValueError(f"ZOD interval must lie in [0, 180], got {self.zod_deg}")
        if self.rms_ds_window_ns is not None:
            off, width = self.rms_ds_window_ns
            if off < 0 or width < 0:
                raise ValueError(f"bad RMS delay-spread window {self.rms_ds_window_ns}")
        if not self.power_concentration > 0:
            raise ValueError(f"power concentration must be positive, got {self.power_concentration}")
        object.__setattr__(self, "path_count", (int(lo), int(hi)))


@dataclass(frozen=True)
class PathSet:
    """Per-path parameters of one channel draw; powers are normalized to unit sum."""

    delay_s: np.ndarray
    power: np.ndarray
    phase_rad: np.ndarray
    aod_deg: np.ndarray
    zod_deg: np.ndarray
    doppler_hz: np.ndarray


def rms_delay_spread(paths: PathSet) -> float:
    """Power-weighted standard deviation of path delays, in seconds."""
    mean = float(np.dot(paths.power, paths.delay_s))
    second = float(np.dot(paths.power, paths.delay_s ** 2))
    return float(np.sqrt(max(second - mean ** 2, 0.0)))


_ALIAS_REDRAW_TRIES = 100


def _draw_windowed_delays(ranges: PathRanges, target_s: float, max_delay_s: float,
                          rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Delays anchored at zero and rescaled to the exact spread target.

    Rescaling can push delays past the longest resolvable excess delay, where
    they would alias in the delay domain; such draws are rejected and redrawn
    (bounded tries, last draw kept if none fits).
    """
    lo, hi = ranges.path_count
    if target_s > 0 and hi < 2:
        raise ValueError("a positive RMS delay-spread target needs >= 2 paths")
    delays = power = None
    for _ in range(_ALIAS_REDRAW_TRIES):
        count = int(rng.integers(lo, hi + 1))
        if target_s > 0 and count < 2:
            continue
        cand = rng.uniform(ranges.delay_ns[0], ranges.delay_ns[1], count) * 1e-9
        raw = rng.gamma(ranges.power_concentration, 1.0, count)
        cand_power = raw / raw.sum()
        cand = cand - cand.min()
        if target_s == 0.0:
            return np.zeros_like(cand), cand_power
        mean = float(np.dot(cand_power, cand))
        spread = float(np.sqrt(max(float(np.dot(cand_power, cand ** 2)) - mean ** 2, 0.0)))
        if spread == 0.0:
            continue
        cand = cand * (target_s / spread)
        delays, power = cand, cand_power
        if cand.max() <= max_delay_s:
            break
    if delays is None:
        raise ValueError("could not draw delays with positive spread from the given ranges")
    return delays, power


def draw_paths(cfg: SynthConfig, ranges: PathRanges, rng: np.random.Generator) -> PathSet:
    """Draw one path set: uniform count/delays/angles, Dirichlet powers.

    With an RMS delay-spread window the delays are anchored at zero and
    rescaled so the spread matches the drawn target exactly; a positive
    target forces at least two paths.
    """
    if ranges.rms_ds_window_ns is not None:
        off, width = ranges.rms_ds_window_ns
        target_s = rng.uniform(off, off + width) * 1e-9
        max_delay_s = (cfg.n_subcarriers - 1) / (cfg.n_subcarriers * cfg.subcarrier_spacing_hz)
        delays, power = _draw_windowed_delays(ranges, target_s, max_delay_s, rng)
    else:
        count = int(rng.integers(ranges.path_count[0], ranges.path_count[1] + 1))
        delays = rng.uniform(ranges.delay_ns[0], ranges.delay_ns[1], count) * 1e-9
        raw = rng.gamma(ranges.power_concentration, 1.0, count)
        power = raw / raw.sum()
    count = power.size
    phases = rng.uniform(0.0, 2.0 * np.pi, count)
    aod = rng.uniform(ranges.aod_deg[0], ranges.aod_deg[1], count)
    zod = rng.uniform(ranges.zod_deg[0], ranges.zod_deg[1], count)
    wavelength = SPEED_OF_LIGHT / cfg.carrier_freq_hz
    travel = rng.uniform(0.0, 2.0 * np.pi, count)
    doppler = (cfg.user_speed_mps / wavelength) * np.cos(travel)
    return PathSet(delay_s=delays, power=power, phase_rad=phases,
                   aod_deg=aod, zod_deg=zod, doppler_hz=doppler)


def steering_vector(antenna_grid: tuple[int, int], aod_deg: float, zod_deg: float) -> np.ndarray:
    """Half-wavelength uniform planar array response, flattened row-major.

    Element (r, c) has phase pi * (r cos(zod) + c sin(zod) sin(aod)).
    """
    n_v, n_h = antenna_grid
    zod = np.deg2rad(zod_deg)
    aod = np.deg2rad(aod_deg)
    rows = np.arange(n_v)[:, None] * np.cos(zod)
    cols = np.arange(n_h)[None, :] * np.sin(zod) * np.sin(aod)
    return np.exp(1j * np.pi * (rows + cols)).ravel()


def render_sample(cfg: SynthConfig, paths: PathSet) -> ChannelSample:
    """Superpose path contributions into an (A, F, T) channel sample."""
    freqs = np.arange(cfg.n_subcarriers) * cfg.subcarrier_spacing_hz
    times = np.arange(cfg.n_snapshots) / cfg.snapshot_rate_hz
    h = np.zeros((cfg.antenna_grid[0] * cfg.antenna_grid[1],
                  cfg.n_subcarriers, cfg.n_snapshots), dtype=np.complex128)
    for p in range(paths.power.size):
        gain = np.sqrt(paths.power[p]) * np.exp(1j * paths.phase_rad[p])
        spatial = steering_vector(cfg.antenna_grid, paths.aod_deg[p], paths.zod_deg[p])
        spectral = np.exp(-2j * np.pi * freqs * paths.delay_s[p])
        temporal = np.exp(2j * np.pi * paths.doppler_hz[p] * times)
        h += gain * spatial[:, None, None] * spectral[None, :, None] * temporal[None, None, :]
    return ChannelSample(h, cfg.antenna_grid)


def generate_sample(cfg: SynthConfig, ranges: PathRanges,
                    rng: np.random.Generator) -> ChannelSample:
    return render_sample(cfg, draw_paths(cfg, ranges, rng))


def _ranges_metadata(cfg: SynthConfig, ranges: PathRanges) -> dict[str, str]:
    return {
        "config": json.dumps(dataclasses.asdict(cfg), sort_keys=True),
        "ranges": json.dumps(dataclasses.asdict(ranges), sort_keys=True),
        "seed": str(cfg.seed),
    }


def generate_dataset(cfg: SynthConfig, ranges: PathRanges,
                     extra_metadata: dict[str, str] | None = None) -> Dataset:
    """Generate cfg.n_samples independent samples.

    Each sample draws from its own substream spawned from (seed, index), so
    serial and parallel generation agree. Metadata records the full recipe
    and the achieved RMS delay-spread statistics.
    """
    root = np.random.SeedSequence(cfg.seed)
    samples = []
    spreads = []
    for child in root.spawn(cfg.n_samples):
        rng = np.random.default_rng(child)
        paths = draw_paths(cfg, ranges, rng)
        spreads.append(rms_delay_spread(paths) * 1e9)
        samples.append(render_sample(cfg, paths))
    metadata = _ranges_metadata(cfg, ranges)
    metadata.update({
        "rms_ds_mean_ns": repr(float(np.mean(spreads))),
        "rms_ds_min_ns": repr(float(np.min(spreads))),
        "rms_ds_max_ns": repr(float(np.max(spreads))),
    })
    if extra_metadata:
        metadata.update(extra_metadata)
    return Dataset(tuple(samples), metadata)


def _dataset_seeds(seed: int, n: int) -> list[int]:
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(n, dtype=np.uint64)]


def delay_window_corpus(cfg: SynthConfig, offsets_ns, width_ns: float = 2000.0,
                        ranges: PathRanges | None = None) -> list[Dataset]:
    """One dataset per RMS delay-spread window offset, shared width.

    The default sweep for similarity experiments uses offsets 0..3600 ns in
    steps of 400 ns with a 2000 ns window; a zero width pins each dataset
    to an exact delay-spread value, which suits diversity sweeps.
    """
    offsets = [float(o) for o in offsets_ns]
    if any(o < 0 for o in offsets):
        raise ValueError("offsets must be nonnegative")
    base = ranges if ranges is not None else PathRanges()
    seeds = _dataset_seeds(cfg.seed, len(offsets))
    out = []
    for offset, seed in zip(offsets, seeds):
        windowed = dataclasses.replace(base, rms_ds_window_ns=(offset, float(width_ns)))
        dataset_cfg = dataclasses.replace(cfg, seed=seed)
        out.append(generate_dataset(dataset_cfg, windowed,
                                    {"rms_ds_offset_ns": repr(offset)}))
    return out


DEFAULT_WINDOW_OFFSETS_NS = tuple(float(o) for o in range(0, 4000, 400))

_POOL_DELAY_WIDTHS_NS = (100.0, 200.0, 300.0, 400.0, 1000.0)
_POOL_ANGLE_WIDTHS_DEG = (10.0, 20.0, 30.0, 40.0, 100.0)


def random_ranges_pool(cfg: SynthConfig, n_datasets: int = 100) -> list[Dataset]:
    """Candidate pool: every dataset gets independently drawn parameter ranges.

    Path count spans [floor(u)-2, floor(u)+5] for u ~ U[1, 10] with the
    floor clamped to 1; delay, AOD and ZOD windows are random centers with
    random widths, clamped to their domains.
    """
    if n_datasets < 1:
        raise ValueError("need at least one dataset")
    root = np.random.SeedSequence(cfg.seed)
    range_seq, data_seq = root.spawn(2)
    range_rng = np.random.default_rng(range_seq)
    seeds = [int(s) for s in data_seq.generate_state(n_datasets, dtype=np.uint64)]
    out = []
    for k in range(n_datasets):
        n_p = float(range_rng.uniform(1.0, 10.0))
        count_lo = max(1, int(np.floor(n_p)) - 2)
        count_hi = int(np.floor(n_p)) + 5

        center_t = float(range_rng.uniform(0.0, 2500.0))
        width_t = float(range_rng.choice(_POOL_DELAY_WIDTHS_NS))
        delay = (max(0.0, center_t - width_t / 2), center_t + width_t / 2)

        center_a = float(range_rng.uniform(-90.0, 90.0))
        width_a = float(range_rng.choice(_POOL_ANGLE_WIDTHS_DEG))
        aod = (max(-90.0, center_a - width_a / 2), min(90.0, center_a + width_a / 2))

        center_z = float(range_rng.uniform(0.0, 180.0))
        width_z = float(range_rng.choice(_POOL_ANGLE_WIDTHS_DEG))
        zod = (max(0.0, center_z - width_z / 2), min(180.0, center_z + width_z / 2))

        ranges = PathRanges(path_count=(count_lo, count_hi), delay_ns=delay,
                            aod_deg=aod, zod_deg=zod)
        dataset_cfg = dataclasses.replace(cfg, seed=seeds[k])
        out.append(generate_dataset(dataset_cfg, ranges, {"pool_index": str(k)}))
    return out


GRID_PATH_COUNTS = (2, 4, 6, 8, 12, 15, 18)
GRID_DELAYS_NS = (200.0, 800.0, 1400.0, 2000.0)
GRID_ANGLE_SPANS_DEG = (80.0, 120.0, 160.0)


def range_grid_corpus(cfg: SynthConfig) -> list[Dataset]:
    """Full factorial sweep over path count, delay span and angle span.

    7 x 4 x 3 = 84 datasets, enumerated with path count outermost and angle
    span innermost.
    """
    seeds = _dataset_seeds(cfg.seed, len(GRID_PATH_COUNTS) * len(GRID_DELAYS_NS)
                           * len(GRID_ANGLE_SPANS_DEG))
    out = []
    k = 0
    for n_p in GRID_PATH_COUNTS:
        for n_t in GRID_DELAYS_NS:
            for n_a in GRID_ANGLE_SPANS_DEG:
                ranges = PathRanges(
                    path_count=(1, n_p),
                    delay_ns=(0.0, n_t),
                    aod_deg=(-n_a / 2, n_a / 2),
                    zod_deg=(90.0 - n_a / 2, 90.0 + n_a / 2),
                )
                dataset_cfg = dataclasses.replace(cfg, seed=seeds[k])
                out.append(generate_dataset(dataset_cfg, ranges, {
                    "grid_path_count": str(n_p),
                    "grid_delay_ns": repr(n_t),
                    "grid_angle_span_deg": repr(n_a),
                }))
                k += 1
    return out


def wide_ranges() -> PathRanges:
    """Union of the factorial-grid extremes; a stand-in for broader test data."""
    return PathRanges(path_count=(1, 18), delay_ns=(0.0, 2000.0),
                      aod_deg=(-80.0, 80.0), zod_deg=(10.0, 170.0))
