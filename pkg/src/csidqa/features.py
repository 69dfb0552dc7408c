"""Spectral feature extraction from channel samples.

Each sample yields three unit-sum power spectra via discrete Fourier
transforms -- delay-domain power (PDP) along subcarriers, angular power
(APS) over the antenna grid, Doppler power along snapshots -- plus a
Hoyer sparsity scalar per spectrum. Spectra are normalized to unit sum so
cumulative-spectrum distances compare shapes, not power scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .dataset import ChannelSample, Dataset


class DegenerateInputError(ValueError):
    """Raised for inputs whose spectra are undefined (e.g. an all-zero sample)."""


class FeatureKind(str, Enum):
    PDP = "pdp"
    APS = "aps"
    DOPPLER = "doppler"
    PDP_SPARSITY = "pdp_sparsity"
    APS_SPARSITY = "aps_sparsity"
    DOPPLER_SPARSITY = "doppler_sparsity"

    @property
    def is_scalar(self) -> bool:
        return self in _SCALAR_KINDS


_SCALAR_KINDS = frozenset({FeatureKind.PDP_SPARSITY, FeatureKind.APS_SPARSITY,
                           FeatureKind.DOPPLER_SPARSITY})
SPECTRAL_KINDS = (FeatureKind.PDP, FeatureKind.APS, FeatureKind.DOPPLER)
SCALAR_KINDS = (FeatureKind.PDP_SPARSITY, FeatureKind.APS_SPARSITY,
                FeatureKind.DOPPLER_SPARSITY)
DEFAULT_FEATURES = (FeatureKind.PDP, FeatureKind.APS,
                    FeatureKind.PDP_SPARSITY, FeatureKind.APS_SPARSITY)


@dataclass(frozen=True)
class FeatureBundle:
    """Per-sample spectra and their sparsities.

    Doppler entries are None for single-snapshot samples (T == 1), where no
    Doppler spectrum exists.
    """

    pdp: np.ndarray
    aps: np.ndarray
    doppler: np.ndarray | None
    pdp_sparsity: float
    aps_sparsity: float
    doppler_sparsity: float | None

    def get(self, kind: FeatureKind):
        value = getattr(self, kind.value)
        if value is None:
            raise ValueError(f"feature {kind.value} unavailable (single-snapshot sample)")
        return value


def _normalize_power(power: np.ndarray, what: str) -> np.ndarray:
    total = float(power.sum())
    if total <= 0.0:
        raise DegenerateInputError(f"{what} undefined for all-zero sample")
    out = power / total
    out.setflags(write=False)
    return out


def extract_pdp(sample: ChannelSample) -> np.ndarray:
    """Power per delay tap: inverse DFT along subcarriers, averaged power.

    Returns a nonnegative unit-sum vector of length F.
    """
    h = sample.values.astype(np.complex128)
    taps = np.fft.ifft(h, axis=1)
    power = np.mean(np.abs(taps) ** 2, axis=(0, 2))
    return _normalize_power(power, "PDP")


def extract_aps(sample: ChannelSample) -> np.ndarray:
    """Power per angular bin: 2-D DFT over the antenna grid, averaged power.

    Returns a nonnegative unit-sum matrix of shape (N_v, N_h).
    """
    n_v, n_h = sample.antenna_grid
    a, f, t = sample.shape
    h = sample.values.astype(np.complex128).reshape(n_v, n_h, f, t)
    beams = np.fft.fft2(h, axes=(0, 1))
    power = np.mean(np.abs(beams) ** 2, axis=(2, 3))
    return _normalize_power(power, "APS")


def extract_doppler(sample: ChannelSample) -> np.ndarray | None:
    """Power per Doppler bin: DFT along snapshots; None when T == 1."""
    if sample.shape[2] == 1:
        return None
    h = sample.values.astype(np.complex128)
    bins = np.fft.fft(h, axis=2)
    power = np.mean(np.abs(bins) ** 2, axis=(0, 1))
    return _normalize_power(power, "Doppler spectrum")


def hoyer_sparsity(values: np.ndarray) -> float:
    """Normalized L1/L2 sparsity: (sqrt(n) - |v|_1/|v|_2) / (sqrt(n) - 1).

    1 for a single nonzero entry, 0 for a constant vector. Matrix inputs are
    flattened. Requires nonnegative entries, n >= 2, and not all zeros.
    """
    v = np.asarray(values, dtype=np.float64).ravel()
    n = v.size
    if n < 2:
        raise ValueError("Hoyer sparsity needs at least 2 entries")
    if np.any(v < 0):
        raise ValueError("Hoyer sparsity requires nonnegative entries")
    l2 = float(np.linalg.norm(v))
    if l2 == 0.0:
        raise DegenerateInputError("Hoyer sparsity undefined for all-zero input")
    l1 = float(np.sum(v))
    root_n = np.sqrt(n)
    return float((root_n - l1 / l2) / (root_n - 1.0))


def extract_bundle(sample: ChannelSample) -> FeatureBundle:
    pdp = extract_pdp(sample)
    aps = extract_aps(sample)
    doppler = extract_doppler(sample)
    return FeatureBundle(
        pdp=pdp,
        aps=aps,
        doppler=doppler,
        pdp_sparsity=hoyer_sparsity(pdp),
        aps_sparsity=hoyer_sparsity(aps),
        doppler_sparsity=None if doppler is None else hoyer_sparsity(doppler),
    )


def extract_features(dataset: Dataset) -> list[FeatureBundle]:
    """One bundle per sample, in dataset order; pure pointwise map."""
    bundles = []
    for i, sample in enumerate(dataset.samples):
        try:
            bundles.append(extract_bundle(sample))
        except DegenerateInputError as exc:
            raise DegenerateInputError(f"sample {i}: {exc}") from exc
    return bundles


def feature_values(bundles: list[FeatureBundle], kind: FeatureKind) -> list:
    """Pull one feature out of each bundle (arrays for spectra, floats for sparsity)."""
    return [b.get(kind) for b in bundles]


def bundles_to_json(bundles: list[FeatureBundle]) -> list[dict]:
    """Feature-cache form: plain lists of 64-bit floats, row-major matrices."""
    out = []
    for b in bundles:
        out.append({
            "pdp": [float(x) for x in b.pdp],
            "aps": [[float(x) for x in row] for row in b.aps],
            "doppler": None if b.doppler is None else [float(x) for x in b.doppler],
            "pdp_sparsity": float(b.pdp_sparsity),
            "aps_sparsity": float(b.aps_sparsity),
            "doppler_sparsity": None if b.doppler_sparsity is None
                                else float(b.doppler_sparsity),
        })
    return out


def bundles_from_json(records: list[dict]) -> list[FeatureBundle]:
    bundles = []
    for rec in records:
        doppler = rec["doppler"]
        bundles.append(FeatureBundle(
            pdp=np.asarray(rec["pdp"], dtype=np.float64),
            aps=np.asarray(rec["aps"], dtype=np.float64),
            doppler=None if doppler is None else np.asarray(doppler, dtype=np.float64),
            pdp_sparsity=float(rec["pdp_sparsity"]),
            aps_sparsity=float(rec["aps_sparsity"]),
            doppler_sparsity=None if rec["doppler_sparsity"] is None
                             else float(rec["doppler_sparsity"]),
        ))
    return bundles
