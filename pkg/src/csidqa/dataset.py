"""Dataset container and portable on-disk format for CSI measurements.

A :class:`ChannelSample` is one complex channel measurement indexed
``[antenna, subcarrier, snapshot]``; a :class:`Dataset` is an ordered,
shape-homogeneous collection of samples plus free-form string metadata.
Datasets persist in the CSID binary format (see :func:`write_dataset`),
a little-endian header followed by interleaved complex64 payload.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field

import numpy as np

_MAGIC = b"CSID"
_VERSION = 1
# magic | version u16 | n_samples u32 | A u16 | N_v u16 | N_h u16 | F u16 | T u16 | metadata_len u32
_HEADER = struct.Struct("<4sHIHHHHHI")

_OFF_MAGIC = 0
_OFF_VERSION = 4
_OFF_NSAMPLES = 6
_OFF_ANTENNAS = 10
_OFF_METALEN = 20


class CsidFormatError(ValueError):
    """Raised when a CSID file violates the format; carries the byte offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


@dataclass(frozen=True)
class ChannelSample:
    """One CSI measurement: complex gains over antenna x subcarrier x snapshot.

    ``values`` has shape (A, F, T) and is stored as complex64 so that file
    round-trips are bit-exact; metrics recast to 64-bit internally.
    ``antenna_grid`` gives the (rows, cols) layout of the transmit array,
    with rows*cols == A.
    """

    values: np.ndarray
    antenna_grid: tuple[int, int]

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.ndim != 3:
            raise ValueError(f"sample values must be 3-D (A, F, T), got shape {values.shape}")
        if min(values.shape) < 1:
            raise ValueError(f"all sample axes must be >= 1, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("sample contains non-finite values")
        n_v, n_h = self.antenna_grid
        if n_v < 1 or n_h < 1 or n_v * n_h != values.shape[0]:
            raise ValueError(
                f"antenna_grid {self.antenna_grid} inconsistent with {values.shape[0]} antennas")
        values = np.ascontiguousarray(values, dtype=np.complex64)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "antenna_grid", (int(n_v), int(n_h)))

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.values.shape


@dataclass(frozen=True)
class Dataset:
    """Ordered, shape-homogeneous collection of channel samples."""

    samples: tuple[ChannelSample, ...]
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        samples = tuple(self.samples)
        if not samples:
            raise ValueError("dataset must contain at least one sample")
        shape = samples[0].shape
        grid = samples[0].antenna_grid
        for i, s in enumerate(samples):
            if s.shape != shape or s.antenna_grid != grid:
                raise ValueError(
                    f"sample {i} has shape {s.shape}/grid {s.antenna_grid}, "
                    f"expected {shape}/{grid}")
        for k, v in self.metadata.items():
            if not isinstance(k, str) or not isinstance(v, str):
                raise ValueError("metadata must map str to str")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "metadata", dict(self.metadata))

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def sample_shape(self) -> tuple[int, int, int]:
        return self.samples[0].shape

    @property
    def antenna_grid(self) -> tuple[int, int]:
        return self.samples[0].antenna_grid

    def as_array(self) -> np.ndarray:
        """Stack all samples into one (n, A, F, T) complex64 array."""
        return np.stack([s.values for s in self.samples])

    @staticmethod
    def from_array(values: np.ndarray, antenna_grid: tuple[int, int],
                   metadata: dict[str, str] | None = None) -> "Dataset":
        values = np.asarray(values)
        if values.ndim != 4:
            raise ValueError(f"expected (n, A, F, T) array, got shape {values.shape}")
        samples = tuple(ChannelSample(values[i], antenna_grid) for i in range(values.shape[0]))
        return Dataset(samples, metadata or {})


def _encode_metadata(metadata: dict[str, str]) -> bytes:
    # sorted keys keep the byte stream deterministic for equal inputs
    return json.dumps(metadata, sort_keys=True, separators=(",", ":")).encode("utf-8")


def write_dataset(dataset: Dataset, path) -> None:
    """Serialize a dataset to the CSID binary format.

    Byte-deterministic: two writes of the same dataset produce identical
    files. Raises OSError for unwritable paths.
    """
    n = len(dataset)
    a, f, t = dataset.sample_shape
    n_v, n_h = dataset.antenna_grid
    if n > 0xFFFFFFFF:
        raise ValueError("too many samples for CSID format")
    if max(a, n_v, n_h, f, t) > 0xFFFF:
        raise ValueError("sample dimensions exceed CSID format limits")
    meta = _encode_metadata(dataset.metadata)
    header = _HEADER.pack(_MAGIC, _VERSION, n, a, n_v, n_h, f, t, len(meta))
    payload = np.ascontiguousarray(dataset.as_array(), dtype="<c8").tobytes()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(meta)
        fh.write(payload)


def read_dataset(path) -> Dataset:
    """Read a CSID file; every format violation reports its byte offset."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise CsidFormatError(f"file too short for CSID header ({len(raw)} bytes)", 0)
    magic, version, n, a, n_v, n_h, f, t, meta_len = _HEADER.unpack_from(raw, 0)
    if magic != _MAGIC:
        raise CsidFormatError(f"bad magic {magic!r}, expected {_MAGIC!r}", _OFF_MAGIC)
    if version != _VERSION:
        raise CsidFormatError(f"unsupported CSID version {version}", _OFF_VERSION)
    if n < 1:
        raise CsidFormatError("file declares zero samples", _OFF_NSAMPLES)
    if min(a, n_v, n_h, f, t) < 1:
        raise CsidFormatError("zero-sized sample dimension in header", _OFF_ANTENNAS)
    if n_v * n_h != a:
        raise CsidFormatError(
            f"antenna grid {n_v}x{n_h} inconsistent with antenna count {a}", _OFF_ANTENNAS)
    meta_end = _HEADER.size + meta_len
    if len(raw) < meta_end:
        raise CsidFormatError("truncated metadata block", _HEADER.size)
    try:
        metadata = json.loads(raw[_HEADER.size:meta_end].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CsidFormatError(f"malformed metadata: {exc}", _HEADER.size) from exc
    if not isinstance(metadata, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in metadata.items()):
        raise CsidFormatError("metadata must be a string-to-string map", _HEADER.size)
    expected = n * a * f * t * 8
    payload = raw[meta_end:]
    if len(payload) < expected:
        raise CsidFormatError(
            f"truncated payload: expected {expected} bytes, found {len(payload)}", meta_end)
    if len(payload) > expected:
        raise CsidFormatError(
            f"trailing bytes after payload: expected {expected} bytes, found {len(payload)}",
            meta_end + expected)
    values = np.frombuffer(payload, dtype="<c8")
    floats = values.view("<f4")
    bad = np.flatnonzero(~np.isfinite(floats))
    if bad.size:
        raise CsidFormatError("non-finite value in payload", meta_end + int(bad[0]) * 4)
    values = values.reshape(n, a, f, t)
    return Dataset.from_array(values, (n_v, n_h), metadata)


def split_dataset(dataset: Dataset, fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Seeded disjoint split; the first part gets round(fraction * n) samples.

    Selection is a uniform draw without replacement; sample order within each
    part follows the original dataset order.
    """
    n = len(dataset)
    if n < 2:
        raise ValueError("need at least 2 samples to split")
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"fraction must lie in (0, 1), got {fraction}")
    k = int(round(fraction * n))
    if k == 0 or k == n:
        raise ValueError(f"fraction {fraction} yields an empty part for n={n}")
    rng = np.random.default_rng(_check_seed(seed))
    chosen = np.sort(rng.choice(n, size=k, replace=False))
    mask = np.zeros(n, dtype=bool)
    mask[chosen] = True
    first = tuple(s for s, keep in zip(dataset.samples, mask) if keep)
    second = tuple(s for s, keep in zip(dataset.samples, mask) if not keep)
    return (Dataset(first, dict(dataset.metadata)),
            Dataset(second, dict(dataset.metadata)))


def normalize_max_abs(dataset: Dataset) -> Dataset:
    """Scale each sample by the inverse of its largest magnitude entry.

    Brings datasets from generators with very different power levels onto a
    comparable scale before similarity measurement.
    """
    out = []
    for i, s in enumerate(dataset.samples):
        peak = float(np.max(np.abs(s.values)))
        if peak == 0.0:
            raise ValueError(f"sample {i} is all-zero, cannot normalize")
        out.append(ChannelSample(s.values / np.float32(peak), s.antenna_grid))
    return Dataset(tuple(out), dict(dataset.metadata))


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < 2 ** 64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed
