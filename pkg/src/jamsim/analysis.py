"""Measurement utilities: power spectrum, RMS, spectral peak listing."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BufferTooShort, EmptyMeasurementRegion
from .signal_core import SignalBuffer

#: dB value substituted for zero-power bins so output stays finite.
DB_FLOOR = -200.0


@dataclass(frozen=True, eq=False)
class Spectrum:
    """One-sided power spectrum: per-bin power in dB over [0, fs/2]."""

    freqs: np.ndarray
    power_db: np.ndarray
    resolution: float

    def __post_init__(self):
        freqs = np.asarray(self.freqs, dtype=np.float64)
        power = np.asarray(self.power_db, dtype=np.float64)
        if freqs.shape != power.shape:
            raise ValueError("freqs and power_db must align")
        object.__setattr__(self, "freqs", freqs)
        object.__setattr__(self, "power_db", power)

    def __len__(self) -> int:
        return self.freqs.size


def power_spectrum(signal: SignalBuffer) -> Spectrum:
    """Magnitude-squared DFT of the raw (rectangular-windowed) buffer.

    Normalized so the per-bin powers sum to the signal's mean square
    (Parseval); interior bins carry the doubled one-sided weight.
    """
    n = len(signal)
    if n < 2:
        raise BufferTooShort(f"power_spectrum needs at least 2 samples, got {n}")
    spec = np.fft.rfft(signal.samples)
    power = np.abs(spec) ** 2 / float(n) ** 2
    # Fold the negative-frequency half into the interior bins.
    power[1:] *= 2.0
    if n % 2 == 0:
        power[-1] /= 2.0
    power_db = np.full(power.shape, DB_FLOOR)
    nonzero = power > 0.0
    power_db[nonzero] = np.maximum(10.0 * np.log10(power[nonzero]), DB_FLOOR)
    freqs = np.fft.rfftfreq(n, d=1.0 / signal.sample_rate)
    return Spectrum(freqs=freqs, power_db=power_db, resolution=signal.sample_rate / n)


def rms(signal: SignalBuffer, skip_fraction: float = 0.0) -> float:
    """Root mean square after discarding the leading `skip_fraction`."""
    if not 0.0 <= skip_fraction < 1.0:
        raise ValueError(f"skip_fraction must lie in [0, 1), got {skip_fraction!r}")
    start = int(skip_fraction * len(signal))
    tail = signal.samples[start:]
    if tail.size == 0:
        raise EmptyMeasurementRegion("nothing left to measure after the skip region")
    return float(np.sqrt(np.mean(tail * tail)))


def find_peaks(spectrum: Spectrum, min_db_above_floor: float) -> list[tuple[float, float]]:
    """Local maxima more than `min_db_above_floor` dB above the median bin.

    Returns (frequency_hz, power_db) pairs sorted by frequency.
    """
    p = spectrum.power_db
    if p.size == 0:
        return []
    floor = float(np.median(p))
    cut = floor + min_db_above_floor
    peaks: list[tuple[float, float]] = []
    for k in range(p.size):
        left_ok = k == 0 or p[k] > p[k - 1]
        right_ok = k == p.size - 1 or p[k] > p[k + 1]
        if left_ok and right_ok and p[k] > cut:
            peaks.append((float(spectrum.freqs[k]), float(p[k])))
    return peaks
