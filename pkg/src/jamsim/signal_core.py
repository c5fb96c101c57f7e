"""Sample buffers, multi-tone sources and seeded noise generators.

Everything downstream (filters, trigger, jammer, analysis) exchanges
`SignalBuffer` values: a uniformly sampled real voltage sequence plus
its sample rate.  Buffers are immutable; operations are pure functions
of their inputs, so concurrent use needs no locking.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rng
from .errors import FrequencyAboveNyquist, InvalidSampleRate, LengthMismatch, SampleRateMismatch

#: Simulation defaults: 10 GS/s comfortably clears twice the highest
#: tone of interest (3 GHz), and 4096 samples span 409.6 ns.
DEFAULT_SAMPLE_RATE = 10e9
DEFAULT_N_SAMPLES = 4096
#: A 2 V in-band tone keeps the rectified, filtered wave above the 1 V
#: trigger threshold with margin under unity passband gain.
DEFAULT_TONE_AMPLITUDE = 2.0


def _as_readonly_f64(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64, copy=True).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SignalBuffer:
    """Uniformly sampled real voltages (volts) at `sample_rate` (Hz)."""

    samples: np.ndarray
    sample_rate: float

    def __post_init__(self):
        rate = float(self.sample_rate)
        if not np.isfinite(rate) or rate <= 0.0:
            raise InvalidSampleRate(f"sample_rate must be > 0, got {self.sample_rate!r}")
        arr = _as_readonly_f64(self.samples)
        if arr.size and not np.all(np.isfinite(arr)):
            raise ValueError("samples must all be finite")
        object.__setattr__(self, "samples", arr)
        object.__setattr__(self, "sample_rate", rate)

    def __len__(self) -> int:
        return self.samples.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, SignalBuffer):
            return NotImplemented
        return self.sample_rate == other.sample_rate and np.array_equal(self.samples, other.samples)

    @property
    def duration(self) -> float:
        """Covered time span in seconds."""
        return self.samples.size / self.sample_rate

    def times(self) -> np.ndarray:
        """Sample instants t_i = i / sample_rate in seconds."""
        return np.arange(self.samples.size) / self.sample_rate


@dataclass(frozen=True)
class ToneSpec:
    """One sinusoid: frequency (Hz), amplitude (volts), phase (radians)."""

    frequency: float
    amplitude: float = DEFAULT_TONE_AMPLITUDE
    phase: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.frequency) or self.frequency <= 0.0:
            raise ValueError(f"tone frequency must be > 0 Hz, got {self.frequency!r}")
        if not np.isfinite(self.amplitude) or self.amplitude < 0.0:
            raise ValueError(f"tone amplitude must be >= 0 V, got {self.amplitude!r}")
        if not np.isfinite(self.phase):
            raise ValueError("tone phase must be finite")


@dataclass(frozen=True)
class NoiseSpec:
    """Gaussian + Rayleigh noise levels (volts) and the stream seed."""

    gaussian_sigma: float = 0.0
    rayleigh_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not np.isfinite(self.gaussian_sigma) or self.gaussian_sigma < 0.0:
            raise ValueError("gaussian_sigma must be >= 0")
        if not np.isfinite(self.rayleigh_sigma) or self.rayleigh_sigma < 0.0:
            raise ValueError("rayleigh_sigma must be >= 0")
        if self.seed < 0:
            raise ValueError("seed must be a nonnegative integer")


def multi_tone(tones, sample_rate: float, n_samples: int) -> SignalBuffer:
    """Sum of sinusoids: x[i] = sum_k a_k sin(2 pi f_k i / fs + phi_k).

    Deterministic, and exactly linear in the tone amplitudes (each tone
    is rendered once and scaled).
    """
    if not np.isfinite(sample_rate) or sample_rate <= 0.0:
        raise InvalidSampleRate(f"sample_rate must be > 0, got {sample_rate!r}")
    if n_samples < 0:
        raise ValueError("n_samples must be >= 0")
    for tone in tones:
        if tone.frequency >= sample_rate / 2.0:
            raise FrequencyAboveNyquist(
                f"tone at {tone.frequency} Hz is not below Nyquist ({sample_rate / 2.0} Hz)"
            )
    t = np.arange(n_samples) / sample_rate
    acc = np.zeros(n_samples)
    for tone in tones:
        acc += tone.amplitude * np.sin(2.0 * np.pi * tone.frequency * t + tone.phase)
    return SignalBuffer(acc, sample_rate)


def gaussian_noise(spec: NoiseSpec, n_samples: int,
                   sample_rate: float = DEFAULT_SAMPLE_RATE) -> SignalBuffer:
    """i.i.d. Normal(0, gaussian_sigma^2) buffer; same seed, same bits."""
    if n_samples < 0:
        raise ValueError("n_samples must be >= 0")
    return SignalBuffer(rng.gaussian_stream(spec.gaussian_sigma, spec.seed, n_samples), sample_rate)


def rayleigh_noise(spec: NoiseSpec, n_samples: int,
                   sample_rate: float = DEFAULT_SAMPLE_RATE) -> SignalBuffer:
    """i.i.d. Rayleigh(scale=rayleigh_sigma) buffer; all samples >= 0."""
    if n_samples < 0:
        raise ValueError("n_samples must be >= 0")
    return SignalBuffer(rng.rayleigh_stream(spec.rayleigh_sigma, spec.seed, n_samples), sample_rate)


def add(a: SignalBuffer, b: SignalBuffer) -> SignalBuffer:
    """Elementwise sum of two aligned buffers."""
    if len(a) != len(b):
        raise LengthMismatch(f"cannot add buffers of length {len(a)} and {len(b)}")
    if a.sample_rate != b.sample_rate:
        raise SampleRateMismatch(
            f"cannot add buffers at {a.sample_rate} and {b.sample_rate} samples/s"
        )
    return SignalBuffer(a.samples + b.samples, a.sample_rate)
