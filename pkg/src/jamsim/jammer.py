"""Trigger-gated jamming stage: gain plus Gaussian and Rayleigh noise.

While the gate is high the stage emits gain * signal + noise; while it
is low the output is exactly 0 V.  The noise streams are generated for
the full buffer regardless of gating, so runs that differ only in the
gate stay sample-for-sample comparable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import LengthMismatch, SampleRateMismatch
from .signal_core import NoiseSpec, SignalBuffer, gaussian_noise, rayleigh_noise
from .trigger import GateLine

DEFAULT_GAIN = 5.0
DEFAULT_NOISE_SIGMA = 1.0


def _default_noise() -> NoiseSpec:
    return NoiseSpec(gaussian_sigma=DEFAULT_NOISE_SIGMA,
                     rayleigh_sigma=DEFAULT_NOISE_SIGMA, seed=42)


@dataclass(frozen=True)
class JammerConfig:
    """Amplifier gain and the injected-noise description."""

    gain: float = DEFAULT_GAIN
    noise: NoiseSpec = field(default_factory=_default_noise)

    def __post_init__(self):
        # gain >= 1 so the stage never attenuates; gain == 1 is the
        # degenerate identity configuration used for calibration.
        if not np.isfinite(self.gain) or self.gain < 1.0:
            raise ValueError(f"jammer gain must be >= 1, got {self.gain!r}")


def jam(signal: SignalBuffer, gate: GateLine, config: JammerConfig) -> SignalBuffer:
    """Amplify and add noise where the gate is high; emit exact 0 elsewhere."""
    if len(signal) != len(gate):
        raise LengthMismatch(f"signal has {len(signal)} samples but gate has {len(gate)}")
    if signal.sample_rate != gate.sample_rate:
        raise SampleRateMismatch(
            f"signal at {signal.sample_rate} Hz but gate at {gate.sample_rate} Hz"
        )
    n = len(signal)
    g = gaussian_noise(config.noise, n, signal.sample_rate).samples
    r = rayleigh_noise(config.noise, n, signal.sample_rate).samples
    active = config.gain * signal.samples + g + r
    out = np.where(gate.levels > 0.0, active, 0.0)
    return SignalBuffer(out, signal.sample_rate)
