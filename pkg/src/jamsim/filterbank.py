"""The four detection bandpass filters and their biquad realizations.

Each band is realized as a Butterworth bandpass: an analog lowpass
prototype of order ``order/2`` is frequency-transformed to a bandpass
between the pre-warped band edges, mapped to z via the bilinear
transform, and factored into second-order recursive sections.  The
pre-warping makes the digital -3 dB points land exactly on the
requested edges; each section is normalized to unit magnitude at the
band centre, so the cascade has 0 dB gain there by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import sosfilt

from .errors import (
    BandAboveNyquist,
    DesignUnstable,
    FrequencyAboveNyquist,
    InvalidOrder,
    SampleRateMismatch,
)
from .signal_core import SignalBuffer

DEFAULT_FILTER_ORDER = 6


@dataclass(frozen=True)
class FilterSpec:
    """One passband: edges and centre in MHz."""

    id: int
    band_low: float
    band_high: float
    center: float

    def __post_init__(self):
        if self.band_low >= self.band_high:
            raise ValueError(
                f"band_low must be below band_high, got {self.band_low}..{self.band_high} MHz"
            )
        midpoint = (self.band_low + self.band_high) / 2.0
        if abs(self.center - midpoint) > 1e-6 * midpoint:
            raise ValueError(f"center {self.center} MHz is not the band midpoint {midpoint} MHz")


#: The four detection bands.  Rows 2/3 are the Band 3 FDD uplink and
#: downlink halves, row 4 is the shared Band 40 TDD allocation, and
#: row 1 spans all of Band 3.
BAND_FILTER_SPECS = (
    FilterSpec(id=1, band_low=1710.0, band_high=1880.0, center=1795.0),
    FilterSpec(id=2, band_low=1710.0, band_high=1785.0, center=1747.5),
    FilterSpec(id=3, band_low=1805.0, band_high=1880.0, center=1842.5),
    FilterSpec(id=4, band_low=2305.0, band_high=2405.0, center=2355.0),
)

#: Lowest passband edge over all bands, in Hz (sets the default
#: envelope window: one period of the slowest in-band oscillation).
LOWEST_PASSBAND_HZ = min(s.band_low for s in BAND_FILTER_SPECS) * 1e6


@dataclass(frozen=True)
class BiquadSection:
    """One second-order recursive section, denominator monic."""

    b0: float
    b1: float
    b2: float
    a1: float
    a2: float

    def is_stable(self) -> bool:
        # Poles strictly inside the unit circle (stability triangle).
        return abs(self.a2) < 1.0 and abs(self.a1) < 1.0 + self.a2


@dataclass(frozen=True, eq=False)
class FilterStages:
    """A realized cascade of biquads for one `FilterSpec`."""

    sections: tuple[BiquadSection, ...]
    sample_rate: float
    spec: FilterSpec

    def __post_init__(self):
        object.__setattr__(self, "sections", tuple(self.sections))
        for sec in self.sections:
            for c in (sec.b0, sec.b1, sec.b2, sec.a1, sec.a2):
                if not math.isfinite(c):
                    raise DesignUnstable("non-finite section coefficient")
            if not sec.is_stable():
                raise DesignUnstable(f"section {sec} has poles on or outside the unit circle")

    def sos(self) -> np.ndarray:
        """Cascade as an (n_sections, 6) array for scipy.signal.sosfilt."""
        return np.array(
            [[s.b0, s.b1, s.b2, 1.0, s.a1, s.a2] for s in self.sections], dtype=np.float64
        )


def _pair_into_sections(z_poles: np.ndarray) -> list[tuple[float, float]]:
    """Group z-plane poles into conjugate pairs; returns (a1, a2) per section."""
    tol = 1e-12
    pairs = []
    upper = z_poles[np.imag(z_poles) > tol]
    reals = np.sort(np.real(z_poles[np.abs(np.imag(z_poles)) <= tol]))
    for p in upper:
        pairs.append((-2.0 * float(np.real(p)), float(np.abs(p)) ** 2))
    for r1, r2 in zip(reals[0::2], reals[1::2]):
        pairs.append((-(r1 + r2), r1 * r2))
    if 2 * len(pairs) != z_poles.size:
        raise DesignUnstable("pole set did not split into conjugate pairs")
    return pairs


def design_bandpass(spec: FilterSpec, sample_rate: float,
                    order: int = DEFAULT_FILTER_ORDER) -> FilterStages:
    """Synthesize one band-plan bandpass as `order/2` biquads.

    `order` counts the poles of the realized bandpass (an order-6
    filter is three sections from a 3rd-order prototype), so it must
    be even.
    """
    if order < 2 or order % 2 != 0:
        raise InvalidOrder(f"bandpass order must be an even integer >= 2, got {order}")
    f_low = spec.band_low * 1e6
    f_high = spec.band_high * 1e6
    if f_high >= sample_rate / 2.0:
        raise BandAboveNyquist(
            f"band edge {spec.band_high} MHz is not below Nyquist at fs={sample_rate} Hz"
        )
    n = order // 2

    # Pre-warp the band edges so the bilinear transform lands the
    # analog -3 dB points exactly on the requested digital edges.
    w_low = 2.0 * sample_rate * math.tan(math.pi * f_low / sample_rate)
    w_high = 2.0 * sample_rate * math.tan(math.pi * f_high / sample_rate)
    w0_sq = w_low * w_high
    bw = w_high - w_low

    # Butterworth lowpass prototype poles, unit cutoff, left half-plane.
    k = np.arange(n)
    proto = np.exp(1j * np.pi * (2.0 * k + n + 1.0) / (2.0 * n))

    # Lowpass -> bandpass: each prototype pole p becomes the two roots
    # of s^2 - (bw p) s + w0^2.
    pb = proto * bw
    disc = np.sqrt(pb * pb - 4.0 * w0_sq)
    s_poles = np.concatenate([(pb + disc) / 2.0, (pb - disc) / 2.0])

    # Bilinear transform.  The transformed zeros are n at z=+1 (the
    # prototype's s=0 zeros) and n at z=-1 (the zeros at infinity), so
    # every section takes numerator (1 - z^-2) before scaling.
    z_poles = (2.0 * sample_rate + s_poles) / (2.0 * sample_rate - s_poles)

    zc = np.exp(-2j * np.pi * (spec.center * 1e6) / sample_rate)
    sections = []
    for a1, a2 in _pair_into_sections(z_poles):
        gain = abs((1.0 - zc * zc) / (1.0 + a1 * zc + a2 * zc * zc))
        if gain == 0.0 or not math.isfinite(gain):
            raise DesignUnstable("section response degenerate at band centre")
        sections.append(BiquadSection(b0=1.0 / gain, b1=0.0, b2=-1.0 / gain, a1=a1, a2=a2))

    stages = FilterStages(sections=tuple(sections), sample_rate=sample_rate, spec=spec)
    centre_db = frequency_response(stages, [spec.center * 1e6])[0][0]
    if not -1.0 <= centre_db <= 0.5:
        raise DesignUnstable(f"cascade gain at centre is {centre_db:.3f} dB, expected ~0 dB")
    return stages


def frequency_response(stages: FilterStages, freqs) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate the cascade on the unit circle at `freqs` (Hz).

    Returns (magnitude_db, phase_rad) arrays.  Magnitude is floored at
    -300 dB so exact transfer-function zeros stay representable.
    """
    f = np.asarray(freqs, dtype=np.float64).reshape(-1)
    if f.size and (f.min() < 0.0 or f.max() > stages.sample_rate / 2.0):
        raise FrequencyAboveNyquist("response frequencies must lie in [0, fs/2]")
    z = np.exp(-2j * np.pi * f / stages.sample_rate)
    h = np.ones(f.size, dtype=np.complex128)
    for s in stages.sections:
        h *= (s.b0 + s.b1 * z + s.b2 * z * z) / (1.0 + s.a1 * z + s.a2 * z * z)
    mag_db = 20.0 * np.log10(np.maximum(np.abs(h), 1e-15))
    return mag_db, np.angle(h)


def apply_filter(stages: FilterStages, signal: SignalBuffer) -> SignalBuffer:
    """Run the cascade over a buffer (direct-form II transposed, zero state)."""
    if signal.sample_rate != stages.sample_rate:
        raise SampleRateMismatch(
            f"buffer at {signal.sample_rate} Hz vs filter designed for {stages.sample_rate} Hz"
        )
    if len(signal) == 0:
        return SignalBuffer(np.zeros(0), signal.sample_rate)
    return SignalBuffer(sosfilt(stages.sos(), signal.samples), signal.sample_rate)


@dataclass(frozen=True, eq=False)
class FilterBank:
    """All four band-plan filters designed at one common sample rate."""

    filters: tuple[FilterStages, ...]

    def __post_init__(self):
        ids = tuple(f.spec.id for f in self.filters)
        if ids != (1, 2, 3, 4):
            raise ValueError(f"filter bank must hold exactly filters 1..4, got ids {ids}")
        expected = tuple((s.band_low, s.band_high) for s in BAND_FILTER_SPECS)
        actual = tuple((f.spec.band_low, f.spec.band_high) for f in self.filters)
        if actual != expected:
            raise ValueError(f"filter bank passbands {actual} differ from {expected}")

    @classmethod
    def design(cls, sample_rate: float, order: int = DEFAULT_FILTER_ORDER) -> "FilterBank":
        return cls(tuple(design_bandpass(s, sample_rate, order) for s in BAND_FILTER_SPECS))

    def by_id(self, filter_id: int) -> FilterStages:
        for f in self.filters:
            if f.spec.id == filter_id:
                return f
        raise KeyError(f"no filter with id {filter_id}")
