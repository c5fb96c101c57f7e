"""End-to-end wiring: input -> filter bank -> triggers -> gated jammers.

Band 3 is FDD, so detection and jamming use different filters: the
uplink filter (2) feeds trigger 1 and the downlink filter (3) feeds
jammer 1.  Band 40 is TDD and shares one allocation, so filter 4 feeds
both trigger 2 and jammer 2.  Filter 1 (the full Band 3 span) is
designed and its output exported for inspection, but drives no branch.
Stages run whole-buffer, one at a time; every stage is causal and
feed-forward, so this matches sample-interleaved execution exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Mapping

import numpy as np

from .analysis import rms
from .filterbank import DEFAULT_FILTER_ORDER, FilterBank, apply_filter
from .jammer import DEFAULT_NOISE_SIGMA, JammerConfig, jam
from .signal_core import (
    DEFAULT_N_SAMPLES,
    DEFAULT_SAMPLE_RATE,
    DEFAULT_TONE_AMPLITUDE,
    NoiseSpec,
    SignalBuffer,
    ToneSpec,
    multi_tone,
)
from .trigger import GateLine, TriggerConfig, trigger_chain

DEFAULT_SEED = 42


@dataclass(frozen=True)
class PipelineConfig:
    """Every knob of a run: rates, filter order, stage configs."""

    sample_rate: float = DEFAULT_SAMPLE_RATE
    n_samples: int = DEFAULT_N_SAMPLES
    filter_order: int = DEFAULT_FILTER_ORDER
    trigger: TriggerConfig = field(default_factory=TriggerConfig)
    jammer3: JammerConfig = field(default_factory=JammerConfig)
    jammer40: JammerConfig = field(
        default_factory=lambda: JammerConfig(noise=NoiseSpec(
            gaussian_sigma=DEFAULT_NOISE_SIGMA, rayleigh_sigma=DEFAULT_NOISE_SIGMA,
            seed=DEFAULT_SEED + 1))
    )
    measure_skip_fraction: float = 0.25

    def __post_init__(self):
        if self.n_samples <= 0:
            raise ValueError("n_samples must be > 0")
        if not 0.0 <= self.measure_skip_fraction < 1.0:
            raise ValueError("measure_skip_fraction must lie in [0, 1)")


def default_pipeline_config(seed: int = DEFAULT_SEED, **overrides: Any) -> PipelineConfig:
    """Default config with both jammers' noise streams derived from `seed`.

    The Band 40 jammer takes seed+1 so the two transmitters never emit
    identical noise.
    """
    base = PipelineConfig(
        jammer3=JammerConfig(noise=NoiseSpec(
            gaussian_sigma=DEFAULT_NOISE_SIGMA, rayleigh_sigma=DEFAULT_NOISE_SIGMA, seed=seed)),
        jammer40=JammerConfig(noise=NoiseSpec(
            gaussian_sigma=DEFAULT_NOISE_SIGMA, rayleigh_sigma=DEFAULT_NOISE_SIGMA, seed=seed + 1)),
    )
    return replace(base, **overrides) if overrides else base


@dataclass(frozen=True)
class Scenario:
    """A named input description: which tones to render."""

    name: str
    tones: tuple[ToneSpec, ...]
    overrides: Mapping[str, Any] | None = None

    def __post_init__(self):
        if not self.name:
            raise ValueError("scenario name must be non-empty")
        object.__setattr__(self, "tones", tuple(self.tones))


@dataclass(frozen=True, eq=False)
class ScenarioReport:
    """Measured per-branch outcome of one scenario run."""

    trigger1_level: float
    trigger2_level: float
    trigger1_stable: bool
    trigger2_stable: bool
    jammer1_rms: float
    jammer2_rms: float
    branch_buffers: Mapping[str, SignalBuffer]
    gates: Mapping[str, GateLine]
    verdicts: Mapping[str, bool]


@dataclass(frozen=True, eq=False)
class Pipeline:
    """An immutable, ready-to-run realization of a `PipelineConfig`."""

    config: PipelineConfig
    filters: FilterBank
    trigger_config: TriggerConfig


def build_pipeline(config: PipelineConfig) -> Pipeline:
    """Design all four filters and resolve the trigger window."""
    bank = FilterBank.design(config.sample_rate, config.filter_order)
    return Pipeline(config=config, filters=bank,
                    trigger_config=config.trigger.resolved(config.sample_rate))


def _settle(gate: GateLine, skip_fraction: float) -> tuple[float, bool]:
    """Modal gate level after the skip region, plus whether it was constant."""
    start = int(skip_fraction * len(gate))
    tail = gate.levels[start:]
    if tail.size == 0:
        return 0.0, True
    n_high = int(np.count_nonzero(tail))
    level = gate.high_level if n_high > tail.size - n_high else 0.0
    stable = n_high == 0 or n_high == tail.size
    return level, stable


def run_scenario(pipeline: Pipeline, scenario: Scenario) -> ScenarioReport:
    """Render the input, run every branch, measure the settled outcome."""
    if scenario.overrides:
        pipeline = build_pipeline(replace(pipeline.config, **dict(scenario.overrides)))
    cfg = pipeline.config

    source = multi_tone(scenario.tones, cfg.sample_rate, cfg.n_samples)
    band3_full = apply_filter(pipeline.filters.by_id(1), source)
    band3_uplink = apply_filter(pipeline.filters.by_id(2), source)
    band3_downlink = apply_filter(pipeline.filters.by_id(3), source)
    band40 = apply_filter(pipeline.filters.by_id(4), source)

    gate1 = trigger_chain(band3_uplink, pipeline.trigger_config)
    gate2 = trigger_chain(band40, pipeline.trigger_config)
    jam1 = jam(band3_downlink, gate1, cfg.jammer3)
    jam2 = jam(band40, gate2, cfg.jammer40)

    skip = cfg.measure_skip_fraction
    level1, stable1 = _settle(gate1, skip)
    level2, stable2 = _settle(gate2, skip)

    return ScenarioReport(
        trigger1_level=level1,
        trigger2_level=level2,
        trigger1_stable=stable1,
        trigger2_stable=stable2,
        jammer1_rms=rms(jam1, skip),
        jammer2_rms=rms(jam2, skip),
        branch_buffers={
            "input": source,
            "filter1": band3_full,
            "filter2": band3_uplink,
            "filter3": band3_downlink,
            "filter4": band40,
            "jammer1": jam1,
            "jammer2": jam2,
        },
        gates={"trigger1": gate1, "trigger2": gate2},
        verdicts={
            "band3": level1 == pipeline.trigger_config.high_level,
            "band40": level2 == pipeline.trigger_config.high_level,
        },
    )


def builtin_scenarios() -> list[Scenario]:
    """The four canonical input tone sets (all tones 2 V, zero phase)."""
    tone_sets_mhz = (
        ("input1", (1200.0, 1500.0, 1600.0, 3000.0)),
        ("input2", (1200.0, 1740.0, 1850.0, 3000.0)),
        ("input3", (1200.0, 1300.0, 2340.0, 3000.0)),
        ("input4", (1740.0, 1850.0, 2340.0, 3000.0)),
    )
    return [
        Scenario(name=name, tones=tuple(
            ToneSpec(frequency=f * 1e6, amplitude=DEFAULT_TONE_AMPLITUDE) for f in freqs))
        for name, freqs in tone_sets_mhz
    ]
