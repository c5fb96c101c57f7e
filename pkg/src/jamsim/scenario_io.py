"""Scenario file format plus the CSV serializers.

A scenario file is a line-based key = value document::

    [scenario]
    name = lab-bench

    [tones]                 # one entry per tone; freq_mhz starts a tone
    freq_mhz = 1747.5
    amplitude_v = 2.0       # optional, default 2.0
    phase_rad = 0.0         # optional, default 0.0

    [sim]                   # all optional
    sample_rate_hz = 1e10
    n_samples = 4096
    seed = 42
    filter_order = 6

    [jammer]                # applies to both jammers; optional
    gain = 5.0
    gaussian_sigma_v = 1.0
    rayleigh_sigma_v = 1.0

    [trigger]               # optional
    threshold_v = 1.0
    high_v = 5.0
    envelope_window = 6

Blank lines and ``#`` comments are ignored.  Unknown sections or keys
fail fast with the offending line number.  The single [sim] seed feeds
the Band 3 jammer; the Band 40 jammer takes seed+1.
"""

from __future__ import annotations

import math
from dataclasses import replace

from .analysis import Spectrum
from .errors import InvalidValue, ParseError, UnknownKey
from .jammer import JammerConfig
from .pipeline import DEFAULT_SEED, PipelineConfig, Scenario, default_pipeline_config
from .signal_core import DEFAULT_TONE_AMPLITUDE, NoiseSpec, SignalBuffer, ToneSpec
from .trigger import TriggerConfig

_SECTION_KEYS = {
    "scenario": {"name"},
    "tones": {"freq_mhz", "amplitude_v", "phase_rad"},
    "sim": {"sample_rate_hz", "n_samples", "seed", "filter_order"},
    "jammer": {"gain", "gaussian_sigma_v", "rayleigh_sigma_v"},
    "trigger": {"threshold_v", "high_v", "envelope_window"},
}
_INT_KEYS = {"n_samples", "seed", "filter_order", "envelope_window"}


def _parse_number(key: str, value: str, line: int) -> float | int:
    try:
        if key in _INT_KEYS:
            return int(value, 0)
        out = float(value)
    except ValueError:
        raise InvalidValue(f"cannot parse {key} value {value!r}", line) from None
    if not math.isfinite(out):
        raise InvalidValue(f"{key} must be finite, got {value!r}", line)
    return out


def parse_scenario_file(text: str, default_seed: int = DEFAULT_SEED
                        ) -> tuple[Scenario, PipelineConfig]:
    """Parse a scenario document into a fully resolved (Scenario, PipelineConfig)."""
    name = "scenario"
    tones: list[dict[str, float]] = []
    values: dict[str, dict[str, float | int]] = {"sim": {}, "jammer": {}, "trigger": {}}
    section: str | None = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section not in _SECTION_KEYS:
                raise UnknownKey(f"unknown section [{section}]", lineno)
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {line!r}", lineno)
        if section is None:
            raise ParseError("key appears before any [section] header", lineno)
        key, _, value = (part.strip() for part in line.partition("="))
        if key not in _SECTION_KEYS[section]:
            raise UnknownKey(f"unknown key {key!r} in section [{section}]", lineno)
        if not value:
            raise InvalidValue(f"empty value for {key!r}", lineno)

        if section == "scenario":
            name = value
        elif section == "tones":
            if key == "freq_mhz":
                tones.append({"freq_mhz": _parse_number(key, value, lineno)})
            else:
                if not tones:
                    raise ParseError(f"{key} appears before any freq_mhz", lineno)
                if key in tones[-1]:
                    raise InvalidValue(f"duplicate {key} for the same tone", lineno)
                tones[-1][key] = _parse_number(key, value, lineno)
        else:
            if key in values[section]:
                raise InvalidValue(f"duplicate key {key!r}", lineno)
            values[section][key] = _parse_number(key, value, lineno)

    sim = values["sim"]
    jam_kv = values["jammer"]
    trig = values["trigger"]

    seed = int(sim.get("seed", default_seed))
    config = default_pipeline_config(
        seed=seed,
        sample_rate=float(sim.get("sample_rate_hz", default_pipeline_config().sample_rate)),
        n_samples=int(sim.get("n_samples", default_pipeline_config().n_samples)),
        filter_order=int(sim.get("filter_order", default_pipeline_config().filter_order)),
    )
    if trig:
        base = TriggerConfig()
        window = trig.get("envelope_window")
        config = replace(config, trigger=TriggerConfig(
            threshold=float(trig.get("threshold_v", base.threshold)),
            high_level=float(trig.get("high_v", base.high_level)),
            envelope_window=int(window) if window is not None else None,
        ))
    if jam_kv:
        base_jam = JammerConfig()
        gain = float(jam_kv.get("gain", base_jam.gain))
        g_sigma = float(jam_kv.get("gaussian_sigma_v", base_jam.noise.gaussian_sigma))
        r_sigma = float(jam_kv.get("rayleigh_sigma_v", base_jam.noise.rayleigh_sigma))
        config = replace(
            config,
            jammer3=JammerConfig(gain=gain, noise=NoiseSpec(g_sigma, r_sigma, seed)),
            jammer40=JammerConfig(gain=gain, noise=NoiseSpec(g_sigma, r_sigma, seed + 1)),
        )

    scenario = Scenario(name=name, tones=tuple(
        ToneSpec(
            frequency=t["freq_mhz"] * 1e6,
            amplitude=t.get("amplitude_v", DEFAULT_TONE_AMPLITUDE),
            phase=t.get("phase_rad", 0.0),
        )
        for t in tones
    ))
    return scenario, config


def apply_seed(config: PipelineConfig, seed: int) -> PipelineConfig:
    """Re-key both jammers' noise streams from `seed` (and seed+1)."""
    return replace(
        config,
        jammer3=replace(config.jammer3, noise=replace(config.jammer3.noise, seed=seed)),
        jammer40=replace(config.jammer40, noise=replace(config.jammer40.noise, seed=seed + 1)),
    )


def render_scenario_file(scenario: Scenario, config: PipelineConfig) -> str:
    """Serialize back to the file format (inverse of parse_scenario_file).

    Only configs expressible in the format round-trip: one shared
    jammer gain/sigma pair with the Band 40 seed at seed+1.
    """
    lines = ["[scenario]", f"name = {scenario.name}", "", "[tones]"]
    for tone in scenario.tones:
        lines.append(f"freq_mhz = {tone.frequency / 1e6!r}")
        lines.append(f"amplitude_v = {tone.amplitude!r}")
        lines.append(f"phase_rad = {tone.phase!r}")
    lines += [
        "",
        "[sim]",
        f"sample_rate_hz = {config.sample_rate!r}",
        f"n_samples = {config.n_samples}",
        f"seed = {config.jammer3.noise.seed}",
        f"filter_order = {config.filter_order}",
        "",
        "[jammer]",
        f"gain = {config.jammer3.gain!r}",
        f"gaussian_sigma_v = {config.jammer3.noise.gaussian_sigma!r}",
        f"rayleigh_sigma_v = {config.jammer3.noise.rayleigh_sigma!r}",
        "",
        "[trigger]",
        f"threshold_v = {config.trigger.threshold!r}",
        f"high_v = {config.trigger.high_level!r}",
    ]
    if config.trigger.envelope_window is not None:
        lines.append(f"envelope_window = {config.trigger.envelope_window}")
    return "\n".join(lines) + "\n"


def _fmt(value: float) -> str:
    # Decimal scientific notation, 9 significant digits.
    return f"{value:.8e}"


def write_timeseries_csv(buffer: SignalBuffer, path) -> None:
    """CSV rows `time_s,value_v`, t_i = i / sample_rate."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("time_s,value_v\n")
        for i, v in enumerate(buffer.samples):
            fh.write(f"{_fmt(i / buffer.sample_rate)},{_fmt(v)}\n")


def write_spectrum_csv(spectrum: Spectrum, path) -> None:
    """CSV rows `freq_hz,power_db`."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("freq_hz,power_db\n")
        for f, p in zip(spectrum.freqs, spectrum.power_db):
            fh.write(f"{_fmt(f)},{_fmt(p)}\n")
