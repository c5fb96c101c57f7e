"""Scenario-driven command line front end.

Commands::

    jamsim run (FILE | --builtin N) --out DIR [--seed S] [--fs HZ]
               [--samples N] [--reproducible]
    jamsim scenarios
    jamsim response --filter K --out FILE

`run` writes jammer1/jammer2/trigger1/trigger2 time series, the input
spectrum and a JSON manifest into DIR, atomically: the directory is
either complete or untouched.  Exit codes: 0 ok, 1 usage error, 2
simulation error.  The JAMSIM_SEED environment variable overrides the
default seed; an explicit [sim] seed or --seed flag wins over it.
"""

from __future__ import annotations

import argparse
import json
import os
import shutil
import sys
import tempfile
from dataclasses import replace
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .analysis import power_spectrum
from .errors import JamSimError, ParseError
from .filterbank import FilterBank, frequency_response
from .pipeline import (
    DEFAULT_SEED,
    PipelineConfig,
    Scenario,
    ScenarioReport,
    build_pipeline,
    builtin_scenarios,
    default_pipeline_config,
    run_scenario,
)
from .scenario_io import apply_seed, parse_scenario_file, write_spectrum_csv, write_timeseries_csv

SEED_ENV_VAR = "JAMSIM_SEED"
#: Timestamp placeholder written under --reproducible.
REPRODUCIBLE_TIMESTAMP = "reproducible"

_RUN_OUTPUTS = {
    "jammer1": "jammer1.csv",
    "jammer2": "jammer2.csv",
    "trigger1": "trigger1.csv",
    "trigger2": "trigger2.csv",
    "input_spectrum": "input_spectrum.csv",
    "manifest": "manifest.json",
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="jamsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command")

    run = sub.add_parser("run", help="execute one scenario and write its outputs")
    run.add_argument("scenario", nargs="?", help="scenario file path")
    run.add_argument("--builtin", type=int, metavar="N", help="run built-in scenario N (1-4)")
    run.add_argument("--out", required=True, metavar="DIR", help="output directory")
    run.add_argument("--seed", type=int, help="noise seed (wins over file and environment)")
    run.add_argument("--fs", type=float, metavar="HZ", help="override sample rate")
    run.add_argument("--samples", type=int, metavar="N", help="override buffer length")
    run.add_argument("--reproducible", action="store_true",
                     help="write a fixed timestamp placeholder in the manifest")

    sub.add_parser("scenarios", help="list the built-in scenarios")

    resp = sub.add_parser("response", help="dump one detection filter's frequency response")
    resp.add_argument("--filter", type=int, required=True, metavar="K", help="filter id (1-4)")
    resp.add_argument("--out", required=True, metavar="FILE", help="output CSV path")
    return parser


def _ambient_seed() -> int:
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise _UsageError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}") from None


def _resolve_run(args) -> tuple[Scenario, PipelineConfig]:
    if (args.scenario is None) == (args.builtin is None):
        raise _UsageError("run needs exactly one of a scenario file or --builtin N")
    ambient = _ambient_seed()
    if args.builtin is not None:
        builtins = builtin_scenarios()
        if not 1 <= args.builtin <= len(builtins):
            raise _UsageError(f"--builtin must be in 1..{len(builtins)}")
        scenario = builtins[args.builtin - 1]
        config = default_pipeline_config(seed=ambient)
    else:
        try:
            with open(args.scenario, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise _UsageError(f"cannot read scenario file: {exc}") from None
        scenario, config = parse_scenario_file(text, default_seed=ambient)
    if args.seed is not None:
        config = apply_seed(config, args.seed)
    if args.fs is not None:
        config = replace(config, sample_rate=args.fs)
    if args.samples is not None:
        config = replace(config, n_samples=args.samples)
    return scenario, config


def _manifest(scenario: Scenario, config: PipelineConfig, report: ScenarioReport,
              reproducible: bool) -> dict:
    def noise_echo(jcfg):
        return {
            "gain": jcfg.gain,
            "gaussian_sigma_v": jcfg.noise.gaussian_sigma,
            "rayleigh_sigma_v": jcfg.noise.rayleigh_sigma,
            "seed": jcfg.noise.seed,
        }

    created = REPRODUCIBLE_TIMESTAMP if reproducible else (
        datetime.now(timezone.utc).isoformat(timespec="seconds"))
    return {
        "tool": "jamsim",
        "version": __version__,
        "created_at": created,
        "seed": config.jammer3.noise.seed,
        "scenario": {
            "name": scenario.name,
            "tones": [
                {"freq_mhz": t.frequency / 1e6, "amplitude_v": t.amplitude, "phase_rad": t.phase}
                for t in scenario.tones
            ],
        },
        "config": {
            "sample_rate_hz": config.sample_rate,
            "n_samples": config.n_samples,
            "filter_order": config.filter_order,
            "measure_skip_fraction": config.measure_skip_fraction,
            "trigger": {
                "threshold_v": config.trigger.threshold,
                "high_v": config.trigger.high_level,
                "envelope_window": config.trigger.envelope_window,
            },
            "jammer3": noise_echo(config.jammer3),
            "jammer40": noise_echo(config.jammer40),
        },
        "outputs": {k: v for k, v in _RUN_OUTPUTS.items() if k != "manifest"},
        "results": {
            "trigger1_level_v": report.trigger1_level,
            "trigger2_level_v": report.trigger2_level,
            "trigger1_stable": report.trigger1_stable,
            "trigger2_stable": report.trigger2_stable,
            "jammer1_rms_v": report.jammer1_rms,
            "jammer2_rms_v": report.jammer2_rms,
        },
        "verdicts": dict(report.verdicts),
    }


def _write_run_dir(out_dir: str, report: ScenarioReport, manifest: dict) -> None:
    """Populate a temp directory, then swap it in; never leave a partial DIR."""
    out_dir = os.path.abspath(out_dir)
    parent = os.path.dirname(out_dir) or "."
    os.makedirs(parent, exist_ok=True)
    tmp = tempfile.mkdtemp(prefix=".jamsim-", dir=parent)
    try:
        write_timeseries_csv(report.branch_buffers["jammer1"],
                             os.path.join(tmp, _RUN_OUTPUTS["jammer1"]))
        write_timeseries_csv(report.branch_buffers["jammer2"],
                             os.path.join(tmp, _RUN_OUTPUTS["jammer2"]))
        write_timeseries_csv(report.gates["trigger1"].to_buffer(),
                             os.path.join(tmp, _RUN_OUTPUTS["trigger1"]))
        write_timeseries_csv(report.gates["trigger2"].to_buffer(),
                             os.path.join(tmp, _RUN_OUTPUTS["trigger2"]))
        write_spectrum_csv(power_spectrum(report.branch_buffers["input"]),
                           os.path.join(tmp, _RUN_OUTPUTS["input_spectrum"]))
        with open(os.path.join(tmp, _RUN_OUTPUTS["manifest"]), "w",
                  encoding="utf-8", newline="\n") as fh:
            fh.write(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    except BaseException:
        shutil.rmtree(tmp, ignore_errors=True)
        raise
    if os.path.isdir(out_dir):
        shutil.rmtree(out_dir)
    elif os.path.exists(out_dir):
        os.remove(out_dir)
    os.rename(tmp, out_dir)


def _cmd_run(args) -> int:
    scenario, config = _resolve_run(args)
    pipeline = build_pipeline(config)
    report = run_scenario(pipeline, scenario)
    manifest = _manifest(scenario, config, report, args.reproducible)
    _write_run_dir(args.out, report, manifest)
    verdict = ", ".join(
        f"{band}: {'JAMMING' if active else 'idle'}"
        for band, active in (("band3", report.verdicts["band3"]),
                             ("band40", report.verdicts["band40"]))
    )
    print(verdict)
    return 0


def _cmd_scenarios() -> int:
    for i, scenario in enumerate(builtin_scenarios(), start=1):
        tones = " ".join(f"{t.frequency / 1e6:g}" for t in scenario.tones)
        print(f"{i}  {scenario.name}  tones_mhz: {tones}")
    return 0


def _cmd_response(args) -> int:
    if not 1 <= args.filter <= 4:
        raise _UsageError("--filter must be in 1..4")
    bank = FilterBank.design(default_pipeline_config().sample_rate)
    stages = bank.by_id(args.filter)
    freqs = np.linspace(0.0, stages.sample_rate / 2.0, 2049)
    mag_db, phase = frequency_response(stages, freqs)
    out = os.path.abspath(args.out)
    os.makedirs(os.path.dirname(out) or ".", exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".jamsim-", dir=os.path.dirname(out) or ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("freq_hz,magnitude_db,phase_rad\n")
            for f, m, p in zip(freqs, mag_db, phase):
                fh.write(f"{f:.8e},{m:.8e},{p:.8e}\n")
    except BaseException:
        os.unlink(tmp)
        raise
    os.replace(tmp, out)
    return 0


def run_cli(argv=None) -> int:
    """Parse argv and execute; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "scenarios":
            return _cmd_scenarios()
        if args.command == "response":
            return _cmd_response(args)
        raise _UsageError("missing command (run, scenarios, response)")
    except _UsageError as exc:
        print(f"jamsim: error: {exc}", file=sys.stderr)
        return 1
    except ParseError as exc:
        print(f"jamsim: scenario file error: {exc}", file=sys.stderr)
        return 1
    except JamSimError as exc:
        print(f"jamsim: simulation error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"jamsim: i/o error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # argparse --help
        return int(exc.code or 0)


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
