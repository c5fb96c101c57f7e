import numpy as np
import pytest

from jamsim.errors import BandAboveNyquist, FrequencyAboveNyquist
from jamsim.filterbank import BAND_FILTER_SPECS, frequency_response
from jamsim.pipeline import (
    PipelineConfig,
    Scenario,
    build_pipeline,
    builtin_scenarios,
    default_pipeline_config,
    run_scenario,
)
from jamsim.signal_core import ToneSpec


@pytest.fixture(scope="module")
def pipeline():
    return build_pipeline(default_pipeline_config())


def single_tone_scenario(freq_mhz, name="probe"):
    return Scenario(name=name, tones=(ToneSpec(frequency=freq_mhz * 1e6, amplitude=2.0),))


class TestBuild:
    def test_structure(self, pipeline):
        assert tuple(f.spec.id for f in pipeline.filters.filters) == (1, 2, 3, 4)
        assert pipeline.trigger_config.envelope_window == 6
        assert pipeline.config.jammer3.noise.seed == 42
        assert pipeline.config.jammer40.noise.seed == 43

    def test_sample_rate_too_low_for_the_bands(self):
        with pytest.raises(BandAboveNyquist):
            build_pipeline(default_pipeline_config(sample_rate=4.0e9))

    def test_low_order_still_rejects_the_other_band(self):
        loose = build_pipeline(default_pipeline_config(filter_order=2))
        uplink = loose.filters.by_id(2)
        band40 = loose.filters.by_id(4)
        assert frequency_response(uplink, [2355e6])[0][0] <= -15.0
        assert frequency_response(band40, [1842.5e6])[0][0] <= -15.0

    def test_config_validation(self):
        with pytest.raises(ValueError):
            PipelineConfig(n_samples=0)
        with pytest.raises(ValueError):
            PipelineConfig(measure_skip_fraction=1.0)


class TestBuiltinScenarios:
    def test_exactly_four(self):
        assert len(builtin_scenarios()) == 4

    def test_tone_sets(self):
        sets = [tuple(t.frequency / 1e6 for t in s.tones) for s in builtin_scenarios()]
        assert sets == [
            (1200.0, 1500.0, 1600.0, 3000.0),
            (1200.0, 1740.0, 1850.0, 3000.0),
            (1200.0, 1300.0, 2340.0, 3000.0),
            (1740.0, 1850.0, 2340.0, 3000.0),
        ]
        for scenario in builtin_scenarios():
            assert all(t.amplitude == 2.0 for t in scenario.tones)

    def test_first_set_avoids_every_passband(self):
        for tone in builtin_scenarios()[0].tones:
            f_mhz = tone.frequency / 1e6
            for spec in BAND_FILTER_SPECS:
                assert not spec.band_low < f_mhz < spec.band_high

    def test_third_set_hits_the_tdd_band(self):
        freqs = [t.frequency / 1e6 for t in builtin_scenarios()[2].tones]
        spec = BAND_FILTER_SPECS[3]
        assert any(spec.band_low < f < spec.band_high for f in freqs)


class TestRunScenario:
    def test_out_of_band_input_stays_idle(self, pipeline):
        report = run_scenario(pipeline, builtin_scenarios()[0])
        assert report.trigger1_level == 0.0
        assert report.trigger2_level == 0.0
        assert report.jammer1_rms < 0.05
        assert report.jammer2_rms < 0.05
        assert report.verdicts == {"band3": False, "band40": False}

    def test_band3_input_fires_only_jammer1(self, pipeline):
        report = run_scenario(pipeline, builtin_scenarios()[1])
        assert report.trigger1_level == 5.0
        assert report.trigger2_level == 0.0
        assert report.jammer1_rms > 1.0
        assert report.jammer2_rms < 0.05
        assert report.verdicts == {"band3": True, "band40": False}

    def test_both_bands_fire_both_jammers(self, pipeline):
        report = run_scenario(pipeline, builtin_scenarios()[3])
        assert report.trigger1_level == 5.0
        assert report.trigger2_level == 5.0
        assert report.jammer1_rms > 1.0
        assert report.jammer2_rms > 1.0
        assert report.verdicts == {"band3": True, "band40": True}

    def test_silence_keeps_everything_at_zero(self, pipeline):
        report = run_scenario(pipeline, Scenario(name="silence", tones=()))
        assert report.trigger1_level == 0.0
        assert report.trigger2_level == 0.0
        assert np.all(report.branch_buffers["jammer1"].samples == 0.0)
        assert np.all(report.branch_buffers["jammer2"].samples == 0.0)

    def test_jamming_happens_exactly_when_its_trigger_fires(self, pipeline):
        for seed in (1, 2, 3):
            cfg = default_pipeline_config(seed=seed)
            p = build_pipeline(cfg)
            for scenario in builtin_scenarios():
                report = run_scenario(p, scenario)
                assert (report.jammer1_rms > 0.5) == (report.trigger1_level == 5.0)
                assert (report.jammer2_rms > 0.5) == (report.trigger2_level == 5.0)

    def test_full_band_filter_output_is_exported_but_unwired(self, pipeline):
        report = run_scenario(pipeline, builtin_scenarios()[1])
        full_band = report.branch_buffers["filter1"]
        # Both Band 3 tones pass the full-band filter.
        assert np.abs(full_band.samples[1024:]).max() > 1.0
        assert set(report.branch_buffers) == {
            "input", "filter1", "filter2", "filter3", "filter4", "jammer1", "jammer2"}
        assert set(report.gates) == {"trigger1", "trigger2"}

    def test_marginal_tone_is_reported_unstable_not_resolved_silently(self, pipeline):
        # Just outside the TDD band edge the envelope straddles the
        # threshold, so the gate chatters: the report must say so.
        report = run_scenario(pipeline, single_tone_scenario(2415.0))
        assert not report.trigger2_stable
        assert report.trigger2_level in (0.0, 5.0)

    def test_settled_gates_are_flagged_stable(self, pipeline):
        report = run_scenario(pipeline, builtin_scenarios()[1])
        assert report.trigger1_stable and report.trigger2_stable

    def test_tone_above_nyquist_is_rejected_at_run_time(self, pipeline):
        with pytest.raises(FrequencyAboveNyquist):
            run_scenario(pipeline, single_tone_scenario(6000.0))

    def test_overrides_rebuild_the_pipeline(self, pipeline):
        scenario = Scenario(name="loose", tones=(ToneSpec(1.74e9, 2.0),),
                            overrides={"filter_order": 2})
        report = run_scenario(pipeline, scenario)
        assert report.trigger1_level == 5.0


class TestSweepSpotChecks:
    @pytest.mark.parametrize("freq_mhz,fires", [
        (1700.0, False), (1715.0, True), (1780.0, True), (1795.0, False)])
    def test_band3_uplink_edges(self, pipeline, freq_mhz, fires):
        report = run_scenario(pipeline, single_tone_scenario(freq_mhz))
        assert (report.trigger1_level == 5.0) == fires

    @pytest.mark.parametrize("freq_mhz,fires", [
        (2295.0, False), (2310.0, True), (2400.0, True), (2415.0, False)])
    def test_band40_edges(self, pipeline, freq_mhz, fires):
        report = run_scenario(pipeline, single_tone_scenario(freq_mhz))
        assert (report.trigger2_level == 5.0) == fires
