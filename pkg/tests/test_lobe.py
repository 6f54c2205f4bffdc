import numpy as np
import pytest

from invertor.exceptions import CoherenceError, ConfigurationError
from invertor.simulators import (
    EmissionSegment,
    LobeParams,
    LobeSimulator,
    WellLog,
    WellLogSet,
    default_well_locations,
    lobe_distance,
    lobe_emit,
    lobe_simulate,
    make_synthetic_dataset,
    read_well_logs,
    write_well_logs,
)
from invertor.trace import init_trace, trace_from_params
from lobe_checks import check_forward_run


def segment(heights, porosity, base=0.0):
    h = np.asarray(heights, dtype=float)
    return EmissionSegment("W1", base, float(h[-1]) if len(h) else base, h,
                           np.asarray(porosity, dtype=float))


class TestGeometry:
    def test_decoding(self):
        p = LobeParams.from_raw([0.5, 0.0, 1.0, 0.0, 1.0])
        assert p.center == pytest.approx(31.5)
        assert (p.half_width, p.amplitude, p.base_porosity, p.decay) == (4.0, 2.0, 0.05, 0.5)

    def test_apex_thickness_on_flat_surface(self):
        sim = LobeSimulator(horizon=1, wells=[0, 63])
        for c, k in ((0.0, 0), (1.0, 1)):
            u = np.array([c, 0.3, 0.6, 0.5, 0.5])
            s1 = sim.simulate(sim.initialize(), u)
            assert s1.surface[sim.wells[k]] == LobeParams.from_raw(u).amplitude

    def test_zero_beyond_half_width(self):
        sim = LobeSimulator(horizon=1, wells=[10, 30])
        u = np.array([0.0, 0.0, 0.5, 0.5, 0.5])  # center 0, W = 4
        s1 = sim.simulate(sim.initialize(), u)
        assert np.all(s1.surface[4:] == 0.0)
        assert len(s1.segments[0]) == 0 and len(s1.segments[1]) == 0

    def test_compensation_thins_on_highs(self):
        sim = LobeSimulator(horizon=2, wells=[20])
        s0 = sim.initialize()
        first = sim.simulate(s0, [20 / 63, 0.2, 0.8, 0.5, 0.5])
        on_flat = sim.simulate(s0, [20 / 63, 0.5, 0.5, 0.5, 0.5])
        on_high = sim.simulate(first, [20 / 63, 0.5, 0.5, 0.5, 0.5])
        gain_high = on_high.surface[20] - first.surface[20]
        assert gain_high < on_flat.surface[20]

    def test_sample_count_for_thin_lobe(self):
        # amplitude 0.2 at the apex on a flat surface, dh = 0.05
        sim = LobeSimulator(horizon=1, wells=[0])
        s1 = sim.simulate(sim.initialize(), [0.0, 0.5, 0.0, 0.5, 0.5])
        seg = s1.segments[0]
        assert seg.top == pytest.approx(0.2)
        assert len(seg) == 4
        np.testing.assert_allclose(seg.heights, [0.05, 0.1, 0.15, 0.2])

    def test_constant_porosity_without_decay(self):
        sim = LobeSimulator(horizon=1, wells=[0])
        s1 = sim.simulate(sim.initialize(), [0.0, 0.5, 1.0, 0.5, 0.0])
        seg = s1.segments[0]
        assert np.all(seg.porosity == LobeParams.from_raw([0, 0, 0, 0.5, 0]).base_porosity)

    def test_porosity_decays_upward(self):
        sim = LobeSimulator(horizon=1, wells=[0])
        seg = sim.simulate(sim.initialize(), [0.0, 0.5, 1.0, 1.0, 1.0]).segments[0]
        assert np.all(np.diff(seg.porosity) < 0)
        assert seg.porosity[-1] == pytest.approx(0.35 * 0.5)

    def test_simulate_is_pure_and_deterministic(self):
        sim = LobeSimulator(horizon=2)
        s0 = sim.initialize()
        u = np.array([0.3, 0.4, 0.5, 0.6, 0.7])
        assert sim.simulate(s0, u) == sim.simulate(s0, u)
        assert np.all(s0.surface == 0.0) and s0.step == 0

    def test_functional_simulate(self):
        sim = LobeSimulator(horizon=1)
        u = np.full(5, 0.5)
        a = lobe_simulate(sim.initialize(), u, sim.wells)
        assert a == sim.simulate(sim.initialize(), u)

    def test_randomized_consistency(self):
        sim = LobeSimulator(horizon=12)
        rng = np.random.default_rng(1)
        for _ in range(50):
            check_forward_run(sim, rng.random((12, 5)))


class TestEmit:
    def test_emit_matches_segments(self):
        sim = LobeSimulator(horizon=1)
        s0 = sim.initialize()
        s1 = sim.simulate(s0, np.full(5, 0.5))
        assert lobe_emit(s0, s1, sim.wells) == s1.segments == sim.emit(s1)

    def test_emit_rejects_unrelated_states(self):
        sim = LobeSimulator(horizon=2)
        s0 = sim.initialize()
        s1 = sim.simulate(s0, np.full(5, 0.5))
        s2 = sim.simulate(s1, np.full(5, 0.5))
        with pytest.raises(CoherenceError):
            lobe_emit(s0, s2)


class TestDistance:
    def test_identical(self):
        log = WellLog("W1", 0, [0.1, 0.2], [0.3, 0.2])
        assert lobe_distance(segment([0.1, 0.2], [0.3, 0.2]), log) == 0.0

    def test_interpolated_midpoint(self):
        log = WellLog("W1", 0, [0.0, 1.0], [0.1, 0.3])
        assert lobe_distance(segment([0.5], [0.2]), log) == pytest.approx(0.0, abs=1e-15)
        assert lobe_distance(segment([0.5], [0.0]), log) == pytest.approx(0.2)

    def test_single_sample(self):
        log = WellLog("W1", 0, [0.5], [0.1])
        assert lobe_distance(segment([0.5], [0.3]), log) == pytest.approx(0.2)

    def test_euclidean(self):
        log = WellLog("W1", 0, [1.0, 2.0], [0.0, 0.0])
        assert lobe_distance(segment([1.0, 2.0], [0.3, 0.4]), log) == pytest.approx(0.5)
        assert lobe_distance(segment([1.0, 2.0], [0.3, 0.4]), log,
                             length_normalized=True) == pytest.approx(0.5 / np.sqrt(2))

    def test_above_observed_top_compares_to_zero(self):
        log = WellLog("W1", 0, [0.5], [0.1])
        assert lobe_distance(segment([0.7], [0.25]), log) == pytest.approx(0.25)

    def test_empty_log_and_empty_segment(self):
        empty = WellLog("W1", 0, [], [])
        assert lobe_distance(segment([0.1, 0.2], [0.3, 0.4]), empty) == pytest.approx(0.5)
        assert lobe_distance(segment([], []), WellLog("W1", 0, [0.1], [0.2])) == 0.0

    def test_terminal_penalty(self):
        sim = LobeSimulator(horizon=2, wells=[20, 40], terminal_penalty=True)
        data, truth = make_synthetic_dataset(sim, 4)
        off = LobeSimulator(horizon=2, wells=[20, 40])
        params = truth.copy()
        params[1, 2] = 0.0 if params[1, 2] > 0.5 else 1.0
        with_pen = trace_from_params(sim, params, data, 1.0)
        without = trace_from_params(off, params, data, 1.0)
        assert with_pen.step_loglik[0] == without.step_loglik[0]
        assert with_pen.step_loglik[1] <= without.step_loglik[1]


class TestSyntheticData:
    def test_seed_determinism(self):
        sim = LobeSimulator(horizon=6)
        a, ta = make_synthetic_dataset(sim, 42)
        b, tb = make_synthetic_dataset(sim, 42)
        assert a == b
        np.testing.assert_array_equal(ta, tb)
        c, _ = make_synthetic_dataset(sim, 43)
        assert c != a

    def test_tops_equal_final_surface(self):
        sim = LobeSimulator(horizon=6)
        logs, truth = make_synthetic_dataset(sim, 42)
        final = trace_from_params(sim, truth, logs, 1.0).states[-1]
        for g in sim.wells:
            assert logs.at(g).top == final.surface[g]

    def test_truth_scores_best(self):
        sim = LobeSimulator(horizon=6, terminal_penalty=True)
        logs, truth = make_synthetic_dataset(sim, 42)
        assert trace_from_params(sim, truth, logs, 1.0).total_logscore == 0.0
        rng = np.random.default_rng(0)
        for _ in range(20):
            assert init_trace(sim, logs, 1.0, rng).total_logscore < 0.0

    def test_well_mismatch_rejected(self):
        logs, _ = make_synthetic_dataset(LobeSimulator(horizon=2, wells=[5, 9]), 1)
        with pytest.raises(ConfigurationError):
            LobeSimulator(horizon=2, wells=[5, 10]).check_data(logs)


class TestWellLogs:
    def test_round_trip(self, tmp_path):
        sim = LobeSimulator(horizon=8)
        logs, _ = make_synthetic_dataset(sim, 9)
        path = tmp_path / "wells.csv"
        write_well_logs(logs, path)
        back = read_well_logs(path)
        assert back == WellLogSet(logs.nonempty())
        write_well_logs(back, tmp_path / "again.csv")
        assert (tmp_path / "again.csv").read_bytes() == path.read_bytes()
        assert path.read_text().splitlines()[0] == "well_id,x,height_m,porosity"

    def test_validation(self):
        with pytest.raises(ConfigurationError):
            WellLog("W1", 0, [0.2, 0.1], [0.1, 0.1])
        with pytest.raises(ConfigurationError):
            WellLog("W1", 0, [0.1], [1.5])
        with pytest.raises(ConfigurationError):
            WellLogSet(())
        log = WellLog("W1", 0, [0.1], [0.1])
        with pytest.raises(ConfigurationError):
            WellLogSet((log, WellLog("W1", 3, [0.1], [0.1])))

    def test_malformed_csv(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("well,x,h,p\nW1,0,0.1,0.2\n")
        with pytest.raises(ConfigurationError):
            read_well_logs(path)
        path.write_text("well_id,x,height_m,porosity\nW1,0,abc,0.2\n")
        with pytest.raises(ConfigurationError):
            read_well_logs(path)
        path.write_text("well_id,x,height_m,porosity\n")
        with pytest.raises(ConfigurationError):
            read_well_logs(path)

    def test_missing_well_reads_empty(self):
        logs = WellLogSet((WellLog("W1", 3, [0.1], [0.2]),))
        assert len(logs.at(7)) == 0

    def test_default_wells(self):
        wells = default_well_locations()
        assert len(wells) == 7 and len(set(wells)) == 7
        assert all(0 <= g < 64 for g in wells)
        with pytest.raises(ConfigurationError):
            default_well_locations(0)
