import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from invertor import SimulatorInversion
from invertor.exceptions import ConfigurationError
from invertor.simulators import DiscreteOracle, LobeSimulator, make_synthetic_dataset, write_well_logs


class TestSimulatorInversion:
    def test_params_round_trip(self):
        est = SimulatorInversion(method="mh", iterations=50, random_state=0)
        params = est.get_params()
        assert params["method"] == "mh" and params["iterations"] == 50
        other = clone(est)
        assert other.get_params() == params
        other.set_params(gamma=2.0)
        assert other.gamma == 2.0 and est.gamma == 1.0

    def test_fit_oracle(self, oracle):
        sim, data = oracle
        est = SimulatorInversion(simulator=sim, method="pgibbs", iterations=20, particles=5,
                                 gamma=4.0, random_state=1).fit(data)
        assert est.params_.shape == (3, 1)
        assert len(est.logscore_trajectory_) == 20
        assert est.score(data) == est.logscore_
        assert len(est.predict()) == 3

    def test_fit_well_log_path(self, tmp_path):
        sim = LobeSimulator(horizon=10)
        logs, _ = make_synthetic_dataset(sim, 2)
        path = tmp_path / "wells.csv"
        write_well_logs(logs, path)
        est = SimulatorInversion(method="seqmh", per_step_transitions=2, random_state=0).fit(path)
        assert est.simulator_.terminal_penalty
        assert est.params_.shape == (10, 5)
        assert len(est.logscore_trajectory_) == 110
        assert np.isfinite(est.score(logs))

    def test_deterministic(self, oracle):
        sim, data = oracle
        kw = dict(simulator=sim, method="hybrid", particles=3, pg_sweeps=1, mh_per_cycle=2,
                  cycles=3, random_state=5)
        a = SimulatorInversion(**kw).fit(data)
        b = SimulatorInversion(**kw).fit(data)
        np.testing.assert_array_equal(a.logscore_trajectory_, b.logscore_trajectory_)

    def test_not_fitted(self):
        with pytest.raises(NotFittedError):
            SimulatorInversion().predict()

    def test_invalid(self, oracle):
        sim, data = oracle
        with pytest.raises(ValueError):
            SimulatorInversion(simulator=sim, method="mh", iterations=0).fit(data)
        with pytest.raises(ValueError):
            SimulatorInversion(simulator=sim, gamma=-1.0).fit(data)
        with pytest.raises(ConfigurationError):
            SimulatorInversion(simulator=sim, method="anneal").fit(data)
        with pytest.raises(ConfigurationError):
            SimulatorInversion().fit(np.zeros(3))
        with pytest.raises(ConfigurationError):
            SimulatorInversion(simulator=DiscreteOracle(), method="mh").fit([0.1, np.nan, 0.2])
