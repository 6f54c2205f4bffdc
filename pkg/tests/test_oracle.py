import itertools

import numpy as np
import pytest

from invertor.exceptions import ConfigurationError
from invertor.simulators import (
    DiscreteOracle,
    empirical_tuple_distribution,
    oracle_enumerate,
    read_oracle_data,
    site_marginals,
    total_variation,
    write_oracle_data,
)
from invertor.trace import trace_from_params


class TestEnumeration:
    def test_flat_bandwidth_is_uniform(self, oracle):
        sim, data = oracle
        post = oracle_enumerate(sim, data, 0.0)
        assert post.probs.shape == (64,)
        np.testing.assert_allclose(post.probs, 1 / 64, rtol=1e-12)

    def test_sharp_bandwidth_concentrates_on_truth(self, oracle):
        sim, data = oracle
        post = oracle_enumerate(sim, data, 50.0)
        k = post.index_of(np.array([[0.875, 0.125, 0.625]]))[0]
        assert post.probs[k] > 0.99

    def test_normalized(self, oracle):
        sim, data = oracle
        for gamma in (0.0, 0.3, 4.0, 1e4):
            assert post_sum(sim, data, gamma) == pytest.approx(1.0, abs=1e-12)

    def test_matches_trace_scores(self, oracle):
        sim, data = oracle
        gamma = 1.7
        post = oracle_enumerate(sim, data, gamma)
        scores = np.array([trace_from_params(sim, np.array(t)[:, None], data, gamma).total_logscore
                           for t in itertools.product(sim.grid, repeat=3)])
        expected = np.exp(scores - scores.max())
        np.testing.assert_allclose(post.probs, expected / expected.sum(), rtol=1e-12)

    def test_refuses_large_spaces(self):
        sim = DiscreteOracle(horizon=10)
        with pytest.raises(ConfigurationError, match="exceeds"):
            oracle_enumerate(sim, np.zeros(10), 1.0)

    def test_data_length_checked(self):
        with pytest.raises(ConfigurationError):
            oracle_enumerate(DiscreteOracle(horizon=3), np.zeros(4), 1.0)

    def test_marginals_sum_to_one(self, oracle):
        sim, data = oracle
        marg = oracle_enumerate(sim, data, 2.0).site_marginals()
        assert marg.shape == (3, 4)
        np.testing.assert_allclose(marg.sum(axis=1), 1.0)


def post_sum(sim, data, gamma):
    return float(oracle_enumerate(sim, data, gamma).probs.sum())


class TestEmpirical:
    def test_index_round_trip(self, oracle):
        sim, data = oracle
        post = oracle_enumerate(sim, data, 1.0)
        np.testing.assert_array_equal(post.index_of(post.tuples), np.arange(64))

    def test_empirical_distribution(self, oracle):
        sim, data = oracle
        post = oracle_enumerate(sim, data, 1.0)
        samples = np.array([[0.125, 0.125, 0.125]] * 3 + [[0.875, 0.875, 0.875]])
        emp = empirical_tuple_distribution(samples, post)
        assert emp[0] == 0.75 and emp[63] == 0.25

    def test_total_variation(self):
        assert total_variation([0.5, 0.5], [1.0, 0.0]) == 0.5
        assert total_variation([0.2, 0.8], [0.2, 0.8]) == 0.0

    def test_site_marginals_of_product(self):
        p = np.outer([0.1, 0.9], [0.3, 0.7]).reshape(-1)
        np.testing.assert_allclose(site_marginals(p, 2, 2), [[0.1, 0.9], [0.3, 0.7]])


class TestOracleIO:
    def test_round_trip(self, tmp_path, oracle):
        _, data = oracle
        path = tmp_path / "obs.csv"
        write_oracle_data(data, path)
        np.testing.assert_array_equal(read_oracle_data(path), data)
        assert path.read_text().splitlines()[0] == "step,observation"

    def test_bad_header(self, tmp_path):
        path = tmp_path / "obs.csv"
        path.write_text("t,obs\n1,0.5\n")
        with pytest.raises(ConfigurationError):
            read_oracle_data(path)

    def test_gap(self, tmp_path):
        path = tmp_path / "obs.csv"
        path.write_text("step,observation\n1,0.5\n3,0.2\n")
        with pytest.raises(ConfigurationError):
            read_oracle_data(path)
