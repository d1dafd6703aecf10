import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from herdgrowth.abm import (
    DiffusionParams,
    JumpPath,
    KirmanParams,
    Seed,
    coupled_tfp_path,
    ensemble_mean_on_grid,
    kirman_occupancy,
    log_tfp_on_grid,
    occupancy,
    open_uniforms,
    simulate_adoption,
    simulate_adoption_ensemble,
    simulate_kirman,
    stationary_oracle,
    total_variation,
)
from herdgrowth.errors import DomainError
from herdgrowth.model import AdoptionParams, eval_x


def const_path(x, n, t_max=10.0):
    return JumpPath(np.zeros(1), np.array([x]), n, t_max)


class TestSeeds:
    def test_run_streams_match_spawn(self):
        children = np.random.SeedSequence(42).spawn(3)
        for i, child in enumerate(children):
            a = Seed(42, i).generator().random(4)
            b = np.random.Generator(np.random.PCG64(child)).random(4)
            assert np.array_equal(a, b)

    def test_open_interval(self):
        u = open_uniforms(np.random.default_rng(0), 100_000)
        assert u.min() > 0 and u.max() < 1

    @pytest.mark.parametrize("bad", [-1, 2**64])
    def test_range(self, bad):
        with pytest.raises(DomainError):
            Seed(bad)


class TestRates:
    @pytest.mark.parametrize("x_count", [0, 3, 17, 40])
    def test_kirman_scaling(self, x_count):
        p = KirmanParams(0.3, 0.7, 0.05, 40)
        up, down = p.transition_rates(x_count / p.n)
        assert p.n**2 * up == pytest.approx(p.birth_rate(x_count), rel=1e-12, abs=1e-12)
        assert p.n**2 * down == pytest.approx(p.death_rate(x_count), rel=1e-12, abs=1e-12)

    @pytest.mark.parametrize("x_count", [0, 5, 99])
    def test_adoption_scaling(self, x_count):
        p = DiffusionParams(0.05, 0.5, 100)
        assert p.n**2 * p.transition_rate(x_count / p.n) == pytest.approx(p.rate(x_count), rel=1e-12)

    def test_invalid(self):
        with pytest.raises(DomainError):
            DiffusionParams(0.0, 0.0, 10)
        with pytest.raises(DomainError):
            DiffusionParams(0.1, 0.1, 0)
        with pytest.raises(DomainError):
            KirmanParams(0.0, 0.0, 0.0, 5)


class TestAdoption:
    def test_frozen_without_trigger(self):
        path = simulate_adoption(DiffusionParams(0.0, 1.0, 100), 0, 1000.0, 7)
        assert path.n_events == 0 and list(path.states) == [0]

    def test_saturated_is_absorbing(self):
        path = simulate_adoption(DiffusionParams(0.3, 0.4, 100), 100, 1000.0, 7)
        assert path.n_events == 0 and list(path.states) == [100]

    def test_runs_to_absorption(self):
        path = simulate_adoption(DiffusionParams(0.5, 0.5, 50), 0, 1e6, 3)
        assert path.states[-1] == 50 and path.times[-1] < 1e6

    @settings(max_examples=25, deadline=None)
    @given(st.floats(0.0, 1.0), st.floats(0.01, 2.0), st.integers(1, 300), st.integers(0, 2**64 - 1))
    def test_path_shape(self, sigma, h, n, seed):
        p = DiffusionParams(sigma, h, n)
        path = simulate_adoption(p, 0, 20.0, seed)
        assert path.times[0] == 0.0
        assert np.all(np.diff(path.times) > 0)
        assert np.all(np.diff(path.states) == 1)
        assert path.times[-1] <= 20.0
        assert 0 <= path.states[-1] <= n

    def test_reproducible(self):
        p = DiffusionParams(0.05, 0.5, 2000)
        a = simulate_adoption(p, 0, 30.0, Seed(11, 4))
        b = simulate_adoption(p, 0, 30.0, Seed(11, 4))
        assert a.times.tobytes() == b.times.tobytes() and a.states.tobytes() == b.states.tobytes()
        c = simulate_adoption(p, 0, 30.0, Seed(11, 5))
        assert not np.array_equal(a.times[:10], c.times[:10])

    def test_bad_args(self):
        p = DiffusionParams(0.1, 0.1, 10)
        with pytest.raises(DomainError):
            simulate_adoption(p, 11, 1.0, 0)
        with pytest.raises(DomainError):
            simulate_adoption(p, 0, 0.0, 0)

    def test_first_waiting_time_is_exponential(self):
        # time to the first adoption from X=0 is Exp(n*sigma)
        p = DiffusionParams(0.2, 0.0, 5)
        first = np.array([simulate_adoption(p, 0, 100.0, Seed(9, i)).times[1] for i in range(4000)])
        assert first.mean() == pytest.approx(1 / (p.n * p.sigma), rel=0.05)

    def test_mean_field_convergence_with_n(self):
        grid = np.arange(0, 30.01, 0.5)
        exact = eval_x(AdoptionParams(0.05, 0.5), grid)
        gaps = []
        for n in (100, 10_000):
            paths = simulate_adoption_ensemble(DiffusionParams(0.05, 0.5, n), 0, 30.0, 123, 60)
            gaps.append(np.max(np.abs(ensemble_mean_on_grid(paths, grid) - exact)))
        assert gaps[1] < gaps[0]


class TestKirman:
    def test_frozen_consensus(self):
        path = simulate_kirman(KirmanParams(0.0, 0.0, 1.0, 20), 0, 1e3, 1)
        assert path.n_events == 0

    def test_two_state(self):
        a, b = 0.3, 0.9
        p = KirmanParams(a, b, 5.0, 1)
        occ = kirman_occupancy(p, 0, 1e4 / (a + b), 21)
        assert occ[1] == pytest.approx(a / (a + b), rel=0.02)

    def test_steps_are_unit(self):
        path = simulate_kirman(KirmanParams(0.1, 0.1, 1.0, 30), 15, 50.0, 5)
        assert np.all(np.abs(np.diff(path.states)) == 1)
        assert path.states.min() >= 0 and path.states.max() <= 30
        assert np.all(np.diff(path.times) > 0)

    def test_streaming_occupancy_matches_path(self):
        p = KirmanParams(0.1, 0.2, 1.0, 25)
        path = simulate_kirman(p, 3, 3000.0, 77)
        assert path.n_events > 2**17  # spans several uniform blocks
        assert np.allclose(occupancy(path), kirman_occupancy(p, 3, 3000.0, 77), rtol=1e-9, atol=1e-12)

    def test_reproducible(self):
        p = KirmanParams(0.1, 0.1, 1.0, 10)
        a, b = simulate_kirman(p, 5, 20.0, 8), simulate_kirman(p, 5, 20.0, 8)
        assert a.times.tobytes() == b.times.tobytes() and a.states.tobytes() == b.states.tobytes()

    def test_occupancy_against_oracle_small(self):
        p = KirmanParams(0.5, 0.3, 0.2, 8)
        occ = kirman_occupancy(p, 0, 2e4, 5)
        assert total_variation(occ, stationary_oracle(p)) < 0.02


class TestStationaryOracle:
    def test_binomial_when_no_herding(self):
        n = 30
        pi = stationary_oracle(KirmanParams(0.4, 0.4, 0.0, n))
        binom = np.array([math.comb(n, k) for k in range(n + 1)]) / 2.0**n
        assert np.allclose(pi, binom, rtol=1e-12, atol=1e-15)

    def test_two_state(self):
        pi = stationary_oracle(KirmanParams(0.3, 0.9, 2.0, 1))
        assert pi[1] == pytest.approx(0.3 / 1.2, rel=1e-14)

    def test_bimodal_symmetric(self):
        pi = stationary_oracle(KirmanParams(0.1, 0.1, 1.0, 50))
        assert np.max(np.abs(pi - pi[::-1])) < 1e-12
        assert pi[0] > pi[25] and pi[50] > pi[25]
        assert pi.sum() == pytest.approx(1.0, abs=1e-14)

    def test_absorbing_rejected(self):
        with pytest.raises(DomainError):
            stationary_oracle(KirmanParams(0.1, 0.0, 1.0, 10))


class TestEnsembleMean:
    def test_constant_paths(self):
        grid = np.linspace(0, 5, 6)
        assert np.all(ensemble_mean_on_grid([const_path(0, 10)], grid) == 0)
        assert np.all(ensemble_mean_on_grid([const_path(0, 10), const_path(10, 10)], grid) == 0.5)

    def test_right_continuous(self):
        path = JumpPath(np.array([0.0, 1.0, 2.0]), np.array([0, 1, 2]), 2, 3.0)
        assert list(ensemble_mean_on_grid([path], [0.0, 0.999, 1.0, 2.5])) == [0.0, 0.0, 0.5, 1.0]

    def test_validation(self):
        with pytest.raises(DomainError):
            ensemble_mean_on_grid([const_path(0, 10), const_path(0, 11)], [0.0])
        with pytest.raises(DomainError):
            ensemble_mean_on_grid([const_path(0, 10, t_max=5.0)], [0.0, 6.0])


class TestCoupledTfp:
    def test_saturated_is_flat(self):
        traj = coupled_tfp_path(const_path(10, 10), 0.1, 2.0)
        assert np.all(traj.values == 2.0)

    def test_no_adopters_full_speed(self):
        traj = coupled_tfp_path(const_path(0, 10, t_max=7.0), 0.1, 2.0)
        assert traj.times[-1] == 7.0
        assert traj.final == pytest.approx(2.0 * math.exp(0.7), rel=1e-14)

    def test_piecewise_exponential(self):
        path = JumpPath(np.array([0.0, 1.0, 3.0]), np.array([0, 2, 4]), 4, 4.0)
        traj = coupled_tfp_path(path, 0.2, 1.0)
        expected = 0.2 * (1.0 * 1 + 0.5 * 2 + 0.0 * 1)
        assert math.log(traj.final) == pytest.approx(expected, rel=1e-14)
        assert log_tfp_on_grid(path, 0.2, 1.0, [2.0])[0] == pytest.approx(0.2 + 0.1, rel=1e-14)

    def test_domain(self):
        with pytest.raises(DomainError):
            coupled_tfp_path(const_path(0, 10), 0.0, 1.0)
        with pytest.raises(DomainError):
            coupled_tfp_path(const_path(0, 10), 0.1, -1.0)
