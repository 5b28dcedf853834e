import math

import numpy as np
import pytest

from bilgamma import (
    DomainError,
    GridError,
    RandomStream,
    build_mixture,
    empirical_kolmogorov,
    sample_compound_poisson,
    sample_direct,
    sample_mixture,
    sample_path,
)
from conftest import KS_CRIT_001, block_cumulant_se, single


class TestRandomStream:
    def test_same_identity_same_draws(self, pair_nonint):
        a = sample_direct(pair_nonint, 1000, RandomStream(5, 2))
        b = sample_direct(pair_nonint, 1000, RandomStream(5, 2))
        np.testing.assert_array_equal(a, b)

    def test_distinct_streams_differ(self, pair_nonint):
        a = sample_direct(pair_nonint, 1000, RandomStream(5, 0))
        b = sample_direct(pair_nonint, 1000, RandomStream(5, 1))
        assert not np.array_equal(a, b)


class TestDirectSampler:
    def test_mean_and_variance(self, pair_nonint):
        n = 1_000_000
        draws = sample_direct(pair_nonint, n, RandomStream(8))
        se_mean = draws.std(ddof=1) / math.sqrt(n)
        assert abs(draws.mean() - pair_nonint.cumulant(1)) <= 4.0 * se_mean
        est, se = block_cumulant_se(draws, 2)
        assert abs(est - pair_nonint.cumulant(2)) <= 4.0 * se

    def test_size_validation(self, pair_nonint):
        with pytest.raises(DomainError):
            sample_direct(pair_nonint, 0, RandomStream(1))


class TestMixtureSampler:
    def test_agrees_with_direct(self, pair_integer):
        rep = build_mixture(pair_integer, tail_tol=1e-10)
        n = 100_000
        a = sample_direct(pair_integer, n, RandomStream(21, 0))
        b = sample_mixture(rep, n, RandomStream(21, 1))
        assert empirical_kolmogorov(a, b) < KS_CRIT_001 * math.sqrt(2.0 / n)

    def test_degenerate_single_component(self):
        model = single(2.0, 3.0, 5.0, 0.5)
        rep = build_mixture(model)
        n = 100_000
        a = sample_direct(model, n, RandomStream(33, 0))
        b = sample_mixture(rep, n, RandomStream(33, 1))
        assert empirical_kolmogorov(a, b) < KS_CRIT_001 * math.sqrt(2.0 / n)

    def test_determinism(self, pair_integer):
        rep = build_mixture(pair_integer, tail_tol=1e-10)
        a = sample_mixture(rep, 500, RandomStream(4, 7))
        b = sample_mixture(rep, 500, RandomStream(4, 7))
        np.testing.assert_array_equal(a, b)


class TestCompoundPoisson:
    def test_atom_at_zero(self, pair_integer):
        # P(Z = 0) >= P(N = 0) = e^(-m)
        n = 20_000
        draws = sample_compound_poisson(pair_integer, 1, n, RandomStream(6))
        frac = float(np.mean(draws == 0.0))
        p0 = math.exp(-1.0)
        assert abs(frac - p0) <= 4.0 * math.sqrt(p0 * (1.0 - p0) / n)

    def test_wald_mean(self, pair_integer):
        # m = 1: jump law is the combination itself, so E[Z] = E[T]
        n = 1_000_000
        draws = sample_compound_poisson(pair_integer, 1, n, RandomStream(9))
        se = draws.std(ddof=1) / math.sqrt(n)
        assert abs(draws.mean() - pair_integer.cumulant(1)) <= 4.0 * se

    def test_empirical_cf_matches_target(self, pair_integer):
        # cf of Z_m is exp(m (phi^(1/m) - 1))
        m, n, z = 4, 1_000_000, 1.0
        draws = sample_compound_poisson(pair_integer, m, n, RandomStream(10))
        target = np.exp(m * (pair_integer.cf(z) ** (1.0 / m) - 1.0))
        emp = np.exp(1j * z * draws)
        est = emp.mean()
        se_re = emp.real.std(ddof=1) / math.sqrt(n)
        se_im = emp.imag.std(ddof=1) / math.sqrt(n)
        assert abs(est.real - target.real) <= 4.0 * se_re
        assert abs(est.imag - target.imag) <= 4.0 * se_im

    def test_cumulant_identity(self, pair_integer):
        # C_k(Z_m) = m * E[J^k] with J the 1/m-scaled jump law
        m, n = 3, 1_000_000
        rep_jump = build_mixture(pair_integer.scaled(1.0 / m), tail_tol=1e-13)
        draws = sample_compound_poisson(pair_integer, m, n, RandomStream(11))
        for k in (1, 2, 3):
            est, se = block_cumulant_se(draws, k)
            assert abs(est - m * rep_jump.moment(k)) <= 4.0 * se

    def test_determinism(self, pair_integer):
        a = sample_compound_poisson(pair_integer, 2, 300, RandomStream(1, 1))
        b = sample_compound_poisson(pair_integer, 2, 300, RandomStream(1, 1))
        np.testing.assert_array_equal(a, b)


class TestProcessPath:
    def test_grid_contract(self, pair_integer):
        with pytest.raises(GridError):
            sample_path(pair_integer, [0.5, 1.0], RandomStream(2))
        with pytest.raises(GridError):
            sample_path(pair_integer, [0.0, 0.5, 0.5], RandomStream(2))

    def test_starts_at_zero(self, pair_integer):
        path = sample_path(pair_integer, [0.0, 0.5, 1.0], RandomStream(3))
        assert path[0] == 0.0 and len(path) == 3

    def test_increments_sum_exactly(self, pair_integer):
        path = sample_path(pair_integer, [0.0, 0.5, 1.0], RandomStream(3))
        inc = np.diff(path)
        assert path[2] == pytest.approx(inc.sum() + path[0], abs=0.0)

    def test_time_one_law(self, pair_integer):
        # path value at t = 1 is distributed as the unit-time combination
        n = 40_000
        grid = np.linspace(0.0, 1.0, 5)
        vals = np.array([sample_path(pair_integer, grid, RandomStream(50, i))[-1]
                         for i in range(n)])
        ref = sample_direct(pair_integer, n, RandomStream(51))
        assert empirical_kolmogorov(vals, ref) < KS_CRIT_001 * math.sqrt(2.0 / n)

    def test_determinism(self, pair_integer):
        g = np.linspace(0.0, 2.0, 9)
        a = sample_path(pair_integer, g, RandomStream(12, 3))
        b = sample_path(pair_integer, g, RandomStream(12, 3))
        np.testing.assert_array_equal(a, b)
