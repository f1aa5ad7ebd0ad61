import math

import numpy as np
import pytest

from gspa.tradeoff import (EmpiricalCurve, EpsDeltaCurve,
                           GdpCurve, GdpParam, PrivacyBudget, compose_gdp,
                           compose_tradeoff, dp_epsilon_for_delta,
                           epsdelta_tradeoff, gdp_delta_grid_supremum,
                           gdp_to_dp, gdp_tradeoff, group_gdp, normal_cdf,
                           normal_quantile)

# frozen with an independent high-precision erf routine (mpmath, 40 digits)
PHI_MINUS_1 = 0.15865525393145705
PHI_MINUS_2 = 0.02275013194817921
PHI_HALF_BAND = 0.3829249225480262   # Phi(0.5) - Phi(-0.5)
DELTA_MU_HALF_EPS_1 = 0.0068295949831145755


def test_normal_cdf_frozen_values():
    assert normal_cdf(-1.0) == pytest.approx(PHI_MINUS_1, abs=1e-15)
    assert normal_cdf(-2.0) == pytest.approx(PHI_MINUS_2, abs=1e-15)
    assert normal_cdf(0.0) == pytest.approx(0.5, abs=1e-16)


def test_normal_quantile_round_trip():
    # beyond |x| ~ 5 the upper tail saturates float ulps near 1, so stop there
    xs = np.linspace(-5.0, 5.0, 41)
    assert np.max(np.abs(normal_quantile(normal_cdf(xs)) - xs)) < 1e-9
    ps = np.linspace(1e-12, 1.0 - 1e-12, 101)
    assert np.max(np.abs(normal_cdf(normal_quantile(ps)) - ps)) < 1e-12


class TestBudgetTypes:
    def test_valid(self):
        PrivacyBudget(0.0, 0.0)
        PrivacyBudget(3.5, 1.0)
        GdpParam(0.0)

    @pytest.mark.parametrize("eps,delta", [(-0.1, 0.0), (math.inf, 0.0),
                                           (1.0, -0.01), (1.0, 1.5)])
    def test_invalid_budget(self, eps, delta):
        with pytest.raises(ValueError):
            PrivacyBudget(eps, delta)

    def test_invalid_gdp(self):
        with pytest.raises(ValueError):
            GdpParam(-0.5)


class TestGdpTradeoff:
    def test_mu_zero_is_identity(self):
        assert gdp_tradeoff(0.0, 0.3) == pytest.approx(0.7, abs=1e-12)

    def test_frozen_value(self):
        assert gdp_tradeoff(1.0, 0.5) == pytest.approx(PHI_MINUS_1, abs=1e-12)

    def test_boundaries(self):
        assert gdp_tradeoff(2.0, 1.0) == 0.0
        assert gdp_tradeoff(2.0, 0.0) == 1.0

    @pytest.mark.parametrize("mu", [0.05, 0.5, 1.0, 3.0])
    def test_decreasing_and_convex_on_grid(self, mu):
        alphas = np.linspace(0.0, 1.0, 1001)
        betas = gdp_tradeoff(mu, alphas)
        assert np.all(np.diff(betas) < 0)
        assert np.all(np.diff(betas, 2) >= -1e-12)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            gdp_tradeoff(1.0, 1.2)
        with pytest.raises(ValueError):
            gdp_tradeoff(-1.0, 0.5)


class TestEpsDeltaTradeoff:
    def test_identity(self):
        assert epsdelta_tradeoff(PrivacyBudget(0.0, 0.0), 0.3) == pytest.approx(0.7)

    def test_hand_value(self):
        # max(0, 1 - 2 * 0.25, 0.5 * 0.75) = 0.5
        assert epsdelta_tradeoff(PrivacyBudget(math.log(2), 0.0), 0.25) == \
            pytest.approx(0.5, abs=1e-15)

    def test_delta_one_gives_nothing(self):
        alphas = np.linspace(0.0, 1.0, 11)
        assert np.all(epsdelta_tradeoff(PrivacyBudget(1.0, 1.0), alphas) == 0.0)

    def test_below_identity_line(self):
        alphas = np.linspace(0.0, 1.0, 101)
        betas = epsdelta_tradeoff(PrivacyBudget(0.7, 0.05), alphas)
        assert np.all(betas <= 1.0 - alphas + 1e-15)

    def test_two_breakpoints(self):
        # the max expression switches branches exactly at the two analytic
        # crossing points: steep line -> shallow line -> zero
        eps, delta = 0.8, 0.02
        budget = PrivacyBudget(eps, delta)
        a1 = ((1 - delta) * (1 - math.exp(-eps))
              / (math.exp(eps) - math.exp(-eps)))
        a2 = 1 - delta
        for alpha in np.linspace(0.0, a1 * 0.999, 20):
            assert epsdelta_tradeoff(budget, alpha) == \
                pytest.approx(1 - delta - math.exp(eps) * alpha, abs=1e-15)
        for alpha in np.linspace(a1 * 1.001, a2 * 0.999, 20):
            assert epsdelta_tradeoff(budget, alpha) == \
                pytest.approx(math.exp(-eps) * (1 - delta - alpha), abs=1e-15)
        for alpha in np.linspace(a2 * 1.001, 1.0, 20):
            assert epsdelta_tradeoff(budget, alpha) == 0.0

    def test_symmetry_at_delta_zero(self):
        budget = PrivacyBudget(0.9, 0.0)
        for alpha in (0.1, 0.2, 0.3):
            beta = epsdelta_tradeoff(budget, alpha)
            assert epsdelta_tradeoff(budget, beta) == pytest.approx(alpha, abs=1e-12)


class TestGdpDpConversion:
    def test_frozen_at_eps_zero(self):
        assert gdp_to_dp(1.0, 0.0) == pytest.approx(PHI_HALF_BAND, abs=1e-12)

    def test_frozen_mu_half(self):
        assert gdp_to_dp(0.5, 1.0) == pytest.approx(DELTA_MU_HALF_EPS_1, abs=1e-12)

    def test_mu_zero_limit(self):
        assert gdp_to_dp(0.0, 1.0) == 0.0

    @pytest.mark.parametrize("mu", [0.05, 0.5, 1.0, 3.0])
    def test_strictly_decreasing_in_eps(self, mu):
        # strict until the value underflows to exactly 0 in float
        eps = np.linspace(0.0, 3.0, 31)
        deltas = [gdp_to_dp(mu, e) for e in eps]
        assert all(a > b or a == b == 0.0 for a, b in zip(deltas, deltas[1:]))
        assert deltas[0] > deltas[-1]

    @pytest.mark.parametrize("mu", [0.05, 0.5, 1.0, 3.0])
    @pytest.mark.parametrize("eps", [0.0, 0.5, 1.0])
    def test_dual_grid_supremum(self, mu, eps):
        closed = gdp_to_dp(mu, eps)
        grid = gdp_delta_grid_supremum(mu, eps, step=1e-4)
        assert closed == pytest.approx(grid, abs=1e-6)

    @pytest.mark.parametrize("mu", [0.05, 0.5, 1.0, 3.0])
    def test_round_trip(self, mu):
        eps = dp_epsilon_for_delta(mu, gdp_to_dp(mu, 1.0))
        assert eps == pytest.approx(1.0, abs=1e-8)

    def test_inverse_of_frozen(self):
        # the target slightly exceeds delta(0), so no positive epsilon is needed
        assert dp_epsilon_for_delta(1.0, 0.382925) == 0.0

    def test_small_mu_inversion(self):
        eps = dp_epsilon_for_delta(0.0727835320756025, 1e-4)
        assert 0.0 < eps < 0.5

    def test_inversion_validation(self):
        with pytest.raises(ValueError):
            dp_epsilon_for_delta(0.0, 0.1)
        with pytest.raises(ValueError):
            dp_epsilon_for_delta(1.0, 0.0)
        with pytest.raises(ValueError):
            dp_epsilon_for_delta(1.0, 1.0)


class TestComposition:
    def test_single(self):
        assert compose_gdp([0.7]) == 0.7

    def test_fifty_fold(self):
        assert compose_gdp([0.1] * 50) == pytest.approx(0.1 * math.sqrt(50), rel=1e-12)

    def test_pythagorean(self):
        assert compose_gdp([3.0, 4.0]) == pytest.approx(5.0, rel=1e-15)

    def test_permutation_invariant_and_associative(self):
        rng = np.random.default_rng(5)
        mus = rng.uniform(0.0, 2.0, size=9).tolist()
        shuffled = list(mus)
        rng.shuffle(shuffled)
        assert compose_gdp(mus) == compose_gdp(shuffled)
        combined = compose_gdp([compose_gdp(mus[:4]), compose_gdp(mus[4:])])
        assert combined == pytest.approx(compose_gdp(mus), rel=1e-12)

    def test_empty_raises(self):
        with pytest.raises(ValueError):
            compose_gdp([])

    def test_group(self):
        assert group_gdp(0.2, 1) == 0.2
        assert group_gdp(0.2, 5) == pytest.approx(1.0)
        assert group_gdp(0.0, 10) == 0.0
        with pytest.raises(ValueError):
            group_gdp(0.2, 0)


class TestComposeTradeoff:
    def test_identity_chain(self):
        g = GdpCurve(0.8)
        for alpha in (0.0, 0.25, 0.5, 0.9):
            assert compose_tradeoff(GdpCurve(0.0), g, alpha) == \
                pytest.approx(g(alpha), abs=1e-12)

    def test_gaussian_chain_frozen(self):
        g1 = GdpCurve(1.0)
        assert compose_tradeoff(g1, g1, 0.5) == pytest.approx(PHI_MINUS_2, abs=1e-12)

    def test_zero_curve_floor(self):
        zero = EmpiricalCurve([0.0, 1.0], [0.0, 0.0])
        g = EpsDeltaCurve(PrivacyBudget(1.0, 0.0))
        assert compose_tradeoff(zero, g, 0.3) == 0.0


class TestEmpiricalCurve:
    def test_evaluation(self):
        curve = EmpiricalCurve([0.0, 0.5, 1.0], [1.0, 0.25, 0.0])
        assert curve(0.0) == 1.0
        assert curve(0.25) == pytest.approx(0.625)
        assert curve(1.0) == 0.0

    def test_duplicate_alpha_keeps_infimum(self):
        curve = EmpiricalCurve([0.0, 0.0, 1.0], [1.0, 0.6, 0.0])
        assert curve(0.0) == 0.6

    def test_rejects_nonconvex(self):
        with pytest.raises(ValueError, match="convex"):
            EmpiricalCurve([0.0, 0.5, 1.0], [0.8, 0.5, 0.0])

    def test_rejects_increasing(self):
        with pytest.raises(ValueError, match="non-increasing"):
            EmpiricalCurve([0.0, 0.5, 1.0], [0.5, 0.8, 0.0])

    def test_rejects_above_identity(self):
        with pytest.raises(ValueError, match="1 - alpha"):
            EmpiricalCurve([0.0, 0.5, 1.0], [1.0, 0.7, 0.0])
