import math

import numpy as np
import pytest
from scipy import integrate
from scipy.special import gammaincc, ndtr

from hawkes_risk import (
    DegenerateClaim,
    ExpClaim,
    LogNormal,
    Pareto,
    Weibull,
)
from hawkes_risk.cgf import critical_pair, limit_cgf_derivative
from hawkes_risk.errors import NetProfitError, WindowError
from hawkes_risk.model import claim_mean, claim_tail
from hawkes_risk.risk import (
    RiskModel,
    compound_cgf,
    default_ruin_horizon,
    finite_horizon_rate,
    heavy_tail_finite,
    heavy_tail_infinite,
    integrated_tail,
    lundberg_exponent,
    net_profit_window,
    ruin_mc,
)
from hawkes_risk.simulate import RngSpec

THETA_DAGGER = (12.0 - math.sqrt(108.0)) / 18.0  # admissible root of 9t^2-12t+1


def example_compound_fixed_point(theta: float) -> float:
    """Minimal root for Exp(2) impacts and Exp(1) claims."""
    return (3.0 - math.sqrt(9.0 - 8.0 / (1.0 - theta))) / 2.0


class TestCompoundCgf:
    def test_zero(self, example_risk):
        assert compound_cgf(example_risk, 0.0) == pytest.approx(0.0, abs=1e-12)

    def test_degenerate_claim_equals_counting(self, exp_model):
        from hawkes_risk.cgf import limit_cgf

        risk = RiskModel(exp_model, DegenerateClaim(1.0), rho=3.0, u=1.0)
        for theta in (0.0, 0.05, 0.11):
            assert compound_cgf(risk, theta) == pytest.approx(
                limit_cgf(exp_model, theta), abs=1e-14
            )

    def test_closed_form_value(self, example_risk):
        theta = 0.08931639747704089
        expected = example_compound_fixed_point(theta) - 1.0
        assert compound_cgf(example_risk, theta) == pytest.approx(expected, abs=1e-10)

    def test_lln_slope(self, example_risk):
        # Gamma_C'(0) = nu E[C] / (1 - E[H]) = rho_min.
        slope = limit_cgf_derivative(example_risk.hawkes, 0.0, claims=example_risk.claims)
        assert slope == pytest.approx(2.0, abs=1e-10)


class TestNetProfitWindow:
    def test_example_window(self, example_risk):
        lo, hi = net_profit_window(example_risk)
        assert lo == pytest.approx(2.0, abs=1e-12)
        assert hi == pytest.approx(4.5, abs=1e-9)
        assert hi > lo

    def test_zero_claims_free_premium(self, exp_model):
        risk = RiskModel(exp_model, DegenerateClaim(0.0), rho=1.0, u=1.0)
        lo, hi = net_profit_window(risk)
        assert lo == 0.0
        assert math.isinf(hi)


class TestLundbergExponent:
    def test_example_value(self, example_risk):
        theta = lundberg_exponent(example_risk)
        assert theta == pytest.approx(THETA_DAGGER, abs=1e-12)

    def test_residual(self, example_risk):
        theta = lundberg_exponent(example_risk)
        assert abs(compound_cgf(example_risk, theta) - 3.0 * theta) < 1e-10

    def test_inside_critical_interval(self, example_risk):
        theta = lundberg_exponent(example_risk)
        theta_c = critical_pair(example_risk.hawkes, claims=example_risk.claims).theta_c
        assert 0.0 < theta < theta_c

    def test_outside_window_raises(self, exp_model):
        with pytest.raises(WindowError):
            lundberg_exponent(RiskModel(exp_model, ExpClaim(1.0), rho=1.5, u=1.0))
        with pytest.raises(WindowError):
            lundberg_exponent(RiskModel(exp_model, ExpClaim(1.0), rho=5.0, u=1.0))

    def test_zero_claims_rejected(self, exp_model):
        with pytest.raises(WindowError):
            lundberg_exponent(RiskModel(exp_model, DegenerateClaim(0.0), rho=1.0, u=1.0))

    def test_vanishes_toward_lower_edge(self, exp_model):
        thetas = [
            lundberg_exponent(RiskModel(exp_model, ExpClaim(1.0), rho=rho, u=1.0))
            for rho in (2.1, 2.5, 3.0, 4.0)
        ]
        assert thetas[0] < thetas[1] < thetas[2] < thetas[3]
        assert thetas[0] < 0.02

    def test_approaches_critical_at_upper_edge(self, exp_model):
        # The root races to theta_c as the premium nears the window's top
        # (the compound CGF has infinite slope at the tangency).
        claims = DegenerateClaim(1.0)
        pair = critical_pair(exp_model, claims=claims)
        rho_max = exp_model.nu * (pair.x_c - 1.0) / pair.theta_c
        theta = lundberg_exponent(
            RiskModel(exp_model, claims, rho=rho_max * 0.999, u=1.0)
        )
        assert theta == pytest.approx(pair.theta_c, rel=1e-3)


class TestFiniteHorizonRate:
    def test_plateau(self, example_risk):
        theta = lundberg_exponent(example_risk)
        growth = limit_cgf_derivative(
            example_risk.hawkes, theta, claims=example_risk.claims
        )
        knee = 1.0 / (growth - example_risk.rho)
        assert finite_horizon_rate(example_risk, knee) == pytest.approx(theta, abs=1e-14)
        assert finite_horizon_rate(example_risk, 3 * knee) == pytest.approx(theta, abs=1e-14)

    def test_continuous_at_knee(self, example_risk):
        theta = lundberg_exponent(example_risk)
        growth = limit_cgf_derivative(
            example_risk.hawkes, theta, claims=example_risk.claims
        )
        knee = 1.0 / (growth - example_risk.rho)
        below = finite_horizon_rate(example_risk, knee * (1.0 - 1e-6))
        assert below == pytest.approx(theta, abs=1e-6)

    def test_nonincreasing_with_plateau(self, example_risk):
        # Quick ruin is exponentially harder: w decreases to the plateau.
        zs = np.linspace(0.05, 1.0, 25)
        values = [finite_horizon_rate(example_risk, float(z)) for z in zs]
        assert np.all(np.diff(values) <= 1e-12)
        theta = lundberg_exponent(example_risk)
        assert values[-1] == pytest.approx(theta, abs=1e-12)
        assert all(v >= theta - 1e-12 for v in values)


class TestRuinMc:
    def test_interval_ordering(self, example_risk):
        est = ruin_mc(example_risk, u=5.0, replicas=400, rng=RngSpec(5))
        assert 0.0 <= est.ci_low <= est.psi_hat <= est.ci_high <= 1.0

    def test_huge_premium_never_ruins(self, exp_model):
        risk = RiskModel(exp_model, ExpClaim(1.0), rho=2000.0, u=10.0)
        est = ruin_mc(risk, horizon=50.0, replicas=300, rng=RngSpec(6))
        assert est.psi_hat < 0.01

    def test_monotone_in_reserve(self, example_risk):
        estimates = [
            ruin_mc(example_risk, u=u, replicas=3000, rng=RngSpec(7, int(u)))
            for u in (5.0, 20.0)
        ]
        assert estimates[0].ci_low > estimates[1].ci_high

    def test_monotone_in_premium(self, exp_model):
        lean = RiskModel(exp_model, ExpClaim(1.0), rho=2.3, u=5.0)
        rich = RiskModel(exp_model, ExpClaim(1.0), rho=4.0, u=5.0)
        est_lean = ruin_mc(lean, horizon=300.0, replicas=3000, rng=RngSpec(8))
        est_rich = ruin_mc(rich, horizon=300.0, replicas=3000, rng=RngSpec(9))
        assert est_lean.ci_low > est_rich.ci_high

    def test_default_horizon_scales_with_reserve(self, example_risk):
        assert default_ruin_horizon(example_risk, 10.0) == pytest.approx(500.0)
        with pytest.raises(NetProfitError):
            default_ruin_horizon(
                RiskModel(example_risk.hawkes, ExpClaim(1.0), rho=1.0, u=1.0), 10.0
            )

    def test_deterministic(self, example_risk):
        a = ruin_mc(example_risk, u=5.0, replicas=200, rng=RngSpec(10))
        b = ruin_mc(example_risk, u=5.0, replicas=200, rng=RngSpec(10))
        assert a == b


class TestIntegratedTail:
    def test_normalized_at_zero(self):
        for claims in (Pareto(1.5, 1.5), Weibull(0.5, 2.0), LogNormal(0.1, 0.8)):
            assert integrated_tail(claims, 0.0) == pytest.approx(1.0, abs=1e-8)

    def test_pareto_closed_form_against_quadrature(self):
        claims = Pareto(1.5, 1.5)
        for x in (0.5, 3.0, 20.0):
            oracle, _ = integrate.quad(lambda y: claim_tail(claims, y), x, np.inf)
            oracle /= claim_mean(claims)
            assert integrated_tail(claims, x) == pytest.approx(oracle, rel=1e-8)

    def test_weibull_quadrature_against_closed_form(self):
        claims = Weibull(0.5, 2.0)
        for x in (0.5, 2.0, 10.0):
            oracle = gammaincc(2.0, math.sqrt(x / 2.0))
            assert integrated_tail(claims, x) == pytest.approx(oracle, rel=1e-7)

    def test_lognormal_quadrature_against_closed_form(self):
        claims = LogNormal(0.1, 0.8)
        mean = claim_mean(claims)
        for x in (0.5, 2.0, 10.0):
            d = (math.log(x) - claims.mu) / claims.sigma
            partial = mean * ndtr(claims.sigma - d) - x * ndtr(-d)
            assert integrated_tail(claims, x) == pytest.approx(partial / mean, rel=1e-7)

    def test_decreasing_to_zero(self):
        claims = Pareto(1.5, 1.5)
        values = [integrated_tail(claims, x) for x in (0.0, 1.0, 10.0, 100.0, 1e4)]
        assert all(a > b for a, b in zip(values, values[1:]))
        assert values[-1] < 1e-4

    def test_light_claims_rejected(self):
        with pytest.raises(ValueError):
            integrated_tail(ExpClaim(1.0), 1.0)


class TestHeavyTailAsymptotics:
    def heavy_risk(self, exp_model, rho=3.0):
        return RiskModel(exp_model, Pareto(1.5, 1.5), rho=rho, u=10.0)

    def test_example_constant(self, exp_model):
        est = heavy_tail_infinite(self.heavy_risk(exp_model), 10.0)
        assert est.constant == pytest.approx(2.0, abs=1e-12)
        assert est.psi == pytest.approx(2.0 * (1.5 / 11.5) ** 1.5, abs=1e-10)

    def test_constant_vanishes_with_premium(self, exp_model):
        constants = [
            heavy_tail_infinite(self.heavy_risk(exp_model, rho), 10.0).constant
            for rho in (3.0, 10.0, 100.0, 1000.0)
        ]
        assert all(a > b for a, b in zip(constants, constants[1:]))
        assert constants[-1] < 0.01

    def test_decreasing_in_reserve(self, exp_model):
        risk = self.heavy_risk(exp_model)
        values = [heavy_tail_infinite(risk, u).psi for u in (10.0, 30.0, 100.0)]
        assert values[0] > values[1] > values[2]

    def test_net_profit_enforced(self, exp_model):
        with pytest.raises(NetProfitError):
            heavy_tail_infinite(RiskModel(exp_model, Pareto(1.5, 1.5), rho=1.2, u=1.0), 5.0)

    def test_light_claims_rejected(self, example_risk):
        with pytest.raises(ValueError):
            heavy_tail_infinite(example_risk, 5.0)

    def test_finite_recovers_infinite_regularly_varying(self, exp_model):
        risk = self.heavy_risk(exp_model)
        fin = heavy_tail_finite(risk, 10.0, 1e9)
        inf_ = heavy_tail_infinite(risk, 10.0)
        assert abs(fin.psi - inf_.psi) < 1e-10

    def test_finite_recovers_infinite_gumbel(self, exp_model):
        risk = RiskModel(exp_model, Weibull(0.5, 1.0), rho=6.0, u=10.0)
        fin = heavy_tail_finite(risk, 10.0, 1e6)
        inf_ = heavy_tail_infinite(risk, 10.0)
        assert abs(fin.psi - inf_.psi) < 1e-10

    def test_short_horizon_vanishes(self, exp_model):
        risk = self.heavy_risk(exp_model)
        assert heavy_tail_finite(risk, 10.0, 1e-8).factor < 1e-7

    def test_special_scaled_horizon_bracket(self, exp_model):
        # r T / alpha = 1 makes the inner term 2.
        risk = self.heavy_risk(exp_model)
        inflow = 3.0 * 0.5
        r = (inflow - 1.0) / inflow
        T = 1.5 / r
        est = heavy_tail_finite(risk, 10.0, T)
        assert est.factor == pytest.approx(1.0 - 2.0 ** -1.5, abs=1e-12)

    def test_gumbel_factor_form(self, exp_model):
        risk = RiskModel(exp_model, LogNormal(0.0, 1.0), rho=4.0, u=10.0)
        inflow = 4.0 * 0.5
        r = (inflow - math.exp(0.5)) / inflow
        est = heavy_tail_finite(risk, 10.0, 2.0)
        assert est.factor == pytest.approx(1.0 - math.exp(-2.0 * r), abs=1e-12)
