"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s`.  Criterion 7's Monte Carlo
slope sub-check is known to fail honestly: the exponential log-asymptotic of
the ruin probability has not converged on the stated reserve grid (see
README, "Known acceptance deviation").
"""

import math
import time

import numpy as np
from scipy import stats

from hawkes_risk import (
    Categorical,
    Degenerate,
    ExpClaim,
    ExpKernel,
    Exponential,
    HawkesModel,
    Pareto,
)
from hawkes_risk.asymptotics import clt_check, lln_mean
from hawkes_risk.cgf import cluster_mgf_path, critical_pair, limit_cgf
from hawkes_risk.cli import main
from hawkes_risk.ldp import (
    closed_form_exp_marks,
    legendre_numeric,
    rate_function,
    variational_rate,
)
from hawkes_risk.risk import (
    RiskModel,
    compound_cgf,
    heavy_tail_finite,
    heavy_tail_infinite,
    integrated_tail,
    lundberg_exponent,
    ruin_mc,
)
from hawkes_risk.simulate import RngSpec, simulate_cluster, simulate_thinning

EXP_MODEL = HawkesModel(1.0, ExpKernel(1.0), Exponential(2.0))
EXAMPLE_RISK = RiskModel(EXP_MODEL, ExpClaim(1.0), rho=3.0, u=10.0)
HEAVY_RISK = RiskModel(EXP_MODEL, Pareto(1.5, 1.5), rho=3.0, u=10.0)


def _report(criterion: str, ok: bool, detail: str) -> bool:
    print(f"\nACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")
    return ok


def test_criterion_1_closed_form_cgf_oracle():
    start = time.time()
    worst = 0.0
    worst_tc = 0.0
    for lam in (1.5, 2.0, 4.0):
        model = HawkesModel(1.0, ExpKernel(1.0), Exponential(lam))
        boundary = math.log((lam + 1.0) ** 2 / (4.0 * lam))
        pair = critical_pair(model)
        worst_tc = max(worst_tc, abs(pair.theta_c - boundary))
        for theta in np.linspace(-1.0 + 1e-9, boundary, 50):
            got = limit_cgf(model, float(theta))
            want = closed_form_exp_marks(1.0, lam, theta=float(theta))
            worst = max(worst, abs(got - want))
    elapsed = time.time() - start
    ok = worst < 1e-8 and worst_tc < 1e-8 and elapsed < 1.0
    assert _report(
        "1 (closed-form CGF oracle)", ok,
        f"max |Gamma error| {worst:.2e}, max |theta_c error| {worst_tc:.2e}, "
        f"{elapsed:.2f}s",
    )


def test_criterion_2_rate_function_triple_agreement():
    start = time.time()
    mu = lln_mean(EXP_MODEL)
    worst_leg = 0.0
    for x in (0.5 * mu, mu, 1.5 * mu, 3.0, 5.0):
        solver = rate_function(EXP_MODEL, x).lambda_value
        numeric = legendre_numeric(EXP_MODEL, x)
        worst_leg = max(worst_leg, abs(solver - numeric))
    two_atom = HawkesModel(1.0, ExpKernel(1.0), Categorical((0.2, 0.8), (0.5, 0.5)))
    worst_var = 0.0
    for x in (1.0, 2.0, 3.0):
        solver = rate_function(two_atom, x).lambda_value
        brute = variational_rate(two_atom, x).value
        worst_var = max(worst_var, abs(solver - brute))
    elapsed = time.time() - start
    ok = worst_leg < 1e-6 and worst_var < 1e-4 and elapsed < 30.0
    assert _report(
        "2 (rate-function triple agreement)", ok,
        f"|solver-legendre| {worst_leg:.2e}, |solver-variational| {worst_var:.2e}, "
        f"{elapsed:.1f}s",
    )


def test_criterion_3_unmarked_reduction():
    model = HawkesModel(1.0, ExpKernel(1.0), Degenerate(0.5))
    worst = 0.0
    for x in np.linspace(0.0, 6.0, 20):
        x = float(x)
        if x == 0.0:
            formula = 1.0
        else:
            formula = x * math.log(x / (1.0 + 0.5 * x)) - x + 0.5 * x + 1.0
        worst = max(worst, abs(rate_function(model, x).lambda_value - formula))
    ok = worst < 1e-8
    assert _report("3 (unmarked reduction)", ok, f"max error {worst:.2e} on 20-point grid")


def test_criterion_4_cluster_mgf_convergence():
    x_star = (3.0 - math.sqrt(9.0 - 8.0 * math.exp(0.1))) / 2.0
    _, values = cluster_mgf_path(EXP_MODEL, 0.1, 50.0)
    monotone = bool(np.all(np.diff(values) >= -1e-12))
    gap = abs(values[-1] - x_star)
    ok = monotone and gap < 1e-4
    assert _report(
        "4 (cluster MGF convergence)", ok,
        f"nondecreasing={monotone}, |F(50) - x*| = {gap:.2e}",
    )


def test_criterion_5_simulator_cross_validation():
    start = time.time()
    n_thin = np.array([
        simulate_thinning(EXP_MODEL, 200.0, RngSpec(501, i)).n_events
        for i in range(500)
    ])
    n_clus = np.array([
        simulate_cluster(EXP_MODEL, 200.0, RngSpec(502, i)).n_events
        for i in range(500)
    ])
    p = stats.ks_2samp(n_thin, n_clus).pvalue
    rates = n_thin / 200.0
    se = rates.std(ddof=1) / math.sqrt(len(rates))
    lln_gap = abs(rates.mean() - 2.0)
    elapsed = time.time() - start
    ok = p > 0.01 and lln_gap < 3 * se and elapsed < 120.0
    assert _report(
        "5 (simulator cross-validation)", ok,
        f"KS p={p:.3f}, |mean rate - 2| = {lln_gap:.4f} vs 3*SE = {3*se:.4f}, "
        f"{elapsed:.1f}s",
    )


def test_criterion_6_clt():
    start = time.time()
    report = clt_check(EXP_MODEL, 500.0, 400, RngSpec(2024))
    var_err = abs(report.sample_var_rate - 10.0) / 10.0
    elapsed = time.time() - start
    ok = var_err < 0.15 and report.p_value > 0.01 and elapsed < 300.0
    assert _report(
        "6 (CLT)", ok,
        f"var rate {report.sample_var_rate:.3f} (rel err {var_err:.3f}), "
        f"KS p={report.p_value:.3f}, {elapsed:.1f}s",
    )


def test_criterion_7a_lundberg_exponent():
    theta = lundberg_exponent(EXAMPLE_RISK)
    residual = abs(compound_cgf(EXAMPLE_RISK, theta) - 3.0 * theta)
    quadratic_root = (12.0 - math.sqrt(108.0)) / 18.0
    ok = abs(theta - 0.089316) < 1e-6 and residual < 1e-10 \
        and abs(theta - quadratic_root) < 1e-12
    assert _report(
        "7a (Lundberg exponent)", ok,
        f"theta_dagger = {theta:.12f}, residual {residual:.2e}",
    )


def test_criterion_7b_ruin_slope():
    # Known honest failure: the exponential asymptotic of psi(u) has not
    # converged by u = 20 for this model (empty-past start), so the measured
    # slope on the stated grid is ~24% steep.  See README and the larger-u
    # diagnostic printed below.
    start = time.time()
    theta = lundberg_exponent(EXAMPLE_RISK)
    us = np.array([5.0, 10.0, 15.0, 20.0])
    logs = []
    for j, u in enumerate(us):
        est = ruin_mc(EXAMPLE_RISK, u=float(u), replicas=10000, rng=RngSpec(700 + j))
        logs.append(math.log(est.psi_hat))
    slope = float(np.polyfit(us, logs, 1)[0])
    rel_err = abs(slope + theta) / theta
    diag = (logs[-1] - logs[-2]) / 5.0
    elapsed = time.time() - start
    ok = rel_err < 0.15 and elapsed < 600.0
    assert _report(
        "7b (ruin slope)", ok,
        f"slope {slope:.4f} vs -theta_dagger {-theta:.4f} (rel err {rel_err:.2f}); "
        f"local slope on [15,20]: {diag:.4f}; {elapsed:.0f}s",
    )


def test_criterion_8_heavy_tails():
    start = time.time()
    inf_est = heavy_tail_infinite(HEAVY_RISK, 10.0)
    k_exact = abs(inf_est.constant - 2.0) < 1e-12
    # Regularly varying bracket converges polynomially: reaches 1e-10 by T=1e9.
    fin = heavy_tail_finite(HEAVY_RISK, 10.0, 1e9)
    gap = abs(fin.constant * fin.factor - inf_est.constant)
    converges = gap < 1e-10

    ratios = []
    for j, (u, reps) in enumerate([(10.0, 5000), (30.0, 10000), (100.0, 20000)]):
        est = ruin_mc(HEAVY_RISK, u=u, horizon=20.0 * u, replicas=reps,
                      rng=RngSpec(800 + j))
        ratios.append(est.psi_hat / integrated_tail(HEAVY_RISK.claims, u))
    spread = max(ratios) / min(ratios)
    trend_ok = all(r > 0 for r in ratios) and spread < 5.0 and ratios[-1] < 3.0 * 2.0
    elapsed = time.time() - start
    ok = k_exact and converges and trend_ok
    assert _report(
        "8 (heavy tails)", ok,
        f"K exact={k_exact}, T->inf gap {gap:.1e}, psi/tail ratios "
        f"{[f'{r:.2f}' for r in ratios]} (qualitative), {elapsed:.0f}s",
    )


def test_criterion_9_determinism(tmp_path):
    config = """
[model]
nu = 1.0
kernel = exp
beta = 1.0
marks = exponential
rate = 2.0

[claims]
family = exp
rate = 1.0
rho = 3.0
u = 5.0

[run]
seed = 99
horizon = 100
replicas = 100
x_grid = 0,2,3
theta_grid = 0,0.05,0.1
u_grid = 5
z_grid = 0.5,1.0
theta = 0.1

[output]
path = {out}
"""
    commands = ["simulate", "rate-function", "cgf", "clt-check", "cluster-mgf", "ruin"]
    identical = True
    for command in commands:
        out = tmp_path / command
        cfg = tmp_path / f"{command}.ini"
        cfg.write_text(config.format(out=out))
        assert main([command, str(cfg)]) == 0
        first = {p.name: p.read_bytes() for p in out.iterdir()}
        assert main([command, str(cfg)]) == 0
        second = {p.name: p.read_bytes() for p in out.iterdir()}
        if first != second:
            identical = False
    ok = identical
    assert _report(
        "9 (determinism)", ok,
        f"byte-identical rerun across {len(commands)} commands",
    )
