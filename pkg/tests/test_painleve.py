import math

import numpy as np
import pytest

from charpoly.gap import GUE, JUE, LUE, gap_cdf, log_gap_cdf, log_lue_tail, lue_tail
from charpoly.painleve import (
    PIV,
    PV,
    PVI,
    BranchError,
    F_from_sigma,
    SigmaInit,
    SolveError,
    heqn_lhs,
    heqn_params,
    init_from_asymptote_p4,
    init_from_gap,
    jue_from_pvi,
    log_derivatives,
    p5_to_p4_residual,
    p6_to_p5_residual,
    piv_asymptote,
    piv_f,
    pvi_from_jue,
    residual,
    sigma_form_lhs,
    sigma_pp_roots,
    solve,
    solve_span,
)


def test_residual_zero_solution():
    # sigma = 0 solves PIV for any k and PV with zero parameter products
    assert residual(PIV(1.3), 0.7, 0.0, 0.0, 0.0) == 0.0
    assert residual(PV(0.0, 0.0), 2.0, 0.0, 0.0, 0.0) == 0.0
    fam = PVI((0.0, 0.0, 0.0, 0.0))
    assert residual(fam, 0.4, 0.0, 0.0, 0.0) == 0.0


def test_residual_asymptote_triple():
    for k in (0.5, 1.0, 2.0):
        t = -1e6
        s, sp, spp = piv_asymptote(k, t)
        assert residual(PIV(k), t, s, sp, spp) <= 1e-9


def test_residual_singular_points_rejected():
    with pytest.raises(ValueError):
        residual(PV(1.0, 2.0), 0.0, 0.1, 0.1, 0.1)
    with pytest.raises(ValueError):
        residual(PVI((1.0, 1.0, 0.5, 0.5)), 1.0, 0.1, 0.1, 0.1)


def test_pv_residual_from_lue_tail_data():
    fam = PV(1.0, 4.0)
    worst = 0.0
    for t in np.linspace(0.2, 8.0, 25):
        h = 0.02 * max(1.0, t)
        _, l1, l2, l3 = log_derivatives(lambda u: log_lue_tail(1, 4.0, u), float(t), h)
        worst = max(worst, residual(fam, float(t), t * l1, l1 + t * l2, 2 * l2 + t * l3))
    assert worst <= 1e-5


def test_init_from_asymptote_values():
    init = init_from_asymptote_p4(0.0, 1e4)
    assert init.sigma0 == 0.0 and init.sigma0_prime == 0.0
    init = init_from_asymptote_p4(1.0, 1e4)
    assert init.t0 == -1e4
    assert init.sigma0 == pytest.approx(1e4 + 1e-4, rel=1e-10)
    assert init.sigma0_prime == pytest.approx(-1.0 + 1e-8, rel=1e-9)
    with pytest.raises(ValueError):
        init_from_asymptote_p4(1.0, 100.0)


def test_piv_solve_reproduces_gue_cdf():
    init = init_from_asymptote_p4(1.0, 1e4)
    sol = solve(PIV(1.0), init, 8.0, tol=1e-8)
    assert sol.max_residual <= 1e-8
    for x in np.linspace(-3.0, 3.0, 7):
        f = F_from_sigma(PIV(1.0), sol, float(x))
        assert f == pytest.approx(gap_cdf(GUE(1), float(x)), abs=1e-9)
    assert F_from_sigma(PIV(1.0), sol, 0.0) == pytest.approx(0.5, abs=1e-9)


def test_piv_zero_parameter_trivial():
    sol = solve(PIV(0.0), init_from_asymptote_p4(0.0, 1e4), 8.0)
    assert np.all(sol.sigma == 0.0)
    assert F_from_sigma(PIV(0.0), sol, 1.0) == 1.0


def test_piv_branch_continuity():
    init = init_from_asymptote_p4(2.0, 1e4)
    sol = solve(PIV(2.0), init, 8.0, tol=1e-8)
    # sigma'' sampled densely on the evaluation window varies smoothly
    ts = np.linspace(-5.0, 5.0, 1001)
    spp = np.array([sol.state(float(t))[2] for t in ts])
    assert np.max(np.abs(np.diff(spp))) < 0.2  # ~ |sigma'''| * dt, no flips


def test_piv_real_order():
    # negative fractional order used by the critical lemniscate factors
    f0 = piv_f(-0.5, 0.0)
    assert 1.0 < f0 < 1.1
    assert piv_f(-0.5, 7.5) == pytest.approx(1.0, abs=1e-4)


@pytest.mark.parametrize("k", [1, 2])
@pytest.mark.parametrize("alpha", [0.0, 1.0, 3.0])
def test_pv_round_trip_largest(k, alpha):
    fam = PV(float(k), alpha)
    t0 = k + alpha + 2.0
    sol = solve_span(fam, init_from_gap(fam, t0), 0.4, 18.0, tol=1e-7)
    for x in (0.8, 3.0, 9.0, 15.0):
        assert F_from_sigma(fam, sol, x) == pytest.approx(
            gap_cdf(LUE(k, alpha), x), abs=1e-6
        )


def test_pv_round_trip_smallest_tail():
    fam = PV(1.0, 1.0)
    sol = solve_span(fam, init_from_gap(fam, 2.0, mode="smallest_tail"), 0.2, 10.0)
    # analytic (1+x)e^{-x} from the k=1 Andreief reduction
    for x in (0.4, 2.0, 6.0):
        want = (1.0 + x) * math.exp(-x)
        assert F_from_sigma(fam, sol, x) == pytest.approx(want, abs=1e-8)
        assert want == pytest.approx(lue_tail(1, 1.0, x), rel=1e-12)


@pytest.mark.parametrize("alpha", [0.0, 1.0])
@pytest.mark.parametrize("beta", [1.0, 2.0])
def test_pvi_round_trip(alpha, beta):
    fam = pvi_from_jue(1.0, alpha, beta)
    sol = solve_span(fam, init_from_gap(fam, 0.5), 0.04, 0.96, tol=1e-7)
    for x in (0.06, 0.3, 0.7, 0.94):
        assert F_from_sigma(fam, sol, x) == pytest.approx(
            gap_cdf(JUE(1, alpha, beta), x), abs=1e-6
        )


def test_pvi_uniform_law_constant_sigma():
    # JUE{1,0,0}: P(x) = x gives the constant solution sigma = 1/2
    fam = pvi_from_jue(1.0, 0.0, 0.0)
    init = init_from_gap(fam, 0.4)
    assert init.sigma0 == pytest.approx(0.5, abs=1e-9)
    assert init.sigma0_prime == pytest.approx(0.0, abs=1e-8)
    assert residual(fam, 0.4, 0.5, 0.0, 0.0) == pytest.approx(0.0, abs=1e-15)


def test_init_from_gap_errors():
    fam = pvi_from_jue(1.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        init_from_gap(fam, 1.5)  # beyond the support, P = 1 identically
    with pytest.raises(FloatingPointError):
        init_from_gap(PIV(2.0), -40.0)  # gap probability underflows
    with pytest.raises(ValueError):
        init_from_gap(PV(1.5, 0.0), 1.0)  # non-integer determinant size


def test_init_residual_gate():
    bad = SigmaInit(1.0, 5.0, 10.0, 0.0)
    with pytest.raises((SolveError, BranchError)):
        solve(PV(1.0, 2.0), bad, 4.0, tol=1e-8)


def test_sigma_pp_roots_branch_error():
    with pytest.raises(BranchError):
        sigma_pp_roots(PIV(1.0), 0.0, 0.0, 1.0)  # disc = -4 < 0


def test_solve_domain_guards():
    fam = PV(1.0, 1.0)
    init = init_from_gap(fam, 1.0)
    with pytest.raises(ValueError):
        solve_span(fam, init, -1.0, 2.0)
    fam6 = pvi_from_jue(1.0, 1.0, 2.0)
    with pytest.raises(ValueError):
        solve_span(fam6, init_from_gap(fam6, 0.5), 0.1, 1.2)


def test_f_from_sigma_span_guard():
    fam = PV(1.0, 1.0)
    sol = solve_span(fam, init_from_gap(fam, 2.0), 1.0, 4.0)
    with pytest.raises(ValueError):
        F_from_sigma(fam, sol, 8.0)


def test_pvi_parameter_maps():
    fam = pvi_from_jue(1.0, 1.0, 2.0)
    assert fam.b == (2.5, 2.5, 1.5, 0.5)
    assert jue_from_pvi(fam) == pytest.approx((1.0, 1.0, 2.0))


def test_heqn_change_of_variable_identity():
    rng = np.random.default_rng(0)
    for _ in range(60):
        gamma = rng.uniform(0.2, 4.0)
        kappa = rng.uniform(0.2, 4.0)
        nn = rng.uniform(1.0, 8.0)
        s = rng.uniform(0.05, 0.95)
        h, hp, hpp = rng.normal(size=3) * 2.0
        lhs6 = sigma_form_lhs(pvi_from_jue(0.5 * gamma, kappa, nn), 1.0 - s, h, -hp, hpp)
        lhsh = heqn_lhs(heqn_params(gamma, kappa, nn), s, h, hp, hpp)
        assert abs(lhs6 + lhsh) <= 1e-8 * (1.0 + abs(lhs6))


def test_p5_to_p4_residual_decreases():
    vals = [p5_to_p4_residual(2.0, n, 1.0) for n in (64, 256, 1024)]
    assert vals[0] > vals[1] > vals[2]
    assert vals[2] < 0.05
    assert p5_to_p4_residual(0.0, 64, 1.0) == 0.0


def test_p5_to_p4_limit_curve_matches_piv():
    # v(s) approaches the PIV k=1 trajectory as N grows
    n = 4096
    x = n - math.sqrt(n) * 1.0
    _, l1, _, _ = log_derivatives(
        lambda u: log_lue_tail(1, float(n), u), x, 0.05 * math.sqrt(n)
    )
    v = -x * l1 / math.sqrt(n)
    phi = math.exp(-0.5) / math.sqrt(2 * math.pi)
    Phi = gap_cdf(GUE(1), 1.0)
    assert v == pytest.approx(phi / Phi, abs=2e-2)


def test_p6_to_p5_residual_decreases():
    vals = [p6_to_p5_residual(1, 1.0, n, 1.0) for n in (64, 256, 1024)]
    assert vals[0] > vals[1] > vals[2]
    assert vals[2] < 1e-2
    assert p6_to_p5_residual(0, 1.0, 64, 1.0) == 0.0


def test_p6_to_p5_limit_matches_lue_data():
    # the limiting v reproduces the PV sigma built from lue_tail data
    n = 8192
    k, kappa, t = 1, 1.0, 1.0
    x = t / n
    _, l1, _, _ = log_derivatives(
        lambda u: log_gap_cdf(JUE(k, kappa, float(n)), u), x, x / 9.0
    )
    v = x * (1 - x) * l1
    _, m1, _, _ = log_derivatives(
        lambda u: log_gap_cdf(LUE(k, kappa), u), t, 4e-3
    )
    sigma_pv = t * m1
    assert v == pytest.approx(sigma_pv, abs=5e-3)


def test_init_from_gap_pv_alpha2_matches_analytic_derivative():
    # lue_tail(1, 2, x) = Q(3, x): sigma = x dlnQ/dx = -x^3 e^{-x}/(2 Q(3,x) Gamma(3))
    t0 = 0.5
    init = init_from_gap(PV(1.0, 2.0), t0, mode="smallest_tail")
    q = lue_tail(1, 2.0, t0)
    rho = t0**2 * math.exp(-t0) / 2.0
    assert init.sigma0 == pytest.approx(-t0 * rho / q, rel=1e-9)
    assert init.log_f0 == pytest.approx(math.log(q), rel=1e-12)


def test_pv_f_vanishes_toward_origin():
    # lambda_max < x is impossible as x -> 0+
    fam = PV(1.0, 1.0)
    sol = solve_span(fam, init_from_gap(fam, 2.0), 0.05, 8.0, tol=1e-7)
    f = F_from_sigma(fam, sol, 0.05)
    assert 0.0 < f < 2e-3
    assert f == pytest.approx(gap_cdf(LUE(1, 1.0), 0.05), rel=1e-4)


def test_solution_grid_strictly_ascending():
    fam = PV(1.0, 1.0)
    sol = solve_span(fam, init_from_gap(fam, 2.0), 0.3, 8.0, tol=1e-7)
    assert np.all(np.diff(sol.grid) > 0)
    sol4 = solve(PIV(1.0), init_from_asymptote_p4(1.0, 1e4), 8.0)
    assert np.all(np.diff(sol4.grid) > 0)
