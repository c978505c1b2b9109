import cmath
import math

import numpy as np
import pytest

from charpoly.dualities import (
    GinibreWeight,
    InducedGinibre,
    TruncatedCUEWeight,
    correlator_finiteN,
    ginibre_moment_exact,
    ginibre_moment_pv,
    ginibre_moment_toeplitz,
    hciz_ratio,
    lemniscate_gamma_exponents,
    lemniscate_partition,
    log_c_lemniscate,
    log_c_mnk,
    log_r_gamma_zero,
    log_tcue_r_gamma_one,
    log_tcue_r_gamma_zero,
    log_z_ginibre,
    tcue_moment_exact,
    tcue_moment_factored,
    tcue_moment_toeplitz,
)
from charpoly.ensembles import ChargeConfiguration
from charpoly.oracles import (
    haar_mc_hciz,
    lemniscate_partition_quadrature,
    lemniscate_t0_radial,
    planar_moment_ginibre,
    planar_moment_tcue,
)


# -- exact LUE-duality route -------------------------------------------------

def test_r2k_at_zero_closed_form():
    # R_2(0) = N^{-N} N!
    for n in (1, 2, 5):
        want = -n * math.log(n) + math.lgamma(n + 1)
        assert ginibre_moment_exact(n, 1, 0.0) == pytest.approx(want, abs=1e-12)
    assert ginibre_moment_exact(1, 1, 0.0) == pytest.approx(0.0, abs=1e-14)


def test_n1_moment_is_one_plus_z2():
    for z in (0.0, 0.5, 1.0 + 0.5j):
        want = math.log(1.0 + abs(z) ** 2)
        assert ginibre_moment_exact(1, 1, z) == pytest.approx(want, rel=1e-12)


def test_n2_direct_expectation():
    # E|det(G_2 - z)|^2 = (1/2 + |z|^2)^2 + 1/4 from independent entries
    for z in (0.0, 0.5, 0.3 + 0.4j):
        want = math.log((0.5 + abs(z) ** 2) ** 2 + 0.25)
        assert ginibre_moment_exact(2, 1, z) == pytest.approx(want, rel=1e-12)


def test_exact_vs_planar_oracle():
    got = ginibre_moment_exact(2, 1, 0.5)
    oracle = planar_moment_ginibre(2, ChargeConfiguration((0.5,), (2.0,)))
    assert abs(math.expm1(got - oracle)) < 1e-6


# -- Toeplitz route ----------------------------------------------------------

def test_toeplitz_equals_exact_for_even_gamma():
    for n, k, z in ((4, 1, 0.3), (6, 2, 0.5), (8, 1, 1.0), (8, 2, 0.9)):
        assert ginibre_moment_toeplitz(n, 2.0 * k, z) == pytest.approx(
            ginibre_moment_exact(n, k, z), abs=1e-10
        )


def test_toeplitz_gamma_zero():
    assert ginibre_moment_toeplitz(5, 0.0, 0.7) == 0.0


def test_toeplitz_noninteger_vs_oracle():
    got = ginibre_moment_toeplitz(2, 1.3, 0.6)
    oracle = planar_moment_ginibre(2, ChargeConfiguration((0.6,), (1.3,)))
    assert abs(math.expm1(got - oracle)) < 1e-4


def test_toeplitz_negative_gamma_vs_oracle():
    # includes the lemniscate exponent range, down to near the gamma = -2
    # integrability boundary (the oracle absorbs the cusp into its measure)
    for g in (-0.9, -4.0 / 3.0, -1.9):
        got = ginibre_moment_toeplitz(2, g, 0.5)
        oracle = planar_moment_ginibre(2, ChargeConfiguration((0.5,), (g,)))
        assert abs(math.expm1(got - oracle)) < 1e-9


def test_rotational_invariance():
    for route in (
        lambda z: ginibre_moment_exact(5, 1, z),
        lambda z: ginibre_moment_toeplitz(5, 1.7, z),
    ):
        base = route(0.5)
        for arg in (math.pi / 3.0, 1.7):
            assert route(0.5 * cmath.exp(1j * arg)) == pytest.approx(base, abs=1e-12)


# -- Painleve V route --------------------------------------------------------

def test_pv_route_matches_exact_and_toeplitz():
    assert ginibre_moment_pv(4, 2.0, 0.3) == pytest.approx(
        ginibre_moment_exact(4, 1, 0.3), abs=1e-6
    )
    assert ginibre_moment_pv(4, 2.0, 0.9) == pytest.approx(
        ginibre_moment_exact(4, 1, 0.9), abs=1e-6
    )
    for g in (1.3, 2.0):
        assert ginibre_moment_pv(4, g, 0.6) == pytest.approx(
            ginibre_moment_toeplitz(4, g, 0.6), abs=1e-6
        )


def test_pv_route_z_zero_is_constant():
    assert ginibre_moment_pv(3, 1.3, 0.0) == pytest.approx(
        log_r_gamma_zero(3, 1.3), rel=1e-13
    )


# -- truncated CUE -----------------------------------------------------------

def test_tcue_constant_c211():
    assert math.exp(tcue_moment_exact(2, 1, 1, 0.0, 0.0)) == pytest.approx(0.5, rel=1e-12)
    assert log_c_mnk(2, 1, 1) == pytest.approx(math.log(0.5), rel=1e-12)


def test_tcue_exact_vs_planar_oracle():
    got = tcue_moment_exact(3, 1, 1, 0.4, 0.4)
    oracle = planar_moment_tcue(3, ChargeConfiguration((0.4,), (2.0,)))
    assert abs(math.expm1(got - oracle)) < 1e-6


def test_tcue_internal_routes_agree():
    a = tcue_moment_exact(6, 4, 2, 0.5, 0.5, check_factored=False)
    b = tcue_moment_factored(6, 4, 2, 0.5)
    assert abs(a - b) < 1e-10


def test_tcue_scaling_covariance_of_jue_route():
    # the t -> t/(1-|z|^2) change of variables behind the factored form
    for m, n, k, z in ((5, 3, 1, 0.3), (7, 4, 2, 0.6)):
        a = tcue_moment_exact(m, n, k, z, z, check_factored=False)
        b = tcue_moment_factored(m, n, k, z)
        assert a == pytest.approx(b, abs=1e-10)


def test_tcue_toeplitz_matches_exact():
    assert tcue_moment_toeplitz(5, 3, 2.0, 0.6) == pytest.approx(
        tcue_moment_exact(5, 3, 1, 0.6, 0.6), abs=1e-10
    )


def test_tcue_toeplitz_morris_at_one():
    for m, n, g in ((5, 3, 1.7), (6, 4, 2.0), (4, 3, 0.9)):
        assert tcue_moment_toeplitz(m, n, g, 1.0) == pytest.approx(
            log_tcue_r_gamma_one(m, n, g), abs=1e-9
        )


def test_tcue_toeplitz_gamma_zero_and_prefactor_consistency():
    assert tcue_moment_toeplitz(5, 3, 0.0, 0.5) == 0.0
    # prefactor at even gamma equals the finite product C_{M,N,k}
    assert log_tcue_r_gamma_zero(6, 4, 4.0) == pytest.approx(
        log_c_mnk(6, 4, 2), rel=1e-12
    )


def test_tcue_size_guard():
    with pytest.raises(ValueError):
        tcue_moment_exact(4, 4, 1, 0.0, 0.0)


# -- HCIZ --------------------------------------------------------------------

def test_hciz_k1():
    for u, v in ((0.5, 0.3), (1.0 + 0.2j, -0.4 + 0.1j)):
        assert hciz_ratio([u], [v]) == pytest.approx(
            cmath.exp(u * complex(v).conjugate()), rel=1e-12
        )


def test_hciz_confluent_vs_haar_mc():
    # fully merged vectors make A, B scalar, so the group integral is exact
    u = (0.4, 0.4)
    v = (0.25, 0.25)
    ratio = hciz_ratio(u, v)
    mc, err = haar_mc_hciz(u, v, 60_000, seed=2)
    assert abs(ratio - mc) < 3.0 * err + 1e-12
    # partially merged k = 3 with genuine Monte Carlo variance
    u = (0.4, 0.4, -0.3 + 0.2j)
    v = (0.25, 0.8, 0.1j)
    pred = hciz_ratio(u, v) * 2.0  # G(1+3) = 2
    mc, err = haar_mc_hciz(u, v, 80_000, seed=5)
    assert abs(pred - mc) < 3.0 * err


def test_hciz_generic_vs_haar_mc_k3():
    rng = np.random.default_rng(3)
    u = rng.normal(size=3) * 0.6 + 1j * rng.normal(size=3) * 0.6
    v = rng.normal(size=3) * 0.6 + 1j * rng.normal(size=3) * 0.6
    g4 = 2.0  # G(1+3) = 0! 1! 2!
    pred = hciz_ratio(u, v) * g4
    mc, err = haar_mc_hciz(u, v, 80_000, seed=4)
    assert abs(pred - mc) < 3.0 * err


# -- lemniscate --------------------------------------------------------------

def test_lemniscate_gamma_exponents():
    assert lemniscate_gamma_exponents(2) == [-1.0, 0.0]
    gs = lemniscate_gamma_exponents(3)
    assert gs[-1] == 0.0 and all(-2 < g <= 0 for g in gs)


def test_lemniscate_d1_closed_form():
    for n, t in ((2, 0.4), (3, 0.0), (4, 1.1)):
        want = (n * t) ** 2 + log_z_ginibre(n)
        assert lemniscate_partition(n, 1, t) == pytest.approx(want, rel=1e-12)


def test_lemniscate_vs_quadrature():
    got = lemniscate_partition(1, 2, 0.3)
    oracle = lemniscate_partition_quadrature(0.3)
    assert abs(math.expm1(got - oracle)) < 1e-5


def test_lemniscate_t0_radial_norms():
    for n, d in ((1, 2), (2, 2), (1, 3)):
        assert lemniscate_partition(n, d, 0.0) == pytest.approx(
            lemniscate_t0_radial(n, d), abs=1e-9
        )


# -- generic correlator ------------------------------------------------------

def test_correlator_single_charge_matches_exact():
    assert correlator_finiteN(
        GinibreWeight(6), ChargeConfiguration((0.4,), (4.0,))
    ) == pytest.approx(ginibre_moment_exact(6, 2, 0.4), abs=1e-10)


def test_correlator_two_charges_vs_mc():
    from charpoly.ensembles import Ginibre, mc_moment

    cc = ChargeConfiguration((0.2, 0.3), (2.0, 2.0))
    ref = correlator_finiteN(GinibreWeight(6), cc)
    est = mc_moment(Ginibre(6), cc, 60_000, seed=11, log_shift=ref)
    assert est.within(ref)


def test_correlator_rotational_invariance():
    a = correlator_finiteN(GinibreWeight(5), ChargeConfiguration((0.5,), (2.0,)))
    b = correlator_finiteN(
        GinibreWeight(5), ChargeConfiguration((0.5 * cmath.exp(1.7j),), (2.0,))
    )
    assert a == pytest.approx(b, abs=1e-12)


def test_correlator_exponent_parity_guard():
    with pytest.raises(ValueError):
        correlator_finiteN(GinibreWeight(4), ChargeConfiguration((0.0,), (1.5,)))


def test_correlator_induced_ginibre_specialization():
    # E_Gin |det G|^{2g} |det(G-z)|^{2k} = R_{2g}(0) E_Ind |det(G-z)|^{2k}
    n, g, k, z = 5, 2, 1, 0.35
    lhs = correlator_finiteN(
        GinibreWeight(n), ChargeConfiguration((0.0, z), (2.0 * g, 2.0 * k))
    )
    rhs = log_r_gamma_zero(n, 2.0 * g) + correlator_finiteN(
        InducedGinibre(n, float(g)), ChargeConfiguration((z,), (2.0 * k,))
    )
    assert lhs == pytest.approx(rhs, abs=1e-9)


def test_correlator_induced_noninteger_vs_planar_oracle():
    # real gamma1 enters only through the weight; N = 2 checked by quadrature
    n, g1, k2, u2 = 2, 1.5, 1, 0.8
    z2 = u2 / math.sqrt(n)
    lhs = log_r_gamma_zero(n, 2.0 * g1) + correlator_finiteN(
        InducedGinibre(n, g1), ChargeConfiguration((z2,), (2.0,))
    )
    oracle = planar_moment_ginibre(
        n, ChargeConfiguration((0.0, z2), (3.0, 2.0))
    )
    assert abs(math.expm1(lhs - oracle)) < 1e-5


def test_correlator_tcue_weight_matches_jue_duality():
    got = correlator_finiteN(
        TruncatedCUEWeight(5, 3), ChargeConfiguration((0.4,), (2.0,))
    )
    assert got == pytest.approx(tcue_moment_exact(5, 3, 1, 0.4, 0.4), abs=1e-10)


def test_c_lemniscate_reconciliation():
    # the fully explicit Lemma form: c~ = c_{N,d} (Z^Gin_N)^d is what the
    # partition function uses; verified against the brute-force oracle at
    # (N, d) = (1, 2) through lemniscate_partition itself
    got = log_c_lemniscate(1, 2)
    want = math.lgamma(3.0) - 0.5 * (1 * (2 + 4 + 1)) * math.log(2.0) - 2 * math.lgamma(2.0)
    assert got == pytest.approx(want, rel=1e-12)


def test_correlator_zero_exponents_trivial():
    assert correlator_finiteN(
        GinibreWeight(4), ChargeConfiguration((0.3, 0.7), (0.0, 0.0))
    ) == 0.0
    # zero charges mixed with active ones are dropped harmlessly
    mixed = correlator_finiteN(
        GinibreWeight(4), ChargeConfiguration((0.9, 0.4), (0.0, 2.0))
    )
    assert mixed == pytest.approx(ginibre_moment_exact(4, 1, 0.4), abs=1e-12)


def test_tcue_general_real_pair_n1_analytic():
    # Prop-level surface with x != conj(y): E(T-x)(T^dag - y) = 1/M + xy at N=1
    for m, x, y in ((3, 2.0, 0.3), (5, 0.7, 0.2), (4, -0.5, -0.4)):
        got = tcue_moment_exact(m, 1, 1, x, y)
        assert got == pytest.approx(math.log(1.0 / m + x * y), rel=1e-10)


def test_pv_route_negative_gamma():
    # the transport also covers the lemniscate exponent range
    for g in (-0.5, -1.0, -1.5):
        assert ginibre_moment_pv(3, g, 0.6) == pytest.approx(
            ginibre_moment_toeplitz(3, g, 0.6), abs=1e-6
        )


def test_fuzz_cross_routes():
    rng = np.random.default_rng(0)
    for _ in range(15):
        n = int(rng.integers(1, 9))
        k = int(rng.integers(1, 3))
        z = rng.uniform(0.0, 1.2) * cmath.exp(1j * rng.uniform(0.0, 6.28))
        assert ginibre_moment_exact(n, k, z) == pytest.approx(
            ginibre_moment_toeplitz(n, 2.0 * k, z), abs=1e-9
        )
    for _ in range(10):
        m = int(rng.integers(2, 9))
        n = int(rng.integers(1, m))
        k = int(rng.integers(1, 3))
        z = float(rng.uniform(0.0, 0.97))
        # the factored-route assertion inside tcue_moment_exact also fires
        assert tcue_moment_exact(m, n, k, z, z) == pytest.approx(
            tcue_moment_toeplitz(m, n, 2.0 * k, z), abs=1e-9
        )
