"""Window experiments: congruence counts, identities, and exhaustive checks."""

import math

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from sievekit.experiments import (
    SHARP,
    A_d_count,
    ExperimentConfig,
    OverflowGuardError,
    Q_ell,
    Q_ell_brute,
    Q_ell_u,
    SmoothWeight,
    almost_prime_survey,
    bt_exception_count,
    bv_error_average,
    chebyshev_decomposition,
    dartyge_survey,
    gpf_survey,
    iter_quadratic_strikes,
    phi_sifted,
    phi_sifted_coprime,
    quadratic_window_stats,
    r_d_error,
    square_sieve_count,
    weight_eval,
    weighted_sieve_experiment,
    weil_exhaustive,
    weil_prime_sums,
    weil_sum_check,
    wolke_error_average,
)
from sievekit.primes import factorize, jacobi, rho
from sievekit.theorems import WeightedSieveParams, solve_delta

BUMP = SmoothWeight(mode="bump")
PLATEAU = SmoothWeight(mode="plateau")
MODES = (SHARP, BUMP, PLATEAU)


# -------------------------------------------------------------------- weights

def test_weight_masses():
    assert SHARP.mass == 1.0
    assert BUMP.mass == pytest.approx(0.007029858406683736, abs=1e-9)
    # symmetric ramps cancel: the plateau mass is the plateau width plus
    # exactly one full ramp
    assert PLATEAU.mass == pytest.approx(0.9, abs=1e-10)


def test_weight_values():
    assert weight_eval(SHARP, 1.0) == 0.0
    assert weight_eval(SHARP, 1.5) == 1.0
    assert weight_eval(SHARP, 2.0) == 1.0
    assert weight_eval(SHARP, 2.0001) == 0.0
    for w in (BUMP, PLATEAU):
        assert weight_eval(w, 1.0) == 0.0
        assert weight_eval(w, 2.0) == 0.0
        assert 0.0 < weight_eval(w, 1.5) <= 1.0
    # plateau is flat at 1 between the ramps; the ramp midpoint sits at 1/2
    assert weight_eval(PLATEAU, 1.5) == 1.0
    assert weight_eval(PLATEAU, 1.0 + 0.5 * PLATEAU.epsilon0) == pytest.approx(
        0.5, abs=1e-12)


def test_weight_symmetry():
    xs = np.linspace(1.0, 2.0, 101)
    for w in (BUMP, PLATEAU):
        vals = w.values(xs)
        assert np.allclose(vals, vals[::-1], atol=1e-12)


def test_weight_validation():
    with pytest.raises(ValueError):
        SmoothWeight(mode="box")
    with pytest.raises(ValueError):
        SmoothWeight(mode="plateau", epsilon0=0.5)


def test_experiment_config_guard():
    ExperimentConfig(X=10 ** 6)
    with pytest.raises(OverflowGuardError):
        ExperimentConfig(X=10 ** 9 + 1)


# ----------------------------------------------------------- congruence counts

def test_q_ell_hand_examples(prime_table):
    # window (10, 20]: primes 11, 13, 17, 19; p^2+1 = 122, 170, 290, 362
    assert Q_ell(10, 5, SHARP, prime_table) == 2.0   # 170, 290
    assert Q_ell(10, 1, SHARP, prime_table) == 4.0
    assert Q_ell(10, 3, SHARP, prime_table) == 0.0
    assert Q_ell(2000, 13, SHARP, prime_table) == 41.0


def test_q_ell_matches_brute_exactly(prime_table):
    for X in (10, 100, 1000, 10000):
        for ell in (1, 2, 5, 13, 25, 65, 101, 169, 200):
            for w in MODES:
                assert Q_ell(X, ell, w, prime_table) == Q_ell_brute(
                    X, ell, w, prime_table)


@given(st.integers(10, 10 ** 4), st.integers(1, 200),
       st.sampled_from(MODES))
@settings(max_examples=60, deadline=None,
          suppress_health_check=[HealthCheck.function_scoped_fixture])
def test_q_ell_brute_property(prime_table, X, ell, w):
    assert Q_ell(X, ell, w, prime_table) == Q_ell_brute(X, ell, w, prime_table)


def test_q_ell_u_hand_examples(prime_table):
    # (10, 20]: n = 18 has 25 | 325; spf(18)=2 fails the u=13 cut for no n?
    # brute: n with 25 | n^2+1 in (10,20] is n=18 only; spf(18)=2 > 18^(1/13)
    assert Q_ell_u(10, 25, 13.0, SHARP, prime_table) == 1.0
    assert Q_ell_u(10, 5, 1.0, SHARP, prime_table) == 0.0
    with pytest.raises(ValueError):
        Q_ell_u(10, 5, 0.5, SHARP, prime_table)


def test_q_ell_u_brute(prime_table):
    X, spf = 500, prime_table.smallest_prime_factor
    for ell in (1, 5, 13):
        for u in (2.0, 5.0, 11.2):
            brute = [n for n in range(X + 1, 2 * X + 1)
                     if (n * n + 1) % ell == 0
                     and spf[n] > n ** (1.0 / u)]
            assert Q_ell_u(X, ell, u, SHARP, prime_table) == float(len(brute))


def test_q_ell_u_large_u_recovers_all(prime_table):
    # n^(1/50) < 2 for every window n here, so nothing is sifted
    all_n = Q_ell_u(1000, 13, 50.0, SHARP, prime_table)
    brute = sum(1 for n in range(1001, 2001) if (n * n + 1) % 13 == 0)
    assert all_n == float(brute)


def test_phi_sifted_hand_examples(prime_table):
    assert phi_sifted(10, 2.0, 1, 1, SHARP, prime_table) == 5.0
    assert phi_sifted(10, 4.0, 1, 1, SHARP, prime_table) == 4.0
    with pytest.raises(ValueError):
        phi_sifted(10, 2.0, 4, 2, SHARP, prime_table)
    with pytest.raises(ValueError):
        phi_sifted(10, 1.5, 1, 1, SHARP, prime_table)


def test_phi_sifted_brute(prime_table):
    X, z, d = 300, 7.0, 5
    spf = prime_table.smallest_prime_factor
    for a in (1, 2, 3, 4):
        brute = [n for n in range(X + 1, 2 * X + 1)
                 if n % d == a and spf[n] > z]
        assert phi_sifted(X, z, d, a, SHARP, prime_table) == float(len(brute))


def test_phi_sifted_coprime_is_sum_over_residues(prime_table):
    X, z, d = 400, 5.0, 6
    total = phi_sifted_coprime(X, z, d, SHARP, prime_table)
    parts = sum(phi_sifted(X, z, d, a, SHARP, prime_table)
                for a in (1, 5))
    assert total == parts


def test_a_d_count_hand_examples(prime_table):
    # (10, 20]: 5 | n^2+1 at n in {12, 13, 17, 18}; of these 3 | n at n=12, 18
    assert A_d_count(10, 5, 3, SHARP, prime_table) == 2.0
    assert r_d_error(10, 5, 3, SHARP, prime_table) == pytest.approx(
        2.0 - 20.0 / 15.0, abs=1e-15)


def test_a_d_count_brute(prime_table):
    X = 200
    for ell in (1, 2, 5, 13, 25, 65):
        for d in (1, 2, 3, 4, 5, 6, 10, 13, 15):
            brute = [n for n in range(X + 1, 2 * X + 1)
                     if (n * n + 1) % ell == 0 and n % d == 0]
            got = A_d_count(X, ell, d, SHARP, prime_table)
            assert got == float(len(brute)), (ell, d)


def test_square_sieve_count(prime_table):
    assert square_sieve_count(10, 2, prime_table) == 0
    assert square_sieve_count(10, 4, prime_table) == 1
    # brute at a larger window: any n with some ell^2 | n^2+1, ell in (L, 2L]
    X, L = 400, 6
    brute = 0
    for n in range(X + 1, 2 * X + 1):
        if any((n * n + 1) % (ell * ell) == 0 for ell in range(L + 1, 2 * L + 1)):
            brute += 1
    assert square_sieve_count(X, L, prime_table) == brute


# -------------------------------------------------------- strikes and windows

def test_strikes_reconstruct_factorizations(prime_table):
    X = 300
    n = np.arange(X + 1, 2 * X + 1, dtype=np.int64)
    acc = np.ones(X, dtype=object)
    for ell, k, q, idx in iter_quadratic_strikes(X, prime_table):
        assert q == ell ** k
        acc[idx] *= ell
    for i, nv in enumerate(map(int, n)):
        m = nv * nv + 1
        rem = m // int(acc[i])
        assert m % int(acc[i]) == 0
        assert rem == 1 or (rem > 2 * X and factorize(rem).pairs[0][1] == 1
                            and len(factorize(rem).pairs) == 1)


def test_window_stats_match_brute(prime_table):
    X = 500
    stats = quadratic_window_stats(X, prime_table)
    assert list(stats.n[:3]) == [501, 502, 503]
    for i, nv in enumerate(map(int, stats.n)):
        fac = factorize(nv * nv + 1)
        assert stats.omega_m[i] == len(fac.pairs)
        assert stats.big_omega_m[i] == sum(e for _, e in fac.pairs)
        assert stats.p_plus_m[i] == fac.pairs[-1][0]
    spf = prime_table.smallest_prime_factor
    assert np.array_equal(stats.spf_n, spf[stats.n])
    assert np.array_equal(stats.is_prime_n, spf[stats.n] == stats.n)


def test_window_stats_cached(prime_table):
    a = quadratic_window_stats(800, prime_table)
    b = quadratic_window_stats(800, prime_table)
    assert a is b


# ------------------------------------------------------------ average errors

def test_bv_error_average(prime_table):
    rep = bv_error_average(1000, 0, SHARP, prime_table)
    assert rep.counters["d_max"] == 2
    assert rep.aggregates["value"] == 0.0
    rep4 = bv_error_average(10 ** 4, 0, SHARP, prime_table)
    assert rep4.counters["d_max"] == 4
    assert rep4.counters["window_primes"] == 1033
    assert rep4.aggregates["value"] == 4.0
    rep41 = bv_error_average(10 ** 4, 1, SHARP, prime_table)
    assert rep41.aggregates["value"] == 8.5
    assert rep41.aggregates["ratio_to_X_log2"] == pytest.approx(
        0.07210581430250623, abs=1e-12)


def test_wolke_error_average(prime_table):
    rep = wolke_error_average(10 ** 4, 10.0, 0, SHARP, prime_table)
    assert rep.counters["d_max"] == 4
    assert rep.counters["rough_numbers"] == 2287
    assert rep.aggregates["value"] == 1.0
    rep3 = wolke_error_average(1000, 10.0, 0, SHARP, prime_table)
    assert rep3.aggregates["value"] == 0.0


def test_bt_exception_count(prime_table):
    rep = bt_exception_count(10 ** 5, 0.55, SHARP, prime_table)
    assert rep.counters["moduli"] == 562
    assert rep.counters["exceptions"] == 0
    assert rep.aggregates["fraction"] == 0.0


# ------------------------------------------------------- chebyshev identity

def test_chebyshev_small_window(prime_table):
    rep = chebyshev_decomposition(10 ** 4, 0.847, SHARP, prime_table)
    assert rep.residuals["identity_rel"] == 0.0
    assert rep.aggregates["H_direct"] == pytest.approx(
        191224.08991919883, abs=1e-6)
    assert rep.aggregates["H1"] == pytest.approx(716.0210375184234, abs=1e-6)
    assert rep.aggregates["H2"] == pytest.approx(6112.965081389076, abs=1e-6)
    assert rep.aggregates["H3"] == pytest.approx(12683.626291235782, abs=1e-6)
    assert rep.aggregates["H4"] == pytest.approx(306.0240853613265, abs=1e-6)
    assert rep.aggregates["H1_over_model"] == pytest.approx(
        0.9514281604251397, abs=1e-9)
    # partition property: the four parts cover the prime-supported sum
    # sum_p g(p/X) log(p^2 + 1) exactly once
    p = prime_table.primes_between(10 ** 4, 2 * 10 ** 4).astype(np.float64)
    prime_mass = float(np.sum(np.log(p * p + 1.0)))
    total = sum(rep.aggregates[k] for k in ("H1", "H2", "H3", "H4"))
    assert total == pytest.approx(prime_mass, rel=1e-12)


def test_chebyshev_identity_scales(prime_table):
    rep = chebyshev_decomposition(10 ** 5, 0.847, SHARP, prime_table)
    assert rep.residuals["identity_rel"] < 1e-9
    assert rep.aggregates["H1_over_model"] == pytest.approx(
        0.9675254589687714, abs=1e-9)
    assert rep.aggregates["H4_over_X"] == pytest.approx(
        0.024416849751022696, abs=1e-12)


def test_chebyshev_smooth_weight_identity(prime_table):
    rep = chebyshev_decomposition(10 ** 4, 0.847, PLATEAU, prime_table)
    assert rep.residuals["identity_rel"] < 1e-9


# -------------------------------------------------------------- weighted sieve

def test_weighted_sieve_small(prime_table):
    params = WeightedSieveParams(alpha=1.0 / 12.0, beta=0.622,
                                 delta=solve_delta(), r=4)
    rep = weighted_sieve_experiment(10 ** 5, params, SHARP, prime_table)
    assert rep.counters["survivors"] == 8392
    assert rep.counters["positive_weight"] == 7876
    assert rep.counters["omega_le_r"] == 7521
    assert rep.counters["squarefree_checked"] == 6958
    assert rep.counters["weight_bound_violations"] == 0
    assert rep.residuals["psi_identity_rel"] < 1e-9
    assert "sifts nothing" in rep.notes  # z = 2.610 < 3 here


def test_weighted_sieve_psi_identity_smooth(prime_table):
    params = WeightedSieveParams(alpha=1.0 / 12.0, beta=0.622,
                                 delta=solve_delta(), r=4)
    rep = weighted_sieve_experiment(10 ** 4, params, BUMP, prime_table)
    assert rep.residuals["psi_identity_rel"] < 1e-9
    assert rep.counters["weight_bound_violations"] == 0


# -------------------------------------------------------------------- surveys

def test_almost_prime_survey(prime_table):
    rep = almost_prime_survey(10 ** 4, 4, prime_table)
    assert rep.counters["window_odd_primes"] == 1033
    assert rep.counters["r=1"] == 117
    assert rep.counters["r=2"] == 464
    assert rep.counters["r=3"] == 803
    assert rep.counters["r=4"] == 974
    assert rep.counters["r=5"] == 1025
    assert rep.counters["r=6"] == 1031
    assert rep.counters["count"] == 974
    assert rep.aggregates["fraction"] == pytest.approx(974 / 1033, abs=1e-12)
    with pytest.raises(ValueError):
        almost_prime_survey(10 ** 4, 0, prime_table)


def test_almost_prime_monotone_in_r(prime_table):
    rep = almost_prime_survey(2000, 1, prime_table)
    counts = [rep.counters[f"r={j}"] for j in range(1, 7)]
    assert counts == sorted(counts)
    assert counts[-1] <= rep.counters["window_odd_primes"]


def test_almost_prime_brute(prime_table):
    X, r = 600, 3
    rep = almost_prime_survey(X, r, prime_table)
    spf = prime_table.smallest_prime_factor
    brute = 0
    for p in range(X + 1, 2 * X + 1):
        if p % 2 == 1 and spf[p] == p:
            m = (p * p + 1) // 2
            if sum(e for _, e in factorize(m).pairs) <= r:
                brute += 1
    assert rep.counters["count"] == brute


def test_gpf_survey(prime_table):
    rep = gpf_survey(10 ** 4, 0.847, prime_table)
    spf = prime_table.smallest_prime_factor
    brute = 0
    for p in range(10 ** 4 + 1, 2 * 10 ** 4 + 1):
        if spf[p] == p:
            fac = factorize(p * p + 1)
            if fac.pairs[-1][0] > p ** 0.847:
                brute += 1
    assert rep.counters["qualifiers"] == brute
    assert rep.aggregates["fraction"] == pytest.approx(
        rep.counters["qualifiers"] / rep.counters["window_primes"], abs=1e-15)
    with pytest.raises(ValueError):
        gpf_survey(10 ** 4, 2.5, prime_table)


def test_dartyge_survey_reference(prime_table):
    rep = dartyge_survey(10 ** 5, 11.2, prime_table)
    assert rep.counters["qualifiers"] == 50000
    assert rep.counters["ratio_gt_1"] == 37389
    assert rep.counters["omega_n_le_11"] == 50000
    assert rep.counters["ratio_gt_1_and_omega_le_11"] == 37389
    expected_hist = {0.3: 4, 0.4: 88, 0.5: 569, 0.6: 1509, 0.7: 2705,
                     0.8: 3364, 0.9: 4372, 1.0: 4782, 1.1: 4303, 1.2: 3920,
                     1.3: 3731, 1.4: 3411, 1.5: 3483, 1.6: 2643, 1.7: 1709,
                     1.8: 3486, 1.9: 5921}
    for lo in [x / 10.0 for x in range(23)]:
        key = f"hist_{lo:.1f}"
        if key in rep.counters:
            assert rep.counters[key] == expected_hist.get(lo, 0), key
    assert sum(v for k, v in rep.counters.items()
               if k.startswith("hist_")) == 50000
    with pytest.raises(ValueError):
        dartyge_survey(10 ** 4, 1.0, prime_table)


def test_dartyge_survey_qualifier_rule(prime_table):
    X, u = 2000, 11.2
    rep = dartyge_survey(X, u, prime_table)
    spf = prime_table.smallest_prime_factor
    brute = sum(1 for n in range(X + 1, 2 * X + 1)
                if spf[n] > n ** (1.0 / u))
    assert rep.counters["qualifiers"] == brute


# ----------------------------------------------------------------- weil sums

def test_weil_sum_check_small(prime_table):
    rep = weil_sum_check(3, 5, 1)
    assert rep.aggregates["S"] == 1.0
    assert rep.counters["bound_holds"] == 1
    # brute: sum of jacobi(m ell^2 - 1, 15) over ell mod 15
    brute = sum(jacobi((ell * ell - 1) % 15, 15) for ell in range(15))
    assert rep.aggregates["S"] == float(brute)


def test_weil_sum_degenerate(prime_table):
    rep = weil_sum_check(3, 5, 5)  # gcd(m, pq) > 1
    assert rep.counters["degenerate"] == 1


def test_weil_prime_sums_bound_and_crt(prime_table):
    for p in (5, 13, 17, 29):
        sums = weil_prime_sums(p)
        assert len(sums) == p
        assert np.max(np.abs(sums[1:])) <= math.sqrt(p) + 1e-9
    # complete-sum factorization: S(m; pq) = S_p(m mod p) * S_q(m mod q)
    for (p, q) in ((3, 5), (5, 13), (7, 11)):
        sp, sq = weil_prime_sums(p), weil_prime_sums(q)
        for m in (1, 2, 3):
            if math.gcd(m, p * q) != 1:
                continue
            direct = sum(jacobi((m * ell * ell - 1) % (p * q), p * q)
                         for ell in range(p * q))
            assert sp[m % p] * sq[m % q] == pytest.approx(
                float(direct), abs=1e-9)


def test_weil_exhaustive_small(prime_table):
    rep = weil_exhaustive(1000)
    assert rep.counters["violations"] == 0
    assert rep.counters["pairs"] > 0
    assert rep.aggregates["worst_ratio"] <= 1.0
    with pytest.raises(ValueError):
        weil_exhaustive(10)
