import math
import random
from fractions import Fraction

import pytest

from diophlab.counting import (
    ApproxConfig,
    SieveSideParams,
    WindowParams,
    count_witnesses,
    product_set,
    revalidate_tuple,
    riemann_scan,
    sieve_error_sum,
    sieve_side_counts,
    sieve_side_error_raw,
    target_growth,
    target_growth_alt,
    window_counts,
    witness_integral,
)
from diophlab.errors import ContractError, RangeError
from diophlab.fixedreal import CVector, FixedReal, constant


def _trial_prime(m: int) -> bool:
    if m < 2:
        return False
    i = 2
    while i * i <= m:
        if m % i == 0:
            return False
        i += 1
    return True


def naive_count(alpha, cfg, n_max):
    """Quadruple-loop oracle in exact rational arithmetic, fully independent
    of the table and of the floor shortcut."""
    al = alpha.to_fraction()
    cs = [ci.to_fraction() for ci in cfg.c.entries]
    count = 0
    witnesses = []
    for p in range(2, n_max + 1):
        if not _trial_prime(p):
            continue
        thr = Fraction(float(p) ** cfg.exponent)
        pa = p * al
        hit_r = None
        for r in range(1, int(pa) + 2):
            if 0 < pa - r < thr and _trial_prime(r):
                hit_r = r
                break
        if hit_r is None:
            continue
        qs = []
        for cfr in cs:
            pca = p * cfr * al
            hit_q = None
            for q in range(1, int(pca) + 2):
                if 0 < pca - q < thr:
                    hit_q = q
                    break
            if hit_q is None:
                qs = None
                break
            qs.append(hit_q)
        if qs is not None:
            count += 1
            witnesses.append((p, hit_r, tuple(qs)))
    return count, witnesses


class TestConfig:
    def test_gamma_formula(self, golden_cfg, two_dim_cfg):
        assert golden_cfg.gamma == pytest.approx(1.0 / 5.0)
        assert two_dim_cfg.gamma == pytest.approx(1.0 / 16.0)

    def test_epsilon_window(self):
        with pytest.raises(ContractError):
            ApproxConfig(c=CVector((constant("phi"),), 1.0), epsilon=0.2,
                         A=1.0, B=2.0)
        with pytest.raises(ContractError):
            ApproxConfig(c=CVector((constant("phi"),), 1.0), epsilon=0.1,
                         A=2.0, B=1.0)


class TestCountWitnesses:
    def test_no_primes(self, golden_cfg, table_small):
        count, tuples = count_witnesses(constant("sqrt3"), golden_cfg, 1,
                                        table_small)
        assert count == 0 and tuples == []

    def test_matches_naive_oracle(self, table_small):
        rng = random.Random(2024)
        names = ["sqrt2", "sqrt3", "phi", "e", "pi"]
        for trial in range(6):
            d = rng.choice([1, 1, 2])
            k = d + rng.random()
            cs = tuple(constant(rng.choice(names)) * 1 for _ in range(d))
            cfg = ApproxConfig(c=CVector(cs, k),
                               epsilon=0.3 / (d * (3 * k + 2)),
                               A=0.5, B=2.5)
            alpha = FixedReal.from_float(0.5 + 2.0 * rng.random())
            n_max = rng.randint(200, 900)
            got, tuples = count_witnesses(alpha, cfg, n_max, table_small)
            want, wit = naive_count(alpha, cfg, n_max)
            assert got == want
            assert [(t.p, t.r, t.q) for t in tuples] == wit

    def test_golden_regression(self, golden_cfg, table_big):
        count, tuples = count_witnesses(constant("sqrt3"), golden_cfg, 10**6,
                                        table_big)
        assert count == 529  # pinned from the first run of this code base
        assert all(revalidate_tuple(t, constant("sqrt3"), golden_cfg)
                   for t in tuples[:100])

    def test_monotone_in_n_and_eps(self, golden_cfg, table_small):
        alpha = constant("sqrt3")
        counts = [count_witnesses(alpha, golden_cfg, n, table_small,
                                  collect=False)[0]
                  for n in (1000, 5000, 20000)]
        assert counts == sorted(counts)
        tighter = ApproxConfig(c=golden_cfg.c, epsilon=0.05, A=1.0, B=2.0)
        a, _ = count_witnesses(alpha, tighter, 20000, table_small,
                               collect=False)
        b, _ = count_witnesses(alpha, golden_cfg, 20000, table_small,
                               collect=False)
        assert a <= b

    def test_piecewise_constancy(self, golden_cfg, table_small):
        alpha = constant("sqrt3")
        base, _ = count_witnesses(alpha, golden_cfg, 10**4, table_small,
                                  collect=False)
        for bump in (1 << 28, -(1 << 28)):  # 2**-100 in raw units
            count, _ = count_witnesses(FixedReal(alpha.raw + bump), golden_cfg,
                                       10**4, table_small, collect=False)
            assert count == base

    def test_slacks_strictly_inside(self, golden_cfg, table_big):
        _, tuples = count_witnesses(constant("sqrt3"), golden_cfg, 10**5,
                                    table_big)
        for t in tuples:
            thr = float(t.p) ** golden_cfg.exponent
            assert 0 < t.slack0.to_float() < thr
            for s in t.slack:
                assert 0 <= s.to_float() < thr  # stored slack_i truncated


class TestWitnessIntegral:
    def test_empty(self, golden_cfg, table_small):
        assert witness_integral(1.0, 2.0, golden_cfg, 1, table_small,
                                method="exact") == 0

    def test_additivity_exact(self, golden_cfg, table_small):
        i1 = witness_integral(1.0, 1.25, golden_cfg, 3000, table_small,
                              method="exact")
        i2 = witness_integral(1.25, 2.0, golden_cfg, 3000, table_small,
                              method="exact")
        i12 = witness_integral(1.0, 2.0, golden_cfg, 3000, table_small,
                               method="exact")
        assert i1 + i2 == i12  # exact rational equality

    def test_fast_matches_exact_d1(self, golden_cfg, table_small):
        ex = witness_integral(1.0, 2.0, golden_cfg, 4096, table_small,
                              method="exact")
        fa = witness_integral(1.0, 2.0, golden_cfg, 4096, table_small,
                              method="fast")
        assert fa == pytest.approx(float(ex), rel=1e-9)

    def test_fast_matches_exact_d2(self, two_dim_cfg, table_small):
        ex = witness_integral(1.0, 2.0, two_dim_cfg, 2000, table_small,
                              method="exact")
        fa = witness_integral(1.0, 2.0, two_dim_cfg, 2000, table_small,
                              method="fast")
        assert fa == pytest.approx(float(ex), rel=1e-9)

    def test_interval_within_config(self, golden_cfg, table_small):
        with pytest.raises(ContractError):
            witness_integral(0.5, 2.0, golden_cfg, 100, table_small)

    def test_table_too_small(self, golden_cfg):
        from diophlab.arith import build_arith_table

        tiny = build_arith_table(500)
        with pytest.raises(RangeError):
            witness_integral(1.0, 2.0, golden_cfg, 400, tiny, method="exact")

    def test_riemann_within_provable_bound(self, golden_cfg, table_small):
        points = 10**5
        riemann, intervals = riemann_scan(1.0, 2.0, golden_cfg, 2000,
                                          table_small, points)
        exact = witness_integral(1.0, 2.0, golden_cfg, 2000, table_small,
                                 method="exact")
        assert abs(riemann - exact) <= Fraction(intervals, points)


class TestGrowthTarget:
    def test_d1_reduction(self, golden_cfg):
        n = 10**4
        want = (0.25 * 0.25 * n ** (1 - 2 * (golden_cfg.gamma - 0.1))
                / math.log(n) ** 2)
        assert target_growth(golden_cfg, n) == pytest.approx(want, rel=1e-12)
        # with d = 1 the min-power is an empty product for both variants
        assert target_growth_alt(golden_cfg, n) == pytest.approx(want, rel=1e-12)

    def test_exponent_limit(self, golden_cfg):
        # as eps -> gamma the exponent tends to 1
        near = ApproxConfig(c=golden_cfg.c, epsilon=golden_cfg.gamma * 0.999,
                            A=1.0, B=2.0)
        n = 10**6
        expected_exponent = 1 - 2 * (near.gamma - near.epsilon)
        assert math.log(target_growth(near, n) * math.log(n) ** 2 * 16,
                        n) == pytest.approx(expected_exponent, abs=1e-6)

    def test_d2_hand_formula(self, two_dim_cfg):
        n = 10**4
        c_min = min(two_dim_cfg.c.floats())
        want = ((1.0 / 4.0) * min(c_min, 2.0) / 8.0
                * n ** (1 - 3 * (two_dim_cfg.gamma - 0.05)) / math.log(n) ** 2)
        assert target_growth(two_dim_cfg, n) == pytest.approx(want, rel=1e-12)
        assert target_growth_alt(two_dim_cfg, n) \
            == pytest.approx(target_growth(two_dim_cfg, n), rel=1e-12)


class TestWindowCounts:
    def test_degenerate_wide_delta(self, golden_cfg, table_small):
        wp = WindowParams.from_config(golden_cfg, 1000)
        wc = window_counts(1000, wp, golden_cfg, table_small, delta=1.5)
        lam_sum = sum(table_small.von_mangoldt(n)
                      for n in range(int(math.ceil(1500.0)), 2001))
        assert wc.weighted >= lam_sum - 1e-9

    def test_degenerate_tiny_delta(self, golden_cfg, table_small):
        wp = WindowParams.from_config(golden_cfg, 1000)
        wc = window_counts(1000, wp, golden_cfg, table_small, delta=1e-30)
        assert wc.weighted == 0.0 and wc.prime_count == 0

    def test_golden_main_term(self, golden_cfg, table_big):
        P = 10**5
        wp = WindowParams.from_config(golden_cfg, P)
        wc = window_counts(P, wp, golden_cfg, table_big)
        main = wp.delta * (wp.b - wp.a * wp.mu_window) * P
        assert 0.5 <= wc.weighted / main <= 1.5

    def test_reverse_pass_identical(self, golden_cfg, table_small):
        wp = WindowParams.from_config(golden_cfg, 10**4)
        fwd = window_counts(10**4, wp, golden_cfg, table_small)
        rev = window_counts(10**4, wp, golden_cfg, table_small, reverse=True)
        assert fwd.weighted == rev.weighted  # bit-identical via exact summation
        assert fwd.prime_count == rev.prime_count

    def test_solution_product(self, golden_cfg, table_small):
        wp = WindowParams.from_config(golden_cfg, 5000)
        wc = window_counts(5000, wp, golden_cfg, table_small)
        assert wc.solutions == wc.primes_in_window * wc.prime_count

    def test_window_parameters(self, golden_cfg):
        wp = WindowParams.from_config(golden_cfg, 10**4)
        assert wp.mu_window == pytest.approx(1.5)
        assert wp.eta == pytest.approx((1.5 * 10**4) ** (-0.1))
        assert wp.delta == pytest.approx(min(golden_cfg.c.floats()) * wp.eta / 2)
        assert wp.nu == pytest.approx(wp.eta / (1.5 * 10**4) * 0.5)


class TestProductSet:
    def test_mu_ge_one_admits_all(self, golden_cfg):
        out = product_set(constant("sqrt3"), golden_cfg, 50, mu=1.0)
        assert [n for n, _ in out] == list(range(1, 51))

    def test_naive_recheck(self, golden_cfg):
        alpha = constant("sqrt3")
        out = dict(product_set(alpha, golden_cfg, 10**4))
        mu = (10**4) ** golden_cfg.exponent
        af = alpha.to_fraction()
        cf = golden_cfg.c.entries[0].to_fraction()
        for n in range(1, 10**4 + 1):
            in_set = ((n * af) % 1 < Fraction(mu)
                      and (n * cf * af) % 1 < Fraction(mu))
            assert (n in out) == in_set
            if n in out:
                assert out[n] == n * int(n * af)

    def test_semiprime_members_are_witness_products(self, golden_cfg,
                                                    table_big):
        alpha = constant("sqrt3")
        n_max = 10**5
        members = product_set(alpha, golden_cfg, n_max)
        _, tuples = count_witnesses(alpha, golden_cfg, n_max, table_big)
        witness_products = {t.p * t.r for t in tuples}
        for n, value in members:
            r = value // n
            if (n <= table_big.limit and r >= 2 and r <= table_big.limit
                    and table_big.is_prime(n) and table_big.is_prime(r)
                    and all(q >= 1 for q in
                            [int((n * ci.raw * alpha.raw) >> 256)
                             for ci in golden_cfg.c.entries])):
                # value = n * r is a product of two primes
                assert value == n * r
                assert value in witness_products


class TestSieveSide:
    def test_trivial_when_mu_large(self, golden_cfg, table_small):
        sp = SieveSideParams(N=100, mu_target=1.0, Q=10.0, L=1.0, t1=1, t2=1)
        res = sieve_side_counts(constant("sqrt3"), sp, golden_cfg, table_small)
        assert res.s_exact == 100
        assert res.main_term == pytest.approx(100.0)

    def test_matches_naive_loop(self, golden_cfg, table_small):
        alpha = constant("sqrt3")
        sp = SieveSideParams.from_config(golden_cfg, 10**4, 2, 3, Q=6.0)
        res = sieve_side_counts(alpha, sp, golden_cfg, table_small)
        mu = sp.mu_target
        af = alpha.to_fraction()
        cf = golden_cfg.c.entries[0].to_fraction()
        naive = 0
        for n in range(1, 10**4 // 2 + 1):
            c1 = (n * 2 * af / 3) % 1 < Fraction(mu) / 3
            c2 = (n * 2 * cf * af) % 1 < Fraction(mu)
            naive += bool(c1 and c2)
        assert res.s_exact == naive

    def test_error_bound_inequality(self, golden_cfg, table_small):
        alpha = constant("sqrt3")
        for (t1, t2) in [(1, 1), (1, 2), (2, 1), (2, 3)]:
            sp = SieveSideParams.from_config(golden_cfg, 4000, t1, t2, Q=8.0)
            res = sieve_side_counts(alpha, sp, golden_cfg, table_small)
            slack = sp.N * sp.mu_target ** golden_cfg.d / sp.L
            assert abs(res.s_exact - res.main_term) <= res.e_bound + slack

    def test_asymmetry_permitted(self, golden_cfg, table_small):
        alpha = constant("sqrt3")
        s12 = sieve_side_counts(alpha, SieveSideParams.from_config(
            golden_cfg, 10**4, 2, 3, Q=6.0), golden_cfg, table_small)
        s21 = sieve_side_counts(alpha, SieveSideParams.from_config(
            golden_cfg, 10**4, 3, 2, Q=6.0), golden_cfg, table_small)
        assert s12.s_exact != s21.s_exact  # congruence roles differ

    def test_raw_below_majorant(self, golden_cfg, table_small):
        alpha = constant("sqrt3")
        sp = SieveSideParams.from_config(golden_cfg, 500, 1, 2, Q=2.0)
        raw = sieve_side_error_raw(alpha, sp, golden_cfg)
        res = sieve_side_counts(alpha, sp, golden_cfg, table_small)
        assert raw <= res.e_bound * (1 + 1e-9)

    def test_error_sum_trivialities(self, golden_cfg, table_small):
        alpha = constant("sqrt3")
        assert sieve_error_sum(alpha, golden_cfg, 100, table_small, Q=0.5) == 0.0
        # Q = 2: pairs (1,1), (1,2), (2,1)
        sp_pairs = []
        t1 = 1
        while t1 <= 2.0:
            t2 = 1
            while t1 * t2 <= 2.0:
                sp_pairs.append((t1, t2))
                t2 += 1
            t1 += 1
        assert sp_pairs == [(1, 1), (1, 2), (2, 1)]


class TestIntervalStructure:
    def test_segments_disjoint_within_prime(self, golden_cfg, table_small):
        from diophlab.counting import _exact_prime_segments

        for p, _, segments in _exact_prime_segments(1.0, 2.0, golden_cfg, 500,
                                                    table_small):
            ordered = sorted(segments)
            for (l1, h1), (l2, h2) in zip(ordered, ordered[1:]):
                assert h1 <= l2  # disjoint: sum of lengths = measure of union
