"""Exact divisor-power counts, convolution tables, and sup norms."""

import math
import random

import numpy as np
import pytest

from zetaconv import (
    InvalidInput,
    LimitTooLarge,
    SupNotCertified,
    TailNotCertified,
    ZetaParams,
    convolution_table,
    divisor_power_counts,
    exact_sup_norm,
    naive_convolution,
    sup_norm,
    zeta,
)
from zetaconv.convolution import default_max_m, tail_recursion_bound


def brute_count(n: int, m: int) -> int:
    """Ordered n-tuples with product m, via divisor recursion."""
    if n == 1:
        return 1
    return sum(brute_count(n - 1, m // d) for d in range(1, m + 1) if m % d == 0)


def test_d1_is_one():
    assert divisor_power_counts(1, 1000) == [1] * 1000


def test_d2_of_4():
    assert divisor_power_counts(2, 4)[3] == 3 == brute_count(2, 4)


def test_d3_of_8():
    got = divisor_power_counts(3, 8)[7]
    assert got == math.comb(5, 3) == 10 == brute_count(3, 8)


def test_counts_match_brute_force():
    for n in (2, 3, 4):
        d = divisor_power_counts(n, 60)
        for m in (1, 2, 6, 12, 36, 48, 60):
            assert d[m - 1] == brute_count(n, m)


def test_multiplicativity_on_random_coprime_pairs():
    rnd = random.Random(20240809)
    d_cache = {n: divisor_power_counts(n, 10**4) for n in (2, 3, 4, 5, 6)}
    done = 0
    while done < 30:
        a = rnd.randrange(2, 100)
        b = rnd.randrange(2, 100)
        if math.gcd(a, b) != 1 or a * b > 10**4:
            continue
        n = rnd.choice([2, 3, 4, 5, 6])
        d = d_cache[n]
        assert d[a * b - 1] == d[a - 1] * d[b - 1] == brute_count(n, a * b)
        done += 1


def test_dirichlet_partial_sum_sandwich():
    d2_small = divisor_power_counts(2, 100)
    d2_big = divisor_power_counts(2, 100**2)
    lhs = sum(c * m**-2.0 for m, c in enumerate(d2_small, 1))
    mid = sum(m**-2.0 for m in range(1, 101)) ** 2
    rhs = sum(c * m**-2.0 for m, c in enumerate(d2_big, 1))
    assert lhs <= mid <= rhs


def test_partial_sums_increase_to_zeta_power(params2):
    z3 = zeta(params2, 0.0).value.real ** 3
    d = divisor_power_counts(3, 10**4)
    s1 = sum(c * m**-2.0 for m, c in enumerate(d[:1000], 1))
    s2 = sum(c * m**-2.0 for m, c in enumerate(d, 1))
    assert s1 < s2 < z3


def test_table_n1_masses(params2):
    t = convolution_table(params2, 1, 50)
    zv = zeta(params2, 0.0).value.real
    assert t.masses[0] == pytest.approx(1.0 / zv, rel=1e-14)
    assert abs(t.masses[0] - 0.60793) <= 1e-5
    for m in (2, 7, 50):
        assert t.masses[m - 1] == pytest.approx(m**-2.0 / zv, rel=1e-13)


def test_route_equivalence_small_n(params2):
    for n in (1, 2, 3, 4):
        fast = convolution_table(params2, n, 200)
        slow = naive_convolution(params2, n, 200)
        assert fast.counts == slow.counts
        assert float(np.max(np.abs(fast.masses - slow.masses))) <= 1e-12


def test_n2_mass_at_4(params2):
    t = convolution_table(params2, 2, 10)
    zv = zeta(params2, 0.0).value.real
    assert t.counts[3] == 3
    assert t.masses[3] == pytest.approx(3.0 * 4.0**-2.0 / zv**2, rel=1e-13)
    assert abs(t.masses[3] - 0.0693) <= 1e-4


def test_naive_n1_is_base_pmf(params2):
    t = naive_convolution(params2, 1, 100)
    base = convolution_table(params2, 1, 100)
    assert t.counts == base.counts
    assert np.array_equal(t.masses, base.masses)


def test_naive_rejects_large_n(params2):
    with pytest.raises(InvalidInput):
        naive_convolution(params2, 6, 10)


def test_n2_support_is_all_m(params2):
    t = naive_convolution(params2, 2, 120)
    assert all(c >= 2 for c in t.counts[1:])  # 1*m and m*1
    assert t.counts[0] == 1


def test_normalization_bracket(params2):
    for n in (1, 2, 3):
        t = convolution_table(params2, n, 10**5)
        assert abs(t.retained_mass() + t.tail_mass_bound - 1.0) <= 1e-10
        assert t.retained_mass() <= 1.0


def test_recursion_bound_dominates_true_tail(params2):
    for n in (2, 3):
        t = convolution_table(params2, n, 2000)
        assert t.tail_mass_recursion_bound >= t.tail_mass_bound - 1e-12


def test_tail_tolerance_enforced(params2):
    with pytest.raises(TailNotCertified):
        convolution_table(params2, 3, 100, tail_tolerance=1e-6)


def test_sup_norm_n1(params2):
    t = convolution_table(params2, 1, 1000)
    m, v = sup_norm(t)
    assert m == 1
    assert v == pytest.approx(1.0 / zeta(params2, 0.0).value.real, rel=1e-14)


def test_sup_norm_n2_full_scan(params2):
    t = convolution_table(params2, 2, 10**4)
    m, v = sup_norm(t)
    assert m == 1
    zv = zeta(params2, 0.0).value.real
    assert v == pytest.approx(zv**-2.0, rel=1e-13)
    assert v == float(np.max(t.masses))


def test_sup_norm_tie_reports_smallest_m(params2):
    # at n=4 the masses at m=1 and m=2 coincide exactly
    t = convolution_table(params2, 4, 100)
    assert t.log_masses[0] == t.log_masses[1]
    m, _ = sup_norm(t)
    assert m == 1


def test_exact_sup_matches_table_scan(params2):
    for n in (1, 2, 4, 16):
        t = convolution_table(params2, n, 10**5)
        m_star, value, rel = exact_sup_norm(params2, n)
        assert m_star <= 10**5
        assert value == pytest.approx(float(np.max(t.masses)), rel=1e-12)
    m16, v16, _ = exact_sup_norm(params2, 16)
    assert m16 == 48
    assert v16 == pytest.approx(0.009367967086, rel=1e-9)


def test_sup_declined_when_argmax_escapes(params2):
    t = convolution_table(params2, 64, 10**4)
    with pytest.raises(SupNotCertified):
        sup_norm(t)


def test_sqrt_n_sup_recorded(params2):
    vals = {}
    for n in (1, 4, 16, 64):
        _, v, _ = exact_sup_norm(params2, n)
        vals[n] = math.sqrt(n) * v
    assert all(math.isfinite(v) and v > 0 for v in vals.values())
    assert max(vals.values()) == vals[1]


def test_memory_budget(monkeypatch, params2):
    monkeypatch.setenv("ZETACONV_MEM_MB", "1")
    with pytest.raises(LimitTooLarge):
        convolution_table(params2, 2, 10**6)


def test_default_max_m_policy():
    assert default_max_m(1) == 10**5
    assert default_max_m(4) == 10**5
    assert default_max_m(16) == 256_000
    assert default_max_m(64) == 10**6
    assert default_max_m(256) == 10**6


def test_serialization_roundtrip_entries(params2):
    t = convolution_table(params2, 2, 10)
    rows = list(t.entries())
    assert rows[0] == (1, 1, pytest.approx(zeta(params2, 0.0).value.real ** -2))
    assert [r[0] for r in rows] == list(range(1, 11))
