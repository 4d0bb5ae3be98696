import math

import numpy as np
import pytest

from zetaconv.errors import LimitTooLarge
from zetaconv.primes import (
    THETA_MODEL_KAPPA,
    integer_tail_bound,
    log_integral,
    prime_sums,
    sieve,
    smallest_prime_factor,
)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def test_sieve_small():
    assert sieve(10).primes.tolist() == [2, 3, 5, 7]
    assert sieve(2).primes.tolist() == [2]


def test_sieve_count_at_million():
    assert len(sieve(10**6)) == 78498


def test_sieve_matches_trial_division():
    got = set(sieve(10**4).primes.tolist())
    want = {n for n in range(2, 10**4 + 1) if _is_prime(n)}
    assert got == want


def test_sieve_ordered_from_two(ptable2):
    pr = ptable2.primes
    assert pr[0] == 2
    assert np.all(np.diff(pr) > 0)


def test_spf_table():
    spf = smallest_prime_factor(10**4)
    for n in (2, 3, 4, 9, 12, 97, 98, 9991, 10000):
        p = int(spf[n])
        assert n % p == 0 and _is_prime(p)
        assert all(n % q for q in range(2, p))


def test_prime_sums_match_table():
    ps = prime_sums(10**6, 1.5)
    p = sieve(10**6).primes.astype(np.float64)
    lp = np.log(p)
    pw = p**1.5
    assert ps.count == len(p)
    assert abs(ps.theta - float(np.sum(lp))) <= 1e-8
    assert abs(ps.alpha_partial - float(np.sum(-lp / (pw - 1.0)))) <= 1e-12
    assert abs(ps.beta_partial - float(np.sum(0.5 * lp * lp * pw / (pw - 1.0) ** 2))) <= 1e-12


def test_theta_model_holds_on_own_sieve():
    # |theta(x) - (x - sqrt x - x^(1/3))| <= kappa sqrt(x), measured both at
    # and just before each prime, which is where the sup lives
    pr = sieve(10**6).primes.astype(np.float64)
    th = np.cumsum(np.log(pr))
    smooth = pr - np.sqrt(pr) - pr ** (1.0 / 3.0)
    lo = 10**4
    i = int(np.searchsorted(pr, lo))
    r_at = np.abs(th[i:] - smooth[i:]) / np.sqrt(pr[i:])
    nxt = pr[i + 1 :]
    r_before = np.abs(th[i:-1] - (nxt - np.sqrt(nxt) - nxt ** (1.0 / 3.0))) / np.sqrt(nxt)
    worst = max(float(r_at.max()), float(r_before.max()))
    assert worst <= 0.9 * THETA_MODEL_KAPPA


def test_log_integral_against_quadrature():
    # midpoint rule oracle on a truncated range plus analytic remainder
    for k, s, P in [(0, 2.0, 50.0), (1, 2.0, 50.0), (2, 1.5, 100.0)]:
        xs = np.linspace(P, P * 1e4, 2_000_001)
        mid = 0.5 * (xs[1:] + xs[:-1])
        val = float(np.sum(np.log(mid) ** k * mid**-s) * (xs[1] - xs[0]))
        val += log_integral(k, s, float(xs[-1]))
        assert abs(val - log_integral(k, s, P)) <= 1e-6 * log_integral(k, s, P)


def test_integer_tail_bound_majorizes():
    P = 1000
    direct = sum(math.log(n) * n**-2.0 for n in range(P + 1, 200_000))
    assert integer_tail_bound(1, 2.0, P) >= direct


def test_sieve_budget(monkeypatch):
    monkeypatch.setenv("ZETACONV_MEM_MB", "1")
    with pytest.raises(LimitTooLarge):
        sieve(10**8)
