"""Exact convolution powers of the zeta distribution.

The n-fold convolution puts mass d_n(m) m^(-sigma) / zeta(sigma)^n at
-log m, where d_n(m) counts ordered n-tuples of positive integers with
product m. d_n is multiplicative with d_n(p^k) = C(n+k-1, k), so every
count is computed exactly (unbounded integers) from a smallest-prime-factor
sieve; masses are assembled in log space because both d_n(m) and
zeta(sigma)^n overflow doubles long before n reaches 256.

Support points are keyed by the integer product m, never by the float
-log m: distinct integers can collide after rounding, equal products
cannot differ.

`naive_convolution` rebuilds small tables by the pairwise recursion
mu^(n) (x) = sum_y mu^(n-1)(x - y) mu(y) and serves as the oracle for the
multiplicative route. `exact_sup_norm` computes the global maximal mass
for any n without a table: the prime exponents of a zeta-distributed
integer are independent geometrics, so the exponent vector of a product of
n of them is independent negative binomials and the maximum factorizes as

    ||mu^(n)||_inf = zeta(sigma)^(-n) * prod_{p^sigma < n} max_k C(n+k-1,k) p^(-k sigma).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import InvalidInput, LimitTooLarge, SupNotCertified, TailNotCertified
from .membudget import max_table_rows
from .primes import smallest_prime_factor
from .zeta_core import ZetaParams, zeta

__all__ = [
    "ConvolutionTable",
    "divisor_power_counts",
    "convolution_table",
    "naive_convolution",
    "sup_norm",
    "exact_sup_norm",
    "default_max_m",
    "tail_recursion_bound",
]


@dataclass(frozen=True)
class ConvolutionTable:
    """Masses of the n-fold convolution on the retained support m <= max_m.

    counts[m-1] = d_n(m) exactly; masses[m-1] = d_n(m) m^-sigma / zeta^n
    (computed as exp of log_masses). tail_mass_bound certifies the omitted
    mass: retained + bound brackets 1. zeta_pow_bound is the relative
    uncertainty of zeta(sigma)^n used in the masses.
    """

    sigma: float
    n: int
    max_m: int
    counts: list = field(repr=False)
    log_masses: np.ndarray = field(repr=False)
    masses: np.ndarray = field(repr=False)
    tail_mass_bound: float
    tail_mass_recursion_bound: float
    zeta_pow_bound: float

    def __len__(self) -> int:
        return self.max_m

    def entries(self):
        """Iterate (m, d_n(m), mass) ascending in m."""
        for i in range(self.max_m):
            yield i + 1, self.counts[i], float(self.masses[i])

    def retained_mass(self) -> float:
        return math.fsum(self.masses)

    def support_x(self) -> np.ndarray:
        return -np.log(np.arange(1, self.max_m + 1, dtype=np.float64))


@lru_cache(maxsize=64)
def _comb_cache(n: int) -> dict:
    return {}


def _comb(n: int, k: int) -> int:
    cache = _comb_cache(n)
    v = cache.get(k)
    if v is None:
        v = math.comb(n + k - 1, k)
        cache[k] = v
    return v


def _root_exp_tables(max_m: int) -> tuple[np.ndarray, np.ndarray]:
    """root[m] = m / p^v, expn[m] = v for p = spf(m); linear DP over the sieve."""
    spf = smallest_prime_factor(max_m)
    root = np.zeros(max_m + 1, dtype=np.int64)
    expn = np.zeros(max_m + 1, dtype=np.int8)
    root[1] = 1
    spf_l = spf.tolist()
    root_l = root.tolist()
    expn_l = expn.tolist()
    for m in range(2, max_m + 1):
        p = spf_l[m]
        q = m // p
        if spf_l[q] == p:
            expn_l[m] = expn_l[q] + 1
            root_l[m] = root_l[q]
        else:
            expn_l[m] = 1
            root_l[m] = q
    return np.asarray(root_l, dtype=np.int64), np.asarray(expn_l, dtype=np.int8)


def divisor_power_counts(n: int, max_m: int) -> list:
    """Exact d_n(m) for m = 1..max_m (index m-1), unbounded integers."""
    if n < 1 or max_m < 1:
        raise InvalidInput("need n >= 1 and max_m >= 1")
    if n == 1 or max_m == 1:
        return [1] * max_m
    root, expn = _root_exp_tables(max_m)
    root_l = root.tolist()
    expn_l = expn.tolist()
    d = [1] * (max_m + 1)
    for m in range(2, max_m + 1):
        d[m] = d[root_l[m]] * _comb(n, expn_l[m])
    return d[1:]


def default_max_m(n: int) -> int:
    """Retained support size tracking the mass bulk at desk scale.

    Grows like 2^(n/2) * 1e3 (the bulk sits near m = e^{|alpha| n}), with a
    1e6 default ceiling so desk runs stay in seconds; the memory budget is
    a hard cap on top. Callers needing more pass max_m explicitly.
    """
    return min(max(10**5, min((2 ** (n // 2)) * 1000, 10**6)), max_table_rows())


def convolution_table(
    params: ZetaParams,
    n: int,
    max_m: int,
    tail_tolerance: float | None = None,
) -> ConvolutionTable:
    """Build the exact mass table for the n-fold convolution up to max_m.

    tail_mass_bound comes from zeta(sigma)^n minus the retained exact
    partial sum (tight); an independent n-fold Dirichlet tail recursion is
    also recorded. TailNotCertified if a tolerance is given and exceeded.
    """
    if n < 1:
        raise InvalidInput("n must be >= 1")
    if max_m < 1:
        raise InvalidInput("max_m must be >= 1")
    if max_m > max_table_rows():
        raise LimitTooLarge(
            f"max_m={max_m} exceeds the memory budget ({max_table_rows()} rows)"
        )
    sigma = params.sigma
    z = zeta(params, 0.0)
    log_zeta = math.log(z.value.real)
    counts = divisor_power_counts(n, max_m)
    log_d = np.zeros(max_m, dtype=np.float64)
    if n > 1:
        # reuse the multiplicative structure: log d via the same DP shape
        log_d = np.array([math.log(c) if c > 1 else 0.0 for c in counts])
    m_arr = np.arange(1, max_m + 1, dtype=np.float64)
    log_masses = log_d - sigma * np.log(m_arr) - n * log_zeta
    masses = np.exp(log_masses)

    # tail = 1 - retained (zeta^n and the partial sum both overflow doubles
    # for large n, so the difference is taken on the normalized masses;
    # per-entry exp() rounding stays ~1e-15 total)
    rel_z = n * z.bound / z.value.real
    tail = max(0.0, 1.0 - math.fsum(masses)) + 2.0 * rel_z
    rec = (
        tail_recursion_bound(params, n, max_m) * math.exp(-n * log_zeta)
        if n <= 8
        else math.inf
    )
    if tail_tolerance is not None and tail > tail_tolerance:
        raise TailNotCertified(
            f"tail mass bound {tail:.3e} exceeds tolerance {tail_tolerance:.3e} "
            f"(n={n}, max_m={max_m})"
        )
    return ConvolutionTable(
        sigma=sigma,
        n=n,
        max_m=max_m,
        counts=counts,
        log_masses=log_masses,
        masses=masses,
        tail_mass_bound=tail,
        tail_mass_recursion_bound=rec,
        zeta_pow_bound=rel_z,
    )


def tail_recursion_bound(params: ZetaParams, n: int, max_m: int) -> float:
    """Upper bound for sum_{m > max_m} d_n(m) m^(-sigma) by recursion.

    T_n(y) <= sum_{j <= y} j^-sigma T_{n-1}(y/j) + T_1(y) zeta^{n-1},
    T_1(y) = y^(1-sigma) / (sigma - 1). Independent of the zeta-difference
    route; used as a certification cross-check for small n.
    """
    sigma = params.sigma
    zv = zeta(params, 0.0).value.real
    memo: dict[tuple[int, int], float] = {}

    def T(level: int, y: int) -> float:
        if y < 1:
            return zv**level
        if level == 1:
            return float(y) ** (1.0 - sigma) / (sigma - 1.0)
        key = (level, y)
        if key in memo:
            return memo[key]
        js = np.arange(1, y + 1, dtype=np.int64)
        quot = y // js
        pows = js.astype(np.float64) ** -sigma
        vals, inv = np.unique(quot, return_inverse=True)
        weights = np.bincount(inv, weights=pows)
        total = math.fsum(float(w) * T(level - 1, int(v)) for v, w in zip(vals, weights))
        total += T(1, y) * zv ** (level - 1)
        memo[key] = total
        return total

    return T(n, int(max_m))


def naive_convolution(params: ZetaParams, n: int, max_m: int) -> ConvolutionTable:
    """Oracle table via the pairwise recursion over truncated supports.

    Counts convolve exactly in integers; masses convolve in floats keyed by
    the integer product (a pair (a, b) lands on m = a*b, retained when
    m <= max_m). Restricted to small n by contract.
    """
    if not (1 <= n <= 5):
        raise InvalidInput("naive_convolution is the small-n oracle; need 1 <= n <= 5")
    if max_m < 1:
        raise InvalidInput("max_m must be >= 1")
    sigma = params.sigma
    z = zeta(params, 0.0)
    base_mass = [m ** (-sigma) / z.value.real for m in range(1, max_m + 1)]
    counts = [1] * max_m
    masses = list(base_mass)
    for _ in range(n - 1):
        new_c = [0] * max_m
        new_m = [0.0] * max_m
        for a in range(1, max_m + 1):
            ca = counts[a - 1]
            ma = masses[a - 1]
            for b in range(1, max_m // a + 1):
                idx = a * b - 1
                new_c[idx] += ca
                new_m[idx] += ma * base_mass[b - 1]
        counts, masses = new_c, new_m
    masses_arr = np.array(masses)
    with np.errstate(divide="ignore"):
        log_masses = np.log(masses_arr)
    rel_z = n * z.bound / z.value.real
    tail = max(0.0, 1.0 - math.fsum(masses_arr)) + 2.0 * rel_z
    return ConvolutionTable(
        sigma=sigma,
        n=n,
        max_m=max_m,
        counts=counts,
        log_masses=log_masses,
        masses=masses_arr,
        tail_mass_bound=tail,
        tail_mass_recursion_bound=tail_recursion_bound(params, n, max_m)
        * math.exp(-n * math.log(z.value.real)),
        zeta_pow_bound=rel_z,
    )


def sup_norm(table: ConvolutionTable) -> tuple[int, float]:
    """Maximal retained mass and its location (smallest m on float ties).

    Certified as the global maximum only when the independent exact route
    places the argmax inside the retained support; otherwise the retained
    maximum provably misses the true supremum and SupNotCertified is
    raised rather than returning an uncertified value.
    """
    lm = table.log_masses
    vmax = float(lm.max())
    argmax_m = int(np.flatnonzero(lm == vmax)[0]) + 1
    value = float(table.masses[argmax_m - 1])
    params = ZetaParams(sigma=table.sigma)
    exact_m, exact_v, _ = exact_sup_norm(params, table.n)
    if exact_m > table.max_m:
        raise SupNotCertified(
            f"global argmax m*={exact_m} (mass {exact_v:.3e}) lies beyond "
            f"max_m={table.max_m}; retained maximum {value:.3e} is not the sup"
        )
    return argmax_m, value


def exact_sup_norm(params: ZetaParams, n: int) -> tuple[int, float, float]:
    """Global sup of the n-fold convolution masses, no table needed.

    Returns (argmax m*, value, relative bound). Only primes with
    p^sigma < n can carry a nonzero exponent at the maximum; ties between
    consecutive exponents keep the smaller one, hence the smallest m*.
    """
    if n < 1:
        raise InvalidInput("n must be >= 1")
    sigma = params.sigma
    z = zeta(params, 0.0)
    log_v = -n * math.log(z.value.real)
    m_star = 1
    p = 2
    while float(p) ** sigma < n:
        k = 0
        pms = float(p) ** (-sigma)
        while (n + k) * pms > (k + 1):
            k += 1
        if k:
            log_v += math.log(_comb(n, k)) - k * sigma * math.log(p)
            m_star *= p**k
        p = _next_prime(p)
    rel = n * z.bound / z.value.real
    return m_star, math.exp(log_v), rel


def _next_prime(p: int) -> int:
    q = p + 1
    while any(q % r == 0 for r in range(2, math.isqrt(q) + 1)):
        q += 1
    return q
