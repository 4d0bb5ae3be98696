"""Levy measure of the zeta distribution and the constants built from it.

The distribution is compound Poisson: log f_sigma(t) equals the integral
of (e^{-itx} - 1) against the atomic measure

    N_sigma = sum_{p prime} sum_{r>=1} (p^{-r sigma} / r) delta_{r log p},

whose total mass is log zeta(sigma). From the atoms come the Taylor
coefficients a_l = (-i)^l s_l with s_l = sum w x^l / l!, the drift
alpha = Im a_1 (negative), the diffusion beta = -a_2 (positive), and the
envelope constants:

    B (cubic remainder):  sum_{l>=2} s_l * delta_ref^(l-3)
    C (lower envelope):   sum_{j>=1} s_{4j-2} * delta_ref^(4j-4)

Both series converge over primes only for exponent sigma - delta_ref > 1,
so they are evaluated at the operational radius
delta_ref = min(1, (sigma-1)/2) where convergence is certified; requesting
a larger radius raises DivergentConstant. The certified neighborhood for
all envelope inequalities is delta = min(beta / (2 B), delta_ref).

alpha and beta also have closed prime-sum forms (dual to the
zeta-derivative route):

    alpha = sum_p -log(p) / (p^sigma - 1)
    beta  = sum_p (log p)^2 / 2 * p^sigma / (p^sigma - 1)^2

Prime sums are truncated at the sieve limit and completed with the
smoothed-prime-counter tail estimate from `primes`; each constant carries
the model residual bound and the (much coarser) integer-majorant bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import primes as _primes
from .errors import (
    DivergentConstant,
    GridOutsideNeighborhood,
    InvalidInput,
    TruncationInsufficient,
)
from .primes import PrimeTable, integer_tail_bound, log_integral, prime_sums, prime_tail_weighted, sieve
from .zeta_core import Certified, ZetaParams, char_fn_grid, zeta, zeta_deriv1, zeta_deriv2

__all__ = [
    "PrimeTable",
    "sieve",
    "LevyAtoms",
    "levy_atoms",
    "TaylorCoefficients",
    "taylor_coefficients",
    "DualConstants",
    "alpha_beta_dual",
    "moment_check",
    "EnvelopeReport",
    "envelope_check",
    "continuous_log",
]


@dataclass(frozen=True)
class LevyAtoms:
    """Atoms (r log p, p^{-r sigma}/r) for p <= limit, sorted by location.

    mass_defect_bound certifies how much of log zeta(sigma) the truncation
    can miss (prime tail, integer majorant, plus dropped r-tails).
    """

    sigma: float
    limit: int
    locations: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    mass_defect_bound: float

    def __len__(self) -> int:
        return len(self.weights)

    def total_mass(self) -> float:
        return math.fsum(self.weights)

    def exponent_grid(self, ts: np.ndarray) -> np.ndarray:
        """Gamma(t) = sum w (e^{-it x} - 1) evaluated on a t grid."""
        ts = np.asarray(ts, dtype=np.float64)
        out = np.empty(ts.shape, dtype=np.complex128)
        chunk = max(1, int(4e6) // max(len(self), 1))
        for i in range(0, ts.size, chunk):
            sl = ts[i : i + chunk]
            out[i : i + chunk] = np.exp(-1j * np.multiply.outer(sl, self.locations)) @ self.weights
        return out - self.total_mass()


def levy_atoms(params: ZetaParams, table: PrimeTable) -> LevyAtoms:
    """Materialize the Levy atoms with weight >= params.atom_cutoff.

    The r-sum for each prime is cut once the weight drops below the cutoff;
    the dropped geometric tails are accumulated into the defect bound.
    """
    if table.limit != params.prime_limit:
        raise InvalidInput(
            f"prime table limit {table.limit} != params.prime_limit {params.prime_limit}"
        )
    sigma = params.sigma
    cutoff = params.atom_cutoff
    p = table.primes.astype(np.float64)
    lp = np.log(p)
    locs, ws = [], []
    dropped = 0.0
    r = 1
    alive = p
    while True:
        w = np.exp(-r * sigma * np.log(alive)) / r
        keep = w >= cutoff
        if not keep.any():
            # geometric bound on everything from this r upward
            x = alive ** (-sigma)
            dropped += float(np.sum(x**r / (r * (1.0 - x))))
            break
        if (~keep).any():
            x = alive[~keep] ** (-sigma)
            dropped += float(np.sum(x**r / (r * (1.0 - x))))
        alive = alive[keep]
        locs.append(r * np.log(alive))
        ws.append(w[keep])
        r += 1
    locations = np.concatenate(locs)
    weights = np.concatenate(ws)
    order = np.argsort(locations, kind="stable")
    # prime tail of the total mass: sum_{p>P} -log(1 - p^-sigma), majorized
    # over integers (coarse but elementary; fine for a defect bound)
    s_int = integer_tail_bound(0, sigma, table.limit)
    tail = s_int / (1.0 - (table.limit + 1.0) ** (-sigma))
    return LevyAtoms(
        sigma=sigma,
        limit=table.limit,
        locations=locations[order],
        weights=weights[order],
        mass_defect_bound=tail + dropped,
    )


@dataclass(frozen=True)
class TaylorCoefficients:
    """Constants of the log characteristic function around t = 0.

    a[l-1] holds a_l for l = 1..L; alpha = Im a_1 < 0, beta = -Re a_2 > 0.
    radius is the operational delta_ref at which B_const/C_const were
    certified; delta = min(beta/(2 B), radius) is the neighborhood on which
    the envelope inequalities are guaranteed.
    """

    sigma: float
    alpha: float
    beta: float
    a: tuple[complex, ...]
    B_const: float
    C_const: float
    radius: float
    delta: float
    truncation_error: float

    def __post_init__(self):
        if not self.alpha < 0:
            raise ArithmeticError("drift alpha must be negative")
        if not (self.beta > 0 and self.B_const > 0 and self.C_const > 0):
            raise ArithmeticError("beta, B, C must be positive")
        tol = max(self.truncation_error, 1e-12)
        if abs(self.a[0] - 1j * self.alpha) > tol or abs(self.a[1] + self.beta) > tol:
            raise ArithmeticError("a_1 = i alpha / a_2 = -beta consistency failed")


def default_radius(sigma: float) -> float:
    """Operational radius at which the envelope series certify convergent."""
    return min(1.0, (sigma - 1.0) / 2.0)


def taylor_coefficients(
    params: ZetaParams,
    table: PrimeTable,
    L: int = 8,
    radius: float | None = None,
) -> TaylorCoefficients:
    """Taylor coefficients a_l and envelope constants from the Levy atoms.

    a_l tails beyond the sieve use the smoothed prime counter (the l-th
    coefficient weight is (r log p)^l / l!, dominated by r = 1). B and C
    are upper-bound constants: their prime tails are added as certified
    majorants, which keeps every inequality they certify valid.
    """
    if L < 2:
        raise InvalidInput("need L >= 2")
    sigma = params.sigma
    dref = default_radius(sigma)
    if radius is not None:
        if radius >= sigma - 1.0:
            raise DivergentConstant(
                f"envelope series certify only for radius < sigma-1 = {sigma-1:.3f}"
            )
        dref = radius
    atoms = levy_atoms(params, table)
    x, w = atoms.locations, atoms.weights
    P = float(table.limit)

    s = []  # s_l = sum w x^l / l!, corrected, for l = 1..L
    errs = []
    fact = 1.0
    for l in range(1, L + 1):
        fact *= l
        est, bound = prime_tail_weighted(l, sigma, P)
        # r >= 2 part of the tail, integer-majorized at exponent 2 sigma
        r2 = integer_tail_bound(l, 2.0 * sigma, P) * 2.0**l
        s.append(float(np.sum(w * x**l)) / fact + (est + r2) / fact)
        errs.append((bound + r2) / fact)
    a = tuple((-1j) ** l * s[l - 1] for l in range(1, L + 1))
    alpha = -s[0]
    beta = s[1]

    # B = sum_{l>=2} s_l dref^(l-3) = sum_atoms w (e^(x d) - 1 - x d) / d^3,
    # plus a certified upper prime tail at the shifted exponent.
    xd = x * dref
    B = float(np.sum(w * (np.expm1(xd) - xd))) / dref**3
    C = float(np.sum(w * (np.cosh(xd) - np.cos(xd)))) / (2.0 * dref**2)
    s_eff = sigma - dref
    if s_eff <= 1.0:
        raise DivergentConstant("radius leaves no convergent prime exponent")
    shifted_tail = integer_tail_bound(0, s_eff, P) / (1.0 - (P + 1.0) ** (-s_eff))
    B += shifted_tail / dref**3
    C += shifted_tail / dref**2
    delta = min(beta / (2.0 * B), dref)
    return TaylorCoefficients(
        sigma=sigma,
        alpha=alpha,
        beta=beta,
        a=a,
        B_const=B,
        C_const=C,
        radius=dref,
        delta=delta,
        truncation_error=max(errs),
    )


@dataclass(frozen=True)
class DualConstants:
    """alpha and beta by both routes, with certified uncertainty.

    *_prime_sum come from sieved primes plus the smoothed-counter tail;
    *_deriv come from the zeta derivative route. *_model_bound is the
    certified residual of the prime route under the sqrt-model;
    *_integer_bound is the elementary all-integers majorant of the raw
    tail, reported for reference.
    """

    sigma: float
    prime_limit: int
    alpha_prime_sum: float
    alpha_deriv: float
    beta_prime_sum: float
    beta_deriv: float
    alpha_model_bound: float
    beta_model_bound: float
    alpha_integer_bound: float
    beta_integer_bound: float
    deriv_bound: float

    @property
    def alpha_abs_diff(self) -> float:
        return abs(self.alpha_prime_sum - self.alpha_deriv)

    @property
    def beta_abs_diff(self) -> float:
        return abs(self.beta_prime_sum - self.beta_deriv)


def _deriv_route(params: ZetaParams) -> tuple[float, float, float]:
    z = zeta(params, 0.0)
    z1 = zeta_deriv1(params)
    z2 = zeta_deriv2(params)
    zv, z1v, z2v = z.value.real, z1.value.real, z2.value.real
    alpha = z1v / zv
    beta = (zv * z2v - z1v * z1v) / (2.0 * zv * zv)
    # first-order propagation of the three certified bounds
    db = (z1.bound + abs(alpha) * z.bound) / zv
    db2 = (z2.bound + 2.0 * abs(z1v) * z1.bound / zv + 2.0 * abs(beta) * z.bound) / (2.0 * zv)
    return alpha, beta, max(db, db2 + db * abs(z1v) / zv)


def alpha_beta_dual(
    params: ZetaParams, table: PrimeTable | None = None, enforce_tol: bool = True
) -> DualConstants:
    """Both representations of alpha and beta.

    Uses the in-memory table when it already covers params.prime_limit,
    otherwise streams a segmented sieve up to params.prime_limit. With
    enforce_tol the certified model residual must meet
    params.prime_tail_tol, else TruncationInsufficient.
    """
    sigma = params.sigma
    P = params.prime_limit
    if table is not None and table.limit >= P:
        p = table.primes[table.primes <= P].astype(np.float64)
        lp = np.log(p)
        ps = np.power(p, sigma)
        a_part = float(np.sum(-lp / (ps - 1.0)))
        b_part = float(np.sum(0.5 * lp * lp * ps / (ps - 1.0) ** 2))
    else:
        sums = prime_sums(P, sigma)
        a_part, b_part = sums.alpha_partial, sums.beta_partial

    Pf = float(P)
    # alpha tail: -sum_{p>P} log p (p^-sigma + p^-2sigma + ...)
    a_est1, a_bound1 = prime_tail_weighted(1, sigma, Pf)
    a_est2, a_bound2 = prime_tail_weighted(1, 2.0 * sigma, Pf)
    geo = 1.0 / (1.0 - Pf ** (-sigma))
    alpha_ps = a_part - (a_est1 + a_est2 * geo)
    alpha_model = a_bound1 + a_bound2 * geo

    # beta tail: sum_{p>P} (log p)^2/2 * sum_r r p^{-r sigma}
    b_est1, b_bound1 = prime_tail_weighted(2, sigma, Pf)
    b_est2, b_bound2 = prime_tail_weighted(2, 2.0 * sigma, Pf)
    r_geo = (2.0 - Pf ** (-sigma)) / (1.0 - Pf ** (-sigma)) ** 2  # sum_{r>=2} r x^(r-2) at x=P^-sigma
    beta_ps = b_part + 0.5 * (b_est1 + b_est2 * r_geo)
    beta_model = 0.5 * (b_bound1 + b_bound2 * r_geo)

    alpha_int = integer_tail_bound(1, sigma, Pf) * geo
    beta_int = 0.5 * integer_tail_bound(2, sigma, Pf) * geo * geo

    alpha_d, beta_d, deriv_bound = _deriv_route(params)
    if enforce_tol and max(alpha_model, beta_model) > params.prime_tail_tol:
        raise TruncationInsufficient(
            f"prime tail model bound {max(alpha_model, beta_model):.3e} exceeds "
            f"prime_tail_tol={params.prime_tail_tol:.3e} at prime_limit={P}; "
            f"raise the prime limit"
        )
    return DualConstants(
        sigma=sigma,
        prime_limit=P,
        alpha_prime_sum=alpha_ps,
        alpha_deriv=alpha_d,
        beta_prime_sum=beta_ps,
        beta_deriv=beta_d,
        alpha_model_bound=alpha_model,
        beta_model_bound=beta_model,
        alpha_integer_bound=alpha_int,
        beta_integer_bound=beta_int,
        deriv_bound=deriv_bound,
    )


def moment_check(params: ZetaParams, max_m: int) -> tuple[float, float, float]:
    """Direct PMF moments: mean, second moment, variance of -log M.

    mean = sum (-log m) m^-sigma / zeta, truncated at max_m with the same
    Euler-Maclaurin tails as the derivative route.
    """
    if max_m < 2:
        raise InvalidInput("max_m must be >= 2")
    clipped = ZetaParams(
        sigma=params.sigma,
        series_terms=max_m,
        prime_limit=params.prime_limit,
        target_abs_error=params.target_abs_error,
        prime_tail_tol=params.prime_tail_tol,
    )
    z = zeta(params, 0.0).value.real
    mean = zeta_deriv1(clipped).value.real / z
    second = zeta_deriv2(clipped).value.real / z
    return mean, second, second - mean * mean


def continuous_log(values: np.ndarray) -> np.ndarray:
    """log of a nonvanishing complex path, phase-unwrapped along the array.

    The first entry anchors the branch (callers put f(0) = 1 there).
    """
    values = np.asarray(values, dtype=np.complex128)
    return np.log(np.abs(values)) + 1j * np.unwrap(np.angle(values))


@dataclass(frozen=True)
class EnvelopeRow:
    t: float
    abs_f: float
    lower: float
    upper: float
    lower_holds: bool
    upper_holds: bool
    remainder: float
    remainder_bound: float
    remainder_holds: bool


@dataclass(frozen=True)
class EnvelopeReport:
    sigma: float
    delta: float
    rows: tuple[EnvelopeRow, ...]

    @property
    def all_hold(self) -> bool:
        return all(r.lower_holds and r.upper_holds and r.remainder_holds for r in self.rows)


_ENVELOPE_SLACK = 1e-12


def envelope_check(
    params: ZetaParams, coeffs: TaylorCoefficients, t_grid
) -> EnvelopeReport:
    """Check exp(-C t^2) <= |f(t)| <= exp(-beta t^2 / 2) and the cubic
    remainder |Gamma(t) - i alpha t + beta t^2| <= B |t|^3 on the grid.

    Gamma is the continuous-branch log of the characteristic function,
    tracked from t = 0 (where f = 1 anchors the branch).
    """
    ts = np.asarray(sorted(float(t) for t in t_grid))
    if ts.size == 0:
        raise InvalidInput("empty t grid")
    if float(np.max(np.abs(ts))) > coeffs.delta * (1.0 + 1e-12):
        raise GridOutsideNeighborhood(
            f"grid reaches |t|={np.max(np.abs(ts)):.4g} beyond delta={coeffs.delta:.4g}"
        )
    # evaluate along a path through 0 so the branch is anchored there
    path = np.unique(np.concatenate([[0.0], ts]))
    f_path = char_fn_grid(params, path)
    gamma_path = continuous_log(f_path)
    anchor = int(np.flatnonzero(path == 0.0)[0])
    gamma_path = gamma_path - gamma_path[anchor]
    lookup = {float(t): (f_path[i], gamma_path[i]) for i, t in enumerate(path)}

    alpha, beta = coeffs.alpha, coeffs.beta
    rows = []
    for t in ts:
        f, gam = lookup[float(t)]
        f, gam = complex(f), complex(gam)
        af = abs(f)
        lower = math.exp(-coeffs.C_const * t * t)
        upper = math.exp(-0.5 * beta * t * t)
        rem = abs(gam - 1j * alpha * t + beta * t * t)
        rb = coeffs.B_const * abs(t) ** 3
        rows.append(
            EnvelopeRow(
                t=float(t),
                abs_f=af,
                lower=lower,
                upper=upper,
                lower_holds=lower <= af + _ENVELOPE_SLACK,
                upper_holds=af <= upper + _ENVELOPE_SLACK,
                remainder=rem,
                remainder_bound=rb,
                remainder_holds=rem <= rb + _ENVELOPE_SLACK,
            )
        )
    return EnvelopeReport(sigma=params.sigma, delta=coeffs.delta, rows=tuple(rows))
