"""Heat-kernel comparison, sup-norm decay, Fourier inversion, and Monte
Carlo checks for convolution powers of the zeta distribution.

The local-limit comparison measures, over the retained support,

    sup_m | sqrt(n) mu^(n)(-log m) - p((-log m - alpha n) / sqrt(n)) |

with p the heat kernel at time beta. The inversion integral

    (1/2pi) int_{-pi}^{pi} f(t)^n e^{-ixt} dt

is computed by panel Gauss-Legendre quadrature with dyadic refinement;
its discrepancy against the exact masses is reported, never asserted:
the support {-log m} is not a lattice, so the lattice inversion identity
has no reason to hold here, and measuring the gap is the point.

Sampling is exact: inverse CDF over a precomputed prefix of the PMF, and
rejection from a power-law envelope for the unbounded tail. Streams are
Philox counter blocks keyed (seed, block_index), so draws are reproducible
bit-for-bit at any degree of parallelism.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .convolution import ConvolutionTable, convolution_table, default_max_m, exact_sup_norm
from .errors import InvalidInput, MarginTooSmall, QuadratureNotConverged
from .prime_levy import TaylorCoefficients, continuous_log
from .zeta_core import ZetaParams, char_fn_grid, zeta_deriv1, zeta

__all__ = [
    "HeatKernelParams",
    "heat_kernel",
    "LLTRow",
    "LLTReport",
    "llt_report",
    "InversionResult",
    "inversion_quadrature",
    "GaussianBlockResult",
    "gaussian_block_bound",
    "OutsideSupResult",
    "outside_neighborhood_sup",
    "SampleBatch",
    "sample",
    "clt_check",
    "normal_cdf",
]

QUAD_TOL = 1e-10
_GL_NODES = 16
SAMPLE_BLOCK = 1 << 16
INVERSE_CDF_TERMS = 10_000


def _grid_params(params: ZetaParams, t_max: float) -> ZetaParams:
    """Smallest series length certifying target_abs_error/4 on |t| <= t_max.

    Grid-heavy callers (quadrature, sup scans) would otherwise pay the full
    series length per node for accuracy they do not need.
    """
    from .zeta_core import _em_bound

    for terms in (10_000, 30_000, 100_000):
        if terms >= params.series_terms:
            break
        if _em_bound(params.sigma, t_max, terms) <= params.target_abs_error / 4.0:
            return ZetaParams(
                sigma=params.sigma,
                series_terms=terms,
                prime_limit=params.prime_limit,
                target_abs_error=params.target_abs_error,
                prime_tail_tol=params.prime_tail_tol,
                atom_cutoff=params.atom_cutoff,
            )
    return params


@dataclass(frozen=True)
class HeatKernelParams:
    """Gaussian profile parameters: diffusion beta > 0 and drift alpha per step."""

    beta: float
    alpha: float

    def __post_init__(self):
        if not (self.beta > 0):
            raise InvalidInput("beta must be > 0")


def heat_kernel(hk: HeatKernelParams, x) -> np.ndarray | float:
    """p(x) = (4 pi beta)^(-1/2) exp(-x^2 / (4 beta)); even, positive."""
    x = np.asarray(x, dtype=np.float64)
    val = np.exp(-(x**2) / (4.0 * hk.beta)) / math.sqrt(4.0 * math.pi * hk.beta)
    return float(val) if val.ndim == 0 else val


# ----------------------------------------------------------------- quadrature

def _gl_panels(edges: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights across consecutive [edges] panels."""
    xg, wg = np.polynomial.legendre.leggauss(_GL_NODES)
    a = edges[:-1][:, None]
    b = edges[1:][:, None]
    nodes = 0.5 * (b - a) * xg[None, :] + 0.5 * (a + b)
    weights = 0.5 * (b - a) * np.broadcast_to(wg, nodes.shape)
    return nodes.ravel(), weights.ravel()


def adaptive_quadrature(
    integrand,
    breakpoints,
    tol: float = QUAD_TOL,
    max_levels: int = 12,
) -> tuple[complex, float]:
    """Refine panels dyadically until two consecutive levels agree within tol.

    integrand maps an array of nodes to complex values; breakpoints pin
    known seams so each panel stays smooth. Returns (integral, last delta).
    """
    edges = np.asarray(sorted(set(float(b) for b in breakpoints)))
    if edges.size < 2:
        raise InvalidInput("need at least two breakpoints")
    prev = None
    delta = math.inf
    for level in range(max_levels):
        nodes, weights = _gl_panels(edges)
        total = complex(np.sum(weights * integrand(nodes)))
        if prev is not None:
            delta = abs(total - prev)
            if delta <= tol and level >= 2:
                return total, delta
        prev = total
        mids = 0.5 * (edges[:-1] + edges[1:])
        edges = np.sort(np.concatenate([edges, mids]))
    raise QuadratureNotConverged(
        f"refinement delta {delta:.3e} still above {tol:.3e} after {max_levels} levels"
    )


def _char_power_factory(params: ZetaParams, n: int, delta: float):
    """f(t)^n on node arrays: exp(n log f) with the continuous branch inside
    |t| < delta (f stays near 1 there), direct powering outside."""
    gp = _grid_params(params, math.pi)

    def f_pow(ts: np.ndarray) -> np.ndarray:
        f = char_fn_grid(gp, ts)
        out = np.empty_like(f)
        inside = np.abs(ts) < delta
        if inside.any():
            order = np.argsort(np.abs(ts[inside]), kind="stable")
            path = np.concatenate([[1.0 + 0.0j], f[inside][order]])
            gam = continuous_log(path)[1:]
            inv = np.empty_like(gam)
            inv[order] = gam
            out[inside] = np.exp(n * inv)
        if (~inside).any():
            out[~inside] = f[~inside] ** n
        return out

    return f_pow


@dataclass(frozen=True)
class InversionResult:
    """Lattice-style inversion integral vs the exact mass at x = -log m."""

    sigma: float
    n: int
    m: int
    value: float
    imag_residual: float
    refinement_delta: float
    exact_mass: float
    discrepancy: float


def inversion_quadrature(
    params: ZetaParams,
    n: int,
    m: int,
    delta: float | None = None,
    table: ConvolutionTable | None = None,
) -> InversionResult:
    """(1/2pi) int_{-pi}^{pi} f(t)^n e^{-ixt} dt at x = -log m, audited
    against the exact mass. Agreement is reported, deliberately not
    asserted (see module docstring).
    """
    if n < 1 or m < 1:
        raise InvalidInput("need n >= 1 and m >= 1")
    d = delta if delta is not None else 0.05
    f_pow = _char_power_factory(params, n, d)
    x = -math.log(m)

    def integrand(ts):
        return f_pow(ts) * np.exp(-1j * x * ts)

    total, dlt = adaptive_quadrature(integrand, [-math.pi, -d, 0.0, d, math.pi])
    total /= 2.0 * math.pi
    if table is None:
        table = convolution_table(params, n, max(m, 2))
    exact = float(table.masses[m - 1])
    return InversionResult(
        sigma=params.sigma,
        n=n,
        m=m,
        value=total.real,
        imag_residual=abs(total.imag),
        refinement_delta=dlt,
        exact_mass=exact,
        discrepancy=total.real - exact,
    )


@dataclass(frozen=True)
class GaussianBlockResult:
    sigma: float
    n: int
    x: float
    delta: float
    block_value: float
    bound: float

    @property
    def ratio(self) -> float:
        return self.block_value / self.bound


def gaussian_block_bound(
    params: ZetaParams, coeffs: TaylorCoefficients, n: int, x: float | None = None
) -> GaussianBlockResult:
    """|(1/2pi) int_{|t|<delta} f^n e^{-ixt} dt| against 1/sqrt(n beta).

    Default evaluation point x = -alpha n. The bound is the Gaussian
    integral dominating |f|^n on the certified neighborhood.
    """
    if n < 1:
        raise InvalidInput("n must be >= 1")
    d = coeffs.delta
    if x is None:
        x = -coeffs.alpha * n
    f_pow = _char_power_factory(params, n, d * (1.0 + 1e-9))

    def integrand(ts):
        return f_pow(ts) * np.exp(-1j * x * ts)

    total, _ = adaptive_quadrature(integrand, [-d, 0.0, d])
    block = abs(total) / (2.0 * math.pi)
    return GaussianBlockResult(
        sigma=params.sigma,
        n=n,
        x=x,
        delta=d,
        block_value=block,
        bound=1.0 / math.sqrt(n * coeffs.beta),
    )


@dataclass(frozen=True)
class OutsideSupResult:
    sigma: float
    delta: float
    t_max: float
    sup_estimate: float
    argmax_t: float
    margin: float
    grid_step: float
    lipschitz: float


def outside_neighborhood_sup(
    params: ZetaParams,
    delta: float,
    t_max: float = math.pi,
    margin_floor: float = 1e-9,
) -> OutsideSupResult:
    """Grid-plus-refinement maximization of |f(t)| on [delta, t_max].

    The grid step is tied to the Lipschitz constant E|X| = -zeta'/zeta so
    no spike can hide between nodes; MarginTooSmall if the estimate cannot
    be asserted strictly below 1.
    """
    if not (0.0 < delta < t_max):
        raise InvalidInput("need 0 < delta < t_max")
    z = zeta(params, 0.0).value.real
    lipschitz = -zeta_deriv1(params).value.real / z
    gp = _grid_params(params, t_max)
    step = min(2e-3, (t_max - delta) / 64.0)
    ts = np.arange(delta, t_max + step, step)
    ts[-1] = t_max
    vals = np.abs(char_fn_grid(gp, ts))
    i = int(vals.argmax())
    lo = ts[max(i - 1, 0)]
    hi = ts[min(i + 1, len(ts) - 1)]
    for _ in range(40):
        grid = np.linspace(lo, hi, 9)
        gv = np.abs(char_fn_grid(gp, grid))
        j = int(gv.argmax())
        lo, hi = grid[max(j - 1, 0)], grid[min(j + 1, 8)]
        if hi - lo < 1e-13:
            break
    sup_est = max(float(vals.max()), float(gv.max()))
    margin = 1.0 - sup_est
    if margin < margin_floor:
        raise MarginTooSmall(
            f"sup estimate {sup_est:.12f} too close to 1 to assert decay "
            f"(margin {margin:.3e})"
        )
    return OutsideSupResult(
        sigma=params.sigma,
        delta=delta,
        t_max=t_max,
        sup_estimate=sup_est,
        argmax_t=float(grid[j]),
        margin=margin,
        grid_step=step,
        lipschitz=lipschitz,
    )


# ------------------------------------------------------------------ LLT report

@dataclass(frozen=True)
class LLTRow:
    """Per-n measurements of the heat-kernel comparison.

    sup_norm / sup_norm_argmax_m are the exact global values (independent
    product route); retained_* scan the table. window_std_* give the
    standardized coordinates covered by the retained support.
    """

    n: int
    max_m: int
    sup_abs_error: float
    argmax_x: float
    sup_norm: float
    sup_norm_argmax_m: int
    sup_in_window: bool
    retained_sup_norm: float
    retained_sup_argmax_m: int
    sqrt_n_times_sup_norm: float
    retained_mass: float
    tail_mass_bound: float
    window_std_min: float
    window_std_max: float
    heat_kernel_at_edge: float
    quad_discrepancy: float | None = None


@dataclass(frozen=True)
class LLTReport:
    sigma: float
    alpha: float
    beta: float
    heat_peak: float  # p(0) = (4 pi beta)^(-1/2)
    n_values: tuple[int, ...]
    per_n: tuple[LLTRow, ...]
    measured_C: float
    measured_C_at_n: int


def llt_report(
    params: ZetaParams,
    coeffs: TaylorCoefficients,
    n_values,
    max_m: int | None = None,
    with_quadrature: bool = False,
    threads: int = 1,
) -> LLTReport:
    """Heat-kernel comparison and sup-norm statistics for each n.

    measured_C = max over requested n of sqrt(n) * ||mu^(n)||_inf, taken
    from the exact sup-norm route so it covers argmaxes far beyond any
    retained table. Rows are computed independently per n and merged in
    order, so the output never depends on the thread count.
    """
    ns = [int(n) for n in n_values]
    if not ns or any(n < 1 for n in ns):
        raise InvalidInput("n_values must be non-empty positive integers")
    alpha, beta = coeffs.alpha, coeffs.beta
    hk = HeatKernelParams(beta=beta, alpha=alpha)
    p0 = heat_kernel(hk, 0.0)

    def one(n: int) -> LLTRow:
        mm = max_m if max_m is not None else default_max_m(n)
        table = convolution_table(params, n, mm)
        xs = table.support_x()
        std = (xs - alpha * n) / math.sqrt(n)
        heat = heat_kernel(hk, std)
        diff = np.abs(math.sqrt(n) * table.masses - heat)
        i = int(diff.argmax())
        lmax = float(table.log_masses.max())
        ridx = int(np.flatnonzero(table.log_masses == lmax)[0])
        m_star, sup_val, _ = exact_sup_norm(params, n)
        row = LLTRow(
            n=n,
            max_m=mm,
            sup_abs_error=float(diff[i]),
            argmax_x=float(xs[i]),
            sup_norm=sup_val,
            sup_norm_argmax_m=m_star,
            sup_in_window=m_star <= mm,
            retained_sup_norm=float(table.masses[ridx]),
            retained_sup_argmax_m=ridx + 1,
            sqrt_n_times_sup_norm=math.sqrt(n) * sup_val,
            retained_mass=table.retained_mass(),
            tail_mass_bound=table.tail_mass_bound,
            window_std_min=float(std[-1]),
            window_std_max=float(std[0]),
            heat_kernel_at_edge=float(heat[-1]),
            quad_discrepancy=None,
        )
        if with_quadrature:
            import dataclasses

            inv = inversion_quadrature(params, n, 1, delta=coeffs.delta, table=table)
            row = dataclasses.replace(row, quad_discrepancy=inv.discrepancy)
        return row

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as ex:
            rows = list(ex.map(one, ns))
    else:
        rows = [one(n) for n in ns]
    best = max(range(len(rows)), key=lambda i: rows[i].sqrt_n_times_sup_norm)
    return LLTReport(
        sigma=params.sigma,
        alpha=alpha,
        beta=beta,
        heat_peak=p0,
        n_values=tuple(ns),
        per_n=tuple(rows),
        measured_C=rows[best].sqrt_n_times_sup_norm,
        measured_C_at_n=rows[best].n,
    )


# -------------------------------------------------------------------- sampling

@dataclass(frozen=True)
class SampleBatch:
    """Exact draws from the zeta distribution: values[i] = -log(indices[i])."""

    sigma: float
    count: int
    seed: int
    indices: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)


def _tail_sampler_constants(sigma: float, cutoff: int) -> tuple[float, float]:
    """Rejection constants for the tail m > cutoff with proposal CDF
    G(x) = 1 - (x0/x)^(sigma-1) on [x0 = cutoff+1, inf); candidate floor(X).

    Returns (x0, K) with K >= pmf(m) / P(candidate = m) for all m.
    """
    x0 = float(cutoff + 1)
    worst = 0.0
    for m in range(cutoff + 1, cutoff + 1002):
        cell = (x0 / m) ** (sigma - 1.0) - (x0 / (m + 1.0)) ** (sigma - 1.0)
        worst = max(worst, m ** (-sigma) / cell)
    return x0, worst * (1.0 + 1e-9)


def sample(params: ZetaParams, count: int, seed: int) -> SampleBatch:
    """i.i.d. draws of -log M, P(M = m) proportional to m^(-sigma).

    Inverse CDF over m <= 10^4; rejection for the unbounded tail. Draws
    are produced in fixed-size Philox blocks keyed (seed, block), making
    the batch a pure function of (sigma, count, seed).
    """
    if count < 1:
        raise InvalidInput("count must be >= 1")
    sigma = params.sigma
    z = zeta(params, 0.0).value.real
    m = np.arange(1, INVERSE_CDF_TERMS + 1, dtype=np.float64)
    pmf = m ** (-sigma) / z
    cdf = np.cumsum(pmf)
    head_mass = float(cdf[-1])
    x0, K = _tail_sampler_constants(sigma, INVERSE_CDF_TERMS)
    g_norm = x0 ** (sigma - 1.0)

    out = np.empty(count, dtype=np.int64)
    for block_start in range(0, count, SAMPLE_BLOCK):
        block = block_start // SAMPLE_BLOCK
        size = min(SAMPLE_BLOCK, count - block_start)
        rng = np.random.Generator(
            np.random.Philox(key=np.array([seed, block], dtype=np.uint64))
        )
        u = rng.random(size)
        idx = np.searchsorted(cdf, u, side="right") + 1
        tail_positions = np.flatnonzero(u >= head_mass)
        for pos in tail_positions:
            while True:
                v, w = rng.random(2)
                x = x0 * (1.0 - v) ** (-1.0 / (sigma - 1.0))
                cand = int(x)
                cell = g_norm * (cand ** (1.0 - sigma) - (cand + 1.0) ** (1.0 - sigma))
                if w * K * cell <= cand ** (-sigma):
                    idx[pos] = cand
                    break
        out[block_start : block_start + size] = idx
    values = -np.log(out.astype(np.float64))
    return SampleBatch(sigma=sigma, count=count, seed=seed, indices=out, values=values)


def normal_cdf(x: np.ndarray, scale: float) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    return 0.5 * (1.0 + np.vectorize(math.erf)(x / (scale * math.sqrt(2.0))))


def clt_check(batch: SampleBatch, group_size: int, coeffs: TaylorCoefficients) -> float:
    """Kolmogorov-Smirnov distance of normalized group sums to N(0, 2 beta).

    Groups are disjoint consecutive runs; the batch length must split
    evenly into them.
    """
    if group_size < 1:
        raise InvalidInput("group_size must be >= 1")
    if batch.count % group_size:
        raise InvalidInput("batch.count must be divisible by group_size")
    k = group_size
    sums = batch.values.reshape(-1, k).sum(axis=1)
    zs = np.sort((sums - k * coeffs.alpha) / math.sqrt(k))
    ncdf = normal_cdf(zs, math.sqrt(2.0 * coeffs.beta))
    n = len(zs)
    emp_hi = np.arange(1, n + 1) / n
    emp_lo = np.arange(0, n) / n
    return float(np.max(np.maximum(emp_hi - ncdf, ncdf - emp_lo)))
