"""Command-line surface: every computation, machine-readable, reproducible.

Exit codes: 0 success, 2 certification/convergence failure, 3 invalid
input. Flags override an optional key=value config file; all floats are
serialized with 17 significant digits; identical invocations produce
identical bytes at any --threads value. --plot-dir renders figures next
to the delimited output on the report commands.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import acceptance, plots, report_io
from .convolution import convolution_table, default_max_m, exact_sup_norm, naive_convolution
from .errors import CertificationError, InvalidInput
from .limit_analysis import (
    clt_check,
    gaussian_block_bound,
    inversion_quadrature,
    llt_report,
    outside_neighborhood_sup,
    sample,
)
from .prime_levy import (
    alpha_beta_dual,
    envelope_check,
    levy_atoms,
    sieve,
    taylor_coefficients,
)
from .zeta_core import ZetaParams

DEFAULTS = {
    "prime_limit": 10_000_000,
    "series_terms": 100_000,
    "target_abs_error": 1e-12,
    "prime_tail_tol": 1e-8,
    "max_m": 100_000,
    "format": "json",
    "threads": 1,
    "taylor_terms": 8,
}


def _add_common(sp, *, needs_sigma=True):
    if needs_sigma:
        sp.add_argument("--sigma", type=float, required=True, help="exponent, must be > 1")
    sp.add_argument("--prime-limit", type=int, default=None)
    sp.add_argument("--series-terms", type=int, default=None)
    sp.add_argument("--target-abs-error", type=float, default=None)
    sp.add_argument("--prime-tail-tol", type=float, default=None)
    sp.add_argument("--format", choices=["json", "csv"], default=None)
    sp.add_argument("--output", type=str, default=None, help="write here instead of stdout")
    sp.add_argument("--plot-dir", type=str, default=None, help="render figures into this directory")
    sp.add_argument("--threads", type=int, default=None)
    sp.add_argument("--config", type=str, default=None, help="key=value file; flags win")


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; 2 is reserved
        self.print_usage(sys.stderr)
        print(f"error: invalid input: {message}", file=sys.stderr)
        raise SystemExit(3)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(
        prog="zetaconv",
        description="convolution powers of the zeta distribution and their limit profile",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("constants", help="alpha, beta (both routes), Taylor and envelope constants")
    _add_common(sp)
    sp.add_argument("--taylor-terms", type=int, default=None, help="number of Taylor coefficients")

    for name, hlp in [("pmf", "base distribution table"), ("conv", "n-fold convolution table")]:
        sp = sub.add_parser(name, help=hlp)
        _add_common(sp)
        if name == "conv":
            sp.add_argument("--n", type=int, required=True)
            sp.add_argument("--naive", action="store_true", help="use the pairwise-recursion oracle")
        sp.add_argument("--max-m", type=int, default=None)
        sp.add_argument("--tail-tol", type=float, default=None, help="refuse if tail bound exceeds this")

    sp = sub.add_parser("llt", help="heat-kernel comparison report")
    _add_common(sp)
    sp.add_argument("--n-values", type=str, required=True, help="comma-separated n list")
    sp.add_argument("--max-m", type=int, default=None, help="override per-n retained support")

    sp = sub.add_parser("supnorm", help="exact sup-norm of convolution powers")
    _add_common(sp)
    sp.add_argument("--n-values", type=str, required=True)

    sp = sub.add_parser("invert", help="Fourier inversion audit at x = -log m")
    _add_common(sp)
    sp.add_argument("--n-values", type=str, default="1,2")
    sp.add_argument("--m-values", type=str, default="1,2,3")

    sp = sub.add_parser("envelope", help="Gaussian envelope checks on the certified neighborhood")
    _add_common(sp)
    sp.add_argument("--grid-points", type=int, default=41)

    sp = sub.add_parser("block", help="Gaussian block of the inversion integral vs 1/sqrt(n beta)")
    _add_common(sp)
    sp.add_argument("--n-values", type=str, required=True)

    sp = sub.add_parser("outside", help="sup of |f| away from t=0")
    _add_common(sp)
    sp.add_argument("--delta", type=float, default=0.5)
    sp.add_argument("--t-max", type=float, default=math.pi)

    sp = sub.add_parser("sample", help="exact draws from the distribution")
    _add_common(sp)
    sp.add_argument("--count", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)

    sp = sub.add_parser("clt", help="KS distance of grouped sums to the Gaussian limit")
    _add_common(sp)
    sp.add_argument("--count", type=int, default=1_024_000)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--group-size", type=int, default=256)

    sp = sub.add_parser("verify", help="run the acceptance suite, one PASS/FAIL line per criterion")
    sp.add_argument("--criteria", type=str, default=None, help="comma-separated subset, e.g. 2,5,9")

    return ap


def _merge_config(args: argparse.Namespace) -> argparse.Namespace:
    """Apply key=value config entries wherever the flag was not given."""
    path = getattr(args, "config", None)
    if not path:
        return args
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidInput(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise InvalidInput(f"{path}:{lineno}: unknown option {key!r}")
        if getattr(args, attr) is None:
            cur_type = {"sigma": float, "target_abs_error": float, "prime_tail_tol": float,
                        "tail_tol": float, "delta": float, "t_max": float}.get(attr)
            if cur_type is None:
                cur_type = str if attr in ("format", "output", "plot_dir", "n_values", "m_values") else int
            setattr(args, attr, cur_type(val))
    return args


def _params(args) -> ZetaParams:
    return ZetaParams(
        sigma=args.sigma,
        series_terms=args.series_terms or DEFAULTS["series_terms"],
        prime_limit=args.prime_limit or DEFAULTS["prime_limit"],
        target_abs_error=args.target_abs_error or DEFAULTS["target_abs_error"],
        prime_tail_tol=args.prime_tail_tol or DEFAULTS["prime_tail_tol"],
    )


def _emit(args, text: str):
    if getattr(args, "output", None):
        Path(args.output).write_bytes(text.encode())
    else:
        sys.stdout.write(text)


def _ints(csv: str) -> list[int]:
    try:
        return [int(s) for s in csv.split(",") if s.strip()]
    except ValueError as exc:
        raise InvalidInput(f"bad integer list {csv!r}") from exc


def _fmt(args) -> str:
    return getattr(args, "format", None) or DEFAULTS["format"]


# ------------------------------------------------------------------- commands

def cmd_constants(args) -> int:
    params = _params(args)
    table = sieve(params.prime_limit) if params.prime_limit <= 200_000_000 else None
    L = args.taylor_terms or DEFAULTS["taylor_terms"]
    coeffs = taylor_coefficients(params, table, L=L) if table is not None else None
    dual = alpha_beta_dual(params, table)
    atoms = levy_atoms(params, table) if table is not None else None
    body = {
        "sigma": params.sigma,
        "prime_limit": params.prime_limit,
        "series_terms": params.series_terms,
        "alpha_prime_sum": dual.alpha_prime_sum,
        "alpha_deriv": dual.alpha_deriv,
        "alpha_abs_diff": dual.alpha_abs_diff,
        "alpha_model_bound": dual.alpha_model_bound,
        "alpha_integer_bound": dual.alpha_integer_bound,
        "beta_prime_sum": dual.beta_prime_sum,
        "beta_deriv": dual.beta_deriv,
        "beta_abs_diff": dual.beta_abs_diff,
        "beta_model_bound": dual.beta_model_bound,
        "beta_integer_bound": dual.beta_integer_bound,
        "deriv_route_bound": dual.deriv_bound,
    }
    if coeffs is not None:
        body.update(
            {
                "taylor_a": [[c.real, c.imag] for c in coeffs.a],
                "B_const": coeffs.B_const,
                "C_const": coeffs.C_const,
                "radius": coeffs.radius,
                "delta": coeffs.delta,
                "taylor_truncation_error": coeffs.truncation_error,
                "levy_atom_count": len(atoms),
                "levy_total_mass": atoms.total_mass(),
                "levy_mass_defect_bound": atoms.mass_defect_bound,
            }
        )
    if _fmt(args) == "json":
        _emit(args, report_io.json_document("constants", body))
    else:
        rows = [(k, v) for k, v in body.items() if isinstance(v, (int, float))]
        _emit(args, report_io.csv_lines({"schema": "constants"}, ["key", "value"], rows))
    return 0


def _table_output(args, table) -> int:
    meta = {
        "schema": "table",
        "sigma": table.sigma,
        "n": table.n,
        "max_m": table.max_m,
        "tail_mass_bound": table.tail_mass_bound,
    }
    if _fmt(args) == "csv":
        rows = (
            (m, c, mass, float(table.log_masses[m - 1]))
            for m, c, mass in table.entries()
        )
        _emit(args, report_io.csv_lines(meta, ["m", "d_n", "mass", "log_mass"], rows))
    else:
        body = {
            "sigma": table.sigma,
            "n": table.n,
            "max_m": table.max_m,
            "tail_mass_bound": table.tail_mass_bound,
            "tail_mass_recursion_bound": table.tail_mass_recursion_bound,
            "retained_mass": table.retained_mass(),
            "entries": [
                {"m": m, "count": c, "mass": mass, "log_mass": float(table.log_masses[m - 1])}
                for m, c, mass in table.entries()
            ],
        }
        _emit(args, report_io.json_document("table", body))
    if args.plot_dir:
        plots.render_table(table, Path(args.plot_dir))
    return 0


def cmd_pmf(args) -> int:
    params = _params(args)
    table = convolution_table(params, 1, args.max_m or DEFAULTS["max_m"], args.tail_tol)
    return _table_output(args, table)


def cmd_conv(args) -> int:
    params = _params(args)
    build = naive_convolution if args.naive else convolution_table
    if args.naive:
        table = build(params, args.n, args.max_m or DEFAULTS["max_m"])
    else:
        table = build(params, args.n, args.max_m or DEFAULTS["max_m"], args.tail_tol)
    return _table_output(args, table)


def cmd_llt(args) -> int:
    params = _params(args)
    ptab = sieve(params.prime_limit)
    coeffs = taylor_coefficients(params, ptab)
    ns = _ints(args.n_values)
    rep = llt_report(params, coeffs, ns, max_m=args.max_m,
                     threads=args.threads or DEFAULTS["threads"])
    if _fmt(args) == "csv":
        rows = [
            (r.n, r.sup_abs_error, r.sup_norm, r.sqrt_n_times_sup_norm,
             "" if r.quad_discrepancy is None else r.quad_discrepancy)
            for r in rep.per_n
        ]
        meta = {"schema": "llt", "sigma": rep.sigma, "alpha": rep.alpha,
                "beta": rep.beta, "measured_C": rep.measured_C}
        _emit(args, report_io.csv_lines(
            meta, ["n", "sup_abs_error", "sup_norm", "sqrt_n_sup_norm", "quad_discrepancy"], rows))
    else:
        body = {
            "sigma": rep.sigma,
            "alpha": rep.alpha,
            "beta": rep.beta,
            "heat_peak": rep.heat_peak,
            "measured_C": rep.measured_C,
            "measured_C_at_n": rep.measured_C_at_n,
            "rows": [
                {
                    "n": r.n,
                    "max_m": r.max_m,
                    "sup_abs_error": r.sup_abs_error,
                    "argmax_x": r.argmax_x,
                    "sup_norm": r.sup_norm,
                    "sup_norm_argmax_m": r.sup_norm_argmax_m,
                    "sup_in_window": r.sup_in_window,
                    "retained_sup_norm": r.retained_sup_norm,
                    "retained_sup_argmax_m": r.retained_sup_argmax_m,
                    "sqrt_n_times_sup_norm": r.sqrt_n_times_sup_norm,
                    "retained_mass": r.retained_mass,
                    "tail_mass_bound": r.tail_mass_bound,
                    "window_std_min": r.window_std_min,
                    "window_std_max": r.window_std_max,
                    "heat_kernel_at_edge": r.heat_kernel_at_edge,
                }
                for r in rep.per_n
            ],
        }
        _emit(args, report_io.json_document("llt", body))
    if args.plot_dir:
        outdir = Path(args.plot_dir)
        plots.render_llt(rep, outdir)
        biggest = max(ns)
        table = convolution_table(params, biggest, args.max_m or default_max_m(biggest))
        plots.render_profile(table, rep.alpha, rep.beta, outdir)
    return 0


def cmd_supnorm(args) -> int:
    params = _params(args)
    rows = []
    for n in _ints(args.n_values):
        m_star, value, rel = exact_sup_norm(params, n)
        rows.append(
            {"n": n, "argmax_m": m_star, "value": value,
             "sqrt_n_value": math.sqrt(n) * value, "relative_bound": rel}
        )
    if _fmt(args) == "csv":
        _emit(args, report_io.csv_lines(
            {"schema": "supnorm", "sigma": params.sigma},
            ["n", "argmax_m", "value", "sqrt_n_value"],
            [(r["n"], r["argmax_m"], r["value"], r["sqrt_n_value"]) for r in rows]))
    else:
        _emit(args, report_io.json_document("supnorm", {"sigma": params.sigma, "rows": rows}))
    return 0


def cmd_invert(args) -> int:
    params = _params(args)
    ptab = sieve(params.prime_limit)
    coeffs = taylor_coefficients(params, ptab)
    rows = []
    for n in _ints(args.n_values):
        table = convolution_table(params, n, max(_ints(args.m_values)) + 1)
        for m in _ints(args.m_values):
            r = inversion_quadrature(params, n, m, delta=coeffs.delta, table=table)
            rows.append(
                {"n": n, "m": m, "value": r.value, "imag_residual": r.imag_residual,
                 "refinement_delta": r.refinement_delta, "exact_mass": r.exact_mass,
                 "discrepancy": r.discrepancy}
            )
    if _fmt(args) == "csv":
        _emit(args, report_io.csv_lines(
            {"schema": "invert", "sigma": params.sigma},
            ["n", "m", "value", "exact_mass", "discrepancy", "imag_residual", "refinement_delta"],
            [(r["n"], r["m"], r["value"], r["exact_mass"], r["discrepancy"],
              r["imag_residual"], r["refinement_delta"]) for r in rows]))
    else:
        _emit(args, report_io.json_document("invert", {"sigma": params.sigma, "rows": rows}))
    return 0


def cmd_envelope(args) -> int:
    params = _params(args)
    ptab = sieve(params.prime_limit)
    coeffs = taylor_coefficients(params, ptab)
    grid = np.linspace(-coeffs.delta, coeffs.delta, args.grid_points)
    rep = envelope_check(params, coeffs, grid)
    body = {
        "sigma": rep.sigma,
        "delta": rep.delta,
        "all_hold": rep.all_hold,
        "rows": [
            {"t": r.t, "abs_f": r.abs_f, "lower": r.lower, "upper": r.upper,
             "lower_holds": r.lower_holds, "upper_holds": r.upper_holds,
             "remainder": r.remainder, "remainder_bound": r.remainder_bound,
             "remainder_holds": r.remainder_holds}
            for r in rep.rows
        ],
    }
    if _fmt(args) == "csv":
        _emit(args, report_io.csv_lines(
            {"schema": "envelope", "sigma": rep.sigma, "delta": rep.delta},
            ["t", "abs_f", "lower", "upper", "remainder", "remainder_bound"],
            [(r.t, r.abs_f, r.lower, r.upper, r.remainder, r.remainder_bound) for r in rep.rows]))
    else:
        _emit(args, report_io.json_document("envelope", body))
    if args.plot_dir:
        plots.render_envelope(rep, Path(args.plot_dir))
    return 0 if rep.all_hold else 2


def cmd_block(args) -> int:
    params = _params(args)
    ptab = sieve(params.prime_limit)
    coeffs = taylor_coefficients(params, ptab)
    rows = []
    for n in _ints(args.n_values):
        g = gaussian_block_bound(params, coeffs, n)
        rows.append({"n": n, "x": g.x, "delta": g.delta, "block_value": g.block_value,
                     "bound": g.bound, "ratio": g.ratio})
    _emit(args, report_io.json_document("block", {"sigma": params.sigma, "rows": rows}))
    return 0


def cmd_outside(args) -> int:
    params = _params(args)
    r = outside_neighborhood_sup(params, args.delta, args.t_max)
    _emit(args, report_io.json_document("outside", {
        "sigma": r.sigma, "delta": r.delta, "t_max": r.t_max,
        "sup_estimate": r.sup_estimate, "argmax_t": r.argmax_t,
        "margin": r.margin, "grid_step": r.grid_step, "lipschitz": r.lipschitz,
    }))
    return 0


def cmd_sample(args) -> int:
    params = _params(args)
    batch = sample(params, args.count, args.seed)
    if _fmt(args) == "csv":
        rows = ((i, int(m), float(x)) for i, (m, x) in enumerate(zip(batch.indices, batch.values)))
        _emit(args, report_io.csv_lines(
            {"schema": "sample", "sigma": params.sigma, "count": batch.count, "seed": batch.seed},
            ["i", "m", "x"], rows))
    else:
        _emit(args, report_io.json_document("sample", {
            "sigma": params.sigma, "count": batch.count, "seed": batch.seed,
            "indices": [int(m) for m in batch.indices],
            "values": [float(x) for x in batch.values],
        }))
    return 0


def cmd_clt(args) -> int:
    params = _params(args)
    ptab = sieve(params.prime_limit)
    coeffs = taylor_coefficients(params, ptab)
    batch = sample(params, args.count, args.seed)
    d = clt_check(batch, args.group_size, coeffs)
    _emit(args, report_io.json_document("clt", {
        "sigma": params.sigma, "count": args.count, "seed": args.seed,
        "group_size": args.group_size, "groups": args.count // args.group_size,
        "ks_distance": d, "alpha": coeffs.alpha, "two_beta": 2.0 * coeffs.beta,
    }))
    return 0


def cmd_verify(args) -> int:
    selected = args.criteria.split(",") if args.criteria else None
    results = acceptance.run(selected)
    n_fail = sum(1 for r in results if not r.passed)
    expected = sum(1 for r in results if not r.passed and r.expected_failure)
    print(f"verify: {len(results) - n_fail}/{len(results)} passed"
          + (f" ({expected} failing by documented measurement)" if expected else ""))
    return 0 if n_fail == 0 else 2


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        args = _merge_config(args)
        handler = {
            "constants": cmd_constants,
            "pmf": cmd_pmf,
            "conv": cmd_conv,
            "llt": cmd_llt,
            "supnorm": cmd_supnorm,
            "invert": cmd_invert,
            "envelope": cmd_envelope,
            "block": cmd_block,
            "outside": cmd_outside,
            "sample": cmd_sample,
            "clt": cmd_clt,
            "verify": cmd_verify,
        }[args.command]
        return handler(args)
    except InvalidInput as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return 3
    except CertificationError as exc:
        print(f"error: not certified: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
