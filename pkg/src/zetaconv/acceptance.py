"""Acceptance suite: every verification criterion with pinned tolerances.

Each criterion returns CriterionResult records and prints one PASS/FAIL
line. The suite is exposed on the CLI as `zetaconv verify` and mirrored in
tests/test_acceptance.py. Tolerances are fixed here, not configurable.

Two checks are expected to fail and are kept failing on purpose
(see README "Measured deviations"): they encode the idealized prediction
that the largest single mass of the n-fold convolution tracks the heat
kernel peak, sqrt(n) ||mu^(n)||_inf ~ p(0). The measured values show
sqrt(n) ||mu^(n)||_inf decaying to zero instead: the support {-log m}
densifies as n grows, so individual masses fall much faster than 1/sqrt(n)
even though the upper bound C/sqrt(n) (criterion 7) holds with room. The
suite reports the measured numbers rather than loosening the check.
"""

from __future__ import annotations

import math
import subprocess
import sys
from dataclasses import dataclass, field

import numpy as np

from .convolution import convolution_table, naive_convolution
from .errors import CertificationError
from .limit_analysis import (
    LLTReport,
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
from .zeta_core import ZetaParams, char_fn_grid

# prime limits per sigma for the dual-representation check; sigma = 1.5
# converges so slowly in the sieve bound that certifying 1e-8 takes a
# segmented pass to 5e9 (about half a minute)
C1_PRIME_LIMITS = {1.5: 5_000_000_000, 2.0: 10_000_000, 3.0: 1_000_000, 5.0: 100_000}
C1_TOL = 1e-8
C2_TOL = 1e-7
C3_MASS_TOL = 1e-12
C4_TOL = 1e-10
C6_N_VALUES = (4, 16, 64, 256)
C6_PEAK_RTOL = 0.25
C6_INVERSION_RTOL = 0.10
C7_BAND_FACTOR = 3.0
C9_MARGIN = 1e-3
C10_KS_MAX = 0.05
C10_SEED = 7
C11_DELTA_TOL = 1e-10
S1_BAND = (0.1, 3.0)


@dataclass
class CriterionResult:
    cid: str
    label: str
    passed: bool
    detail: str
    expected_failure: bool = False

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"ACCEPTANCE {self.cid} {status} {self.label}: {self.detail}"


@dataclass
class Runner:
    """Caches the shared heavy artifacts across criteria."""

    _cache: dict = field(default_factory=dict)

    def params(self, sigma: float) -> ZetaParams:
        key = ("params", sigma)
        if key not in self._cache:
            self._cache[key] = ZetaParams(sigma=sigma)
        return self._cache[key]

    def table(self, sigma: float):
        key = ("sieve", sigma)
        if key not in self._cache:
            self._cache[key] = sieve(self.params(sigma).prime_limit)
        return self._cache[key]

    def coeffs(self, sigma: float):
        key = ("coeffs", sigma)
        if key not in self._cache:
            self._cache[key] = taylor_coefficients(self.params(sigma), self.table(sigma))
        return self._cache[key]

    def llt(self) -> LLTReport:
        if "llt" not in self._cache:
            self._cache["llt"] = llt_report(self.params(2.0), self.coeffs(2.0), C6_N_VALUES)
        return self._cache["llt"]

    # ----------------------------------------------------------- criteria

    def criterion_01(self) -> list[CriterionResult]:
        """Dual representation of alpha and beta agrees to 1e-8."""
        out = []
        for sigma, plimit in C1_PRIME_LIMITS.items():
            base = self.params(sigma)
            p = ZetaParams(
                sigma=sigma,
                # the log-weighted series converge slowly near sigma = 1
                series_terms=400_000 if sigma < 1.75 else base.series_terms,
                prime_limit=int(plimit),
                target_abs_error=base.target_abs_error,
                prime_tail_tol=C1_TOL,
            )
            try:
                table = self.table(sigma) if plimit <= base.prime_limit else None
                dual = alpha_beta_dual(p, table)
                ok = dual.alpha_abs_diff <= C1_TOL and dual.beta_abs_diff <= C1_TOL
                detail = (
                    f"sigma={sigma} P={plimit:.0e} |alpha diff|={dual.alpha_abs_diff:.3e} "
                    f"|beta diff|={dual.beta_abs_diff:.3e} (tol {C1_TOL:.0e})"
                )
            except CertificationError as exc:
                ok, detail = False, f"sigma={sigma}: {exc}"
            out.append(CriterionResult("01", "dual-representation agreement", ok, detail))
        return out

    def criterion_02(self) -> list[CriterionResult]:
        """Compound-Poisson exponent reproduces the characteristic function."""
        p = self.params(2.0)
        atoms = levy_atoms(p, self.table(2.0))
        ts = np.linspace(-5.0, 5.0, 201)
        lk = np.exp(atoms.exponent_grid(ts))
        f = char_fn_grid(p, ts)
        worst = float(np.max(np.abs(lk - f)))
        ok = worst <= C2_TOL
        return [
            CriterionResult(
                "02",
                "Levy-Khintchine consistency",
                ok,
                f"max |exp(atom sum) - f(t)| = {worst:.3e} on 201-point grid (tol {C2_TOL:.0e})",
            )
        ]

    def criterion_03(self) -> list[CriterionResult]:
        """Multiplicative tables equal the pairwise-recursion oracle."""
        p = self.params(2.0)
        worst_mass = 0.0
        counts_ok = True
        for n in range(1, 5):
            fast = convolution_table(p, n, 200)
            slow = naive_convolution(p, n, 200)
            counts_ok &= fast.counts == slow.counts
            worst_mass = max(worst_mass, float(np.max(np.abs(fast.masses - slow.masses))))
        ok = counts_ok and worst_mass <= C3_MASS_TOL
        return [
            CriterionResult(
                "03",
                "construction-route equivalence",
                ok,
                f"counts equal={counts_ok}, max |mass diff|={worst_mass:.3e} "
                f"(tol {C3_MASS_TOL:.0e}), n<=4, max_m=200",
            )
        ]

    def criterion_04(self) -> list[CriterionResult]:
        """Retained mass plus certified tail brackets 1."""
        p = self.params(2.0)
        worst = 0.0
        for n in (1, 2, 3):
            t = convolution_table(p, n, 10**5)
            worst = max(worst, abs(t.retained_mass() + t.tail_mass_bound - 1.0))
        ok = worst <= C4_TOL
        return [
            CriterionResult(
                "04",
                "normalization bracket",
                ok,
                f"max |retained + tail - 1| = {worst:.3e} over n in (1,2,3) (tol {C4_TOL:.0e})",
            )
        ]

    def criterion_05(self) -> list[CriterionResult]:
        """Gaussian envelopes and cubic remainder on the certified grid."""
        out = []
        for sigma in (1.5, 2.0, 3.0):
            coeffs = self.coeffs(sigma)
            grid = np.linspace(-coeffs.delta, coeffs.delta, 41)
            rep = envelope_check(self.params(sigma), coeffs, grid)
            bad = [r.t for r in rep.rows if not (r.lower_holds and r.upper_holds and r.remainder_holds)]
            out.append(
                CriterionResult(
                    "05",
                    "envelope inequalities",
                    not bad,
                    f"sigma={sigma} delta={coeffs.delta:.4f}: 41 points, "
                    + ("all hold" if not bad else f"violations at t={bad[:3]}"),
                )
            )
        return out

    def criterion_06(self) -> list[CriterionResult]:
        """Heat-kernel comparison trend, and the peak-tracking prediction."""
        rep = self.llt()
        errs = [r.sup_abs_error for r in rep.per_n]
        inversions = [
            (a, b) for a, b in zip(errs, errs[1:]) if b > a
        ]
        small = all(b <= a * (1.0 + C6_INVERSION_RTOL) for a, b in inversions)
        ok_a = len(inversions) <= 1 and small and errs[-1] < errs[0]
        detail_a = (
            "sup_abs_error " + " -> ".join(f"{e:.3e}" for e in errs)
            + f"; {len(inversions)} inversion(s), end-to-end decrease={errs[-1] < errs[0]}"
        )
        res_a = CriterionResult("06a", "pointwise comparison decreases", ok_a, detail_a)

        last = rep.per_n[-1]
        rel = abs(last.sqrt_n_times_sup_norm - rep.heat_peak) / rep.heat_peak
        ok_b = rel <= C6_PEAK_RTOL
        res_b = CriterionResult(
            "06b",
            "sqrt(n) sup-norm tracks the heat peak at n=256",
            ok_b,
            f"sqrt(256)*sup={last.sqrt_n_times_sup_norm:.4e} vs p(0)={rep.heat_peak:.4f} "
            f"(rel dev {rel:.2%}, tol 25%); support densifies, masses fall faster than 1/sqrt(n)",
            expected_failure=True,
        )
        return [res_a, res_b]

    def criterion_07(self) -> list[CriterionResult]:
        """Sup-norm decay bound: sqrt(n) sup is bounded, maximal at small n."""
        rep = self.llt()
        vals = {r.n: r.sqrt_n_times_sup_norm for r in rep.per_n}
        finite = all(math.isfinite(v) for v in vals.values())
        at_small = rep.measured_C_at_n == min(vals)
        under = all(v <= C7_BAND_FACTOR * rep.heat_peak for n, v in vals.items() if n >= 4)
        ok = finite and at_small and under
        return [
            CriterionResult(
                "07",
                "sup-norm sqrt(n) bound",
                ok,
                f"measured_C={rep.measured_C:.4f} at n={rep.measured_C_at_n}; "
                f"all sqrt(n)*sup <= {C7_BAND_FACTOR}*p(0)={C7_BAND_FACTOR * rep.heat_peak:.4f}: {under}",
            )
        ]

    def criterion_08(self) -> list[CriterionResult]:
        """Gaussian block of the inversion integral obeys 1/sqrt(n beta)."""
        p = self.params(2.0)
        coeffs = self.coeffs(2.0)
        ratios = {}
        for n in (4, 16, 64):
            g = gaussian_block_bound(p, coeffs, n)
            ratios[n] = g.ratio
        ok = all(r <= 1.0 for r in ratios.values())
        return [
            CriterionResult(
                "08",
                "Gaussian block bound",
                ok,
                "ratios " + ", ".join(f"n={n}: {r:.4f}" for n, r in ratios.items()) + " (<= 1)",
            )
        ]

    def criterion_09(self) -> list[CriterionResult]:
        """|f| stays below 1 away from t = 0."""
        r = outside_neighborhood_sup(self.params(2.0), 0.5, math.pi)
        ok = r.sup_estimate < 1.0 - C9_MARGIN
        return [
            CriterionResult(
                "09",
                "outside-neighborhood decay",
                ok,
                f"sup |f| on [0.5, pi] = {r.sup_estimate:.6f} at t={r.argmax_t:.4f} "
                f"(margin {r.margin:.4f} >= {C9_MARGIN})",
            )
        ]

    def criterion_10(self) -> list[CriterionResult]:
        """Monte Carlo CLT: grouped sums pass KS, raw law fails it."""
        p = self.params(2.0)
        coeffs = self.coeffs(2.0)
        batch = sample(p, 4000 * 256, C10_SEED)
        d_grouped = clt_check(batch, 256, coeffs)
        d_raw = clt_check(batch, 1, coeffs)
        ok = d_grouped < C10_KS_MAX < d_raw
        return [
            CriterionResult(
                "10",
                "Monte Carlo CLT",
                ok,
                f"KS(groups of 256) = {d_grouped:.4f} < {C10_KS_MAX} < KS(raw) = {d_raw:.4f}, seed {C10_SEED}",
            )
        ]

    def criterion_11(self) -> list[CriterionResult]:
        """Inversion-formula audit: converged quadrature, discrepancy reported."""
        p = self.params(2.0)
        coeffs = self.coeffs(2.0)
        rows = []
        ok = True
        for n in (1, 2):
            table = convolution_table(p, n, 4)
            for m in (1, 2, 3):
                r = inversion_quadrature(p, n, m, delta=coeffs.delta, table=table)
                ok &= r.refinement_delta <= C11_DELTA_TOL and r.imag_residual <= C11_DELTA_TOL
                rows.append(f"(n={n},m={m}): disc={r.discrepancy:+.3e}")
        return [
            CriterionResult(
                "11",
                "inversion audit (discrepancy reported, not asserted)",
                ok,
                "; ".join(rows),
            )
        ]

    def criterion_12(self) -> list[CriterionResult]:
        """Byte-identical CLI output across repeat runs and thread counts."""
        env_cmds = [
            ["constants", "--sigma", "2", "--prime-limit", "1000000",
             "--prime-tail-tol", "1e-6", "--format", "json"],
            ["pmf", "--sigma", "2", "--max-m", "25", "--format", "csv"],
            ["conv", "--sigma", "2", "--n", "3", "--max-m", "50", "--format", "json"],
            ["sample", "--sigma", "2", "--count", "500", "--seed", "7", "--format", "csv"],
            ["llt", "--sigma", "2", "--n-values", "2,4", "--max-m", "5000", "--format", "csv"],
        ]
        ok = True
        details = []
        for cmd in env_cmds:
            outs = []
            for threads in ("1", "2"):
                r = subprocess.run(
                    [sys.executable, "-m", "zetaconv"] + cmd + ["--threads", threads],
                    capture_output=True,
                )
                outs.append((r.returncode, r.stdout))
            rerun = subprocess.run(
                [sys.executable, "-m", "zetaconv"] + cmd + ["--threads", "1"],
                capture_output=True,
            )
            same = outs[0] == outs[1] == (rerun.returncode, rerun.stdout)
            ok &= same and outs[0][0] == 0
            details.append(f"{cmd[0]}:{'=' if same else '!'}")
        return [
            CriterionResult(
                "12",
                "CLI determinism",
                ok,
                " ".join(details) + " (repeat runs and --threads 1 vs 2)",
            )
        ]

    def supplement_band(self) -> list[CriterionResult]:
        """Fixed-band form of the sqrt(n) decay, lower edge included."""
        rep = self.llt()
        lo = S1_BAND[0] * rep.heat_peak
        hi = S1_BAND[1] * rep.heat_peak
        vals = {r.n: r.sqrt_n_times_sup_norm for r in rep.per_n if r.n >= 4}
        bad = {n: v for n, v in vals.items() if not (lo <= v <= hi)}
        ok = not bad
        return [
            CriterionResult(
                "S1",
                "sqrt(n) sup-norm band [0.1, 3] x p(0)",
                ok,
                f"band [{lo:.4f}, {hi:.4f}]; "
                + (
                    "all inside"
                    if ok
                    else "below lower edge: "
                    + ", ".join(f"n={n}: {v:.3e}" for n, v in sorted(bad.items()))
                    + "; same densification as 06b"
                ),
                expected_failure=True,
            )
        ]


ALL_CRITERIA = ["01", "02", "03", "04", "05", "06", "07", "08", "09", "10", "11", "12", "S1"]


def run(selected=None, echo=print) -> list[CriterionResult]:
    """Run the (selected) criteria, print one line each, return results."""
    runner = Runner()
    want = {s.upper().lstrip("0") for s in selected} if selected else None
    results: list[CriterionResult] = []
    for cid in ALL_CRITERIA:
        if want is not None and cid.lstrip("0") not in want:
            continue
        method = {
            "01": runner.criterion_01,
            "02": runner.criterion_02,
            "03": runner.criterion_03,
            "04": runner.criterion_04,
            "05": runner.criterion_05,
            "06": runner.criterion_06,
            "07": runner.criterion_07,
            "08": runner.criterion_08,
            "09": runner.criterion_09,
            "10": runner.criterion_10,
            "11": runner.criterion_11,
            "12": runner.criterion_12,
            "S1": runner.supplement_band,
        }[cid]
        for res in method():
            results.append(res)
            echo(res.line())
    return results
