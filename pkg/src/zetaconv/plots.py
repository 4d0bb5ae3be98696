"""Figure rendering for the report commands.

Each renderer takes a computed report and writes PNG files into a
directory, next to whatever delimited output the command emitted.
matplotlib is imported lazily so the data path works without it.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

_PNG_META = {"Software": "zetaconv"}


def _plt():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _save(fig, path: Path):
    fig.savefig(path, dpi=150, metadata=_PNG_META)


def render_llt(report, outdir: Path) -> list[Path]:
    plt = _plt()
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    ns = [r.n for r in report.per_n]

    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    ax.loglog(ns, [r.sup_abs_error for r in report.per_n], "o-", color="tab:blue")
    ax.set_xlabel("n")
    ax.set_ylabel("sup |sqrt(n) mass - heat kernel|")
    ax.set_title(f"local-limit comparison, sigma={report.sigma:g}")
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    p = outdir / "llt_sup_abs_error.png"
    _save(fig, p)
    plt.close(fig)
    written.append(p)

    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    ax.loglog(ns, [r.sqrt_n_times_sup_norm for r in report.per_n], "s-", color="tab:red",
              label="sqrt(n) * sup mass")
    ax.axhline(report.heat_peak, ls="--", color="gray", label="heat kernel peak")
    ax.axhline(3 * report.heat_peak, ls=":", color="gray", label="3x peak bound")
    ax.set_xlabel("n")
    ax.set_ylabel("sqrt(n) * ||mu^(n)||_inf")
    ax.legend(fontsize=8)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    p = outdir / "llt_sqrt_n_sup_norm.png"
    _save(fig, p)
    plt.close(fig)
    written.append(p)
    return written


def render_profile(table, alpha: float, beta: float, outdir: Path) -> Path:
    """Scatter of sqrt(n)-scaled masses against the heat kernel profile."""
    plt = _plt()
    outdir.mkdir(parents=True, exist_ok=True)
    n = table.n
    xs = table.support_x()
    std = (xs - alpha * n) / math.sqrt(n)
    scaled = math.sqrt(n) * table.masses
    grid = np.linspace(min(std.min(), -4), max(std.max(), 4), 400)
    peak = np.exp(-(grid**2) / (4 * beta)) / math.sqrt(4 * math.pi * beta)
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    keep = scaled > scaled.max() * 1e-6
    ax.plot(std[keep], scaled[keep], ".", ms=2, alpha=0.4, label="sqrt(n) * masses")
    ax.plot(grid, peak, "-", color="tab:red", label="heat kernel")
    ax.set_xlabel("(x - alpha n) / sqrt(n)")
    ax.set_ylabel("mass scale")
    ax.set_title(f"n={n}, sigma={table.sigma:g}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    p = outdir / f"profile_n{n}.png"
    _save(fig, p)
    plt.close(fig)
    return p


def render_envelope(report, outdir: Path) -> Path:
    plt = _plt()
    outdir.mkdir(parents=True, exist_ok=True)
    ts = [r.t for r in report.rows]
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    ax.plot(ts, [r.abs_f for r in report.rows], "k.-", ms=3, label="|f(t)|")
    ax.plot(ts, [r.lower for r in report.rows], "b--", label="lower envelope")
    ax.plot(ts, [r.upper for r in report.rows], "r--", label="upper envelope")
    ax.set_xlabel("t")
    ax.set_title(f"Gaussian envelopes, sigma={report.sigma:g}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    p = outdir / "envelope.png"
    _save(fig, p)
    plt.close(fig)
    return p


def render_table(table, outdir: Path) -> Path:
    plt = _plt()
    outdir.mkdir(parents=True, exist_ok=True)
    xs = table.support_x()
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    ax.vlines(xs, 0.0, table.masses, color="tab:blue", lw=1)
    ax.set_xlabel("x = -log m")
    ax.set_ylabel("mass")
    ax.set_title(f"convolution power n={table.n}, sigma={table.sigma:g}")
    fig.tight_layout()
    p = outdir / f"masses_n{table.n}.png"
    _save(fig, p)
    plt.close(fig)
    return p
