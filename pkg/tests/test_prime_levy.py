"""Levy atoms, Taylor/envelope constants, and the dual representations."""

import math

import numpy as np
import pytest

from zetaconv import (
    DivergentConstant,
    GridOutsideNeighborhood,
    TruncationInsufficient,
    ZetaParams,
    alpha_beta_dual,
    envelope_check,
    levy_atoms,
    moment_check,
    sieve,
    taylor_coefficients,
    zeta,
)
from zetaconv.prime_levy import continuous_log
from zetaconv.zeta_core import char_fn_grid


def test_first_atoms(params2, ptable2):
    atoms = levy_atoms(params2, ptable2)
    assert atoms.locations[0] == pytest.approx(math.log(2.0), abs=0)
    assert atoms.weights[0] == 0.25
    # (p=2, r=2) sits at 2 log 2 with weight 1/32
    i = int(np.argmin(np.abs(atoms.locations - 2.0 * math.log(2.0))))
    assert atoms.weights[i] == 1.0 / 32.0


def test_atom_invariants(params2, ptable2):
    atoms = levy_atoms(params2, ptable2)
    assert np.all(atoms.locations > 0)
    assert np.all(atoms.weights > 0)
    assert np.all(np.diff(atoms.locations) >= 0)
    # each weight p^(-r sigma)/r is at most p^(-sigma)
    assert float(atoms.weights.max()) <= 0.25


def test_total_mass_is_log_zeta(params2, ptable2):
    atoms = levy_atoms(params2, ptable2)
    logz = math.log(zeta(params2, 0.0).value.real)
    assert abs(atoms.total_mass() - logz) <= 1e-8
    assert abs(atoms.total_mass() - logz) <= atoms.mass_defect_bound


def test_levy_khintchine_consistency(params2, ptable2):
    atoms = levy_atoms(params2, ptable2)
    ts = np.linspace(-5.0, 5.0, 41)
    lk = np.exp(atoms.exponent_grid(ts))
    f = char_fn_grid(params2, ts)
    assert float(np.max(np.abs(lk - f))) <= 1e-7


def test_taylor_structure(coeffs2):
    assert coeffs2.alpha < 0
    assert coeffs2.beta > 0
    assert coeffs2.a[0] == 1j * coeffs2.alpha
    assert coeffs2.a[1] == -coeffs2.beta
    for l, c in enumerate(coeffs2.a, start=1):
        if l % 2:
            assert c.real == 0.0
        else:
            assert c.imag == 0.0


def test_taylor_cross_route(params2, ptable2, coeffs2):
    dual = alpha_beta_dual(params2, ptable2)
    assert abs(coeffs2.a[0].imag - dual.alpha_deriv) <= 1e-8
    assert abs(-coeffs2.a[1].real - dual.beta_deriv) <= 1e-8


def test_divergent_radius_refused(params2, ptable2):
    with pytest.raises(DivergentConstant):
        taylor_coefficients(params2, ptable2, radius=1.0)  # sigma - 1 = 1


@pytest.mark.parametrize("sigma", [2.0, 3.0, 5.0])
def test_dual_agreement(sigma):
    p = ZetaParams(sigma=sigma, prime_limit=10**7 if sigma == 2.0 else 10**6)
    dual = alpha_beta_dual(p)
    assert dual.alpha_abs_diff <= 1e-8
    assert dual.beta_abs_diff <= 1e-8
    assert dual.alpha_abs_diff <= dual.alpha_model_bound + dual.deriv_bound
    assert dual.beta_abs_diff <= dual.beta_model_bound + dual.deriv_bound


def test_dual_signs_sigma_3():
    dual = alpha_beta_dual(ZetaParams(sigma=3.0, prime_limit=10**6))
    assert dual.alpha_prime_sum < 0
    assert dual.beta_prime_sum > 0


def test_dual_refuses_uncertifiable_low_sigma():
    # sigma = 1.5 converges too slowly in the sieve bound for a 1e-8
    # certificate at desk prime limits; the refusal is the contract
    p = ZetaParams(sigma=1.5, prime_limit=10**6, prime_tail_tol=1e-8)
    with pytest.raises(TruncationInsufficient):
        alpha_beta_dual(p)
    loose = alpha_beta_dual(p, enforce_tol=False)
    assert loose.alpha_model_bound > 1e-8


def test_moment_check(params2, coeffs2):
    mean, second, var = moment_check(params2, 10**5)
    dual_alpha = coeffs2.a[0].imag
    assert abs(mean - dual_alpha) <= 1e-8
    assert abs(var - 2.0 * coeffs2.beta) <= 1e-8
    mean6, second6, _ = moment_check(params2, 10**6)
    assert second <= second6 + 1e-9


def test_envelope_holds_inside_delta(params2, coeffs2):
    grid = np.linspace(-coeffs2.delta, coeffs2.delta, 41)
    rep = envelope_check(params2, coeffs2, grid)
    assert rep.all_hold
    mid = rep.rows[20]
    assert mid.t == 0.0
    assert mid.abs_f == mid.lower == mid.upper == 1.0


def test_envelope_spot_values(params2, coeffs2):
    rep = envelope_check(params2, coeffs2, [0.05, 0.1])
    for row in rep.rows:
        assert math.exp(-coeffs2.C_const * row.t**2) <= row.abs_f
        assert row.abs_f <= math.exp(-0.5 * coeffs2.beta * row.t**2)
    r005 = rep.rows[0]
    assert r005.remainder <= coeffs2.B_const * 0.05**3


def test_envelope_grid_outside_raises(params2, coeffs2):
    with pytest.raises(GridOutsideNeighborhood):
        envelope_check(params2, coeffs2, [0.0, coeffs2.delta * 1.5])


def test_continuous_log_unwraps():
    th = np.linspace(0.0, 6.0 * math.pi, 200)
    vals = np.exp(1j * th) * 2.0
    gam = continuous_log(vals)
    assert np.allclose(gam.imag, th, atol=1e-9)
    assert np.allclose(gam.real, math.log(2.0), atol=1e-12)


def test_atom_table_mismatch_rejected(params2):
    small = sieve(10**4)
    with pytest.raises(Exception):
        levy_atoms(params2, small)
