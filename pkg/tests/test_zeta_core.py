"""Certified zeta evaluation against analytic identities and long-sum oracles."""

import math

import numpy as np
import pytest

from zetaconv import Certified, TruncationInsufficient, InvalidInput, ZetaParams, char_fn, zeta, zeta_deriv1, zeta_deriv2
from zetaconv.zeta_core import char_fn_grid, zeta_grid

# Frozen oracles (brute partial sums of 1e7 terms, accumulated by fsum,
# smallest terms first, with elementary integral tail corrections for the
# log-weighted sums; regenerate with tests/oracles.py).
BRUTE_ZETA_2_1 = complex(1.1503557291717637, -0.43753093170954493)  # no tail added
BRUTE_ZETA_2_1_TAIL = 1e-7  # |sum_{m>1e7} m^(-2-i)| <= 1/M
BRUTE_ZETA_D1_2 = -0.9375482543159244  # integral tail included
BRUTE_ZETA_D2_2 = 1.9892802343002
# 30-digit independent reference for the characteristic function
REF_F_2_1 = complex(0.6993324087810038, -0.26598687129018994)


def test_zeta_at_two_is_pi_squared_over_six(params2):
    v = zeta(params2, 0.0)
    assert v.value.imag == 0.0
    assert abs(v.value.real - math.pi**2 / 6.0) <= 1e-12
    assert v.bound <= params2.target_abs_error


def test_zeta_large_sigma_dominant_term():
    p = ZetaParams(sigma=30.0)
    v = zeta(p, 0.0).value.real
    assert abs(v - 1.0 - 2.0**-30) <= 2.0 * 3.0**-30


def test_zeta_complex_vs_partial_sum_oracle(params2):
    v = zeta(params2, 1.0).value
    assert abs(v - BRUTE_ZETA_2_1) <= 1e-10 + BRUTE_ZETA_2_1_TAIL


def test_deriv1_value(params2):
    v = zeta_deriv1(params2)
    assert v.value.real < 0
    assert abs(v.value.real - BRUTE_ZETA_D1_2) <= 1e-10


def test_deriv1_vanishes_at_large_sigma():
    p = ZetaParams(sigma=50.0)
    v = zeta_deriv1(p).value.real
    assert abs(v) < 2.0 * math.log(2.0) * 2.0**-50 * 1.01


def test_deriv1_matches_finite_difference(params2):
    h = 1e-4
    up = zeta(ZetaParams(sigma=2.0 + h), 0.0).value.real
    dn = zeta(ZetaParams(sigma=2.0 - h), 0.0).value.real
    fd = (up - dn) / (2.0 * h)
    assert abs(fd - zeta_deriv1(params2).value.real) <= 1e-6


def test_deriv2_value(params2):
    v = zeta_deriv2(params2)
    assert v.value.real > 0
    assert abs(v.value.real - BRUTE_ZETA_D2_2) <= 1e-10


def test_deriv2_two_term_dominance_at_sigma_50():
    v = zeta_deriv2(ZetaParams(sigma=50.0)).value.real
    bound = (math.log(2) ** 2 * 2.0**-50 + math.log(3) ** 2 * 3.0**-50) * 1.01
    assert 0 < v < bound


def test_deriv2_matches_second_difference(params2):
    h = 1e-3
    mid = zeta(params2, 0.0).value.real
    up = zeta(ZetaParams(sigma=2.0 + h), 0.0).value.real
    dn = zeta(ZetaParams(sigma=2.0 - h), 0.0).value.real
    fd2 = (up - 2.0 * mid + dn) / h**2
    assert abs(fd2 - zeta_deriv2(params2).value.real) <= 1e-4


def test_char_fn_at_zero_is_exactly_one(params2):
    v = char_fn(params2, 0.0)
    assert v.value == 1.0 + 0.0j


def test_char_fn_conjugate_symmetry(params2):
    a = char_fn(params2, 0.7).value
    b = char_fn(params2, -0.7).value
    assert abs(b - a.conjugate()) <= 1e-15


def test_char_fn_against_reference(params2):
    assert abs(char_fn(params2, 1.0).value - REF_F_2_1) <= 1e-9


@pytest.mark.parametrize("sigma", [1.5, 2.0, 3.0])
def test_char_fn_modulus_bounded_on_grid(sigma):
    p = ZetaParams(sigma=sigma, target_abs_error=1e-11)
    ts = np.linspace(-10.0, 10.0, 1000)
    f = char_fn_grid(p, ts)
    assert float(np.max(np.abs(f))) <= 1.0 + 2.0 * p.target_abs_error + 1e-13


def test_zeta_positive_above_one():
    for sigma in (1.5, 2.0, 3.0, 10.0):
        v = zeta(ZetaParams(sigma=sigma), 0.0)
        assert v.value.imag == 0.0 and v.value.real > 1.0


def test_grid_matches_scalar(params2):
    ts = np.array([-2.0, -0.3, 0.0, 0.7, 5.0])
    g = zeta_grid(params2, ts)
    for t, gv in zip(ts, g):
        assert abs(gv - zeta(params2, float(t)).value) <= 1e-13


def test_constructor_rejects_bad_inputs():
    with pytest.raises(InvalidInput):
        ZetaParams(sigma=1.0)
    with pytest.raises(InvalidInput):
        ZetaParams(sigma=0.5)
    with pytest.raises(InvalidInput):
        ZetaParams(sigma=2.0, series_terms=1)
    with pytest.raises(InvalidInput):
        ZetaParams(sigma=2.0, target_abs_error=0.0)
    with pytest.raises(InvalidInput):
        zeta(ZetaParams(sigma=2.0), math.inf)


def test_truncation_refusal_near_one():
    with pytest.raises(TruncationInsufficient):
        ZetaParams(sigma=1.01, series_terms=100)


def test_weighted_sum_refusal_when_uncertifiable():
    with pytest.raises(TruncationInsufficient):
        zeta_deriv2(ZetaParams(sigma=1.5, series_terms=1000, target_abs_error=1e-14))


def test_large_t_flagged_not_refused(params2):
    v = zeta(params2, 2e6)
    assert isinstance(v, Certified)
    assert v.flagged_large_t


def test_certified_bound_brackets_truth(params2):
    # coarse truncation against the tight default: certified bound must cover
    coarse = ZetaParams(sigma=2.0, series_terms=500, target_abs_error=1e-4)
    v = zeta(coarse, 0.0)
    assert abs(v.value.real - math.pi**2 / 6.0) <= v.bound
