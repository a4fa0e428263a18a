import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import eigh_tridiagonal

from dipolar_squeeze.bogoliubov import (
    BogoliubovParams,
    effective_params,
    k_expectations,
    optimal_time,
    optimal_values,
    optimal_xi2_closed_form,
    xi2_qfi_approx,
    xi2_qfi_from_k,
)
from dipolar_squeeze.errors import DomainError, NumericalError
from dipolar_squeeze.fock import ModelParams, Sign


def pair_oracle(alpha, beta, t, cutoff):
    """<K_z>, |<K_+>| from the vacuum under alpha K_z + beta K_x, in a truncated |n, n> basis."""
    n = np.arange(cutoff, dtype=float)
    diag = alpha * (n + 0.5)
    off = beta * 0.5 * (n[:-1] + 1)
    w, v = eigh_tridiagonal(diag, off)
    psi = v @ (np.exp(-1j * w * t) * v[0])
    p = np.abs(psi) ** 2
    kz = p @ (n + 0.5)
    kplus = np.sum(np.conj(psi[1:]) * psi[:-1] * (n[:-1] + 1))
    return kz, abs(kplus), p[-20:].sum()


def test_c1_params():
    bp = effective_params(ModelParams(1000, 1.0))
    assert (bp.alpha, bp.beta, bp.theta, bp.regime_valid) == (-6, 0, 3, True)


def test_gap_identity_c11():
    bp = effective_params(ModelParams(1000, 1.1))
    assert abs(bp.alpha) - abs(bp.beta) == pytest.approx(6.4, rel=1e-12)


def test_invalid_regime_flagged():
    bp = effective_params(ModelParams(1000, 0.5))
    assert not bp.regime_valid and math.isnan(bp.theta)
    for fn in (lambda: k_expectations(bp, 0.1), lambda: xi2_qfi_approx(bp, 1000, 0.1),
               lambda: optimal_values(bp, 1000), lambda: optimal_time(bp)):
        with pytest.raises(DomainError):
            fn()


def test_ferromagnetic_rejected():
    with pytest.raises(DomainError):
        effective_params(ModelParams(100, 1.2, Sign.FERROMAGNETIC))


def test_vacuum_at_t0():
    bp = effective_params(ModelParams(1000, 1.2))
    assert k_expectations(bp, 0.0) == (0.5, 0.0)
    xi2, f = xi2_qfi_approx(bp, 1000, 0.0)
    assert xi2 == 1 and f == 4000


def test_values_at_t_opt():
    n, c = 1000, 1.1
    bp = effective_params(ModelParams(n, c))
    xi2, f, t = optimal_values(bp, n)
    assert xi2 == pytest.approx(3.2 / 403.2, rel=1e-12)
    assert xi2 == pytest.approx(optimal_xi2_closed_form(n, c), rel=1e-12)
    assert xi2 * f == pytest.approx(4 * n, rel=1e-12)
    assert xi2_qfi_approx(bp, n, t) == pytest.approx((xi2, f), rel=1e-12)


def test_c2_n1000():
    xi2, _, _ = optimal_values(effective_params(ModelParams(1000, 2.0)), 1000)
    assert xi2 == pytest.approx(5 / 4005, rel=1e-12)
    assert 10 * math.log10(xi2) == pytest.approx(-29.04, abs=0.01)


@pytest.mark.parametrize("n, c, t", [(100, 1.3, 0.05), (100, 1.3, None), (1000, 1.1, 0.3), (40, 2.0, 0.7)])
def test_truncated_su11_oracle(n, c, t):
    bp = effective_params(ModelParams(n, c))
    t = optimal_time(bp) if t is None else t
    kz_ref, kp_ref, tail = pair_oracle(bp.alpha, bp.beta, t, 3000)
    assert tail < 1e-14
    kz, kp = k_expectations(bp, t)
    assert kz == pytest.approx(kz_ref, rel=1e-9)
    assert kp == pytest.approx(kp_ref, rel=1e-9)


@settings(max_examples=1000, deadline=None)
@given(st.integers(1, 10**5), st.floats(1.001, 5), st.floats(0, 1))
def test_closed_form_identities(n, c, frac):
    bp = effective_params(ModelParams(n, c))
    t = frac * 2 * optimal_time(bp)
    xi_a, f_a = xi2_qfi_approx(bp, n, t)
    xi_k, f_k = xi2_qfi_from_k(bp, n, t)
    # 2<K_z> - 2|<K_+>| cancels; measure agreement on the scale of its operands
    kz, _ = k_expectations(bp, t)
    assert abs(xi_k - xi_a) <= 1e-12 * 2 * kz
    assert f_k == pytest.approx(f_a, rel=1e-10)
    xi_min, _, _ = optimal_values(bp, n)
    assert xi_a >= xi_min * (1 - 1e-12)
    assert xi_a * f_a / (4 * n) >= 1 - 1e-9
    assert abs(bp.alpha) - abs(bp.beta) == pytest.approx(4 * c + 2, rel=1e-9)
    assert abs(bp.alpha) + abs(bp.beta) == pytest.approx(8 * n * (c - 1) + 4 * c + 2, rel=1e-12)
    assert xi_min == pytest.approx(optimal_xi2_closed_form(n, c), rel=1e-9)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5000), st.floats(1.01, 3), st.floats(0, 2))
def test_periodicity(n, c, t):
    bp = effective_params(ModelParams(n, c))
    period = 2 * math.pi / bp.theta
    a, b = k_expectations(bp, t), k_expectations(bp, t + period)
    assert b == pytest.approx(a, rel=1e-7, abs=1e-9)


def test_gamma_guard():
    bp = BogoliubovParams(alpha=-1e13, beta=-(1e13 - 1), theta=0.5 * math.sqrt(1e26 - (1e13 - 1) ** 2),
                          regime_valid=True)
    with pytest.raises(NumericalError):
        xi2_qfi_approx(bp, 10**12, optimal_time(bp))


def test_array_times():
    bp = effective_params(ModelParams(500, 1.2))
    t = np.linspace(0, optimal_time(bp), 11)
    xi2, f = xi2_qfi_approx(bp, 500, t)
    assert xi2.shape == f.shape == (11,)
    assert np.argmin(xi2) == 10
