import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_sector_state
from dipolar_squeeze.errors import DomainError, ResourceError
from dipolar_squeeze.fock import ModelParams, fock_state, full_dimension
from dipolar_squeeze.ground import global_ground, named_state, singlet_state, spin_one_state
from dipolar_squeeze.observables import (
    QfiBranch,
    moments_fixed_m,
    optimal_angle,
    oracle_moments,
    qfi_max,
    qfi_oracle,
    squeezing_oracle,
    squeezing_xi_x,
    to_decibels,
)


def test_polar_moments():
    n = 20
    mom = moments_fixed_m(named_state("polar", n))
    assert (mom.a_moment, mom.coherent, mom.q_plus_mean, mom.q_plus_var) == (2 * n, 0, -2 * n, 0)
    assert squeezing_xi_x(mom).value == 1
    q = qfi_max(mom)
    assert q.f_max == 4 * n and q.branch is QfiBranch.PERPENDICULAR_VARIANCE


def test_twin_fock_moments():
    mom = moments_fixed_m(named_state("twin_fock", 100))
    assert mom.a_moment == 100 and mom.coherent == 0
    assert mom.q_plus_mean == 100 and mom.q_plus_var == 5100
    assert qfi_max(mom).branch is QfiBranch.Q_PLUS_VARIANCE


@pytest.mark.parametrize("n", [2, 10, 100, 400])
def test_singlet_moments(n):
    mom = moments_fixed_m(singlet_state(n))
    ref = 4 * n * (n + 3) / 15
    assert mom.a_moment == pytest.approx(ref, rel=1e-12)
    assert mom.coherent_abs == pytest.approx(ref, rel=1e-12)
    assert abs(mom.q_plus_mean) < 1e-9 * n
    assert not squeezing_xi_x(mom).defined
    assert qfi_max(mom).f_max == pytest.approx(16 * n * (n + 3) / 15, rel=1e-12)


@pytest.mark.parametrize("n", [1, 3, 5, 7, 9, 11])
def test_spin_one_qfi_oracle(n):
    # dense operators establish F = (48N(N+3) - 52)/35 on |S=1, m=0>
    f = qfi_oracle(spin_one_state(n)).f_max
    assert f == pytest.approx((48 * n * (n + 3) - 52) / 35, rel=1e-10)


@pytest.mark.parametrize("n", [11, 101, 501])
def test_spin_one_fast_values(n):
    mom = moments_fixed_m(spin_one_state(n))
    assert squeezing_xi_x(mom).value == pytest.approx(5 / (2 * n + 3), rel=1e-9)
    assert qfi_max(mom).f_max == pytest.approx((48 * n * (n + 3) - 52) / 35, rel=1e-9)


def test_decibels():
    assert to_decibels(1) == 0
    assert to_decibels(0.1) == pytest.approx(-10)
    assert to_decibels(5 / 205) == pytest.approx(-16.1278, abs=1e-4)
    with pytest.raises(DomainError):
        to_decibels(0)


def test_oracle_polar_baseline():
    assert squeezing_oracle(named_state("polar", 6), "x").value == pytest.approx(1)


def test_oracle_ground_n10():
    s = global_ground(ModelParams(10, 0.5)).state
    fast = squeezing_xi_x(moments_fixed_m(s))
    assert squeezing_oracle(s, "x").value == pytest.approx(fast.value, rel=1e-9)
    y = squeezing_oracle(s, "y")
    assert y.defined and np.isfinite(y.value)


def test_oracle_named_qfi():
    assert qfi_oracle(named_state("twin_fock", 10)).f_max == pytest.approx(60)
    assert qfi_oracle(named_state("stretched", 10)).f_max == pytest.approx(20)


def test_oracle_cap_and_subspace():
    with pytest.raises(ResourceError):
        qfi_oracle(named_state("polar", 13))
    with pytest.raises(DomainError):
        squeezing_oracle(named_state("polar", 3), "z")


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 9), st.integers(0, 2**32 - 1), st.data())
def test_fast_moments_vs_oracle_random_complex(n, seed, data):
    m = data.draw(st.integers(-n, n))
    s = random_sector_state(np.random.default_rng(seed), n, m)
    fast = moments_fixed_m(s)
    ref = oracle_moments(s)
    for got, want in ((fast.a_moment, ref["A"]), (fast.b_moment, ref["B"]), (fast.c_moment, ref["C"]),
                      (fast.q_plus_mean, ref["q_plus_mean"]), (fast.q_plus_var, ref["q_plus_var"])):
        assert got == pytest.approx(want, abs=1e-9 * max(1, abs(want)))
    assert abs(ref["sx_mean"]) < 1e-10 and abs(ref["qyz_mean"]) < 1e-10
    assert qfi_max(fast).f_max == pytest.approx(qfi_oracle(s).f_max, rel=1e-9)
    sf, so = squeezing_xi_x(fast), squeezing_oracle(s)
    assert sf.defined == so.defined
    if sf.defined:
        assert sf.value == pytest.approx(so.value, rel=1e-9, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 60), st.integers(0, 2**32 - 1), st.data())
def test_moment_invariants(n, seed, data):
    m = data.draw(st.integers(-n, n))
    mom = moments_fixed_m(random_sector_state(np.random.default_rng(seed), n, m))
    assert mom.a_moment >= 0 and mom.q_plus_var >= -1e-9
    assert 4 * abs(mom.coherent) <= mom.a_moment * (1 + 1e-12) + 1e-12
    assert qfi_max(mom).f_max <= 4 * n * n + 1e-6
    assert sum(mom.populations) == pytest.approx(n)


@settings(max_examples=200)
@given(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3))
def test_optimal_angle_minimizes(b, c):
    phi = optimal_angle(b, c)
    assert 0 <= phi < math.pi
    f = b * math.cos(2 * phi) + c * math.sin(2 * phi)
    assert f == pytest.approx(-math.hypot(b, c), abs=1e-9 * max(1, abs(b), abs(c)))


def test_term_wise_form_matches_on_real_grounds():
    for c in (-0.3, 0.2, 0.7, 1.5):
        s = global_ground(ModelParams(40, c)).state
        g = s.amplitudes.real
        k = s.basis.ks[:-1].astype(float)
        n0 = 40 - 2 * k
        termwise = np.sum(np.abs(g[:-1] * g[1:]) * np.sqrt((k + 1) ** 2 * (n0 - 1) * n0))
        assert 4 * termwise == pytest.approx(4 * abs(moments_fixed_m(s).coherent), rel=1e-9)


def test_separable_fock_states_give_4n():
    n = 8
    for occ in ((0, 8, 0), (8, 0, 0), (0, 0, 8)):
        assert qfi_oracle(fock_state(n, occ)).f_max <= 4 * n + 1e-9
    assert qfi_oracle(fock_state(n, (0, n, 0))).f_max == pytest.approx(4 * n, rel=1e-9)


def test_raw_vector_oracle_needs_n():
    psi = np.zeros(full_dimension(2), dtype=complex)
    psi[0] = 1
    with pytest.raises(DomainError):
        qfi_oracle(psi)
    assert np.isfinite(qfi_oracle(psi, n_atoms=2).f_max)


def test_moments_rejects_non_state():
    with pytest.raises(DomainError):
        moments_fixed_m(np.ones(3))
