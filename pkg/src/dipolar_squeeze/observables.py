"""Spin-nematic squeezing and maximal quantum Fisher information.

Everything is evaluated in the SU(2)-like subspace ``{S_x, Q_yz, Q_+}`` with
``Q_+ = Q_zz - Q_yy``. The fast path works on fixed-magnetization states,
where ``<S_x> = <Q_yz> = 0`` and the needed moments reduce to sums over the
sector amplitudes. With ``O = <a_0^dag a_0^dag a_1 a_-1>`` the moments obey

    A = <S_x^2 + Q_yz^2>,    B - iC = 4 O,    sqrt(B^2 + C^2) = 4 |O|.

The oracle path builds the dense operators and uses true variances.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from .errors import DomainError
from .fock import ORACLE_CAP, StateVector, embed, quadrupole_matrices, spin_matrices

#: Relative size of ``|<Q_+>|`` (in units of N) below which squeezing is undefined.
UNDEFINED_TOL = 1e-9


@dataclass(frozen=True)
class MomentSet:
    n_atoms: int
    a_moment: float
    coherent: complex
    q_plus_mean: float
    q_plus_var: float
    populations: Tuple[float, float, float]

    @property
    def b_moment(self) -> float:
        return 4.0 * self.coherent.real

    @property
    def c_moment(self) -> float:
        return -4.0 * self.coherent.imag

    @property
    def coherent_abs(self) -> float:
        """``sqrt(B^2 + C^2)``."""
        return 4.0 * abs(self.coherent)


@dataclass(frozen=True)
class SqueezingResult:
    value: Optional[float]
    phi_opt: float
    db: Optional[float]

    @property
    def defined(self) -> bool:
        return self.value is not None


class QfiBranch(str, enum.Enum):
    PERPENDICULAR_VARIANCE = "perpendicular_variance"
    Q_PLUS_VARIANCE = "q_plus_variance"


@dataclass(frozen=True)
class QfiResult:
    f_max: float
    branch: QfiBranch


def moments_fixed_m(state: StateVector) -> MomentSet:
    """Moments of a state confined to one magnetization sector."""
    if not isinstance(state, StateVector):
        raise DomainError("moments_fixed_m expects a StateVector")
    g = state.amplitudes
    p = np.abs(g) ** 2
    total = p.sum()
    if abs(total - 1.0) > 1e-10:
        raise DomainError(f"state is not normalized (norm^2={total!r})")
    n, m = state.n_atoms, state.m
    k = state.basis.ks.astype(float)
    n0 = n - 2 * k + m

    a = float(np.sum(p * ((2 * n - 4 * k + 2 * m - 1) * (2 * k - m) + 2 * n)))
    kk, nn = k[:-1], n0[:-1]
    weights = np.sqrt((kk + 1) * (kk + 1 - m) * (nn - 1) * nn)
    coherent = complex(np.sum(np.conj(g[:-1]) * g[1:] * weights))

    q_mean = float(np.sum(p * (6 * k - 2 * n - 3 * m)))
    j = 2 * k - m
    j_mean = np.sum(p * j)
    q_var = 9 * float(np.sum(p * (j - j_mean) ** 2)) + float(np.sum(p * (2 * k * (k + 1) - m * (2 * k + 1))))
    pops = (float(np.sum(p * k)), float(np.sum(p * n0)), float(np.sum(p * (k - m))))
    return MomentSet(n, a, coherent, q_mean, q_var, pops)


def optimal_angle(b: float, c: float) -> float:
    """Quadrature angle in ``[0, pi)`` minimizing ``A/2 + (B cos 2phi + C sin 2phi)/2``."""
    if b == 0.0 and c == 0.0:
        return 0.0
    two_phi = math.atan2(-c, -b) % (2 * math.pi)
    return (two_phi / 2) % math.pi


def to_decibels(xi2: float) -> float:
    if not xi2 > 0:
        raise DomainError(f"squeezing parameter must be positive to express in dB, got {xi2!r}")
    return 10.0 * math.log10(xi2)


def _squeezing(numerator: float, q_mean: float, n_atoms: int, phi: float) -> SqueezingResult:
    if abs(q_mean) < UNDEFINED_TOL * n_atoms:
        return SqueezingResult(None, phi, None)
    value = numerator / abs(q_mean)
    return SqueezingResult(value, phi, to_decibels(value) if value > 0 else None)


def squeezing_xi_x(moments: MomentSet) -> SqueezingResult:
    """``xi_x^2 = (A - sqrt(B^2+C^2)) / |<Q_+>|``; ``value`` is None when undefined."""
    phi = optimal_angle(moments.b_moment, moments.c_moment)
    return _squeezing(moments.a_moment - moments.coherent_abs, moments.q_plus_mean, moments.n_atoms, phi)


def _qfi(perpendicular: float, q_var: float) -> QfiResult:
    if perpendicular >= q_var:
        return QfiResult(perpendicular, QfiBranch.PERPENDICULAR_VARIANCE)
    return QfiResult(q_var, QfiBranch.Q_PLUS_VARIANCE)


def qfi_max(moments: MomentSet) -> QfiResult:
    """``F_max = max{2(A + sqrt(B^2+C^2)), (Delta Q_+)^2}``."""
    return _qfi(2.0 * (moments.a_moment + moments.coherent_abs), moments.q_plus_var)


# ---------------------------------------------------------------------------
# dense oracle

PsiLike = Union[StateVector, np.ndarray]


def _full_vector(psi: PsiLike, n_atoms: Optional[int]) -> Tuple[np.ndarray, int]:
    if isinstance(psi, StateVector):
        return embed(psi), psi.n_atoms
    if n_atoms is None:
        raise DomainError("n_atoms is required for raw full-space vectors")
    psi = np.asarray(psi, dtype=complex)
    if abs(np.vdot(psi, psi).real - 1.0) > 1e-10:
        raise DomainError("full-space state is not normalized")
    return psi, n_atoms


def _covariance(psi: np.ndarray, x: np.ndarray, y: np.ndarray) -> Tuple[float, float, float]:
    """Variances of x, y and their symmetrized covariance."""
    xp, yp = x @ psi, y @ psi
    mx, my = np.vdot(psi, xp).real, np.vdot(psi, yp).real
    vxx = np.vdot(xp, xp).real - mx * mx
    vyy = np.vdot(yp, yp).real - my * my
    vxy = np.vdot(xp, yp).real - mx * my
    return float(vxx), float(vyy), float(vxy)


def squeezing_oracle(psi: PsiLike, subspace: str = "x", n_atoms: Optional[int] = None,
                     cap: int = ORACLE_CAP) -> SqueezingResult:
    """Squeezing by direct minimization over the quadrature angle.

    ``subspace="x"`` uses ``{S_x, Q_yz, Q_zz - Q_yy}``;
    ``subspace="y"`` uses ``{S_y, Q_xz, Q_xx - Q_zz}``.
    """
    psi, n = _full_vector(psi, n_atoms)
    spin = spin_matrices(n, cap)
    quad = quadrupole_matrices(n, cap)
    if subspace == "x":
        s, q, z = spin["x"].matrix, quad["yz"].matrix, quad["plus"].matrix
    elif subspace == "y":
        s, q, z = spin["y"].matrix, quad["xz"].matrix, (quad["xx"] - quad["zz"]).matrix
    else:
        raise DomainError(f"subspace must be 'x' or 'y', got {subspace!r}")
    vss, vqq, vsq = _covariance(psi, s, q)
    # 2 Var(S cos + Q sin) = (vss + vqq) + (vss - vqq) cos 2phi + 2 vsq sin 2phi
    b, c = vss - vqq, 2 * vsq
    numerator = (vss + vqq) - math.hypot(b, c)
    mean = np.vdot(psi, z @ psi).real
    return _squeezing(numerator, float(mean), n, optimal_angle(b, c))


def qfi_oracle(psi: PsiLike, n_atoms: Optional[int] = None, cap: int = ORACLE_CAP) -> QfiResult:
    """Maximal QFI from the ``(S_x, Q_yz)`` covariance matrix and ``Var(Q_+)``."""
    psi, n = _full_vector(psi, n_atoms)
    sx = spin_matrices(n, cap)["x"].matrix
    quad = quadrupole_matrices(n, cap)
    vss, vqq, vsq = _covariance(psi, sx, quad["yz"].matrix)
    lam_max = np.linalg.eigvalsh(np.array([[vss, vsq], [vsq, vqq]]))[-1]
    q_var = _covariance(psi, quad["plus"].matrix, quad["plus"].matrix)[0]
    return _qfi(4.0 * float(lam_max), q_var)


def oracle_moments(psi: PsiLike, n_atoms: Optional[int] = None, cap: int = ORACLE_CAP) -> dict:
    """Raw operator moments ``A, B, C, <S_x>, <Q_yz>, <Q_+>, Var(Q_+)`` for cross-checks."""
    psi, n = _full_vector(psi, n_atoms)
    sx = spin_matrices(n, cap)["x"].matrix
    quad = quadrupole_matrices(n, cap)
    qyz, qp = quad["yz"].matrix, quad["plus"].matrix

    def ev(op):
        return np.vdot(psi, op @ psi)

    sx2, q2 = sx @ sx, qyz @ qyz
    return {
        "A": ev(sx2 + q2).real,
        "B": ev(sx2 - q2).real,
        "C": ev(sx @ qyz + qyz @ sx).real,
        "sx_mean": ev(sx),
        "qyz_mean": ev(qyz),
        "q_plus_mean": ev(qp).real,
        "q_plus_var": _covariance(psi, qp, qp)[0],
    }
