"""Ground states: per-sector tridiagonal eigensolves and closed-form states."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import DomainError, NumericalError
from .fock import ModelParams, StateVector, fock_state, subspace_basis
from .hamiltonian import TridiagonalBlock, block_hamiltonian

RESIDUAL_TOL = 1e-10
TIE_TOL = 1e-9


def fix_phase(vec: np.ndarray) -> np.ndarray:
    """Rotate a vector so that its first non-negligible component is real positive."""
    vec = np.asarray(vec, dtype=complex)
    mags = np.abs(vec)
    lead = int(np.argmax(mags > 1e-12 * mags.max()))
    return vec * (abs(vec[lead]) / vec[lead])


def block_ground(block: TridiagonalBlock) -> Tuple[float, StateVector]:
    """Lowest eigenpair of a sector block, phase-fixed."""
    d, e = block.diagonal, block.off_diagonal
    if block.dim == 1:
        return float(d[0]), StateVector(block.basis, np.ones(1))
    try:
        w, v = eigh_tridiagonal(d, e, select="i", select_range=(0, 0))
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"tridiagonal eigensolve failed for m={block.basis.m}: {exc}") from exc
    energy = float(w[0])
    vec = v[:, 0] / np.linalg.norm(v[:, 0])
    residual = float(np.linalg.norm(block.matvec(vec) - energy * vec))
    scale = np.abs(d).max() + 2 * np.abs(e).max()
    # below ~eps*||H|| the residual is not attainable in double precision
    if residual > RESIDUAL_TOL * max(1.0, abs(energy)) and residual > 1e3 * np.finfo(float).eps * scale:
        raise NumericalError(
            f"eigenvector residual {residual:.3e} too large (N={block.basis.n_atoms}, "
            f"m={block.basis.m}, E={energy:.6g})"
        )
    return energy, StateVector(block.basis, fix_phase(vec))


@dataclass(frozen=True)
class GroundResult:
    params: ModelParams
    m_star: int
    energy: float
    state: StateVector
    degenerate_ms: Tuple[int, ...]


def global_ground(params: ModelParams) -> GroundResult:
    """Ground state over all magnetization sectors.

    Sectors whose minima lie within ``1e-9 * N`` of the global minimum are
    reported in ``degenerate_ms``; the representative is the tied sector with
    the smallest ``|m|``, preferring ``m >= 0``.
    """
    n = params.n_atoms
    ms = list(range(-n, n + 1))
    sols = [block_ground(block_hamiltonian(params, m)) for m in ms]
    energies = np.array([s[0] for s in sols])
    e_min = energies.min()
    tied = [m for m, e in zip(ms, energies) if e - e_min <= TIE_TOL * n]
    m_star = min(tied, key=lambda m: (abs(m), m < 0))
    energy, state = sols[ms.index(m_star)]
    return GroundResult(params, m_star, energy, state, tuple(tied))


def _log_product(numerators: np.ndarray, denominators: np.ndarray) -> np.ndarray:
    """Cumulative ``log prod sqrt(num/den)`` with an empty product first."""
    terms = 0.5 * (np.log(numerators) - np.log(denominators))
    return np.concatenate([[0.0], np.cumsum(terms)])


def singlet_state(n_atoms: int) -> StateVector:
    """The S=0 state at even N, built from its closed-form amplitudes."""
    if n_atoms < 2 or n_atoms % 2:
        raise DomainError(f"singlet requires even N >= 2, got {n_atoms}")
    n = n_atoms
    x = np.arange(n // 2, dtype=float)
    logs = _log_product(n - 2 * x, n - 2 * x - 1) - 0.5 * np.log(n + 1)
    k = np.arange(n // 2 + 1)
    amps = (-1.0) ** k * np.exp(logs)
    return StateVector(subspace_basis(n, 0), amps)


def spin_one_state(n_atoms: int) -> StateVector:
    """The ``|S=1, m=0>`` state at odd N, from closed-form amplitudes."""
    if n_atoms < 1 or n_atoms % 2 == 0:
        raise DomainError(f"|S=1, m=0> closed form requires odd N, got {n_atoms}")
    half = (n_atoms - 1) // 2
    x = np.arange(half, dtype=float)
    logs = _log_product((x + 2) * (2 * half - 2 * x), (x + 1) * (2 * half - 2 * x - 1))
    k = np.arange(half + 1, dtype=float)
    logs = logs + 0.5 * np.log(3 * (2 * half - 2 * k + 1) / (k + 1))
    log_c0 = -0.5 * np.log(4 * half**2 + 8 * half + 3)
    amps = (-1.0) ** k * np.exp(logs + log_c0)
    return StateVector(subspace_basis(n_atoms, 0), amps)


class NamedState(str, enum.Enum):
    POLAR = "polar"
    TWIN_FOCK = "twin_fock"
    STRETCHED = "stretched"


def named_state(kind, n_atoms: int, sign: int = 1) -> StateVector:
    """Polar ``|0,N,0>``, twin-Fock ``|N/2,0,N/2>`` or stretched ``|N,0,0>`` (``|0,0,N>`` if sign<0)."""
    kind = NamedState(kind.replace("-", "_") if isinstance(kind, str) else kind)
    if kind is NamedState.POLAR:
        return fock_state(n_atoms, (0, n_atoms, 0))
    if kind is NamedState.TWIN_FOCK:
        if n_atoms % 2:
            raise DomainError(f"twin-Fock state requires even N, got {n_atoms}")
        return fock_state(n_atoms, (n_atoms // 2, 0, n_atoms // 2))
    return fock_state(n_atoms, (n_atoms, 0, 0) if sign >= 0 else (0, 0, n_atoms))

