"""Three-mode Fock space for N spin-1 bosons.

Occupations are written ``(N1, N0, N-1)`` for the ``m_f = +1, 0, -1`` modes.
Inside a magnetization sector ``m = N1 - N-1`` a state is labelled by
``k = N1``, so that ``N0 = N - 2k + m`` and ``N-1 = k - m``.

Mode convention: the mode labels ``+1, 0, -1`` map onto the operators
``a_1, a_0, a_-1`` and onto array positions ``0, 1, 2`` of an occupation
triple. Every other module relies on this single mapping.

The dense operators built here span the full ``(N+1)(N+2)/2`` dimensional
space and exist only to validate the blocked production path, so they are
capped at a small atom number.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Tuple

import numpy as np

from .errors import DomainError, ResourceError

#: Largest atom number accepted by the dense oracle (full dimension 91).
ORACLE_CAP = 12

MODES = (1, 0, -1)
_MODE_POS = {1: 0, 0: 1, -1: 2}

NORM_TOL = 1e-10


class Sign(enum.IntEnum):
    """Sign of the spin-exchange coefficient ``c2'``."""

    ANTIFERROMAGNETIC = 1
    FERROMAGNETIC = -1


@dataclass(frozen=True)
class ModelParams:
    """Physical configuration of the condensate.

    Parameters
    ----------
    n_atoms : int
        Total atom number N.
    c : float
        Dipolar strength relative to the spin-exchange strength, ``c_d'/|c2'|``.
    sign : Sign
        Sign of ``c2'``; sets the ``+-1`` coefficient of S^2.
    """

    n_atoms: int
    c: float
    sign: Sign = Sign.ANTIFERROMAGNETIC

    def __post_init__(self):
        if int(self.n_atoms) != self.n_atoms or self.n_atoms < 1:
            raise DomainError(f"n_atoms must be a positive integer, got {self.n_atoms!r}")
        if not np.isfinite(self.c):
            raise DomainError(f"c must be finite, got {self.c!r}")
        object.__setattr__(self, "n_atoms", int(self.n_atoms))
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "sign", Sign(self.sign))


@dataclass(frozen=True)
class SubspaceBasis:
    """Fock states ``|k, N-2k+m, k-m>`` of fixed magnetization ``m``."""

    n_atoms: int
    m: int
    k_min: int
    k_max: int

    @property
    def dim(self) -> int:
        return self.k_max - self.k_min + 1

    @property
    def ks(self) -> np.ndarray:
        return np.arange(self.k_min, self.k_max + 1)

    def occupations(self) -> np.ndarray:
        """Array of shape ``(dim, 3)`` holding ``(N1, N0, N-1)`` per basis state."""
        k = self.ks
        return np.stack([k, self.n_atoms - 2 * k + self.m, k - self.m], axis=1)

    def index(self, k: int) -> int:
        if not self.k_min <= k <= self.k_max:
            raise DomainError(f"k={k} outside [{self.k_min}, {self.k_max}]")
        return k - self.k_min


def subspace_basis(n_atoms: int, m: int) -> SubspaceBasis:
    """Basis of the magnetization-``m`` sector for ``n_atoms`` atoms."""
    if n_atoms < 1:
        raise DomainError(f"n_atoms must be >= 1, got {n_atoms}")
    if abs(m) > n_atoms:
        raise DomainError(f"|m|={abs(m)} exceeds n_atoms={n_atoms}")
    return SubspaceBasis(n_atoms=int(n_atoms), m=int(m), k_min=max(0, m), k_max=(n_atoms + m) // 2)


@dataclass(frozen=True, eq=False)
class StateVector:
    """Unit-norm amplitudes over one magnetization sector."""

    basis: SubspaceBasis
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (self.basis.dim,):
            raise DomainError(f"expected {self.basis.dim} amplitudes, got shape {amps.shape}")
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise DomainError(f"state is not normalized: |g|^2 sums to {norm2!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_atoms(self) -> int:
        return self.basis.n_atoms

    @property
    def m(self) -> int:
        return self.basis.m

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def overlap(self, other: "StateVector") -> float:
        """``|<self|other>|^2``; zero for states in different sectors."""
        if self.basis != other.basis:
            return 0.0
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)) ** 2)


def fock_state(n_atoms: int, occupation: Tuple[int, int, int]) -> StateVector:
    """Unit vector on the Fock state with the given ``(N1, N0, N-1)``."""
    n1, n0, nm1 = occupation
    if min(occupation) < 0 or n1 + n0 + nm1 != n_atoms:
        raise DomainError(f"occupation {occupation} is not a valid {n_atoms}-atom state")
    basis = subspace_basis(n_atoms, n1 - nm1)
    amps = np.zeros(basis.dim, dtype=complex)
    amps[basis.index(n1)] = 1.0
    return StateVector(basis, amps)


# ---------------------------------------------------------------------------
# full-space oracle


@dataclass(frozen=True, eq=False)
class DenseOperator:
    """Operator matrix over the full Fock space of ``n_atoms`` atoms."""

    n_atoms: int
    matrix: np.ndarray = field(repr=False)

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T), initial=0.0))

    def __matmul__(self, other):
        if isinstance(other, DenseOperator):
            return DenseOperator(self.n_atoms, self.matrix @ other.matrix)
        return self.matrix @ other

    def __add__(self, other: "DenseOperator") -> "DenseOperator":
        return DenseOperator(self.n_atoms, self.matrix + other.matrix)

    def __sub__(self, other: "DenseOperator") -> "DenseOperator":
        return DenseOperator(self.n_atoms, self.matrix - other.matrix)

    def __rmul__(self, scalar) -> "DenseOperator":
        return DenseOperator(self.n_atoms, scalar * self.matrix)

    def expectation(self, psi: np.ndarray) -> complex:
        return complex(np.vdot(psi, self.matrix @ psi))


def check_cap(n_atoms: int, cap: int) -> None:
    if n_atoms < 1:
        raise DomainError(f"n_atoms must be >= 1, got {n_atoms}")
    if n_atoms > cap:
        raise ResourceError(f"dense oracle limited to N <= {cap}, got N={n_atoms}")


def enumerate_full_basis(n_atoms: int) -> List[Tuple[int, int]]:
    """All ``(m, k)`` labels, ordered by ``m`` ascending then ``k`` ascending."""
    if n_atoms < 1:
        raise DomainError(f"n_atoms must be >= 1, got {n_atoms}")
    labels = []
    for m in range(-n_atoms, n_atoms + 1):
        b = subspace_basis(n_atoms, m)
        labels.extend((m, int(k)) for k in b.ks)
    return labels


def label_to_occupation(n_atoms: int, label: Tuple[int, int]) -> Tuple[int, int, int]:
    m, k = label
    return (k, n_atoms - 2 * k + m, k - m)


@lru_cache(maxsize=None)
def _full_index(n_atoms: int) -> Tuple[Tuple[Tuple[int, int, int], ...], Dict[Tuple[int, int, int], int]]:
    occs = tuple(label_to_occupation(n_atoms, lab) for lab in enumerate_full_basis(n_atoms))
    return occs, {occ: i for i, occ in enumerate(occs)}


def full_dimension(n_atoms: int) -> int:
    return (n_atoms + 1) * (n_atoms + 2) // 2


def sector_indices(basis: SubspaceBasis) -> np.ndarray:
    """Positions of a sector's basis states inside the full Fock ordering."""
    _, index = _full_index(basis.n_atoms)
    return np.array([index[tuple(int(x) for x in occ)] for occ in basis.occupations()])


def embed(state: StateVector) -> np.ndarray:
    """Full-space vector of a fixed-``m`` state."""
    psi = np.zeros(full_dimension(state.n_atoms), dtype=complex)
    psi[sector_indices(state.basis)] = state.amplitudes
    return psi


def project(op: DenseOperator, basis: SubspaceBasis) -> np.ndarray:
    """Restriction of an operator to one magnetization sector."""
    idx = sector_indices(basis)
    return op.matrix[np.ix_(idx, idx)]


@lru_cache(maxsize=None)
def _bilinear(n_atoms: int, alpha: int, beta: int) -> np.ndarray:
    occs, index = _full_index(n_atoms)
    ia, ib = _MODE_POS[alpha], _MODE_POS[beta]
    mat = np.zeros((len(occs), len(occs)))
    for j, occ in enumerate(occs):
        if occ[ib] == 0:
            continue
        new = list(occ)
        amp = np.sqrt(new[ib])
        new[ib] -= 1
        amp *= np.sqrt(new[ia] + 1)
        new[ia] += 1
        mat[index[tuple(new)], j] = amp
    mat.setflags(write=False)
    return mat


def bilinear_matrix(n_atoms: int, alpha: int, beta: int, cap: int = ORACLE_CAP) -> DenseOperator:
    """Dense matrix of ``a_alpha^dagger a_beta`` with ``alpha, beta`` in ``{+1, 0, -1}``."""
    check_cap(n_atoms, cap)
    if alpha not in _MODE_POS or beta not in _MODE_POS:
        raise DomainError(f"mode indices must be in {MODES}, got ({alpha}, {beta})")
    return DenseOperator(n_atoms, _bilinear(n_atoms, alpha, beta).astype(complex))


_SQ2 = np.sqrt(2.0)
SPIN1_MATRICES = {
    "x": np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex) / _SQ2,
    "y": np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]], dtype=complex) / _SQ2,
    "z": np.diag([1.0, 0.0, -1.0]).astype(complex),
}


def _contract(n_atoms: int, single: np.ndarray, cap: int) -> DenseOperator:
    mat = np.zeros((full_dimension(n_atoms),) * 2, dtype=complex)
    for i, a in enumerate(MODES):
        for j, b in enumerate(MODES):
            if single[i, j] != 0:
                mat += single[i, j] * bilinear_matrix(n_atoms, a, b, cap).matrix
    return DenseOperator(n_atoms, mat)


def spin_matrices(n_atoms: int, cap: int = ORACLE_CAP) -> Dict[str, DenseOperator]:
    """Collective spin operators ``S_x, S_y, S_z`` and ``S^2`` (keys ``x, y, z, S2``)."""
    check_cap(n_atoms, cap)
    ops = {axis: _contract(n_atoms, f, cap) for axis, f in SPIN1_MATRICES.items()}
    ops["S2"] = ops["x"] @ ops["x"] + ops["y"] @ ops["y"] + ops["z"] @ ops["z"]
    return ops


def quadrupole_matrices(n_atoms: int, cap: int = ORACLE_CAP) -> Dict[str, DenseOperator]:
    """Nematic operators ``yz, xz, xx, yy, zz`` and ``plus = zz - yy``."""
    check_cap(n_atoms, cap)

    def b(alpha, beta):
        return bilinear_matrix(n_atoms, alpha, beta, cap).matrix

    n1, n0, nm1 = b(1, 1), b(0, 0), b(-1, -1)
    flip = b(1, -1) + b(-1, 1)
    mats = {
        "yz": 1j / _SQ2 * (-b(1, 0) + b(0, -1) + b(0, 1) - b(-1, 0)),
        "xz": 1 / _SQ2 * (b(1, 0) - b(0, -1) + b(0, 1) - b(-1, 0)),
        "xx": 2 / 3 * n0 - n1 / 3 - nm1 / 3 + flip,
        "yy": -n1 / 3 + 2 / 3 * n0 - nm1 / 3 - flip,
        "zz": 2 / 3 * n1 - 4 / 3 * n0 + 2 / 3 * nm1,
    }
    mats["plus"] = mats["zz"] - mats["yy"]
    return {name: DenseOperator(n_atoms, mat) for name, mat in mats.items()}
