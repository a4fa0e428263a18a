"""Dimensionless single-mode Hamiltonian ``(+-1 - c) S^2 + 3c S_z^2 + 3c n_0``.

Energies are in units of ``|c2'|`` and times in ``hbar/|c2'|`` with ``hbar = 1``.

In the sector basis ``|k> = |k, N-2k+m, k-m>`` the collective spin obeys

    S^2 = (n_1 - n_-1)^2 + (2 n_0 + 1)(n_1 + n_-1) + 2 n_0
          + 2 (a_1^dag a_-1^dag a_0 a_0 + h.c.),

so every sector block is real symmetric tridiagonal in ``k``: the pair
process ``0 + 0 <-> +1 + -1`` moves ``k`` by one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .fock import (
    ORACLE_CAP,
    DenseOperator,
    ModelParams,
    SubspaceBasis,
    bilinear_matrix,
    spin_matrices,
    subspace_basis,
)


@dataclass(frozen=True, eq=False)
class TridiagonalBlock:
    """Real symmetric tridiagonal restriction of H to one sector."""

    basis: SubspaceBasis
    diagonal: np.ndarray = field(repr=False)
    off_diagonal: np.ndarray = field(repr=False)

    def __post_init__(self):
        d = np.asarray(self.diagonal, dtype=float)
        e = np.asarray(self.off_diagonal, dtype=float)
        if d.shape != (self.basis.dim,) or e.shape != (self.basis.dim - 1,):
            raise DomainError("block arrays do not match the basis dimension")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise DomainError("block has non-finite entries")
        d.setflags(write=False)
        e.setflags(write=False)
        object.__setattr__(self, "diagonal", d)
        object.__setattr__(self, "off_diagonal", e)

    @property
    def dim(self) -> int:
        return self.basis.dim

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diagonal) + np.diag(self.off_diagonal, 1) + np.diag(self.off_diagonal, -1)

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diagonal * v
        out[:-1] += self.off_diagonal * v[1:]
        out[1:] += self.off_diagonal * v[:-1]
        return out


def spin_squared_elements(basis: SubspaceBasis) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and first off-diagonal of S^2 in a sector basis."""
    m = basis.m
    k = basis.ks.astype(float)
    n0 = basis.n_atoms - 2 * k + m
    diag = m * m + (2 * n0 + 1) * (2 * k - m) + 2 * n0
    kk, nn = k[:-1], n0[:-1]
    off = 2.0 * np.sqrt((kk + 1) * (kk + 1 - m) * nn * (nn - 1))
    return diag, off


def block_hamiltonian(params: ModelParams, m: int) -> TridiagonalBlock:
    """H restricted to magnetization ``m``."""
    basis = subspace_basis(params.n_atoms, m)
    c = params.c
    coef = int(params.sign) - c
    s2_diag, s2_off = spin_squared_elements(basis)
    n0 = params.n_atoms - 2 * basis.ks + m
    diag = coef * s2_diag + 3 * c * m * m + 3 * c * n0
    return TridiagonalBlock(basis, diag, coef * s2_off)


def full_hamiltonian_oracle(params: ModelParams, cap: int = ORACLE_CAP) -> DenseOperator:
    """Dense H over the full Fock space, assembled from bilinears."""
    n = params.n_atoms
    spin = spin_matrices(n, cap)
    n0 = bilinear_matrix(n, 0, 0, cap)
    c = params.c
    coef = int(params.sign) - c
    return coef * spin["S2"] + (3 * c) * (spin["z"] @ spin["z"]) + (3 * c) * n0
