"""Cross-checks of the blocked fast path against the dense Fock-space oracle."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Sequence

import numpy as np

from .errors import ResourceError
from .fock import (
    ORACLE_CAP,
    ModelParams,
    project,
    quadrupole_matrices,
    sector_indices,
    spin_matrices,
    subspace_basis,
)
from .ground import global_ground
from .hamiltonian import block_hamiltonian, full_hamiltonian_oracle
from .observables import (
    moments_fixed_m,
    oracle_moments,
    qfi_max,
    qfi_oracle,
    squeezing_oracle,
    squeezing_xi_x,
)

DEFAULT_C_GRID = (-1.0, -0.5, -0.1, 0.0, 0.5, 1.0, 1.5, 2.0)


@dataclass(frozen=True)
class SuiteResult:
    suite: str
    n_atoms: int
    max_deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.max_deviation <= self.tolerance)


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(b))


def check_operator_algebra(n: int, cap: int = ORACLE_CAP) -> List[SuiteResult]:
    spin = spin_matrices(n, cap)
    quad = quadrupole_matrices(n, cap)
    herm = max(op.hermiticity_error() for op in [*spin.values(), *quad.values()])
    sx, sy, sz = spin["x"].matrix, spin["y"].matrix, spin["z"].matrix
    comm = np.abs(sx @ sy - sy @ sx - 1j * sz).max()
    trace_free = np.abs((quad["xx"] + quad["yy"] + quad["zz"]).matrix).max()
    s2 = spin["S2"].matrix
    s2_sz = np.abs(s2 @ sz - sz @ s2).max()

    # S^2 eigenvalues must be S(S+1) with S of the same parity as N
    evals = np.linalg.eigvalsh(s2)
    s_values = (-1 + np.sqrt(1 + 4 * np.clip(evals, 0, None))) / 2
    allowed = np.arange(n % 2, n + 1, 2)
    parity_dev = max(np.min(np.abs(allowed - s)) for s in s_values)

    sector_leak = 0.0
    for m in range(-n, n + 1):
        inside = sector_indices(subspace_basis(n, m))
        outside = np.setdiff1d(np.arange(s2.shape[0]), inside)
        sector_leak = max(sector_leak, np.abs(s2[np.ix_(inside, outside)]).max(initial=0.0))
    return [
        SuiteResult("hermiticity", n, float(herm), 1e-12),
        SuiteResult("spin_commutator", n, float(comm), 1e-10),
        SuiteResult("quadrupole_trace", n, float(trace_free), 1e-12),
        SuiteResult("s2_commutes_sz", n, float(s2_sz), 1e-12),
        SuiteResult("s2_allowed_spins", n, float(parity_dev), 1e-9),
        SuiteResult("sector_block_structure", n, float(sector_leak), 1e-12),
    ]


def check_hamiltonian(n: int, c_grid: Iterable[float] = DEFAULT_C_GRID, cap: int = ORACLE_CAP) -> List[SuiteResult]:
    spectral, block_dev, tridiag = 0.0, 0.0, 0.0
    for c in c_grid:
        params = ModelParams(n, c)
        dense = full_hamiltonian_oracle(params, cap)
        evals_dense = np.linalg.eigvalsh(dense.matrix)
        evals_blocks = []
        for m in range(-n, n + 1):
            block = block_hamiltonian(params, m)
            evals_blocks.append(np.linalg.eigvalsh(block.to_dense()))
            proj = project(dense, block.basis)
            block_dev = max(block_dev, np.abs(proj - block.to_dense()).max())
            far = np.triu(np.abs(proj), 2)
            tridiag = max(tridiag, far.max(initial=0.0))
        union = np.sort(np.concatenate(evals_blocks))
        spectral = max(spectral, np.abs(union - evals_dense).max())
    return [
        SuiteResult("block_spectrum_vs_dense", n, float(spectral), 1e-9),
        SuiteResult("block_vs_projection", n, float(block_dev), 1e-10),
        SuiteResult("block_tridiagonal", n, float(tridiag), 1e-12),
    ]


def check_observables(n: int, c_grid: Iterable[float] = DEFAULT_C_GRID, cap: int = ORACLE_CAP) -> List[SuiteResult]:
    mom, squeeze, qfi, zero_mean, var_form = 0.0, 0.0, 0.0, 0.0, 0.0
    for c in c_grid:
        state = global_ground(ModelParams(n, c)).state
        fast = moments_fixed_m(state)
        ref = oracle_moments(state, cap=cap)
        mom = max(
            mom,
            _rel(fast.a_moment, ref["A"]),
            _rel(fast.b_moment, ref["B"]),
            _rel(fast.c_moment, ref["C"]),
            _rel(fast.q_plus_mean, ref["q_plus_mean"]),
        )
        var_form = max(var_form, _rel(fast.q_plus_var, ref["q_plus_var"]))
        zero_mean = max(zero_mean, abs(ref["sx_mean"]), abs(ref["qyz_mean"]))
        s_fast, s_ref = squeezing_xi_x(fast), squeezing_oracle(state, "x", cap=cap)
        if s_fast.defined != s_ref.defined:
            squeeze = np.inf
        elif s_fast.defined:
            squeeze = max(squeeze, _rel(s_fast.value, s_ref.value))
        qfi = max(qfi, _rel(qfi_max(fast).f_max, qfi_oracle(state, cap=cap).f_max))
    return [
        SuiteResult("moments_vs_oracle", n, float(mom), 1e-9),
        SuiteResult("q_plus_variance_form", n, float(var_form), 1e-9),
        SuiteResult("zero_mean_fixed_m", n, float(zero_mean), 1e-10),
        SuiteResult("squeezing_vs_oracle", n, float(squeeze), 1e-9),
        SuiteResult("qfi_vs_oracle", n, float(qfi), 1e-9),
    ]


def run_all(ns: Sequence[int], c_grid: Iterable[float] = DEFAULT_C_GRID, cap: int = ORACLE_CAP) -> List[SuiteResult]:
    c_grid = tuple(c_grid)
    results: List[SuiteResult] = []
    for n in ns:
        if n > cap:
            raise ResourceError(f"oracle check limited to N <= {cap}, got N={n}")
        results += check_operator_algebra(n, cap)
        results += check_hamiltonian(n, c_grid, cap)
        results += check_observables(n, c_grid, cap)
    return results
