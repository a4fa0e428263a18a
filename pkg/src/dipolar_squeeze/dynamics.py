"""Spin-mixing dynamics in the ``m = 0`` sector by exact spectral propagation.

States are ``sum_k g_k(t) |k, N-2k, k>``; the propagator
``V exp(-i Lambda t) V^T`` is applied at each requested time directly, so
there is no step-size error and long-time averages stay exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError, NumericalError
from .fock import ModelParams, StateVector, subspace_basis
from .ground import named_state
from .hamiltonian import TridiagonalBlock, block_hamiltonian
from .observables import UNDEFINED_TOL

#: Number of time samples propagated per matrix product. Fixed so results
#: do not depend on how work is split across processes.
CHUNK = 256

DEFAULT_SAMPLES = 4001
DEFAULT_WINDOW = (1.0, 10.0)
DEFAULT_WINDOW_SAMPLES = 2000


@dataclass(frozen=True, eq=False)
class TraceObservables:
    """Per-time observables. ``xi2`` is NaN where the squeezing is undefined."""

    xi2: np.ndarray
    f_max: np.ndarray
    dq_plus_sq: np.ndarray
    n0_frac: np.ndarray
    n1_frac: np.ndarray

    @property
    def xi2_db(self) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(self.xi2 > 0, 10 * np.log10(self.xi2), np.nan)

    @staticmethod
    def concatenate(parts: Sequence["TraceObservables"]) -> "TraceObservables":
        names = ("xi2", "f_max", "dq_plus_sq", "n0_frac", "n1_frac")
        return TraceObservables(*(np.concatenate([getattr(p, n) for p in parts]) for n in names))


@dataclass(frozen=True, eq=False)
class DynamicsTrace:
    params: ModelParams
    initial_kind: str
    times: np.ndarray
    observables: TraceObservables
    states: Optional[np.ndarray] = field(default=None, repr=False)

    def state_at(self, i: int) -> StateVector:
        if self.states is None:
            raise DomainError("trace was computed without keeping states")
        return StateVector(subspace_basis(self.params.n_atoms, 0), self.states[i])


class SpectralPropagator:
    """Full eigendecomposition of one tridiagonal block."""

    def __init__(self, block: TridiagonalBlock):
        self.block = block
        try:
            self.eigenvalues, self.eigenvectors = np.linalg.eigh(block.to_dense())
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"eigendecomposition failed: {exc}") from exc

    def coefficients(self, g0: np.ndarray) -> np.ndarray:
        return self.eigenvectors.T @ np.asarray(g0, dtype=complex)

    def evolve(self, g0: np.ndarray, times: np.ndarray) -> np.ndarray:
        """Amplitudes of shape ``(len(times), dim)``."""
        coeff = self.coefficients(g0)
        times = np.asarray(times, dtype=float)
        out = np.empty((times.size, self.block.dim), dtype=complex)
        for start in range(0, times.size, CHUNK):
            t = times[start:start + CHUNK]
            phases = np.exp(-1j * np.outer(self.eigenvalues, t)) * coeff[:, None]
            out[start:start + CHUNK] = (self.eigenvectors @ phases).T
        return out


def trace_observables(n_atoms: int, amplitudes: np.ndarray) -> TraceObservables:
    """Squeezing, QFI and populations for rows of ``m = 0`` amplitudes."""
    g = np.atleast_2d(np.asarray(amplitudes, dtype=complex))
    n = float(n_atoms)
    k = np.arange(g.shape[1], dtype=float)
    p = np.abs(g) ** 2
    n1 = p @ k
    a_prime = p @ ((k + 1) * (n - 2 * k) + (n - 2 * k + 1) * k)
    kk = k[1:]
    weights = kk * np.sqrt((n - 2 * kk + 2) * (n - 2 * kk + 1))
    b_prime = np.sum(np.conj(g[:, 1:]) * g[:, :-1] * weights, axis=1)
    b_abs = np.abs(b_prime)

    denom = np.abs(3 * n1 - n)
    undefined = 2 * denom < UNDEFINED_TOL * n
    with np.errstate(divide="ignore", invalid="ignore"):
        xi2 = np.where(undefined, np.nan, (a_prime - 2 * b_abs) / denom)

    # Var(Q_+) at m=0: 36 Var(k) + 2 <k(k+1)>
    var_k = np.sum(p * (k[None, :] - n1[:, None]) ** 2, axis=1)
    dq2 = 36 * var_k + 2 * (p @ (k * (k + 1)))
    f_max = np.maximum(4 * (a_prime + 2 * b_abs), dq2)
    return TraceObservables(xi2, f_max, dq2, (p @ (n - 2 * k)) / n, n1 / n)


def _initial_vector(params: ModelParams, initial) -> Tuple[np.ndarray, str]:
    if isinstance(initial, StateVector):
        if initial.m != 0 or initial.n_atoms != params.n_atoms:
            raise DomainError("dynamics requires an initial state in the m=0 sector of the same N")
        return np.asarray(initial.amplitudes), "custom"
    state = named_state(initial, params.n_atoms)
    if state.m != 0:
        raise DomainError(f"initial state {initial!r} is not in the m=0 sector")
    return np.asarray(state.amplitudes), state_kind_name(initial)


def state_kind_name(kind) -> str:
    return str(getattr(kind, "value", kind)).replace("-", "_")


def evolve(params: ModelParams, initial, times, keep_states: bool = True,
           propagator: Optional[SpectralPropagator] = None) -> DynamicsTrace:
    """Evolve an ``m = 0`` initial state (a StateVector, or ``"polar"``/``"twin_fock"``)."""
    g0, kind = _initial_vector(params, initial)
    times = np.asarray(times, dtype=float)
    if times.ndim != 1:
        raise DomainError("times must be a one-dimensional array")
    if propagator is None:
        propagator = SpectralPropagator(block_hamiltonian(params, 0))
    parts, kept = [], []
    for start in range(0, times.size, CHUNK):
        amps = propagator.evolve(g0, times[start:start + CHUNK])
        parts.append(trace_observables(params.n_atoms, amps))
        if keep_states:
            kept.append(amps)
    obs = TraceObservables.concatenate(parts) if parts else trace_observables(params.n_atoms, np.empty((0, g0.size)))
    states = np.concatenate(kept) if (keep_states and kept) else None
    return DynamicsTrace(params, kind, times, obs, states)


def energy_expectation(block: TridiagonalBlock, amplitudes: np.ndarray) -> np.ndarray:
    g = np.atleast_2d(amplitudes)
    hg = np.array([block.matvec(row) for row in g])
    return np.real(np.sum(np.conj(g) * hg, axis=1))


@dataclass(frozen=True)
class TimeAverage:
    xi2: Optional[float]
    xi2_db: Optional[float]
    n0_frac: float
    f_max: float
    undefined_count: int
    n_samples: int


def time_average(trace: DynamicsTrace, window: Tuple[float, float] = DEFAULT_WINDOW,
                 min_samples: int = 100) -> TimeAverage:
    """Means over the samples with ``t_lo <= t <= t_hi``; undefined squeezing samples are skipped."""
    lo, hi = window
    if not lo < hi:
        raise DomainError(f"empty averaging window {window}")
    t = trace.times
    if t.size == 0 or lo < t.min() - 1e-12 or hi > t.max() + 1e-12:
        raise DomainError(f"window {window} is not inside the trace time span")
    mask = (t >= lo) & (t <= hi)
    count = int(mask.sum())
    if count < min_samples:
        raise DomainError(f"window {window} holds {count} samples, need at least {min_samples}")
    obs = trace.observables
    xi2 = obs.xi2[mask]
    defined = ~np.isnan(xi2)
    xi2_mean = float(xi2[defined].mean()) if defined.any() else None
    xi2_db = 10 * np.log10(xi2_mean) if xi2_mean is not None and xi2_mean > 0 else None
    return TimeAverage(
        xi2=xi2_mean,
        xi2_db=None if xi2_db is None else float(xi2_db),
        n0_frac=float(obs.n0_frac[mask].mean()),
        f_max=float(obs.f_max[mask].mean()),
        undefined_count=int((~defined).sum()),
        n_samples=count,
    )


def steady_average(params: ModelParams, initial, window: Tuple[float, float] = DEFAULT_WINDOW,
                   samples: int = DEFAULT_WINDOW_SAMPLES) -> TimeAverage:
    """Quasi-steady averages from ``samples`` uniform times spanning the window."""
    times = np.linspace(window[0], window[1], samples)
    return time_average(evolve(params, initial, times, keep_states=False), window)
