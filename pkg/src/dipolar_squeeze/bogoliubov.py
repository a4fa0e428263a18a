"""Bogoliubov (SU(1,1)) description of short-time dynamics from the polar state.

Replacing ``a_0`` by ``sqrt(N)`` leaves ``H_eff = alpha K_z + beta K_x`` for
the ``m_f = +-1`` pair, with ``K_z = (n_1 + n_-1 + 1)/2`` and
``K_x = (a_1^dag a_-1^dag + a_1 a_-1)/2``. The evolution is periodic and
bounded only for ``alpha^2 > beta^2``, which holds for ``c > 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import DomainError, NumericalError
from .fock import ModelParams, Sign

GAMMA_GUARD = 1e-12


@dataclass(frozen=True)
class BogoliubovParams:
    alpha: float
    beta: float
    theta: float
    regime_valid: bool

    @property
    def frequency(self) -> float:
        """``sqrt(alpha^2 - beta^2)``; NaN outside the valid regime."""
        return 2.0 * self.theta


def effective_params(params: ModelParams) -> BogoliubovParams:
    if params.sign is not Sign.ANTIFERROMAGNETIC:
        raise DomainError("Bogoliubov expansion is defined here for the antiferromagnetic sign only")
    n, c = params.n_atoms, params.c
    alpha = 2.0 * ((1 - c) * (2 * n - 1) - 3 * c)
    beta = 4.0 * (1 - c) * n
    gap = alpha * alpha - beta * beta
    valid = gap > 0
    theta = 0.5 * math.sqrt(gap) if valid else math.nan
    return BogoliubovParams(alpha, beta, theta, valid)


def _require_valid(bp: BogoliubovParams) -> None:
    if not bp.regime_valid:
        raise DomainError(
            f"Bogoliubov solution needs alpha^2 > beta^2 (alpha={bp.alpha}, beta={bp.beta})"
        )


def _gammas(bp: BogoliubovParams, t):
    _require_valid(bp)
    t = np.asarray(t, dtype=float)
    cos2 = np.cos(bp.theta * t) ** 2
    denom = bp.alpha**2 - bp.beta**2 * cos2
    gamma = np.abs(bp.beta * np.sin(bp.theta * t)) / np.sqrt(denom)
    gamma1 = (bp.alpha**2 - bp.beta**2) / denom
    if np.any(gamma > 1 - GAMMA_GUARD):
        raise NumericalError("Gamma too close to 1; Bogoliubov moments overflow")
    return gamma, gamma1


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def k_expectations(bp: BogoliubovParams, t):
    """``(<K_z>, |<K_+>|)`` at time(s) ``t``."""
    gamma, gamma1 = _gammas(bp, t)
    one_minus = (1 - gamma) * (1 + gamma)
    kz = gamma1 * (1 + gamma**2) / (2 * one_minus**2)
    kplus = gamma1 * gamma / one_minus**2
    return _scalar(kz), _scalar(kplus)


def xi2_qfi_approx(bp: BogoliubovParams, n_atoms: int, t) -> Tuple:
    """Closed forms ``xi^2 = Gamma_1/(1+Gamma)^2`` and ``F = 4N Gamma_1/(1-Gamma)^2``."""
    gamma, gamma1 = _gammas(bp, t)
    return _scalar(gamma1 / (1 + gamma) ** 2), _scalar(4 * n_atoms * gamma1 / (1 - gamma) ** 2)


def xi2_qfi_from_k(bp: BogoliubovParams, n_atoms: int, t) -> Tuple:
    """Same quantities via ``2<K_z> - 2|<K_+>|`` and ``8N(<K_z> + |<K_+>|)``."""
    kz, kp = k_expectations(bp, t)
    kz, kp = np.asarray(kz), np.asarray(kp)
    return _scalar(2 * kz - 2 * kp), _scalar(8 * n_atoms * (kz + kp))


def optimal_time(bp: BogoliubovParams) -> float:
    _require_valid(bp)
    return math.pi / bp.frequency


def optimal_values(bp: BogoliubovParams, n_atoms: int) -> Tuple[float, float, float]:
    """``(xi2_min, F(t_opt), t_opt)``."""
    _require_valid(bp)
    a, b = abs(bp.alpha), abs(bp.beta)
    xi2_min = (a - b) / (a + b)
    return xi2_min, 4 * n_atoms / xi2_min, optimal_time(bp)


def optimal_xi2_closed_form(n_atoms: int, c: float) -> float:
    """``(2c+1) / (4N(c-1) + 2c + 1)``, the c > 1 simplification of ``xi2_min``."""
    return (2 * c + 1) / (4 * n_atoms * (c - 1) + 2 * c + 1)
