"""Hellinger-type lower bound on the transport cost for nonnegative observables.

For PSD observables the cost operator dominates a difference of arithmetic and
geometric means, which bounds every coupling's cost from below by
2((alpha + beta)/2 - sqrt(alpha beta)) with second-moment traces
alpha = tr(sum_j A_j^2 omega) and beta = tr(sum_j A_j^2 rho).
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError, ObservableNotPsdError
from .linalg import require_density, require_observables

_PSD_TOL = -1e-10


def _second_moment(observables) -> np.ndarray:
    obs = require_observables(observables)
    total = np.zeros_like(obs[0])
    for a in obs:
        total = total + a @ a
    return total


def hellinger_inputs(rho, omega, observables) -> tuple[float, float]:
    """Second-moment traces (alpha, beta) = (tr(sum A^2 omega), tr(sum A^2 rho)).

    Tiny negative values from roundoff are clamped to 0.
    """
    rho = require_density(rho, "rho")
    omega = require_density(omega, "omega")
    sq = _second_moment(observables)
    if sq.shape[0] != rho.shape[0] or rho.shape != omega.shape:
        raise DimensionMismatchError("states and observables must share one dimension")
    alpha = float(np.trace(sq @ omega).real)
    beta = float(np.trace(sq @ rho).real)
    if alpha < _PSD_TOL or beta < _PSD_TOL:
        raise ObservableNotPsdError(f"second-moment traces negative: alpha={alpha!r}, beta={beta!r}")
    return max(0.0, alpha), max(0.0, beta)


def hellinger_lower_bound(rho, omega, observables) -> float:
    """2((alpha+beta)/2 - sqrt(alpha beta)); requires every observable PSD.

    The bound holds for every coupling, hence for the primal optimum.  When
    alpha or beta vanishes the tangent-point optimizer degenerates but the
    closed form remains valid and returns alpha + beta.
    """
    obs = require_observables(observables)
    for i, a in enumerate(obs):
        wmin = float(np.linalg.eigvalsh(a)[0])
        if wmin < _PSD_TOL:
            raise ObservableNotPsdError(
                f"observable {i} has eigenvalue {wmin:.3e} below {_PSD_TOL:.1e}"
            )
    alpha, beta = hellinger_inputs(rho, omega, obs)
    return (np.sqrt(alpha) - np.sqrt(beta)) ** 2


def energy(rho, observables) -> float:
    """Total second moment sum_j tr(A_j rho A_j) of a state.

    Coincides with the Hellinger beta-trace for Hermitian observables.
    """
    rho = require_density(rho, "rho")
    sq = _second_moment(observables)
    if sq.shape[0] != rho.shape[0]:
        raise DimensionMismatchError("state and observables must share one dimension")
    return float(np.trace(sq @ rho).real)
