"""Quantum optimal transport solves and their closed forms.

The primal problem minimizes tr(Pi C) over couplings Pi of (rho, omega): states
on the doubled space whose first marginal is omega and whose second marginal is
rho^T.  The dual maximizes tr(X rho) + tr(Y omega) over Hermitian certificate
pairs with C - Y (x) I - I (x) X^T >= 0.

Before solving, the primal is compressed onto supp(omega) (x) supp(rho^T):
every coupling is supported there, and on that face both marginals are full
rank, which restores strict feasibility and lets the interior-point engine
polish rank-deficient (e.g. pure-state) instances to full accuracy.  The
compression is exact linear algebra, not a shortcut past the SDP.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .cost import CostOperator
from .errors import DimensionMismatchError, NeitherPureError, SolverFailureError
from .linalg import (
    hermitian_basis,
    hermitize,
    is_pure,
    kron,
    require_density,
    require_observables,
    sqrt_psd,
)
from .sdp import SdpProblem, SdpSolution, solve_sdp

_VALUE_CLAMP = -1e-9
_SUPPORT_RTOL = 1e-12


@dataclass(frozen=True)
class SolverConfig:
    gap_tol: float = 1e-8
    feas_tol: float = 1e-8
    max_iter: int = 200

    def __post_init__(self):
        if self.gap_tol <= 0 or self.feas_tol <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class Coupling:
    """State on the doubled space whose marginals are omega and rho^T."""

    matrix: np.ndarray = field(repr=False)
    dims: tuple[int, int]


@dataclass(frozen=True)
class TransportResult:
    squared_distance: float
    coupling: Coupling | None
    certificates: tuple[np.ndarray, np.ndarray] | None  # (X, Y)
    duality_gap: float
    iterations: int
    status: str


@lru_cache(maxsize=None)
def _marginal_constraints(d1: int, d2: int):
    """Constraint stack pinning both marginals, with the one redundant row dropped.

    Rows: <B_i (x) I, Pi> for every basis element of the first factor, then
    <I (x) B_i, Pi> for every basis element of the second factor except the
    last diagonal unit (implied by the trace of the first marginal).
    """
    basis1 = hermitian_basis(d1)
    basis2 = hermitian_basis(d2)
    eye1 = np.eye(d1, dtype=complex)
    eye2 = np.eye(d2, dtype=complex)
    kept2 = [i for i in range(len(basis2)) if i != d2 - 1]
    ops = [np.kron(b, eye2) for b in basis1]
    ops += [np.kron(eye1, basis2[i]) for i in kept2]
    aop = np.ascontiguousarray(np.stack(ops))
    b1 = np.stack(basis1)
    if kept2:
        b2 = np.stack([basis2[i] for i in kept2])
    else:
        b2 = np.zeros((0, d2, d2), dtype=complex)
    return aop, b1, b2, tuple(kept2)


def _rhs(b1: np.ndarray, b2: np.ndarray, omega: np.ndarray, rho_t: np.ndarray) -> np.ndarray:
    first = np.einsum("kij,ji->k", b1, omega).real
    second = np.einsum("kij,ji->k", b2, rho_t).real
    return np.concatenate([first, second])


def _support(state: np.ndarray) -> np.ndarray:
    """Columns spanning the numerical support (eigenvalues above 1e-12 relative)."""
    w, v = np.linalg.eigh(state)
    keep = w > w[-1] * _SUPPORT_RTOL
    return v[:, keep]


def _solve_face(omega: np.ndarray, rho_t: np.ndarray, cost: np.ndarray, cfg: SolverConfig) -> SdpSolution:
    d1 = omega.shape[0]
    d2 = rho_t.shape[0]
    n = d1 * d2
    aop, b1, b2, _ = _marginal_constraints(d1, d2)
    b = _rhs(b1, b2, omega, rho_t)

    tensor = kron(omega, rho_t)
    lam = float(np.linalg.eigvalsh(tensor)[0])
    x0 = tensor + max(0.0, 1e-3 / n - lam) * np.eye(n)
    # Dual-feasible hint Y = -eta I, X' = 0, giving slack C + eta I.
    eta = max(1.0, float(np.linalg.norm(cost)) / np.sqrt(n))
    y0 = np.zeros(aop.shape[0])
    y0[:d1] = -eta

    return solve_sdp(
        SdpProblem(c=cost, constraints=aop, b=b),
        gap_tol=cfg.gap_tol,
        feas_tol=cfg.feas_tol,
        max_iter=cfg.max_iter,
        x0=x0,
        y0=y0,
    )


def _check_inputs(rho, omega, c: CostOperator):
    rho = require_density(rho, "rho")
    omega = require_density(omega, "omega")
    d = c.dim
    if rho.shape[0] != d or omega.shape[0] != d:
        raise DimensionMismatchError(
            f"states of dimension {rho.shape[0]} and {omega.shape[0]} do not match cost dimension {d}"
        )
    return rho, omega


def _clamp(value: float) -> float:
    value = float(value)
    return 0.0 if _VALUE_CLAMP <= value < 0.0 else value


def tensor_coupling(rho: np.ndarray, omega: np.ndarray) -> np.ndarray:
    """The trivial coupling omega (x) rho^T; always feasible."""
    return kron(omega, rho.T)


def solve_primal(rho, omega, c: CostOperator, cfg: SolverConfig | None = None) -> TransportResult:
    """Minimize tr(Pi C) over couplings of (rho, omega); returns value and coupling."""
    cfg = cfg or SolverConfig()
    rho, omega = _check_inputs(rho, omega, c)
    d = c.dim
    rho_t = rho.T

    p = _support(omega)
    q = _support(rho_t)
    reduced = p.shape[1] < d or q.shape[1] < d
    if reduced:
        embed = kron(p, q)
        omega_r = hermitize(p.conj().T @ omega @ p)
        rho_t_r = hermitize(q.conj().T @ rho_t @ q)
        cost_r = hermitize(embed.conj().T @ c.matrix @ embed)
        sol = _solve_face(omega_r, rho_t_r, cost_r, cfg)
        pi = hermitize(embed @ sol.x @ embed.conj().T)
    else:
        sol = _solve_face(omega, rho_t, c.matrix, cfg)
        pi = sol.x

    if sol.status != "optimal":
        raise SolverFailureError(
            f"primal transport solve did not converge: rel_gap={sol.rel_gap:.2e} "
            f"pinf={sol.primal_infeas:.2e} dinf={sol.dual_infeas:.2e} after {sol.iterations} iterations",
            result=sol,
        )
    return TransportResult(
        squared_distance=_clamp(sol.primal_value),
        coupling=Coupling(matrix=pi, dims=(d, d)),
        certificates=None,
        duality_gap=sol.duality_gap,
        iterations=sol.iterations,
        status=sol.status,
    )


def solve_dual(rho, omega, c: CostOperator, cfg: SolverConfig | None = None) -> TransportResult:
    """Maximize tr(X rho) + tr(Y omega) subject to C - Y (x) I - I (x) X^T >= 0.

    Runs on the full space so the returned certificates are feasible for the
    original constraint; weak duality bounds the value by the primal optimum.
    """
    cfg = cfg or SolverConfig()
    rho, omega = _check_inputs(rho, omega, c)
    d = c.dim
    sol = _solve_face(omega, rho.T, c.matrix, cfg)
    if sol.status != "optimal":
        raise SolverFailureError(
            f"dual transport solve did not converge: rel_gap={sol.rel_gap:.2e} "
            f"pinf={sol.primal_infeas:.2e} dinf={sol.dual_infeas:.2e} after {sol.iterations} iterations",
            result=sol,
        )
    _, b1, _, kept2 = _marginal_constraints(d, d)
    basis = hermitian_basis(d)
    y_first = sol.y[: d * d]
    y_second = sol.y[d * d :]
    cert_y = hermitize(np.tensordot(y_first, np.stack(basis), axes=1))
    coeffs = np.zeros(d * d)
    for pos, idx in enumerate(kept2):
        coeffs[idx] = y_second[pos]
    x_prime = hermitize(np.tensordot(coeffs, np.stack(basis), axes=1))
    cert_x = x_prime.T.copy()
    return TransportResult(
        squared_distance=_clamp(sol.dual_value),
        coupling=None,
        certificates=(cert_x, cert_y),
        duality_gap=sol.duality_gap,
        iterations=sol.iterations,
        status=sol.status,
    )


def pure_state_distance_sq(rho, omega, observables) -> float:
    """Closed-form squared distance when at least one state is pure.

    The coupling set is then the single tensor coupling, so the cost reduces
    to sum_j tr(A_j omega A_j) + tr(A_j rho A_j) - 2 tr(omega A_j) tr(rho A_j).
    """
    rho = require_density(rho, "rho")
    omega = require_density(omega, "omega")
    obs = require_observables(observables)
    if obs[0].shape[0] != rho.shape[0] or rho.shape != omega.shape:
        raise DimensionMismatchError("states and observables must share one dimension")
    if not (is_pure(rho) or is_pure(omega)):
        raise NeitherPureError("pure_state_distance_sq needs at least one pure state")
    total = 0.0
    for a in obs:
        a2 = a @ a
        total += float(np.trace(a2 @ omega).real) + float(np.trace(a2 @ rho).real)
        total -= 2.0 * float(np.trace(omega @ a).real) * float(np.trace(rho @ a).real)
    return max(0.0, total) if total > _VALUE_CLAMP else total


def self_distance_sq(rho, observables) -> float:
    """Squared self-distance sum_j ||A_j sqrt(rho) - sqrt(rho) A_j||_HS^2.

    Realized by the canonical purification; equals
    sum_j tr(2 A_j rho A_j - 2 sqrt(rho) A_j sqrt(rho) A_j).
    """
    rho = require_density(rho, "rho")
    obs = require_observables(observables)
    if obs[0].shape[0] != rho.shape[0]:
        raise DimensionMismatchError("state and observables must share one dimension")
    root = sqrt_psd(rho)
    total = 0.0
    for a in obs:
        comm = a @ root - root @ a
        total += float(np.sum(np.abs(comm) ** 2))
    return max(0.0, total)
