"""Closed-form qubit machinery for the symmetric (all-Pauli) cost.

Bloch-vector representation, the lower bound 4|b_rho - b_omega| on the
squared transport distance, the exact self-distance 4(1 - sqrt(1 - |b|^2)),
and the closed-form sufficient condition certifying the triangle inequality
for a triplet of qubit states.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError, OutsideBallError
from .linalg import PAULIS, RngStream, require_density

BALL_TOL = 1e-10


def _require_qubit(rho, name: str = "state") -> np.ndarray:
    rho = require_density(rho, name=name)
    if rho.shape[0] != 2:
        raise DimensionMismatchError(f"{name} must be 2-dimensional, got {rho.shape[0]}")
    return rho


def to_bloch(rho) -> np.ndarray:
    """Bloch vector b_j = tr(rho sigma_j)."""
    rho = _require_qubit(rho)
    return np.array([float(np.trace(rho @ s).real) for s in PAULIS])


def from_bloch(b) -> np.ndarray:
    """State (I + b . sigma)/2 for |b| <= 1; inverse of to_bloch."""
    b = np.asarray(b, dtype=float)
    if b.shape != (3,):
        raise OutsideBallError(f"Bloch vector must have 3 components, got shape {b.shape}")
    if np.linalg.norm(b) > 1.0 + BALL_TOL:
        raise OutsideBallError(f"Bloch vector has norm {np.linalg.norm(b)!r} > 1")
    rho = 0.5 * np.eye(2, dtype=complex)
    for coeff, sigma in zip(b, PAULIS):
        rho = rho + 0.5 * coeff * sigma
    return rho


def bloch_lower_bound(rho, omega) -> float:
    """4 |b_rho - b_omega|_2, a lower bound on the symmetric-cost squared distance."""
    return 4.0 * float(np.linalg.norm(to_bloch(rho) - to_bloch(omega)))


def symmetric_self_distance_sq(rho) -> float:
    """Exact symmetric-cost self-distance 4(1 - sqrt(1 - |b|^2))."""
    b2 = float(np.sum(to_bloch(rho) ** 2))
    return 4.0 * (1.0 - np.sqrt(max(0.0, 1.0 - min(b2, 1.0))))


def _self_term(b_sq: np.ndarray) -> np.ndarray:
    # 2(1 - sqrt(1 - |b|^2)) for squared norms, clamped into [0, 1].
    return 2.0 * (1.0 - np.sqrt(np.clip(1.0 - b_sq, 0.0, None)))


def triangle_sufficient_condition(b_rho, b_omega, b_tau) -> bool:
    """Closed-form sufficient condition for the symmetric-cost triangle inequality.

    True means the triplet is certified: the divergence chain through omega
    dominates the direct divergence.  False is inconclusive, not a violation.
    """
    return bool(
        triangle_sufficient_condition_bulk(
            np.asarray(b_rho, dtype=float)[None, :],
            np.asarray(b_omega, dtype=float)[None, :],
            np.asarray(b_tau, dtype=float)[None, :],
        )[0]
    )


def triangle_sufficient_condition_bulk(b_rho: np.ndarray, b_omega: np.ndarray, b_tau: np.ndarray) -> np.ndarray:
    """Vectorized condition over (n, 3) stacks of Bloch vectors."""
    for name, b in (("b_rho", b_rho), ("b_omega", b_omega), ("b_tau", b_tau)):
        if np.any(np.einsum("ij,ij->i", b, b) > (1.0 + BALL_TOL) ** 2):
            raise OutsideBallError(f"{name} contains vectors outside the closed unit ball")
    nr = np.einsum("ij,ij->i", b_rho, b_rho)
    nw = np.einsum("ij,ij->i", b_omega, b_omega)
    nt = np.einsum("ij,ij->i", b_tau, b_tau)
    d_rw = 4.0 * np.linalg.norm(b_rho - b_omega, axis=1)
    d_wt = 4.0 * np.linalg.norm(b_omega - b_tau, axis=1)
    dot_rt = np.einsum("ij,ij->i", b_rho, b_tau)

    lhs = 6.0 - 2.0 * dot_rt - d_rw - d_wt + 2.0 * _self_term(nw)
    # Radicands can dip below zero near |delta b| ~ 0; a zero factor makes the
    # right side vanish, so the condition then reduces to the sign of lhs.
    rad1 = np.clip(d_rw - _self_term(nr) - _self_term(nw), 0.0, None)
    rad2 = np.clip(d_wt - _self_term(nw) - _self_term(nt), 0.0, None)
    rhs = 2.0 * np.sqrt(rad1) * np.sqrt(rad2)
    return lhs <= rhs


def sample_bloch_ball(count: int, rng: RngStream) -> np.ndarray:
    """Uniform samples from the solid Bloch ball, shape (count, 3).

    Direction uniform on the sphere, radius the cube root of a uniform draw
    (volume weighting).
    """
    gen = rng.generator()
    direction = gen.normal(size=(count, 3))
    direction /= np.linalg.norm(direction, axis=1)[:, None]
    radius = gen.uniform(size=count) ** (1.0 / 3.0)
    return direction * radius[:, None]


def triangle_sufficient_rate(samples: int, rng: RngStream) -> float:
    """Fraction of uniform-ball triplets satisfying the sufficient condition."""
    b_rho = sample_bloch_ball(samples, RngStream(rng.seed, rng.stream))
    b_omega = sample_bloch_ball(samples, RngStream(rng.seed, rng.stream + 1))
    b_tau = sample_bloch_ball(samples, RngStream(rng.seed, rng.stream + 2))
    return float(np.mean(triangle_sufficient_condition_bulk(b_rho, b_omega, b_tau)))
