"""Wasserstein complexity of quantum channels.

The complexity of a channel is the largest divergence between a state and its
image.  The maximum runs over a continuum, so it is approximated by
multi-start derivative-free ascent over a factor parametrization of the state
space; reported values are lower bounds on the true maximum.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .cost import build_cost
from .divergence import SelfDistanceCache, divergence
from .errors import DimensionMismatchError, InputError, SolverFailureError
from .linalg import PAULIS, RngStream, hermitize, require_density, require_observables
from .transport import SolverConfig

_TP_TOL = 1e-9
_CONVERGENCE_TOL = 1e-4


@dataclass(frozen=True)
class ChannelSpec:
    """Completely positive trace-preserving map in Kraus form."""

    kraus: tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self):
        if not self.kraus:
            raise InputError("channel needs at least one Kraus operator")
        d = self.kraus[0].shape[0]
        for k in self.kraus:
            if k.shape != (d, d):
                raise DimensionMismatchError("Kraus operators must be square and dimension-uniform")
        total = sum(k.conj().T @ k for k in self.kraus)
        dev = float(np.max(np.abs(total - np.eye(d))))
        if dev > _TP_TOL:
            raise InputError(f"Kraus operators violate trace preservation by {dev:.3e}")

    @property
    def dim(self) -> int:
        return self.kraus[0].shape[0]


@dataclass(frozen=True)
class ComplexityResult:
    value: float
    argmax_state: np.ndarray = field(repr=False)
    restarts_used: int
    converged: bool


@dataclass(frozen=True)
class SubadditivityReport:
    complexity_first: float
    complexity_second: float
    complexity_composed: float
    slack: float
    warning: bool


def apply_channel(phi: ChannelSpec, rho) -> np.ndarray:
    """Kraus action sum_i K_i rho K_i^dagger."""
    rho = require_density(rho, "rho")
    if rho.shape[0] != phi.dim:
        raise DimensionMismatchError(f"state dimension {rho.shape[0]} != channel dimension {phi.dim}")
    out = np.zeros_like(rho)
    for k in phi.kraus:
        out = out + k @ rho @ k.conj().T
    return hermitize(out)


def compose(phi_outer: ChannelSpec, phi_inner: ChannelSpec) -> ChannelSpec:
    """Concatenation: apply ``phi_inner`` first, then ``phi_outer``."""
    if phi_outer.dim != phi_inner.dim:
        raise DimensionMismatchError("composed channels must share one dimension")
    return ChannelSpec(kraus=tuple(a @ b for a in phi_outer.kraus for b in phi_inner.kraus))


def tensor_product(phi_a: ChannelSpec, phi_b: ChannelSpec) -> ChannelSpec:
    """Channel acting as phi_a on the first factor and phi_b on the second."""
    return ChannelSpec(kraus=tuple(np.kron(a, b) for a in phi_a.kraus for b in phi_b.kraus))


def identity_channel(dim: int) -> ChannelSpec:
    return ChannelSpec(kraus=(np.eye(dim, dtype=complex),))


def unitary_channel(u) -> ChannelSpec:
    u = np.asarray(u, dtype=complex)
    if np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) > _TP_TOL:
        raise InputError("matrix is not unitary")
    return ChannelSpec(kraus=(u,))


def depolarizing_channel(p: float) -> ChannelSpec:
    """Single-qubit rho -> (1 - p) rho + p I/2."""
    if not 0.0 <= p <= 4.0 / 3.0:
        raise InputError(f"depolarizing strength must lie in [0, 4/3], got {p!r}")
    kraus = [np.sqrt(1.0 - 3.0 * p / 4.0) * np.eye(2, dtype=complex)]
    kraus += [np.sqrt(p / 4.0) * s for s in PAULIS]
    return ChannelSpec(kraus=tuple(k for k in kraus if np.max(np.abs(k)) > 0))


def dephasing_channel(p: float) -> ChannelSpec:
    """Single-qubit rho -> (1 - p) rho + p sigma_3 rho sigma_3."""
    if not 0.0 <= p <= 1.0:
        raise InputError(f"dephasing strength must lie in [0, 1], got {p!r}")
    kraus = [np.sqrt(1.0 - p) * np.eye(2, dtype=complex), np.sqrt(p) * PAULIS[2]]
    return ChannelSpec(kraus=tuple(k for k in kraus if np.max(np.abs(k)) > 0))


def _state_from_params(x: np.ndarray, dim: int) -> np.ndarray:
    half = dim * dim
    factor = (x[:half] + 1j * x[half:]).reshape(dim, dim)
    gram = factor @ factor.conj().T
    trace = float(np.trace(gram).real)
    if trace < 1e-14:
        return np.eye(dim, dtype=complex) / dim
    # Snap nearly vanishing eigenvalues to zero: exactly rank-deficient states
    # solve through the transport layer's support reduction, while eigenvalues
    # in the 1e-12..1e-7 twilight leave the interior-point method short of its
    # tolerances.  Nelder-Mead's initial simplex perturbs pure seeds by
    # 2.5e-4 per parameter, i.e. ~6e-8 in the spectrum, so the snap threshold
    # must sit above that.
    w, v = np.linalg.eigh(hermitize(gram / trace))
    w = np.where(w > w[-1] * 1e-6, w, 0.0)
    return hermitize((v * (w / np.sum(w))) @ v.conj().T)


def _params_from_state(rho: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(hermitize(rho))
    factor = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    return np.concatenate([factor.real.ravel(), factor.imag.ravel()])


def _default_seed_states(dim: int, restarts: int, rng: RngStream) -> list[np.ndarray]:
    seeds = [np.eye(dim, dtype=complex) / dim]
    for k in range(dim):
        e = np.zeros((dim, dim), dtype=complex)
        e[k, k] = 1.0
        seeds.append(e)
    index = 0
    while len(seeds) < restarts:
        gen = RngStream(rng.seed, rng.stream + index).generator()
        x = gen.normal(size=(dim, dim)) + 1j * gen.normal(size=(dim, dim))
        gram = x @ x.conj().T
        seeds.append(hermitize(gram / np.trace(gram).real))
        index += 1
    return seeds[:restarts]


def wasserstein_complexity(
    phi: ChannelSpec,
    observables,
    restarts: int = 16,
    cfg: SolverConfig | None = None,
    rng: RngStream = RngStream(0),
    seed_states=(),
    maxfev: int = 300,
) -> ComplexityResult:
    """Approximate max over states of the divergence between rho and phi(rho).

    Multi-start Nelder-Mead over the 2 dim^2 real parameters of a factor L
    with rho = L L* / tr(L L*).  Restart seeds: the maximally mixed state,
    the computational basis states, then Wishart draws; ``seed_states`` adds
    caller-chosen extra restarts.  The result is a lower bound on the true
    maximum; each restart ends at least as high as its own starting value.
    """
    if restarts < 1:
        raise InputError("restarts must be >= 1")
    obs = require_observables(observables)
    if obs[0].shape[0] != phi.dim:
        raise DimensionMismatchError("observables and channel must share one dimension")
    cfg = cfg or SolverConfig()
    cost = build_cost(obs)
    cache = SelfDistanceCache()
    dim = phi.dim

    def objective(x: np.ndarray) -> float:
        rho = _state_from_params(x, dim)
        try:
            return -divergence(rho, apply_channel(phi, rho), obs, cfg, cache, cost).value
        except SolverFailureError:
            # A stalled solve marks the state as worthless to the search; the
            # reported complexity stays a valid lower bound.
            return 0.0

    starts = [np.asarray(require_density(s, "seed state"), dtype=complex) for s in seed_states]
    starts += _default_seed_states(dim, restarts, rng)
    finals: list[tuple[float, np.ndarray]] = []
    for rho0 in starts:
        x0 = _params_from_state(rho0)
        initial = -objective(x0)
        res = minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={"maxfev": maxfev, "xatol": 1e-5, "fatol": 1e-8},
        )
        if -res.fun >= initial:
            finals.append((float(-res.fun), _state_from_params(res.x, dim)))
        else:
            finals.append((float(initial), rho0))

    finals.sort(key=lambda t: t[0], reverse=True)
    best_state = finals[0][1]
    # Re-evaluate through an independent divergence call so the stored value
    # and state are consistent by construction.
    value = divergence(best_state, apply_channel(phi, best_state), obs, cfg, cost=cost).value
    converged = len(finals) >= 2 and abs(finals[0][0] - finals[1][0]) <= _CONVERGENCE_TOL
    return ComplexityResult(
        value=value,
        argmax_state=best_state,
        restarts_used=len(finals),
        converged=converged,
    )


def subadditivity_report(
    phi1: ChannelSpec,
    phi2: ChannelSpec,
    observables,
    restarts: int = 16,
    cfg: SolverConfig | None = None,
    rng: RngStream = RngStream(0),
    maxfev: int = 300,
) -> SubadditivityReport:
    """Slack C(phi1) + C(phi2) - C(phi2 o phi1) of the concatenation bound.

    The composed channel's best state seeds the single-channel searches (and
    its image seeds the second), so a negative slack beyond tolerance flags
    optimizer shortfall rather than a mathematical violation.
    """
    if phi1.dim != phi2.dim:
        raise DimensionMismatchError("channels must share one dimension")
    composed = wasserstein_complexity(
        compose(phi2, phi1), observables, restarts, cfg, RngStream(rng.seed, rng.stream), maxfev=maxfev
    )
    chain_state = composed.argmax_state
    first = wasserstein_complexity(
        phi1,
        observables,
        restarts,
        cfg,
        RngStream(rng.seed, rng.stream + 1000),
        seed_states=(chain_state,),
        maxfev=maxfev,
    )
    second = wasserstein_complexity(
        phi2,
        observables,
        restarts,
        cfg,
        RngStream(rng.seed, rng.stream + 2000),
        seed_states=(apply_channel(phi1, chain_state),),
        maxfev=maxfev,
    )
    slack = first.value + second.value - composed.value
    return SubadditivityReport(
        complexity_first=first.value,
        complexity_second=second.value,
        complexity_composed=composed.value,
        slack=slack,
        warning=slack < -5e-4,
    )
