"""Triangle-inequality experiment protocols.

Three deterministic, seedable protocols:

* ``lattice_scan``   - a qubit triplet gap minimized over the integer Bloch
  lattice (step 1/10, squared radius bound 100 by default),
* ``min_gap_sweep``  - i.i.d. Wishart triplets with fresh random observables
  per sample, minimum gap reported,
* ``gap_surface``    - the four gap-surface scenarios over a planar section of
  the state space, infeasible grid points emitted as missing.

Everything is a pure function of (spec, seed, solver config); samples draw
from counter-based substreams so evaluation order cannot change results.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cost import build_cost, pauli_product_set
from .divergence import GapRecord, SelfDistanceCache, divergence
from .errors import InputError, SolverFailureError
from .linalg import PAULIS, RngStream, SIGMA_0, kron, random_observable, random_state
from .transport import SolverConfig

# Substream layout for one sweep sample or one scenario draw: slots 0..2 are
# the states, slot 3 onward the observables.
_SLOT_RHO = 0
_SLOT_OMEGA = 1
_SLOT_TAU = 2
_SLOT_OBS = 3
_STRIDE = 16


@dataclass(frozen=True)
class LatticeSpec:
    step: float = 0.1
    radius_bound: int = 100

    def __post_init__(self):
        if self.step <= 0:
            raise InputError("step must be positive")
        if self.step ** 2 * self.radius_bound > 1.0 + 1e-9:
            raise InputError("lattice extends outside the closed Bloch ball")


@dataclass(frozen=True)
class SweepSpec:
    dim: int
    samples: int = 4000
    observables_per_sample: int = 3
    rank: int | None = None
    seed: int = 0

    def __post_init__(self):
        if not 2 <= self.dim <= 5:
            raise InputError("sweep dimension must lie in [2, 5]")
        if self.samples < 1:
            raise InputError("samples must be >= 1")
        if self.observables_per_sample < 1 or self.observables_per_sample > _STRIDE - _SLOT_OBS:
            raise InputError(f"observables-per-sample must lie in [1, {_STRIDE - _SLOT_OBS}]")


SURFACE_SCENARIOS = ("c2-deterministic", "c4-deterministic", "c2-random", "c4-random")


@dataclass(frozen=True)
class SurfaceSpec:
    scenario: str
    grid_resolution: int = 41
    seed: int = 0

    def __post_init__(self):
        if self.scenario not in SURFACE_SCENARIOS:
            raise InputError(f"scenario must be one of {SURFACE_SCENARIOS}, got {self.scenario!r}")
        if self.grid_resolution < 2:
            raise InputError("grid resolution must be >= 2")


@dataclass(frozen=True)
class LatticePoint:
    j: int
    k: int
    l: int
    record: GapRecord


@dataclass(frozen=True)
class LatticeResult:
    min_gap: float
    points: tuple[LatticePoint, ...]


@dataclass(frozen=True)
class SweepRecord:
    sample_index: int
    record: GapRecord


@dataclass(frozen=True)
class SweepResult:
    min_gap: float
    records: tuple[SweepRecord, ...]


@dataclass(frozen=True)
class SurfacePoint:
    x: float
    y: float
    gap: float | None  # None marks an infeasible grid point


@dataclass(frozen=True)
class SurfaceResult:
    scenario: str
    points: tuple[SurfacePoint, ...] = field(repr=False)
    grid_x: tuple[float, ...] = field(repr=False)
    grid_y: tuple[float, ...] = field(repr=False)

    @property
    def min_gap(self) -> float:
        return min(p.gap for p in self.points if p.gap is not None)


def lattice_points(spec: LatticeSpec) -> list[tuple[int, int, int]]:
    """Integer triples with j^2 + k^2 + l^2 <= radius bound, lexicographic.

    Membership is integer arithmetic; no floating-point test is involved.
    """
    reach = int(np.floor(np.sqrt(spec.radius_bound)))
    out = []
    for j in range(-reach, reach + 1):
        for k in range(-reach, reach + 1):
            for l in range(-reach, reach + 1):
                if j * j + k * k + l * l <= spec.radius_bound:
                    out.append((j, k, l))
    return out


def _bloch_state(bx: float, by: float, bz: float) -> np.ndarray:
    rho = 0.5 * np.eye(2, dtype=complex)
    for coeff, sigma in zip((bx, by, bz), PAULIS):
        rho = rho + 0.5 * coeff * sigma
    return rho


def _gap_against_fixed_pair(rho, tau, observables, cfg, seed, sampler_tag, dim):
    """Closure evaluating gaps for varying middle states against fixed endpoints."""
    cost = build_cost(observables)
    cache = SelfDistanceCache()
    d_rt = divergence(rho, tau, observables, cfg, cache, cost).value

    def gap_at(omega) -> GapRecord:
        d_rw = divergence(rho, omega, observables, cfg, cache, cost).value
        d_wt = divergence(omega, tau, observables, cfg, cache, cost).value
        return GapRecord(
            d_rho_omega=d_rw,
            d_omega_tau=d_wt,
            d_rho_tau=d_rt,
            gap=d_rw + d_wt - d_rt,
            dim=dim,
            seed=seed,
            sampler_tag=sampler_tag,
        )

    return gap_at


def lattice_scan(
    rho,
    tau,
    observables,
    spec: LatticeSpec = LatticeSpec(),
    cfg: SolverConfig | None = None,
    seed: int = 0,
    sampler_tag: str = "explicit",
) -> LatticeResult:
    """Minimal triangle gap with the middle state running over the Bloch lattice."""
    cfg = cfg or SolverConfig()
    gap_at = _gap_against_fixed_pair(rho, tau, observables, cfg, seed, sampler_tag, dim=2)
    points = []
    for j, k, l in lattice_points(spec):
        omega = _bloch_state(spec.step * j, spec.step * k, spec.step * l)
        try:
            points.append(LatticePoint(j=j, k=k, l=l, record=gap_at(omega)))
        except SolverFailureError as exc:
            raise SolverFailureError(
                f"lattice point (j, k, l) = ({j}, {k}, {l}): {exc}", result=exc.result
            ) from exc
    return LatticeResult(min_gap=min(p.record.gap for p in points), points=tuple(points))


def sweep_triplet(spec: SweepSpec, index: int):
    """States and observables of one sweep sample, from its own substreams."""
    rank = spec.rank if spec.rank is not None else spec.dim
    base = index * _STRIDE
    rho = random_state(spec.dim, rank, RngStream(spec.seed, base + _SLOT_RHO))
    omega = random_state(spec.dim, rank, RngStream(spec.seed, base + _SLOT_OMEGA))
    tau = random_state(spec.dim, rank, RngStream(spec.seed, base + _SLOT_TAU))
    observables = [
        random_observable(spec.dim, RngStream(spec.seed, base + _SLOT_OBS + i))
        for i in range(spec.observables_per_sample)
    ]
    return rho, omega, tau, observables


def min_gap_sweep(spec: SweepSpec, cfg: SolverConfig | None = None) -> SweepResult:
    """Minimum triangle gap over i.i.d. Wishart triplets with random observables."""
    cfg = cfg or SolverConfig()
    rank = spec.rank if spec.rank is not None else spec.dim
    tag = f"wishart(rank={rank})+{spec.observables_per_sample}obs"
    records = []
    for index in range(spec.samples):
        rho, omega, tau, observables = sweep_triplet(spec, index)
        cost = build_cost(observables)
        cache = SelfDistanceCache()
        try:
            d_rw = divergence(rho, omega, observables, cfg, cache, cost).value
            d_wt = divergence(omega, tau, observables, cfg, cache, cost).value
            d_rt = divergence(rho, tau, observables, cfg, cache, cost).value
        except SolverFailureError as exc:
            raise SolverFailureError(f"sweep sample {index}: {exc}", result=exc.result) from exc
        records.append(
            SweepRecord(
                sample_index=index,
                record=GapRecord(
                    d_rho_omega=d_rw,
                    d_omega_tau=d_wt,
                    d_rho_tau=d_rt,
                    gap=d_rw + d_wt - d_rt,
                    dim=spec.dim,
                    seed=spec.seed,
                    sampler_tag=tag,
                ),
            )
        )
    return SweepResult(min_gap=min(r.record.gap for r in records), records=tuple(records))


def _two_qubit_state(coeffs: dict[tuple[int, int], float]) -> np.ndarray:
    singles = (SIGMA_0,) + PAULIS
    rho = 0.25 * np.eye(4, dtype=complex)
    for (j, k), c in coeffs.items():
        rho = rho + 0.25 * c * kron(singles[j], singles[k])
    return rho


def _surface_setup(spec: SurfaceSpec):
    """States, observables, middle-state builder, and grid bound per scenario."""
    if spec.scenario == "c2-deterministic":
        rho = _bloch_state(1 / np.sqrt(2.0), 1 / np.sqrt(3.0), 0.0)
        tau = _bloch_state(0.0, 1 / 3.0, 1 / 4.0)
        observables = [PAULIS[0], PAULIS[2]]
        z_section = 1 / np.sqrt(2.0)
        omega_at = lambda x, y: _bloch_state(x, y, z_section)
        bound = np.sqrt(1.0 - z_section ** 2)
    elif spec.scenario == "c2-random":
        rho = random_state(2, 2, RngStream(spec.seed, _SLOT_RHO))
        tau = random_state(2, 2, RngStream(spec.seed, _SLOT_TAU))
        observables = [random_observable(2, RngStream(spec.seed, _SLOT_OBS + i)) for i in range(3)]
        z_section = 1 / 5.0
        omega_at = lambda x, y: _bloch_state(x, y, z_section)
        bound = np.sqrt(1.0 - z_section ** 2)
    else:
        rho = _two_qubit_state({(1, 1): 1 / 10.0, (2, 0): 1 / 5.0, (3, 0): 3 / 10.0})
        tau = _two_qubit_state({(0, 3): 3 / 10.0, (1, 3): 1 / 5.0, (3, 0): 1 / 10.0})
        fixed = {
            (1, 0): 1 / 10.0,
            (1, 1): 1 / 10.0,
            (1, 2): 1 / 10.0,
            (2, 0): 3 / 10.0,
            (2, 2): 1 / 5.0,
        }
        omega_at = lambda x, y: _two_qubit_state({**fixed, (0, 1): x, (0, 2): y})
        bound = 1.0
        if spec.scenario == "c4-deterministic":
            observables = list(pauli_product_set(2))
        else:
            rho = random_state(4, 4, RngStream(spec.seed, _SLOT_RHO))
            tau = random_state(4, 4, RngStream(spec.seed, _SLOT_TAU))
            observables = [random_observable(4, RngStream(spec.seed, _SLOT_OBS + i)) for i in range(3)]
    return rho, tau, observables, omega_at, bound


def gap_surface(spec: SurfaceSpec, cfg: SolverConfig | None = None) -> SurfaceResult:
    """Triangle gap over a planar grid of middle states.

    A grid point is admissible when the constructed middle state has minimum
    eigenvalue >= 0 (within roundoff); inadmissible points carry gap None.
    """
    cfg = cfg or SolverConfig()
    rho, tau, observables, omega_at, bound = _surface_setup(spec)
    dim = np.asarray(rho).shape[0]
    gap_at = _gap_against_fixed_pair(
        rho, tau, observables, cfg, spec.seed, spec.scenario, dim=dim
    )
    axis = np.linspace(-bound, bound, spec.grid_resolution)
    points = []
    for x in axis:
        for y in axis:
            omega = omega_at(float(x), float(y))
            if float(np.linalg.eigvalsh(omega)[0]) < -1e-12:
                points.append(SurfacePoint(x=float(x), y=float(y), gap=None))
                continue
            try:
                points.append(SurfacePoint(x=float(x), y=float(y), gap=gap_at(omega).gap))
            except SolverFailureError as exc:
                raise SolverFailureError(
                    f"surface point (x, y) = ({x!r}, {y!r}): {exc}", result=exc.result
                ) from exc
    return SurfaceResult(
        scenario=spec.scenario,
        points=tuple(points),
        grid_x=tuple(float(v) for v in axis),
        grid_y=tuple(float(v) for v in axis),
    )
