"""Quadratic quantum Wasserstein distances and divergences via semidefinite programming.

Core objects are plain complex numpy arrays (states, observables, couplings)
plus small frozen dataclasses for structured results.  Public surface:

* :mod:`qwass.linalg`      - Hermitian/density validation, partial traces,
  PSD square roots, orthonormal Hermitian bases, reproducible sampling
* :mod:`qwass.cost`        - quadratic cost operators on the doubled space
* :mod:`qwass.transport`   - primal/dual transport solves and closed forms
* :mod:`qwass.divergence`  - Wasserstein divergence and triangle gaps
* :mod:`qwass.qubit`       - Bloch-representation closed forms
* :mod:`qwass.bounds`      - Hellinger-type lower bound
* :mod:`qwass.experiments` - lattice scan, random sweeps, gap surfaces
* :mod:`qwass.channels`    - Wasserstein complexity of channels
* :mod:`qwass.cli`         - command-line front end
"""

__version__ = "0.1.0"

from .bounds import energy, hellinger_lower_bound
from .channels import (
    ChannelSpec,
    ComplexityResult,
    apply_channel,
    compose,
    dephasing_channel,
    depolarizing_channel,
    identity_channel,
    subadditivity_report,
    tensor_product,
    unitary_channel,
    wasserstein_complexity,
)
from .cost import CostOperator, build_cost, pauli_product_set, symmetric_cost
from .divergence import (
    DivergenceValue,
    GapRecord,
    SelfDistanceCache,
    divergence,
    triangle_gap,
)
from .errors import (
    ConcavityViolationError,
    DimensionMismatchError,
    InputError,
    NeitherPureError,
    NotDensityError,
    NotHermitianError,
    NotPsdError,
    ObservableNotPsdError,
    OutsideBallError,
    QwassError,
    SolverFailureError,
)
from .experiments import (
    LatticeResult,
    LatticeSpec,
    SurfaceResult,
    SurfaceSpec,
    SweepResult,
    SweepSpec,
    gap_surface,
    lattice_points,
    lattice_scan,
    min_gap_sweep,
)
from .linalg import (
    PAULIS,
    RngStream,
    hermitian_basis,
    hermitize,
    hs_inner,
    is_pure,
    kron,
    partial_trace,
    random_observable,
    random_state,
    random_unitary,
    require_density,
    require_hermitian,
    require_observables,
    sqrt_psd,
)
from .qubit import (
    bloch_lower_bound,
    triangle_sufficient_condition,
    triangle_sufficient_rate,
    from_bloch,
    sample_bloch_ball,
    symmetric_self_distance_sq,
    to_bloch,
)
from .transport import (
    Coupling,
    SolverConfig,
    TransportResult,
    pure_state_distance_sq,
    self_distance_sq,
    solve_dual,
    solve_primal,
    tensor_coupling,
)
