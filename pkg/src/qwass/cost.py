"""Quadratic cost operators on the doubled space.

A collection of observables A_1..A_k on a d-dimensional system generates the
cost C = sum_j (A_j (x) I - I (x) B_j)^2 on the d^2-dimensional doubled space,
with B_j the computational-basis transpose of A_j when the transpose
convention is active (the default) and A_j itself otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np

from .errors import NotPsdError
from .linalg import (
    PAULIS,
    SIGMA_0,
    hermitize,
    kron,
    require_observables,
)

COST_PSD_TOL = -1e-9


@dataclass(frozen=True)
class CostOperator:
    """PSD cost matrix on the doubled space, together with its provenance.

    dim is the single-system dimension; matrix is dim^2 x dim^2.
    """

    dim: int
    matrix: np.ndarray = field(repr=False)
    observables: tuple[np.ndarray, ...] = field(repr=False)
    use_transpose: bool = True

    def __post_init__(self):
        n = self.dim * self.dim
        if self.matrix.shape != (n, n):
            raise NotPsdError(
                f"cost matrix shape {self.matrix.shape} does not match dim^2 = {n}"
            )
        wmin = float(np.linalg.eigvalsh(self.matrix)[0])
        if wmin < COST_PSD_TOL:
            raise NotPsdError(f"cost matrix has eigenvalue {wmin:.3e} below {COST_PSD_TOL:.1e}")
        self.matrix.setflags(write=False)


def build_cost(observables, use_transpose: bool = True) -> CostOperator:
    """Assemble sum_j (A_j (x) I - I (x) B_j)^2 from an observable collection."""
    obs = require_observables(observables)
    d = obs[0].shape[0]
    eye = np.eye(d, dtype=complex)
    total = np.zeros((d * d, d * d), dtype=complex)
    for a in obs:
        b = a.T if use_transpose else a
        g = kron(a, eye) - kron(eye, b)
        total += g @ g
    return CostOperator(dim=d, matrix=hermitize(total), observables=obs, use_transpose=use_transpose)


@lru_cache(maxsize=1)
def symmetric_cost() -> CostOperator:
    """Qubit cost from all three Pauli matrices; spectrum {0, 8, 8, 8}."""
    return build_cost(PAULIS, use_transpose=True)


@lru_cache(maxsize=None)
def pauli_product_set(num_qubits: int) -> tuple[np.ndarray, ...]:
    """All 4^n - 1 Pauli tensor products (identity string excluded), index-lexicographic."""
    if num_qubits < 1:
        raise ValueError("num_qubits must be >= 1")
    singles = (SIGMA_0,) + PAULIS
    out = []
    for indices in product(range(4), repeat=num_qubits):
        if all(j == 0 for j in indices):
            continue
        m = singles[indices[0]]
        for j in indices[1:]:
            m = kron(m, singles[j])
        m.setflags(write=False)
        out.append(m)
    return tuple(out)
