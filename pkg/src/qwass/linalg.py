"""Dense complex Hermitian linear algebra.

States, observables, and cost operators are plain complex ``numpy`` arrays;
the functions here validate their contracts (Hermiticity, positivity, unit
trace), build Kronecker products and partial traces, and sample random states
and observables from counter-based reproducible streams.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    DimensionMismatchError,
    NotDensityError,
    NotHermitianError,
    NotPsdError,
)

HERMITIAN_TOL = 1e-12
EIGENVALUE_FLOOR = -1e-10
TRACE_TOL = 1e-10
PURITY_THRESHOLD = 1 - 1e-9


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a

# Pauli matrices sigma_1, sigma_2, sigma_3.
SIGMA_0 = _readonly(np.eye(2, dtype=complex))
SIGMA_1 = _readonly(np.array([[0, 1], [1, 0]], dtype=complex))
SIGMA_2 = _readonly(np.array([[0, -1j], [1j, 0]], dtype=complex))
SIGMA_3 = _readonly(np.array([[1, 0], [0, -1]], dtype=complex))
PAULIS = (SIGMA_1, SIGMA_2, SIGMA_3)


def hermitize(a: np.ndarray) -> np.ndarray:
    """Return the Hermitian part (a + a†)/2."""
    return 0.5 * (a + a.conj().T)


def require_hermitian(a, tol: float = HERMITIAN_TOL, name: str = "matrix") -> np.ndarray:
    """Validate a square complex matrix with a[i,j] = conj(a[j,i]) within tol."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotHermitianError(f"{name} must be square, got shape {a.shape}")
    if a.shape[0] < 1:
        raise NotHermitianError(f"{name} must have dimension >= 1")
    dev = np.max(np.abs(a - a.conj().T))
    if dev > tol:
        raise NotHermitianError(f"{name} deviates from Hermitian by {dev:.3e} (tol {tol:.1e})")
    return a


def require_density(rho, name: str = "state") -> np.ndarray:
    """Validate a density matrix: Hermitian, min eigenvalue >= -1e-10, unit trace."""
    rho = require_hermitian(rho, name=name)
    tr = float(np.trace(rho).real)
    if abs(tr - 1.0) > TRACE_TOL:
        raise NotDensityError(f"{name} has trace {tr!r}, expected 1 within {TRACE_TOL:.1e}")
    wmin = float(np.linalg.eigvalsh(hermitize(rho))[0])
    if wmin < EIGENVALUE_FLOOR:
        raise NotDensityError(f"{name} has eigenvalue {wmin:.3e} below {EIGENVALUE_FLOOR:.1e}")
    return rho


def require_observables(observables, name: str = "observables") -> tuple[np.ndarray, ...]:
    """Validate a nonempty, dimension-uniform, ordered collection of Hermitian matrices."""
    obs = tuple(require_hermitian(a, name=f"{name}[{i}]") for i, a in enumerate(observables))
    if not obs:
        raise DimensionMismatchError(f"{name} must be nonempty")
    dims = {a.shape[0] for a in obs}
    if len(dims) != 1:
        raise DimensionMismatchError(f"{name} mixes dimensions {sorted(dims)}")
    return obs


def is_pure(rho: np.ndarray, threshold: float = PURITY_THRESHOLD) -> bool:
    """A state is treated as pure when its top eigenvalue reaches 1 - 1e-9."""
    return float(np.linalg.eigvalsh(rho)[-1]) >= threshold


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with index convention (i*db + p, j*db + q) -> a[i,j] b[p,q]."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(m, keep: str, dims: tuple[int, int]) -> np.ndarray:
    """Trace out one tensor factor of a matrix on a (d1*d2)-dimensional product space.

    keep="first" returns the d1 x d1 trace over the second factor; keep="second"
    the d2 x d2 trace over the first.  Linear and trace-preserving.
    """
    m = np.asarray(m, dtype=complex)
    d1, d2 = dims
    if m.shape != (d1 * d2, d1 * d2):
        raise DimensionMismatchError(
            f"matrix shape {m.shape} does not match product dimension {d1}*{d2}"
        )
    t = m.reshape(d1, d2, d1, d2)
    if keep == "first":
        return np.einsum("ipjp->ij", t)
    if keep == "second":
        return np.einsum("ipiq->pq", t)
    raise ValueError(f"keep must be 'first' or 'second', got {keep!r}")


def sqrt_psd(m: np.ndarray) -> np.ndarray:
    """Unique PSD square root via spectral decomposition.

    Eigenvalues in [-1e-10, 0) are clamped to 0; anything lower raises.
    """
    m = require_hermitian(m, tol=1e-10, name="sqrt_psd input")
    w, v = np.linalg.eigh(hermitize(m))
    if w[0] < EIGENVALUE_FLOOR:
        raise NotPsdError(f"matrix has eigenvalue {w[0]:.3e} below {EIGENVALUE_FLOOR:.1e}")
    w = np.sqrt(np.clip(w, 0.0, None))
    return hermitize((v * w) @ v.conj().T)


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product tr(a† b)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"shapes {a.shape} and {b.shape} differ")
    return complex(np.sum(a.conj() * b))


@lru_cache(maxsize=None)
def hermitian_basis(dim: int) -> tuple[np.ndarray, ...]:
    """Orthonormal Hermitian basis of the dim x dim matrices.

    Ordering: diagonal units E_kk, then symmetric pairs (E_km + E_mk)/sqrt(2)
    for k < m, then antisymmetric pairs i(E_mk - E_km)/sqrt(2) for k < m.
    """
    if dim < 1:
        raise DimensionMismatchError("dim must be >= 1")
    basis: list[np.ndarray] = []
    for k in range(dim):
        e = np.zeros((dim, dim), dtype=complex)
        e[k, k] = 1.0
        basis.append(e)
    r = 1.0 / np.sqrt(2.0)
    for k in range(dim - 1):
        for m in range(k + 1, dim):
            e = np.zeros((dim, dim), dtype=complex)
            e[k, m] = r
            e[m, k] = r
            basis.append(e)
    for k in range(dim - 1):
        for m in range(k + 1, dim):
            e = np.zeros((dim, dim), dtype=complex)
            e[k, m] = -1j * r
            e[m, k] = 1j * r
            basis.append(e)
    return tuple(_readonly(e) for e in basis)


@dataclass(frozen=True)
class RngStream:
    """Counter-based random stream: identical (seed, stream) -> identical draws.

    Backed by Philox, so substreams are independent of the order in which
    they are consumed; parallel sweeps stay reproducible.
    """

    seed: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        key = np.array([self.seed, self.stream], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


def _complex_gaussian(gen: np.random.Generator, shape) -> np.ndarray:
    # Real and imaginary parts i.i.d. N(0,1) each.
    return gen.normal(size=shape) + 1j * gen.normal(size=shape)


def random_state(dim: int, rank: int, rng: RngStream) -> np.ndarray:
    """Normalized Wishart state X X† / tr(X X†), X complex Gaussian dim x rank."""
    if not 1 <= rank <= dim:
        raise DimensionMismatchError(f"rank must satisfy 1 <= rank <= dim, got {rank}")
    x = _complex_gaussian(rng.generator(), (dim, rank))
    w = x @ x.conj().T
    return hermitize(w / np.trace(w).real)


def random_observable(dim: int, rng: RngStream) -> np.ndarray:
    """Random self-adjoint matrix Y + Y† with complex Gaussian Y."""
    y = _complex_gaussian(rng.generator(), (dim, dim))
    return y + y.conj().T


def random_unitary(dim: int, rng: RngStream) -> np.ndarray:
    """Haar-ish random unitary from the QR decomposition of a complex Gaussian."""
    z = _complex_gaussian(rng.generator(), (dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))
