"""Primal-dual interior-point solver for small Hermitian semidefinite programs.

Standard form:

    minimize    <C, X>
    subject to  <A_i, X> = b_i   (i = 1..m)
                X >= 0           (Hermitian positive semidefinite)

with the dual

    maximize    b . y
    subject to  S = C - sum_i y_i A_i >= 0.

The engine is a Mehrotra-style predictor-corrector with Nesterov-Todd
scaling, run directly on the complex Hermitian cone.  Two implementation
choices matter on the degenerate instances this package produces (optimal
faces without strict complementarity):

* primal and dual share one step length per iteration; asymmetric steps lose
  centrality and stall around 1e-4,
* the scaling point is formed from Cholesky factors and one SVD
  (X = Lx Lx*, S = Ls Ls*, Ls* Lx = U Sigma V*), never from matrix square
  roots, which keeps the endgame accurate to ~1e-11 instead of ~1e-7.

With the factor E = Lx V Sigma^(-1/2), both scaled variables equal the
diagonal Sigma, so complementarity linearization is elementwise.  Problem
sizes here are at most 25 x 25; everything is dense.  ``solve_sdp`` is the
seam: anything that maps an :class:`SdpProblem` to an :class:`SdpSolution`
can replace it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import get_lapack_funcs

from .linalg import hermitize

_TRTRI = get_lapack_funcs(("trtri",), (np.empty((1, 1), dtype=complex),))[0]


def _tri_inv(low: np.ndarray) -> np.ndarray:
    inv, info = _TRTRI(low, lower=1)
    if info != 0:
        raise np.linalg.LinAlgError("triangular inverse failed")
    return inv

# Internal targets are tighter than any caller tolerance: extra iterations are
# cheap at these sizes and buy headroom for value-comparison tests downstream.
_TIGHT = 1e-11
_RESTART_TARGET = 3e-10  # recentered restarts continue until the score clears this
_PATIENCE = 10        # iterations allowed without halving the score
_PATIENCE_MET = 3     # same, once the caller's tolerances are already met
_IMPROVEMENT = 0.5
_SIGMA_MIN = 1e-6
_SIGMA_MAX = 0.99999
_TAU = 0.995


@dataclass(frozen=True)
class SdpProblem:
    """Standard-form data: cost, stacked constraint matrices, right-hand side."""

    c: np.ndarray = field(repr=False)            # (n, n) Hermitian
    constraints: np.ndarray = field(repr=False)  # (m, n, n) Hermitian stack
    b: np.ndarray = field(repr=False)            # (m,) real


@dataclass(frozen=True)
class SdpSolution:
    x: np.ndarray = field(repr=False)
    y: np.ndarray = field(repr=False)
    s: np.ndarray = field(repr=False)
    primal_value: float
    dual_value: float
    duality_gap: float  # certified: min(|pv - dv|, <x, s>) at tight feasibility
    rel_gap: float
    primal_infeas: float
    dual_infeas: float
    iterations: int
    status: str  # "optimal" | "max-iter"


def _chol_psd(m: np.ndarray) -> np.ndarray:
    """Cholesky factor, nudging the diagonal if the matrix is numerically singular."""
    bump = 0.0
    trace_n = float(np.trace(m).real) / m.shape[0]
    for _ in range(6):
        try:
            return np.linalg.cholesky(m + bump * np.eye(m.shape[0]))
        except np.linalg.LinAlgError:
            bump = max(bump * 100.0, trace_n * 1e-16)
    raise np.linalg.LinAlgError("matrix is not positive definite")


def _max_step(low_inv: np.ndarray, direction: np.ndarray) -> float:
    """Largest alpha with M + alpha * direction >= 0, given inv(chol(M))."""
    t = low_inv @ direction @ low_inv.conj().T
    lam = float(np.linalg.eigvalsh(t)[0])
    if lam >= -1e-16:
        return np.inf
    return -1.0 / lam


class _SchurSolver:
    """Factorization of the Schur complement with a pseudo-inverse fallback.

    Near the optimum of a degenerate instance the Schur matrix turns
    numerically singular; clipping its spectrum keeps the direction usable.
    """

    def __init__(self, m_mat: np.ndarray):
        w, q = np.linalg.eigh(m_mat)
        self._q = q
        self._w = np.where(w > max(float(w[-1]), 0.0) * 1e-14 + 1e-300, w, np.inf)

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        return self._q @ ((self._q.T @ rhs) / self._w)


def solve_sdp(
    problem: SdpProblem,
    gap_tol: float = 1e-8,
    feas_tol: float = 1e-8,
    max_iter: int = 200,
    x0: np.ndarray | None = None,
    y0: np.ndarray | None = None,
) -> SdpSolution:
    """Solve a standard-form Hermitian SDP to high accuracy.

    ``x0``/``y0`` are optional interior starting hints; a ``y0`` hint is used
    only if the implied slack C - A*(y0) is safely positive definite.
    """
    aop = np.ascontiguousarray(problem.constraints, dtype=complex)
    m, n, _ = aop.shape
    avec = aop.reshape(m, n * n)
    b = np.asarray(problem.b, dtype=float)

    # Work on a normalized cost; values and dual variables scale back by s.
    scale = max(1.0, float(np.linalg.norm(problem.c)) / float(np.sqrt(n)))
    c = np.asarray(problem.c, dtype=complex) / scale

    def op_a(mat: np.ndarray) -> np.ndarray:
        return (avec.conj() @ mat.ravel()).real

    def op_at(y: np.ndarray) -> np.ndarray:
        # Exact Hermitian combination up to roundoff; consumers read one triangle.
        return (y @ avec).reshape(n, n)

    eye = np.eye(n, dtype=complex)
    norm_b = float(np.linalg.norm(b))
    norm_c = float(np.linalg.norm(c))
    # Inverse Gram matrix of the constraint stack, used to re-project search
    # directions onto A(dx) = r_p exactly; without this, direction errors from
    # the clipped Schur solve accumulate in the primal residual and floor the
    # duality gap.
    gram_inv = np.linalg.inv((avec.conj() @ avec.T).real)

    x = hermitize(np.asarray(x0, dtype=complex)) if x0 is not None else eye.copy()
    wmin_x = float(np.linalg.eigvalsh(x)[0])
    if wmin_x < 1e-10:
        x = x + (1e-6 - wmin_x) * eye

    y = np.zeros(m)
    s = None
    if y0 is not None:
        cand = hermitize(c - op_at(np.asarray(y0, dtype=float) / scale))
        if float(np.linalg.eigvalsh(cand)[0]) > 1e-10:
            y = np.asarray(y0, dtype=float) / scale
            s = cand
    if s is None:
        shift = 1.0 + max(0.0, -float(np.linalg.eigvalsh(c)[0]))
        s = hermitize(c + shift * eye)

    best = None
    best_score = np.inf
    iterations = 0
    budget = max_iter

    # Plateaus happen on degenerate instances; restarting from a recentered
    # copy of the stalled iterate resets the scaling and routinely gains two
    # to three digits, so allow a few passes within the iteration budget.
    for attempt in range(3):
        result = _iterate(
            x, y, s, c, b, aop, avec, gram_inv, op_a, op_at, norm_b, norm_c,
            gap_tol, feas_tol, budget, eye, n,
        )
        iterations += result["iterations"]
        budget -= result["iterations"]
        if result["score"] < best_score:
            best_score = result["score"]
            best = result["best"]
        if best_score <= _RESTART_TARGET or budget <= 0:
            break
        x = best[0] + 1e-4 * (float(np.trace(best[0]).real) / n) * eye
        y = best[1].copy()
        s = hermitize(c - op_at(y))
        if float(np.linalg.eigvalsh(s)[0]) <= 0.0:
            break

    x, y, s, pv, dv, relgap, pinf, dinf = best
    status = "optimal" if (pinf <= feas_tol and dinf <= feas_tol and relgap <= gap_tol) else "max-iter"
    cert_gap = min(abs(pv - dv), abs(float(np.vdot(x, s).real))) * scale
    return SdpSolution(
        x=x,
        y=y * scale,
        s=s * scale,
        primal_value=pv * scale,
        dual_value=dv * scale,
        duality_gap=cert_gap,
        rel_gap=relgap,
        primal_infeas=pinf,
        dual_infeas=dinf,
        iterations=iterations,
        status=status,
    )


def _iterate(x, y, s, c, b, aop, avec, gram_inv, op_a, op_at, norm_b, norm_c,
             gap_tol, feas_tol, max_iter, eye, n):
    """One interior-point pass; returns the best iterate found and its score."""
    m = aop.shape[0]
    best = None
    best_score = np.inf
    milestone = np.inf
    milestone_iter = 0
    iterations = 0

    for iteration in range(1, max_iter + 1):
        iterations = iteration
        mu = float(np.vdot(x, s).real) / n
        r_p = b - op_a(x)
        r_d = hermitize(c - s - op_at(y))
        pv = float(np.vdot(c, x).real)
        dv = float(b @ y)
        pinf = float(np.linalg.norm(r_p)) / (1.0 + norm_b)
        dinf = float(np.linalg.norm(r_d)) / (1.0 + norm_c)
        # On instances whose dual optimum is badly conditioned the reported
        # dual value trails the true gap; the complementarity of the (nearly)
        # feasible pair certifies optimality in its place.
        denom = 1.0 + abs(pv) + abs(dv)
        relgap = min(abs(pv - dv), abs(mu) * n) / denom
        score = max(pinf, dinf, relgap)
        met_user = pinf <= feas_tol and dinf <= feas_tol and relgap <= gap_tol

        if score < best_score:
            best_score = score
            best = (x.copy(), y.copy(), s.copy(), pv, dv, relgap, pinf, dinf)
        if score < _IMPROVEMENT * milestone:
            milestone = score
            milestone_iter = iteration

        stalled = iteration - milestone_iter >= (_PATIENCE_MET if met_user else _PATIENCE)
        if score <= _TIGHT or stalled or mu < 1e-15 * (1.0 + abs(pv)):
            break

        # Nesterov-Todd scaling from Cholesky factors and one SVD:
        # X = Lx Lx*, S = Ls Ls*, Ls* Lx = U diag(sig) V*.  With
        # E = Lx V diag(sig)^(-1/2), both E^-1 X E^-* and E* S E equal diag(sig).
        lx = _chol_psd(x)
        ls = _chol_psd(s)
        lx_inv = _tri_inv(lx)
        ls_inv = _tri_inv(ls)
        _, sig, vh_sv = np.linalg.svd(ls.conj().T @ lx)
        sig = np.clip(sig, max(float(sig[0]), 1.0) * 1e-18, None)
        sqrt_sig = np.sqrt(sig)
        lxv = lx @ vh_sv.conj().T
        e_fac = lxv / sqrt_sig
        w_nt = e_fac @ e_fac.conj().T
        # E^-1 = diag(sig)^(1/2) V* Lx^-1.
        e_inv = sqrt_sig[:, None] * (vh_sv @ lx_inv)
        lyap_den = 0.5 * (sig[:, None] + sig[None, :])

        # Schur complement M_ij = <A_i, W A_j W>, shared by both directions.
        waw = np.matmul(w_nt, np.matmul(aop, w_nt))
        schur_mat = (avec.conj() @ waw.reshape(m, n * n).T).real
        schur = _SchurSolver(0.5 * (schur_mat + schur_mat.T))

        def solve_direction(e_rhat_e: np.ndarray):
            # e_rhat_e is E L_Sigma^-1(Rc) E* for the complementarity target Rc.
            rhs = r_p - op_a(e_rhat_e - hermitize(w_nt @ r_d @ w_nt))
            dy = schur.solve(rhs)
            resid = rhs - (avec.conj() @ np.matmul(w_nt, np.matmul(op_at(dy), w_nt)).ravel()).real
            dy = dy + schur.solve(resid)
            ds = r_d - op_at(dy)
            dx = e_rhat_e - w_nt @ ds @ w_nt
            dx = dx + op_at(gram_inv @ (r_p - op_a(dx)))
            return dx, dy, ds

        # Predictor (affine scaling): target 0, and E L^-1(-Sigma^2) E* = -X.
        dx_aff, dy_aff, ds_aff = solve_direction(-x)
        a_aff = min(1.0, 0.99 * _max_step(lx_inv, dx_aff), 0.99 * _max_step(ls_inv, ds_aff))
        mu_aff = float(np.vdot(x + a_aff * dx_aff, s + a_aff * ds_aff).real) / n
        sigma_c = float(np.clip((max(mu_aff, 0.0) / mu) ** 3, _SIGMA_MIN, _SIGMA_MAX))

        # Corrector with Mehrotra second-order term, in the scaled space.
        cross = e_inv @ (dx_aff @ ds_aff) @ e_fac
        cross = 0.5 * (cross + cross.conj().T)
        rc = -cross
        np.fill_diagonal(rc, rc.diagonal().real + sigma_c * mu - sig * sig)
        r_hat = rc / lyap_den
        dx, dy, ds = solve_direction(hermitize(e_fac @ r_hat @ e_fac.conj().T))

        alpha = min(1.0, _TAU * _max_step(lx_inv, dx), _TAU * _max_step(ls_inv, ds))
        if alpha < 1e-9:
            break
        x = hermitize(x + alpha * dx)
        y = y + alpha * dy
        s = hermitize(s + alpha * ds)

    return {"best": best, "score": best_score, "iterations": iterations}
