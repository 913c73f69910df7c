"""Local and global reverse estimation, and multiparameter bounds.

A local reverse estimate simulates a 1-dim state family at a point, to
first order, by a classical family pushed through a state-preparation
(CQ) map.  The optimal construction diagonalizes the reverse SLD
A = rho^(-1/2) drho rho^(-1/2) and achieves input Fisher information
equal to the RLD Fisher information; any other valid construction needs
at least that much.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .channels import Ensemble, child_rng
from .errors import (
    DimensionMismatchError,
    InvalidCandidateError,
    NotReverseEstimableError,
    RankDeficiencyError,
)
from .fisher import QFisherMatrix, rld, rld_fisher
from .linalg import frob, herm, spabs
from .states import AmplitudeMatrix, FamilyPoint


@dataclass(eq=False)
class LocalReverseEstimate:
    """Ensemble plus per-parameter scores lambda_{i,x} at theta0."""

    ensemble: Ensemble
    scores: np.ndarray  # shape (m, n_components)
    theta0: np.ndarray

    def __post_init__(self):
        self.scores = np.atleast_2d(np.asarray(self.scores, dtype=float))
        self.theta0 = np.atleast_1d(np.asarray(self.theta0, dtype=float))
        if self.scores.shape[1] != self.ensemble.size:
            raise DimensionMismatchError("score length does not match ensemble size")
        mean = self.scores @ self.ensemble.weights
        if np.max(np.abs(mean), initial=0.0) > 1e-10:
            raise ValueError(f"weighted scores must sum to 0 per parameter, got {mean}")

    @property
    def m(self) -> int:
        return self.scores.shape[0]

    def tangent(self, i: int = 0) -> np.ndarray:
        """sum_x lambda_{i,x} p(x) |phi_x><phi_x|."""
        d = self.ensemble.states[0].shape[0]
        out = np.zeros((d, d), dtype=complex)
        for lam, p, v in zip(self.scores[i], self.ensemble.weights, self.ensemble.states):
            out += lam * p * np.outer(v, v.conj())
        return herm(out)


def local_reverse_estimate(point: FamilyPoint) -> LocalReverseEstimate:
    """Optimal local reverse estimation of a 1-dim family at theta0.

    Diagonalize A = rho^(-1/2) drho rho^(-1/2) = U Lam U^dag; the
    ensemble columns are rho^(1/2) u_x with weights their squared norms
    and scores the eigenvalues.  Input Fisher equals J^R.
    """
    if point.m != 1:
        raise ValueError("local reverse estimation is defined for 1-dim families")
    if not point.rho.is_full_rank():
        raise RankDeficiencyError("local reverse estimation requires a full-rank state")
    rm = point.rho.func(("power", -0.5))
    rp = point.rho.func("sqrt")
    a = herm(rm @ point.tangents[0] @ rm)
    lam, u = np.linalg.eigh(a)
    cols = rp @ u
    p = np.sum(np.abs(cols) ** 2, axis=0)
    p = np.clip(p, 1e-300, None)
    states = [cols[:, x] / np.sqrt(p[x]) for x in range(len(p))]
    p = p / p.sum()
    return LocalReverseEstimate(Ensemble(p, states), lam[None, :], point.theta)


def input_fisher(lre: LocalReverseEstimate) -> QFisherMatrix:
    """Classical Fisher matrix of the simulating input family at theta0."""
    p = lre.ensemble.weights
    j = (lre.scores * p) @ lre.scores.T
    return QFisherMatrix(lre.m, j, np.zeros_like(j), "classical")


@dataclass(eq=False)
class ReverseEstimateReport:
    rho_residual: float
    tangent_residual: float
    input_fisher: QFisherMatrix
    gap: float  # min eigenvalue of J - J^R; scalar difference for m = 1


def validate_reverse_estimate(
    candidate: LocalReverseEstimate, point: FamilyPoint, residual_cap: float = 1e-6
) -> ReverseEstimateReport:
    """Check the simulation constraints and the Fisher gap J - J^R >= 0."""
    rho_res = frob(candidate.ensemble.average_state() - point.rho.mat)
    tan_res = max(
        frob(candidate.tangent(i) - point.tangents[i]) for i in range(candidate.m)
    )
    if rho_res > residual_cap or tan_res > residual_cap:
        raise InvalidCandidateError(rho_res, tan_res)
    j = input_fisher(candidate)
    jr = rld_fisher(point)
    gap = float(np.min(np.linalg.eigvalsh(j.as_complex() - jr.as_complex())))
    return ReverseEstimateReport(rho_res, tan_res, j, gap)


def random_valid_lre(point: FamilyPoint, seed=0, n_components: int | None = None) -> LocalReverseEstimate:
    """Randomized valid (generally suboptimal) local reverse estimate.

    Draws a random co-isometry V (d x d'' with VV^dag = I), takes
    ensemble columns rho^(1/2) v_x, and solves the linear system
    sum_x lambda_x v_x v_x^dag = A for real scores, adding a random
    null-space component to move inside the constraint manifold.
    """
    if point.m != 1:
        raise ValueError("randomized LRE generator covers 1-dim families")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    d = point.dim
    n = n_components if n_components is not None else d * d + 3
    g = rng.normal(size=(n, d)) + 1j * rng.normal(size=(n, d))
    q, _ = np.linalg.qr(g)  # n x d, orthonormal columns
    v = q.conj().T  # d x n co-isometry
    rm = point.rho.func(("power", -0.5))
    rp = point.rho.func("sqrt")
    a = herm(rm @ point.tangents[0] @ rm)
    # real linear system: sum_x lam_x Re/Im (v_x v_x^dag) = Re/Im A
    outer = np.einsum("ix,jx->xij", v, v.conj())  # n of (d x d)
    design = np.concatenate(
        [outer.real.reshape(n, -1).T, outer.imag.reshape(n, -1).T], axis=0
    )
    target = np.concatenate([a.real.ravel(), a.imag.ravel()])
    lam0, *_ = np.linalg.lstsq(design, target, rcond=None)
    _, sv, vt = np.linalg.svd(design, full_matrices=True)
    rank = int(np.sum(sv > sv[0] * 1e-12))
    null = vt[rank:].T  # n x nullity
    lam = lam0 + null @ rng.normal(scale=1.0, size=null.shape[1]) if null.shape[1] else lam0
    res = frob(np.einsum("x,xij->ij", lam, outer) - a)
    if res > 1e-8 * max(1.0, frob(a)):
        # fall back to the exact min-norm solution
        lam = lam0
    cols = rp @ v
    p = np.sum(np.abs(cols) ** 2, axis=0)
    p = np.clip(p, 1e-300, None)
    states = [cols[:, x] / np.sqrt(p[x]) for x in range(n)]
    p = p / p.sum()
    return LocalReverseEstimate(Ensemble(p, states), lam[None, :], point.theta)


# --- global reverse estimation ----------------------------------------------


def global_commutation_check(points: list[FamilyPoint]) -> float:
    """Max Frobenius norm of [L^R_{theta,i}, L^R_{theta',j}] over the grid."""
    ls = []
    for pt in points:
        if not pt.rho.is_full_rank():
            raise RankDeficiencyError("global reverse estimation requires full-rank states")
        ls.extend(rld(pt.rho, x) for x in pt.tangents)
    worst = 0.0
    for i in range(len(ls)):
        for j in range(i, len(ls)):
            worst = max(worst, frob(ls[i] @ ls[j] - ls[j] @ ls[i]))
    return worst


def _commutation_scale(points: list[FamilyPoint]) -> float:
    top = 0.0
    for pt in points:
        for x in pt.tangents:
            top = max(top, frob(rld(pt.rho, x)))
    return max(1.0, top * top)


@dataclass(eq=False)
class GlobalReverseEstimate:
    """Shared ensemble (columns of W0) plus one distribution per grid point."""

    w0: AmplitudeMatrix
    theta_grid: np.ndarray
    distributions: np.ndarray  # shape (n_points, d)
    base_index: int
    basis: np.ndarray = field(repr=False, default=None)  # simultaneous eigenbasis U
    base_weights: np.ndarray = field(repr=False, default=None)  # ||rho0^(1/2) u_x||^2


def global_reverse_estimate(
    points: list[FamilyPoint], base_index: int = 0, seed: int = 0
) -> GlobalReverseEstimate:
    """Exact simulation of a commuting family from a single shared ensemble.

    M_theta = rho0^(-1/2) rho_theta rho0^(-1/2) are simultaneously
    diagonalized (via a seeded random linear combination, retrying on a
    fresh seed up to 5 times); refuses if the commutation criterion
    fails.
    """
    norm = global_commutation_check(points)
    tol = 1e-8 * _commutation_scale(points)
    if norm > tol:
        raise NotReverseEstimableError(norm)
    rho0 = points[base_index].rho
    rm = rho0.func(("power", -0.5))
    rp = rho0.func("sqrt")
    ms = [herm(rm @ pt.rho.mat @ rm) for pt in points]
    u = None
    for attempt in range(5):
        rng = child_rng(seed, attempt)
        c = rng.normal(size=len(ms))
        _, cand = np.linalg.eigh(herm(sum(ck * mk for ck, mk in zip(c, ms))))
        off = 0.0
        for mk in ms:
            mt = cand.conj().T @ mk @ cand
            off = max(off, frob(mt - np.diag(np.diag(mt))) / max(1.0, frob(mk)))
        if off <= 1e-8:
            u = cand
            break
    if u is None:
        raise NotReverseEstimableError(norm)
    cols = rp @ u
    cw = np.sum(np.abs(cols) ** 2, axis=0)  # ||rho0^(1/2) u_x||^2
    dists = np.array(
        [np.clip(np.real(np.einsum("xi,ij,jx->x", u.conj().T, mk, u)) * cw, 0.0, None) for mk in ms]
    )
    dists /= dists.sum(axis=1, keepdims=True)
    w0 = AmplitudeMatrix(cols / np.sqrt(np.sum(cw)))
    # reconstruction check at every grid point
    phis = [cols[:, x] / max(np.sqrt(cw[x]), 1e-150) for x in range(len(cw))]
    for k, pt in enumerate(points):
        recon = sum(p * np.outer(v, v.conj()) for p, v in zip(dists[k], phis))
        if frob(recon - pt.rho.mat) > 1e-8:
            raise NotReverseEstimableError(norm)
    thetas = np.array([pt.theta for pt in points])
    return GlobalReverseEstimate(w0, thetas, dists, base_index, basis=u, base_weights=cw)


def restricted_input_fisher(gre: GlobalReverseEstimate, point: FamilyPoint, points: list[FamilyPoint]) -> QFisherMatrix:
    """Classical Fisher of the simulating input family at one grid point.

    Scores follow from linearity: d_i p(x) = c_x u_x^dag rho0^(-1/2)
    X_i rho0^(-1/2) u_x.
    """
    rho0 = points[gre.base_index].rho
    rm = rho0.func(("power", -0.5))
    u = gre.basis
    cw = gre.base_weights
    k = next(
        i for i, pt in enumerate(points) if np.array_equal(pt.theta, point.theta)
    )
    p = gre.distributions[k]
    scores = np.array(
        [np.real(np.einsum("xi,ij,jx->x", u.conj().T, rm @ x @ rm, u)) * cw for x in point.tangents]
    )
    live = p > 1e-15
    j = (scores[:, live] / p[live]) @ scores[:, live].T
    return QFisherMatrix(point.m, j, np.zeros_like(j), "classical")


# --- multiparameter bounds ---------------------------------------------------


@dataclass(eq=False)
class MultiparamBounds:
    reverse: float
    estimation: float


def multiparam_bounds(jr: QFisherMatrix, g: np.ndarray) -> MultiparamBounds:
    """Weighted reverse-estimation and estimation bounds from J^R.

    reverse = Tr G ReJ^R + Spabs(G, ImJ^R);
    estimation = Tr G ReJ^R - Spabs(G, ImJ^R).
    """
    g = np.asarray(g, dtype=float)
    if g.shape != (jr.m, jr.m):
        raise DimensionMismatchError(f"weight shape {g.shape} vs m = {jr.m}")
    if np.min(np.linalg.eigvalsh(0.5 * (g + g.T))) < -1e-10:
        raise ValueError("weight matrix must be PSD")
    base = float(np.trace(g @ jr.real_part))
    skew = spabs(g, jr.imag_part)
    return MultiparamBounds(base + skew, base - skew)


@dataclass(eq=False)
class OracleResult:
    value: float
    converged: bool
    minimizer: np.ndarray


def min_trace_oracle(jr: QFisherMatrix, g: np.ndarray, seed: int = 0, restarts: int = 32) -> OracleResult:
    """Independent check of the bound identity min{Tr GJ : J >= J^R}.

    Penalized descent (squared hinge on the most negative eigenvalue of
    J - J^R) over real symmetric J, chained over an increasing penalty
    ladder with multi-start; each end point is projected back to the
    feasible cone by adding c*I, so the reported value is always an
    upper bound on the true minimum.
    """
    m = jr.m
    if m > 3:
        raise ValueError("oracle supports m <= 3")
    g = np.asarray(g, dtype=float)
    jc = jr.as_complex()
    idx = [(i, j) for i in range(m) for j in range(i, m)]

    def unpack(vec):
        s = np.zeros((m, m))
        for v, (i, j) in zip(vec, idx):
            s[i, j] = s[j, i] = v
        return s

    def feasible_value(s):
        lam_min = float(np.min(np.linalg.eigvalsh(s - jc)))
        c = max(0.0, -lam_min)
        return float(np.trace(g @ s)) + c * float(np.trace(g)), s + c * np.eye(m)

    scale = max(1.0, frob(jc))
    best_val, best_s, finals = np.inf, None, []
    rng = np.random.default_rng(seed)
    for _ in range(restarts):
        vec = np.array(
            [jr.real_part[i, j] + (scale * abs(rng.normal()) if i == j else 0.0)
             + 0.1 * scale * rng.normal() for (i, j) in idx]
        )
        for mu in (1e2, 1e4, 1e6, 1e8):
            def obj(v, mu=mu):
                s = unpack(v)
                lam_min = float(np.min(np.linalg.eigvalsh(s - jc)))
                return float(np.trace(g @ s)) + mu * max(0.0, -lam_min) ** 2
            vec = minimize(obj, vec, method="BFGS", options={"maxiter": 200}).x
        val, s_feas = feasible_value(unpack(vec))
        finals.append(val)
        if val < best_val:
            best_val, best_s = val, s_feas
    finals = np.sort(np.asarray(finals))
    near = int(np.sum(finals <= best_val + 1e-4 * max(1.0, abs(best_val))))
    return OracleResult(best_val, near >= max(2, restarts // 8), best_s)
