"""Density matrices, parameterized family points and amplitude matrices.

An amplitude matrix W represents a weighted ensemble of pure states
(columns sqrt(p_x) |phi_x>) or, equivalently, a purification: the system
state is recovered as W W^dag and the ancilla-side state as W^dag W.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import DimensionMismatchError, GaugeError, RankDeficiencyError
from .linalg import eig_hermitian, frob, herm

TRACE_TOL = 1e-12
PSD_FLOOR = -1e-12


@dataclass(eq=False)
class DensityMatrix:
    """Hermitian PSD trace-one matrix with a cached eigendecomposition."""

    mat: np.ndarray
    _eig: linalg.SpectralDecomposition | None = field(default=None, repr=False)

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatchError(f"density matrix must be square, got {m.shape}")
        m = herm(m)
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"trace {tr!r} deviates from 1 by more than {TRACE_TOL}")
        self.mat = m
        if np.min(self.eig.eigenvalues) < PSD_FLOOR:
            raise ValueError(
                f"matrix is not PSD: min eigenvalue {np.min(self.eig.eigenvalues):.3e}"
            )

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @property
    def eig(self) -> linalg.SpectralDecomposition:
        if self._eig is None:
            self._eig = eig_hermitian(self.mat)
        return self._eig

    def is_full_rank(self, rank_tol: float = linalg.RANK_TOL) -> bool:
        w = self.eig.eigenvalues
        return bool(np.min(w) >= rank_tol * np.max(w))

    def func(self, f, rank_tol: float = linalg.RANK_TOL) -> np.ndarray:
        """Support-restricted matrix function of the state."""
        w, u = self.eig
        sup = np.abs(w) >= rank_tol * np.max(np.abs(w))
        fw = np.zeros_like(w)
        pos = w[sup]
        if f == "sqrt":
            fw[sup] = np.sqrt(np.clip(pos, 0.0, None))
        elif f == "log":
            fw[sup] = np.log(pos)
        elif f == "inverse":
            fw[sup] = 1.0 / pos
        elif isinstance(f, tuple) and f[0] == "power":
            fw[sup] = np.power(pos, float(f[1]))
        else:
            raise ValueError(f"unknown matrix function {f!r}")
        return herm(u @ np.diag(fw) @ u.conj().T)


TANGENT_TRACE_TOL = 1e-10


@dataclass(eq=False)
class FamilyPoint:
    """Local data of a state family: theta, rho_theta and its tangents."""

    theta: np.ndarray
    rho: DensityMatrix
    tangents: list[np.ndarray]

    def __post_init__(self):
        self.theta = np.atleast_1d(np.asarray(self.theta, dtype=float))
        tangents = []
        for x in self.tangents:
            x = np.asarray(x, dtype=complex)
            if x.shape != self.rho.mat.shape:
                raise DimensionMismatchError(
                    f"tangent shape {x.shape} does not match state {self.rho.mat.shape}"
                )
            if abs(np.trace(x)) > TANGENT_TRACE_TOL:
                raise ValueError(f"tangent trace {np.trace(x):.3e} exceeds {TANGENT_TRACE_TOL}")
            tangents.append(herm(x))
        self.tangents = tangents
        if len(self.tangents) != len(self.theta):
            raise DimensionMismatchError(
                f"{len(self.tangents)} tangents for {len(self.theta)} parameters"
            )

    @property
    def m(self) -> int:
        return len(self.tangents)

    @property
    def dim(self) -> int:
        return self.rho.dim


@dataclass(eq=False)
class AmplitudeMatrix:
    """d x d' matrix W with WW^dag a density matrix (Tr WW^dag = 1)."""

    w: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.w, dtype=complex)
        if w.ndim != 2:
            raise DimensionMismatchError("amplitude matrix must be 2-d")
        tr = np.sum(np.abs(w) ** 2)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"Tr WW^dag = {tr!r} deviates from 1 by more than {TRACE_TOL}")
        self.w = w

    @property
    def dim(self) -> int:
        return self.w.shape[0]

    @property
    def ancilla_dim(self) -> int:
        return self.w.shape[1]


@dataclass(eq=False)
class TangentLift:
    """A tangent on amplitude space, represented as a matrix of the same shape as W."""

    base: AmplitudeMatrix
    m: np.ndarray

    def project(self) -> np.ndarray:
        """Push the lift back down to state space: (W M^dag + M W^dag)/2."""
        w = self.base.w
        return herm(0.5 * (w @ self.m.conj().T + self.m @ w.conj().T))


def canonical_amplitude(rho: DensityMatrix) -> AmplitudeMatrix:
    """Canonical gauge W = rho^(1/2); square, with d' = d."""
    return AmplitudeMatrix(rho.func("sqrt"))


def project(w: AmplitudeMatrix, side: str = "system") -> DensityMatrix:
    """WW^dag (system) or W^dag W (ancilla)."""
    if side == "system":
        return DensityMatrix(w.w @ w.w.conj().T)
    if side == "ancilla":
        return DensityMatrix(w.w.conj().T @ w.w)
    raise ValueError(f"side must be 'system' or 'ancilla', got {side!r}")


def gauge_transform(w: AmplitudeMatrix, u: np.ndarray) -> AmplitudeMatrix:
    """Right-multiply by a co-isometry (U U^dag = I), leaving WW^dag fixed."""
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != w.ancilla_dim:
        raise DimensionMismatchError(
            f"gauge matrix has {u.shape[0]} rows, expected {w.ancilla_dim}"
        )
    res = frob(u @ u.conj().T - np.eye(u.shape[0]))
    if res > 1e-11:
        raise GaugeError(f"UU^dag differs from identity by {res:.3e}")
    return AmplitudeMatrix(w.w @ u)


def lift_tangent(w: AmplitudeMatrix, x: np.ndarray, kind: str) -> TangentLift:
    """Lift a state-space tangent X through the logarithmic derivative.

    M = L W with L the SLD or RLD of (rho, X), rho = WW^dag.  Projecting
    the lift recovers X.
    """
    from .fisher import rld, sld  # local import to avoid a module cycle

    rho = project(w, "system")
    x = herm(np.asarray(x, dtype=complex))
    if kind == "SLD":
        l = sld(rho, x)
    elif kind == "RLD":
        l = rld(rho, x)
    else:
        raise ValueError(f"kind must be 'SLD' or 'RLD', got {kind!r}")
    return TangentLift(w, l @ w.w)


def _hermitian_basis(n: int):
    """Real basis of n x n Hermitian matrices (n^2 elements)."""
    basis = []
    for i in range(n):
        e = np.zeros((n, n), dtype=complex)
        e[i, i] = 1.0
        basis.append(e)
    for i in range(n):
        for j in range(i + 1, n):
            e = np.zeros((n, n), dtype=complex)
            e[i, j] = e[j, i] = 1.0
            basis.append(e)
            e = np.zeros((n, n), dtype=complex)
            e[i, j] = -1j
            e[j, i] = 1j
            basis.append(e)
    return basis


def reverse_sld(w: AmplitudeMatrix, x: np.ndarray, residual_tol: float = 1e-9) -> np.ndarray:
    """Hermitian ancilla-side operator A with L^R W = W A.

    Solved by least squares over the d' x d' Hermitian space; accepted
    only if the defining residual is within residual_tol.  In the
    canonical gauge W = rho^(1/2) the solution is
    rho^(-1/2) X rho^(-1/2).
    """
    from .fisher import rld

    rho = project(w, "system")
    if not rho.is_full_rank():
        raise RankDeficiencyError("reverse SLD requires a full-rank state")
    x = herm(np.asarray(x, dtype=complex))
    l = rld(rho, x)
    rhs = l @ w.w
    basis = _hermitian_basis(w.ancilla_dim)
    cols = np.stack([(w.w @ b).ravel() for b in basis], axis=1)
    design = np.vstack([cols.real, cols.imag])
    target = np.concatenate([rhs.ravel().real, rhs.ravel().imag])
    coef, *_ = np.linalg.lstsq(design, target, rcond=None)
    a = sum(c * b for c, b in zip(coef, basis))
    res = frob(l @ w.w - w.w @ a)
    if res > residual_tol:
        raise RankDeficiencyError(
            f"no Hermitian reverse SLD in this gauge: residual {res:.3e} > {residual_tol:.1e}"
        )
    return herm(a)


def duality_gap(w: AmplitudeMatrix, x: np.ndarray) -> float:
    """Tr pi~(W) A A - Tr rho L^R_dag L^R; nonnegative, zero when d' = rank(rho)."""
    from .fisher import rld

    rho = project(w, "system")
    l = rld(rho, x)
    a = reverse_sld(w, x)
    anc = w.w.conj().T @ w.w
    rhs = np.trace(anc @ a @ a).real
    lhs = np.trace(rho.mat @ l.conj().T @ l).real
    return rhs - lhs
