"""Dense complex linear-algebra kernel.

Hermitian eigendecomposition, support-restricted matrix functions,
Lyapunov solves and weighted trace norms, for matrices of dimension up
to a few hundred.  Everything here is a pure function of its inputs.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import ConvergenceError, DimensionMismatchError, RankDeficiencyError

# Relative support cutoff: eigenvalues below RANK_TOL * lambda_max are
# treated as zero by the pseudo matrix functions.
RANK_TOL = 1e-12


class SpectralDecomposition(NamedTuple):
    eigenvalues: np.ndarray  # real, ascending
    eigenvectors: np.ndarray  # unitary, columns


def frob(a) -> float:
    return float(np.linalg.norm(np.asarray(a)))


def herm(a: np.ndarray) -> np.ndarray:
    """Hermitian part (A + A^dag)/2."""
    a = np.asarray(a)
    return 0.5 * (a + a.conj().T)


def is_hermitian(a: np.ndarray, tol: float = 1e-10) -> bool:
    a = np.asarray(a)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and frob(a - a.conj().T) <= tol * max(1.0, frob(a))


def eig_hermitian(h: np.ndarray) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    The result satisfies ||U L U^dag - H||_F and ||U^dag U - I||_F below
    eig_tol = max(1e-13, 1e-12 * dim * ||H||_F).
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {h.shape}")
    if not np.all(np.isfinite(h)):
        raise ValueError("matrix contains NaN/Inf entries")
    hs = herm(h)
    w, u = np.linalg.eigh(hs)
    scale = frob(hs)
    tol = max(1e-13, 1e-12 * h.shape[0] * scale)
    recon = frob(u @ np.diag(w) @ u.conj().T - hs)
    unit = frob(u.conj().T @ u - np.eye(h.shape[0]))
    if recon > tol or unit > tol:
        raise ConvergenceError(
            f"eigendecomposition residual {recon:.3e} (unitarity {unit:.3e}) exceeds "
            f"tolerance {tol:.3e} for dim {h.shape[0]}, ||H||_F = {scale:.3e}"
        )
    return SpectralDecomposition(w, u)


def _support_mask(w: np.ndarray, rank_tol: float) -> np.ndarray:
    lam_max = float(np.max(np.abs(w))) if w.size else 0.0
    return np.abs(w) >= rank_tol * lam_max if lam_max > 0 else np.zeros_like(w, bool)


def matrix_function(h, f, rank_tol: float = RANK_TOL, strict: bool = False) -> np.ndarray:
    """Apply a spectral function to a Hermitian matrix on its support.

    f is one of "sqrt", "log", "inverse", or ("power", t).  For log,
    inverse and negative powers the function acts only on eigenvalues
    >= rank_tol * lambda_max; smaller ones map to 0 (pseudo-function).
    With strict=True, a below-support eigenvalue raises instead for log
    and inverse.
    """
    w, u = eig_hermitian(h)
    sup = _support_mask(w, rank_tol)
    fw = np.zeros_like(w)
    if f == "sqrt":
        fw[sup] = np.sqrt(np.clip(w[sup], 0.0, None))
    elif f == "log":
        if strict and not np.all(sup):
            raise RankDeficiencyError("log requested on a rank-deficient matrix")
        fw[sup] = np.log(w[sup])
    elif f == "inverse":
        if strict and not np.all(sup):
            raise RankDeficiencyError("inverse requested on a rank-deficient matrix")
        fw[sup] = 1.0 / w[sup]
    elif isinstance(f, tuple) and len(f) == 2 and f[0] == "power":
        t = float(f[1])
        if t < 0 and strict and not np.all(sup):
            raise RankDeficiencyError("negative power requested on a rank-deficient matrix")
        fw[sup] = np.power(w[sup], t)
    else:
        raise ValueError(f"unknown matrix function {f!r}")
    return herm(u @ np.diag(fw) @ u.conj().T)


def support_projector(h, rank_tol: float = RANK_TOL) -> np.ndarray:
    w, u = eig_hermitian(h)
    sup = _support_mask(w, rank_tol)
    return herm(u[:, sup] @ u[:, sup].conj().T)


def solve_lyapunov(rho, x, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Solve X = (L rho + rho L)/2 for Hermitian L (the SLD equation).

    In the eigenbasis of rho, L_ij = 2 X_ij / (lam_i + lam_j); requires
    rho numerically full rank.
    """
    rho = np.asarray(rho, dtype=complex)
    x = np.asarray(x, dtype=complex)
    if rho.shape != x.shape:
        raise DimensionMismatchError(f"shape mismatch: {rho.shape} vs {x.shape}")
    w, u = eig_hermitian(rho)
    if np.min(w) < rank_tol * np.max(w):
        raise RankDeficiencyError(
            f"state is rank deficient (min/max eigenvalue {np.min(w):.3e}/{np.max(w):.3e}); "
            "SLD is not unique"
        )
    xt = u.conj().T @ x @ u
    lt = 2.0 * xt / (w[:, None] + w[None, :])
    return herm(u @ lt @ u.conj().T)


def trace_norm(k) -> float:
    """Sum of singular values."""
    return float(np.sum(np.linalg.svd(np.asarray(k, dtype=complex), compute_uv=False)))


def spabs(g, k) -> float:
    """Weighted trace-norm functional: trace norm of sqrt(G) K sqrt(G)."""
    g = np.asarray(g, dtype=float)
    k = np.asarray(k, dtype=float)
    if g.shape != k.shape or g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise DimensionMismatchError(f"shape mismatch: G {g.shape}, K {k.shape}")
    gs = matrix_function(g, "sqrt").real
    return trace_norm(gs @ k @ gs)
