"""Symmetric-matrix primitives: PSD tests, Loewner order, Schur complements,
square roots and the generalised eigendecomposition of an SPD pair.

Matrices are plain ``numpy.ndarray`` objects. Functions that take a
"symmetric" argument symmetrize it with ``(A + A.T) / 2`` on entry, so
round-off asymmetry never leaks into eigenvalue computations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InputError, NotPositiveDefiniteError

# clipping threshold for slightly negative eigenvalues in spd_sqrt
SQRT_CLIP = 1e-10


def as_matrix(A, name: str = "matrix") -> np.ndarray:
    """Return ``A`` as a finite, square float array."""
    A = np.array(A, dtype=float)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise InputError(f"{name} must be a non-empty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InputError(f"{name} has non-finite entries")
    return A


def sym(A, name: str = "matrix") -> np.ndarray:
    A = as_matrix(A, name)
    return 0.5 * (A + A.T)


def _scale(A: np.ndarray) -> float:
    return max(1.0, float(np.linalg.norm(A, 2)))


def min_eig(A) -> float:
    """Smallest eigenvalue of the symmetric part of ``A``."""
    return float(np.linalg.eigvalsh(sym(A))[0])


def is_psd(A, tol: float = 0.0) -> bool:
    """True iff ``min eig(A) >= -tol * max(1, ||A||_2)``."""
    A = sym(A)
    if tol < 0:
        raise InputError("tol must be non-negative")
    return min_eig(A) >= -tol * _scale(A)


def is_pd(A, tol: float = 0.0) -> bool:
    A = sym(A)
    return min_eig(A) > tol * _scale(A)


def loewner_geq(A, B, tol: float = 0.0) -> bool:
    """``A >= B`` in the Loewner order, i.e. ``A - B`` is PSD."""
    A, B = sym(A, "A"), sym(B, "B")
    if A.shape != B.shape:
        raise DimensionError(f"shape mismatch {A.shape} vs {B.shape}")
    return is_psd(A - B, tol)


def require_pd(A, name: str = "matrix") -> np.ndarray:
    A = sym(A, name)
    if not is_pd(A):
        raise NotPositiveDefiniteError(f"{name} is not positive definite (min eig {min_eig(A):.3g})")
    return A


def spd_inv(A) -> np.ndarray:
    """Inverse of a PD matrix, symmetrized."""
    A = sym(A)
    Ainv = np.linalg.inv(A)
    return 0.5 * (Ainv + Ainv.T)


def schur_complement(P1, P12, P2) -> np.ndarray:
    """``P2 - P12^T P1^{-1} P12`` for a joint matrix ``[[P1, P12], [P12^T, P2]]``."""
    P1 = sym(P1, "P1")
    P2 = sym(P2, "P2")
    P12 = np.asarray(P12, dtype=float)
    if P12.shape != (P1.shape[0], P2.shape[0]):
        raise DimensionError(f"P12 has shape {P12.shape}")
    if not is_pd(P1):
        raise NotPositiveDefiniteError("P1 block is singular")
    S = P2 - P12.T @ np.linalg.solve(P1, P12)
    return 0.5 * (S + S.T)


def spd_sqrt(A) -> np.ndarray:
    """Factor ``S`` with ``S @ S.T == A``.

    Cholesky (lower triangular) for PD input; for singular PSD input an
    eigen-based symmetric root with eigenvalues above ``-1e-10 * scale``
    clipped to zero.
    """
    A = sym(A)
    try:
        return np.linalg.cholesky(A)
    except np.linalg.LinAlgError:
        pass
    w, Q = np.linalg.eigh(A)
    if w[0] < -SQRT_CLIP * _scale(A):
        raise NotPositiveDefiniteError(f"matrix is indefinite (min eig {w[0]:.3g})")
    return (Q * np.sqrt(np.clip(w, 0.0, None))) @ Q.T


@dataclass(frozen=True)
class GevdFactors:
    """``P1 V = P2 V diag(D)`` with ``V^T P2 V = I``; ``D`` ascending."""

    V: np.ndarray
    D: np.ndarray

    def reconstruct(self) -> tuple[np.ndarray, np.ndarray]:
        Vinv = np.linalg.inv(self.V)
        return Vinv.T @ np.diag(self.D) @ Vinv, Vinv.T @ Vinv


def gevd(P1, P2) -> GevdFactors:
    """Generalised eigendecomposition of the SPD pair ``(P1, P2)``.

    Reduces to a standard symmetric problem through the Cholesky factor
    ``P2 = S S^T``: ``S^-1 P1 S^-T = Q diag(D) Q^T`` and ``V = S^-T Q``.
    """
    P1 = require_pd(P1, "P1")
    P2 = require_pd(P2, "P2")
    if P1.shape != P2.shape:
        raise DimensionError(f"shape mismatch {P1.shape} vs {P2.shape}")
    S = np.linalg.cholesky(P2)
    Sinv = np.linalg.inv(S)
    C = Sinv @ P1 @ Sinv.T
    D, Q = np.linalg.eigh(0.5 * (C + C.T))
    V = Sinv.T @ Q
    return GevdFactors(V=V, D=D)


def pd_pair(P1, P2) -> tuple[np.ndarray, np.ndarray]:
    """Validate two PD matrices of equal size."""
    P1 = require_pd(P1, "P1")
    P2 = require_pd(P2, "P2")
    if P1.shape != P2.shape:
        raise DimensionError(f"P1 is {P1.shape} but P2 is {P2.shape}")
    return P1, P2


def sym_sqrt(A) -> np.ndarray:
    """Symmetric square root of a PSD matrix (eigenvalues clipped as in ``spd_sqrt``)."""
    A = sym(A)
    w, Q = np.linalg.eigh(A)
    if w[0] < -SQRT_CLIP * _scale(A):
        raise NotPositiveDefiniteError(f"matrix is indefinite (min eig {w[0]:.3g})")
    R = (Q * np.sqrt(np.clip(w, 0.0, None))) @ Q.T
    return 0.5 * (R + R.T)
