"""Admissible cross-covariances of two estimates and the joint matrices they
induce.

Three families are supported:

* common noise: ``P12 = X`` with ``X = X^T``, ``0 <= X``, ``X <= P1``,
  ``X <= P2`` (both errors share one identical noise term),
* common information (ICI): ``P12 = P1 G P2`` with ``0 <= G <= P_i^{-1}``,
* unrestricted (CI): any ``P12`` keeping the joint matrix PSD.

Samplers take an explicit ``numpy.random.Generator``; nothing here keeps
state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DimensionError, InputError, ParameterError
from .linalg import (
    GevdFactors,
    gevd,
    is_psd,
    loewner_geq,
    min_eig,
    pd_pair,
    require_pd,
    schur_complement,
    spd_inv,
    spd_sqrt,
    sym,
)

ADMISSIBLE_TOL = 1e-9
UNIT_EIG_TOL = 1e-9  # generalised eigenvalues this close to 1 join neither E1 nor E2

FAMILIES = ("rank1", "omega", "common", "ci_general", "ici")


@dataclass(frozen=True)
class JointCovariance:
    P1: np.ndarray
    P2: np.ndarray
    P12: np.ndarray

    @property
    def n(self) -> int:
        return self.P1.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        K = np.block([[self.P1, self.P12], [self.P12.T, self.P2]])
        return 0.5 * (K + K.T)


@dataclass(frozen=True)
class AdmissibleX:
    """A member ``X`` of the common-noise family.

    ``provenance`` is ``"rank1"``, ``"omega"`` or ``"explicit"``; ``param``
    holds the unit vector or contraction that generated it.
    """

    X: np.ndarray
    provenance: str = "explicit"
    param: np.ndarray | None = None
    binding: int | None = None


@dataclass(frozen=True)
class OmegaFactorization:
    gevd: GevdFactors
    M: np.ndarray
    E1: list[int]
    E2: list[int]
    S1: np.ndarray = field(repr=False)
    S2: np.ndarray = field(repr=False)
    Vinv: np.ndarray = field(repr=False)

    @property
    def p(self) -> int:
        return len(self.E1)

    @property
    def q(self) -> int:
        return len(self.E2)

    @property
    def S1_half(self) -> np.ndarray:
        # Cholesky factor of a diagonal matrix
        return np.sqrt(self.S1)

    @property
    def S2_half(self) -> np.ndarray:
        return np.sqrt(self.S2)


def check_admissible(P1, P2, X, tol: float = ADMISSIBLE_TOL) -> bool:
    """True iff ``X`` is in the common-noise family of ``(P1, P2)``."""
    X = np.asarray(X, dtype=float)
    if not np.allclose(X, X.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(X).max())):
        return False
    return is_psd(X, tol) and loewner_geq(P1, X, tol) and loewner_geq(P2, X, tol)


def check_ici_gamma(P1, P2, G, tol: float = ADMISSIBLE_TOL) -> bool:
    """True iff ``G`` parametrises an ICI cross-covariance ``P1 G P2``."""
    G = sym(G, "Gamma")
    return is_psd(G, tol) and loewner_geq(spd_inv(P1), G, tol) and loewner_geq(spd_inv(P2), G, tol)


def joint_from_x(P1, P2, X) -> JointCovariance:
    """Joint covariance with cross block ``X`` from the common-noise family."""
    P1, P2 = pd_pair(P1, P2)
    if isinstance(X, AdmissibleX):
        X = X.X
    X = np.asarray(X, dtype=float)
    if X.shape != P1.shape:
        raise DimensionError(f"X has shape {X.shape}, expected {P1.shape}")
    if not check_admissible(P1, P2, X):
        raise ParameterError("X is not in the common-noise family of (P1, P2)")
    return JointCovariance(P1, P2, 0.5 * (X + X.T))


def validate_joint(K: JointCovariance, tol: float = ADMISSIBLE_TOL) -> tuple[bool, float]:
    """PSD status of the full joint matrix and its smallest eigenvalue."""
    J = K.matrix
    margin = min_eig(J)
    return is_psd(J, tol), margin


def random_unit_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    while True:
        x = rng.standard_normal(n)
        nrm = np.linalg.norm(x)
        if nrm > 1e-12:
            return x / nrm


def haar_orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    Z = rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    return Q * np.sign(np.diag(R))


def random_contraction(rng: np.random.Generator, p: int, q: int) -> np.ndarray:
    """``U diag(s) V^T`` with Haar ``U``, ``V`` and ``s ~ U[0, 1]``."""
    k = min(p, q)
    s = np.zeros((p, q))
    s[range(k), range(k)] = rng.uniform(0.0, 1.0, size=k)
    if k == 0:
        return s
    return haar_orthogonal(rng, p) @ s @ haar_orthogonal(rng, q).T


def sample_rank1(P1, P2, x) -> AdmissibleX:
    """Maximal rank-1 member ``x x^T / max(x^T P1^-1 x, x^T P2^-1 x)``."""
    P1, P2 = pd_pair(P1, P2)
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != P1.shape[0]:
        raise DimensionError(f"x has length {x.shape[0]}, expected {P1.shape[0]}")
    nrm = np.linalg.norm(x)
    if nrm == 0.0:
        raise InputError("x must be non-zero")
    if abs(nrm - 1.0) > 1e-12:
        raise InputError(f"x must be a unit vector, |x| = {nrm!r}")
    q1 = x @ np.linalg.solve(P1, x)
    q2 = x @ np.linalg.solve(P2, x)
    binding = 1 if q1 >= q2 else 2
    X = np.outer(x, x) / max(q1, q2)
    return AdmissibleX(X, "rank1", x, binding)


def omega_factorization(P1, P2) -> OmegaFactorization:
    P1, P2 = pd_pair(P1, P2)
    g = gevd(P1, P2)
    d = g.D
    E1 = [j for j in range(d.size) if d[j] < 1.0 - UNIT_EIG_TOL]
    E2 = [j for j in range(d.size) if d[j] > 1.0 + UNIT_EIG_TOL]
    S1 = np.diag([1.0 / (1.0 / d[j] - 1.0) for j in E1])
    S2 = np.diag([1.0 / (1.0 - 1.0 / d[j]) for j in E2])
    return OmegaFactorization(g, np.maximum(d, 1.0), E1, E2, S1.reshape(len(E1), len(E1)),
                              S2.reshape(len(E2), len(E2)), np.linalg.inv(g.V))


def sample_omega(F: OmegaFactorization, Omega=None) -> AdmissibleX:
    """Maximal member parametrised by a contraction ``Omega`` (p x q).

    Evaluated in the Woodbury form ``M - M E^T (S_Omega + E M E^T)^-1 E M``,
    which stays finite when ``I - Omega Omega^T`` is singular and then
    yields the rank-deficient limit member.
    """
    p, q = F.p, F.q
    if Omega is None:
        Omega = np.zeros((p, q))
    Omega = np.array(Omega, dtype=float).reshape(p, q) if p * q else np.zeros((p, q))
    if p * q and not is_psd(np.eye(p) - Omega @ Omega.T, 1e-9):
        raise ParameterError("Omega is not a contraction")
    return AdmissibleX(_omega_member(F, Omega), "omega", Omega)


def _omega_member(F: OmegaFactorization, Omega: np.ndarray) -> np.ndarray:
    n = F.M.size
    E = np.eye(n)[F.E1 + F.E2]
    A, C = F.S1_half, F.S2_half
    S_omega = np.block([[F.S1, A @ Omega @ C.T], [C @ Omega.T @ A.T, F.S2]])
    M = np.diag(F.M)
    if E.shape[0]:
        inner = S_omega + E @ M @ E.T
        Xt = M - M @ E.T @ np.linalg.solve(inner, E @ M)
    else:
        Xt = M
    X = F.Vinv.T @ Xt @ F.Vinv
    return 0.5 * (X + X.T)


def sample_ci_general(P1, P2, C) -> JointCovariance:
    """Unrestricted joint with ``P12 = sqrt(P1) C sqrt(P2)^T``.

    Singular values of ``C`` above one are clipped.
    """
    P1, P2 = pd_pair(P1, P2)
    C = np.asarray(C, dtype=float)
    if C.shape != P1.shape:
        raise DimensionError(f"C has shape {C.shape}, expected {P1.shape}")
    U, s, Vt = np.linalg.svd(C)
    C = (U * np.minimum(s, 1.0)) @ Vt
    return JointCovariance(P1, P2, spd_sqrt(P1) @ C @ spd_sqrt(P2).T)


def sample_ici(P1, P2, G) -> JointCovariance:
    P1, P2 = pd_pair(P1, P2)
    G = sym(G, "Gamma")
    if G.shape != P1.shape:
        raise DimensionError(f"Gamma has shape {G.shape}, expected {P1.shape}")
    if not check_ici_gamma(P1, P2, G):
        raise ParameterError("Gamma is outside the ICI family")
    return JointCovariance(P1, P2, P1 @ G @ P2)


Sampler = Callable[[np.random.Generator], JointCovariance]


def family_sampler(P1, P2, family: str) -> Sampler:
    """Random admissible joints of one family.

    ``"common"`` alternates between rank-1 and Omega members; ``"ici"``
    draws Gamma from the common-noise family of ``(P1^-1, P2^-1)``, which
    is the same set. Factors are computed once, so samples are built
    without re-validating each one.
    """
    P1, P2 = pd_pair(P1, P2)
    n = P1.shape[0]
    if family not in FAMILIES:
        raise ParameterError(f"unknown family {family!r}; choose from {FAMILIES}")
    Q1, Q2 = spd_inv(P1), spd_inv(P2)
    F = omega_factorization(P1, P2)
    Fi = omega_factorization(Q1, Q2)
    S1, S2 = spd_sqrt(P1), spd_sqrt(P2)

    def joint(X):
        return JointCovariance(P1, P2, X)

    def max_rank1(A1, A2, rng):
        x = random_unit_vector(rng, n)
        return np.outer(x, x) / max(x @ A1 @ x, x @ A2 @ x)

    def rank1(rng):
        return joint(max_rank1(Q1, Q2, rng))

    def omega(rng):
        return joint(_omega_member(F, random_contraction(rng, F.p, F.q)))

    def common(rng):
        return rank1(rng) if rng.uniform() < 0.5 else omega(rng)

    def ci_general(rng):
        return JointCovariance(P1, P2, S1 @ random_contraction(rng, n, n) @ S2.T)

    def ici(rng):
        if rng.uniform() < 0.5:
            G = max_rank1(P1, P2, rng)
        else:
            G = _omega_member(Fi, random_contraction(rng, Fi.p, Fi.q))
        return JointCovariance(P1, P2, P1 @ G @ P2)

    return {"rank1": rank1, "omega": omega, "common": common, "ci_general": ci_general, "ici": ici}[family]


def schur_margin(K: JointCovariance) -> float:
    return min_eig(schur_complement(K.P1, K.P12, K.P2))
