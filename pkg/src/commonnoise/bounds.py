"""Loewner upper and lower bounds of joint covariance families.

All bounds are returned as full ``2n x 2n`` symmetric arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParameterError
from .families import JointCovariance, Sampler
from .linalg import pd_pair, spd_inv, sym

VIOLATION_THRESHOLD = 1e-8


@dataclass(frozen=True)
class BoundParams:
    """Scalar parameters selecting one member of a bound family."""

    mu: float | None = None
    omega: float | None = None
    lam: float | None = None
    w: float | None = None

    def __post_init__(self):
        if self.mu is not None and not self.mu > 0:
            raise ParameterError(f"mu must be positive, got {self.mu}")
        if self.lam is not None and not self.lam > 0:
            raise ParameterError(f"lambda must be positive, got {self.lam}")
        if self.omega is not None and not 0.0 <= self.omega <= 1.0:
            raise ParameterError(f"omega must lie in [0, 1], got {self.omega}")
        if self.w is not None and not 0.0 < self.w < 1.0:
            raise ParameterError(f"w must lie in (0, 1), got {self.w}")
        if self.lam is not None and self.w is not None:
            if abs(self.w - lam_to_w(self.lam)) > 1e-12:
                raise ParameterError("w and lambda are inconsistent: w != (1 + 1/lambda)^-1")

    def as_dict(self) -> dict:
        return {k: v for k, v in vars(self).items() if v is not None}


def lam_to_w(lam: float) -> float:
    return 1.0 / (1.0 + 1.0 / lam)


def w_to_lam(w: float) -> float:
    return w / (1.0 - w)


def _check_mu(mu):
    if not mu > 0:
        raise ParameterError(f"mu must be positive, got {mu}")


def _check_omega(omega):
    if not 0.0 <= omega <= 1.0:
        raise ParameterError(f"omega must lie in [0, 1], got {omega}")


def b_matrix(P1, P2, omega: float) -> np.ndarray:
    """``(omega P1^-1 + (1 - omega) P2^-1)^-1``."""
    P1, P2 = pd_pair(P1, P2)
    _check_omega(omega)
    return spd_inv(omega * spd_inv(P1) + (1.0 - omega) * spd_inv(P2))


def b_property_margin(P1, P2, B, n_directions: int = 64, seed: int = 0) -> float:
    """Smallest ``max(x'P1^-1x, x'P2^-1x) - x'B^-1x`` over random unit ``x``.

    Non-negative when ``B`` passes the check. Coordinate axes are always
    included alongside the random directions.
    """
    P1, P2 = pd_pair(P1, P2)
    B = sym(B, "B")
    n = P1.shape[0]
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n_directions, n))
    X = np.vstack([np.eye(n), X / np.linalg.norm(X, axis=1, keepdims=True)])
    q = lambda A: np.einsum("ij,jk,ik->i", X, A, X)
    return float(np.min(np.maximum(q(spd_inv(P1)), q(spd_inv(P2))) - q(spd_inv(B))))


def _two_sided(P1, P2, mu, inner, left1, left2):
    top = left1 / np.sqrt(mu)
    bottom = left2 * np.sqrt(mu)
    G = np.vstack([top, bottom])
    n = P1.shape[0]
    Mb = np.zeros((2 * n, 2 * n))
    Mb[:n, :n] = P1
    Mb[n:, n:] = P2
    Mb += 0.5 * G @ inner @ G.T
    return 0.5 * (Mb + Mb.T)


def dual_upper_bound(P1, P2, mu: float, omega: float = 0.5, *, B=None,
                     n_directions: int = 64, seed: int = 0) -> np.ndarray:
    """Upper bound of the common-noise joint family.

    ``blkdiag(P1, P2) + 1/2 [mu^-1/2 I; mu^1/2 I] B [mu^-1/2 I; mu^1/2 I]^T``

    ``B`` defaults to ``b_matrix(P1, P2, omega)``. A caller-supplied ``B``
    is checked for ``x'B^-1x <= max_i x'P_i^-1x`` on ``n_directions``
    random directions and rejected if the check fails.
    """
    P1, P2 = pd_pair(P1, P2)
    _check_mu(mu)
    if B is None:
        B = b_matrix(P1, P2, omega)
    else:
        B = sym(B, "B")
        if B.shape != P1.shape:
            raise DimensionError(f"B has shape {B.shape}, expected {P1.shape}")
        margin = b_property_margin(P1, P2, B, n_directions, seed)
        if margin < -1e-9 * max(1.0, np.linalg.norm(spd_inv(B), 2)):
            raise ParameterError(f"B fails the max-quadratic-form property (margin {margin:.3g})")
    I = np.eye(P1.shape[0])
    return _two_sided(P1, P2, mu, B, I, I)


def ci_upper_bound(P1, P2, lam: float) -> np.ndarray:
    """``blkdiag((1 + 1/lam) P1, (1 + lam) P2)``."""
    P1, P2 = pd_pair(P1, P2)
    if not lam > 0:
        raise ParameterError(f"lambda must be positive, got {lam}")
    n = P1.shape[0]
    M = np.zeros((2 * n, 2 * n))
    M[:n, :n] = (1.0 + 1.0 / lam) * P1
    M[n:, n:] = (1.0 + lam) * P2
    return M


def ici_upper_bound(P1, P2, mu: float, omega: float) -> np.ndarray:
    """Upper bound of the common-information (ICI) joint family."""
    P1, P2 = pd_pair(P1, P2)
    _check_mu(mu)
    _check_omega(omega)
    inner = spd_inv(omega * P1 + (1.0 - omega) * P2)
    return _two_sided(P1, P2, mu, inner, P1, P2)


def lower_bound(P1, P2) -> np.ndarray:
    """``[P1; P2] (P1 + P2)^-1 [P1; P2]^T``, dominated by every common-noise joint."""
    P1, P2 = pd_pair(P1, P2)
    G = np.vstack([P1, P2])
    L = G @ np.linalg.solve(P1 + P2, G.T)
    return 0.5 * (L + L.T)


def ci_dominance_gap(P1, P2, lam: float) -> np.ndarray:
    """``M_CI(lam) - M(mu=lam, omega=1/2)``, computed by subtraction."""
    return ci_upper_bound(P1, P2, lam) - dual_upper_bound(P1, P2, lam, 0.5)


def ci_dominance_outer(P1, P2, lam: float) -> np.ndarray:
    """Closed form of the CI dominance gap as a rank-n outer product."""
    P1, P2 = pd_pair(P1, P2)
    if not lam > 0:
        raise ParameterError(f"lambda must be positive, got {lam}")
    G = np.vstack([P1 / np.sqrt(lam), -np.sqrt(lam) * P2])
    out = G @ np.linalg.solve(P1 + P2, G.T)
    return 0.5 * (out + out.T)


@dataclass
class DominanceReport:
    min_margin: float
    worst_sample: JointCovariance | None
    worst_index: int
    n_samples: int
    threshold: float

    @property
    def violated(self) -> bool:
        return self.min_margin < -self.threshold


def sample_joints(sampler: Sampler, n_samples: int, seed: int) -> list[JointCovariance]:
    rng = np.random.default_rng(seed)
    return [sampler(rng) for _ in range(n_samples)]


def _stack(joints) -> np.ndarray:
    return np.stack([K.matrix for K in joints])


def dominance_margins(upper, lower) -> np.ndarray:
    """Minimum eigenvalue of ``upper - lower`` per sample.

    Either argument may be a single matrix or a stack of matrices.
    """
    D = np.asarray(upper, dtype=float) - np.asarray(lower, dtype=float)
    D = 0.5 * (D + np.swapaxes(D, -1, -2))
    return np.linalg.eigvalsh(D)[..., 0]


def _report(margins, joints, scale) -> DominanceReport:
    i = int(np.argmin(margins))
    return DominanceReport(float(margins[i]), joints[i], i, len(joints), VIOLATION_THRESHOLD * scale)


def verify_upper(bound, sampler: Sampler, n_samples: int, seed: int, joints=None) -> DominanceReport:
    """Monte-Carlo check that ``bound - K`` is PSD for sampled joints ``K``.

    A precomputed ``joints`` list can be passed to reuse one sample set
    across many bounds.
    """
    bound = sym(bound, "bound")
    if joints is None:
        joints = sample_joints(sampler, n_samples, seed)
    if joints[0].matrix.shape != bound.shape:
        raise DimensionError("bound and joint dimensions differ")
    margins = dominance_margins(bound, _stack(joints))
    return _report(margins, joints, max(1.0, np.linalg.norm(bound, 2)))


def verify_lower(bound, sampler: Sampler, n_samples: int, seed: int, joints=None) -> DominanceReport:
    """Monte-Carlo check that ``K - bound`` is PSD for sampled joints ``K``."""
    bound = sym(bound, "bound")
    if joints is None:
        joints = sample_joints(sampler, n_samples, seed)
    stack = _stack(joints)
    margins = dominance_margins(stack, bound)
    scale = max(1.0, float(np.max(np.linalg.norm(stack, 2, axis=(1, 2)))))
    return _report(margins, joints, scale)
