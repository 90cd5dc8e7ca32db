"""Linear fusion of two estimates: weights, fused bounds and the scalar
parameter search over bound families."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import (
    BoundParams,
    ci_upper_bound,
    dual_upper_bound,
    ici_upper_bound,
    lam_to_w,
    lower_bound,
    w_to_lam,
)
from .errors import DimensionError, ParameterError, RankDeficiencyError
from .families import JointCovariance
from .linalg import pd_pair, spd_inv, sym

RULES = ("ci", "dual", "ici")
CRITERIA = ("trace", "det")
REGULARITY_TOL = 1e-10
SINGULAR_TOL = 1e-12

LOG_GRID = np.logspace(-3, 3, 61)
OMEGA_GRID = np.linspace(0.0, 1.0, 21)
INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def stacked_identity(n: int) -> np.ndarray:
    return np.vstack([np.eye(n), np.eye(n)])


@dataclass(frozen=True)
class FusionWeight:
    """``W = [W1, W2]`` with the regularity ``W1 H1 + W2 H2 = I``."""

    W1: np.ndarray
    W2: np.ndarray
    H1: np.ndarray | None = None
    H2: np.ndarray | None = None

    def __post_init__(self):
        n = self.W1.shape[0]
        H1 = np.eye(self.W1.shape[1]) if self.H1 is None else self.H1
        H2 = np.eye(self.W2.shape[1]) if self.H2 is None else self.H2
        err = np.abs(self.W1 @ H1 + self.W2 @ H2 - np.eye(n)).max()
        if err > REGULARITY_TOL * max(1.0, np.abs(self.matrix).max()):
            raise ParameterError(f"weight violates W H = I (error {err:.3g})")

    @classmethod
    def from_matrix(cls, W, n1: int | None = None, H=None) -> "FusionWeight":
        W = np.asarray(W, dtype=float)
        n1 = W.shape[1] // 2 if n1 is None else n1
        H1 = H2 = None
        if H is not None:
            H1, H2 = H[:n1], H[n1:]
        return cls(W[:, :n1], W[:, n1:], H1, H2)

    @property
    def matrix(self) -> np.ndarray:
        return np.hstack([self.W1, self.W2])


@dataclass(frozen=True)
class FusionResult:
    weight: FusionWeight
    fused_bound: np.ndarray
    fused_lower: np.ndarray | None = None
    criterion_value: float = float("nan")
    params: BoundParams | None = None
    rule: str | None = None
    criterion: str | None = None


def criterion_value(A, criterion: str) -> float:
    if criterion == "trace":
        return float(np.trace(A))
    if criterion == "det":
        return float(np.linalg.det(A))
    raise ParameterError(f"unknown criterion {criterion!r}; choose from {CRITERIA}")


def _as_w(W) -> np.ndarray:
    return W.matrix if isinstance(W, FusionWeight) else np.asarray(W, dtype=float)


def ideal_fusion(K, H=None) -> FusionResult:
    """Optimal fusion for a known joint covariance.

    Raises ``RankDeficiencyError`` when ``K`` is numerically singular
    (smallest eigenvalue below ``1e-12`` times the largest).
    """
    K = K.matrix if isinstance(K, JointCovariance) else sym(K, "K")
    n = K.shape[0] // 2
    H = stacked_identity(n) if H is None else np.asarray(H, dtype=float)
    w = np.linalg.eigvalsh(K)
    if w[0] <= SINGULAR_TOL * w[-1]:
        raise RankDeficiencyError(f"joint covariance is singular (eigenvalues {w[0]:.3g} .. {w[-1]:.3g})")
    KinvH = np.linalg.solve(K, H)
    KF = spd_inv(H.T @ KinvH)
    W = KF @ KinvH.T
    return FusionResult(FusionWeight.from_matrix(W, n, H), KF, rule="ideal")


def ci_weights(P1, P2, w: float) -> FusionWeight:
    """CI weight ``(w P1^-1 + (1-w) P2^-1)^-1 [w P1^-1, (1-w) P2^-1]``."""
    P1, P2 = pd_pair(P1, P2)
    if not 0.0 < w < 1.0:
        raise ParameterError(f"w must lie in (0, 1), got {w}")
    I1, I2 = spd_inv(P1), spd_inv(P2)
    N = spd_inv(w * I1 + (1.0 - w) * I2)
    return FusionWeight(N @ (w * I1), N @ ((1.0 - w) * I2))


def fused_bound(W, bound) -> np.ndarray:
    """``W bound W^T``."""
    Wm = _as_w(W)
    bound = np.asarray(bound, dtype=float)
    if bound.shape != (Wm.shape[1], Wm.shape[1]):
        raise DimensionError(f"weight is {Wm.shape} but bound is {bound.shape}")
    F = Wm @ bound @ Wm.T
    return 0.5 * (F + F.T)


def fused_lower(W, P1, P2) -> np.ndarray:
    return fused_bound(W, lower_bound(P1, P2))


def weight_from_bound(M, H=None) -> FusionWeight:
    """``(H^T M^-1 H)^-1 H^T M^-1``."""
    M = sym(M, "M")
    n = M.shape[0] // 2
    H = stacked_identity(n) if H is None else np.asarray(H, dtype=float)
    MinvH = np.linalg.solve(M, H)
    W = spd_inv(H.T @ MinvH) @ MinvH.T
    return FusionWeight.from_matrix(W, n, H)


def fused_from_bound(M, H=None) -> np.ndarray:
    """``(H^T M^-1 H)^-1``, the fused bound for the weight built from ``M``."""
    M = sym(M, "M")
    H = stacked_identity(M.shape[0] // 2) if H is None else np.asarray(H, dtype=float)
    return spd_inv(H.T @ np.linalg.solve(M, H))


def bound_for(P1, P2, rule: str, params: BoundParams) -> np.ndarray:
    if rule == "ci":
        lam = params.lam if params.lam is not None else w_to_lam(params.w)
        return ci_upper_bound(P1, P2, lam)
    if rule in ("dual", "ici"):
        if params.mu is None or params.omega is None:
            raise ParameterError(f"rule {rule!r} needs mu and omega")
        build = dual_upper_bound if rule == "dual" else ici_upper_bound
        return build(P1, P2, params.mu, params.omega)
    raise ParameterError(f"unknown rule {rule!r}; choose from {RULES}")


def golden_section(f, a: float, b: float, tol: float = 1e-10, max_iter: int = 200) -> tuple[float, float]:
    """Minimise a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``."""
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(b - a) <= tol * max(1.0, abs(a) + abs(b)):
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def _cell(grid, i):
    return grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]


def _objective(P1, P2, rule, criterion):
    def value(params: BoundParams) -> float:
        try:
            v = criterion_value(fused_from_bound(bound_for(P1, P2, rule, params)), criterion)
        except np.linalg.LinAlgError:
            return math.inf
        return v if math.isfinite(v) else math.inf
    return value


def optimize_bound(P1, P2, rule: str = "ci", criterion: str = "trace") -> FusionResult:
    """Minimise trace or determinant of the fused bound over a rule's
    scalar parameters: coarse grid, then golden-section refinement inside
    the best grid cell. Ties go to the smaller lam/mu, then smaller omega.
    """
    P1, P2 = pd_pair(P1, P2)
    if rule not in RULES:
        raise ParameterError(f"unknown rule {rule!r}; choose from {RULES}")
    if criterion not in CRITERIA:
        raise ParameterError(f"unknown criterion {criterion!r}; choose from {CRITERIA}")
    value = _objective(P1, P2, rule, criterion)
    logs = np.log(LOG_GRID)

    if rule == "ci":
        vals = np.array([value(BoundParams(lam=l)) for l in LOG_GRID])
        i = int(np.argmin(vals))
        lo, hi = _cell(logs, i)
        t, v = golden_section(lambda t: value(BoundParams(lam=math.exp(t))), lo, hi)
        lam = math.exp(t) if v < vals[i] else float(LOG_GRID[i])
        params = BoundParams(lam=lam, w=lam_to_w(lam))
    else:
        vals = np.array([[value(BoundParams(mu=m, omega=o)) for o in OMEGA_GRID] for m in LOG_GRID])
        i, j = np.unravel_index(int(np.argmin(vals)), vals.shape)
        best_t, best_o, best_v = logs[i], float(OMEGA_GRID[j]), float(vals[i, j])
        t_lo, t_hi = _cell(logs, i)
        o_lo, o_hi = _cell(OMEGA_GRID, j)
        for _ in range(4):
            t, v = golden_section(lambda t: value(BoundParams(mu=math.exp(t), omega=best_o)), t_lo, t_hi)
            if v < best_v:
                best_t, best_v = t, v
            o, v = golden_section(lambda o: value(BoundParams(mu=math.exp(best_t), omega=o)), o_lo, o_hi)
            if v < best_v:
                best_o, best_v = o, v
        params = BoundParams(mu=math.exp(best_t), omega=best_o)

    M = bound_for(P1, P2, rule, params)
    W = weight_from_bound(M)
    F = fused_bound(W, M)
    L = fused_lower(W, P1, P2) if rule == "dual" else None
    return FusionResult(W, F, L, criterion_value(F, criterion), params, rule, criterion)


def fuse(P1, P2, rule: str = "ci", params: BoundParams | None = None, criterion: str = "trace",
         w: float | None = None) -> FusionResult:
    """Fuse with fixed bound parameters, or optimise them when ``params`` is None.

    With ``w`` given the CI weight ``ci_weights(w)`` is used instead of the
    weight derived from the bound, and the bound is evaluated under it.
    """
    P1, P2 = pd_pair(P1, P2)
    if params is None and w is None:
        return optimize_bound(P1, P2, rule, criterion)
    if params is None:
        params = BoundParams(lam=w_to_lam(w), w=w) if rule == "ci" else BoundParams(mu=w_to_lam(w), omega=0.5)
    M = bound_for(P1, P2, rule, params)
    W = ci_weights(P1, P2, w) if w is not None else weight_from_bound(M)
    F = fused_bound(W, M)
    L = fused_lower(W, P1, P2) if rule == "dual" else None
    return FusionResult(W, F, L, criterion_value(F, criterion), params, rule, criterion)
