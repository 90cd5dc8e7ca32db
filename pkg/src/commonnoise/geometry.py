"""Ellipses of 2x2 covariance matrices and sampled fused sets.

A PSD matrix ``S`` is drawn as the curve ``{e : e^T S^-1 e = 1}``; a
rank-1 ``S`` collapses to a segment through the origin. Containment is
decided on the matrices (Loewner order), never on polyline points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParameterError
from .families import (
    family_sampler,
    joint_from_x,
)
from .fusion import FusionWeight, fused_bound
from .linalg import loewner_geq, pd_pair, sym, sym_sqrt

DEGENERATE_TOL = 1e-10

FAMILY_ALIASES = {
    "common_noise_rank1": "rank1",
    "common_noise_omega": "omega",
    "ci_general": "ci_general",
    "rank1": "rank1",
    "omega": "omega",
    "common": "common",
    "ici": "ici",
}


@dataclass(frozen=True)
class EllipsePolyline:
    points: np.ndarray  # (m, 2)
    label: str = ""
    degenerate: bool = False


def is_degenerate(S) -> bool:
    w = np.linalg.eigvalsh(sym(S))
    return w[0] <= DEGENERATE_TOL * max(w[-1], 0.0)


def ellipse_boundary(S, m: int = 256, label: str = "") -> EllipsePolyline:
    """Points ``S^(1/2) [cos t_k, sin t_k]`` with ``t_k = 2 pi k / m``."""
    S = sym(S)
    if S.shape != (2, 2):
        raise DimensionError(f"ellipses need a 2x2 matrix, got {S.shape}")
    if m < 4:
        raise ParameterError("need at least 4 points")
    R = sym_sqrt(S)
    t = 2.0 * np.pi * np.arange(m) / m
    pts = (R @ np.vstack([np.cos(t), np.sin(t)])).T
    return EllipsePolyline(pts, label, is_degenerate(S))


def ellipse_contains(S_outer, S_inner, tol: float = 1e-9) -> bool:
    """E(S_inner) lies inside E(S_outer)."""
    return loewner_geq(S_outer, S_inner, tol)


def fused_set_samples(P1, P2, W, family: str, n_samples: int, seed: int) -> list[np.ndarray]:
    """Fused matrices ``W K W^T`` for sampled admissible joints ``K``.

    Common-noise families start with the uncorrelated member ``X = 0``.
    """
    P1, P2 = pd_pair(P1, P2)
    try:
        fam = FAMILY_ALIASES[family]
    except KeyError:
        raise ParameterError(f"unknown family {family!r}") from None
    if not isinstance(W, FusionWeight):
        W = FusionWeight.from_matrix(W)
    sampler = family_sampler(P1, P2, fam)
    rng = np.random.default_rng(seed)
    out = []
    if fam in ("rank1", "omega", "common") and n_samples > 0:
        out.append(fused_bound(W, joint_from_x(P1, P2, np.zeros_like(P1)).matrix))
    while len(out) < n_samples:
        out.append(fused_bound(W, sampler(rng).matrix))
    return out
