"""Polyline data for the four illustration figures of the 2x2 example."""

from __future__ import annotations

import math

import numpy as np

from .bounds import ci_upper_bound, dual_upper_bound, lower_bound
from .families import joint_from_x, omega_factorization, sample_omega, sample_rank1
from .fusion import FusionWeight, ci_weights, fused_bound, fused_from_bound, ideal_fusion
from .geometry import EllipsePolyline, ellipse_boundary, fused_set_samples
from .linalg import pd_pair

EXAMPLE_P1 = np.array([[9.0, 3.0], [3.0, 4.0]])
EXAMPLE_P2 = np.array([[4.0, -3.0], [-3.0, 9.0]])

PHIS = (-math.pi / 4, 0.0, math.pi / 4, math.pi / 2)
PHI_NAMES = ("-pi/4", "0", "pi/4", "pi/2")
OMEGAS = (-1.0, -0.5, 0.0, 0.5, 1.0)
MUS = (1 / 3, 1.0, 3.0)
MU_NAMES = ("1/3", "1", "3")
BOUND_OMEGAS = (0.0, 0.5, 1.0)
LAMS = MUS


def rank1_members(P1, P2):
    return [(name, sample_rank1(P1, P2, [math.cos(phi), math.sin(phi)]).X)
            for name, phi in zip(PHI_NAMES, PHIS)]


def omega_members(P1, P2):
    F = omega_factorization(P1, P2)
    return [(f"{om:g}", sample_omega(F, np.full((F.p, F.q), om)).X) for om in OMEGAS]


def figure_data(P1=None, P2=None, n_samples: int = 200, seed: int = 0,
                m: int = 128) -> dict[str, list[EllipsePolyline]]:
    """Labelled polylines per figure.

    fig1: individual ellipses, rank-1 common-noise segments and their ideal
    fusions. fig2: Omega-family members (equal to their ideal fusions).
    fig3: fused upper bounds over (mu, omega). fig4: fused sets, fused
    bound families and the fused lower bound for two weights.
    """
    P1 = EXAMPLE_P1 if P1 is None else P1
    P2 = EXAMPLE_P2 if P2 is None else P2
    P1, P2 = pd_pair(P1, P2)
    ell = lambda S, label: ellipse_boundary(S, m, label)
    base = [ell(P1, "P1"), ell(P2, "P2")]

    fig1 = list(base)
    r1 = rank1_members(P1, P2)
    fig1 += [ell(X, f"X_phi={name}") for name, X in r1]
    fig1 += [ell(ideal_fusion(joint_from_x(P1, P2, X)).fused_bound, f"ideal_phi={name}") for name, X in r1]

    om = omega_members(P1, P2)
    fig2 = list(base) + [ell(X, f"X_omega={name}") for name, X in om]

    fig3 = list(base)
    for o in BOUND_OMEGAS:
        for mname, mu in zip(MU_NAMES, MUS):
            fig3.append(ell(fused_from_bound(dual_upper_bound(P1, P2, mu, o)), f"MF_omega={o:g}_mu={mname}"))

    fig4 = []
    weights = {
        "wci": ci_weights(P1, P2, 0.5),
        "whalf": FusionWeight(0.5 * np.eye(2), 0.5 * np.eye(2)),
    }
    for k, (wname, W) in enumerate(weights.items()):
        for name, X in r1:
            fig4.append(ell(fused_bound(W, joint_from_x(P1, P2, X).matrix), f"{wname}/KF_phi={name}"))
        for name, X in om:
            fig4.append(ell(fused_bound(W, joint_from_x(P1, P2, X).matrix), f"{wname}/KF_omega={name}"))
        for fam in ("common", "ci_general"):
            for i, S in enumerate(fused_set_samples(P1, P2, W, fam, n_samples, seed + k)):
                fig4.append(ell(S, f"{wname}/{fam}_sample_{i:04d}"))
        for o in BOUND_OMEGAS:
            for mname, mu in zip(MU_NAMES, MUS):
                fig4.append(ell(fused_bound(W, dual_upper_bound(P1, P2, mu, o)), f"{wname}/dual_omega={o:g}_mu={mname}"))
        for lname, lam in zip(MU_NAMES, LAMS):
            fig4.append(ell(fused_bound(W, ci_upper_bound(P1, P2, lam)), f"{wname}/ci_lambda={lname}"))
        fig4.append(ell(fused_bound(W, lower_bound(P1, P2)), f"{wname}/lower"))

    return {"fig1": fig1, "fig2": fig2, "fig3": fig3, "fig4": fig4}
