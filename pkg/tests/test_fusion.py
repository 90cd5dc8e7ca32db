import numpy as np
import pytest

from commonnoise.bounds import BoundParams, ci_upper_bound, dual_upper_bound, lam_to_w
from commonnoise.errors import ParameterError, RankDeficiencyError
from commonnoise.families import (
    JointCovariance,
    family_sampler,
    joint_from_x,
    omega_factorization,
    sample_omega,
)
from commonnoise.fusion import (
    FusionWeight,
    ci_weights,
    fuse,
    fused_bound,
    fused_from_bound,
    fused_lower,
    golden_section,
    ideal_fusion,
    optimize_bound,
    weight_from_bound,
)
from commonnoise.linalg import min_eig, spd_inv

from conftest import random_spd
import oracles as o

HALF = FusionWeight(0.5 * np.eye(2), 0.5 * np.eye(2))


def ci_trace_grid_oracle(P1, P2, step=1e-4):
    """argmin over a dense w grid of trace((w P1^-1 + (1-w) P2^-1)^-1)."""
    ws = np.arange(step, 1.0, step)
    I1, I2 = np.linalg.inv(P1), np.linalg.inv(P2)
    tr = [np.trace(np.linalg.inv(w * I1 + (1 - w) * I2)) for w in ws]
    return ws[int(np.argmin(tr))]


def test_weight_regularity_enforced():
    with pytest.raises(ParameterError):
        FusionWeight(np.eye(2), np.eye(2))


def test_ideal_fusion_examples(P1, P2):
    I, Z = np.eye(2), np.zeros((2, 2))
    res = ideal_fusion(JointCovariance(I, I, Z))
    assert np.allclose(res.weight.matrix, np.hstack([0.5 * I, 0.5 * I]))
    assert np.allclose(res.fused_bound, 0.5 * I)
    res = ideal_fusion(joint_from_x(P1, P2, Z))
    assert np.allclose(res.fused_bound, 27 / 13 * I, rtol=1e-12, atol=1e-13)


@pytest.mark.parametrize("om", [-0.5, 0.0, 0.5])
def test_ideal_fusion_equals_omega_member(P1, P2, om):
    X = sample_omega(omega_factorization(P1, P2), [[om]]).X
    KF = ideal_fusion(joint_from_x(P1, P2, X)).fused_bound
    assert np.linalg.norm(KF - X) <= 1e-8 * np.linalg.norm(X)


def test_ideal_fusion_singular_joint():
    P = np.array([[2.0, 0.5], [0.5, 1.0]])
    with pytest.raises(RankDeficiencyError):
        ideal_fusion(joint_from_x(P, P, P))


def test_ci_weights_examples(P1, P2):
    P = np.array([[2.0, 0.5], [0.5, 1.0]])
    W = ci_weights(P, P, 0.5)
    assert np.allclose(W.matrix, np.hstack([0.5 * np.eye(2), 0.5 * np.eye(2)]))
    W = ci_weights(P1, P2, 0.5)
    # B(1/2) * 1/2 P1^-1 with B(1/2) = (54/13) I and P1^-1 = (1/27) [[4, -3], [-3, 9]]
    W1 = o.mul(o.scale(o.Fr(54, 13), o.frac(np.eye(2))), o.scale(o.Fr(1, 2), o.inv2(o.frac(P1))))
    assert W1 == o.scale(o.Fr(1, 13), o.frac([[4, -3], [-3, 9]]))
    assert np.allclose(W.W1, o.to_float(W1), rtol=1e-12, atol=1e-14)
    assert np.allclose(W.W2, np.array([[9, 3], [3, 4]]) / 13, rtol=1e-12, atol=1e-14)
    assert np.allclose(W.W1 + W.W2, np.eye(2), atol=1e-14)
    W = ci_weights(P1, P2, 1e-6)
    assert np.linalg.norm(W.matrix - np.hstack([np.zeros((2, 2)), np.eye(2)])) < 1e-5
    with pytest.raises(ParameterError):
        ci_weights(P1, P2, 1.0)


def test_fused_bound_examples(P1, P2):
    Z = np.zeros((2, 2))
    B = np.block([[2 * P1, Z], [Z, 2 * P2]])
    assert np.allclose(fused_bound(HALF, B), 6.5 * np.eye(2))
    W = ci_weights(P1, P2, 0.5)
    assert np.allclose(fused_bound(W, ci_upper_bound(P1, P2, 1.0)), 54 / 13 * np.eye(2), rtol=1e-12)
    assert np.allclose(fused_from_bound(ci_upper_bound(P1, P2, 1.0)), 54 / 13 * np.eye(2), rtol=1e-12)


@pytest.mark.parametrize("lam", [1 / 3, 1.0, 3.0])
def test_degeneration_to_equality(P1, P2, lam):
    W = ci_weights(P1, P2, lam_to_w(lam))
    Mci = ci_upper_bound(P1, P2, lam)
    gap = fused_bound(W, Mci - dual_upper_bound(P1, P2, lam, 0.5))
    assert np.linalg.norm(gap, 2) <= 1e-10 * np.linalg.norm(Mci, 2)


def test_fused_lower_examples(P1, P2):
    # (1/4)(P1 + P2)(P1 + P2)^-1(P1 + P2) = (P1 + P2)/4 = (13/4) I
    assert np.allclose(fused_lower(HALF, P1, P2), 3.25 * np.eye(2), rtol=1e-12)
    P = np.array([[2.0, 0.5], [0.5, 1.0]])
    assert np.allclose(fused_lower(HALF, P, P), P / 2)


@pytest.mark.parametrize("W", [HALF, ci_weights(np.array([[9.0, 3.0], [3.0, 4.0]]),
                                                np.array([[4.0, -3.0], [-3.0, 9.0]]), 0.3)])
def test_fused_joints_dominate_fused_lower(P1, P2, W):
    LF = fused_lower(W, P1, P2)
    assert min_eig(LF) >= 0 and np.linalg.norm(LF) > 0
    sampler = family_sampler(P1, P2, "common")
    rng = np.random.default_rng(8)
    for _ in range(500):
        KF = fused_bound(W, sampler(rng).matrix)
        assert min_eig(KF - LF) >= -1e-9 * np.linalg.norm(KF, 2)


def test_weight_from_bound_examples(P1, P2):
    Z = np.zeros((2, 2))
    W = weight_from_bound(np.block([[P1, Z], [Z, P2]]))
    N = spd_inv(spd_inv(P1) + spd_inv(P2))
    assert np.allclose(W.W1, N @ spd_inv(P1))
    assert np.allclose(W.W2, N @ spd_inv(P2))
    for lam in (1 / 3, 1.0, 3.0):
        Wci = ci_weights(P1, P2, lam_to_w(lam))
        assert np.allclose(weight_from_bound(dual_upper_bound(P1, P2, lam, 0.5)).matrix, Wci.matrix, atol=1e-10, rtol=0)
        assert np.allclose(weight_from_bound(ci_upper_bound(P1, P2, lam)).matrix, Wci.matrix, atol=1e-10, rtol=0)


def test_weight_regularity_random(rng):
    for _ in range(200):
        n = int(rng.integers(1, 5))
        P1, P2 = random_spd(rng, n), random_spd(rng, n)
        for W in (ci_weights(P1, P2, rng.uniform(0.01, 0.99)),
                  weight_from_bound(dual_upper_bound(P1, P2, np.exp(rng.uniform(-2, 2)), rng.uniform()))):
            assert np.abs(W.W1 + W.W2 - np.eye(n)).max() <= 1e-10 * max(1.0, np.abs(W.matrix).max())


def test_congruence_monotone(rng):
    for _ in range(200):
        n = int(rng.integers(1, 4))
        B = random_spd(rng, 2 * n)
        A = B + random_spd(rng, 2 * n) * rng.uniform(0, 1)
        W = rng.standard_normal((n, 2 * n))
        assert min_eig(W @ A @ W.T - W @ B @ W.T) >= -1e-9 * np.linalg.norm(W @ A @ W.T, 2)


@pytest.mark.parametrize("omega", [0.0, 0.5, 1.0])
def test_example_mu_symmetry(P1, P2, omega):
    a = fused_bound(HALF, dual_upper_bound(P1, P2, 1 / 3, omega))
    b = fused_bound(HALF, dual_upper_bound(P1, P2, 3.0, omega))
    assert np.linalg.norm(a - b) <= 1e-9


@pytest.mark.parametrize("omega", [0.0, 0.5, 1.0])
def test_mu_limits(P1, P2, omega):
    lo = fused_from_bound(dual_upper_bound(P1, P2, 1e-6, omega))
    hi = fused_from_bound(dual_upper_bound(P1, P2, 1e6, omega))
    assert np.linalg.norm(lo - P2) <= 1e-3 * np.linalg.norm(P2)
    assert np.linalg.norm(hi - P1) <= 1e-3 * np.linalg.norm(P1)


def test_golden_section_quadratic():
    x, fx = golden_section(lambda t: (t - 0.3) ** 2, -1.0, 2.0)
    assert x == pytest.approx(0.3, abs=1e-6)


def test_optimize_ci_trace_matches_grid(P1, P2):
    res = optimize_bound(P1, P2, "ci", "trace")
    assert abs(res.params.w - ci_trace_grid_oracle(P1, P2)) <= 1e-3
    assert res.params.w == pytest.approx(0.5, abs=1e-3)


def test_optimize_ci_asymmetric_pair():
    P1 = np.diag([1.0, 9.0])
    P2 = np.array([[6.0, 1.0], [1.0, 2.0]])
    res = optimize_bound(P1, P2, "ci", "trace")
    assert abs(res.params.w - ci_trace_grid_oracle(P1, P2)) <= 1e-3
    assert res.criterion_value == pytest.approx(np.trace(res.fused_bound))


def test_optimize_det_criterion(P1, P2):
    res = optimize_bound(P1, P2, "ci", "det")
    ws = np.arange(1e-4, 1.0, 1e-4)
    I1, I2 = np.linalg.inv(P1), np.linalg.inv(P2)
    det = [1 / np.linalg.det(w * I1 + (1 - w) * I2) for w in ws]
    assert abs(res.params.w - ws[int(np.argmin(det))]) <= 1e-3


def test_optimize_symmetric_pair_gives_input():
    P = np.array([[2.0, 0.5], [0.5, 1.0]])
    for rule in ("ci", "dual"):
        res = optimize_bound(P, P, rule, "trace")
        assert np.allclose(res.fused_bound, P, rtol=1e-9)


def test_dual_half_matches_ci_fused_bound(P1, P2):
    for lam in (0.1, 1 / 3, 1.0, 3.0, 10.0):
        a = fused_from_bound(dual_upper_bound(P1, P2, lam, 0.5))
        b = fused_from_bound(ci_upper_bound(P1, P2, lam))
        assert np.allclose(a, b, rtol=1e-10, atol=1e-12)
    ci = optimize_bound(P1, P2, "ci", "trace")
    dual = optimize_bound(P1, P2, "dual", "trace")
    assert dual.criterion_value >= ci.criterion_value - 1e-8
    assert dual.fused_lower is not None and ci.fused_lower is None


def test_optimize_is_deterministic(P1, P2):
    a = optimize_bound(P1, P2, "ici", "det")
    b = optimize_bound(P1, P2, "ici", "det")
    assert a.params == b.params
    assert np.array_equal(a.fused_bound, b.fused_bound)


def test_fuse_fixed_params_with_ci_weight(P1, P2):
    res = fuse(P1, P2, "dual", BoundParams(mu=1.0, omega=0.5), w=0.5)
    assert np.allclose(res.fused_bound, 54 / 13 * np.eye(2), rtol=1e-12)
    assert res.fused_lower is not None
    res = fuse(np.eye(2), np.eye(2), "ci")
    assert np.allclose(res.fused_bound, np.eye(2))


def test_optimize_rejects_unknowns(P1, P2):
    with pytest.raises(ParameterError):
        optimize_bound(P1, P2, "nope")
    with pytest.raises(ParameterError):
        optimize_bound(P1, P2, "ci", "max")
