import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from commonnoise.errors import DimensionError, InputError, NotPositiveDefiniteError
from commonnoise.linalg import gevd, is_psd, loewner_geq, min_eig, schur_complement, spd_sqrt, sym_sqrt

from conftest import random_spd
import oracles as o


def test_is_psd_examples(P1):
    assert is_psd(np.eye(2), 0.0)
    assert not is_psd([[1.0, 2.0], [2.0, 1.0]], 1e-9)
    assert is_psd(P1, 0.0)


def test_is_psd_rejects_nonfinite():
    with pytest.raises(InputError):
        is_psd([[1.0, np.nan], [np.nan, 1.0]])
    with pytest.raises(InputError):
        is_psd([[np.inf]])


def test_is_psd_tolerance_is_relative():
    A = np.diag([100.0, -1e-9])
    assert not is_psd(A, 0.0)
    assert is_psd(A, 2e-11)
    assert not is_psd(A, 5e-12)


def test_loewner_examples(P1, P2):
    assert loewner_geq(2 * np.eye(2), np.eye(2))
    assert loewner_geq(P1, P1)
    assert not loewner_geq(P1, P2)
    assert not loewner_geq(P2, P1)
    # P1 - P2 = [[5, 6], [6, -5]] has eigenvalues +-sqrt(61)
    ev = o.eig2(o.add(o.frac(P1), o.frac(P2), -1))
    assert ev == pytest.approx([-math.sqrt(61), math.sqrt(61)])
    assert np.linalg.eigvalsh(P1 - P2) == pytest.approx(ev)


def test_loewner_dimension_mismatch():
    with pytest.raises(DimensionError):
        loewner_geq(np.eye(2), np.eye(3))


def test_random_spd_is_psd_and_negation_not(rng):
    for _ in range(200):
        A = random_spd(rng, rng.integers(1, 7))
        assert is_psd(A, 0.0)
        assert not is_psd(-A, 0.0)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 5))
def test_loewner_reflexive_and_transitive(seed, n):
    rng = np.random.default_rng(seed)
    C = random_spd(rng, n)
    B = C + random_spd(rng, n, cond=10.0) * rng.uniform(0, 1)
    A = B + random_spd(rng, n, cond=10.0) * rng.uniform(0, 1)
    assert loewner_geq(A, A, 1e-12)
    assert loewner_geq(A, B, 1e-12) and loewner_geq(B, C, 1e-12)
    assert loewner_geq(A, C, 1e-12)


def test_schur_complement_examples(P1, P2):
    n = 2
    assert np.allclose(schur_complement(P1, np.zeros((n, n)), P2), P2)
    assert np.allclose(schur_complement(np.eye(n), np.eye(n), np.eye(n)), 0.0)
    X = [[3, 0], [0, 0]]
    fP1, fP2, fX = o.frac(P1), o.frac(P2), o.frac(X)
    expected = o.add(fP2, o.mul(o.mul(o.T(fX), o.inv2(fP1)), fX), -1)
    assert expected == o.frac([[o.Fr(8, 3), -3], [-3, 9]])
    assert np.allclose(schur_complement(P1, np.array(X, float), P2), o.to_float(expected), atol=1e-14)


def test_schur_complement_singular_block():
    with pytest.raises(NotPositiveDefiniteError):
        schur_complement(np.zeros((2, 2)), np.eye(2), np.eye(2))


@pytest.mark.parametrize("A, S", [
    (np.eye(2), np.eye(2)),
    (4 * np.eye(2), 2 * np.eye(2)),
    (np.diag([9.0, 4.0]), np.diag([3.0, 2.0])),
])
def test_spd_sqrt_examples(A, S):
    assert np.allclose(spd_sqrt(A), S)
    assert np.allclose(sym_sqrt(A), S)


def test_spd_sqrt_roundtrip_and_singular(rng):
    for _ in range(300):
        n = int(rng.integers(1, 7))
        A = random_spd(rng, n, cond=1e4)
        S = spd_sqrt(A)
        assert np.linalg.norm(S @ S.T - A, 2) <= 1e-9 * np.linalg.norm(A, 2)
    v = np.array([1.0, 2.0, 2.0]) / 3
    A = np.outer(v, v)
    S = spd_sqrt(A)
    assert np.linalg.norm(S @ S.T - A) <= 1e-9


def test_spd_sqrt_rejects_indefinite():
    with pytest.raises(NotPositiveDefiniteError):
        spd_sqrt([[1.0, 2.0], [2.0, 1.0]])


def test_gevd_trivial_pairs():
    g = gevd(np.eye(2), np.eye(2))
    assert np.allclose(g.D, [1, 1])
    assert np.allclose(g.V.T @ g.V, np.eye(2))
    assert np.allclose(gevd(2 * np.eye(2), np.eye(2)).D, [2, 2])


def test_gevd_example_against_exact_oracle(P1, P2):
    # D are the eigenvalues of P2^-1 P1 = (1/27) [[90, 39], [39, 25]]
    R = o.mul(o.inv2(o.frac(P2)), o.frac(P1))
    assert R == o.scale(o.Fr(1, 27), o.frac([[90, 39], [39, 25]]))
    g = gevd(P1, P2)
    assert g.D == pytest.approx(o.eig2(R), rel=1e-12)
    assert g.D[0] * g.D[1] == pytest.approx(1.0, rel=1e-12)
    assert g.D.sum() == pytest.approx(115 / 27, rel=1e-12)
    assert np.allclose(P1 @ g.V, P2 @ g.V @ np.diag(g.D), atol=1e-12)


def test_gevd_reconstruction_many_pairs(rng):
    for _ in range(1000):
        n = int(rng.integers(1, 7))
        P1, P2 = random_spd(rng, n), random_spd(rng, n)
        g = gevd(P1, P2)
        R1, R2 = g.reconstruct()
        err = np.linalg.norm(R1 - P1, 2) + np.linalg.norm(R2 - P2, 2)
        assert err <= 1e-8 * (np.linalg.norm(P1, 2) + np.linalg.norm(P2, 2))
        assert np.all(np.diff(g.D) >= 0)
        assert np.all(g.D > 0)


def test_gevd_rejects_non_pd():
    with pytest.raises(NotPositiveDefiniteError):
        gevd(np.eye(2), np.diag([1.0, 0.0]))


def test_min_eig():
    assert min_eig(np.diag([3.0, -2.0, 1.0])) == -2.0
