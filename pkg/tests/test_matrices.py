import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from orbitspace.matrices import (
    DoubledSpherePoint,
    dim_formulas,
    gram,
    hopf_invariant_from_doubled,
    hopf_invariant_y22,
    lambda_min,
    normalize,
    polar,
    procrustes_rotation,
    psd_sqrt_part,
    quotient_Yn1n_On,
    quotient_Ynn_SOn,
    spectrahedron_contains,
    trace_normalize,
)

rng = np.random.default_rng(7)


def random_rotation(n, special=True):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    q = q * np.sign(np.diag(r))
    if special and np.linalg.det(q) < 0:
        q[:, 0] *= -1
    return q


square = st.integers(2, 4).flatmap(
    lambda n: arrays(float, (n, n), elements=st.floats(-5, 5, allow_nan=False, allow_infinity=False))
)


def test_normalize_rejects_zero():
    with pytest.raises(ValueError):
        normalize(np.zeros((2, 2)))
    assert np.linalg.norm(normalize(np.ones((3, 3)))) == pytest.approx(1.0)


@settings(max_examples=60)
@given(square)
def test_psd_sqrt_matches_scipy(a):
    expected = np.real(scipy.linalg.sqrtm(a.T @ a + 0.0))
    p = psd_sqrt_part(a)
    assert np.allclose(p, p.T)
    assert np.allclose(p @ p, a.T @ a, atol=1e-7 * (1 + np.abs(a).max() ** 2))
    if np.linalg.matrix_rank(a) == a.shape[0] and np.linalg.cond(a) < 1e6:
        assert np.allclose(p, expected, atol=1e-6 * (1 + np.abs(a).max()))


@settings(max_examples=60)
@given(square)
def test_polar_matches_scipy(a):
    q, p = polar(a)
    assert np.allclose(q.T @ q, np.eye(len(a)), atol=1e-12)
    assert np.allclose(q @ p, a, atol=1e-9 * (1 + np.abs(a).max()))
    if np.linalg.cond(a) < 1e6:
        q_ref, _ = scipy.linalg.polar(a, side="right")
        assert np.allclose(q, q_ref, atol=1e-6)


def test_polar_needs_square():
    with pytest.raises(ValueError):
        polar(np.ones((2, 3)))


def test_lambda_min_matches_full_spectrum():
    s = gram(rng.standard_normal((4, 4)))
    assert lambda_min(s) == pytest.approx(np.sort(np.linalg.eigvals(s).real)[0])


@pytest.mark.parametrize("n", [2, 3, 4])
def test_left_invariance(n):
    a = normalize(rng.standard_normal((200, n, n)))
    q = np.stack([random_rotation(n, special=False) for _ in range(200)])
    assert np.max(np.abs(gram(q @ a) - gram(a))) <= 1e-11
    assert np.max(np.abs(psd_sqrt_part(q @ a) - psd_sqrt_part(a))) <= 1e-11


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_yn1n_quotient_is_degenerate_trace_one(n):
    a = normalize(rng.standard_normal((100, n - 1, n)))
    g = quotient_Yn1n_On(a)
    assert np.allclose(np.trace(g, axis1=1, axis2=2), 1.0)
    assert np.max(np.abs(lambda_min(g))) <= 1e-10
    q = np.stack([random_rotation(n - 1, special=False) for _ in range(100)])
    assert np.allclose(quotient_Yn1n_On(q @ a), g, atol=1e-12)
    with pytest.raises(ValueError):
        quotient_Yn1n_On(np.ones((n, n)))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_doubled_sphere(n):
    a = normalize(rng.standard_normal((100, n, n)))
    point = quotient_Ynn_SOn(a)
    assert np.max(point.residual()) <= 1e-9
    assert np.array_equal(np.sign(point.height), np.sign(np.linalg.det(a)))
    q = np.stack([random_rotation(n) for _ in range(100)])
    moved = quotient_Ynn_SOn(q @ a)
    assert np.allclose(moved.coords(), point.coords(), atol=1e-12)
    # a reflection lands on the other sheet over the same matrix
    r = np.eye(n)
    r[0, 0] = -1
    flipped = quotient_Ynn_SOn(r @ a)
    assert np.allclose(flipped.matrix, point.matrix, atol=1e-12)
    assert np.allclose(flipped.height, -point.height)
    for p in point.matrix[:5]:
        assert spectrahedron_contains(p, tol=1e-12)
    assert point.coords().shape == (100, n * n + 1)


def test_degenerate_matrix_sits_on_the_seam():
    a = normalize(np.array([[1.0, 2.0, 0.0], [0.5, 1.0, 0.0], [1.0, 0.0, 0.0]]))
    point = quotient_Ynn_SOn(a)
    assert abs(point.height) <= 1e-12
    assert point.residual() <= 1e-12


def test_spectrahedron_contains():
    assert spectrahedron_contains(np.eye(3) / 3)
    assert not spectrahedron_contains(np.eye(3))
    assert not spectrahedron_contains(np.diag([1.5, -0.5]))
    assert not spectrahedron_contains(np.array([[0.5, 1.0], [0.0, 0.5]]))


def test_trace_normalize():
    assert np.trace(trace_normalize(np.diag([1.0, 3.0]))) == pytest.approx(1.0)


def test_dim_formulas_against_counting():
    # spectrahedron dimensions 2, 5, 9, 14 for n = 2..5
    assert [dim_formulas(n)[2] for n in range(2, 6)] == [2, 5, 9, 14]
    assert dim_formulas(3) == (4, 5, 5)
    for n in range(2, 9):
        y_n1n = n * (n - 1) - 1 - (n - 1) * (n - 2) // 2
        y_nn = n * n - 1 - n * (n - 1) // 2
        assert dim_formulas(n) == (y_n1n, y_nn, n * (n + 1) // 2 - 1)
    with pytest.raises(ValueError):
        dim_formulas(1)


def test_hopf_invariant_for_y22():
    a = normalize(rng.standard_normal((300, 2, 2)))
    v = hopf_invariant_y22(a)
    assert np.allclose(np.linalg.norm(v, axis=-1), 1.0)
    q = np.stack([random_rotation(2) for _ in range(300)])
    assert np.allclose(hopf_invariant_y22(q @ a), v, atol=1e-12)
    assert np.allclose(hopf_invariant_from_doubled(quotient_Ynn_SOn(a)), v, atol=1e-7)


def test_procrustes_matches_scipy_and_respects_special():
    for n in (2, 3, 4):
        a = rng.standard_normal((n, n))
        b = rng.standard_normal((n, n))
        q = procrustes_rotation(a, b, special=False)
        # scipy solves min ||A^T R - B^T|| with R = Q^T
        r, _ = scipy.linalg.orthogonal_procrustes(a.T, b.T)
        assert np.allclose(q, r.T, atol=1e-10)
        s = procrustes_rotation(a, b, special=True)
        assert np.linalg.det(s) == pytest.approx(1.0)
        assert np.linalg.norm(s @ a - b) >= np.linalg.norm(q @ a - b) - 1e-12
        rot = random_rotation(n)
        assert np.allclose(procrustes_rotation(a, rot @ a), rot, atol=1e-9)


def test_doubled_point_dataclass():
    p = DoubledSpherePoint(np.eye(2) / 2, np.array(0.5))
    assert p.residual() == pytest.approx(0.0)
    assert list(p.coords()) == [0.5, 0.0, 0.0, 0.5, 0.5]
