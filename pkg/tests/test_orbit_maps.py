import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbitspace.algebra import quat_conj, quat_from_split, quat_mul
from orbitspace.orbit_maps import (
    QuotientPoint,
    conj_by_complex,
    cp2_conj_to_s4,
    hopf,
    hp2_fixing_residual,
    hp2_matrix,
    hp2_stabilizer_check,
    hp2_to_s5,
    join_coordinates,
    right_on_hp2,
    s3_biaxial_quotient,
    s3_conj_circle_quotient,
    s3s3_diag_circle_quotient,
    s3s3_t3_quotient,
    s4_invol_quotient,
    s6_to_s4,
    stratify_hp2,
    t3_on_s3s3,
    torus_invol_quotient,
    torus_on_hp2,
    two_sided_complex,
)

rng = np.random.default_rng(11)
N = 500


def unit(shape, axes=(-1,)):
    x = rng.standard_normal(shape)
    return x / np.sqrt(np.sum(x * x, axis=axes, keepdims=True))


def circle(shape):
    return np.exp(1j * rng.uniform(0, 2 * np.pi, shape))


def test_hopf_is_conjugated_i():
    h = unit((N, 4))
    i = np.array([0.0, 1.0, 0.0, 0.0])
    x = quat_mul(quat_mul(quat_conj(h), i), h)
    assert np.allclose(hopf(h), x[:, [1, 3, 2]], atol=1e-12)
    assert np.allclose(np.linalg.norm(hopf(h), axis=-1), 1.0)


def test_hopf_left_circle_invariance_and_right_rotation():
    h = unit((N, 4))
    t = circle(N)
    z = h[:, 0] + 1j * h[:, 1]
    u = h[:, 2] - 1j * h[:, 3]
    assert np.allclose(hopf(quat_from_split(t * z, np.conj(t) * u)), hopf(h), atol=1e-12)
    q = unit(4)
    # least-squares fit of the induced linear map must be a rotation
    r, *_ = np.linalg.lstsq(hopf(h), hopf(quat_mul(h, q)), rcond=None)
    assert np.allclose(r.T @ r, np.eye(3), atol=1e-10)
    assert np.linalg.det(r) == pytest.approx(1.0)


def test_join_coordinates_zero_weight():
    p = np.zeros((3, 4))
    p[1] = [0.6, 0, 0.8, 0]
    c, v = join_coordinates(p)
    assert list(c) == [0.0, 1.0, 0.0]
    assert np.allclose(v[0], [1, 0, 0]) and np.allclose(v[2], [1, 0, 0])
    a = hp2_matrix(p)
    assert np.allclose(a[:, 0], 0) and np.allclose(a[:, 2], 0)


def test_hp2_to_s5_invariance():
    p = unit((N, 3, 4), axes=(-2, -1))
    base = hp2_to_s5(p).coords
    moved = hp2_to_s5(right_on_hp2(torus_on_hp2(p, circle((N, 3))), unit((N, 4)))).coords
    assert np.max(np.abs(moved - base)) <= 1e-9
    assert hp2_to_s5(p).max_residual() <= 1e-9
    # the sphere: |t| = lambda_min and trace one
    mats = base[:, :9].reshape(N, 3, 3)
    assert np.allclose(np.trace(mats, axis1=1, axis2=2), 1.0)


def test_hp2_fixed_points_are_distinct():
    pts = np.zeros((3, 3, 4))
    for i in range(3):
        pts[i, i, 0] = 1.0
    coords = hp2_to_s5(pts).coords
    for i, j in itertools.combinations(range(3), 2):
        assert np.linalg.norm(coords[i] - coords[j]) > 0.1
    # a fixed point is a rank-one matrix: lambda_min = 0 and it sits on the seam
    assert np.allclose(coords[:, -1], 0.0)


def test_s6_to_s4():
    v = unit((N, 7))
    r, z = v[:, 0], v[:, 1:4] + 1j * v[:, 4:7]
    img = s6_to_s4(r, z)
    a, b = circle(N), circle(N)
    t = np.stack([a, b, 1 / (a * b)], axis=-1)
    assert np.max(np.abs(s6_to_s4(r, t * z).coords - img.coords)) <= 1e-9
    assert img.max_residual() <= 1e-12
    # the rugby ball coordinates satisfy r^2 + |z1|^2 + |z2|^2 + |z3|^2 = 1
    assert np.allclose(np.sum(img.coords[:, :4] ** 2, axis=-1), 1.0)
    single = s6_to_s4(0.0, np.array([1j, 1.0, 0.0]))
    assert list(single.coords) == pytest.approx([0, 1, 1, 0, 0, 0])


def test_cp2_conj_to_s4():
    z = unit((N, 6))
    z = z[:, :3] + 1j * z[:, 3:]
    img = cp2_conj_to_s4(z)
    moved = cp2_conj_to_s4(np.conj(z * circle((N, 1))))
    assert np.max(np.abs(moved.coords - img.coords)) <= 1e-11
    assert img.max_residual() <= 1e-10
    g = img.coords.reshape(N, 3, 3)
    assert np.allclose(np.trace(g, axis1=1, axis2=2), 1.0)
    # the Gram matrix of (Re z, Im z) is Re(z z^*) written in real coordinates
    assert np.allclose(g, np.real(z[:, :, None] * np.conj(z[:, None, :])), atol=1e-12)


@given(st.floats(0, 1), st.floats(0, 1))
def test_torus_invol_quotient(x, y):
    a = torus_invol_quotient(x, y)
    b = torus_invol_quotient(-x, -y)
    assert np.allclose(a.coords, b.coords, atol=1e-12)
    assert a.max_residual() <= 1e-12


def test_torus_invol_separates_generic_non_antipodal_points():
    a = torus_invol_quotient(0.1, 0.3).coords
    b = torus_invol_quotient(0.1, -0.3).coords
    assert np.linalg.norm(a - b) > 0.1


def test_s4_invol_quotient():
    v = unit((N, 5))
    r, z = v[:, 0], v[:, 1:3] + 1j * v[:, 3:5]
    img = s4_invol_quotient(r, z)
    assert np.allclose(s4_invol_quotient(r, np.conj(z)).coords, img.coords)
    assert img.max_residual() <= 1e-12
    c = img.coords
    assert np.allclose(np.sum(c[:, :3] ** 2, axis=-1) + np.linalg.norm(c[:, 3:], axis=-1), 1.0)


def test_s3_conj_circle_quotient():
    h = unit((N, 4))
    img = s3_conj_circle_quotient(h)
    assert np.max(np.abs(s3_conj_circle_quotient(conj_by_complex(h, circle(N))).coords - img.coords)) <= 1e-11
    assert img.max_residual() <= 1e-12
    assert np.all(img.coords[:, 2] >= 0)
    # conj_by_complex is t h t^-1
    t = circle(N)
    tq = np.stack([t.real, t.imag, 0 * t.real, 0 * t.real], axis=-1)
    assert np.allclose(conj_by_complex(h, t), quat_mul(quat_mul(tq, h), quat_conj(tq)), atol=1e-12)


@pytest.mark.parametrize("chart", [(1, 1), (1, -1), (-1, 1), (-1, -1)])
def test_s3_biaxial_quotient(chart):
    s = unit((N, 4))
    t1, t2 = circle(N), circle(N)
    left = t1 if chart[0] == 1 else np.conj(t1)
    right = t2 if chart[1] == 1 else np.conj(t2)
    moved = two_sided_complex(s, left, right)
    assert np.max(np.abs(s3_biaxial_quotient(moved, chart).coords - s3_biaxial_quotient(s, chart).coords)) <= 1e-11
    assert s3_biaxial_quotient(s, chart).max_residual() <= 1e-12


def test_biaxial_rejects_bad_chart():
    with pytest.raises(ValueError):
        s3_biaxial_quotient(unit(4), (2, 1))


def test_two_sided_complex_is_quaternion_product():
    h = unit((N, 4))
    a, b = circle(N), circle(N)
    aq = np.stack([a.real, a.imag, 0 * a.real, 0 * a.real], axis=-1)
    bq = np.stack([b.real, b.imag, 0 * b.real, 0 * b.real], axis=-1)
    assert np.allclose(two_sided_complex(h, a, b), quat_mul(quat_mul(aq, h), bq), atol=1e-12)


@pytest.mark.parametrize("chart", ["A", "B"])
def test_s3s3_t3_quotient(chart):
    s1, s2 = unit((N, 4)), unit((N, 4))
    img = s3s3_t3_quotient(s1, s2, chart)
    m1, m2 = t3_on_s3s3(s1, s2, circle((N, 3)), chart)
    assert np.max(np.abs(s3s3_t3_quotient(m1, m2, chart).coords - img.coords)) <= 1e-11
    assert img.max_residual() <= 1e-12
    c1, c2, re, im = img.coords.T
    assert np.allclose(re ** 2 + im ** 2, c1 * (1 - c1) * c2 * (1 - c2))


def test_s3s3_rejects_unknown_chart():
    with pytest.raises(ValueError):
        s3s3_t3_quotient(unit(4), unit(4), "C")
    with pytest.raises(ValueError):
        t3_on_s3s3(unit(4), unit(4), circle(3), "C")


def test_s3s3_diag_circle_quotient():
    s1, s2 = unit((N, 4)), unit((N, 4))
    t = circle(N)
    img = s3s3_diag_circle_quotient(s1, s2)
    moved = s3s3_diag_circle_quotient(conj_by_complex(s1, t), conj_by_complex(s2, t))
    assert np.max(np.abs(moved.coords - img.coords)) <= 1e-11
    assert img.max_residual() <= 1e-12


def test_quotient_point_max_residual():
    assert QuotientPoint(np.zeros(2)).max_residual() == 0.0
    assert QuotientPoint(np.zeros(2), {"a": np.array([1e-3, -2e-3])}).max_residual() == pytest.approx(2e-3)


# --- strata -----------------------------------------------------------------------------------


def hp2_point(*coords):
    """Homogeneous coordinates given as (z, u) complex pairs."""
    p = np.array([quat_from_split(z, u) for z, u in coords])
    return p / np.linalg.norm(p)


STRATA = {
    "v0": hp2_point((1, 0), (0, 0), (0, 0)),
    "v2": hp2_point((0, 0), (0, 0), (1, 0)),
    "M_{01}": hp2_point((1, 0), (0.5, 0.7j), (0, 0)),
    "S_{0+1+}": hp2_point((1, 0), (0.5, 0), (0, 0)),
    "S_{0+1-}": hp2_point((1, 0), (0, 0.5), (0, 0)),
    "S_{1+2-}": hp2_point((0, 0), (2, 0), (0, 1j)),
    "N_{+++}": hp2_point((1, 0), (0.5, 0), (0.3j, 0)),
    "N_{+-+}": hp2_point((1, 0), (0, 0.5), (0.3, 0)),
    "N_{+--}": hp2_point((1, 0), (0, 0.5), (0, 0.2)),
    "free": hp2_point((1, 0), (0.5, 0.1), (0.3, 0.4j)),
}
DIMS = {"v": 3, "M": 1, "S": 2, "N": 1, "f": 0}


@pytest.mark.parametrize("label", sorted(STRATA))
def test_stratify_labels_and_stabilizers(label):
    p = STRATA[label]
    stratum = stratify_hp2(p)
    assert stratum.label == label
    assert not stratum.ambiguous
    assert stratum.stabilizer_dim == DIMS[label[0]]
    # gauge independence: the label survives the right S^3 action
    assert stratify_hp2(right_on_hp2(p, unit(4))).label == label
    # torus elements satisfying the characters fix the point, others do not
    ts = circle((2000, 3))
    inside = stratum.stabilizes(ts, tol=1e-9)
    ts = np.concatenate([ts, -np.ones((1, 3))])
    inside = np.concatenate([inside, [True]])
    res = hp2_fixing_residual(p, ts)
    assert np.all(res[inside] <= 1e-7)
    assert np.all(res[~inside] > 1e-9)


def test_stabilizer_contains_minus_one_and_members_fix():
    for p in STRATA.values():
        s = hp2_stabilizer_check(p)
        assert s.stabilizes(-np.ones(3))
        # build stabilizer elements from the characters by solving over a grid
        grid = np.exp(1j * np.linspace(0, 2 * np.pi, 13)[:-1])
        ts = np.array(list(itertools.product(grid, repeat=3)))
        members = ts[s.stabilizes(ts, tol=1e-9)]
        assert len(members) > 0
        assert np.max(hp2_fixing_residual(p, members)) <= 1e-7


def test_stratify_flags_near_zero_coordinates():
    p = hp2_point((1, 0), (0.5, 1e-10), (0, 0))
    s = stratify_hp2(p)
    assert s.label == "S_{0+1+}"
    assert s.ambiguous and 0 < s.distance < 1e-9


def test_stratify_rejects_bad_input():
    with pytest.raises(ValueError):
        stratify_hp2(np.zeros((3, 4)))
    with pytest.raises(ValueError):
        stratify_hp2(np.zeros((2, 4)))


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1))
def test_generic_points_are_free(seed):
    r = np.random.default_rng(seed)
    p = r.standard_normal((3, 4))
    assert stratify_hp2(p / np.linalg.norm(p)).kind == "free"


def test_n_stratum_circle_matches_signs():
    s = stratify_hp2(STRATA["N_{+--}"])
    a = circle(50)
    # N_{+--}: t0 = t1^-1 = t2^-1
    assert np.all(s.stabilizes(np.stack([a, 1 / a, 1 / a], axis=-1), tol=1e-9))
    p = hp2_point((1, 0), (0.5, 0), (0, 0.3))
    s = stratify_hp2(p)
    assert s.label == "N_{++-}"
    assert np.all(s.stabilizes(np.stack([a, a, 1 / a], axis=-1), tol=1e-9))
    m = stratify_hp2(STRATA["M_{01}"])
    assert np.all(m.stabilizes(np.stack([np.ones(50), np.ones(50), a], axis=-1)))


def test_generic_stabilizer_by_grid_search():
    from orbitspace.harness import torus_minimize

    p = STRATA["free"]
    grid = np.linspace(0, 2 * np.pi, 9)[:-1]
    for start in itertools.product(grid, repeat=3):
        t = np.exp(1j * np.array(start))
        if hp2_fixing_residual(p, t) < 1e-9:
            assert np.allclose(t, t[0]) and np.isclose(abs(t[0].real), 1.0)
    value, theta = torus_minimize(lambda th: hp2_fixing_residual(p, np.exp(1j * th)), 3)
    assert value < 1e-9
    t = np.exp(1j * theta)
    assert np.allclose(t, t[0]) and np.isclose(abs(t[0].real), 1.0, atol=1e-6)


def test_zero_weight_column_is_ignored():
    p = np.zeros((3, 4))
    p[0] = [0.6, 0.0, 0.0, 0.0]
    p[1] = [0.0, 0.8, 0.0, 0.0]
    base = hp2_to_s5(p).coords
    # a tiny third coordinate with any direction gives nearly the same image
    for d in np.eye(4):
        q = p.copy()
        q[2] = 1e-9 * d
        assert np.max(np.abs(hp2_to_s5(q / np.linalg.norm(q)).coords - base)) <= 1e-8


def test_phase_block_degenerates_linearly():
    z = np.array([0.6, 0.5j, 0.0]) + 0.0j
    for eps in (1e-2, 1e-4, 1e-6):
        w = z.copy()
        w[2] = eps
        w = w / np.linalg.norm(w)
        coords = s6_to_s4(0.0, w).coords
        ratio = np.hypot(coords[4], coords[5]) / np.prod(np.abs(w))
        assert ratio == pytest.approx(1.0)
        assert np.hypot(coords[4], coords[5]) <= 0.7 * eps
