import itertools
import math

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbitspace.homology import (
    FACE_PRESETS,
    PRESETS,
    ChainComplex,
    HomologyResult,
    InvalidComplexError,
    antipodal_quotient_check,
    build_cube,
    build_fig2_complex,
    build_g42_sponge,
    build_hp2_gkm,
    build_hp2_sponge,
    build_rp2,
    build_rugby_ball,
    build_sphere,
    complex_from_cells,
    find_isomorphism,
    format_complex,
    g42_antipodal_pairing,
    homology,
    homology_polytope_check,
    hp2_skeleton_census,
    hp2_strata_patterns,
    integer_rank,
    parse_complex,
    quotient_by_involution,
    simplicial_complex,
    smith_diagonal,
    smith_normal_form,
)


def det(m):
    if len(m) == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * det([row[:j] + row[j + 1:] for row in m[1:]]) for j in range(len(m)))


def determinantal_divisors(m):
    # oracle: d_1 d_2 ... d_k = gcd of all k x k minors
    rows, cols = len(m), len(m[0])
    out = []
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for r in itertools.combinations(range(rows), k):
            for c in itertools.combinations(range(cols), k):
                g = math.gcd(g, det([[m[i][j] for j in c] for i in r]))
        out.append(g)
    return out


def matmul(a, b):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=150)
@given(matrices)
def test_smith_normal_form_against_minors(m):
    d, u, v = smith_normal_form(m)
    assert matmul(matmul(u, m), v) == d
    assert abs(det(u)) == 1 and abs(det(v)) == 1
    diag = [d[i][i] for i in range(min(len(d), len(d[0])))]
    assert all(d[i][j] == 0 for i in range(len(d)) for j in range(len(d[0])) if i != j)
    nonzero = [x for x in diag if x]
    assert all(x > 0 for x in nonzero)
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    prefix = [math.prod(nonzero[:k]) for k in range(1, len(nonzero) + 1)]
    oracle = [g for g in determinantal_divisors(m) if g]
    assert prefix == oracle
    assert integer_rank(m) == len(nonzero)


def test_smith_small_examples():
    assert smith_diagonal([[2, 0], [0, 3]]) == [1, 6]
    assert smith_diagonal([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]) == [2, 6, 12]
    assert integer_rank([]) == 0
    assert integer_rank([[0, 0]]) == 0


def test_known_simplicial_spaces():
    # 7-vertex torus
    torus = [
        (0, 1, 3), (1, 2, 4), (2, 0, 5), (0, 3, 6), (1, 4, 0), (2, 5, 1),
        (3, 4, 1), (4, 5, 2), (5, 6, 3), (6, 0, 4), (3, 6, 4), (4, 0, 6),
        (5, 3, 2), (6, 2, 0),
    ]
    t = homology(simplicial_complex(torus))
    # degrees 0, 1, 2 of the torus: Z, Z^2, Z
    assert t.betti == (1, 2, 1) and not any(t.torsion)
    # 6-vertex projective plane
    rp2 = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1), (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3)]
    h = homology(simplicial_complex(rp2))
    assert h.betti == (1, 0, 0) and h.torsion == ((), (2,), ())


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_spheres(k):
    h = homology(build_sphere(k))
    assert h.betti == (1,) + (0,) * (k - 1) + (1,)
    with pytest.raises(ValueError):
        build_sphere(0)


def test_rp2_preset():
    h = homology(build_rp2())
    assert h.table() == "H_0: Z\nH_1: Z/2\nH_2: 0"


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_presets_are_complexes(name):
    c = PRESETS[name]()
    assert c.boundary_defect() == 0
    assert parse_complex(format_complex(c)).boundaries == c.boundaries


def test_sponges():
    hp2 = build_hp2_sponge()
    assert hp2.cells == (3, 6, 7)
    assert homology(hp2).betti == (1, 0, 3)
    g42 = build_g42_sponge()
    assert g42.cells == (6, 12, 11)
    assert homology(g42).betti == (1, 0, 4)


def test_antipodal_quotient():
    assert antipodal_quotient_check()
    g42 = build_g42_sponge()
    q = quotient_by_involution(g42, g42_antipodal_pairing(g42))
    assert q.cells == (3, 6, 7)
    assert find_isomorphism(q, build_hp2_sponge()) is not None
    assert find_isomorphism(build_rp2(), build_hp2_sponge()) is None


def test_homology_polytope_check():
    assert homology_polytope_check(build_fig2_complex()) == (False, ["A"])
    fig2 = build_fig2_complex()
    assert homology(fig2.face_complex("A")).group(1) == "Z"
    assert homology_polytope_check(build_rugby_ball()) == (True, [])
    assert homology_polytope_check(build_cube(3)) == (True, [])
    assert set(FACE_PRESETS) == {"fig2", "rugby", "cube"}
    for fc in (build_fig2_complex(), build_rugby_ball()):
        assert homology(fc.complex).is_acyclic()


def test_cube_faces():
    fc = build_cube(3)
    assert fc.complex.cells == (8, 12, 6, 1)
    assert homology(fc.complex).is_acyclic()
    assert fc.faces_without_vertex() == []


def test_census_and_gkm():
    census = hp2_skeleton_census()
    assert census.counts == {"M": 3, "N": 4, "S": 6, "v": 3}
    for s in [n for n in census.incidences if n.startswith("S")]:
        assert len(census.containing(s, "M")) == 1
        assert len(census.containing(s, "N")) == 2
    g = build_hp2_gkm()
    assert isinstance(g, nx.MultiGraph)
    assert g.number_of_nodes() == 3 and g.number_of_edges() == 6
    assert all(d == 4 for _, d in g.degree())
    assert len(hp2_strata_patterns()) == 16


def test_invalid_complexes():
    with pytest.raises(InvalidComplexError):
        ChainComplex((1, 1), {})
    with pytest.raises(InvalidComplexError):
        ChainComplex((1, 1), {1: [[1, 1]]})
    bad = ChainComplex((1, 1, 1), {1: [[1]], 2: [[1]]})
    with pytest.raises(InvalidComplexError):
        homology(bad)
    with pytest.raises(InvalidComplexError):
        complex_from_cells([["p"], ["a"]], {"a": {"q": 1}})
    with pytest.raises(InvalidComplexError):
        parse_complex("1\n1 1 1\n")
    with pytest.raises(InvalidComplexError):
        parse_complex("1\n2 1\n1\n")
    with pytest.raises(InvalidComplexError):
        parse_complex("1\n1 1\n0\n0\n")


def test_restrict():
    s2 = build_sphere(2)
    edge = s2.restrict(["[0]", "[1]", "[0,1]"])
    assert edge.cells == (2, 1)
    with pytest.raises(InvalidComplexError):
        s2.restrict(["[0,1]"])
    with pytest.raises(InvalidComplexError):
        s2.restrict(["nope"])


def test_parse_comments_and_format():
    text = "# rp2\n2\n1 1 1\n# boundary 1\n0\n# boundary 2\n2\n"
    c = parse_complex(text)
    assert homology(c).torsion[1] == (2,)
    assert format_complex(c).startswith("2\n1 1 1\n")


def test_homology_result_formatting():
    r = HomologyResult((1, 2, 0), ((), (2, 4), ()))
    assert r.group(1) == "Z^2 + Z/2 + Z/4"
    assert r.group(2) == "0"
    assert not r.is_acyclic()
    assert HomologyResult((1,), ((),)).is_acyclic()
