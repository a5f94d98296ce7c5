"""Integral homology of small cell complexes, and the preset complexes.

Boundary matrices are lists of lists of Python ints, so arithmetic never
overflows.  ``boundaries[d]`` maps d-chains to (d-1)-chains and has shape
(cells[d-1], cells[d]); degree 0 has no boundary matrix.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import networkx as nx

Matrix = list[list[int]]


class InvalidComplexError(ValueError):
    pass


# --- Smith normal form --------------------------------------------------------


def _identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a or not b:
        rows = len(a)
        cols = len(b[0]) if b else 0
        return [[0] * cols for _ in range(rows)]
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return (D, U, V) with D = U M V diagonal, d1 | d2 | ..., U and V unimodular."""
    a = [[int(x) for x in row] for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    u = _identity(rows)
    v = _identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):
        # row_dst += k * row_src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, k):
        for row in a:
            row[dst] += k * row[src]
        for row in v:
            row[dst] += k * row[src]

    t = 0
    while t < min(rows, cols):
        entries = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(t, i, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(t, j, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # pivot must divide the rest of the block
            bad = next(
                ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % a[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return a, u, v


def smith_diagonal(m: Sequence[Sequence[int]]) -> list[int]:
    d, _, _ = smith_normal_form(m)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i]]


def integer_rank(m: Sequence[Sequence[int]]) -> int:
    if not m or not m[0]:
        return 0
    return len(smith_diagonal(m))


# --- chain complexes ----------------------------------------------------------


@dataclass(frozen=True)
class HomologyResult:
    betti: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]

    def group(self, d: int) -> str:
        parts = []
        if self.betti[d] == 1:
            parts.append("Z")
        elif self.betti[d] > 1:
            parts.append(f"Z^{self.betti[d]}")
        parts.extend(f"Z/{k}" for k in self.torsion[d])
        return " + ".join(parts) if parts else "0"

    def is_acyclic(self) -> bool:
        """Reduced homology vanishes: H_0 = Z and nothing else."""
        if not self.betti or self.betti[0] != 1:
            return False
        return all(b == 0 for b in self.betti[1:]) and not any(self.torsion)

    def table(self) -> str:
        return "\n".join(f"H_{d}: {self.group(d)}" for d in range(len(self.betti)))


@dataclass(frozen=True)
class ChainComplex:
    """Cellular chain complex with optional cell names."""

    cells: tuple[int, ...]
    boundaries: dict[int, Matrix]
    names: tuple[tuple[str, ...], ...] | None = None

    def __post_init__(self):
        for d in range(1, len(self.cells)):
            m = self.boundaries.get(d)
            if m is None:
                raise InvalidComplexError(f"missing boundary matrix in degree {d}")
            if len(m) != self.cells[d - 1] or any(len(row) != self.cells[d] for row in m):
                raise InvalidComplexError(f"boundary {d} has the wrong shape")
        if self.names is not None:
            if tuple(len(n) for n in self.names) != self.cells:
                raise InvalidComplexError("names do not match cell counts")

    @property
    def dim(self) -> int:
        return len(self.cells) - 1

    def boundary(self, d: int) -> Matrix:
        if d <= 0 or d > self.dim:
            rows = self.cells[d - 1] if 0 < d <= self.dim + 1 and d - 1 <= self.dim else 0
            cols = self.cells[d] if 0 <= d <= self.dim else 0
            return [[0] * cols for _ in range(rows)]
        return self.boundaries[d]

    def index(self, name: str) -> tuple[int, int]:
        if self.names is None:
            raise KeyError(name)
        for d, names in enumerate(self.names):
            if name in names:
                return d, names.index(name)
        raise KeyError(name)

    def boundary_defect(self) -> int:
        """Largest |entry| of d_{d-1} d_d over all degrees (0 for a valid complex)."""
        worst = 0
        for d in range(2, self.dim + 1):
            prod = _matmul(self.boundaries[d - 1], self.boundaries[d])
            worst = max([worst] + [abs(x) for row in prod for x in row])
        return worst

    def restrict(self, keep: Iterable[str]) -> ChainComplex:
        """Subcomplex spanned by the named cells; they must be closed under boundary."""
        keep = set(keep)
        if self.names is None:
            raise InvalidComplexError("restriction needs named cells")
        unknown = keep - {n for names in self.names for n in names}
        if unknown:
            raise InvalidComplexError(f"unknown cells {sorted(unknown)}")
        idx = [[i for i, n in enumerate(names) if n in keep] for names in self.names]
        while idx and not idx[-1]:
            idx.pop()
        for d in range(1, len(idx)):
            m = self.boundaries[d]
            kept_rows = set(idx[d - 1])
            for j in idx[d]:
                for i, row in enumerate(m):
                    if row[j] and i not in kept_rows:
                        raise InvalidComplexError(
                            f"{self.names[d][j]} has boundary cell {self.names[d - 1][i]} outside the subcomplex"
                        )
        cells = tuple(len(i) for i in idx)
        boundaries = {
            d: [[self.boundaries[d][i][j] for j in idx[d]] for i in idx[d - 1]] for d in range(1, len(idx))
        }
        names = tuple(tuple(self.names[d][i] for i in idx[d]) for d in range(len(idx)))
        return ChainComplex(cells, boundaries, names)


def homology(c: ChainComplex) -> HomologyResult:
    if c.boundary_defect():
        raise InvalidComplexError("boundary of boundary is not zero")
    ranks = {}
    diag = {}
    for d in range(1, c.dim + 1):
        if c.cells[d] and c.cells[d - 1]:
            diag[d] = smith_diagonal(c.boundaries[d])
        else:
            diag[d] = []
        ranks[d] = len(diag[d])
    betti = []
    torsion = []
    for d in range(c.dim + 1):
        b = c.cells[d] - ranks.get(d, 0) - ranks.get(d + 1, 0)
        betti.append(b)
        torsion.append(tuple(k for k in diag.get(d + 1, []) if k > 1))
    return HomologyResult(tuple(betti), tuple(torsion))


def complex_from_cells(cells: Sequence[Sequence[str]], boundary: dict[str, dict[str, int]]) -> ChainComplex:
    """Build a named complex from per-dimension cell lists and sparse boundaries."""
    cells = [list(c) for c in cells]
    boundaries = {}
    for d in range(1, len(cells)):
        rows = {n: i for i, n in enumerate(cells[d - 1])}
        m = [[0] * len(cells[d]) for _ in cells[d - 1]]
        for j, name in enumerate(cells[d]):
            for face, coeff in boundary.get(name, {}).items():
                if face not in rows:
                    raise InvalidComplexError(f"{name}: unknown face {face}")
                m[rows[face]][j] += coeff
        boundaries[d] = m
    return ChainComplex(tuple(len(c) for c in cells), boundaries, tuple(tuple(c) for c in cells))


def simplicial_complex(facets: Iterable[Sequence[int]]) -> ChainComplex:
    """Oriented simplicial chain complex generated by the given facets."""
    simplices: set[tuple[int, ...]] = set()
    for f in facets:
        f = tuple(sorted(f))
        for k in range(1, len(f) + 1):
            simplices.update(itertools.combinations(f, k))
    top = max(len(s) for s in simplices) - 1
    cells = [sorted(s for s in simplices if len(s) == d + 1) for d in range(top + 1)]
    boundary = {}
    for d in range(1, top + 1):
        for s in cells[d]:
            boundary[_sname(s)] = {_sname(s[:i] + s[i + 1:]): (-1) ** i for i in range(len(s))}
    return complex_from_cells([[_sname(s) for s in layer] for layer in cells], boundary)


def _sname(s: Sequence[int]) -> str:
    return "[" + ",".join(map(str, s)) + "]"


# --- presets ------------------------------------------------------------------


def build_rp2() -> ChainComplex:
    """Minimal CW structure: one cell in each degree, d2 = 2."""
    return complex_from_cells([["p"], ["a"], ["D"]], {"a": {"p": 0}, "D": {"a": 2}})


def build_sphere(k: int) -> ChainComplex:
    """Boundary of the (k+1)-simplex."""
    if k < 1:
        raise ValueError("k must be positive")
    return simplicial_complex(itertools.combinations(range(k + 2), k + 1))


def _pair_edges(i: int, j: int) -> tuple[str, str]:
    return f"S_{{{i}+{j}+}}", f"S_{{{i}+{j}-}}"


def _edge_name(i: int, si: str, j: int, sj: str) -> str:
    # S_{i si j sj} = S_{i -si j -sj}; normalize the first sign to '+'
    if si == "-":
        sj = "+" if sj == "-" else "-"
    return f"S_{{{i}+{j}{sj}}}"


N_LABELS = ("+++", "++-", "+-+", "+--")


def build_hp2_sponge() -> ChainComplex:
    """The sponge of HP^2 / T^3 encoded from the stratum incidences.

    0-cells: fixed points v0, v1, v2.  1-cells: the six 2-spheres
    S_{i+j+}, S_{i+j-}, each an interval from v_i to v_j.  2-cells: the four
    triangles N_e (the four CP^2's) and the three biangles M_ij (the three
    HP^1's).  The triangles alone are the octahedral RP^2; each biangle is
    attached along the two-edge loop through v_i and v_j, a projective line.
    """
    vertices = ["v0", "v1", "v2"]
    edges = []
    boundary: dict[str, dict[str, int]] = {}
    for i, j in itertools.combinations(range(3), 2):
        for name in _pair_edges(i, j):
            edges.append(name)
            boundary[name] = {f"v{j}": 1, f"v{i}": -1}
    faces = []
    for eps in N_LABELS:
        name = f"N_{{{eps}}}"
        faces.append(name)
        e01 = _edge_name(0, eps[0], 1, eps[1])
        e12 = _edge_name(1, eps[1], 2, eps[2])
        e02 = _edge_name(0, eps[0], 2, eps[2])
        boundary[name] = {e01: 1, e12: 1, e02: -1}
    for i, j in itertools.combinations(range(3), 2):
        name = f"M_{{{i}{j}}}"
        faces.append(name)
        plus, minus = _pair_edges(i, j)
        boundary[name] = {plus: 1, minus: -1}
    return complex_from_cells([vertices, edges, faces], boundary)


def _vname(sign: str, axis: int) -> str:
    return f"{sign}e{axis}"


def _flip(sign: str) -> str:
    return "-" if sign == "+" else "+"


def build_g42_sponge() -> ChainComplex:
    """Boundary of the octahedron with three equatorial squares attached.

    Vertices +-e_k, edges join s e_i to s' e_j (i < j, oriented i -> j),
    triangles carry sign patterns (s0, s1, s2), square Q_k runs
    +e_i -> +e_j -> -e_i -> -e_j around the equator orthogonal to e_k.
    """
    vertices = [_vname(s, k) for k in range(3) for s in "+-"]
    edges = []
    boundary: dict[str, dict[str, int]] = {}
    for i, j in itertools.combinations(range(3), 2):
        for si in "+-":
            for sj in "+-":
                name = f"E[{si}{i},{sj}{j}]"
                edges.append(name)
                boundary[name] = {_vname(sj, j): 1, _vname(si, i): -1}
    faces = []
    for s in itertools.product("+-", repeat=3):
        name = "T[" + "".join(s) + "]"
        faces.append(name)
        boundary[name] = {
            f"E[{s[0]}0,{s[1]}1]": 1,
            f"E[{s[1]}1,{s[2]}2]": 1,
            f"E[{s[0]}0,{s[2]}2]": -1,
        }
    for k in range(3):
        i, j = [a for a in range(3) if a != k]
        name = f"Q{k}"
        faces.append(name)
        boundary[name] = {
            f"E[+{i},+{j}]": 1,
            f"E[-{i},+{j}]": -1,
            f"E[-{i},-{j}]": 1,
            f"E[+{i},-{j}]": -1,
        }
    return complex_from_cells([vertices, edges, faces], boundary)


def g42_antipodal_pairing(c: ChainComplex) -> list[list[tuple[int, int]]]:
    """Cell pairing of the antipodal map on the G42 sponge: (partner, sign) per cell."""
    pairing = []
    for d, names in enumerate(c.names):
        layer = []
        for name in names:
            if name.startswith("Q"):
                image = name
            elif d == 0:
                image = _flip(name[0]) + name[1:]
            else:
                image = "".join(_flip(ch) if ch in "+-" else ch for ch in name)
            layer.append((names.index(image), 1))
        pairing.append(layer)
    return pairing


def quotient_by_involution(c: ChainComplex, pairing: list[list[tuple[int, int]]]) -> ChainComplex:
    """Cellular quotient by a cellular involution given as a signed cell pairing.

    A cell fixed by the involution covers its image twice, so the image of
    its boundary is divided by two.
    """
    reps: list[list[int]] = []
    where: list[dict[int, tuple[int, int]]] = []
    for d in range(c.dim + 1):
        layer_reps = []
        layer_where = {}
        for i, (partner, sign) in enumerate(pairing[d]):
            if partner == i:
                if sign != 1:
                    raise InvalidComplexError("a fixed cell must be mapped to itself with sign +1")
                layer_where[i] = (len(layer_reps), 1)
                layer_reps.append(i)
            elif partner > i:
                layer_where[i] = (len(layer_reps), 1)
                layer_where[partner] = (len(layer_reps), sign)
                layer_reps.append(i)
        reps.append(layer_reps)
        where.append(layer_where)
    boundaries = {}
    for d in range(1, c.dim + 1):
        m = [[0] * len(reps[d]) for _ in reps[d - 1]]
        for col, cell in enumerate(reps[d]):
            fixed = pairing[d][cell][0] == cell
            image = [0] * len(reps[d - 1])
            for i, row in enumerate(c.boundaries[d]):
                if row[cell]:
                    target, sign = where[d - 1][i]
                    image[target] += sign * row[cell]
            for r, value in enumerate(image):
                if fixed:
                    if value % 2:
                        raise InvalidComplexError("fixed cell boundary does not descend")
                    value //= 2
                m[r][col] = value
        boundaries[d] = m
    names = None
    if c.names is not None:
        names = tuple(tuple(c.names[d][i] for i in reps[d]) for d in range(c.dim + 1))
    return ChainComplex(tuple(len(r) for r in reps), boundaries, names)


def find_isomorphism(a: ChainComplex, b: ChainComplex) -> list[list[tuple[int, int]]] | None:
    """Signed cell bijection phi with d^b phi = phi d^a, found by backtracking.

    Returns per degree a list mapping cell i of ``a`` to (cell of ``b``, sign).
    """
    if a.cells != b.cells:
        return None
    solution: list[list[tuple[int, int]]] = [[None] * n for n in a.cells]

    def column_ok(d: int, i: int, target: int, sign: int) -> bool:
        if d == 0:
            return True
        da = a.boundaries[d]
        db = b.boundaries[d]
        for k in range(a.cells[d - 1]):
            tk, sk = solution[d - 1][k]
            if db[tk][target] * sign != sk * da[k][i]:
                return False
        return True

    def search(d: int, i: int, used: set[int]) -> bool:
        if d > a.dim:
            return True
        if i == a.cells[d]:
            return search(d + 1, 0, set())
        for target in range(b.cells[d]):
            if target in used:
                continue
            for sign in (1, -1):
                if column_ok(d, i, target, sign):
                    solution[d][i] = (target, sign)
                    used.add(target)
                    if search(d, i + 1, used):
                        return True
                    used.discard(target)
        solution[d][i] = None
        return False

    return solution if search(0, 0, set()) else None


def conjugates(a: ChainComplex, b: ChainComplex, phi: list[list[tuple[int, int]]]) -> bool:
    """Exact check that d^b_d P_d = P_{d-1} d^a_d for the signed permutations P."""
    def perm_matrix(d):
        p = [[0] * a.cells[d] for _ in range(b.cells[d])]
        for i, (t, s) in enumerate(phi[d]):
            p[t][i] = s
        return p

    for d in range(1, a.dim + 1):
        left = _matmul(b.boundaries[d], perm_matrix(d))
        right = _matmul(perm_matrix(d - 1), a.boundaries[d])
        if left != right:
            return False
    return True


def antipodal_quotient_check() -> bool:
    g42 = build_g42_sponge()
    quotient = quotient_by_involution(g42, g42_antipodal_pairing(g42))
    hp2 = build_hp2_sponge()
    phi = find_isomorphism(quotient, hp2)
    return phi is not None and conjugates(quotient, hp2, phi)


# --- face complexes (manifolds with corners) -----------------------------------


@dataclass(frozen=True)
class FaceComplex:
    """Manifold with corners: a cell complex plus its faces as closed subcomplexes."""

    complex: ChainComplex
    faces: dict[str, frozenset[str]] = field(default_factory=dict)

    def face_complex(self, name: str) -> ChainComplex:
        return self.complex.restrict(self.faces[name])

    def faces_without_vertex(self) -> list[str]:
        vertices = set(self.complex.names[0])
        return [f for f, cells in self.faces.items() if not cells & vertices]


def homology_polytope_check(fc: FaceComplex) -> tuple[bool, list[str]]:
    """True iff every face is Z-acyclic; also returns the failing faces."""
    failing = [name for name in fc.faces if not homology(fc.face_complex(name)).is_acyclic()]
    return not failing, failing


def _closure(c: ChainComplex, cell: str) -> frozenset[str]:
    out = {cell}
    stack = [cell]
    while stack:
        d, j = c.index(stack.pop())
        if d == 0:
            continue
        for i, row in enumerate(c.boundaries[d]):
            name = c.names[d - 1][i]
            if row[j] and name not in out:
                out.add(name)
                stack.append(name)
    return frozenset(out)


def build_cube(n: int = 3) -> FaceComplex:
    """Cubical structure on [0, 1]^n; every cell is a face."""
    cells = [[] for _ in range(n + 1)]
    boundary = {}
    for word in itertools.product("01*", repeat=n):
        cells[word.count("*")].append("".join(word))
    for d in range(1, n + 1):
        for w in cells[d]:
            stars = [k for k, ch in enumerate(w) if ch == "*"]
            bd = {}
            for p, k in enumerate(stars):
                sign = (-1) ** p
                bd[w[:k] + "1" + w[k + 1:]] = sign
                bd[w[:k] + "0" + w[k + 1:]] = -sign
            boundary[w] = bd
    c = complex_from_cells(cells, boundary)
    return FaceComplex(c, {name: _closure(c, name) for layer in cells for name in layer})


def _rugby_cells(tag: str) -> tuple[list[list[str]], dict[str, dict[str, int]]]:
    n, s = f"N{tag}", f"S{tag}"
    e = [f"E{k}{tag}" for k in (1, 2, 3)]
    f = [f"F{k}{tag}" for k in (1, 2, 3)]
    boundary = {name: {n: 1, s: -1} for name in e}
    boundary[f[0]] = {e[1]: 1, e[2]: -1}
    boundary[f[1]] = {e[0]: 1, e[2]: -1}
    boundary[f[2]] = {e[0]: 1, e[1]: -1}
    return [[n, s], e, f], boundary


def build_rugby_ball() -> FaceComplex:
    """S^6/T^3 = {(r, c1, c2, c3) : c_i >= 0} in S^3: a 3-disk with two corners.

    Vertices N, S (r = +-1); edges E_k = {c_i = c_j = 0}; facets F_k = {c_k = 0}.
    """
    cells, boundary = _rugby_cells("")
    cells.append(["B"])
    boundary["B"] = {"F1": 1, "F2": -1, "F3": 1}
    c = complex_from_cells(cells, boundary)
    names = [n for layer in cells for n in layer]
    return FaceComplex(c, {n: _closure(c, n) for n in names})


def build_fig2_complex() -> FaceComplex:
    """Connected sum of two rugby balls at interior points of facets F1 and F1'.

    The two facets merge into one annulus facet A.  Its cell structure uses a
    seam edge from N to N' that is not itself a face.
    """
    cells1, bd1 = _rugby_cells("")
    cells2, bd2 = _rugby_cells("'")
    boundary = {**bd1, **bd2}
    vertices = cells1[0] + cells2[0]
    edges = cells1[1] + cells2[1] + ["seam"]
    boundary["seam"] = {"N'": 1, "N": -1}
    facets = ["A", "F2", "F3", "F2'", "F3'"]
    boundary["A"] = {"E2": 1, "E3": -1, "E2'": -1, "E3'": 1}
    boundary["P"] = {"A": 1, "F2": -1, "F3": 1, "F2'": 1, "F3'": -1}
    for name in ("F1", "F1'"):
        boundary.pop(name)
    c = complex_from_cells([vertices, edges, facets, ["P"]], boundary)
    faces = {n: _closure(c, n) for n in vertices + cells1[1] + cells2[1] + facets + ["P"]}
    faces["A"] = faces["A"] | {"seam"}
    faces["P"] = frozenset(n for layer in c.names for n in layer)
    return FaceComplex(c, faces)


PRESETS = {
    "rp2": build_rp2,
    "hp2-sponge": build_hp2_sponge,
    "g42-sponge": build_g42_sponge,
    "fig2": lambda: build_fig2_complex().complex,
    "rugby": lambda: build_rugby_ball().complex,
    "cube": lambda: build_cube(3).complex,
    "s1": lambda: build_sphere(1),
    "s2": lambda: build_sphere(2),
    "s3": lambda: build_sphere(3),
}

FACE_PRESETS = {"fig2": build_fig2_complex, "rugby": build_rugby_ball, "cube": build_cube}


# --- HP^2 skeleton --------------------------------------------------------------

# Per homogeneous coordinate: "0" zero, "+" in C, "-" in jC, "*" any quaternion.
_ALLOWED = {"0": {"0"}, "+": {"0", "+"}, "-": {"0", "-"}, "*": {"0", "+", "-", "*"}}


def _contained(small: str, big: str) -> bool:
    # Right multiplication by j swaps C and jC in every coordinate at once.
    flipped = small.translate(str.maketrans("+-", "-+"))
    return any(all(s in _ALLOWED[b] for s, b in zip(cand, big)) for cand in (small, flipped))


def hp2_strata_patterns() -> dict[str, str]:
    patterns = {}
    for i, j in itertools.combinations(range(3), 2):
        pat = ["0"] * 3
        pat[i] = pat[j] = "*"
        patterns[f"M_{{{i}{j}}}"] = "".join(pat)
    for eps in N_LABELS:
        patterns[f"N_{{{eps}}}"] = eps
    for i, j in itertools.combinations(range(3), 2):
        for sj in "+-":
            pat = ["0"] * 3
            pat[i], pat[j] = "+", sj
            patterns[f"S_{{{i}+{j}{sj}}}"] = "".join(pat)
    for i in range(3):
        # [h : 0 : 0] = [1 : 0 : 0]
        pat = ["0"] * 3
        pat[i] = "+"
        patterns[f"v{i}"] = "".join(pat)
    return patterns


@dataclass(frozen=True)
class SkeletonCensus:
    counts: dict[str, int]
    incidences: dict[str, tuple[str, ...]]

    def containing(self, name: str, kind: str) -> tuple[str, ...]:
        return tuple(n for n in self.incidences[name] if n.startswith(kind))


def hp2_skeleton_census() -> SkeletonCensus:
    """Invariant submanifolds of HP^2 and their containments, from coordinate patterns."""
    patterns = hp2_strata_patterns()
    counts = {kind: sum(1 for n in patterns if n.startswith(kind)) for kind in ("M", "N", "S", "v")}
    incidences = {}
    for small, sp in patterns.items():
        incidences[small] = tuple(
            big for big, bp in patterns.items() if big != small and _contained(sp, bp)
        )
    return SkeletonCensus(counts, incidences)


def build_hp2_gkm() -> nx.MultiGraph:
    """GKM graph: fixed points joined by the invariant 2-spheres through them."""
    census = hp2_skeleton_census()
    g = nx.MultiGraph()
    g.add_nodes_from(f"v{i}" for i in range(3))
    for name in census.incidences:
        if name.startswith("S"):
            ends = [v for v in g.nodes if name in census.incidences[v]]
            g.add_edge(*ends, key=name)
    return g


# --- text format ------------------------------------------------------------------


def format_complex(c: ChainComplex) -> str:
    """Top dimension, cell counts, then each boundary matrix as rows of integers."""
    lines = [str(c.dim), " ".join(map(str, c.cells))]
    for d in range(1, c.dim + 1):
        lines.append(f"# boundary {d}")
        lines.extend(" ".join(map(str, row)) for row in c.boundaries[d])
    return "\n".join(lines) + "\n"


def parse_complex(text: str) -> ChainComplex:
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append([int(tok) for tok in line.split()])
    if len(rows) < 2 or len(rows[0]) != 1:
        raise InvalidComplexError("expected the top dimension on the first line")
    dim = rows[0][0]
    cells = tuple(rows[1])
    if len(cells) != dim + 1:
        raise InvalidComplexError(f"expected {dim + 1} cell counts, got {len(cells)}")
    pos = 2
    boundaries = {}
    for d in range(1, dim + 1):
        block = rows[pos:pos + cells[d - 1]]
        pos += cells[d - 1]
        if len(block) != cells[d - 1] or any(len(r) != cells[d] for r in block):
            raise InvalidComplexError(f"boundary {d} should be {cells[d - 1]} rows of {cells[d]} integers")
        boundaries[d] = block
    if pos != len(rows):
        raise InvalidComplexError("trailing rows after the last boundary matrix")
    return ChainComplex(cells, boundaries)
