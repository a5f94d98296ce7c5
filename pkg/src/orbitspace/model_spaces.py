"""Polygons with characteristic data: quasitoric pairs and quoric colorings.

Side ``i`` of an m-gon joins vertex ``i - 1`` and vertex ``i``; vertex ``i``
is where sides ``i`` and ``i + 1`` (mod m) meet.  A point of the polygon
is only needed up to its open face, see :class:`Face`.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .algebra import Quaternion
from .homology import integer_rank
from .orbit_maps import torus_invol_quotient

COLORS = ("S1", "S2", "S12")


@dataclass(frozen=True)
class Polygon:
    m: int

    def __post_init__(self):
        if self.m < 3:
            raise ValueError(f"a polygon needs at least 3 sides, got {self.m}")

    def vertex_sides(self, vertex: int) -> tuple[int, int]:
        return vertex % self.m, (vertex + 1) % self.m

    def f_vector(self) -> tuple[int, int, int]:
        """(f_{-1}, f_0, f_1) = (1, vertices, sides)."""
        return 1, self.m, self.m


@dataclass(frozen=True)
class Face:
    """Open face of a polygon containing a point: interior, side i or vertex i."""

    kind: str
    index: int = 0

    def __post_init__(self):
        if self.kind not in ("interior", "side", "vertex"):
            raise ValueError(f"unknown face kind {self.kind!r}")


@dataclass(frozen=True)
class QTCharPair:
    polygon: Polygon
    lambdas: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if len(self.lambdas) != self.polygon.m:
            raise ValueError("need one vector per side")
        object.__setattr__(self, "lambdas", tuple(tuple(int(x) for x in v) for v in self.lambdas))


@dataclass(frozen=True)
class QuoricFunctor:
    polygon: Polygon
    colors: tuple[str, ...]

    def __post_init__(self):
        if len(self.colors) != self.polygon.m:
            raise ValueError("need one color per side")
        bad = [c for c in self.colors if c not in COLORS]
        if bad:
            raise ValueError(f"unknown colors {bad}")
        object.__setattr__(self, "colors", tuple(self.colors))


@dataclass(frozen=True)
class WeightSet:
    weights: tuple[tuple[int, ...], ...]
    chart: str = ""
    relabeling: tuple[tuple[int, ...], ...] = ()


def _det2(a: Sequence[int], b: Sequence[int]) -> int:
    return a[0] * b[1] - a[1] * b[0]


def star_condition_check(cp: QTCharPair) -> tuple[bool, list[int]]:
    """Adjacent characteristic vectors must form a lattice basis.  Returns violating vertices."""
    m = cp.polygon.m
    bad = [v for v in range(m) if abs(_det2(cp.lambdas[v], cp.lambdas[(v + 1) % m])) != 1]
    return not bad, bad


# --- conjugation involution on X_(P, lambda) ---------------------------------------

# Torus elements are angle vectors in (Q/Z)^2 held as Fractions, so circle
# membership is decided exactly.


def _frac_mod1(x: Fraction) -> Fraction:
    return x - math.floor(x)


def in_characteristic_subgroup(cp: QTCharPair, face: Face, t: Sequence[Fraction]) -> bool:
    """Is t in the stabilizer subgroup of ``face`` (interior: trivial group)?"""
    t = [_frac_mod1(Fraction(x)) for x in t]
    if face.kind == "interior":
        return all(x == 0 for x in t)
    if face.kind == "side":
        a, b = cp.lambdas[face.index]
        g = math.gcd(a, b)
        if g == 0:
            return all(x == 0 for x in t)
        # the circle {s (a, b)} equals the connected kernel of the primitive character (b, -a)/g
        a, b = a // g, b // g
        return _frac_mod1(b * t[0] - a * t[1]) == 0
    i, j = cp.polygon.vertex_sides(face.index)
    la, lb = cp.lambdas[i], cp.lambdas[j]
    det = _det2(la, lb)
    if det == 0:
        return in_characteristic_subgroup(cp, Face("side", i), t)
    # the product of two independent circles is all of T^2
    return True


def conj_involution_welldef(
    cp: QTCharPair, samples: int = 10_000, seed: int = 0, denominator: int = 360
) -> tuple[bool, tuple | None]:
    """Check that t -> conj(t) maps equivalent representatives to equivalent ones.

    Samples a face, a base element t and a subgroup element h with
    (x, t) ~ (x, t h).  Conjugation sends them to (x, -t) and (x, -t - h),
    which are equivalent iff -h is in the same subgroup.  Returns the first
    violating (face, t, h) or None.
    """
    rng = random.Random(seed)
    m = cp.polygon.m
    for _ in range(samples):
        kind = rng.choice(("interior", "side", "vertex"))
        face = Face(kind, rng.randrange(m))
        t = [Fraction(rng.randrange(denominator), denominator) for _ in range(2)]
        s = Fraction(rng.randrange(denominator), denominator)
        if kind == "interior":
            h = [Fraction(0), Fraction(0)]
        elif kind == "side":
            a, b = cp.lambdas[face.index]
            h = [s * a, s * b]
        else:
            i, j = cp.polygon.vertex_sides(face.index)
            s2 = Fraction(rng.randrange(denominator), denominator)
            h = [s * cp.lambdas[i][k] + s2 * cp.lambdas[j][k] for k in range(2)]
        assert in_characteristic_subgroup(cp, face, h)
        t2 = [t[k] + h[k] for k in range(2)]
        conj_t, conj_t2 = [-x for x in t], [-x for x in t2]
        diff = [conj_t2[k] - conj_t[k] for k in range(2)]
        if not in_characteristic_subgroup(cp, face, diff):
            return False, (face, tuple(t), tuple(h))
    return True, None


def sigma_fixed_in_interior(t: Sequence[Fraction]) -> bool:
    """Over an interior point sigma fixes t iff conj(t) = t, i.e. t in {+-1}^2."""
    return all(_frac_mod1(2 * Fraction(x)) == 0 for x in t)


def sigma_fiber_type(cp: QTCharPair, face: Face) -> str:
    """Fiber of X/sigma -> P over a point: sphere, interval or point."""
    return {"interior": "sphere", "side": "interval", "vertex": "point"}[face.kind]


def sigma_fiber_point(cp: QTCharPair, face: Face, t: Sequence[float]) -> np.ndarray:
    """Model coordinates of the sigma-orbit of (x, t), t given as angles in [0, 1).

    Interior: the pillowcase T^2/(-1) in R^3.  Side: the residual circle
    T^2/lambda, parametrized by the character (b, -a), folded to [-1, 1].
    Vertex: the empty coordinate vector.
    """
    t = np.asarray(t, dtype=float)
    if face.kind == "interior":
        return torus_invol_quotient(t[..., 0], t[..., 1]).coords
    if face.kind == "side":
        a, b = cp.lambdas[face.index]
        return np.cos(2 * np.pi * (b * t[..., 0] - a * t[..., 1]))[..., None]
    return np.zeros(t.shape[:-1] + (0,))


# --- quoric colorings --------------------------------------------------------------


def quoric_coloring_valid(qf: QuoricFunctor) -> bool:
    m = qf.polygon.m
    return all(qf.colors[i] != qf.colors[(i + 1) % m] for i in range(m))


_SWAP12 = {"S1": "S2", "S2": "S1", "S12": "S12"}


def _symmetry_images(colors: tuple[str, ...], symmetry: str) -> Iterable[tuple[str, ...]]:
    m = len(colors)
    if symmetry == "raw":
        yield colors
        return
    if symmetry == "swap12":
        yield colors
        yield tuple(_SWAP12[c] for c in colors)
        return
    if symmetry in ("full", "dihedral+swap12"):
        for seq in (colors, colors[::-1]):
            for r in range(m):
                rot = seq[r:] + seq[:r]
                yield rot
                yield tuple(_SWAP12[c] for c in rot)
        return
    raise ValueError(f"unknown symmetry {symmetry!r}")


def _color_key(colors: tuple[str, ...]) -> tuple[int, ...]:
    return tuple(COLORS.index(c) for c in colors)


def canonical_coloring(colors: Sequence[str], symmetry: str) -> tuple[str, ...]:
    return min(_symmetry_images(tuple(colors), symmetry), key=_color_key)


def enumerate_quoric(m: int, symmetry: str = "raw") -> list[QuoricFunctor]:
    """All proper 3-colorings of the m-gon, one per class of the symmetry group.

    The group is generated by S1 <-> S2 and, for "full", the dihedral
    motions of the polygon.  S12 is never moved.
    """
    polygon = Polygon(m)
    out = []
    seen = set()

    def extend(prefix: list[str]):
        if len(prefix) == m:
            if prefix[-1] == prefix[0]:
                return
            colors = tuple(prefix)
            canon = canonical_coloring(colors, symmetry)
            if canon not in seen:
                seen.add(canon)
                out.append(QuoricFunctor(polygon, canon))
            return
        for c in COLORS:
            if not prefix or prefix[-1] != c:
                prefix.append(c)
                extend(prefix)
                prefix.pop()

    extend([])
    out.sort(key=lambda qf: _color_key(qf.colors))
    return out


def cycle_coloring_count(m: int) -> int:
    """Proper 3-colorings of an m-cycle: 2^m + 2(-1)^m."""
    return 2 ** m + 2 * (-1) ** m


# --- T^3 weights ---------------------------------------------------------------------

# Chart A: (t1 s1 t3, t2 s2 t3); chart B: (t1 s1 t2^-1, t2 s2 t3).
CHART_WEIGHTS = {
    "A": ((1, 0, 1), (1, 0, -1), (0, 1, 1), (0, 1, -1)),
    "B": ((1, -1, 0), (1, 1, 0), (0, 1, 1), (0, 1, -1)),
}

_IDENTITY3 = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
_SWAP_T1_T2 = ((0, 1, 0), (1, 0, 0), (0, 0, 1))


def chart_weights(chart: str) -> WeightSet:
    if chart not in CHART_WEIGHTS:
        raise ValueError(f"unknown chart {chart!r}")
    return WeightSet(CHART_WEIGHTS[chart], chart, _IDENTITY3)


class UnsupportedChartError(ValueError):
    pass


def quoric_weights(qf: QuoricFunctor, vertex: int) -> WeightSet:
    """Tangent weights of the T^3 action at the fixed point over ``vertex``.

    A vertex between an S1 side and an S2 side is modelled by chart A.  A
    vertex with an S12 side is chart B, whose sides carry S1 and S12; when
    the other side is S2 the roles of t1 and t2 are exchanged, and the
    exchange is returned as ``relabeling``.
    """
    i, j = qf.polygon.vertex_sides(vertex)
    pair = {qf.colors[i], qf.colors[j]}
    if pair == {"S1", "S2"}:
        return chart_weights("A")
    if pair == {"S1", "S12"}:
        return chart_weights("B")
    if pair == {"S2", "S12"}:
        p = np.array(_SWAP_T1_T2)
        weights = tuple(tuple(int(x) for x in p @ np.array(w)) for w in CHART_WEIGHTS["B"])
        return WeightSet(weights, "B", _SWAP_T1_T2)
    raise UnsupportedChartError(f"vertex {vertex} has sides colored {sorted(pair)}")


def general_position_check(ws: WeightSet | Sequence[Sequence[int]], complexity: int = 1) -> bool:
    """Every (n - complexity)-subset of the n weights is linearly independent."""
    weights = ws.weights if isinstance(ws, WeightSet) else tuple(tuple(w) for w in ws)
    n = len(weights)
    k = n - complexity
    if k <= 0:
        return True
    for subset in itertools.combinations(weights, k):
        if integer_rank([list(w) for w in subset]) < k:
            return False
    return True


def h_from_f(f: Sequence[int], d: int) -> tuple[int, ...]:
    """h-vector of a simple d-polytope from (f_{-1}, f_0, ..., f_{d-1})."""
    return tuple(
        sum((-1) ** (k - i) * math.comb(d - i, k - i) * f[i] for i in range(k + 1)) for k in range(d + 1)
    )


def h_vector(p: Polygon) -> tuple[int, int, int]:
    # Dual of the m-gon is again an m-gon; f-vector (1, m, m).
    return h_from_f(p.f_vector(), 2)


def betti_quoric(qf: QuoricFunctor) -> dict[int, int]:
    """Betti numbers of the quoric 8-manifold: b_{4k} = h_k, zero elsewhere."""
    h = h_vector(qf.polygon)
    return {d: (h[d // 4] if d % 4 == 0 else 0) for d in range(9)}


def quoric_fiber_type(qf: QuoricFunctor, face: Face) -> str:
    """Fiber of X -> P: point, interval (S^3/T^2 model) or S3 ((S^3)^2/T^3 model)."""
    return {"vertex": "point", "side": "interval", "interior": "S3"}[face.kind]


# --- well-definedness of the extra circle ------------------------------------------------


def rational_unit_quaternion(rng: random.Random, scale: int = 50) -> Quaternion:
    """Exact unit quaternion from inverse stereographic projection of a rational point."""
    v = [Fraction(rng.randint(-scale, scale), rng.randint(1, scale)) for _ in range(3)]
    n = sum(x * x for x in v)
    return Quaternion((1 - n) / (1 + n), 2 * v[0] / (1 + n), 2 * v[1] / (1 + n), 2 * v[2] / (1 + n))


def rational_complex_unit(rng: random.Random, scale: int = 50) -> Quaternion:
    x = Fraction(rng.randint(-scale, scale), rng.randint(1, scale))
    n = x * x
    return Quaternion((1 - n) / (1 + n), 2 * x / (1 + n), 0, 0)


_ONE = Quaternion(1, 0, 0, 0)


def _subgroup_member(color: str | None, s: Quaternion) -> tuple[Quaternion, Quaternion]:
    if color is None:
        return _ONE, _ONE
    return {"S1": (s, _ONE), "S2": (_ONE, s), "S12": (s, s)}[color]


def _in_subgroup(color: str | None, g: tuple[Quaternion, Quaternion]) -> bool:
    a, b = g
    if color is None:
        return a == _ONE and b == _ONE
    if color == "S1":
        return b == _ONE
    if color == "S2":
        return a == _ONE
    return a == b


def quoric_t3_welldef(qf: QuoricFunctor, samples: int = 1000, seed: int = 0) -> tuple[bool, tuple | None]:
    """Conjugating each side subgroup (and the trivial group) by (t, t) keeps it inside.

    Exact rational arithmetic; returns the first violating (color, g, t) or None.
    """
    if not quoric_coloring_valid(qf):
        raise ValueError("the coloring is not proper")
    rng = random.Random(seed)
    groups: list[str | None] = [None, *sorted(set(qf.colors))]
    for _ in range(samples):
        color = rng.choice(groups)
        g = _subgroup_member(color, rational_unit_quaternion(rng))
        t = rational_complex_unit(rng)
        conj = (t.inverse() * g[0] * t, t.inverse() * g[1] * t)
        if not _in_subgroup(color, conj):
            return False, (color, g, t)
    return True, None


# --- text format ---------------------------------------------------------------------------


def format_sides(sides: Sequence) -> str:
    parts = []
    for s in sides:
        parts.append(s if isinstance(s, str) else ",".join(str(int(x)) for x in s))
    return f"{len(sides)}; " + " ".join(parts)


def format_coloring(qf: QuoricFunctor) -> str:
    return format_sides(qf.colors)


def format_char_pair(cp: QTCharPair) -> str:
    return format_sides(cp.lambdas)


def parse_polygon_line(line: str) -> QuoricFunctor | QTCharPair:
    """Parse ``m; side_0 ... side_{m-1}`` with sides S1|S2|S12 or integer vectors a,b."""
    head, sep, rest = line.partition(";")
    if not sep:
        raise ValueError(f"missing ';' in {line!r}")
    m = int(head.strip())
    tokens = rest.split()
    if len(tokens) != m:
        raise ValueError(f"expected {m} sides, got {len(tokens)}")
    if all(tok in COLORS for tok in tokens):
        return QuoricFunctor(Polygon(m), tuple(tokens))
    vectors = []
    for tok in tokens:
        parts = tok.split(",")
        if len(parts) != 2:
            raise ValueError(f"bad side {tok!r}")
        vectors.append((int(parts[0]), int(parts[1])))
    return QTCharPair(Polygon(m), tuple(vectors))
