"""Explicit quotient maps for the complexity-one torus actions.

Every map returns a :class:`QuotientPoint`: ambient model coordinates plus
named residuals of the equations cutting out the model sphere (or disk).
Inputs broadcast over leading batch axes; the last axis (or last two, for
HP^2 points) hold the coordinates.

Shapes:
  unit quaternion      (..., 4)
  HP^2 point           (..., 3, 4)   homogeneous coordinates h0, h1, h2
  S^6 point            r (...,), z (..., 3) complex
  C^3 point            (..., 3) complex
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import quat_conj, quat_from_split, quat_mul, quat_split
from .matrices import quotient_Yn1n_On, quotient_Ynn_SOn, lambda_min


@dataclass(frozen=True)
class QuotientPoint:
    coords: np.ndarray
    residuals: dict[str, np.ndarray] = field(default_factory=dict)

    def max_residual(self) -> float:
        if not self.residuals:
            return 0.0
        return max(float(np.max(np.abs(r))) if np.size(r) else 0.0 for r in self.residuals.values())


def hopf(h: np.ndarray) -> np.ndarray:
    """(|z|^2 - |u|^2, Re 2zu, Im 2zu) for h = z + j u.

    Invariant under the left circle action t(z, u) = (t z, conj(t) u).  Right
    multiplication by a unit quaternion rotates the image by an element of SO(3).
    """
    z, u = quat_split(h)
    w = 2.0 * z * u
    return np.stack([np.abs(z) ** 2 - np.abs(u) ** 2, w.real, w.imag], axis=-1)


def join_coordinates(p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Join weights c_i = |h_i| and Hopf factors v_i for a point of S^11 = S^3 * S^3 * S^3.

    A factor with zero weight is set to (1, 0, 0); it never matters.
    """
    p = np.asarray(p, dtype=float)
    c = np.linalg.norm(p, axis=-1)
    safe = np.where(c > 0, c, 1.0)
    v = hopf(p / safe[..., None])
    v = np.where((c > 0)[..., None], v, np.array([1.0, 0.0, 0.0]))
    return c, v


def hp2_matrix(p: np.ndarray) -> np.ndarray:
    """The 3x3 matrix [c0 v0 | c1 v1 | c2 v2] in Y_{3,3}."""
    c, v = join_coordinates(p)
    return np.swapaxes(c[..., None] * v, -1, -2)


def hp2_to_s5(p: np.ndarray) -> QuotientPoint:
    """HP^2 / T^3 -> doubled 5-dimensional spectrahedron (a 5-sphere)."""
    point = quotient_Ynn_SOn(hp2_matrix(p))
    return QuotientPoint(point.coords(), {"height_vs_lambda_min": point.residual()})


def s6_to_s4(r: np.ndarray, z: np.ndarray) -> QuotientPoint:
    """S^6 / T^2 -> (r, |z1|, |z2|, |z3|, Re z1z2z3, Im z1z2z3).

    T^2 = {t1 t2 t3 = 1}.  The image is the graph over the rugby ball of a
    disk whose radius |z1||z2||z3| vanishes on the boundary.
    """
    r = np.asarray(r, dtype=float)
    z = np.asarray(z, dtype=complex)
    m = np.abs(z)
    prod = z[..., 0] * z[..., 1] * z[..., 2]
    coords = np.concatenate([r[..., None], m, prod.real[..., None], prod.imag[..., None]], axis=-1)
    residual = np.abs(np.abs(prod) - m[..., 0] * m[..., 1] * m[..., 2])
    return QuotientPoint(coords, {"phase_radius": residual})


def cp2_conj_to_s4(z: np.ndarray) -> QuotientPoint:
    """CP^2 / conj -> trace-one PSD 3x3 matrices of rank <= 2 (flattened).

    z = x + i y gives B = [x; y] in Y_{2,3}; phase rotation and conjugation act
    on B by left O(2), so the Gram matrix is the quotient.
    """
    z = np.asarray(z, dtype=complex)
    b = np.stack([z.real, z.imag], axis=-2)
    g = quotient_Yn1n_On(b)
    flat = g.reshape(g.shape[:-2] + (9,))
    return QuotientPoint(flat, {"lambda_min": np.abs(lambda_min(g))})


def torus_invol_quotient(x: np.ndarray, y: np.ndarray) -> QuotientPoint:
    """T^2 / (a -> -a) -> S^2, as (cos 2pi x, cos 2pi y, sin 2pi x sin 2pi y)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    u = np.cos(2 * np.pi * x)
    v = np.cos(2 * np.pi * y)
    w = np.sin(2 * np.pi * x) * np.sin(2 * np.pi * y)
    residual = np.abs(w * w - (1 - u * u) * (1 - v * v))
    return QuotientPoint(np.stack([u, v, w], axis=-1), {"pillowcase": residual})


def s4_invol_quotient(r: np.ndarray, z: np.ndarray) -> QuotientPoint:
    """S^4 / (r, z1, z2) -> (r, conj z1, conj z2).

    Squaring y1 + i y2 kills the sign of the imaginary parts.
    """
    r = np.asarray(r, dtype=float)
    z = np.asarray(z, dtype=complex)
    y1, y2 = z[..., 0].imag, z[..., 1].imag
    sq = np.stack([y1 * y1 - y2 * y2, 2 * y1 * y2], axis=-1)
    coords = np.concatenate([r[..., None], z.real, sq], axis=-1)
    residual = np.abs(np.linalg.norm(sq, axis=-1) - (y1 * y1 + y2 * y2))
    return QuotientPoint(coords, {"square_radius": residual})


def s3_conj_circle_quotient(h: np.ndarray) -> QuotientPoint:
    """S^3 / (h -> t h t^-1) -> closed upper hemisphere (a, b, sqrt(c^2 + d^2))."""
    h = np.asarray(h, dtype=float)
    m = np.hypot(h[..., 2], h[..., 3])
    coords = np.stack([h[..., 0], h[..., 1], m], axis=-1)
    residual = np.abs(np.linalg.norm(coords, axis=-1) - 1.0)
    return QuotientPoint(coords, {"hemisphere_radius": residual})


def s3_biaxial_quotient(s: np.ndarray, chart: tuple[int, int] = (1, 1)) -> QuotientPoint:
    """S^3 / T^2 for (t1, t2) s = t1^{+-1} s t2^{+-1}: the interval c1 + c2 = 1.

    ``chart`` records the exponent signs; the squared moduli (|z|^2, |u|^2)
    are invariant for all four of them.
    """
    if any(e not in (1, -1) for e in chart):
        raise ValueError(f"chart signs must be +-1, got {chart}")
    z, u = quat_split(s)
    c = np.stack([np.abs(z) ** 2, np.abs(u) ** 2], axis=-1)
    residual = np.abs(c.sum(axis=-1) - 1.0)
    return QuotientPoint(c, {"simplex": residual})


def s3s3_t3_quotient(s1: np.ndarray, s2: np.ndarray, chart: str = "A") -> QuotientPoint:
    """(S^3)^2 / T^3 -> (c1, c2, Re p, Im p).

    Chart A acts by (t1 s1 t3, t2 s2 t3), chart B by (t1 s1 t2^-1, t2 s2 t3).
    With s_i = z_i + j u_i the torus scales (z_i, u_i) by characters; the
    invariant monomial is p = z1 u1 conj(z2 u2) (A) or z1 u1 z2 conj(u2) (B),
    and |p| = sqrt(c1 (1 - c1) c2 (1 - c2)) with c_i = |z_i|^2.
    """
    z1, u1 = quat_split(s1)
    z2, u2 = quat_split(s2)
    if chart == "A":
        p = z1 * u1 * np.conj(z2 * u2)
    elif chart == "B":
        p = z1 * u1 * z2 * np.conj(u2)
    else:
        raise ValueError(f"unknown chart {chart!r}")
    c1 = np.abs(z1) ** 2
    c2 = np.abs(z2) ** 2
    c1c = np.abs(u1) ** 2
    c2c = np.abs(u2) ** 2
    coords = np.stack([c1, c2, p.real, p.imag], axis=-1)
    residual = np.abs(np.abs(p) - np.sqrt(c1 * c1c * c2 * c2c))
    return QuotientPoint(coords, {"phase_radius": residual})


def s3s3_diag_circle_quotient(s1: np.ndarray, s2: np.ndarray) -> QuotientPoint:
    """(S^3)^2 / (t h1 t^-1, t h2 t^-1) -> (a1, b1, a2, b2, Re w, Im w)."""
    s1 = np.asarray(s1, dtype=float)
    s2 = np.asarray(s2, dtype=float)
    w1 = s1[..., 2] + 1j * s1[..., 3]
    w2 = s2[..., 2] + 1j * s2[..., 3]
    w = w1 * np.conj(w2)
    coords = np.stack([s1[..., 0], s1[..., 1], s2[..., 0], s2[..., 1], w.real, w.imag], axis=-1)
    residual = np.abs(np.abs(w) - np.abs(w1) * np.abs(w2))
    return QuotientPoint(coords, {"phase_radius": residual})


# --- group actions used by the maps above -------------------------------------


def torus_on_hp2(p: np.ndarray, t: np.ndarray) -> np.ndarray:
    """(t0, t1, t2) [h0 : h1 : h2] = [t0 h0 : t1 h1 : t2 h2]; t complex (..., 3)."""
    t = np.asarray(t, dtype=complex)
    z, u = quat_split(p)
    return quat_from_split(t * z, np.conj(t) * u)


def right_on_hp2(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    return quat_mul(p, q[..., None, :])


def conj_by_complex(h: np.ndarray, t: np.ndarray) -> np.ndarray:
    """t h t^-1 for complex units t."""
    t = np.asarray(t, dtype=complex)
    z, u = quat_split(h)
    return quat_from_split(z, np.conj(t) ** 2 * u)


def two_sided_complex(h: np.ndarray, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """left * h * right with complex units on both sides."""
    left = np.asarray(left, dtype=complex)
    right = np.asarray(right, dtype=complex)
    z, u = quat_split(h)
    return quat_from_split(left * right * z, np.conj(left) * right * u)


def t3_on_s3s3(s1, s2, t, chart: str = "A"):
    t = np.asarray(t, dtype=complex)
    t1, t2, t3 = t[..., 0], t[..., 1], t[..., 2]
    if chart == "A":
        return two_sided_complex(s1, t1, t3), two_sided_complex(s2, t2, t3)
    if chart == "B":
        return two_sided_complex(s1, t1, np.conj(t2)), two_sided_complex(s2, t2, t3)
    raise ValueError(f"unknown chart {chart!r}")


# --- HP^2 strata and stabilizers ----------------------------------------------


@dataclass(frozen=True)
class Stratum:
    """Stratum of HP^2 under T^3.

    ``characters`` are integer vectors chi with t^chi = 1 on the stabilizer;
    their common kernel is the full stabilizer, which always contains
    (-1, -1, -1).  ``ambiguous`` is set when some modulus was treated as zero
    without being exactly zero; ``distance`` is then the norm of those moduli.
    """

    label: str
    kind: str
    characters: tuple[tuple[int, int, int], ...]
    distance: float = 0.0
    ambiguous: bool = False

    @property
    def stabilizer_dim(self) -> int:
        if not self.characters:
            return 3
        return 3 - int(np.linalg.matrix_rank(np.array(self.characters, dtype=float)))

    def stabilizes(self, t: np.ndarray, tol: float = 1e-12) -> np.ndarray:
        t = np.asarray(t, dtype=complex)
        ok = np.ones(t.shape[:-1], dtype=bool)
        for chi in self.characters:
            value = np.prod(t ** np.array(chi), axis=-1)
            ok &= np.abs(value - 1.0) <= tol
        return ok


def _sign(flag: bool) -> str:
    return "+" if flag else "-"


def stratify_hp2(p: np.ndarray, tol: float = 1e-8) -> Stratum:
    """Classify one normalized HP^2 point by the zero pattern of (z_i, u_i).

    The right S^3 action is gauge fixed by making the first nonzero
    homogeneous coordinate real and positive; the remaining freedom is
    trivial, so the zero pattern of the other five complex numbers is
    well defined.  With that gauge, t fixes the point iff t_i = t_f on every
    nonzero z_i and conj(t_i) = t_f on every nonzero u_i.
    """
    p = np.asarray(p, dtype=float)
    if p.shape != (3, 4):
        raise ValueError("stratify_hp2 takes a single point of shape (3, 4)")
    small: list[float] = []
    moduli = np.linalg.norm(p, axis=-1)
    nonzero = []
    for m in moduli:
        if m > tol:
            nonzero.append(True)
        else:
            nonzero.append(False)
            if m != 0:
                small.append(m)
    if not any(nonzero):
        raise ValueError("the zero vector is not a point of HP^2")
    first = nonzero.index(True)
    gauge = quat_conj(p[first]) / moduli[first]
    h = quat_mul(p, gauge)
    z, u = quat_split(h)
    z_nonzero = []
    u_nonzero = []
    for i in range(3):
        if not nonzero[i]:
            z_nonzero.append(False)
            u_nonzero.append(False)
            continue
        for value, store in ((z[i], z_nonzero), (u[i], u_nonzero)):
            mod = abs(value)
            store.append(mod > tol)
            if mod <= tol and mod != 0:
                small.append(mod)

    characters = []
    for i in range(3):
        if i == first:
            continue
        if z_nonzero[i]:
            e = [0, 0, 0]
            e[i] += 1
            e[first] -= 1
            characters.append(tuple(e))
        if u_nonzero[i]:
            e = [0, 0, 0]
            e[i] += 1
            e[first] += 1
            characters.append(tuple(e))

    support = [i for i in range(3) if nonzero[i]]
    if len(support) == 1:
        label, kind = f"v{first}", "fixed_point"
    elif len(support) == 2:
        a, b = support
        if z_nonzero[b] and u_nonzero[b]:
            label, kind = f"M_{{{a}{b}}}", "M"
        else:
            label, kind = f"S_{{{a}+{b}{_sign(z_nonzero[b])}}}", "S"
    else:
        pure = [z_nonzero[i] != u_nonzero[i] for i in (1, 2)]
        if all(pure):
            label = "N_{+" + _sign(z_nonzero[1]) + _sign(z_nonzero[2]) + "}"
            kind = "N"
        else:
            label, kind = "free", "free"
    dist = float(np.sqrt(sum(m * m for m in small)))
    return Stratum(label, kind, tuple(characters), dist, bool(small))


def hp2_stabilizer_check(p: np.ndarray, tol: float = 1e-8) -> Stratum:
    """Stabilizer of ``p`` in T^3, described by its defining characters.

    Free stratum: the kernel <(-1, -1, -1)>.  M_ij: {t_i = t_j} with t_i^2 = 1
    (identity component {t_i = t_j = 1}).  N_e: {t0^e0 = t1^e1 = t2^e2}.
    """
    return stratify_hp2(p, tol)


def hp2_fixing_residual(p: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Distance in HP^2 between t.p and p, minimized over the right S^3 action.

    For X = t.p and Y = p in S^11, min_q ||X q - Y||^2 = 2 - 2 |sum_i conj(Y_i) X_i|.
    """
    x = torus_on_hp2(p, t)
    n = quat_mul(quat_conj(np.broadcast_to(p, x.shape)), x).sum(axis=-2)
    return np.sqrt(np.clip(2.0 - 2.0 * np.linalg.norm(n, axis=-1), 0.0, None))
