"""Quaternions, octonions, torus elements and the rank-two torus inside G2.

Array conventions: a quaternion is a trailing axis of length 4 holding the
coefficients of (1, i, j, k); an octonion is a trailing axis of length 8 in
the basis order (1, l, i, il, j, jl, k, kl).  Every array function
broadcasts over leading axes so that whole sample batches go through one
call.

A quaternion is split into a complex pair as h = z + j*u with z, u complex.
Since j*i = -k this gives z = a + b i and u = c - d i.  Left multiplication
by a complex unit t then reads t(z, u) = (t z, conj(t) u).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

TWO_PI = 2.0 * math.pi

OCTONION_BASIS = ("1", "l", "i", "il", "j", "jl", "k", "kl")


def _hamilton(a1, b1, c1, d1, a2, b2, c2, d2):
    return (
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    )


@dataclass(frozen=True)
class Quaternion:
    """a + b i + c j + d k.  Coefficients may be floats or Fractions."""

    a: object = 0
    b: object = 0
    c: object = 0
    d: object = 0

    def __mul__(self, other: Quaternion) -> Quaternion:
        return Quaternion(*_hamilton(self.a, self.b, self.c, self.d, other.a, other.b, other.c, other.d))

    def __add__(self, other: Quaternion) -> Quaternion:
        return Quaternion(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __sub__(self, other: Quaternion) -> Quaternion:
        return Quaternion(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def __neg__(self) -> Quaternion:
        return Quaternion(-self.a, -self.b, -self.c, -self.d)

    def conj(self) -> Quaternion:
        return Quaternion(self.a, -self.b, -self.c, -self.d)

    def norm2(self):
        return self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d

    def norm(self) -> float:
        return math.sqrt(self.norm2())

    def inverse(self) -> Quaternion:
        n = self.norm2()
        return Quaternion(self.a / n, -self.b / n, -self.c / n, -self.d / n)

    def split(self) -> tuple[complex, complex]:
        return complex(self.a, self.b), complex(self.c, -self.d)

    @classmethod
    def from_split(cls, z: complex, u: complex) -> Quaternion:
        return cls(z.real, z.imag, u.real, -u.imag)

    def as_array(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c, self.d], dtype=float)


def quat_mul(p, q):
    """Hamilton product.  Accepts two Quaternions or two (..., 4) arrays."""
    if isinstance(p, Quaternion) and isinstance(q, Quaternion):
        return p * q
    p = np.asarray(p)
    q = np.asarray(q)
    return np.stack(_hamilton(*np.moveaxis(p, -1, 0), *np.moveaxis(q, -1, 0)), axis=-1)


def quat_conj(q: np.ndarray) -> np.ndarray:
    q = np.asarray(q)
    return q * np.array([1.0, -1.0, -1.0, -1.0])


def quat_split(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(..., 4) -> complex arrays (z, u) with h = z + j u."""
    h = np.asarray(h, dtype=float)
    return h[..., 0] + 1j * h[..., 1], h[..., 2] - 1j * h[..., 3]


def quat_from_split(z, u) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    u = np.asarray(u, dtype=complex)
    return np.stack([z.real, z.imag, u.real, -u.imag], axis=-1)


def complex_to_quat(t) -> np.ndarray:
    """Embed complex numbers as quaternions Re t + Im t * i."""
    t = np.asarray(t, dtype=complex)
    zero = np.zeros(t.shape)
    return np.stack([t.real, t.imag, zero, zero], axis=-1)


def left_circle_on_quat(t, h):
    """Left multiplication by complex units, written in the split: (t z, conj(t) u).

    ``t`` may be a TorusElement with one angle, a complex number or a
    complex array broadcasting against ``h[..., 0]``.
    """
    if isinstance(t, TorusElement):
        if len(t.angles) != 1:
            raise ValueError("left_circle_on_quat needs a one-dimensional torus element")
        t = t.units()[0]
    t = np.asarray(t, dtype=complex)
    z, u = quat_split(h)
    return quat_from_split(t * z, np.conj(t) * u)


@dataclass(frozen=True)
class TorusElement:
    """Point of T^k stored as angles reduced to [0, 2 pi)."""

    angles: tuple[float, ...]

    def __post_init__(self):
        k = len(self.angles)
        if not 1 <= k <= 4:
            raise ValueError(f"torus dimension must be 1..4, got {k}")
        object.__setattr__(self, "angles", tuple(float(a) % TWO_PI for a in self.angles))

    def units(self) -> np.ndarray:
        return np.exp(1j * np.array(self.angles))

    def __mul__(self, other: TorusElement) -> TorusElement:
        return TorusElement(tuple(a + b for a, b in zip(self.angles, other.angles, strict=True)))

    def inverse(self) -> TorusElement:
        return TorusElement(tuple(-a for a in self.angles))

    def isclose(self, other: TorusElement, tol: float = 1e-12) -> bool:
        if len(self.angles) != len(other.angles):
            return False
        for a, b in zip(self.angles, other.angles):
            d = abs(a - b) % TWO_PI
            if min(d, TWO_PI - d) > tol:
                return False
        return True


# --- octonions -------------------------------------------------------------

# Position in the (1, l, i, il, j, jl, k, kl) order of the Cayley-Dickson
# coordinates (a0, a1, a2, a3, b0, b1, b2, b3) of x = a + b l.
_CD_TO_BASIS = (0, 2, 4, 6, 1, 3, 5, 7)


def _cd_product(x, y):
    # (a, b)(c, d) = (a c - conj(d) b, d a + b conj(c)), so that i * l = il.
    a, b = Quaternion(*x[:4]), Quaternion(*x[4:])
    c, d = Quaternion(*y[:4]), Quaternion(*y[4:])
    first = a * c - d.conj() * b
    second = d * a + b * c.conj()
    return (first.a, first.b, first.c, first.d, second.a, second.b, second.c, second.d)


@lru_cache(maxsize=None)
def octonion_structure_constants() -> np.ndarray:
    """Integer tensor C with e_p e_q = sum_r C[p, q, r] e_r in basis order."""
    table = np.zeros((8, 8, 8), dtype=np.int64)
    for p in range(8):
        for q in range(8):
            x = [0] * 8
            y = [0] * 8
            x[_CD_TO_BASIS.index(p)] = 1
            y[_CD_TO_BASIS.index(q)] = 1
            prod = _cd_product(x, y)
            for cd_index, value in enumerate(prod):
                table[p, q, _CD_TO_BASIS[cd_index]] = value
    table.setflags(write=False)
    return table


def oct_mul(x, y):
    """Octonion product of (..., 8) arrays (or Octonion objects)."""
    if isinstance(x, Octonion) and isinstance(y, Octonion):
        return Octonion(tuple(oct_mul(np.array(x.coeffs), np.array(y.coeffs))))
    x = np.asarray(x)
    y = np.asarray(y)
    table = octonion_structure_constants()
    if x.dtype.kind in "iu" and y.dtype.kind in "iu":
        return np.einsum("...p,...q,pqr->...r", x, y, table)
    return np.einsum("...p,...q,pqr->...r", x.astype(float), y.astype(float), table.astype(float))


def oct_conj(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x)
    sign = np.full(8, -1)
    sign[0] = 1
    return x * sign


def oct_norm(x: np.ndarray) -> np.ndarray:
    return np.linalg.norm(np.asarray(x, dtype=float), axis=-1)


@dataclass(frozen=True)
class Octonion:
    coeffs: tuple[float, ...]

    def __post_init__(self):
        if len(self.coeffs) != 8:
            raise ValueError("an octonion has 8 coefficients")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    @classmethod
    def basis(cls, name: str) -> Octonion:
        coeffs = [0] * 8
        coeffs[OCTONION_BASIS.index(name)] = 1
        return cls(tuple(coeffs))

    def __mul__(self, other: Octonion) -> Octonion:
        return oct_mul(self, other)

    def norm(self) -> float:
        return float(oct_norm(np.array(self.coeffs, dtype=float)))

    def as_array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=float)


@dataclass(frozen=True)
class OctonionAutomorphism:
    """sigma_{alpha, beta, gamma}: fixes 1 and l, turns the (i, il), (j, jl),
    (k, kl) planes by alpha, beta, gamma.  Requires alpha + beta + gamma = 0 mod 2 pi."""

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        total = (self.alpha + self.beta + self.gamma) % TWO_PI
        if min(total, TWO_PI - total) > 1e-12:
            raise ValueError(
                f"alpha + beta + gamma must vanish mod 2 pi, got {self.alpha + self.beta + self.gamma!r}"
            )
        for name in ("alpha", "beta", "gamma"):
            object.__setattr__(self, name, float(getattr(self, name)) % TWO_PI)

    @classmethod
    def from_pair(cls, alpha: float, beta: float) -> OctonionAutomorphism:
        return cls(alpha, beta, -alpha - beta)

    def compose(self, other: OctonionAutomorphism) -> OctonionAutomorphism:
        """self after other."""
        return OctonionAutomorphism(self.alpha + other.alpha, self.beta + other.beta, self.gamma + other.gamma)

    def torus_element(self) -> TorusElement:
        return TorusElement((self.alpha, self.beta, self.gamma))


def sigma_matrix(s: OctonionAutomorphism) -> np.ndarray:
    m = np.eye(8)
    for start, angle in zip((2, 4, 6), (s.alpha, s.beta, s.gamma)):
        c, sn = math.cos(angle), math.sin(angle)
        m[start, start] = c
        m[start, start + 1] = sn
        m[start + 1, start] = -sn
        m[start + 1, start + 1] = c
    return m


def sigma_apply(s: OctonionAutomorphism, x):
    if isinstance(x, Octonion):
        return Octonion(tuple(sigma_matrix(s) @ x.as_array()))
    return np.asarray(x, dtype=float) @ sigma_matrix(s).T


def imaginary_octonion_to_s6(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Coordinates (r, z1, z2, z3) of an imaginary octonion.

    r is the l coefficient and z_m = x_m - i x_{m l} for m = i, j, k; in
    these coordinates sigma_{alpha,beta,gamma} is multiplication of z by
    (e^{i alpha}, e^{i beta}, e^{i gamma}).
    """
    x = np.asarray(x, dtype=float)
    r = x[..., 1]
    z = np.stack([x[..., 2] - 1j * x[..., 3], x[..., 4] - 1j * x[..., 5], x[..., 6] - 1j * x[..., 7]], axis=-1)
    return r, z


def s6_to_imaginary_octonion(r, z) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    z = np.asarray(z, dtype=complex)
    zero = np.zeros(r.shape)
    return np.stack(
        [zero, r, z[..., 0].real, -z[..., 0].imag, z[..., 1].real, -z[..., 1].imag, z[..., 2].real, -z[..., 2].imag],
        axis=-1,
    )
