"""Normalized matrix spheres Y_{l,k} and their quotients by orthogonal groups.

Representatives of Y_{l,k} = Mat_{l x k} / R_+ carry unit Frobenius norm.
Points of the positive semidefinite cone are normalized to trace one, which
puts them on the spectrahedron, the affine slice {trace = 1} of the cone.

Y_{n,n}/SO(n) is modelled as the double of the spectrahedron: the pair
(P, t) with P the trace-normalized symmetric square root of A^T A and
t = sign(det A) * lambda_min(P).  The two sheets t > 0 and t < 0 meet along
t = 0, which is exactly the boundary of the cone.

All functions broadcast over leading batch axes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def normalize(a: np.ndarray) -> np.ndarray:
    """Rescale to unit Frobenius norm over the last two axes."""
    a = np.asarray(a, dtype=float)
    norm = np.linalg.norm(a, axis=(-2, -1), keepdims=True)
    if np.any(norm == 0):
        raise ValueError("the zero matrix has no ray")
    return a / norm


def symmetrize(p: np.ndarray) -> np.ndarray:
    return 0.5 * (p + np.swapaxes(p, -1, -2))


def gram(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    return symmetrize(np.swapaxes(a, -1, -2) @ a)


def lambda_min(p: np.ndarray) -> np.ndarray:
    return np.linalg.eigvalsh(symmetrize(np.asarray(p, dtype=float)))[..., 0]


def psd_sqrt_part(a: np.ndarray) -> np.ndarray:
    """Symmetric PSD square root of A^T A, computed from the SVD of A."""
    a = np.asarray(a, dtype=float)
    _, s, vt = np.linalg.svd(a)
    v = np.swapaxes(vt, -1, -2)
    return symmetrize((v * s[..., None, :]) @ vt)


def polar(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Polar decomposition A = Q P, Q orthogonal and P = sqrt(A^T A).

    For singular A any orthogonal Q with A = Q P is valid; the one returned
    is U V^T from the SVD.
    """
    a = np.asarray(a, dtype=float)
    if a.shape[-1] != a.shape[-2]:
        raise ValueError("polar decomposition needs a square matrix")
    u, s, vt = np.linalg.svd(a)
    v = np.swapaxes(vt, -1, -2)
    return u @ vt, symmetrize((v * s[..., None, :]) @ vt)


def trace_normalize(p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    tr = np.trace(p, axis1=-2, axis2=-1)[..., None, None]
    return p / tr


def quotient_Yn1n_On(a: np.ndarray) -> np.ndarray:
    """Orbit of an (n-1) x n matrix under left O(n-1): its trace-one Gram matrix.

    The result is a degenerate n x n PSD matrix, i.e. a ray in the boundary
    of the cone.
    """
    a = np.asarray(a, dtype=float)
    if a.shape[-2] != a.shape[-1] - 1:
        raise ValueError(f"expected shape (n-1, n), got {a.shape[-2:]}")
    return trace_normalize(gram(a))


@dataclass(frozen=True)
class DoubledSpherePoint:
    """Point (P, t) of the doubled spectrahedron; |t| = lambda_min(P)."""

    matrix: np.ndarray
    height: np.ndarray

    def coords(self) -> np.ndarray:
        m = np.asarray(self.matrix)
        flat = m.reshape(m.shape[:-2] + (-1,))
        return np.concatenate([flat, np.asarray(self.height)[..., None]], axis=-1)

    def residual(self) -> np.ndarray:
        return np.abs(np.abs(self.height) - lambda_min(self.matrix))


def quotient_Ynn_SOn(a: np.ndarray) -> DoubledSpherePoint:
    a = np.asarray(a, dtype=float)
    if a.shape[-1] != a.shape[-2]:
        raise ValueError("Y_{n,n} needs square matrices")
    p_hat = trace_normalize(psd_sqrt_part(a))
    sign = np.where(np.linalg.det(a) < 0, -1.0, 1.0)
    return DoubledSpherePoint(p_hat, sign * lambda_min(p_hat))


def spectrahedron_contains(p: np.ndarray, tol: float = 1e-12) -> bool:
    p = np.asarray(p, dtype=float)
    if np.max(np.abs(p - p.T)) > tol:
        return False
    return bool(abs(np.trace(p) - 1.0) <= tol and lambda_min(p) >= -tol)


def dim_formulas(n: int) -> tuple[int, int, int]:
    """(dim of Y_{n-1,n}/O(n-1), dim of Y_{n,n}/SO(n), dim of Spec_n)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return (n * n + n - 4) // 2, (n * n + n - 2) // 2, n * (n + 1) // 2 - 1


def hopf_invariant_y22(a: np.ndarray) -> np.ndarray:
    """Unit vector (g11 - g22, 2 g12, 2 det A) for A in Y_{2,2}, G = A^T A.

    The identity (g11 - g22)^2 + 4 g12^2 = 1 - 4 det G and det G = det(A)^2
    make it a point of S^2; it is constant on SO(2)-orbits.
    """
    g = gram(a)
    det = np.linalg.det(np.asarray(a, dtype=float))
    return np.stack([g[..., 0, 0] - g[..., 1, 1], 2.0 * g[..., 0, 1], 2.0 * det], axis=-1)


def hopf_invariant_from_doubled(point: DoubledSpherePoint) -> np.ndarray:
    """Recover hopf_invariant_y22 from the doubled-sphere coordinates (n = 2)."""
    p = np.asarray(point.matrix)
    g = trace_normalize(p @ p)
    det_g = np.clip(np.linalg.det(g), 0.0, None)
    sign = np.where(np.asarray(point.height) < 0, -1.0, 1.0)
    return np.stack([g[..., 0, 0] - g[..., 1, 1], 2.0 * g[..., 0, 1], 2.0 * sign * np.sqrt(det_g)], axis=-1)


def procrustes_rotation(a: np.ndarray, b: np.ndarray, special: bool = True) -> np.ndarray:
    """Orthogonal Q minimizing ||Q A - B||_F, restricted to SO(n) when ``special``."""
    m = np.asarray(a, dtype=float) @ np.swapaxes(np.asarray(b, dtype=float), -1, -2)
    u, _, vt = np.linalg.svd(m)
    v = np.swapaxes(vt, -1, -2)
    ut = np.swapaxes(u, -1, -2)
    q = v @ ut
    if special:
        d = np.sign(np.linalg.det(q))
        d = np.where(d == 0, 1.0, d)
        fix = np.ones(q.shape[:-1])
        fix[..., -1] = d
        q = (v * fix[..., None, :]) @ ut
    return q
