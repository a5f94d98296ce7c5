"""Sampling, orbit-distance estimation and the verification suites.

Every suite is a pure function of (samples, seed, tolerance).  Random
numbers come from counter-based Philox streams keyed by the seed, a stable
tag naming the stream, and the batch index, so the result does not depend
on how batches are scheduled across workers.

A point of a space is a tuple of arrays sharing a leading batch axis.
"""
from __future__ import annotations

import itertools
import json
import math
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.spatial import cKDTree

from . import algebra, matrices
from . import orbit_maps as om
from .model_spaces import (
    Polygon,
    QTCharPair,
    conj_involution_welldef,
    enumerate_quoric,
    quoric_t3_welldef,
)

BATCH = 2048
GRID_STEPS = 32
REFINE_ITERS = 20

Point = tuple


# --- random streams ---------------------------------------------------------------


def stream(seed: int, tag: str, batch: int = 0) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed) & (2 ** 64 - 1), spawn_key=(zlib.crc32(tag.encode()), batch))
    return np.random.Generator(np.random.Philox(ss))


def _batches(n: int, size: int = BATCH) -> list[tuple[int, int]]:
    return [(b, min(size, n - b * size)) for b in range(math.ceil(n / size))]


# --- spaces -----------------------------------------------------------------------------


def _unit_rows(x: np.ndarray, axes=(-1,)) -> np.ndarray:
    norm = np.sqrt(np.sum(np.abs(x) ** 2, axis=axes, keepdims=True))
    return x / norm


def _gauss_complex(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@dataclass(frozen=True)
class Space:
    name: str
    draw: Callable[[np.random.Generator, int], Point]
    project: Callable[[Point], Point]


def _sphere(d: int) -> Space:
    return Space(
        f"S{d}",
        lambda rng, n: (_unit_rows(rng.standard_normal((n, d + 1))),),
        lambda x: (_unit_rows(x[0]),),
    )


def _draw_s6(rng, n):
    x = _unit_rows(rng.standard_normal((n, 7)))
    return (np.concatenate([np.zeros((n, 1)), x], axis=1),)


def _project_s6(x):
    v = x[0].copy()
    v[..., 0] = 0.0
    return (_unit_rows(v),)


def _draw_s4(rng, n):
    v = _unit_rows(rng.standard_normal((n, 5)))
    return v[:, 0], v[:, 1:3] + 1j * v[:, 3:5]


def _project_s4(x):
    r, z = x
    norm = np.sqrt(r ** 2 + np.sum(np.abs(z) ** 2, axis=-1))
    return r / norm, z / norm[..., None]


def _matrix_space(rows: int, cols: int) -> Space:
    return Space(
        f"Y{rows},{cols}",
        lambda rng, n: (matrices.normalize(rng.standard_normal((n, rows, cols))),),
        lambda x: (matrices.normalize(x[0]),),
    )


SPACES: dict[str, Space] = {
    "S3": _sphere(3),
    "S3xS3": Space(
        "S3xS3",
        lambda rng, n: (_unit_rows(rng.standard_normal((n, 4))), _unit_rows(rng.standard_normal((n, 4)))),
        lambda x: (_unit_rows(x[0]), _unit_rows(x[1])),
    ),
    "S4": Space("S4", _draw_s4, _project_s4),
    "S5C": Space(
        "S5C",
        lambda rng, n: (_unit_rows(_gauss_complex(rng, (n, 3))),),
        lambda x: (_unit_rows(x[0]),),
    ),
    "S6": Space("S6", _draw_s6, _project_s6),
    "S11": Space(
        "S11",
        lambda rng, n: (_unit_rows(rng.standard_normal((n, 3, 4)), axes=(-2, -1)),),
        lambda x: (_unit_rows(x[0], axes=(-2, -1)),),
    ),
    "T2": Space("T2", lambda rng, n: (rng.random((n, 2)),), lambda x: (np.mod(x[0], 1.0),)),
    "T3": Space("T3", lambda rng, n: (rng.random((n, 3)),), lambda x: (np.mod(x[0], 1.0),)),
}
for _n in (2, 3, 4):
    SPACES[f"Y{_n},{_n}"] = _matrix_space(_n, _n)
    SPACES[f"Y{_n - 1},{_n}"] = _matrix_space(_n - 1, _n)


def get_space(name: str) -> Space:
    if name in SPACES:
        return SPACES[name]
    if name.startswith("S") and name[1:].isdigit():
        return _sphere(int(name[1:]))
    raise KeyError(f"unknown space {name!r}")


@dataclass(frozen=True)
class SampleSpec:
    space: str
    count: int
    seed: int = 42
    tag: str = "sample"


def sample(spec: SampleSpec) -> Point:
    """Uniform samples of ``spec.space``, reproducible from (seed, tag)."""
    space = get_space(spec.space)
    if spec.count == 0:
        empty = space.draw(stream(spec.seed, spec.tag), 1)
        return tuple(a[:0] for a in empty)
    parts = [space.draw(stream(spec.seed, spec.tag, b), size) for b, size in _batches(spec.count)]
    return tuple(np.concatenate(cols) for cols in zip(*parts))


def _take(x: Point, i) -> Point:
    return tuple(np.asarray(a)[i] for a in x)


# --- groups ---------------------------------------------------------------------------------


@dataclass(frozen=True)
class Group:
    """Compact group acting on a space.

    Elements are (theta, disc, extra): ``k`` circle angles, an index into
    ``ndisc`` discrete components, and an optional factor handled in closed
    form by ``closed`` when estimating orbit distances.
    """

    name: str
    space: str
    k: int
    act: Callable[[Point, np.ndarray, np.ndarray, object], Point]
    ndisc: int = 1
    draw_extra: Callable[[np.random.Generator, int], object] | None = None
    closed: Callable[[Point, Point], np.ndarray] | None = None

    def draw(self, rng: np.random.Generator, n: int):
        theta = rng.random((n, self.k)) * algebra.TWO_PI
        disc = rng.integers(0, self.ndisc, n)
        extra = self.draw_extra(rng, n) if self.draw_extra else None
        return theta, disc, extra


def _units(theta):
    return np.exp(1j * theta)


def _act_t3_hp2(x, theta, disc, extra):
    p = x[0]
    if theta.shape[-1]:
        p = om.torus_on_hp2(p, _units(theta))
    if extra is not None:
        p = om.right_on_hp2(p, np.asarray(extra))
    return (p,)


def _draw_unit_quaternion(rng, n):
    return _unit_rows(rng.standard_normal((n, 4)))


def _hp2_right_closed(gx, y):
    # min over q in Sp(1) of |p q - y| = sqrt(2 - 2 |sum conj(y_i) p_i|)
    m = algebra.quat_mul(algebra.quat_conj(y[0]), gx[0]).sum(axis=-2)
    return np.sqrt(np.clip(2.0 - 2.0 * np.linalg.norm(m, axis=-1), 0.0, None))


def _s6_torus(theta):
    a, b = theta[..., 0], theta[..., 1]
    return np.stack([a, b, -a - b], axis=-1)


def _act_t2_s6(x, theta, disc, extra):
    r, z = algebra.imaginary_octonion_to_s6(x[0])
    return (algebra.s6_to_imaginary_octonion(r, z * _units(_s6_torus(theta))),)


def _act_sigma_s6(x, theta, disc, extra):
    angles = _s6_torus(np.broadcast_to(theta, np.broadcast_shapes(theta.shape, x[0].shape[:-1] + (2,))))
    flat = angles.reshape(-1, 3)
    mats = np.stack([algebra.sigma_matrix(algebra.OctonionAutomorphism(*row)) for row in flat])
    mats = mats.reshape(angles.shape[:-1] + (8, 8))
    return (np.einsum("...ij,...j->...i", mats, x[0]),)


def _act_cp2(x, theta, disc, extra):
    z = x[0] * _units(theta[..., :1])
    return (np.where(disc[..., None] == 1, np.conj(z), z),)


def _act_torus_antipodal(x, theta, disc, extra):
    a = x[0]
    return (np.where(disc[..., None] == 1, np.mod(-a, 1.0), a),)


def _act_s4_conj(x, theta, disc, extra):
    r, z = x
    return r, np.where(disc[..., None] == 1, np.conj(z), z)


def _act_s3_conj(x, theta, disc, extra):
    return (om.conj_by_complex(x[0], _units(theta[..., 0])),)


def _biaxial(signs):
    def act(x, theta, disc, extra):
        t = _units(theta)
        left = t[..., 0] if signs[0] == 1 else np.conj(t[..., 0])
        right = t[..., 1] if signs[1] == 1 else np.conj(t[..., 1])
        return (om.two_sided_complex(x[0], left, right),)

    return act


def _t3_s3s3(chart):
    def act(x, theta, disc, extra):
        return om.t3_on_s3s3(x[0], x[1], _units(theta), chart)

    return act


def _act_diag_conj(x, theta, disc, extra):
    t = _units(theta[..., 0])
    return om.conj_by_complex(x[0], t), om.conj_by_complex(x[1], t)


def _draw_rotation(n_dim: int, special: bool):
    def draw(rng, n):
        q, r = np.linalg.qr(rng.standard_normal((n, n_dim, n_dim)))
        q = q * np.sign(np.diagonal(r, axis1=-2, axis2=-1))[..., None, :]
        if special:
            det = np.linalg.det(q)
            q[..., :, 0] *= np.where(det < 0, -1.0, 1.0)[..., None]
        return q

    return draw


def _act_left_matrix(x, theta, disc, extra):
    if extra is None:
        return x
    return (extra @ x[0],)


def _procrustes_closed(special: bool):
    def closed(gx, y):
        a = gx[0]
        b = np.broadcast_to(y[0], a.shape)
        q = matrices.procrustes_rotation(a, b, special=special)
        return np.linalg.norm(q @ a - b, axis=(-2, -1))

    return closed


def _act_identity(x, theta, disc, extra):
    return x


GROUPS: dict[str, Group] = {}


def _register_group(g: Group):
    GROUPS[g.name] = g


_register_group(Group("T3", "S11", 3, _act_t3_hp2))
_register_group(Group("Sp1", "S11", 0, _act_t3_hp2, draw_extra=_draw_unit_quaternion, closed=_hp2_right_closed))
_register_group(Group("T3xSp1", "S11", 3, _act_t3_hp2, draw_extra=_draw_unit_quaternion, closed=_hp2_right_closed))
_register_group(Group("T2", "S6", 2, _act_t2_s6))
_register_group(Group("G2-torus", "S6", 2, _act_sigma_s6))
_register_group(Group("U1xconj", "S5C", 1, _act_cp2, ndisc=2))
_register_group(Group("antipodal", "T2", 0, _act_torus_antipodal, ndisc=2))
_register_group(Group("conj", "S4", 0, _act_s4_conj, ndisc=2))
_register_group(Group("U1-conj", "S3", 1, _act_s3_conj))
for _signs in itertools.product((1, -1), repeat=2):
    _register_group(Group(f"T2{_signs[0]:+d}{_signs[1]:+d}", "S3", 2, _biaxial(_signs)))
_register_group(Group("T3-A", "S3xS3", 3, _t3_s3s3("A")))
_register_group(Group("T3-B", "S3xS3", 3, _t3_s3s3("B")))
_register_group(Group("U1-diag", "S3xS3", 1, _act_diag_conj))
for _n in (2, 3, 4):
    _register_group(
        Group(f"SO({_n})", f"Y{_n},{_n}", 0, _act_left_matrix, draw_extra=_draw_rotation(_n, True), closed=_procrustes_closed(True))
    )
    _register_group(
        Group(f"O({_n})", f"Y{_n},{_n}", 0, _act_left_matrix, draw_extra=_draw_rotation(_n, False), closed=_procrustes_closed(False))
    )
    if _n > 2:
        _register_group(
            Group(
                f"O({_n - 1})",
                f"Y{_n - 1},{_n}",
                0,
                _act_left_matrix,
                draw_extra=_draw_rotation(_n - 1, False),
                closed=_procrustes_closed(False),
            )
        )
_register_group(
    Group("O(1)", "Y1,2", 0, _act_left_matrix, draw_extra=_draw_rotation(1, False), closed=_procrustes_closed(False))
)
_register_group(Group("identity", "*", 0, _act_identity))


def get_group(name: str) -> Group:
    if name not in GROUPS:
        raise KeyError(f"unknown group {name!r}")
    return GROUPS[name]


# --- orbit distance ---------------------------------------------------------------------------


def _euler_zyz(theta: np.ndarray) -> np.ndarray:
    def rz(a):
        c, s = np.cos(a), np.sin(a)
        m = np.zeros(a.shape + (3, 3))
        m[..., 0, 0], m[..., 0, 1], m[..., 1, 0], m[..., 1, 1], m[..., 2, 2] = c, -s, s, c, 1.0
        return m

    def ry(a):
        c, s = np.cos(a), np.sin(a)
        m = np.zeros(a.shape + (3, 3))
        m[..., 0, 0], m[..., 0, 2], m[..., 2, 0], m[..., 2, 2], m[..., 1, 1] = c, s, -s, c, 1.0
        return m

    return rz(theta[..., 0]) @ ry(theta[..., 1]) @ rz(theta[..., 2])


def _rotation_2(theta: np.ndarray) -> np.ndarray:
    c, s = np.cos(theta[..., 0]), np.sin(theta[..., 0])
    return np.stack([np.stack([c, -s], -1), np.stack([s, c], -1)], -2)


def torus_minimize(fn: Callable[[np.ndarray], np.ndarray], k: int, steps: int = GRID_STEPS, iters: int = REFINE_ITERS):
    """Minimize fn over the k-torus: full grid, then pattern search with halving steps.

    ``fn`` maps an (M, k) array of angles to M values.  Returns (value, angles).
    """
    if k == 0:
        return float(fn(np.zeros((1, 0)))[0]), np.zeros(0)
    axis = np.arange(steps) * (algebra.TWO_PI / steps)
    grid = np.stack(np.meshgrid(*([axis] * k), indexing="ij"), axis=-1).reshape(-1, k)
    values = fn(grid)
    best = int(np.argmin(values))
    theta, value = grid[best], float(values[best])
    offsets = np.array(list(itertools.product((-1.0, 0.0, 1.0), repeat=k)))
    step = algebra.TWO_PI / steps
    for _ in range(iters):
        cand = theta + step * offsets
        vals = fn(cand)
        i = int(np.argmin(vals))
        if vals[i] < value:
            theta, value = cand[i], float(vals[i])
        step *= 0.5
    return value, theta


def orbit_distance(space: str, group: str, x: Point, y: Point, method: str = "auto") -> float:
    """Estimate min over g of |g x - y| for single points x, y.

    Circle factors are searched on a grid of 32 steps per angle followed by
    20 shrinking refinement steps; the residual factor (right Sp(1) on HP^2,
    orthogonal groups on matrices) is minimized in closed form.  With
    ``method="grid"`` SO(2) and SO(3) are searched by angles instead of the
    Procrustes solution, which serves as an independent cross-check.
    """
    g = get_group(group)
    if g.space not in ("*", space):
        raise ValueError(f"group {group} acts on {g.space}, not {space}")
    x = tuple(np.asarray(a) for a in x)
    y = tuple(np.asarray(a) for a in y)
    if method == "grid" and group in ("SO(2)", "SO(3)"):
        k, rot = (1, _rotation_2) if group == "SO(2)" else (3, _euler_zyz)

        def fn(theta):
            return np.linalg.norm(rot(theta) @ x[0] - y[0], axis=(-2, -1))

        return torus_minimize(fn, k)[0]
    if method not in ("auto", "grid"):
        raise ValueError(f"unknown method {method!r}")

    best = math.inf
    for d in range(g.ndisc):

        def fn(theta, d=d):
            m = theta.shape[0]
            disc = np.full(m, d)
            xs = tuple(np.broadcast_to(a, (m,) + a.shape) for a in x)
            gx = g.act(xs, theta, disc, None)
            if g.closed is not None:
                return g.closed(gx, y)
            return _pointwise_distance(gx, y)

        best = min(best, torus_minimize(fn, g.k)[0])
    return best


def _pointwise_distance(gx: Point, y: Point) -> np.ndarray:
    total = 0.0
    for a, b in zip(gx, y):
        d = np.abs(a - b) ** 2
        total = total + d.reshape(d.shape[0], -1).sum(axis=-1)
    return np.sqrt(total)


# --- maps -------------------------------------------------------------------------------------------


@dataclass(frozen=True)
class MapEntry:
    name: str
    space: str
    fn: Callable[[Point], om.QuotientPoint]
    groups: tuple[str, ...]


def _matrix_point(m: np.ndarray) -> om.QuotientPoint:
    return om.QuotientPoint(m.reshape(m.shape[:-2] + (-1,)))


def _doubled(a):
    point = matrices.quotient_Ynn_SOn(a)
    return om.QuotientPoint(point.coords(), {"height_vs_lambda_min": point.residual()})


def _yn1n(a):
    g = matrices.quotient_Yn1n_On(a)
    return om.QuotientPoint(g.reshape(g.shape[:-2] + (-1,)), {"lambda_min": np.abs(matrices.lambda_min(g))})


MAPS: dict[str, MapEntry] = {}


def _register_map(entry: MapEntry):
    MAPS[entry.name] = entry


_register_map(MapEntry("hp2_to_s5", "S11", lambda x: om.hp2_to_s5(x[0]), ("T3", "Sp1", "T3xSp1")))
_register_map(
    MapEntry("s6_to_s4", "S6", lambda x: om.s6_to_s4(*algebra.imaginary_octonion_to_s6(x[0])), ("T2", "G2-torus"))
)
_register_map(MapEntry("cp2_conj_to_s4", "S5C", lambda x: om.cp2_conj_to_s4(x[0]), ("U1xconj",)))
_register_map(
    MapEntry("torus_invol_quotient", "T2", lambda x: om.torus_invol_quotient(x[0][..., 0], x[0][..., 1]), ("antipodal",))
)
_register_map(MapEntry("s4_invol_quotient", "S4", lambda x: om.s4_invol_quotient(*x), ("conj",)))
_register_map(MapEntry("s3_conj_circle_quotient", "S3", lambda x: om.s3_conj_circle_quotient(x[0]), ("U1-conj",)))
_register_map(
    MapEntry("s3_biaxial_quotient", "S3", lambda x: om.s3_biaxial_quotient(x[0]), ("T2+1+1", "T2+1-1", "T2-1+1", "T2-1-1"))
)
_register_map(MapEntry("s3s3_t3_quotient_A", "S3xS3", lambda x: om.s3s3_t3_quotient(x[0], x[1], "A"), ("T3-A",)))
_register_map(MapEntry("s3s3_t3_quotient_B", "S3xS3", lambda x: om.s3s3_t3_quotient(x[0], x[1], "B"), ("T3-B",)))
_register_map(MapEntry("s3s3_diag_circle_quotient", "S3xS3", lambda x: om.s3s3_diag_circle_quotient(*x), ("U1-diag",)))
for _n in (2, 3, 4):
    _register_map(MapEntry(f"quotient_Ynn_SOn[{_n}]", f"Y{_n},{_n}", lambda x: _doubled(x[0]), (f"SO({_n})",)))
    _register_map(MapEntry(f"quotient_Yn1n_On[{_n}]", f"Y{_n - 1},{_n}", lambda x: _yn1n(x[0]), (f"O({_n - 1})",)))
    _register_map(MapEntry(f"gram[{_n}]", f"Y{_n},{_n}", lambda x: _matrix_point(matrices.gram(x[0])), (f"O({_n})",)))
    _register_map(
        MapEntry(f"psd_sqrt_part[{_n}]", f"Y{_n},{_n}", lambda x: _matrix_point(matrices.psd_sqrt_part(x[0])), (f"O({_n})",))
    )


def get_map(name: str) -> MapEntry:
    if name not in MAPS:
        raise KeyError(f"unknown map {name!r}")
    return MAPS[name]


def _check_pair(map_id: str, group_id: str) -> tuple[MapEntry, Group]:
    entry = get_map(map_id)
    group = get_group(group_id)
    if group_id != "identity" and group_id not in entry.groups:
        raise KeyError(f"group {group_id!r} is not registered for map {map_id!r}")
    return entry, group


# --- reports ----------------------------------------------------------------------------------------------


REPORT_FIELDS = ("suite", "map", "group", "samples", "seed", "tolerance", "max_residual", "min_separation", "pass", "millis")


@dataclass
class TestReport:
    """One suite result.

    Residual suites pass iff max_residual <= tolerance; separation suites
    pass iff min_separation > tolerance (and carry no residual).
    """

    __test__ = False

    suite: str
    map: str
    group: str | None
    samples: int
    seed: int
    tolerance: float
    max_residual: float | None
    min_separation: float | None
    passed: bool
    millis: float | None = None
    witness: object = field(default=None, repr=False, compare=False)

    def record(self, timing: bool = False) -> dict:
        return {
            "suite": self.suite,
            "map": self.map,
            "group": self.group,
            "samples": self.samples,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "max_residual": self.max_residual,
            "min_separation": self.min_separation,
            "pass": self.passed,
            "millis": round(self.millis, 3) if (timing and self.millis is not None) else None,
        }


def reports_to_json(reports: Sequence[TestReport], timing: bool = False) -> str:
    return json.dumps([r.record(timing) for r in reports], indent=2) + "\n"


def reports_from_json(text: str) -> list[dict]:
    records = json.loads(text)
    for rec in records:
        if tuple(rec) != REPORT_FIELDS:
            raise ValueError(f"unexpected report fields {tuple(rec)}")
    return records


def _residual_report(suite, map_id, group_id, n, seed, tol, residual, start, witness=None) -> TestReport:
    residual = float(residual)
    return TestReport(
        suite, map_id, group_id, n, seed, tol, residual, None, bool(residual <= tol),
        (time.perf_counter() - start) * 1000.0, witness,
    )


def _map_batches(fn, n: int, workers: int):
    jobs = _batches(n)
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(lambda job: fn(*job), jobs))
    return [fn(*job) for job in jobs]


# --- suites ----------------------------------------------------------------------------------------------------


def invariance_suite(map_id: str, group_id: str, n: int, tol: float = 1e-9, seed: int = 42, workers: int = 1) -> TestReport:
    """max over n samples of |f(g x) - f(x)|."""
    start = time.perf_counter()
    entry, group = _check_pair(map_id, group_id)
    space = get_space(entry.space)
    tag = f"invariance/{map_id}/{group_id}"

    def run(b, size):
        rng = stream(seed, tag, b)
        x = space.draw(rng, size)
        theta, disc, extra = group.draw(rng, size)
        gx = group.act(x, theta, disc, extra)
        d = np.linalg.norm(entry.fn(gx).coords - entry.fn(x).coords, axis=-1)
        return float(d.max()) if d.size else 0.0

    residual = max(_map_batches(run, n, workers), default=0.0)
    return _residual_report("invariance", map_id, group_id, n, seed, tol, residual, start)


def constraint_suite(map_id: str, n: int, tol: float = 1e-12, seed: int = 42, workers: int = 1) -> TestReport:
    """max over n samples of the model-equation residuals of f(x)."""
    start = time.perf_counter()
    entry = get_map(map_id)
    space = get_space(entry.space)
    tag = f"constraint/{map_id}"

    def run(b, size):
        return entry.fn(space.draw(stream(seed, tag, b), size)).max_residual()

    residual = max(_map_batches(run, n, workers), default=0.0)
    return _residual_report("constraint", map_id, None, n, seed, tol, residual, start)


def separation_pairs(space_id: str, group_id: str, n: int, seed: int, tag: str) -> tuple[Point, Point]:
    """Half independent pairs, half y = g x + eps noise with eps log-uniform in [1e-3, 1]."""
    space = get_space(space_id)
    group = get_group(group_id)
    xs, ys = [], []
    for b, size in _batches(n):
        rng = stream(seed, tag, b)
        x = space.draw(rng, size)
        y_ind = space.draw(rng, size)
        theta, disc, extra = group.draw(rng, size)
        gx = group.act(x, theta, disc, extra)
        eps = 10.0 ** rng.uniform(-3.0, 0.0, size)
        noisy = []
        for a in gx:
            noise = rng.standard_normal(a.shape)
            if np.iscomplexobj(a):
                noise = noise + 1j * rng.standard_normal(a.shape)
            noisy.append(a + eps.reshape((size,) + (1,) * (a.ndim - 1)) * noise)
        y_near = space.project(tuple(noisy))
        half = np.arange(size) % 2 == 0
        ys.append(tuple(np.where(half.reshape((size,) + (1,) * (a.ndim - 1)), a, c) for a, c in zip(y_ind, y_near)))
        xs.append(x)
    join = lambda parts: tuple(np.concatenate(cols) for cols in zip(*parts))
    return join(xs), join(ys)


def separation_suite(
    map_id: str, group_id: str, n: int, gap: float = 0.1, tol: float = 1e-4, seed: int = 42, workers: int = 1
) -> TestReport:
    """Over pairs with orbit distance > gap, the image distance must exceed tol.

    The witness is (min image distance, orbit distance, x, y) of the worst pair.
    """
    start = time.perf_counter()
    entry, group = _check_pair(map_id, group_id)
    tag = f"separation/{map_id}/{group_id}"
    x, y = separation_pairs(entry.space, group_id, n, seed, tag)
    image = np.linalg.norm(entry.fn(x).coords - entry.fn(y).coords, axis=-1)

    def one(i):
        return orbit_distance(entry.space, group_id, _take(x, i), _take(y, i))

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            dist = np.array(list(pool.map(one, range(n))))
    else:
        dist = np.array([one(i) for i in range(n)])
    far = dist > gap
    if np.any(far):
        idx = np.flatnonzero(far)
        worst = int(idx[np.argmin(image[idx])])
        min_sep = float(image[worst])
        witness = (min_sep, float(dist[worst]), _take(x, worst), _take(y, worst))
    else:
        min_sep, witness = math.inf, None
    passed = bool(min_sep > tol)
    return TestReport(
        "separation", map_id, group_id, n, seed, tol, None, None if math.isinf(min_sep) else min_sep, passed,
        (time.perf_counter() - start) * 1000.0, witness,
    )


def hp2_fixed_point_suite(tol: float = 0.1, seed: int = 42) -> TestReport:
    """The three T^3-fixed points [e_i] must have pairwise distinct images."""
    start = time.perf_counter()
    p = np.zeros((3, 3, 4))
    for i in range(3):
        p[i, i, 0] = 1.0
    coords = om.hp2_to_s5(p).coords
    d = min(float(np.linalg.norm(coords[i] - coords[j])) for i, j in itertools.combinations(range(3), 2))
    return TestReport("fixed_points", "hp2_to_s5", "T3", 3, seed, tol, None, d, d > tol, (time.perf_counter() - start) * 1000.0)


def coverage_report(map_id: str, n: int, seed: int = 42) -> dict:
    """Nearest-neighbour spacing of n image samples (advisory, never gating).

    Reports median and max nearest-neighbour distance for n and n // 2 samples;
    ``median_shrinks`` records whether doubling the sample shrank the median.
    """
    entry = get_map(map_id)
    if n == 0:
        return {"map": map_id, "samples": 0}

    def stats(count):
        if count < 2:
            return None, None
        pts = entry.fn(sample(SampleSpec(entry.space, count, seed, f"coverage/{map_id}"))).coords
        d, _ = cKDTree(pts).query(pts, k=2)
        return float(np.median(d[:, 1])), float(np.max(d[:, 1]))

    med, hole = stats(n)
    med_half, _ = stats(n // 2)
    return {
        "map": map_id,
        "samples": n,
        "median_spacing": med,
        "max_spacing": hole,
        "median_spacing_half": med_half,
        "median_shrinks": None if med_half is None or med is None else bool(med < med_half),
    }


# --- algebraic and combinatorial suites --------------------------------------------------------------------


def octonion_norm_suite(seed: int = 42) -> TestReport:
    """|e_a e_b|^2 = |e_a|^2 |e_b|^2 for all 64 basis pairs, exact in integers."""
    start = time.perf_counter()
    eye = np.eye(8, dtype=np.int64)
    prod = algebra.oct_mul(eye[:, None, :], eye[None, :, :])
    residual = int(np.max(np.abs(np.sum(prod * prod, axis=-1) - 1)))
    return _residual_report("norm_multiplicativity", "oct_mul", None, 64, seed, 0.0, residual, start)


def _random_automorphisms(rng, n):
    ab = rng.uniform(0.0, algebra.TWO_PI, (n, 2))
    return [algebra.OctonionAutomorphism.from_pair(a, b) for a, b in ab]


def octonion_automorphism_suite(triples: int, pairs: int = 100, tol: float = 1e-12, seed: int = 42) -> TestReport:
    """max |s(x y) - s(x) s(y)| over random sigma and random octonion pairs."""
    start = time.perf_counter()
    rng = stream(seed, "octonion/automorphism")
    residual = 0.0
    for s in _random_automorphisms(rng, triples):
        x = rng.standard_normal((pairs, 8))
        y = rng.standard_normal((pairs, 8))
        m = algebra.sigma_matrix(s)
        lhs = algebra.oct_mul(x, y) @ m.T
        rhs = algebra.oct_mul(x @ m.T, y @ m.T)
        residual = max(residual, float(np.max(np.abs(lhs - rhs))))
    return _residual_report("automorphism", "sigma", "G2-torus", triples * pairs, seed, tol, residual, start)


def sigma_orthogonality_suite(triples: int, tol: float = 1e-14, seed: int = 42) -> TestReport:
    start = time.perf_counter()
    rng = stream(seed, "octonion/orthogonality")
    residual = 0.0
    for s in _random_automorphisms(rng, triples):
        m = algebra.sigma_matrix(s)
        residual = max(residual, float(np.max(np.abs(m.T @ m - np.eye(8)))))
    return _residual_report("orthogonality", "sigma_matrix", "G2-torus", triples, seed, tol, residual, start)


def dim_formula_suite(seed: int = 42) -> TestReport:
    """Spectrahedron dimensions 2, 5, 9, 14 for n = 2..5 and dim_formulas(3) = (4, 5, 5)."""
    start = time.perf_counter()
    mismatches = sum(matrices.dim_formulas(n)[2] != d for n, d in zip(range(2, 6), (2, 5, 9, 14)))
    mismatches += matrices.dim_formulas(3) != (4, 5, 5)
    return _residual_report("dim_formulas", "dim_formulas", None, 5, seed, 0.0, mismatches, start)


def quoric_welldef_suite(n: int, max_m: int = 5, seed: int = 42) -> TestReport:
    """Exact conjugation-stability checks over every coloring with m <= max_m (count of violations)."""
    start = time.perf_counter()
    colorings = [qf for m in range(3, max_m + 1) for qf in enumerate_quoric(m, "full")]
    per = max(1, n // len(colorings))
    bad = 0
    witness = None
    for i, qf in enumerate(colorings):
        ok, w = quoric_t3_welldef(qf, per, seed + i)
        if not ok:
            bad += 1
            witness = witness or (qf, w)
    return _residual_report("quoric_t3_welldef", "quoric", "T3", per * len(colorings), seed, 0.0, bad, start, witness)


STANDARD_CHAR_PAIRS = (
    QTCharPair(Polygon(3), ((1, 0), (0, 1), (-1, -1))),
    QTCharPair(Polygon(4), ((1, 0), (0, 1), (1, 0), (0, 1))),
    QTCharPair(Polygon(4), ((1, 0), (0, 1), (-1, 1), (0, -1))),
    QTCharPair(Polygon(6), ((1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1))),
)


def conj_welldef_suite(n: int, seed: int = 42) -> TestReport:
    start = time.perf_counter()
    per = max(1, n // len(STANDARD_CHAR_PAIRS))
    bad = 0
    witness = None
    for i, cp in enumerate(STANDARD_CHAR_PAIRS):
        ok, w = conj_involution_welldef(cp, per, seed + i)
        if not ok:
            bad += 1
            witness = witness or (cp, w)
    return _residual_report("conj_welldef", "conj", "Z2", per * len(STANDARD_CHAR_PAIRS), seed, 0.0, bad, start, witness)


# --- targets ------------------------------------------------------------------------------------------------------


def _sep_pairs(samples: int) -> int:
    return max(1, samples // 10)


def _tol(override: float | None, default: float) -> float:
    return default if override is None else override


def _inv(map_id, group_id, default):
    return lambda n, seed, tol, w: invariance_suite(map_id, group_id, n, _tol(tol, default), seed, w)


def _con(map_id, default):
    return lambda n, seed, tol, w: constraint_suite(map_id, n, _tol(tol, default), seed, w)


def _sep(map_id, group_id, default=1e-4):
    return lambda n, seed, tol, w: separation_suite(map_id, group_id, _sep_pairs(n), 0.1, _tol(tol, default), seed, w)


TARGETS: dict[str, list[Callable]] = {
    "octonion": [
        lambda n, seed, tol, w: octonion_norm_suite(seed),
        lambda n, seed, tol, w: octonion_automorphism_suite(_sep_pairs(n), 100, _tol(tol, 1e-12), seed),
        lambda n, seed, tol, w: sigma_orthogonality_suite(_sep_pairs(n), _tol(tol, 1e-14), seed),
    ],
    "matrix": [
        *(_inv(f"{f}[{k}]", f"O({k})", 1e-11) for k in (2, 3, 4) for f in ("gram", "psd_sqrt_part")),
        *(_inv(f"quotient_Yn1n_On[{k}]", f"O({k - 1})", 1e-11) for k in (3, 4)),
        *(_con(f"quotient_Yn1n_On[{k}]", 1e-10) for k in (2, 3, 4)),
        *(_inv(f"quotient_Ynn_SOn[{k}]", f"SO({k})", 1e-9) for k in (2, 3, 4)),
        *(_con(f"quotient_Ynn_SOn[{k}]", 1e-9) for k in (2, 3, 4)),
        _sep("quotient_Ynn_SOn[3]", "SO(3)"),
        lambda n, seed, tol, w: dim_formula_suite(seed),
    ],
    "hp2": [
        _inv("hp2_to_s5", "T3", 1e-9),
        _inv("hp2_to_s5", "Sp1", 1e-9),
        _con("hp2_to_s5", 1e-9),
        _sep("hp2_to_s5", "T3xSp1"),
        lambda n, seed, tol, w: hp2_fixed_point_suite(_tol(tol, 0.1), seed),
    ],
    "s6": [
        _inv("s6_to_s4", "T2", 1e-9),
        _con("s6_to_s4", 1e-12),
        _inv("s6_to_s4", "G2-torus", 1e-11),
        _sep("s6_to_s4", "T2"),
    ],
    "cp2": [
        _inv("cp2_conj_to_s4", "U1xconj", 1e-11),
        _con("cp2_conj_to_s4", 1e-10),
        _sep("cp2_conj_to_s4", "U1xconj"),
    ],
    "quoric-fibers": [
        *(_inv("s3_biaxial_quotient", g, 1e-11) for g in ("T2+1+1", "T2+1-1", "T2-1+1", "T2-1-1")),
        _con("s3_biaxial_quotient", 1e-12),
        _inv("s3s3_t3_quotient_A", "T3-A", 1e-11),
        _con("s3s3_t3_quotient_A", 1e-12),
        _sep("s3s3_t3_quotient_A", "T3-A"),
        _inv("s3s3_t3_quotient_B", "T3-B", 1e-11),
        _con("s3s3_t3_quotient_B", 1e-12),
        _sep("s3s3_t3_quotient_B", "T3-B"),
        lambda n, seed, tol, w: quoric_welldef_suite(_sep_pairs(n), 5, seed),
    ],
    "arnold": [
        _inv("s3_conj_circle_quotient", "U1-conj", 1e-11),
        _con("s3_conj_circle_quotient", 1e-12),
        _sep("s3_conj_circle_quotient", "U1-conj"),
        _inv("s3s3_diag_circle_quotient", "U1-diag", 1e-11),
        _con("s3s3_diag_circle_quotient", 1e-12),
        _sep("s3s3_diag_circle_quotient", "U1-diag"),
    ],
    "involutions": [
        _inv("torus_invol_quotient", "antipodal", 1e-11),
        _con("torus_invol_quotient", 1e-12),
        _sep("torus_invol_quotient", "antipodal"),
        _inv("s4_invol_quotient", "conj", 1e-11),
        _con("s4_invol_quotient", 1e-12),
        _sep("s4_invol_quotient", "conj"),
        lambda n, seed, tol, w: conj_welldef_suite(n, seed),
    ],
}


def run_target(name: str, samples: int = 10_000, seed: int = 42, tol: float | None = None, workers: int = 1) -> list[TestReport]:
    names = list(TARGETS) if name == "all" else [name]
    reports = []
    for target in names:
        if target not in TARGETS:
            raise KeyError(f"unknown target {target!r}")
        reports.extend(suite(samples, seed, tol, workers) for suite in TARGETS[target])
    return reports
