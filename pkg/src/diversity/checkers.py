"""Randomized property harness for diversities on R^k.

Each check draws point sets from a seeded generator, evaluates the
diversity and compares both sides of an identity or inequality. A check
fails as soon as one instance violates its property by more than
``cfg.tol``; the report then carries that first violating instance as the
witness, so rerunning with the same seed reproduces it exactly. The largest
excess over all instances is recorded too.

Sampling defaults: coordinates uniform in [-10, 10], set sizes uniform in
[0, 8], scale factors uniform in [0, 3].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .errors import DimensionMismatchError, DomainError
from .geometry import (
    PointSet,
    as_pointset,
    convex_combinations,
    minkowski_sum,
    negate,
    planar_hull,
    regular_polygon,
    scale,
    support_many,
    translate,
)
from .numerics import SphereSampler, sphere_samples
from .variants import Diversity



@dataclass(frozen=True)
class CheckConfig:
    seed: int = 0
    trials: int = 100
    dim: int = 2
    size_range: tuple[int, int] = (0, 8)
    coord_range: tuple[float, float] = (-10.0, 10.0)
    lam_range: tuple[float, float] = (0.0, 3.0)
    tol: float = 1e-8

    def __post_init__(self):
        if self.trials < 1:
            raise DomainError("trials must be at least 1")
        if not self.tol > 0:
            raise DomainError("tol must be positive")
        if self.dim < 1:
            raise DomainError("dim must be at least 1")
        lo, hi = self.size_range
        if not 0 <= lo <= hi:
            raise DomainError("size range must satisfy 0 <= lo <= hi")


@dataclass
class CheckReport:
    property: str
    passed: bool
    seed: int
    trials: int
    instances: int = 0
    worst_excess: float = 0.0
    witness: dict | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "property": self.property,
            "pass": self.passed,
            "seed": self.seed,
            "trials": self.trials,
            "instances": self.instances,
            "worst_excess": self.worst_excess,
            "witness": self.witness,
        }
        if self.extra:
            d.update(self.extra)
        return d


def _jsonable(v):
    if isinstance(v, PointSet):
        return v.points.tolist()
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


class _Recorder:
    """Collects comparisons for one report; keeps the first violation."""

    def __init__(self, name: str, cfg: CheckConfig):
        self.report = CheckReport(name, True, cfg.seed, cfg.trials)
        self.tol = cfg.tol

    def _note(self, excess: float, check: str, trial, lhs, rhs, inputs: dict) -> None:
        r = self.report
        r.instances += 1
        r.worst_excess = max(r.worst_excess, excess)
        if excess > self.tol and r.passed:
            r.passed = False
            r.witness = {
                "check": check,
                "trial": trial,
                "lhs": lhs,
                "rhs": rhs,
                "excess": excess,
                **{k: _jsonable(v) for k, v in inputs.items()},
            }

    def leq(self, check: str, trial, lhs: float, rhs: float, **inputs) -> None:
        self._note(float(lhs - rhs), check, trial, float(lhs), float(rhs), inputs)

    def eq(self, check: str, trial, lhs: float, rhs: float, **inputs) -> None:
        self._note(float(abs(lhs - rhs)), check, trial, float(lhs), float(rhs), inputs)


class _Sampler:
    def __init__(self, cfg: CheckConfig, dim: int, stream: int):
        # independent stream per check so suites can be run in any order
        self.rng = np.random.default_rng([cfg.seed, stream])
        self.cfg = cfg
        self.dim = dim

    def points(self, lo: int | None = None, hi: int | None = None) -> PointSet:
        a, b = self.cfg.size_range
        lo = a if lo is None else lo
        hi = max(b, lo) if hi is None else hi
        n = int(self.rng.integers(lo, hi + 1))
        c0, c1 = self.cfg.coord_range
        return PointSet(self.rng.uniform(c0, c1, size=(n, self.dim)), dim=self.dim)

    def vector(self) -> np.ndarray:
        c0, c1 = self.cfg.coord_range
        return self.rng.uniform(c0, c1, size=self.dim)

    def lam(self) -> float:
        return float(self.rng.uniform(*self.cfg.lam_range))


def _dim_for(spec: Diversity, cfg: CheckConfig) -> int:
    return spec.dim if spec.dim is not None else cfg.dim


def _probe_pairs(dim: int) -> list[tuple[PointSet, PointSet]]:
    """Fixed planar pairs on which circumradius and zonotope are not additive."""
    if dim != 2:
        return []
    seg_x = PointSet([[0.0, 0.0], [1.0, 0.0]])
    seg_y = PointSet([[0.0, 0.0], [0.0, 1.0]])
    tri = PointSet([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    return [(seg_x, seg_y), (tri, negate(tri))]


def check_axioms(spec: Diversity, cfg: CheckConfig = CheckConfig()) -> CheckReport:
    """Empty set and singletons vanish, values are nonnegative, (D2)-(D4) hold."""
    dim = _dim_for(spec, cfg)
    rec = _Recorder("axioms", cfg)
    s = _Sampler(cfg, dim, 1)
    rec.eq("empty", None, spec(PointSet([], dim=dim)), 0.0)
    for trial in range(cfg.trials):
        A, B, C = s.points(), s.points(), s.points()
        dA = spec(A)
        single = PointSet(s.vector(), dim=dim)
        rec.eq("singleton", trial, spec(single), 0.0, A=single)
        rec.leq("nonnegative", trial, -dA, 0.0, A=A)
        rec.leq("D3", trial, dA, spec(A.union(B)), A=A, B=B)
        if len(A):
            Bi = B.union(PointSet(A.points[[int(s.rng.integers(len(A)))]], dim=dim))
            rec.leq("D4", trial, spec(A.union(Bi)), dA + spec(Bi), A=A, B=Bi)
        Bn = B if len(B) else PointSet(s.vector(), dim=dim)
        rec.leq("D2", trial, spec(A.union(C)), spec(A.union(Bn)) + spec(Bn.union(C)), A=A, B=Bn, C=C)
    return rec.report


def _additivity(spec: Diversity, cfg: CheckConfig, name: str, strict: bool, stream: int) -> CheckReport:
    dim = _dim_for(spec, cfg)
    rec = _Recorder(name, cfg)
    s = _Sampler(cfg, dim, stream)
    pairs: list[tuple[object, PointSet, PointSet]] = [(f"probe{i}", A, B) for i, (A, B) in enumerate(_probe_pairs(dim))]
    for trial in range(cfg.trials):
        pairs.append((trial, s.points(lo=max(1, cfg.size_range[0])), s.points(lo=max(1, cfg.size_range[0]))))
    for trial, A, B in pairs:
        dA, dB = spec(A), spec(B)
        dAB = spec(minkowski_sum(A, B))
        if strict:
            rec.eq("additive", trial, dAB, dA + dB, A=A, B=B)
        else:
            rec.leq("subadditive", trial, dAB, dA + dB, A=A, B=B)
        if isinstance(trial, int):
            lam = s.lam()
            rec.eq("homogeneous", trial, spec(scale(A, lam)), lam * dA, A=A, lam=lam)
    return rec.report


def check_sublinear(spec: Diversity, cfg: CheckConfig = CheckConfig()) -> CheckReport:
    """``d(lam A) = lam d(A)`` and ``d(A + B) <= d(A) + d(B)``."""
    return _additivity(spec, cfg, "sublinear", strict=False, stream=2)


def check_linear(spec: Diversity, cfg: CheckConfig = CheckConfig()) -> CheckReport:
    """``d(lam A) = lam d(A)`` and ``d(A + B) = d(A) + d(B)``.

    In the plane two fixed pairs are tried before the random ones: two
    orthogonal unit segments, and the unit triangle with its reflection.
    """
    return _additivity(spec, cfg, "linear", strict=True, stream=3)


def check_translation_and_hull_invariance(spec: Diversity, cfg: CheckConfig = CheckConfig()) -> CheckReport:
    """``d(A + t) = d(A)`` and adding convex combinations of A leaves d unchanged."""
    dim = _dim_for(spec, cfg)
    rec = _Recorder("invariance", cfg)
    s = _Sampler(cfg, dim, 4)
    for trial in range(cfg.trials):
        A = s.points(lo=max(1, cfg.size_range[0]))
        dA = spec(A)
        t = s.vector()
        rec.eq("translation", trial, spec(translate(A, t)), dA, A=A, t=t)
        extra = convex_combinations(A, int(s.rng.integers(1, 6)), s.rng)
        H = A.union(PointSet(extra, dim=dim))
        rec.eq("hull", trial, spec(H), dA, A=A, H=H)
    return rec.report


def check_deletion_inequality(spec: Diversity, cfg: CheckConfig = CheckConfig()) -> CheckReport:
    """``d(A) <= (n-1)/(n(n-2)) * sum_a d(A - {a})`` for ``3 <= n <= 7``."""
    dim = _dim_for(spec, cfg)
    rec = _Recorder("deletion", cfg)
    s = _Sampler(cfg, dim, 5)
    for trial in range(cfg.trials):
        A = s.points(3, 7)
        n = len(A)
        total = sum(spec(A.without(i)) for i in range(n))
        rec.leq("deletion", trial, spec(A), (n - 1) / (n * (n - 2)) * total, A=A)
    return rec.report


def check_norm(spec: Diversity, cfg: CheckConfig = CheckConfig()) -> CheckReport:
    """``N(x) = d({0, x})`` is a seminorm: triangle, homogeneity, symmetry."""
    dim = _dim_for(spec, cfg)
    rec = _Recorder("norm", cfg)
    s = _Sampler(cfg, dim, 6)
    zero = np.zeros(dim)

    def N(x):
        return spec(PointSet([zero, x], dim=dim))

    for trial in range(cfg.trials):
        x, y = s.vector(), s.vector()
        lam = s.lam() * (1 if s.rng.random() < 0.5 else -1)
        Nx = N(x)
        rec.leq("triangle", trial, N(x + y), Nx + N(y), x=x, y=y)
        rec.eq("homogeneous", trial, N(lam * x), abs(lam) * Nx, x=x, lam=lam)
        rec.eq("symmetric", trial, N(-x), Nx, x=x)
    return rec.report


def hausdorff_lower_estimate(A, B, directions) -> float:
    """``max_j |h_A(x_j) - h_B(x_j)|`` over unit directions ``x_j``.

    A lower bound on the Euclidean Hausdorff distance between the convex
    hulls, tight in the limit of dense directions.
    """
    A, B = as_pointset(A), as_pointset(B)
    if A.is_empty() or B.is_empty():
        raise DomainError("Hausdorff estimate needs nonempty sets")
    if A.dim != B.dim:
        raise DimensionMismatchError("sets live in different dimensions")
    X = np.atleast_2d(np.asarray(directions, dtype=float))
    return float(np.max(np.abs(support_many(A, X) - support_many(B, X))))


def check_lipschitz(spec: Diversity, cfg: CheckConfig = CheckConfig(), sides: int = 64) -> CheckReport:
    """Lipschitz bound of the polytope extension under Hausdorff distance.

    Planar only. With ``Q`` the regular ``sides``-gon inscribed in the unit
    circle and ``P`` the one circumscribed about it, every sample asserts
    ``|d(A + lam Q) - d(A)| <= lam * d(P)``: the hulls are within Hausdorff
    distance ``lam`` and, by monotonicity, ``d(P)`` bounds the value on the
    unit disc. ``A + lam Q`` is evaluated through its hull vertices, which
    is the polytope extension of ``d`` by definition.
    """
    dim = _dim_for(spec, cfg)
    if dim != 2:
        raise DimensionMismatchError("the Lipschitz check is planar (dim = 2)")
    Q = regular_polygon(sides)
    outer = regular_polygon(sides, radius=1.0 / math.cos(math.pi / sides))
    bound = spec(outer)
    rec = _Recorder("lipschitz", cfg)
    rec.report.extra["constant"] = bound
    s = _Sampler(cfg, dim, 7)
    for trial in range(cfg.trials):
        A = s.points(lo=max(1, cfg.size_range[0]))
        lam = s.lam()
        moved = planar_hull(minkowski_sum(A, scale(Q, lam)))
        rec.leq("lipschitz", trial, abs(spec(moved) - spec(A)), lam * bound, A=A, lam=lam)
    return rec.report


def lipschitz_tightness(spec: Diversity, sides: int = 64, directions: int = 720) -> dict:
    """Ratio ``|d(2Q) - d(Q)| / d_H(Q, 2Q)`` for the inscribed polygon ``Q``.

    The Lipschitz constant is attained on a ball and its double, so the
    ratio should reproduce ``d(Q)`` up to the polygon and quadrature error.
    """
    Q = regular_polygon(sides)
    Q2 = scale(Q, 2.0)
    dh = hausdorff_lower_estimate(Q, Q2, sphere_samples(SphereSampler.equiangular(directions)))
    dQ = spec(Q)
    return {"d_Q": dQ, "d_2Q": spec(Q2), "hausdorff": dh, "ratio": abs(spec(Q2) - dQ) / dh}


def _box(x0, x1, y0, y1, swap: bool) -> PointSet:
    pts = np.array([[x0, y0], [x1, y0], [x1, y1], [x0, y1]], dtype=float)
    return PointSet(pts[:, ::-1] if swap else pts)


def check_valuation(spec: Diversity, cfg: CheckConfig = CheckConfig()) -> CheckReport:
    """``d(K & L) + d(K | L) = d(K) + d(L)`` on overlapping planar boxes.

    Holds for linear diversities. The boxes share one coordinate range and
    overlap in the other, so union and intersection are boxes with known
    vertices.
    """
    dim = _dim_for(spec, cfg)
    if dim != 2:
        raise DimensionMismatchError("the valuation check uses planar boxes (dim = 2)")
    rec = _Recorder("valuation", cfg)
    s = _Sampler(cfg, dim, 8)
    c0, c1 = cfg.coord_range
    for trial in range(cfg.trials):
        xs = np.sort(s.rng.uniform(c0, c1, size=4))
        y0, y1 = np.sort(s.rng.uniform(c0, c1, size=2))
        swap = bool(s.rng.random() < 0.5)
        K = _box(xs[0], xs[2], y0, y1, swap)
        L = _box(xs[1], xs[3], y0, y1, swap)
        cap = _box(xs[1], xs[2], y0, y1, swap)
        cup = _box(xs[0], xs[3], y0, y1, swap)
        rec.eq("valuation", trial, spec(cap) + spec(cup), spec(K) + spec(L), K=K, L=L)
    return rec.report


SUITES: dict[str, Callable[[Diversity, CheckConfig], CheckReport]] = {
    "axioms": check_axioms,
    "sublinear": check_sublinear,
    "linear": check_linear,
    "invariance": check_translation_and_hull_invariance,
    "deletion": check_deletion_inequality,
    "lipschitz": check_lipschitz,
    "norm": check_norm,
    "valuation": check_valuation,
}


def applicable_suites(spec: Diversity, cfg: CheckConfig) -> list[str]:
    """Suites that ``all`` runs: linearity-only ones for linear specs, planar ones in 2-D."""
    names = ["axioms", "sublinear", "invariance", "deletion", "norm"]
    planar = _dim_for(spec, cfg) == 2
    if spec.linear:
        names.append("linear")
    if planar:
        names.append("lipschitz")
    if planar and spec.linear:
        names.append("valuation")
    return names


def run_suite(spec: Diversity, suite: str, cfg: CheckConfig = CheckConfig()) -> list[CheckReport]:
    if suite == "all":
        names = applicable_suites(spec, cfg)
    elif suite in SUITES:
        names = [suite]
    else:
        raise DomainError(f"unknown suite {suite!r}; choose from {sorted(SUITES) + ['all']}")
    if spec.dim is not None and spec.dim != cfg.dim:
        cfg = replace(cfg, dim=spec.dim)
    return [SUITES[name](spec, cfg) for name in names]
