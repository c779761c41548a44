"""Concrete diversities on R^k and their combinators.

Every variant is an immutable object; calling it on a point set returns
the diversity value. Shared behaviour lives in :class:`Diversity.__call__`:
the empty set and singletons evaluate to 0 and the dimension is checked
before the variant-specific formula runs.

Each variant reports ``linear`` (Minkowski additive) so the property
harness knows which identities to expect.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    DomainError,
    InsufficientDirectionsError,
    PreconditionError,
    SpecParseError,
)
from .geometry import PointSet, as_pointset, support_many
from .lp import LPProblem, OPTIMAL, solve
from .measures import DiscreteSphericalMeasure, HPolytope, SimplexKernelSpec, balancing_weights
from .numerics import (
    SphereSampler,
    orthogonal_complement,
    orthonormal_basis,
    sphere_area,
    sphere_samples,
)

NORMS = ("l1", "l2", "linf")


class Diversity:
    """Base class: ``d(A)`` evaluates the diversity of point set ``A``."""

    kind: str = ""
    linear: bool = False

    @property
    def dim(self) -> int | None:
        """Ambient dimension the variant is tied to, or None if any works."""
        return None

    def __call__(self, A) -> float:
        A = as_pointset(A)
        if self.dim is not None and A.dim != self.dim:
            raise DimensionMismatchError(f"{self.kind} diversity lives in R^{self.dim}, got points in R^{A.dim}")
        if len(A) <= 1:
            return 0.0
        return float(self._value(A))

    def _value(self, A: PointSet) -> float:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


def evaluate(spec: Diversity, A) -> float:
    """Value of diversity ``spec`` on point set ``A``."""
    return spec(A)


# --- diameter and l1 -------------------------------------------------------


@dataclass(frozen=True)
class Diameter(Diversity):
    norm: str = "l2"
    kind = "diameter"

    def __post_init__(self):
        if self.norm not in NORMS:
            raise DomainError(f"norm must be one of {NORMS}, got {self.norm!r}")

    def _value(self, A):
        return diameter_eval(A, self.norm)

    def to_dict(self):
        return {"type": "diameter", "norm": self.norm}


def diameter_eval(A, norm: str = "l2") -> float:
    """Largest pairwise distance in the chosen norm."""
    P = as_pointset(A).points
    if len(P) <= 1:
        return 0.0
    D = np.abs(P[:, None, :] - P[None, :, :])
    if norm == "l1":
        dist = D.sum(axis=2)
    elif norm == "linf":
        dist = D.max(axis=2)
    elif norm == "l2":
        dist = np.sqrt((D * D).sum(axis=2))
    else:
        raise DomainError(f"unknown norm {norm!r}")
    return float(dist.max())


@dataclass(frozen=True)
class L1(Diversity):
    kind = "l1"
    linear = True

    def _value(self, A):
        return l1_eval(A)

    def to_dict(self):
        return {"type": "l1"}


def l1_eval(A) -> float:
    """Sum over coordinates of the coordinate range."""
    P = as_pointset(A).points
    if len(P) <= 1:
        return 0.0
    return float(np.sum(P.max(axis=0) - P.min(axis=0)))


# --- circumradius (Welzl) --------------------------------------------------


def _ball_through(S: np.ndarray) -> tuple[np.ndarray, float]:
    """Smallest ball with every row of ``S`` on its boundary.

    The centre lies in the affine hull of ``S``; it solves
    ``2 (p_j - p_0) . (c - p_0) = |p_j - p_0|^2`` for ``c - p_0`` in the span
    of the differences. Returns (centre, squared radius).
    """
    p0 = S[0]
    if len(S) == 1:
        return p0.copy(), 0.0
    U = S[1:] - p0
    gram = U @ U.T
    rhs = 0.5 * np.sum(U * U, axis=1)
    try:
        alpha = np.linalg.solve(gram, rhs)
    except np.linalg.LinAlgError:
        alpha = np.linalg.lstsq(gram, rhs, rcond=None)[0]
    offset = alpha @ U
    return p0 + offset, float(offset @ offset)


def minimum_enclosing_ball(A) -> tuple[np.ndarray, float]:
    """Centre and radius of the smallest Euclidean ball containing ``A``.

    Welzl's algorithm in the move-to-front form: points that ever fall
    outside the current ball are moved to the front of the list, which keeps
    the recursion shallow on typical inputs. At most ``k + 1`` support
    points are kept, and each ball through its support set is one small
    linear solve.
    """
    A = as_pointset(A)
    if A.is_empty():
        raise DomainError("enclosing ball of an empty set")
    P = A.dedup().points
    k = P.shape[1]
    order = list(range(len(P)))
    scale = max(1.0, float(np.max(np.abs(P))))
    eps = 1e-12 * scale * scale

    def outside(idx: int, centre: np.ndarray, r2: float) -> bool:
        d = P[idx] - centre
        return float(d @ d) > r2 + eps + 1e-12 * r2

    def mtf(end: int, support: list[int]) -> tuple[np.ndarray, float]:
        if support:
            centre, r2 = _ball_through(P[support])
        else:
            centre, r2 = P[order[0]].copy(), -1.0
        if len(support) == k + 1:
            return centre, r2
        i = 0
        while i < end:
            idx = order[i]
            if r2 < 0 or outside(idx, centre, r2):
                centre, r2 = mtf(i, support + [idx])
                # move to front
                order.pop(i)
                order.insert(0, idx)
            i += 1
        return centre, r2

    centre, r2 = mtf(len(order), [])
    return centre, math.sqrt(max(r2, 0.0))


@dataclass(frozen=True)
class Circumradius(Diversity):
    kind = "circumradius"

    def _value(self, A):
        return circumradius_eval(A)

    def to_dict(self):
        return {"type": "circumradius"}


def circumradius_eval(A) -> float:
    """Radius of the minimum enclosing Euclidean ball."""
    A = as_pointset(A)
    if len(A) <= 1:
        return 0.0
    return minimum_enclosing_ball(A)[1]


# --- Minkowski diversities -------------------------------------------------


@dataclass(frozen=True, eq=False)
class Minkowski(Diversity):
    kernel: HPolytope
    kind = "minkowski"

    @property
    def dim(self):
        return self.kernel.dim

    @cached_property
    def linear(self):
        # simplex kernels (affinely independent normals around 0) are exactly the linear ones
        try:
            balancing_weights(self.kernel.scaled_normals())
        except PreconditionError:
            return False
        return True

    def _value(self, A):
        return minkowski_eval(A, self.kernel)

    def to_dict(self):
        return {"type": "minkowski", "kernel": self.kernel.to_dict()}


def minkowski_eval(A, K: HPolytope) -> float:
    """Generalized circumradius ``min{lam >= 0 : A - x in lam K}``.

    Solved as the LP over ``(lam, x)``:
    ``minimize lam  s.t.  v_l . a_i - v_l . x <= lam b_l``, ``lam >= 0``.
    Only the largest ``v_l . a_i`` over ``i`` can be active for each ``l``,
    so the rows are aggregated to ``h_A(v_l) - v_l . x <= lam b_l``. For
    unbounded kernels the value may be 0 on multi-point sets.
    """
    A = as_pointset(A, K.dim)
    if len(A) <= 1:
        return 0.0
    # centring is exact (x is free) and keeps the LP well scaled
    P = A.points - A.points.mean(axis=0)
    h = support_many(P, K.normals)
    k = K.dim
    c = np.zeros(k + 1)
    c[0] = 1.0
    G = np.hstack([-K.offsets[:, None], -K.normals])
    nonneg = np.zeros(k + 1, dtype=bool)
    nonneg[0] = True
    out = solve(LPProblem(c, G=G, h=-h, nonneg=nonneg))
    if out.status != OPTIMAL:
        # lam = 0 with x free is bounded below; infeasibility cannot occur
        raise RuntimeError(f"Minkowski LP ended with status {out.status}")
    return max(out.value, 0.0)


@dataclass(frozen=True, eq=False)
class SimplexClosedForm(Diversity):
    simplex: SimplexKernelSpec
    kind = "simplex-closed-form"
    linear = True

    @property
    def dim(self):
        return self.simplex.dim

    def _value(self, A):
        return simplex_closed_form_eval(A, self.simplex)

    def to_dict(self):
        return {"type": "simplex-closed-form", "simplex": self.simplex.to_dict()}


def simplex_closed_form_eval(A, spec: SimplexKernelSpec) -> float:
    """``sum_l c_l h_A(v_l)``; equals the simplex kernel's Minkowski value."""
    A = as_pointset(A, spec.dim)
    if len(A) <= 1:
        return 0.0
    P = A.points - A.points.mean(axis=0)
    return float(spec.weights @ support_many(P, spec.normals))


@dataclass(frozen=True, eq=False)
class DiscreteLinear(Diversity):
    measure: DiscreteSphericalMeasure
    kind = "discrete-linear"
    linear = True

    def __post_init__(self):
        self.measure.check()

    @property
    def dim(self):
        return self.measure.dim

    def _value(self, A):
        return discrete_linear_eval(A, self.measure)

    def to_dict(self):
        return {"type": "discrete-linear", "measure": self.measure.to_dict()}


def discrete_linear_eval(A, nu: DiscreteSphericalMeasure) -> float:
    """``sum_l m_l h_A(u_l)`` for a balanced discrete measure."""
    A = as_pointset(A, nu.dim)
    if len(A) <= 1:
        return 0.0
    return float(nu.masses @ support_many(A, nu.directions))


# --- mean width ------------------------------------------------------------


@dataclass(frozen=True)
class MeanWidth(Diversity):
    sampler: SphereSampler
    kind = "mean-width"
    linear = True

    @property
    def dim(self):
        return self.sampler.dim

    def _value(self, A):
        return mean_width_eval(A, self.sampler)

    def to_dict(self):
        return {"type": "mean-width", "sampler": self.sampler.to_dict()}


def _widths(A: PointSet, X: np.ndarray) -> np.ndarray:
    proj = A.points @ X.T
    return proj.max(axis=0) - proj.min(axis=0)


def mean_width_eval(A, sampler: SphereSampler) -> float:
    """Quadrature of the mean width: average of ``w_A(x_j)`` over samples.

    ``w_A(x) = h_A(x) + h_A(-x)``, so this is twice the average support over
    the sample set closed under negation. For the equiangular rule with an
    even count it is exactly ``2 * mean_j h_A(x_j)``.
    """
    A = as_pointset(A, sampler.dim)
    if len(A) <= 1:
        return 0.0
    return float(np.mean(_widths(A, sphere_samples(sampler))))


@dataclass(frozen=True)
class MeanWidthP(Diversity):
    p: float
    sampler: SphereSampler
    kind = "mean-width-p"

    def __post_init__(self):
        if not self.p >= 1:
            raise DomainError("mean-width exponent p must be at least 1")

    @property
    def dim(self):
        return self.sampler.dim

    @property
    def linear(self):
        return self.p == 1

    def _value(self, A):
        return mean_width_p_eval(A, self.p, self.sampler)

    def to_dict(self):
        return {"type": "mean-width-p", "p": self.p, "sampler": self.sampler.to_dict()}


def mean_width_p_eval(A, p: float, sampler: SphereSampler) -> float:
    """``(1/w) [w * mean_j w_A(x_j)^p]^(1/p)`` with ``w`` the sphere area.

    This keeps the ``1/w`` normalization outside the bracket for every
    ``p``; for ``p = 1`` it reduces to :func:`mean_width_eval`.
    """
    if not p >= 1:
        raise DomainError("mean-width exponent p must be at least 1")
    A = as_pointset(A, sampler.dim)
    if len(A) <= 1:
        return 0.0
    area = sphere_area(sampler.dim)
    w = _widths(A, sphere_samples(sampler))
    return float((area * np.mean(w**p)) ** (1.0 / p) / area)


# --- zonotope ----------------------------------------------------------------


def _unit_rows(directions) -> np.ndarray:
    U = np.atleast_2d(np.array(directions, dtype=float))
    if U.shape[0] == 0 or U.size == 0:
        raise DomainError("zonotope needs at least one direction")
    if np.any(np.abs(np.linalg.norm(U, axis=1) - 1.0) > 1e-9):
        raise DomainError("zonotope directions must be unit vectors")
    return U


@dataclass(frozen=True, eq=False)
class Zonotope(Diversity):
    directions: np.ndarray
    kind = "zonotope"

    def __post_init__(self):
        U = _unit_rows(self.directions)
        U.setflags(write=False)
        object.__setattr__(self, "directions", U)

    @property
    def dim(self):
        return self.directions.shape[1]

    def _value(self, A):
        return zonotope_eval(A, self.directions)

    def to_dict(self):
        return {"type": "zonotope", "directions": self.directions.tolist()}


def zonotope_eval(A, directions) -> float:
    """Least total length of a zonotope with the given directions containing A.

    LP over the translation ``x``, the segment lengths ``t_j`` and the
    coefficients ``mu_ij``: minimize ``sum_j t_j`` subject to
    ``a_i = x + sum_j mu_ij u_j`` and ``0 <= mu_ij <= t_j``. With a fixed
    direction set this is an upper bound on the direction-free zonotope
    diversity.

    Raises
    ------
    InsufficientDirectionsError
        If the directions do not span the affine hull of ``A``.
    """
    U = _unit_rows(directions)
    A = as_pointset(A, U.shape[1])
    if len(A) <= 1:
        return 0.0
    P = A.dedup().points
    P = P - P[0]
    n, k = P.shape
    m = U.shape[0]
    # variable layout: x (k, free) | mu (n*m) | t (m)
    nv = k + n * m + m
    c = np.zeros(nv)
    c[k + n * m :] = 1.0
    E = np.zeros((n * k, nv))
    G = np.zeros((n * m, nv))
    for i in range(n):
        rows = slice(i * k, (i + 1) * k)
        E[rows, :k] = np.eye(k)
        E[rows, k + i * m : k + (i + 1) * m] = U.T
        G[i * m : (i + 1) * m, k + i * m : k + (i + 1) * m] = np.eye(m)
        G[i * m : (i + 1) * m, k + n * m :] = -np.eye(m)
    f = P.reshape(-1)
    nonneg = np.ones(nv, dtype=bool)
    nonneg[:k] = False
    out = solve(LPProblem(c, G=G, h=np.zeros(n * m), E=E, f=f, nonneg=nonneg))
    if out.status != OPTIMAL:
        raise InsufficientDirectionsError("directions insufficient: they do not span the affine hull of A")
    return max(out.value, 0.0)


def zonotope_random_restarts(
    A, directions, extra: int, restarts: int, rng: np.random.Generator
) -> tuple[float, np.ndarray]:
    """Best fixed-direction zonotope value after random direction augmentation.

    Each restart appends ``extra`` random unit directions to ``directions``;
    adding directions can only lower the LP value, so the minimum over
    restarts is still an upper bound on the direction-free diversity.
    Returns the best value and the direction set achieving it.
    """
    base = _unit_rows(directions)
    best_val = zonotope_eval(A, base)
    best_dirs = base
    for _ in range(restarts):
        R = rng.standard_normal((extra, base.shape[1]))
        R /= np.linalg.norm(R, axis=1)[:, None]
        dirs = np.vstack([base, R])
        val = zonotope_eval(A, dirs)
        if val < best_val:
            best_val, best_dirs = val, dirs
    return best_val, best_dirs


# --- combinators -----------------------------------------------------------


def _common_dim(specs: Sequence[Diversity]) -> int | None:
    dims = {s.dim for s in specs if s.dim is not None}
    if len(dims) > 1:
        raise DimensionMismatchError(f"combined diversities live in different dimensions {sorted(dims)}")
    return dims.pop() if dims else None


@dataclass(frozen=True, eq=False)
class WeightedSum(Diversity):
    terms: tuple  # of (weight, Diversity)
    kind = "weighted-sum"

    def __post_init__(self):
        terms = tuple((float(w), s) for w, s in self.terms)
        if not terms:
            raise DomainError("weighted sum needs at least one term")
        if any(w <= 0 for w, _ in terms):
            raise DomainError("weights must be positive")
        object.__setattr__(self, "terms", terms)
        _common_dim([s for _, s in terms])

    @property
    def dim(self):
        return _common_dim([s for _, s in self.terms])

    @property
    def linear(self):
        return all(s.linear for _, s in self.terms)

    def _value(self, A):
        return weighted_sum_eval(A, self.terms)

    def to_dict(self):
        return {"type": "weighted-sum", "terms": [{"weight": w, "spec": s.to_dict()} for w, s in self.terms]}


def weighted_sum_eval(A, terms) -> float:
    terms = list(terms)
    if not terms:
        raise DomainError("weighted sum needs at least one term")
    return float(sum(w * s(A) for w, s in terms))


@dataclass(frozen=True, eq=False)
class MaxOf(Diversity):
    specs: tuple
    kind = "max-of"

    def __post_init__(self):
        specs = tuple(self.specs)
        if not specs:
            raise DomainError("max-of needs at least one diversity")
        object.__setattr__(self, "specs", specs)
        _common_dim(specs)

    @property
    def dim(self):
        return _common_dim(self.specs)

    @property
    def linear(self):
        return len(self.specs) == 1 and self.specs[0].linear

    def _value(self, A):
        return max_eval(A, self.specs)

    def to_dict(self):
        return {"type": "max-of", "specs": [s.to_dict() for s in self.specs]}


def max_eval(A, specs) -> float:
    specs = list(specs)
    if not specs:
        raise DomainError("max-of needs at least one diversity")
    return float(max(s(A) for s in specs))


# --- null space and delta* -------------------------------------------------


@dataclass(frozen=True)
class NullSpace:
    basis: np.ndarray  # orthonormal rows spanning null(delta)
    projector: np.ndarray  # orthogonal projector onto null(delta)^perp
    verified: bool
    max_error: float


def null_space(
    nu: DiscreteSphericalMeasure,
    rng: np.random.Generator | None = None,
    samples: int = 20,
    tol: float = 1e-9,
) -> NullSpace:
    """Null space ``{x : u_l . x = 0 for all l}`` of a discrete linear semidiversity.

    Also checks ``d(A) == d(PA)`` on ``samples`` random point sets, where
    ``P`` projects onto the span of the atoms.
    """
    nu.check()
    span = orthonormal_basis(list(nu.directions))
    basis = orthogonal_complement(span, nu.dim)
    P = span.T @ span if len(span) else np.zeros((nu.dim, nu.dim))
    rng = rng if rng is not None else np.random.default_rng(0)
    worst = 0.0
    for _ in range(samples):
        A = rng.uniform(-10, 10, size=(int(rng.integers(2, 8)), nu.dim))
        lhs = discrete_linear_eval(A, nu)
        rhs = discrete_linear_eval(A @ P.T, nu)
        worst = max(worst, abs(lhs - rhs))
    return NullSpace(basis, P, worst <= tol, worst)


def delta_star_polytope(spec: Diversity, vertices) -> float:
    """Extension of ``spec`` to the polytope ``conv(vertices)``.

    For sublinear diversities the supremum over finite subsets of a
    polytope is attained at its vertex set (or any set with the same hull).
    """
    return spec(vertices)


# --- JSON -------------------------------------------------------------------


def spec_from_dict(data: dict) -> Diversity:
    """Build a diversity from its JSON form (``"type"`` discriminator)."""
    if not isinstance(data, dict) or "type" not in data:
        raise SpecParseError("diversity spec must be an object with a 'type' field")
    t = data["type"]
    try:
        if t == "diameter":
            return Diameter(data.get("norm", "l2"))
        if t == "l1":
            return L1()
        if t == "circumradius":
            return Circumradius()
        if t == "minkowski":
            return Minkowski(HPolytope.from_dict(data["kernel"]))
        if t == "simplex-closed-form":
            return SimplexClosedForm(SimplexKernelSpec.from_dict(data["simplex"]))
        if t == "discrete-linear":
            return DiscreteLinear(DiscreteSphericalMeasure.from_dict(data["measure"]))
        if t == "mean-width":
            return MeanWidth(SphereSampler.from_dict(data["sampler"]))
        if t == "mean-width-p":
            return MeanWidthP(float(data["p"]), SphereSampler.from_dict(data["sampler"]))
        if t == "zonotope":
            return Zonotope(np.asarray(data["directions"], dtype=float))
        if t == "weighted-sum":
            return WeightedSum(tuple((float(term["weight"]), spec_from_dict(term["spec"])) for term in data["terms"]))
        if t == "max-of":
            return MaxOf(tuple(spec_from_dict(s) for s in data["specs"]))
    except (KeyError, TypeError) as exc:
        raise SpecParseError(f"malformed {t} spec: {exc}") from exc
    raise SpecParseError(f"unknown diversity type {t!r}")
