"""Kernel and measure representations of linear and Minkowski diversities.

An extremal linear semidiversity has two equivalent descriptions:

* a balanced discrete measure on the unit sphere whose atoms are affinely
  independent, evaluated as ``sum_l m_l h_A(u_l)``;
* a Minkowski semidiversity whose kernel is ``{y : v_l . y <= 1}`` for
  affinely independent normals ``v_l`` with the origin in the relative
  interior of their convex hull.

This module holds both data types and the conversions between them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike

from .errors import (
    DimensionMismatchError,
    DomainError,
    NotExtremalError,
    PreconditionError,
    SpecParseError,
    UnboundedSliceError,
)
from .lp import in_convex_hull
from .numerics import is_affinely_independent

UNIT_TOL = 1e-10
BALANCE_TOL = 1e-9


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class HPolytope:
    """Kernel ``K = {y : normals[l] . y <= offsets[l] for all l}``.

    Offsets must be positive so that the origin is interior. Unbounded
    kernels are allowed; their Minkowski functional is a semidiversity.
    """

    normals: np.ndarray
    offsets: np.ndarray

    def __post_init__(self):
        V = np.atleast_2d(np.array(self.normals, dtype=float))
        b = np.array(self.offsets, dtype=float).reshape(-1)
        if V.size == 0 or V.shape[0] == 0:
            raise DomainError("kernel needs at least one halfspace")
        if V.shape[0] != b.size:
            raise DimensionMismatchError(f"{V.shape[0]} normals but {b.size} offsets")
        if not (np.all(np.isfinite(V)) and np.all(np.isfinite(b))):
            raise DomainError("kernel data must be finite")
        if np.any(b <= 0):
            raise DomainError("kernel offsets must be positive (origin interior)")
        object.__setattr__(self, "normals", _readonly(V))
        object.__setattr__(self, "offsets", _readonly(b))

    @property
    def dim(self) -> int:
        return self.normals.shape[1]

    def __len__(self) -> int:
        return self.normals.shape[0]

    def scaled_normals(self) -> np.ndarray:
        """Normals rescaled to offset 1: ``v_l / b_l``."""
        return self.normals / self.offsets[:, None]

    def contains(self, y: ArrayLike, tol: float = 1e-12) -> bool:
        y = np.asarray(y, dtype=float)
        return bool(np.all(self.normals @ y <= self.offsets + tol))

    def to_dict(self) -> dict:
        return {"normals": self.normals.tolist(), "offsets": self.offsets.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> HPolytope:
        try:
            return cls(np.asarray(data["normals"], dtype=float), np.asarray(data["offsets"], dtype=float))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, (DomainError, DimensionMismatchError)):
                raise
            raise SpecParseError(f"malformed kernel: {exc}") from exc

    @classmethod
    def linf_ball(cls, dim: int, radius: float = 1.0) -> HPolytope:
        eye = np.eye(dim)
        return cls(np.vstack([eye, -eye]), np.full(2 * dim, float(radius)))

    @classmethod
    def regular_polygon(cls, n: int, phase: float = 0.0) -> HPolytope:
        """Regular n-gon circumscribed about the unit circle."""
        theta = phase + 2.0 * np.pi * np.arange(n) / n
        return cls(np.column_stack([np.cos(theta), np.sin(theta)]), np.ones(n))


@dataclass(frozen=True, eq=False)
class DiscreteSphericalMeasure:
    """Atoms ``(u_l, m_l)`` with unit ``u_l`` and positive masses.

    The balance condition ``sum_l m_l u_l = 0`` is not enforced at
    construction; use :func:`validate_measure` or :meth:`check`.
    """

    directions: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        U = np.atleast_2d(np.array(self.directions, dtype=float))
        m = np.array(self.masses, dtype=float).reshape(-1)
        if U.shape[0] == 0 or U.size == 0:
            raise DomainError("measure needs at least one atom")
        if U.shape[0] != m.size:
            raise DimensionMismatchError(f"{U.shape[0]} atoms but {m.size} masses")
        if not (np.all(np.isfinite(U)) and np.all(np.isfinite(m))):
            raise DomainError("measure data must be finite")
        object.__setattr__(self, "directions", _readonly(U))
        object.__setattr__(self, "masses", _readonly(m))

    @property
    def dim(self) -> int:
        return self.directions.shape[1]

    @property
    def total_mass(self) -> float:
        return float(self.masses.sum())

    def __len__(self) -> int:
        return self.masses.size

    def check(self) -> None:
        """Raise :class:`PreconditionError` listing any violated invariant."""
        problems = validate_measure(self)
        if problems:
            raise PreconditionError("invalid measure: " + "; ".join(str(p) for p in problems))

    def to_dict(self) -> dict:
        return {"atoms": [{"u": u.tolist(), "m": float(m)} for u, m in zip(self.directions, self.masses)]}

    @classmethod
    def from_dict(cls, data: dict) -> DiscreteSphericalMeasure:
        try:
            atoms = data["atoms"]
            U = [a["u"] for a in atoms]
            m = [float(a["m"]) for a in atoms]
        except (KeyError, TypeError, ValueError) as exc:
            raise SpecParseError(f"malformed measure: {exc}") from exc
        if len({len(u) for u in U}) > 1:
            raise DimensionMismatchError("atoms have inconsistent dimensions")
        return cls(np.asarray(U, dtype=float), np.asarray(m))


class Violation(NamedTuple):
    kind: str  # "non-unit", "nonpositive-mass" or "imbalance"
    index: int | None
    magnitude: float

    def __str__(self) -> str:
        where = "" if self.index is None else f" at atom {self.index}"
        return f"{self.kind}{where} (magnitude {self.magnitude:.3g})"


def validate_measure(nu: DiscreteSphericalMeasure) -> list[Violation]:
    """Every violated measure invariant, with its magnitude.

    An empty list means the atoms are unit vectors (to 1e-10), masses are
    positive and ``|sum m_l u_l| <= 1e-9 * sum m_l``.
    """
    out = []
    norms = np.linalg.norm(nu.directions, axis=1)
    for i, n in enumerate(norms):
        if abs(n - 1.0) > UNIT_TOL:
            out.append(Violation("non-unit", i, abs(n - 1.0)))
    for i, m in enumerate(nu.masses):
        if m <= 0:
            out.append(Violation("nonpositive-mass", i, float(-m)))
    resultant = float(np.linalg.norm(nu.masses @ nu.directions))
    total = float(np.abs(nu.masses).sum())
    if resultant > BALANCE_TOL * max(total, 1e-300):
        out.append(Violation("imbalance", None, resultant))
    return out


@dataclass(frozen=True, eq=False)
class SimplexKernelSpec:
    """Affinely independent normals with convex weights balancing them.

    Represents the kernel ``{y : v_l . y <= 1}`` together with the weights
    ``c_l >= 0``, ``sum c_l = 1``, ``sum c_l v_l = 0`` that give its
    Minkowski semidiversity the closed form ``sum_l c_l h_A(v_l)``.
    """

    normals: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        V = np.atleast_2d(np.array(self.normals, dtype=float))
        c = np.array(self.weights, dtype=float).reshape(-1)
        if V.shape[0] != c.size:
            raise DimensionMismatchError(f"{V.shape[0]} normals but {c.size} weights")
        if np.any(c < -1e-12):
            raise PreconditionError("simplex weights must be nonnegative")
        if abs(c.sum() - 1.0) > 1e-9:
            raise PreconditionError(f"simplex weights sum to {c.sum()!r}, not 1")
        if np.linalg.norm(c @ V) > 1e-9 * max(1.0, float(np.abs(V).max())):
            raise PreconditionError("weighted normals do not sum to zero")
        if not is_affinely_independent(V):
            raise NotExtremalError("not extremal: simplex normals are affinely dependent")
        object.__setattr__(self, "normals", _readonly(V))
        object.__setattr__(self, "weights", _readonly(np.clip(c, 0.0, None)))

    @property
    def dim(self) -> int:
        return self.normals.shape[1]

    @classmethod
    def from_normals(cls, normals: ArrayLike) -> SimplexKernelSpec:
        V = np.atleast_2d(np.asarray(normals, dtype=float))
        return cls(V, balancing_weights(V))

    def kernel(self) -> HPolytope:
        return HPolytope(self.normals, np.ones(len(self.weights)))

    def to_dict(self) -> dict:
        return {"normals": self.normals.tolist(), "weights": self.weights.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> SimplexKernelSpec:
        try:
            V = np.asarray(data["normals"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise SpecParseError(f"malformed simplex spec: {exc}") from exc
        if "weights" in data:
            return cls(V, np.asarray(data["weights"], dtype=float))
        return cls.from_normals(V)


def balancing_weights(V: ArrayLike, tol: float = 1e-9) -> np.ndarray:
    """Solve ``sum c_l v_l = 0``, ``sum c_l = 1`` for affinely independent rows.

    Raises
    ------
    NotExtremalError
        If the rows are affinely dependent.
    UnboundedSliceError
        If the origin is not in the relative interior of their hull, i.e.
        the solution has a weight ``<= tol``.
    """
    V = np.atleast_2d(np.asarray(V, dtype=float))
    if not is_affinely_independent(V):
        raise NotExtremalError("not extremal: normals are affinely dependent")
    if not in_convex_hull(np.zeros(V.shape[1]), V):
        raise UnboundedSliceError("kernel slice unbounded: origin not in the hull of the normals")
    M = np.vstack([V.T, np.ones(len(V))])
    rhs = np.zeros(V.shape[1] + 1)
    rhs[-1] = 1.0
    c, *_ = np.linalg.lstsq(M, rhs, rcond=None)
    scale = max(1.0, float(np.abs(V).max()))
    if np.linalg.norm(M @ c - rhs) > 1e-9 * scale:
        raise UnboundedSliceError("kernel slice unbounded: origin not in the affine hull of the normals")
    if np.any(c <= tol):
        raise UnboundedSliceError("kernel slice unbounded: origin on the relative boundary of the normals' hull")
    return c


def kernel_from_measure(nu: DiscreteSphericalMeasure) -> HPolytope:
    """Simplex kernel whose Minkowski semidiversity equals ``nu``'s diversity.

    With total mass ``m`` the kernel is ``{y : (m u_l) . y <= 1}``.
    """
    nu.check()
    if not is_affinely_independent(nu.directions):
        raise NotExtremalError("not extremal: measure support is affinely dependent")
    m = nu.total_mass
    return HPolytope(m * nu.directions, np.ones(len(nu)))


def measure_from_simplex_kernel(K: HPolytope) -> DiscreteSphericalMeasure:
    """Balanced measure reproducing the Minkowski semidiversity of ``K``.

    ``K``'s normals (rescaled to offset 1) must be affinely independent with
    the origin in the relative interior of their hull. The unique balancing
    weights ``c_l`` give atoms ``v_l / |v_l|`` with masses ``c_l |v_l|``.
    """
    V = K.scaled_normals()
    c = balancing_weights(V)
    norms = np.linalg.norm(V, axis=1)
    return DiscreteSphericalMeasure(V / norms[:, None], c * norms)


def simplex_spec_from_kernel(K: HPolytope) -> SimplexKernelSpec:
    V = K.scaled_normals()
    return SimplexKernelSpec(V, balancing_weights(V))


def l1_measure(dim: int) -> DiscreteSphericalMeasure:
    """Unit masses at ``+-e_i``; its diversity is the l1 diversity."""
    if dim < 1:
        raise DomainError("dimension must be at least 1")
    eye = np.eye(dim)
    U = np.empty((2 * dim, dim))
    U[0::2] = eye
    U[1::2] = -eye
    return DiscreteSphericalMeasure(U, np.ones(2 * dim))


def random_simplex_spec(rng: np.random.Generator, dim: int, size: int | None = None) -> SimplexKernelSpec:
    """Random extremal spec with ``size`` normals in R^dim.

    ``size`` defaults to ``dim + 1`` (a bounded simplex); smaller sizes give
    a simplex times a subspace. Weights are kept away from zero so the
    normals stay moderately scaled.
    """
    if size is None:
        size = dim + 1
    if not 2 <= size <= dim + 1:
        raise DomainError("simplex size must be in [2, dim + 1]")
    while True:
        c = 0.7 * rng.dirichlet(np.ones(size)) + 0.3 / size
        W = rng.uniform(-1.0, 1.0, size=(size - 1, dim))
        last = -(c[:-1] @ W) / c[-1]
        V = np.vstack([W, last])
        if is_affinely_independent(V, tol=1e-6):
            return SimplexKernelSpec(V, c)
