"""Finite point sets in R^k and their support-function algebra."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
from numpy.typing import ArrayLike

from .errors import DimensionMismatchError, DomainError, SpecParseError

DEDUP_TOL = 1e-12


def as_vector(x: ArrayLike, dim: int | None = None) -> np.ndarray:
    v = np.asarray(x, dtype=float).reshape(-1)
    if v.size == 0:
        raise DomainError("vector must have at least one coordinate")
    if not np.all(np.isfinite(v)):
        raise DomainError("vector entries must be finite")
    if dim is not None and v.size != dim:
        raise DimensionMismatchError(f"expected a vector of dimension {dim}, got {v.size}")
    return v


class PointSet:
    """Immutable finite list of points in R^dim.

    Duplicates are allowed; :meth:`dedup` returns a canonical copy without
    them. The coordinates are stored as a read-only ``(n, dim)`` array.

    Parameters
    ----------
    points : array_like, shape (n, dim)
        Coordinates. May be empty, in which case ``dim`` is required.
    dim : int, optional
        Ambient dimension. Inferred from ``points`` when omitted.
    """

    __slots__ = ("_points",)

    def __init__(self, points: ArrayLike = (), dim: int | None = None):
        arr = np.array(points, dtype=float)
        if arr.size == 0:
            if dim is None:
                if arr.ndim == 2 and arr.shape[1] > 0:
                    dim = arr.shape[1]
                else:
                    raise DomainError("dimension of an empty point set must be given")
            arr = np.zeros((0, dim))
        elif arr.ndim == 1:
            # a flat list is a single point
            arr = arr.reshape(1, -1)
        if arr.ndim != 2:
            raise DomainError(f"points must form a 2-d array, got shape {arr.shape}")
        if dim is not None and arr.shape[1] != dim:
            raise DimensionMismatchError(f"points have dimension {arr.shape[1]}, expected {dim}")
        if arr.shape[1] < 1:
            raise DomainError("dimension must be at least 1")
        if not np.all(np.isfinite(arr)):
            raise DomainError("point coordinates must be finite")
        arr.setflags(write=False)
        self._points = arr

    @property
    def points(self) -> np.ndarray:
        return self._points

    @property
    def dim(self) -> int:
        return self._points.shape[1]

    def __len__(self) -> int:
        return self._points.shape[0]

    def __iter__(self):
        return iter(self._points)

    def __getitem__(self, i):
        return self._points[i]

    def __repr__(self) -> str:
        return f"PointSet(dim={self.dim}, points={self._points.tolist()})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self._points, other._points)

    def __hash__(self):
        return hash((self.dim, self._points.tobytes()))

    def is_empty(self) -> bool:
        return len(self) == 0

    def dedup(self, tol: float = DEDUP_TOL) -> PointSet:
        """Drop points within ``tol`` (per coordinate) of an earlier point."""
        return PointSet(_dedup_rows(self._points, tol), dim=self.dim)

    def union(self, other: PointSet) -> PointSet:
        _check_dims(self, other)
        return PointSet(np.vstack([self._points, other._points]), dim=self.dim)

    def without(self, index: int) -> PointSet:
        return PointSet(np.delete(self._points, index, axis=0), dim=self.dim)

    def same_set(self, other: PointSet, tol: float = 1e-12) -> bool:
        """Set equality up to order and duplicates, at ``tol`` per coordinate."""
        if self.dim != other.dim:
            return False
        a, b = self.dedup(tol).points, other.dedup(tol).points
        if len(a) != len(b):
            return False
        for p in a:
            if not np.any(np.all(np.abs(b - p) <= tol, axis=1)):
                return False
        return True

    def to_dict(self) -> dict:
        return {"dim": self.dim, "points": self._points.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> PointSet:
        try:
            dim = int(data["dim"])
            pts = data["points"]
        except (KeyError, TypeError, ValueError) as exc:
            raise SpecParseError(f"malformed point set: {exc}") from exc
        if dim < 1:
            raise SpecParseError("point set dimension must be positive")
        if any(len(p) != dim for p in pts):
            raise DimensionMismatchError(f"every point must have {dim} coordinates")
        return cls(pts, dim=dim)


def as_pointset(A, dim: int | None = None) -> PointSet:
    if isinstance(A, PointSet):
        if dim is not None and A.dim != dim:
            raise DimensionMismatchError(f"point set has dimension {A.dim}, expected {dim}")
        return A
    return PointSet(A, dim=dim)


def _check_dims(A: PointSet, B: PointSet) -> None:
    if A.dim != B.dim:
        raise DimensionMismatchError(f"dimension mismatch: {A.dim} vs {B.dim}")


def _dedup_rows(arr: np.ndarray, tol: float) -> np.ndarray:
    """Keep the first of every group of rows within ``tol`` per coordinate."""
    n = len(arr)
    if n <= 1:
        return arr.copy()
    keep = np.ones(n, dtype=bool)
    step = max(1, 2_000_000 // (n * arr.shape[1]))
    for start in range(0, n, step):
        block = arr[start : start + step]
        close = np.all(np.abs(block[:, None, :] - arr[None, :, :]) <= tol, axis=2)
        # a row is dropped when it is close to some earlier row
        earlier = np.arange(n)[None, :] < np.arange(start, start + len(block))[:, None]
        keep[start : start + len(block)] = ~np.any(close & earlier, axis=1)
    return arr[keep]


def support(A, x: ArrayLike) -> float:
    """Support function ``h_A(x) = max_{a in A} a . x``."""
    A = as_pointset(A)
    if A.is_empty():
        raise DomainError("support undefined on empty set")
    x = as_vector(x, A.dim)
    return float(np.max(A.points @ x))


def support_many(A, directions: ArrayLike) -> np.ndarray:
    """Support values of ``A`` at each row of ``directions``."""
    A = as_pointset(A)
    if A.is_empty():
        raise DomainError("support undefined on empty set")
    X = np.atleast_2d(np.asarray(directions, dtype=float))
    if X.shape[1] != A.dim:
        raise DimensionMismatchError(f"directions have dimension {X.shape[1]}, expected {A.dim}")
    return np.max(A.points @ X.T, axis=0)


def width(A, x: ArrayLike) -> float:
    """Width ``h_A(x) + h_A(-x)``."""
    x = np.asarray(x, dtype=float)
    return support(A, x) + support(A, -x)


def minkowski_sum(A, B) -> PointSet:
    """All pairwise sums ``a + b``, deduplicated."""
    A, B = as_pointset(A), as_pointset(B)
    _check_dims(A, B)
    if A.is_empty() or B.is_empty():
        raise DomainError("Minkowski sum requires nonempty operands")
    sums = (A.points[:, None, :] + B.points[None, :, :]).reshape(-1, A.dim)
    return PointSet(_dedup_rows(sums, DEDUP_TOL), dim=A.dim)


def scale(A, lam: float) -> PointSet:
    A = as_pointset(A)
    if lam < 0:
        raise DomainError("scaling factor must be nonnegative")
    return PointSet(lam * A.points, dim=A.dim)


def translate(A, x: ArrayLike) -> PointSet:
    A = as_pointset(A)
    x = as_vector(x, A.dim)
    return PointSet(A.points + x, dim=A.dim)


def negate(A) -> PointSet:
    """Point reflection ``-A``; used to build symmetric test instances."""
    A = as_pointset(A)
    return PointSet(-A.points, dim=A.dim)


def convex_combinations(A, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` random convex combinations of the points of ``A``."""
    A = as_pointset(A)
    if A.is_empty():
        raise DomainError("convex combinations of an empty set")
    weights = rng.dirichlet(np.ones(len(A)), size=count)
    return weights @ A.points


def regular_polygon(n: int, radius: float = 1.0, phase: float = 0.0) -> PointSet:
    """Vertices of a regular n-gon inscribed in the circle of given radius."""
    theta = phase + 2.0 * np.pi * np.arange(n) / n
    return PointSet(radius * np.column_stack([np.cos(theta), np.sin(theta)]))


def stack(sets: Iterable[PointSet]) -> PointSet:
    sets = list(sets)
    if not sets:
        raise DomainError("nothing to stack")
    dim = sets[0].dim
    for s in sets[1:]:
        _check_dims(sets[0], s)
    return PointSet(np.vstack([s.points for s in sets]), dim=dim)


def unit_vector(coords: Sequence[float]) -> np.ndarray:
    v = as_vector(coords)
    n = np.linalg.norm(v)
    if n == 0:
        raise DomainError("zero vector has no direction")
    return v / n


def planar_hull(A) -> PointSet:
    """Vertices of the convex hull of a planar point set, counter-clockwise.

    Andrew's monotone chain; collinear boundary points are dropped.
    """
    A = as_pointset(A)
    if A.dim != 2:
        raise DimensionMismatchError("planar hull needs points in R^2")
    # near-duplicates need no special care: they fail the strict left-turn test
    P = np.unique(A.points, axis=0)
    if len(P) <= 2:
        return PointSet(A.dedup().points, dim=2)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    def chain(points):
        out: list[np.ndarray] = []
        for p in points:
            while len(out) >= 2 and cross(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = chain(P)
    upper = chain(P[::-1])
    return PointSet(np.asarray(lower[:-1] + upper[:-1]), dim=2)
