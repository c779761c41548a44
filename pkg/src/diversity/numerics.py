"""Small dense numerical kernels.

Symmetric eigensolver (cyclic Jacobi), orthonormal bases, unit-sphere
sampling and an affine-independence test. Matrices here are tiny (order at
most 63 for six-point ground sets), so clarity is preferred over speed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np
from numpy.typing import ArrayLike

from .errors import DomainError, SpecParseError

UNIFORM_RANDOM = "uniform-random"
EQUIANGULAR_2D = "equiangular-2d"


def symmetrize(M: ArrayLike) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {M.shape}")
    return 0.5 * (M + M.T)


class Eigen(NamedTuple):
    values: np.ndarray  # ascending
    vectors: np.ndarray  # columns are eigenvectors


def jacobi_eigenvalues(M: ArrayLike, tol: float = 1e-11, max_sweeps: int = 100) -> Eigen:
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    M : array_like, shape (n, n)
        Symmetric input; it is symmetrized as ``(M + M.T) / 2``.
    tol : float
        Sweeps stop once every off-diagonal entry is below
        ``tol * max(1, max|M|)``.

    Returns
    -------
    Eigen
        Eigenvalues in ascending order and the matching orthonormal
        eigenvectors as columns, so that ``M = V diag(w) V^T``.
    """
    A = symmetrize(M).copy()
    n = A.shape[0]
    if n == 0:
        raise DomainError("matrix must have order at least 1")
    V = np.eye(n)
    scale = max(1.0, float(np.max(np.abs(A))))
    threshold = tol * scale
    for _ in range(max_sweeps):
        off = np.abs(A - np.diag(np.diag(A)))
        if off.max(initial=0.0) <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 1e-300 or abs(apq) < 0.01 * threshold:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # A <- J^T A J with J the rotation in the (p, q) plane
                ap = A[:, p].copy()
                aq = A[:, q].copy()
                A[:, p] = c * ap - s * aq
                A[:, q] = s * ap + c * aq
                rp = A[p, :].copy()
                rq = A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                A[p, q] = A[q, p] = 0.0
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    return Eigen(w[order], V[:, order])


def orthonormal_basis(vectors: Sequence[ArrayLike], tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis of the span of ``vectors`` (rows of the result).

    Modified Gram-Schmidt with one re-orthogonalization pass. A vector is
    taken as dependent when its residual is below ``tol`` times the largest
    input norm.
    """
    vecs = [np.asarray(v, dtype=float).reshape(-1) for v in vectors]
    if not vecs:
        return np.zeros((0, 0))
    dim = vecs[0].size
    if any(v.size != dim for v in vecs):
        raise DomainError("all vectors must share one dimension")
    ref = max(1.0, max(float(np.linalg.norm(v)) for v in vecs))
    basis: list[np.ndarray] = []
    for v in vecs:
        r = v.copy()
        for _ in range(2):
            for b in basis:
                r -= (b @ r) * b
        norm = np.linalg.norm(r)
        if norm > tol * ref:
            basis.append(r / norm)
    if not basis:
        return np.zeros((0, dim))
    return np.asarray(basis)


def orthogonal_complement(basis: np.ndarray, dim: int, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis (rows) of the complement of an orthonormal row basis."""
    P = np.eye(dim)
    if len(basis):
        P = P - basis.T @ basis
    return orthonormal_basis(list(P), tol=tol)


def is_affinely_independent(points: Sequence[ArrayLike], tol: float = 1e-9) -> bool:
    """True iff the differences ``p_i - p_0`` are linearly independent.

    The smallest singular value of the difference matrix is compared with
    ``tol * max(1, largest singular value)``; callers should pre-normalize
    wildly scaled data.
    """
    P = np.atleast_2d(np.asarray(points, dtype=float))
    if len(P) == 0:
        raise DomainError("need at least one point")
    if len(P) == 1:
        return True
    D = P[1:] - P[0]
    if D.shape[0] > D.shape[1]:
        return False
    s = np.linalg.svd(D, compute_uv=False)
    return bool(s[-1] > tol * max(1.0, s[0]))


@dataclass(frozen=True)
class SphereSampler:
    """Recipe for a deterministic set of unit vectors.

    ``mode`` is ``"uniform-random"`` (Gaussian directions normalized, drawn
    from ``numpy.random.default_rng(seed)``) or ``"equiangular-2d"``
    (angles ``2 pi j / count``; dimension 2 only).
    """

    dim: int
    count: int
    mode: str = UNIFORM_RANDOM
    seed: int = 0

    def __post_init__(self):
        if self.dim < 1:
            raise DomainError("sampler dimension must be at least 1")
        if self.count < 1:
            raise DomainError("sampler count must be at least 1")
        if self.mode not in (UNIFORM_RANDOM, EQUIANGULAR_2D):
            raise DomainError(f"unknown sampler mode {self.mode!r}")
        if self.mode == EQUIANGULAR_2D and self.dim != 2:
            raise DomainError("equiangular-2d sampling requires dim = 2")

    @classmethod
    def equiangular(cls, count: int) -> SphereSampler:
        return cls(dim=2, count=count, mode=EQUIANGULAR_2D)

    def to_dict(self) -> dict:
        d = {"dim": self.dim, "count": self.count, "mode": self.mode}
        if self.mode == UNIFORM_RANDOM:
            d["seed"] = self.seed
        return d

    @classmethod
    def from_dict(cls, data: dict) -> SphereSampler:
        try:
            return cls(
                dim=int(data["dim"]),
                count=int(data["count"]),
                mode=data.get("mode", UNIFORM_RANDOM),
                seed=int(data.get("seed", 0)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SpecParseError(f"malformed sampler: {exc}") from exc


def sphere_samples(sampler: SphereSampler) -> np.ndarray:
    """Unit vectors described by ``sampler``, shape ``(count, dim)``.

    The result is cached per sampler and returned read-only.
    """
    return _sphere_samples(sampler)


@lru_cache(maxsize=64)
def _sphere_samples(sampler: SphereSampler) -> np.ndarray:
    if sampler.mode == EQUIANGULAR_2D:
        theta = 2.0 * np.pi * np.arange(sampler.count) / sampler.count
        X = np.column_stack([np.cos(theta), np.sin(theta)])
    else:
        rng = np.random.default_rng(sampler.seed)
        X = rng.standard_normal((sampler.count, sampler.dim))
        norms = np.linalg.norm(X, axis=1)
        # a zero Gaussian draw has probability zero; redraw defensively
        while np.any(norms == 0):
            bad = norms == 0
            X[bad] = rng.standard_normal((int(bad.sum()), sampler.dim))
            norms = np.linalg.norm(X, axis=1)
        X = X / norms[:, None]
    X.setflags(write=False)
    return X


def sphere_area(dim: int) -> float:
    """Surface measure of the unit sphere in R^dim (2 for dim = 1)."""
    return 2.0 * math.pi ** (dim / 2.0) / math.gamma(dim / 2.0)
