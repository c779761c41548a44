"""Dense two-phase simplex solver.

Solves ``minimize c.z subject to G z <= h, E z = f`` where variables are free
unless flagged nonnegative. Free variables are split as ``z = z+ - z-``.
Bland's rule is used in both phases, so the method terminates on the
degenerate geometry that shows up constantly in the diversity LPs (points
lying on kernel facets, zero-width directions).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike

from .errors import DimensionMismatchError, DomainError

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

PIVOT_TOL = 1e-11
FEAS_TOL = 1e-9
OPT_TOL = 1e-9
MAX_PIVOTS = 50_000


def _matrix(M, ncols: int, name: str) -> np.ndarray:
    if M is None:
        return np.zeros((0, ncols))
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.size == 0:
        return np.zeros((0, ncols))
    if M.shape[1] != ncols:
        raise DimensionMismatchError(f"{name} has {M.shape[1]} columns, expected {ncols}")
    return M


def _rhs(v, nrows: int, name: str) -> np.ndarray:
    if v is None:
        v = np.zeros(0)
    v = np.asarray(v, dtype=float).reshape(-1)
    if v.size != nrows:
        raise DimensionMismatchError(f"{name} has {v.size} entries, expected {nrows}")
    return v


@dataclass(frozen=True)
class LPProblem:
    """``minimize c.z  s.t.  G z <= h,  E z = f``.

    ``nonneg`` optionally marks variables constrained to be ``>= 0``; all
    other variables are free. Marking is equivalent to adding the rows
    ``-z_i <= 0`` but keeps the tableau smaller.
    """

    c: np.ndarray
    G: np.ndarray
    h: np.ndarray
    E: np.ndarray
    f: np.ndarray
    nonneg: np.ndarray

    def __init__(self, c: ArrayLike, G=None, h=None, E=None, f=None, nonneg=None):
        c = np.asarray(c, dtype=float).reshape(-1)
        n = c.size
        G = _matrix(G, n, "G")
        E = _matrix(E, n, "E")
        h = _rhs(h, G.shape[0], "h")
        f = _rhs(f, E.shape[0], "f")
        if nonneg is None:
            nonneg = np.zeros(n, dtype=bool)
        nonneg = np.asarray(nonneg, dtype=bool).reshape(-1)
        if nonneg.size != n:
            raise DimensionMismatchError(f"nonneg mask has {nonneg.size} entries, expected {n}")
        for name, arr in (("c", c), ("G", G), ("h", h), ("E", E), ("f", f)):
            if not np.all(np.isfinite(arr)):
                raise DomainError(f"{name} has non-finite entries")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "E", E)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "nonneg", nonneg)

    @property
    def nvars(self) -> int:
        return self.c.size


@dataclass(frozen=True)
class LPOutcome:
    status: str
    value: Optional[float] = None
    point: Optional[np.ndarray] = field(default=None, repr=False)
    pivots: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


class _Unbounded(Exception):
    pass


def _pivot(T: np.ndarray, basis: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    colvals = T[:, col].copy()
    colvals[row] = 0.0
    T -= np.outer(colvals, T[row])
    T[:, col] = 0.0
    T[row, col] = 1.0
    basis[row] = col


def _run(T: np.ndarray, basis: np.ndarray, ncand: int, budget: list) -> None:
    """Bland's-rule simplex on tableau ``T`` (last row = reduced costs)."""
    m = T.shape[0] - 1
    while True:
        red = T[-1, :ncand]
        entering = np.flatnonzero(red < -OPT_TOL)
        if entering.size == 0:
            return
        col = int(entering[0])
        colvals = T[:m, col]
        pos = np.flatnonzero(colvals > PIVOT_TOL)
        if pos.size == 0:
            raise _Unbounded
        ratios = T[pos, -1] / colvals[pos]
        best = ratios.min()
        ties = pos[ratios <= best + 1e-12 * max(1.0, abs(best))]
        row = int(ties[np.argmin(basis[ties])])
        _pivot(T, basis, row, col)
        budget[0] += 1
        if budget[0] > MAX_PIVOTS:
            raise RuntimeError("simplex pivot budget exhausted")


def solve(p: LPProblem) -> LPOutcome:
    """Solve ``p`` with the two-phase simplex method.

    Returns an :class:`LPOutcome` with status ``optimal``, ``infeasible``
    or ``unbounded``; value and point are set only when optimal.
    """
    n = p.nvars
    # column map of the split variables: original i -> (+col, -col or None)
    plus_cols = np.empty(n, dtype=int)
    minus_cols = np.full(n, -1, dtype=int)
    ncol = 0
    for i in range(n):
        plus_cols[i] = ncol
        ncol += 1
        if not p.nonneg[i]:
            minus_cols[i] = ncol
            ncol += 1
    nstruct = ncol

    def split(M: np.ndarray) -> np.ndarray:
        S = np.zeros((M.shape[0], nstruct))
        S[:, plus_cols] = M
        free = minus_cols >= 0
        S[:, minus_cols[free]] = -M[:, free]
        return S

    mg, me = p.G.shape[0], p.E.shape[0]
    m = mg + me
    nslack = mg
    A = np.zeros((m, nstruct + nslack))
    A[:mg, :nstruct] = split(p.G)
    A[:mg, nstruct:] = np.eye(mg)
    A[mg:, :nstruct] = split(p.E)
    b = np.concatenate([p.h, p.f])
    cost = np.zeros(nstruct + nslack)
    cost[plus_cols] = p.c
    free = minus_cols >= 0
    cost[minus_cols[free]] = -p.c[free]

    neg = b < 0
    A[neg] *= -1.0
    b = np.where(neg, -b, b)

    # rows whose slack already has +1 and a nonnegative right-hand side start
    # with the slack basic; every other row gets an artificial variable
    basis = np.empty(m, dtype=int)
    needs_art = np.ones(m, dtype=bool)
    for r in range(mg):
        if not neg[r]:
            basis[r] = nstruct + r
            needs_art[r] = False
    art_rows = np.flatnonzero(needs_art)
    nart = art_rows.size
    ntot = nstruct + nslack + nart

    T = np.zeros((m + 1, ntot + 1))
    T[:m, : nstruct + nslack] = A
    T[:m, -1] = b
    for j, r in enumerate(art_rows):
        T[r, nstruct + nslack + j] = 1.0
        basis[r] = nstruct + nslack + j
    budget = [0]

    rhs_scale = max(1.0, float(np.max(np.abs(b), initial=0.0)))
    if nart:
        T[-1, :] = 0.0
        T[-1, nstruct + nslack : ntot] = 1.0
        T[-1] -= T[art_rows].sum(axis=0)
        _run(T, basis, ntot, budget)
        if -T[-1, -1] > FEAS_TOL * rhs_scale:
            return LPOutcome(INFEASIBLE, pivots=budget[0])
        # drive remaining (zero-level) artificials out of the basis
        keep = np.ones(m, dtype=bool)
        for r in range(m):
            if basis[r] >= nstruct + nslack:
                cand = np.flatnonzero(np.abs(T[r, : nstruct + nslack]) > PIVOT_TOL)
                if cand.size:
                    _pivot(T, basis, r, int(cand[0]))
                else:
                    keep[r] = False  # redundant equality row
        rows = np.append(np.flatnonzero(keep), m)
        T = np.delete(T[rows], np.s_[nstruct + nslack : ntot], axis=1)
        basis = basis[keep]
        m = basis.size

    ncols = nstruct + nslack
    T[-1, :] = 0.0
    T[-1, :ncols] = cost
    cb = cost[basis]
    T[-1] -= cb @ T[:m]
    try:
        _run(T, basis, ncols, budget)
    except _Unbounded:
        return LPOutcome(UNBOUNDED, pivots=budget[0])

    zfull = np.zeros(ncols)
    zfull[basis] = T[:m, -1]
    z = zfull[plus_cols].copy()
    z[free] -= zfull[minus_cols[free]]
    return LPOutcome(OPTIMAL, value=float(p.c @ z), point=z, pivots=budget[0])


def in_convex_hull(p: ArrayLike, A, tol: float = 1e-9) -> bool:
    """Whether ``p`` lies in ``conv(A)``.

    Minimizes the l1 residual of ``sum_i mu_i a_i = p`` over the probability
    simplex; ``p`` is inside when the residual is at most ``tol`` relative to
    the coordinate scale.
    """
    from .geometry import as_pointset, as_vector

    A = as_pointset(A)
    if A.is_empty():
        raise DomainError("convex hull of an empty set")
    p = as_vector(p, A.dim)
    n, k = len(A), A.dim
    # variables: mu (n), r+ (k), r- (k); all nonnegative
    c = np.concatenate([np.zeros(n), np.ones(2 * k)])
    E = np.zeros((k + 1, n + 2 * k))
    E[:k, :n] = A.points.T
    E[:k, n : n + k] = np.eye(k)
    E[:k, n + k :] = -np.eye(k)
    E[k, :n] = 1.0
    f = np.concatenate([p, [1.0]])
    out = solve(LPProblem(c, E=E, f=f, nonneg=np.ones(n + 2 * k, dtype=bool)))
    scale = max(1.0, float(np.max(np.abs(A.points))), float(np.max(np.abs(p))))
    return out.optimal and out.value <= tol * scale
