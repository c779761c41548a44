"""Finite diversity tables and the negative-type decision.

Subsets of the ordered ground set are indexed by bitmask: label ``i``
contributes bit ``1 << i``. Index 0 is the empty set, whose value is always
0. Certificates and matrices use the nonempty masks ``1 .. 2^n - 1`` in
increasing order, so row ``r`` corresponds to mask ``r + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from numpy.typing import ArrayLike

from .errors import CapExceededError, DimensionMismatchError, DomainError, SpecParseError
from .geometry import PointSet, as_vector
from .numerics import jacobi_eigenvalues
from .variants import Diversity

MAX_GROUND = 20
MAX_AXIOM_CHECK = 12
MAX_NEGTYPE = 6


def _check_cap(n: int, cap: int = MAX_GROUND) -> None:
    if n > cap:
        raise CapExceededError(f"ground set of size {n} exceeds the cap of {cap}")


def mask_members(mask: int, n: int) -> list[int]:
    return [i for i in range(n) if mask >> i & 1]


class DiversityTable:
    """Explicit finite diversity: a value for every subset of ``ground``.

    Parameters
    ----------
    ground : sequence of str
        Distinct labels, in bitmask order.
    values : array_like, shape (2**n,)
        ``values[mask]``; ``values[0]`` must be 0.
    """

    __slots__ = ("_ground", "_values", "_index")

    def __init__(self, ground: Sequence[str], values: ArrayLike):
        ground = tuple(str(g) for g in ground)
        if len(set(ground)) != len(ground):
            raise DomainError("ground labels must be distinct")
        _check_cap(len(ground))
        vals = np.array(values, dtype=float).reshape(-1)
        if vals.size != 1 << len(ground):
            raise DomainError(f"expected {1 << len(ground)} values, got {vals.size}")
        if not np.all(np.isfinite(vals)):
            raise DomainError("table values must be finite")
        if vals[0] != 0:
            raise DomainError("the empty set must have value 0")
        vals.setflags(write=False)
        self._ground = ground
        self._values = vals
        self._index = {g: i for i, g in enumerate(ground)}

    @property
    def ground(self) -> tuple[str, ...]:
        return self._ground

    @property
    def n(self) -> int:
        return len(self._ground)

    @property
    def values(self) -> np.ndarray:
        return self._values

    def mask(self, subset) -> int:
        m = 0
        for label in subset:
            try:
                m |= 1 << self._index[str(label)]
            except KeyError:
                raise DomainError(f"unknown label {label!r}") from None
        return m

    def subset(self, mask: int) -> tuple[str, ...]:
        return tuple(self._ground[i] for i in mask_members(mask, self.n))

    def __getitem__(self, subset) -> float:
        if isinstance(subset, (int, np.integer)):
            return float(self._values[subset])
        return float(self._values[self.mask(subset)])

    def __repr__(self) -> str:
        return f"DiversityTable(ground={list(self._ground)}, values={self._values.tolist()})"

    def scaled(self, c: float) -> DiversityTable:
        return DiversityTable(self._ground, c * self._values)

    def relabeled(self, perm: Sequence[int]) -> DiversityTable:
        """Table over ``[ground[p] for p in perm]`` with the same subset values."""
        new_ground = [self._ground[p] for p in perm]
        vals = np.zeros_like(self._values)
        for new_mask in range(1 << self.n):
            old_mask = 0
            for j in mask_members(new_mask, self.n):
                old_mask |= 1 << perm[j]
            vals[new_mask] = self._values[old_mask]
        return DiversityTable(new_ground, vals)

    def to_dict(self) -> dict:
        entries = [
            {"subset": list(self.subset(m)), "value": float(self._values[m])}
            for m in range(1, 1 << self.n)
            if bin(m).count("1") >= 2
        ]
        return {"ground": list(self._ground), "values": entries}

    @classmethod
    def from_dict(cls, data: Mapping) -> DiversityTable:
        """Parse table JSON.

        Every subset with at least two labels must be listed; singletons may
        be omitted (value 0) or listed explicitly.
        """
        try:
            ground = [str(g) for g in data["ground"]]
            entries = data["values"]
        except (KeyError, TypeError) as exc:
            raise SpecParseError(f"malformed table: {exc}") from exc
        n = len(ground)
        _check_cap(n)
        index = {g: i for i, g in enumerate(ground)}
        if len(index) != n:
            raise SpecParseError("ground labels must be distinct")
        vals = np.full(1 << n, np.nan)
        vals[0] = 0.0
        for i in range(n):
            vals[1 << i] = 0.0
        for e in entries:
            try:
                mask = 0
                for label in e["subset"]:
                    mask |= 1 << index[str(label)]
                vals[mask] = float(e["value"])
            except (KeyError, TypeError, ValueError) as exc:
                raise SpecParseError(f"malformed table entry {e!r}: {exc}") from exc
        missing = np.flatnonzero(np.isnan(vals))
        if missing.size:
            names = [",".join(ground[i] for i in mask_members(int(m), n)) for m in missing[:5]]
            raise SpecParseError(f"table is missing {missing.size} subsets, e.g. {{{'}, {'.join(names)}}}")
        return cls(ground, vals)


def restrict(spec: Diversity, labeled_points: Mapping[str, ArrayLike]) -> DiversityTable:
    """Table of ``spec`` on every subset of the labeled points."""
    labels = list(labeled_points)
    n = len(labels)
    _check_cap(n)
    if n == 0:
        return DiversityTable([], [0.0])
    pts = [as_vector(labeled_points[g]) for g in labels]
    dim = pts[0].size
    if any(p.size != dim for p in pts):
        raise DimensionMismatchError("labeled points have inconsistent dimensions")
    P = PointSet(np.asarray(pts), dim=dim)
    vals = np.zeros(1 << n)
    for mask in range(1, 1 << n):
        members = mask_members(mask, n)
        if len(members) >= 2:
            vals[mask] = spec(PointSet(P.points[members], dim=dim))
    return DiversityTable(labels, vals)


@dataclass(frozen=True)
class AxiomViolation:
    axiom: str  # "D1", "D3" or "D4"
    subsets: tuple  # label tuples involved
    excess: float

    def to_dict(self) -> dict:
        return {"axiom": self.axiom, "subsets": [list(s) for s in self.subsets], "excess": self.excess}


def check_table_axioms(t: DiversityTable, tol: float = 1e-9) -> list[AxiomViolation]:
    """Every violation of (D1'), monotonicity (D3) and intersecting (D4).

    (D1') here means singletons are 0 and all values are nonnegative. (D3)
    is checked for all pairs ``S subset T`` and (D4) for all intersecting
    pairs, so the cost is ``4^n``; ``n`` is limited to 12.
    """
    n = t.n
    _check_cap(n, MAX_AXIOM_CHECK)
    v = t.values
    out: list[AxiomViolation] = []
    for mask in range(1, 1 << n):
        if v[mask] < -tol:
            out.append(AxiomViolation("D1", (t.subset(mask),), float(-v[mask])))
    for i in range(n):
        if abs(v[1 << i]) > tol:
            out.append(AxiomViolation("D1", (t.subset(1 << i),), float(abs(v[1 << i]))))
    masks = np.arange(1 << n)
    for S in range(1, 1 << n):
        supersets = masks[(masks & S) == S]
        bad = supersets[v[S] > v[supersets] + tol]
        for T in bad:
            out.append(AxiomViolation("D3", (t.subset(S), t.subset(int(T))), float(v[S] - v[T])))
        partners = masks[(masks & S) != 0]
        partners = partners[partners > S]
        excess = v[S | partners] - v[S] - v[partners]
        for T, e in zip(partners[excess > tol], excess[excess > tol]):
            out.append(AxiomViolation("D4", (t.subset(S), t.subset(int(T))), float(e)))
    return out


def union_matrix(t: DiversityTable) -> np.ndarray:
    """``M[S][T] = delta(S | T)`` over nonempty masks in increasing order."""
    masks = np.arange(1, 1 << t.n)
    return t.values[masks[:, None] | masks[None, :]]


@dataclass(frozen=True)
class NegativeTypeReport:
    decision: bool
    max_projected_eigenvalue: float
    certificate: np.ndarray | None = field(default=None, repr=False)
    tolerance: float = 0.0

    def to_dict(self, table: DiversityTable | None = None) -> dict:
        d = {
            "decision": self.decision,
            "max_projected_eigenvalue": self.max_projected_eigenvalue,
            "tolerance": self.tolerance,
        }
        if self.certificate is not None:
            d["certificate"] = self.certificate.tolist()
            if table is not None:
                d["certificate_subsets"] = [list(table.subset(m)) for m in range(1, 1 << table.n)]
        return d


def negative_type(t: DiversityTable, tol: float | None = None) -> NegativeTypeReport:
    """Decide whether ``sum x_S x_T delta(S | T) <= 0`` for zero-sum ``x``.

    Projects the union matrix onto the zero-sum subspace and inspects its
    largest eigenvalue. ``tol`` defaults to ``1e-9 * max|M|``. When the
    decision is negative, the certificate is the unit zero-sum eigenvector
    of the largest eigenvalue, so ``x^T M x`` equals that eigenvalue.
    """
    _check_cap(t.n, MAX_NEGTYPE)
    if t.n <= 1:
        return NegativeTypeReport(True, 0.0, None, 0.0 if tol is None else tol)
    M = union_matrix(t)
    N = M.shape[0]
    if tol is None:
        tol = 1e-9 * max(float(np.abs(M).max()), 1e-300)
    P = np.eye(N) - np.full((N, N), 1.0 / N)
    eig = jacobi_eigenvalues(P @ M @ P)
    lam = float(eig.values[-1])
    if lam <= tol:
        return NegativeTypeReport(True, lam, None, tol)
    x = P @ eig.vectors[:, -1]
    x /= np.linalg.norm(x)
    return NegativeTypeReport(False, lam, x, tol)


def quadratic_form(t: DiversityTable, x: ArrayLike) -> float:
    x = np.asarray(x, dtype=float)
    return float(x @ union_matrix(t) @ x)


def linear_embeddable(t: DiversityTable, tol: float | None = None) -> bool:
    """Whether ``t`` embeds isometrically in a linear diversity on some R^k.

    Equivalent to negative type, and to embeddability in a Minkowski
    diversity with a simplex kernel. Decides only; no coordinates are built.
    """
    return negative_type(t, tol).decision


def pointwise_max(tables: Sequence[DiversityTable]) -> DiversityTable:
    if not tables:
        raise DomainError("need at least one table")
    ground = tables[0].ground
    for p in tables[1:]:
        if p.ground != ground:
            raise DomainError("tables have different ground sets")
    return DiversityTable(ground, np.max([p.values for p in tables], axis=0))


def verify_max_decomposition(
    t: DiversityTable, parts: Sequence[DiversityTable], tol: float = 1e-9
) -> bool:
    """True iff every part has negative type and their pointwise max is ``t``.

    A passing decomposition certifies that ``t`` embeds in a sublinear
    (equivalently, Minkowski) diversity. This verifies a supplied
    decomposition; it does not search for one.
    """
    if not parts:
        raise DomainError("need at least one part")
    for p in parts:
        if p.ground != t.ground:
            raise DomainError("part has a different ground set")
    if not all(negative_type(p).decision for p in parts):
        return False
    top = pointwise_max(parts)
    return bool(np.max(np.abs(top.values - t.values)) <= tol)

