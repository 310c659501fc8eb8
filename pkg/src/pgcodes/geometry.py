"""Points and subspaces of PG(n, q) in canonical (normalized / RREF) form.

Points are ordered lexicographically by their normalized coordinate codes and
d-spaces lexicographically by their flattened RREF bases; both orders define
row and column indices of incidence matrices.
"""

from __future__ import annotations

import csv
import functools
import itertools
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, ParameterError
from .galois import ExtensionField, FieldElement, field_of_order

DEFAULT_CELL_BUDGET = 10**8


def theta(m: int, q: int) -> int:
    """Number of points of PG(m, q); theta(-1, q) = 0 for the empty space."""
    if m < -1:
        raise ParameterError(f"dimension {m} < -1")
    return (q ** (m + 1) - 1) // (q - 1)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional vector subspaces of F_q^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def count_subspaces(n: int, q: int, d: int) -> int:
    """Number of projective d-spaces of PG(n, q)."""
    return gaussian_binomial(n + 1, d + 1, q)


# -- GF(q) linear algebra on small matrices of codes ----------------------------


def field_rref(field: ExtensionField, rows: Iterable[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """RREF over GF(q) (leading ones, zero rows removed)."""
    a = [list(map(int, r)) for r in rows]
    if not a:
        return ()
    ncols = len(a[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = field.inv(a[r][c])
        a[r] = [field.mul(inv, x) for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return tuple(tuple(row) for row in a[:r])


def field_nullspace(field: ExtensionField, rows: Sequence[Sequence[int]], ncols: int) -> tuple[tuple[int, ...], ...]:
    """Basis of {x : rows . x = 0} over GF(q), canonicalized."""
    r = field_rref(field, rows)
    piv = [next(c for c, x in enumerate(row) if x) for row in r]
    free = [c for c in range(ncols) if c not in piv]
    out = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(r, piv):
            v[pc] = field.neg(row[f])
        out.append(v)
    return field_rref(field, out)


# -- domain types --------------------------------------------------------------


@dataclass(frozen=True)
class ProjectivePoint:
    coords: tuple[int, ...]
    field: ExtensionField

    @classmethod
    def from_coords(cls, field: ExtensionField, coords: Sequence[int | FieldElement]) -> "ProjectivePoint":
        codes = [c.code if isinstance(c, FieldElement) else int(c) for c in coords]
        lead = next((x for x in codes if x), None)
        if lead is None:
            raise ParameterError("the zero vector is not a projective point")
        inv = field.inv(lead)
        return cls(tuple(field.mul(inv, x) for x in codes), field)

    @property
    def n(self) -> int:
        return len(self.coords) - 1


@dataclass(frozen=True)
class Subspace:
    """Projective subspace given by its RREF basis over GF(q)."""

    basis: tuple[tuple[int, ...], ...]
    field: ExtensionField

    @classmethod
    def from_rows(cls, field: ExtensionField, rows: Iterable[Sequence[int]]) -> "Subspace":
        rows = [list(r) for r in rows]
        basis = field_rref(field, rows)
        if not basis:
            raise ParameterError("rows span the zero space")
        return cls(basis, field)

    @property
    def dim(self) -> int:
        return len(self.basis) - 1

    @property
    def n(self) -> int:
        return len(self.basis[0]) - 1

    def flat(self) -> tuple[int, ...]:
        return tuple(itertools.chain.from_iterable(self.basis))


def _check_compatible(a_field: ExtensionField, b_field: ExtensionField, a_n: int, b_n: int) -> None:
    if a_field != b_field:
        raise ParameterError("objects live over different fields")
    if a_n != b_n:
        raise ParameterError(f"ambient dimension mismatch: {a_n} vs {b_n}")


def incident(point: ProjectivePoint, sub: Subspace) -> bool:
    """True iff the point lies in the subspace (rank test)."""
    _check_compatible(point.field, sub.field, point.n, sub.n)
    return len(field_rref(sub.field, list(sub.basis) + [point.coords])) == len(sub.basis)


def span(a: Subspace, b: Subspace) -> Subspace:
    _check_compatible(a.field, b.field, a.n, b.n)
    return Subspace.from_rows(a.field, list(a.basis) + list(b.basis))


def meet(a: Subspace, b: Subspace) -> Subspace | None:
    """Intersection of two subspaces, or None when they are disjoint."""
    _check_compatible(a.field, b.field, a.n, b.n)
    f = a.field
    ncols = a.n + 1
    dual = list(field_nullspace(f, a.basis, ncols)) + list(field_nullspace(f, b.basis, ncols))
    basis = field_nullspace(f, dual, ncols) if dual else field_rref(f, np.eye(ncols, dtype=int))
    if not basis:
        return None
    return Subspace(basis, f)


@functools.lru_cache(maxsize=None)
def _normalized_vectors(m: int, q: int) -> np.ndarray:
    """Vectors of length m+1 with first nonzero entry 1, in lexicographic order."""
    blocks = []
    for lead in range(m, -1, -1):
        free = m - lead
        tails = np.array(list(itertools.product(range(q), repeat=free)), dtype=np.int64).reshape(q**free, free)
        head = np.zeros((tails.shape[0], lead + 1), dtype=np.int64)
        head[:, lead] = 1
        blocks.append(np.hstack([head, tails]))
    out = np.vstack(blocks)
    out.setflags(write=False)
    return out


# -- the ambient space -----------------------------------------------------------


class ProjectiveSpace:
    """PG(n, q) with canonical point order and cached subspace tables."""

    def __init__(self, n: int, field: ExtensionField, cell_budget: int | None = DEFAULT_CELL_BUDGET):
        if n < 0:
            raise ParameterError(f"n={n} must be >= 0")
        self.n = n
        self.field = field
        self.q = field.q
        self.p = field.p
        self.h = field.h
        self.cell_budget = cell_budget
        self._check_budget(self.q ** (n + 1), "coordinate lookup table")
        self.num_points = theta(n, self.q)
        self.points = self._build_points()
        self.points.setflags(write=False)
        self._weights = self.q ** np.arange(n, -1, -1, dtype=np.int64)
        self.lookup = self._build_lookup()
        self._subspaces: dict[int, list[Subspace]] = {}
        self._bases: dict[int, np.ndarray] = {}
        self._point_sets: dict[int, np.ndarray] = {}
        self._sub_index: dict[int, dict[tuple, int]] = {}

    def __repr__(self) -> str:
        return f"PG({self.n},{self.q})"

    def _check_budget(self, cells: int, what: str) -> None:
        if self.cell_budget is not None and cells > self.cell_budget:
            raise BudgetExceeded(f"{what} needs {cells} cells > budget {self.cell_budget}")

    def _build_points(self) -> np.ndarray:
        return _normalized_vectors(self.n, self.q)

    def encode(self, vecs: np.ndarray) -> np.ndarray:
        return np.asarray(vecs, dtype=np.int64) @ self._weights

    def _build_lookup(self) -> np.ndarray:
        lookup = np.full(self.q ** (self.n + 1), -1, dtype=np.int64)
        idx = np.arange(self.num_points)
        for lam in range(1, self.q):
            lookup[self.encode(self.field.mul_arr(lam, self.points))] = idx
        lookup.setflags(write=False)
        return lookup

    def index_of(self, coords: Sequence[int] | np.ndarray) -> np.ndarray | int:
        """Point index of any nonzero coordinate vector(s); -1 for zero vectors."""
        arr = np.asarray(coords, dtype=np.int64)
        out = self.lookup[self.encode(arr)]
        return int(out) if out.ndim == 0 else out

    def point(self, i: int) -> ProjectivePoint:
        return ProjectivePoint(tuple(int(x) for x in self.points[i]), self.field)

    # subspaces -------------------------------------------------------------
    def count(self, d: int) -> int:
        return count_subspaces(self.n, self.q, d)

    def _check_dim(self, d: int) -> None:
        if not 0 <= d <= self.n:
            raise ParameterError(f"subspace dimension {d} outside [0, {self.n}]")

    def bases(self, d: int) -> np.ndarray:
        """(count, d+1, n+1) array of RREF bases in canonical order."""
        self._check_dim(d)
        if d not in self._bases:
            self._check_budget(self.count(d) * self.num_points, f"{d}-spaces of {self}")
            self._bases[d] = self._enumerate_bases(d)
        return self._bases[d]

    def _enumerate_bases(self, d: int) -> np.ndarray:
        n1, q = self.n + 1, self.q
        out = []
        for pivots in itertools.combinations(range(n1), d + 1):
            free = [
                (r, c)
                for r, pc in enumerate(pivots)
                for c in range(pc + 1, n1)
                if c not in pivots
            ]
            vals = np.array(list(itertools.product(range(q), repeat=len(free))), dtype=np.int64)
            vals = vals.reshape(q ** len(free), len(free))
            mats = np.zeros((vals.shape[0], d + 1, n1), dtype=np.int64)
            for r, pc in enumerate(pivots):
                mats[:, r, pc] = 1
            for j, (r, c) in enumerate(free):
                mats[:, r, c] = vals[:, j]
            out.append(mats)
        bases = np.concatenate(out)
        flat = bases.reshape(bases.shape[0], -1)
        order = np.lexsort(flat.T[::-1])
        bases = bases[order]
        bases.setflags(write=False)
        return bases

    def subspaces(self, d: int) -> list[Subspace]:
        if d not in self._subspaces:
            self._subspaces[d] = [
                Subspace(tuple(tuple(int(x) for x in row) for row in b), self.field)
                for b in self.bases(d)
            ]
        return self._subspaces[d]

    def subspace_index(self, sub: Subspace) -> int:
        d = sub.dim
        if d not in self._sub_index:
            self._sub_index[d] = {s.basis: i for i, s in enumerate(self.subspaces(d))}
        return self._sub_index[d][sub.basis]

    def _span_points(self, bases: np.ndarray) -> np.ndarray:
        """Point indices spanned by each basis in a (N, r, n+1) array -> (N, theta_{r-1})."""
        f = self.field
        r = bases.shape[1]
        coeffs = self.points_of_dim(r - 1)
        acc = np.zeros((bases.shape[0], coeffs.shape[0], self.n + 1), dtype=np.int64)
        for i in range(r):
            term = f.mul_arr(coeffs[None, :, i, None], bases[:, None, i, :])
            acc = f.add_arr(acc, term)
        return np.sort(self.lookup[self.encode(acc)], axis=1)

    def points_of_dim(self, m: int) -> np.ndarray:
        """Normalized coefficient vectors of length m+1 (the points of PG(m, q))."""
        return _normalized_vectors(m, self.q)

    def point_sets(self, d: int) -> np.ndarray:
        """(count, theta_d) sorted point indices of every d-space."""
        if d not in self._point_sets:
            bases = self.bases(d)
            chunks = [self._span_points(bases[i : i + 4096]) for i in range(0, bases.shape[0], 4096)]
            ps = np.concatenate(chunks)
            ps.setflags(write=False)
            self._point_sets[d] = ps
        return self._point_sets[d]

    def points_of(self, sub: Subspace) -> np.ndarray:
        if sub.field != self.field or sub.n != self.n:
            raise ParameterError("subspace does not live in this space")
        return self._span_points(np.array(sub.basis, dtype=np.int64)[None])[0]

    def incidence(self, d: int) -> np.ndarray:
        """0/1 matrix with rows = d-spaces, columns = points (uint8)."""
        ps = self.point_sets(d)
        mat = np.zeros((ps.shape[0], self.num_points), dtype=np.uint8)
        np.put_along_axis(mat, ps, 1, axis=1)
        return mat

    # CSV export --------------------------------------------------------------
    def write_points_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["index"] + [f"x{i}" for i in range(self.n + 1)])
            for i, row in enumerate(self.points):
                w.writerow([i] + [int(x) for x in row])

    def write_subspaces_csv(self, d: int, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["index", "basis", "points"])
            for i, (b, pts) in enumerate(zip(self.bases(d), self.point_sets(d))):
                rows = ";".join(" ".join(str(int(x)) for x in r) for r in b)
                w.writerow([i, rows, " ".join(str(int(x)) for x in pts)])


@functools.lru_cache(maxsize=64)
def _space(n: int, field: ExtensionField) -> ProjectiveSpace:
    return ProjectiveSpace(n, field)


def projective_space(n: int, q: int | ExtensionField, cell_budget: int | None = DEFAULT_CELL_BUDGET) -> ProjectiveSpace:
    """PG(n, q); instances built with the default budget are cached."""
    field = q if isinstance(q, ExtensionField) else field_of_order(q)
    if cell_budget == DEFAULT_CELL_BUDGET:
        return _space(n, field)
    return ProjectiveSpace(n, field, cell_budget)


def enumerate_points(n: int, q: int) -> list[ProjectivePoint]:
    space = projective_space(n, q)
    return [space.point(i) for i in range(space.num_points)]


def enumerate_subspaces(n: int, q: int, d: int) -> list[Subspace]:
    return projective_space(n, q).subspaces(d)
