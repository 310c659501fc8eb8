"""Blocking sets, Desarguesian spreads and linear blocking sets B(U).

A k-blocking set of PG(n, q) meets every (n-k)-space. Spread elements are
indexed by the canonical point order of PG(n, q), so B(U) is an index
translation through `Spread.assign`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable

import numpy as np

from . import linalg
from .codes import Codeword, build_code, functional_values
from .errors import ParameterError
from .galois import make_field, reduce_codes
from .geometry import ProjectiveSpace, Subspace, projective_space, theta


@dataclass(frozen=True, eq=False)
class PointSet:
    space: ProjectiveSpace
    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(sorted({int(i) for i in self.indices}))
        if idx and not (0 <= idx[0] and idx[-1] < self.space.num_points):
            raise ParameterError(f"point index outside [0, {self.space.num_points})")
        object.__setattr__(self, "indices", idx)

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, i: object) -> bool:
        return i in set(self.indices)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PointSet) and other.space is self.space and other.indices == self.indices

    def __hash__(self) -> int:
        return hash((id(self.space), self.indices))

    def indicator(self) -> np.ndarray:
        v = np.zeros(self.space.num_points, dtype=np.int64)
        v[list(self.indices)] = 1
        return v

    def codeword(self) -> Codeword:
        return Codeword(self.indicator(), self.space.p)

    def __or__(self, other: "PointSet") -> "PointSet":
        return PointSet(self.space, self.indices + other.indices)

    def __sub__(self, other: "PointSet") -> "PointSet":
        drop = set(other.indices)
        return PointSet(self.space, tuple(i for i in self.indices if i not in drop))


def subspace_set(space: ProjectiveSpace, sub: Subspace) -> PointSet:
    return PointSet(space, tuple(space.points_of(sub)))


def _check_k(space: ProjectiveSpace, k: int) -> None:
    if not 0 <= k <= space.n:
        raise ParameterError(f"k={k} outside [0, {space.n}]")


def intersection_sizes(pts: PointSet, d: int) -> np.ndarray:
    """|K ∩ S| for every d-space S in canonical order."""
    return pts.space.incidence(d).astype(np.int64) @ pts.indicator()


def is_k_blocking(pts: PointSet, k: int) -> bool:
    _check_k(pts.space, k)
    return bool(np.all(intersection_sizes(pts, pts.space.n - k) > 0))


def tangent_spaces(pts: PointSet, point: int, k: int) -> list[Subspace]:
    """All (n-k)-spaces meeting the set exactly in {point}."""
    _check_k(pts.space, k)
    if point not in pts:
        raise ParameterError(f"point {point} is not in the set")
    d = pts.space.n - k
    inc = pts.space.incidence(d)
    rows = np.flatnonzero((intersection_sizes(pts, d) == 1) & (inc[:, point] == 1))
    subs = pts.space.subspaces(d)
    return [subs[i] for i in rows]


def smallness_bound(k: int, q: int) -> tuple[int, int]:
    """Strict integer thresholds: small iff |B| < first; the 3(q^k - q^k/p)/2 bound is second."""
    from .galois import prime_power

    p, _ = prime_power(q)
    small = Fraction(3 * (q**k + 1), 2)
    lemma = Fraction(3, 2) * (Fraction(q**k) - Fraction(q**k, p))
    return math.ceil(small), math.ceil(lemma)


@dataclass
class BlockingSetReport:
    n: int
    q: int
    k: int
    size: int
    is_blocking: bool
    is_minimal: bool
    is_small: bool
    small_threshold: int
    tangent_witnesses: dict[int, int]  # point -> index of a tangent (n-k)-space
    residue_histogram: dict[int, int]  # |K ∩ S| mod p over all tested subspaces
    empty_count: int
    dims: tuple[int, ...]
    per_dim: dict[int, dict[int, int]] = field(default_factory=dict)
    k_out_of_range: bool = False

    @property
    def nonempty_residues(self) -> dict[int, int]:
        hist = dict(self.residue_histogram)
        hist[0] = hist.get(0, 0) - self.empty_count
        return {r: c for r, c in hist.items() if c}

    def to_dict(self) -> dict:
        return {
            "n": self.n, "q": self.q, "k": self.k, "size": self.size,
            "is_blocking": self.is_blocking, "is_minimal": self.is_minimal,
            "is_small": self.is_small, "small_threshold": self.small_threshold,
            "tangent_witnesses": {str(p): s for p, s in self.tangent_witnesses.items()},
            "residue_histogram": {str(r): c for r, c in sorted(self.residue_histogram.items())},
            "nonempty_residue_histogram": {str(r): c for r, c in sorted(self.nonempty_residues.items())},
            "empty_intersections": self.empty_count,
            "dims": list(self.dims),
            "per_dim": {str(d): {str(r): c for r, c in sorted(h.items())} for d, h in self.per_dim.items()},
            "k_out_of_range": self.k_out_of_range,
        }


def certify(pts: PointSet, k: int, dims: Iterable[int] | None = None) -> BlockingSetReport:
    """Blocking, minimality (tangent witness per point), smallness and residues.

    Residues are intersection sizes mod p over every subspace with dimension
    in `dims` (default 0..n-k).
    """
    space = pts.space
    _check_k(space, k)
    n, p = space.n, space.p
    d = n - k
    sizes = intersection_sizes(pts, d)
    blocking = bool(np.all(sizes > 0))
    inc = space.incidence(d)
    tangent_rows = inc[sizes == 1]
    tangent_ids = np.flatnonzero(sizes == 1)
    witnesses: dict[int, int] = {}
    for pt in pts:
        hit = np.flatnonzero(tangent_rows[:, pt])
        if hit.size:
            witnesses[pt] = int(tangent_ids[hit[0]])
    minimal = blocking and len(witnesses) == len(pts)
    small_t, _ = smallness_bound(k, space.q)
    dims = tuple(range(0, d + 1)) if dims is None else tuple(dims)
    hist: dict[int, int] = {}
    per_dim: dict[int, dict[int, int]] = {}
    empty = 0
    for dd in dims:
        s = sizes if dd == d else intersection_sizes(pts, dd)
        empty += int(np.count_nonzero(s == 0))
        r, c = np.unique(s % p, return_counts=True)
        per_dim[dd] = {int(a): int(b) for a, b in zip(r, c)}
        for a, b in per_dim[dd].items():
            hist[a] = hist.get(a, 0) + b
    return BlockingSetReport(
        n=n, q=space.q, k=k, size=len(pts), is_blocking=blocking, is_minimal=minimal,
        is_small=len(pts) < small_t, small_threshold=small_t, tangent_witnesses=witnesses,
        residue_histogram=hist, empty_count=empty, dims=dims, per_dim=per_dim,
        k_out_of_range=not 1 <= k <= n - 1,
    )


# -- field reduction and spreads ------------------------------------------------------


@dataclass(eq=False)
class Spread:
    """Desarguesian (h-1)-spread of PG((n+1)h-1, p); element i belongs to point i of PG(n, q)."""

    base: ProjectiveSpace
    ambient: ProjectiveSpace
    elements: list[Subspace]
    element_points: np.ndarray  # (theta_n(q), theta_{h-1}(p)) ambient point indices
    assign: np.ndarray  # ambient point -> element index

    @property
    def h(self) -> int:
        return self.base.h

    def reduce_rows(self, codes: np.ndarray) -> np.ndarray:
        """F_p-spanning vectors x^j * v (j < h) for each row v over GF(q)."""
        f = self.base.field
        codes = np.atleast_2d(np.asarray(codes, dtype=np.int64))
        xs = self.base.p ** np.arange(f.h)  # codes of 1, x, ..., x^{h-1}
        scaled = f.mul_arr(xs[None, :, None], codes[:, None, :])
        return reduce_codes(f, scaled).reshape(-1, (self.base.n + 1) * f.h)

    def reduced_image(self, sub: Subspace) -> Subspace:
        """The ((d+1)h-1)-space of the ambient corresponding to a d-space of PG(n, q)."""
        rows = self.reduce_rows(np.array(sub.basis))
        return Subspace.from_rows(self.ambient.field, rows)

    def check_partition(self) -> bool:
        counts = np.bincount(self.element_points.ravel(), minlength=self.ambient.num_points)
        return bool(np.all(counts == 1)) and len(self.elements) == self.base.num_points


def desarguesian_spread(n: int, p: int, h: int) -> Spread:
    field = make_field(p, h)
    base = projective_space(n, field.q)
    ambient = projective_space((n + 1) * h - 1, p)
    lam = np.arange(1, field.q)
    mult = field.mul_arr(lam[None, :, None], base.points[:, None, :])
    amb = ambient.index_of(reduce_codes(field, mult))
    element_points = np.array([np.unique(r) for r in amb])
    assign = np.full(ambient.num_points, -1, dtype=np.int64)
    for i, r in enumerate(element_points):
        assign[r] = i
    spread = Spread(base, ambient, [], element_points, assign)
    spread.elements = [
        Subspace.from_rows(ambient.field, spread.reduce_rows(base.points[i]))
        for i in range(base.num_points)
    ]
    if not spread.check_partition() or np.any(assign < 0):
        raise AssertionError("field reduction did not partition the ambient space")
    return spread


def B_of(u: Subspace, spread: Spread) -> PointSet:
    """Points of PG(n, q) whose spread elements meet U."""
    if u.field != spread.ambient.field or u.n != spread.ambient.n:
        raise ParameterError("U does not live in the spread's ambient space")
    return PointSet(spread.base, tuple(spread.assign[spread.ambient.points_of(u)]))


def linear_blocking_set(n: int, p: int, h: int, k: int, u: Subspace, spread: Spread | None = None) -> tuple[PointSet, BlockingSetReport]:
    """B(U) for an hk-dimensional U, with full certification."""
    if u.dim != h * k:
        raise ParameterError(f"U has dimension {u.dim}, expected hk = {h * k}")
    spread = spread or desarguesian_spread(n, p, h)
    pts = B_of(u, spread)
    return pts, certify(pts, k)


def lift_point_set(elements: Iterable[int] | PointSet, spread: Spread) -> PointSet:
    """Union of the ambient points of the given spread elements."""
    idx = list(elements)
    if any(not 0 <= i < len(spread.elements) for i in idx):
        raise ParameterError("element index is not in the spread")
    pts = spread.element_points[idx].ravel() if idx else ()
    return PointSet(spread.ambient, tuple(pts))


def span_closure(spread: Spread, i: int, j: int) -> bool:
    """Is span(E_i, E_j) exactly a union of spread elements?"""
    from .geometry import span

    pts = spread.ambient.points_of(span(spread.elements[i], spread.elements[j]))
    owners = np.unique(spread.assign[pts])
    return len(pts) == len(owners) * spread.element_points.shape[1]


def lift_tangent(pts: PointSet, k: int, spread: Spread, point: int) -> Subspace:
    """An h(n-k)-space through an ambient point of the lift meeting the lift only there.

    Built from a tangent (n-k)-space S at the corresponding PG(n, q) point: a
    complement C of the spread element inside the reduced image of S, then
    span(point, C).
    """
    base_pt = int(spread.assign[point])
    tangents = tangent_spaces(pts, base_pt, k)
    if not tangents:
        raise ParameterError(f"point {base_pt} of PG(n,q) is not essential")
    p = spread.ambient.p
    image = np.array(spread.reduced_image(tangents[0]).basis, dtype=np.int64)
    elem = np.array(spread.elements[base_pt].basis, dtype=np.int64)
    chosen = elem
    complement = []
    for row in image:
        trial = np.vstack([chosen, row])
        if linalg.rank(trial, p) > chosen.shape[0]:
            chosen = trial
            complement.append(row)
    rows = np.vstack([spread.ambient.points[point], np.array(complement)])
    return Subspace.from_rows(spread.ambient.field, rows)


def residue_cross_check(c: Codeword, blocker: PointSet, k: int) -> int:
    """|supp(c) ∩ B| mod p for c in C_k(n,q) of weight < 2q^k not orthogonal to all (n-k)-spaces.

    B must be a small minimal (n-k)-blocking set. Preconditions are verified.
    """
    space = blocker.space
    n, q, p = space.n, space.q, space.p
    if c.weight >= 2 * q**k:
        raise ParameterError(f"weight {c.weight} >= 2q^k = {2 * q**k}")
    code = build_code(n, q, k)
    if not code.contains(c):
        raise ParameterError("vector is not a codeword of " + code.label)
    if not functional_values(c.entries, space, [n - k], p).any():
        raise ParameterError("(c, S) = 0 for every (n-k)-space S")
    rep = certify(blocker, n - k, dims=())
    if not (rep.is_blocking and rep.is_minimal and rep.is_small):
        raise ParameterError("B is not a small minimal (n-k)-blocking set")
    return len(set(c.support).intersection(blocker.indices)) % p


# -- point-set files: header "n p h", then one sorted index per line -------------


def write_point_set(pts: PointSet, path: str | Path) -> None:
    s = pts.space
    with open(path, "w") as fh:
        fh.write(f"{s.n} {s.p} {s.h}\n")
        for i in pts:
            fh.write(f"{i}\n")


def read_point_set(path: str | Path) -> PointSet:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    n, p, h = map(int, lines[0].split())
    return PointSet(projective_space(n, p**h), tuple(int(x) for x in lines[1:]))


def read_subspace(path: str | Path, p: int) -> Subspace:
    """Rows of space-separated F_p symbols spanning a subspace."""
    with open(path) as fh:
        rows = [[int(x) for x in ln.split()] for ln in fh if ln.strip() and not ln.startswith("#")]
    return Subspace.from_rows(make_field(p, 1), rows)
