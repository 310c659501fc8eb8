"""p-ary codes C_k(n, q) of points and k-spaces, duals, hulls and functionals."""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from . import linalg
from .errors import ParameterError
from .galois import prime_power
from .geometry import DEFAULT_CELL_BUDGET, ProjectiveSpace, projective_space, theta


class Codeword:
    """A vector over F_p indexed by the canonical point order."""

    def __init__(self, entries: Iterable[int] | np.ndarray, p: int):
        arr = np.asarray(entries, dtype=np.int64) % p
        if arr.ndim != 1:
            raise ValueError("a codeword is a 1-d vector")
        arr.setflags(write=False)
        self.entries = arr
        self.p = p

    @classmethod
    def incidence(cls, points: Iterable[int], length: int, p: int) -> "Codeword":
        v = np.zeros(length, dtype=np.int64)
        v[np.fromiter(points, dtype=np.int64)] = 1
        return cls(v, p)

    @functools.cached_property
    def support(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.entries))

    @property
    def weight(self) -> int:
        return len(self.support)

    def __len__(self) -> int:
        return self.entries.shape[0]

    def sparse(self) -> dict[int, int]:
        return {i: int(self.entries[i]) for i in self.support}

    def values(self) -> set[int]:
        return {int(self.entries[i]) for i in self.support}

    def _check(self, other: "Codeword") -> None:
        if other.p != self.p or len(other) != len(self):
            raise ParameterError("codewords of different length or alphabet")

    def __add__(self, other: "Codeword") -> "Codeword":
        self._check(other)
        return Codeword(self.entries + other.entries, self.p)

    def __sub__(self, other: "Codeword") -> "Codeword":
        self._check(other)
        return Codeword(self.entries - other.entries, self.p)

    def __neg__(self) -> "Codeword":
        return Codeword(-self.entries, self.p)

    def __mul__(self, a: int) -> "Codeword":
        return Codeword(self.entries * int(a), self.p)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Codeword)
            and other.p == self.p
            and np.array_equal(other.entries, self.entries)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.entries.tobytes()))

    def canonical(self) -> "Codeword":
        """Scalar multiple whose first nonzero entry is 1."""
        if not self.support:
            return self
        lead = int(self.entries[self.support[0]])
        return self * pow(lead, self.p - 2, self.p)

    def __repr__(self) -> str:
        return f"Codeword(p={self.p}, length={len(self)}, weight={self.weight})"


@dataclass(frozen=True, eq=False)
class Code:
    """Row space of an RREF generator over F_p, tagged with its geometry."""

    n: int
    k: int
    p: int
    h: int
    gen: np.ndarray
    pivots: tuple[int, ...]
    kind: str = "code"
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def q(self) -> int:
        return self.p**self.h

    @property
    def length(self) -> int:
        return self.gen.shape[1]

    @property
    def dim(self) -> int:
        return self.gen.shape[0]

    @property
    def label(self) -> str:
        base = f"C_{self.k}({self.n},{self.q})"
        return {"code": base, "dual": base + "^perp", "hull": f"hull({base})"}.get(self.kind, f"custom[{base}]")

    @property
    def space(self) -> ProjectiveSpace:
        return projective_space(self.n, self.q)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Code)
            and (self.n, self.k, self.p, self.h, self.kind) == (other.n, other.k, other.p, other.h, other.kind)
            and np.array_equal(self.gen, other.gen)
        )

    __hash__ = object.__hash__

    def encode(self, msgs: np.ndarray) -> np.ndarray:
        return np.atleast_2d(msgs) @ self.gen % self.p

    def contains(self, vecs: Codeword | np.ndarray) -> bool | np.ndarray:
        if isinstance(vecs, Codeword):
            return bool(linalg.in_rowspace(vecs.entries, self.gen, self.pivots, self.p)[0])
        return linalg.in_rowspace(vecs, self.gen, self.pivots, self.p)

    def random_codewords(self, count: int, rng: np.random.Generator) -> np.ndarray:
        msgs = rng.integers(0, self.p, size=(count, self.dim))
        return msgs @ self.gen % self.p

    def codeword(self, entries: Iterable[int] | np.ndarray) -> Codeword:
        c = Codeword(entries, self.p)
        if len(c) != self.length:
            raise ParameterError(f"length {len(c)} != code length {self.length}")
        return c


def _params(n: int, q: int, k: int) -> tuple[int, int]:
    p, h = prime_power(q)
    if n < 1:
        raise ParameterError(f"n={n} must be >= 1")
    if not 0 <= k <= n:
        raise ParameterError(f"k={k} outside [0, {n}]")
    return p, h


def incidence_matrix(n: int, q: int, k: int, cell_budget: int | None = DEFAULT_CELL_BUDGET) -> np.ndarray:
    """Rows: k-spaces, columns: points, both in canonical order."""
    _params(n, q, k)
    return projective_space(n, q, cell_budget).incidence(k)


@functools.lru_cache(maxsize=32)
def _build_code(n: int, q: int, k: int) -> Code:
    p, h = _params(n, q, k)
    gen, piv = linalg.rref(incidence_matrix(n, q, k), p)
    gen.setflags(write=False)
    return Code(n, k, p, h, gen, piv, "code")


def build_code(n: int, q: int, k: int) -> Code:
    """C_k(n, q): the F_p row space of the point/k-space incidence matrix."""
    return _build_code(n, q, k)


def dual(c: Code) -> Code:
    """C^perp as a Code; dual(dual(C)) reproduces C exactly."""
    ker = linalg.nullspace(c.gen, c.p, c.length)
    gen, piv = linalg.rref(ker, c.p) if ker.shape[0] else (ker, ())
    gen.setflags(write=False)
    kind = {"code": "dual", "dual": "code"}.get(c.kind, "custom")
    return Code(c.n, c.k, c.p, c.h, gen, piv, kind)


def hull(c: Code) -> Code:
    """C ∩ C^perp."""
    gram = c.gen @ c.gen.T % c.p
    left = linalg.nullspace(gram.T, c.p, c.dim) if c.dim else np.zeros((0, 0), dtype=np.int64)
    if left.shape[0] == 0:
        gen, piv = np.zeros((0, c.length), dtype=np.int64), ()
    else:
        gen, piv = linalg.rref(left @ c.gen % c.p, c.p)
    gen.setflags(write=False)
    return Code(c.n, c.k, c.p, c.h, gen, piv, "hull")


def _vector(x, length: int) -> np.ndarray:
    """Codewords and arrays are vectors; any other iterable is a set of point indices."""
    if isinstance(x, Codeword):
        arr = x.entries
    elif isinstance(x, np.ndarray):
        arr = x.astype(np.int64)
    else:
        arr = np.zeros(length, dtype=np.int64)
        arr[np.fromiter(x, dtype=np.int64)] = 1
    if arr.shape != (length,):
        raise ParameterError(f"length mismatch: {arr.shape[0]} vs {length}")
    return arr


def scalar_product(c: Codeword, t: Codeword | Iterable[int] | np.ndarray) -> int:
    """(c, T) in F_p; T is a codeword/vector or a point set (its incidence vector)."""
    return int(c.entries @ _vector(t, len(c)) % c.p)


def functional_values(vecs: np.ndarray, space: ProjectiveSpace, dims: Iterable[int], p: int) -> np.ndarray:
    """(c, U) for every row c of vecs and every subspace U of the given dimensions.

    Columns follow the dimensions in order, each block in canonical subspace order.
    """
    vecs = np.atleast_2d(np.asarray(vecs, dtype=np.int64))
    blocks = [vecs @ space.incidence(d).T.astype(np.int64) % p for d in dims]
    return np.hstack(blocks)


def dual_membership(c: Codeword | np.ndarray, code: Code) -> bool | np.ndarray:
    """Membership in C_k(n,q)^perp via (c, K) = 0 for every k-space K."""
    if code.kind != "code":
        raise ParameterError("dual_membership needs a code of points and k-spaces")
    vals = functional_values(c.entries if isinstance(c, Codeword) else c, code.space, [code.k], code.p)
    inside = ~vals.any(axis=1)
    return bool(inside[0]) if isinstance(c, Codeword) else inside


def nullspace_membership(c: Codeword | np.ndarray, code: Code) -> bool | np.ndarray:
    """Membership in C^perp via the generator: G c = 0."""
    vecs = np.atleast_2d(c.entries if isinstance(c, Codeword) else np.asarray(c))
    inside = ~(vecs @ code.gen.T % code.p).any(axis=1)
    return bool(inside[0]) if isinstance(c, Codeword) else inside


def constant_functional_check(c: Codeword, code: Code, dmin: int | None = None) -> tuple[bool, int | None]:
    """Evaluate (c, U) over every subspace U with dim(U) >= dmin (default n - k).

    Returns (all values equal, the common value or None).
    """
    if code.kind != "code":
        raise ParameterError("constant_functional_check needs a code of points and k-spaces")
    if not code.contains(c):
        raise ParameterError("vector is not a codeword of " + code.label)
    dmin = code.n - code.k if dmin is None else dmin
    vals = functional_values(c.entries, code.space, range(dmin, code.n + 1), code.p)[0]
    if np.all(vals == vals[0]):
        return True, int(vals[0])
    return False, None


# -- plain-text matrix format -----------------------------------------------------
#   p n k h length dim
#   dim rows of space-separated symbols in canonical column order


def write_matrix(code: Code, path: str | Path) -> None:
    with open(path, "w") as fh:
        fh.write(f"{code.p} {code.n} {code.k} {code.h} {code.length} {code.dim}\n")
        for row in code.gen:
            fh.write(" ".join(str(int(x)) for x in row) + "\n")


def read_matrix(path: str | Path, kind: str = "custom") -> Code:
    with open(path) as fh:
        lines = [ln.split() for ln in fh if ln.strip()]
    p, n, k, h, length, dim = map(int, lines[0])
    rows = np.array([[int(x) for x in ln] for ln in lines[1 : 1 + dim]], dtype=np.int64).reshape(dim, length)
    if len(lines) - 1 != dim:
        raise ParameterError(f"expected {dim} rows, found {len(lines) - 1}")
    if length != theta(n, p**h):
        raise ParameterError(f"length {length} != theta_{n}({p**h})")
    gen, piv = linalg.rref(rows, p) if dim else (rows, ())
    gen.setflags(write=False)
    return Code(n, k, p, h, gen, piv, kind)
