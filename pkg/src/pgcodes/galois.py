"""Exact arithmetic in F_p and GF(p^h), and field reduction to F_p-vectors.

Elements of GF(p^h) are stored as integer codes: the polynomial
c_0 + c_1 x + ... + c_{h-1} x^{h-1} has code c_0 + c_1 p + ... + c_{h-1} p^{h-1}.
The code order is the order used for lexicographic point enumeration.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, ParameterError

DEFAULT_MAX_ORDER = 2**20
TABLE_MAX_ORDER = 2**16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split q = p^h; raises ParameterError if q is not a prime power."""
    if q < 2:
        raise ParameterError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    h, r = 0, q
    while r % p == 0:
        r //= p
        h += 1
    if r != 1:
        raise ParameterError(f"{q} is not a prime power")
    return p, h


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over F_p as coefficient lists, lowest degree first ------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        f = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - f * c) % p
        _trim(a)
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    poly = _trim(list(poly))
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            divisor = list(tail) + [1]
            if not _poly_mod(poly, divisor, p):
                return False
    return True


def least_irreducible(p: int, h: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree h over F_p.

    Candidates are ordered by the integer c_0 + c_1 p + ... + c_{h-1} p^{h-1}
    of their non-leading coefficients, i.e. lexicographically on
    (c_{h-1}, ..., c_0).
    """
    for code in range(p**h):
        coeffs = [(code // p**i) % p for i in range(h)] + [1]
        if is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise AssertionError("an irreducible polynomial exists for every degree")


class ExtensionField:
    """GF(p^h) with elements as integer codes in [0, p^h)."""

    def __init__(self, p: int, h: int, modulus: Sequence[int]):
        if not is_prime(p):
            raise ParameterError(f"p={p} is not prime")
        if h < 1:
            raise ParameterError(f"extension degree h={h} must be >= 1")
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != h + 1 or modulus[-1] != 1:
            raise ParameterError("modulus must be monic of degree h")
        if not is_irreducible(modulus, p):
            raise ParameterError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.h = h
        self.q = p**h
        self.modulus = modulus
        powers = p ** np.arange(h, dtype=np.int64)
        codes = np.arange(self.q, dtype=np.int64)
        self.digits = (codes[:, None] // powers[None, :]) % p
        self.digits.setflags(write=False)
        self._powers = powers
        self.exp: np.ndarray | None = None
        self.log: np.ndarray | None = None
        if self.q <= TABLE_MAX_ORDER:
            self._build_tables()

    # identity -------------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ExtensionField)
            and (self.p, self.h, self.modulus) == (other.p, other.h, other.modulus)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.h, self.modulus))

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.h}, modulus={self.modulus})"

    # conversions ------------------------------------------------------------
    def coeffs(self, a: int) -> tuple[int, ...]:
        return tuple(int(c) for c in self.digits[a])

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.h:
            coeffs = _poly_mod(coeffs, self.modulus, self.p)
        return sum((int(c) % self.p) * self.p**i for i, c in enumerate(coeffs))

    def __call__(self, value: int | Sequence[int]) -> "FieldElement":
        if isinstance(value, (int, np.integer)):
            value = int(value)
            if not 0 <= value < self.q:
                raise ParameterError(f"code {value} outside GF({self.q})")
            return FieldElement(self, value)
        return FieldElement(self, self.from_coeffs(value))

    @property
    def elements(self) -> range:
        return range(self.q)

    # scalar arithmetic --------------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.h == 1:
            return (a + b) % self.p
        return int(((self.digits[a] + self.digits[b]) % self.p) @ self._powers)

    def neg(self, a: int) -> int:
        if self.h == 1:
            return -a % self.p
        return int(((-self.digits[a]) % self.p) @ self._powers)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.h == 1:
            return a * b % self.p
        if self.log is not None:
            return int(self.exp[(self.log[a] + self.log[b]) % (self.q - 1)])
        prod = _poly_mul(self.coeffs(a), self.coeffs(b), self.p)
        return self.from_coeffs(_poly_mod(prod, self.modulus, self.p))

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        if self.h == 1:
            return pow(a, self.p - 2, self.p)
        if self.log is not None:
            return int(self.exp[(-int(self.log[a])) % (self.q - 1)])
        return self.pow(a, self.q - 2)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    # vectorised arithmetic on code arrays ---------------------------------
    def add_arr(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.h == 1:
            return (np.asarray(a) + np.asarray(b)) % self.p
        d = (self.digits[a] + self.digits[b]) % self.p
        return d @ self._powers

    def neg_arr(self, a: np.ndarray) -> np.ndarray:
        if self.h == 1:
            return (-np.asarray(a)) % self.p
        return ((-self.digits[a]) % self.p) @ self._powers

    def mul_arr(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        if self.h == 1:
            return a * b % self.p
        if self.log is None:
            return np.vectorize(self.mul, otypes=[np.int64])(a, b)
        nz = (a != 0) & (b != 0)
        out = self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]
        return np.where(nz, out, 0)

    def inv_arr(self, a: np.ndarray) -> np.ndarray:
        return np.vectorize(self.inv, otypes=[np.int64])(a)

    # internals ---------------------------------------------------------------
    def _slow_mul(self, a: int, b: int) -> int:
        prod = _poly_mul(self.coeffs(a), self.coeffs(b), self.p)
        return self.from_coeffs(_poly_mod(prod, self.modulus, self.p))

    def _build_tables(self) -> None:
        order = self.q - 1
        factors = _prime_factors(order)

        def slow_pow(a: int, e: int) -> int:
            r, b = 1, a
            while e:
                if e & 1:
                    r = self._slow_mul(r, b)
                b = self._slow_mul(b, b)
                e >>= 1
            return r

        gen = next(
            g for g in range(1, self.q) if all(slow_pow(g, order // f) != 1 for f in factors)
        ) if order > 1 else 1
        exp = np.zeros(2 * max(order, 1), dtype=np.int64)
        log = np.zeros(self.q, dtype=np.int64)
        x = 1
        for i in range(max(order, 1)):
            exp[i] = x
            log[x] = i
            x = self._slow_mul(x, gen)
        exp[max(order, 1):] = exp[: max(order, 1)]
        exp.setflags(write=False)
        log.setflags(write=False)
        self.exp, self.log = exp, log
        self.generator = gen


class PrimeField(ExtensionField):
    """F_p, the degree-1 case with modulus x."""

    def __init__(self, p: int):
        super().__init__(p, 1, (0, 1))


@dataclass(frozen=True)
class FieldElement:
    field: ExtensionField
    code: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.code)

    def _other(self, other: "FieldElement | int") -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ParameterError("elements from different fields")
            return other.code
        return self.field.from_coeffs([int(other)])

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.code, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.code, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._other(other), self.code))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.code, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(
            self.field, self.field.mul(self.code, self.field.inv(self._other(other)))
        )

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.code, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.code))

    def __bool__(self) -> bool:
        return self.code != 0

    def __repr__(self) -> str:
        return f"FieldElement({self.coeffs}, GF({self.field.q}))"


@functools.lru_cache(maxsize=None)
def _make_field(p: int, h: int) -> ExtensionField:
    if h == 1:
        return PrimeField(p)
    return ExtensionField(p, h, least_irreducible(p, h))


def make_field(p: int, h: int = 1, max_order: int = DEFAULT_MAX_ORDER) -> ExtensionField:
    """Return GF(p^h) with the deterministic (least irreducible) modulus.

    The same (p, h) always yields the same cached field object.
    """
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise ParameterError(f"p={p} is not prime")
    if h < 1:
        raise ParameterError(f"extension degree h={h} must be >= 1")
    if p**h > max_order:
        raise BudgetExceeded(f"field order {p}^{h} exceeds budget {max_order}")
    return _make_field(int(p), int(h))


def field_of_order(q: int, max_order: int = DEFAULT_MAX_ORDER) -> ExtensionField:
    p, h = prime_power(q)
    return make_field(p, h, max_order)


# -- field reduction ------------------------------------------------------------


def reduce_codes(field: ExtensionField, codes: np.ndarray) -> np.ndarray:
    """Vectorised field reduction on the last axis: (..., m) codes -> (..., m*h) over F_p."""
    codes = np.asarray(codes, dtype=np.int64)
    d = field.digits[codes]
    return d.reshape(*codes.shape[:-1], codes.shape[-1] * field.h)


def unreduce_codes(field: ExtensionField, vecs: np.ndarray) -> np.ndarray:
    """Inverse of reduce_codes: (..., m*h) over F_p -> (..., m) codes."""
    vecs = np.asarray(vecs, dtype=np.int64)
    m = vecs.shape[-1] // field.h
    d = vecs.reshape(*vecs.shape[:-1], m, field.h)
    return d @ field._powers


def _as_codes(v: Sequence[FieldElement]) -> tuple[ExtensionField, list[int]]:
    if not v:
        raise ParameterError("empty vector")
    field = v[0].field
    if any(x.field != field for x in v):
        raise ParameterError("vector mixes elements of different fields")
    return field, [x.code for x in v]


def reduce_vector(v: Sequence[FieldElement]) -> tuple[int, ...]:
    """Concatenate the F_p coefficient vectors of the entries of v."""
    field, codes = _as_codes(v)
    return tuple(int(x) for x in reduce_codes(field, np.array(codes)))


def scalar_orbit(v: Sequence[FieldElement]) -> set[tuple[int, ...]]:
    """Reduced images of all nonzero GF(q)-multiples of v."""
    field, codes = _as_codes(v)
    if not any(codes):
        raise ParameterError("scalar orbit of the zero vector")
    lam = np.arange(1, field.q)
    multiples = field.mul_arr(lam[:, None], np.array(codes)[None, :])
    return {tuple(int(x) for x in row) for row in reduce_codes(field, multiples)}


__all__ = [
    "ExtensionField",
    "FieldElement",
    "PrimeField",
    "field_of_order",
    "is_irreducible",
    "is_prime",
    "least_irreducible",
    "make_field",
    "prime_power",
    "reduce_codes",
    "reduce_vector",
    "scalar_orbit",
    "unreduce_codes",
]
