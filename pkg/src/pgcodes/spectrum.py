"""Weight enumeration, minimum-weight search and weight-gap checks.

Exhaustive enumeration walks the message space in reflected mixed-radix Gray
order: the low `block_dim` message coordinates are expanded once into a block
of codewords, and every Gray step on the remaining coordinates adds or
subtracts a single generator row to the block offset.

When p^dim is too large, a budgeted search combines sparse F_p-combinations of
geometric rows (incidence vectors, or differences of them for dual codes) with
low-weight messages over random information sets. Budgeted results are never
proofs.
"""

from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from . import linalg
from .codes import Code, Codeword, build_code, dual
from .errors import BudgetExceeded, ParameterError
from .geometry import projective_space, theta

DEFAULT_EXHAUSTIVE_BUDGET = 10**9
DEFAULT_SEARCH_STEPS = 10**7
DEFAULT_SAMPLES = 10**6
DEFAULT_SPARSE_T = 4
_BLOCK_ROWS = 2**14


def gray_steps(m: int, p: int) -> Iterator[tuple[int, int]]:
    """Reflected mixed-radix Gray code over F_p^m, as (coordinate, +1/-1) moves.

    Starting from the zero vector, the p^m - 1 moves visit every vector once.
    """
    digits = [0] * m
    dirs = [1] * m
    while True:
        j = 0
        while j < m and not 0 <= digits[j] + dirs[j] < p:
            dirs[j] = -dirs[j]
            j += 1
        if j == m:
            return
        digits[j] += dirs[j]
        yield j, dirs[j]


def _dtype(p: int):
    return np.uint8 if p < 128 else np.int32


def _addmod(block: np.ndarray, offset: np.ndarray, p: int) -> np.ndarray:
    s = block + offset
    np.subtract(s, p, out=s, where=s >= p)
    return s


def _all_messages(m: int, p: int) -> np.ndarray:
    return np.array(list(itertools.product(range(p), repeat=m)), dtype=np.int64).reshape(p**m, m)


def exhaustive_blocks(gen: np.ndarray, p: int, prefix: tuple[int, ...] = (), block_dim: int | None = None) -> Iterator[np.ndarray]:
    """All codewords whose leading message coordinates equal `prefix`, blockwise."""
    dim, length = gen.shape
    dt = _dtype(p)
    free = dim - len(prefix)
    if block_dim is None:
        block_dim = max(1, int(math.log(_BLOCK_ROWS) / math.log(p)))
    lo = min(free, block_dim)
    low = gen[dim - lo :]
    block = (_all_messages(lo, p) @ low % p).astype(dt)
    mid = gen[len(prefix) : dim - lo].astype(dt)
    offset = (np.array(prefix, dtype=np.int64) @ gen[: len(prefix)] % p).astype(dt) if prefix else np.zeros(length, dt)
    neg_mid = ((p - mid) % p).astype(dt)
    yield _addmod(block, offset, p)
    for j, s in gray_steps(mid.shape[0], p):
        offset = _addmod(offset, mid[j] if s > 0 else neg_mid[j], p)
        yield _addmod(block, offset, p)


def _prefixes(dim: int, p: int, workers: int) -> list[tuple[int, ...]]:
    t = 0
    while p**t < 4 * workers and t < dim:
        t += 1
    return list(itertools.product(range(p), repeat=t))


def _require_exhaustive(code: Code, budget: int) -> None:
    if code.p**code.dim > budget:
        raise BudgetExceeded(f"{code.label}: p^dim = {code.p}^{code.dim} exceeds exhaustive budget {budget}")


# -- weight distributions ------------------------------------------------------


@dataclass(frozen=True)
class WeightDistribution:
    counts: dict[int, int]
    p: int
    dim: int
    length: int

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def __getitem__(self, w: int) -> int:
        return self.counts.get(w, 0)

    def min_nonzero(self) -> int | None:
        return min((w for w in self.counts if w), default=None)

    def check(self) -> None:
        """Raise AssertionError if the basic counting invariants fail."""
        assert self.total == self.p**self.dim, "counts do not sum to p^dim"
        assert self.counts.get(0) == 1, "weight-0 count must be 1"
        for w, c in self.counts.items():
            assert w == 0 or c % (self.p - 1) == 0, f"count at weight {w} not divisible by p-1"

    def to_dict(self) -> dict:
        return {"p": self.p, "dim": self.dim, "length": self.length,
                "counts": {str(w): c for w, c in sorted(self.counts.items())}}


def full_spectrum(code: Code, budget: int = DEFAULT_EXHAUSTIVE_BUDGET, workers: int = 1) -> WeightDistribution:
    """Exact weight distribution by exhaustive Gray-order enumeration."""
    _require_exhaustive(code, budget)

    def run(prefix: tuple[int, ...]) -> np.ndarray:
        acc = np.zeros(code.length + 1, dtype=np.int64)
        for blk in exhaustive_blocks(code.gen, code.p, prefix):
            acc += np.bincount(np.count_nonzero(blk, axis=1), minlength=code.length + 1)
        return acc

    if workers > 1 and code.dim > 0:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, _prefixes(code.dim, code.p, workers)))
        acc = np.sum(parts, axis=0)
    else:
        acc = run(())
    counts = {int(w): int(c) for w, c in enumerate(acc) if c}
    return WeightDistribution(counts, code.p, code.dim, code.length)


def codewords_of_weight(code: Code, weight: int, budget: int = DEFAULT_EXHAUSTIVE_BUDGET) -> list[Codeword]:
    """Every codeword of the given weight (exhaustive)."""
    _require_exhaustive(code, budget)
    found = []
    for blk in exhaustive_blocks(code.gen, code.p):
        hits = blk[np.count_nonzero(blk, axis=1) == weight]
        found.extend(Codeword(r, code.p) for r in hits)
    return found


def naive_spectrum(code: Code) -> dict[int, int]:
    """Re-encode every message independently (oracle for the Gray enumerator)."""
    msgs = _all_messages(code.dim, code.p)
    words = msgs @ code.gen % code.p
    w, c = np.unique(np.count_nonzero(words, axis=1), return_counts=True)
    return {int(a): int(b) for a, b in zip(w, c)}


# -- budgeted search ---------------------------------------------------------------


def search_rows(code: Code) -> np.ndarray:
    """Geometric rows used by the sparse phase of the budgeted search.

    Codes of k-spaces use the k-space incidence vectors; duals use differences
    S_0 - S_j of (n-k)-spaces; hulls use differences of k-spaces. Rows not in
    the code are dropped, and the generator is the fallback.
    """
    space = code.space
    if code.kind == "code":
        rows = space.incidence(code.k).astype(np.int64)
    elif code.kind in ("dual", "hull") and 0 <= code.n - code.k <= code.n:
        d = code.n - code.k if code.kind == "dual" else code.k
        inc = space.incidence(d).astype(np.int64)
        rows = (inc[0][None, :] - inc[1:]) % code.p
    else:
        rows = np.zeros((0, code.length), dtype=np.int64)
    if rows.shape[0]:
        rows = rows[code.contains(rows)]
    if rows.shape[0] == 0:
        rows = code.gen.astype(np.int64)
    return rows


def _random_subsets(rng: np.random.Generator, m: int, t: int, count: int) -> np.ndarray:
    out = np.empty((0, t), dtype=np.int64)
    while out.shape[0] < count:
        draw = rng.integers(0, m, size=(count - out.shape[0], t))
        s = np.sort(draw, axis=1)
        ok = np.all(s[:, 1:] != s[:, :-1], axis=1) if t > 1 else np.ones(len(s), bool)
        out = np.vstack([out, draw[ok]])
    return out


def sparse_blocks(rows: np.ndarray, p: int, budget: int, t_max: int, rng: np.random.Generator) -> Iterator[np.ndarray]:
    """F_p-combinations of <= t_max rows with leading coefficient 1.

    Complete levels are enumerated in lexicographic order; the first level
    that does not fit in the remaining budget is sampled at random.
    """
    m = rows.shape[0]
    remaining = budget
    dt = _dtype(p)
    for t in range(1, min(t_max, m) + 1):
        if remaining <= 0:
            return
        tails = _all_messages(t - 1, p - 1) + 1
        coefs = np.hstack([np.ones((tails.shape[0], 1), dtype=np.int64), tails])
        total = math.comb(m, t) * coefs.shape[0]
        if total <= remaining:
            per = max(1, _BLOCK_ROWS // coefs.shape[0])
            combos = itertools.combinations(range(m), t)
            while True:
                idx = np.array(list(itertools.islice(combos, per)), dtype=np.int64)
                if idx.size == 0:
                    break
                blk = np.einsum("itl,ct->icl", rows[idx], coefs).reshape(-1, rows.shape[1]) % p
                yield blk.astype(dt)
            remaining -= total
        else:
            while remaining > 0:
                nb = min(_BLOCK_ROWS, remaining)
                idx = _random_subsets(rng, m, t, nb)
                cf = rng.integers(1, p, size=(nb, t))
                cf[:, 0] = 1
                blk = np.einsum("itl,it->il", rows[idx], cf) % p
                yield blk.astype(dt)
                remaining -= nb
            return


def infoset_blocks(gen: np.ndarray, p: int, budget: int, rng: np.random.Generator) -> Iterator[np.ndarray]:
    """Weight-1 and weight-2 messages over random information sets.

    Each information set is a random column permutation brought to systematic
    form; `budget` counts candidate codewords, not information sets.
    """
    dim, length = gen.shape
    if dim == 0:
        return
    dt = _dtype(p)
    pairs = np.array(list(itertools.combinations(range(dim), 2)), dtype=np.int64).reshape(-1, 2)
    coefs = np.arange(1, p, dtype=np.int64)
    remaining = budget
    while remaining > 0:
        perm = rng.permutation(length)
        sys_rows, _ = linalg.rref(gen[:, perm], p)
        sys_rows = sys_rows[:, np.argsort(perm)]
        two = (sys_rows[pairs[:, 0]][:, None, :] + coefs[None, :, None] * sys_rows[pairs[:, 1]][:, None, :]) % p
        cand = np.vstack([sys_rows, two.reshape(-1, length)])[:remaining]
        remaining -= cand.shape[0]
        for i in range(0, cand.shape[0], _BLOCK_ROWS):
            yield cand[i : i + _BLOCK_ROWS].astype(dt)


def search_blocks(code: Code, budget_steps: int, samples: int, t_max: int, seed: int) -> Iterator[np.ndarray]:
    """Sparse phase gets budget_steps - samples candidates, information sets the rest."""
    rng = np.random.default_rng(seed)
    samples = min(samples, budget_steps)
    yield from sparse_blocks(search_rows(code), code.p, budget_steps - samples, t_max, rng)
    yield from infoset_blocks(code.gen.astype(np.int64), code.p, samples, rng)


# -- gap checks -------------------------------------------------------------------


@dataclass
class SearchConfig:
    exhaustive_budget: int = DEFAULT_EXHAUSTIVE_BUDGET
    budget_steps: int = DEFAULT_SEARCH_STEPS
    samples: int = DEFAULT_SAMPLES
    t_max: int = DEFAULT_SPARSE_T
    seed: int = 0
    workers: int = 1

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def integer_range(lo, hi, lo_open: bool, hi_open: bool) -> tuple[int, int]:
    """Smallest and largest integer in the interval (may be empty: first > second)."""
    lo, hi = Fraction(lo), Fraction(hi)
    if lo > hi:
        raise ParameterError(f"malformed interval: {lo} > {hi}")
    wmin = math.floor(lo) + 1 if lo_open else math.ceil(lo)
    wmax = math.ceil(hi) - 1 if hi_open else math.floor(hi)
    return wmin, wmax


def _fmt_endpoint(x) -> int | str:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass
class GapReport:
    code: str
    lo: int | str
    hi: int | str
    lo_open: bool
    hi_open: bool
    weights: tuple[int, int]
    restriction: str
    verdict: str  # "empty" or "witness"
    mode: str  # "exhaustive", "budgeted", or "vacuous"
    steps: int
    witness: Codeword | None = None
    config: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def proved(self) -> bool:
        return self.verdict == "empty" and self.mode in ("exhaustive", "vacuous")

    def interval_str(self) -> str:
        left = "]" if self.lo_open else "["
        right = "[" if self.hi_open else "]"
        return f"{left}{self.lo},{self.hi}{right}"

    def to_dict(self) -> dict:
        return {
            "code": self.code,
            "interval": {"lo": self.lo, "hi": self.hi, "lo_open": self.lo_open, "hi_open": self.hi_open},
            "integer_weights": list(self.weights),
            "restriction": self.restriction,
            "verdict": self.verdict,
            "mode": self.mode,
            "steps": self.steps,
            "witness": None if self.witness is None else {
                "weight": self.witness.weight,
                "entries": {str(i): v for i, v in self.witness.sparse().items()},
            },
            "search": self.config,
        }


def _verify_witness(code: Code, word: Codeword, weight: int | None = None) -> Codeword:
    if not code.contains(word):
        raise AssertionError(f"search returned a vector outside {code.label}")
    if weight is not None and int(np.count_nonzero(word.entries)) != weight:
        raise AssertionError("search returned a witness with the wrong weight")
    return word


def gap_check(
    code: Code,
    lo,
    hi,
    lo_open: bool = True,
    hi_open: bool = True,
    exclusion: Code | None = None,
    mode: str = "auto",
    config: SearchConfig | None = None,
) -> GapReport:
    """Look for a codeword with weight in the interval, skipping members of `exclusion`.

    mode: "auto" (exhaustive when p^dim fits the budget), "exhaustive", "budgeted".
    """
    cfg = config or SearchConfig()
    wmin, wmax = integer_range(lo, hi, lo_open, hi_open)
    restriction = "all codewords" if exclusion is None else f"outside {exclusion.label}"
    t0 = time.perf_counter()
    base = dict(code=code.label, lo=_fmt_endpoint(lo), hi=_fmt_endpoint(hi), lo_open=lo_open,
                hi_open=hi_open, weights=(wmin, wmax), restriction=restriction)
    if wmin > wmax:
        return GapReport(**base, verdict="empty", mode="vacuous", steps=0)
    if mode == "auto":
        mode = "exhaustive" if code.p**code.dim <= cfg.exhaustive_budget else "budgeted"
    if mode == "exhaustive":
        _require_exhaustive(code, cfg.exhaustive_budget)
        blocks = exhaustive_blocks(code.gen, code.p)
        report_cfg = {}
    elif mode == "budgeted":
        blocks = search_blocks(code, cfg.budget_steps, cfg.samples, cfg.t_max, cfg.seed)
        report_cfg = {k: v for k, v in cfg.to_dict().items() if k not in ("exhaustive_budget", "workers")}
    else:
        raise ParameterError(f"unknown search mode {mode!r}")

    steps = 0
    witness = None
    for blk in blocks:
        steps += blk.shape[0]
        w = np.count_nonzero(blk, axis=1)
        hits = blk[(w >= wmin) & (w <= wmax)]
        if hits.shape[0] and exclusion is not None:
            hits = hits[~exclusion.contains(hits.astype(np.int64))]
        if hits.shape[0]:
            witness = _verify_witness(code, Codeword(hits[0], code.p))
            break
    return GapReport(**base, verdict="empty" if witness is None else "witness", mode=mode,
                     steps=steps, witness=witness, config=report_cfg,
                     wall_time=time.perf_counter() - t0)


# -- minimum weight --------------------------------------------------------------------


@dataclass
class MinWeight:
    weight: int
    witness: Codeword
    exact: bool
    steps: int
    mode: str


def _scan_min(code: Code, blocks: Iterator[np.ndarray]) -> tuple[int, np.ndarray | None, int]:
    best, best_row, steps = code.length + 1, None, 0
    for blk in blocks:
        steps += blk.shape[0]
        w = np.count_nonzero(blk, axis=1)
        w[w == 0] = code.length + 1
        i = int(np.argmin(w))
        if w[i] < best:
            best, best_row = int(w[i]), blk[i].copy()
    return best, best_row, steps


def min_weight(code: Code, config: SearchConfig | None = None, mode: str = "auto") -> MinWeight:
    """Minimum nonzero weight with a witness; exact only for exhaustive scans."""
    if code.dim == 0:
        raise ParameterError(f"{code.label} is the zero code")
    cfg = config or SearchConfig()
    if mode == "auto":
        mode = "exhaustive" if code.p**code.dim <= cfg.exhaustive_budget else "budgeted"
    if mode == "exhaustive":
        _require_exhaustive(code, cfg.exhaustive_budget)
        best, row, steps = _scan_min(code, exhaustive_blocks(code.gen, code.p))
    else:
        best, row, steps = _scan_min(code, search_blocks(code, cfg.budget_steps, cfg.samples, cfg.t_max, cfg.seed))
    witness = _verify_witness(code, Codeword(row, code.p), best)
    return MinWeight(best, witness, mode == "exhaustive", steps, mode)


# -- constructions and structural checks ----------------------------------------------


def construct_weight_2qk(n: int, q: int, k: int) -> Codeword:
    """K1 - K2 for the first pair of k-spaces (canonical order) meeting in a (k-1)-space."""
    code = build_code(n, q, k)
    if k >= n:
        raise ParameterError("two distinct k-spaces need k < n")
    ps = code.space.point_sets(k)
    target = theta(k - 1, q)
    first = set(ps[0].tolist())
    j = next(j for j in range(1, ps.shape[0]) if len(first.intersection(ps[j].tolist())) == target)
    word = Codeword.incidence(ps[0], code.length, code.p) - Codeword.incidence(ps[j], code.length, code.p)
    return _verify_witness(code, word, 2 * q**k)


def subspace_differences(n: int, q: int, d: int) -> set[Codeword]:
    """Canonical forms of a(S1 - S2) for d-spaces S1, S2 meeting in a (d-1)-space."""
    space = projective_space(n, q)
    p = space.p
    inc = space.incidence(d).astype(np.int64)
    meets = inc @ inc.T
    i, j = np.nonzero(np.triu(meets == theta(d - 1, q), k=1))
    diffs = (inc[i] - inc[j]) % p
    return {Codeword(r, p).canonical() for r in diffs}


def dual_weight_bound(p: int, m: int, q: int) -> Fraction | None:
    """Lower bound (12 theta_m + c)/7 on dual weights: c = 2 for p = 7, 6 for p > 7."""
    if p < 7:
        return None
    return Fraction(12 * theta(m, q) + (2 if p == 7 else 6), 7)


def dual_min_weight_check(n: int, q: int, k: int, config: SearchConfig | None = None) -> dict:
    """Minimum weight of C_k(n,q)^perp against the prime-order and 12/7 statements."""
    cfg = config or SearchConfig()
    code = build_code(n, q, k)
    dcode = dual(code)
    p = code.p
    mw = min_weight(dcode, cfg)
    out: dict = {
        "code": dcode.label,
        "dim": dcode.dim,
        "min_weight": mw.weight,
        "exact": mw.exact,
        "mode": mw.mode,
        "steps": mw.steps,
        "witness": {str(i): v for i, v in mw.witness.sparse().items()},
    }
    if code.h == 1:
        expected = 2 * p ** (n - k)
        out["expected_min_weight"] = expected
        out["min_weight_matches"] = mw.weight == expected
        if mw.exact:
            words = codewords_of_weight(dcode, mw.weight, cfg.exhaustive_budget)
            diffs = subspace_differences(n, q, n - k)
            structured = sum(1 for w in words if w.canonical() in diffs)
            out["min_weight_count"] = len(words)
            out["structured_count"] = structured
            out["all_structured"] = structured == len(words)
    bound = dual_weight_bound(p, n - k, q)
    if bound is not None:
        out["bound"] = _fmt_endpoint(bound)
        out["bound_respected"] = mw.weight >= bound
    return out
