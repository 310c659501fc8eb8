"""Stable statement identifiers, hypothesis gating and per-instance verification.

Every verifier returns a JSON-ready dict with one of four verdicts:

    proved-by-exhaustion        the instance was settled by complete enumeration
    searched-no-counterexample  budgeted search found nothing (not a proof)
    hypothesis-not-met          the statement does not apply to these parameters
    counterexample-found        an applicable statement failed on this instance

When hypotheses fail and an exhaustive check is cheap, it is still run and
attached under "observation"; it never changes the verdict.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .codes import Codeword, build_code, dual, functional_values, hull
from .errors import ParameterError
from .galois import prime_power
from .geometry import theta
from .spectrum import (
    SearchConfig,
    construct_weight_2qk,
    dual_min_weight_check,
    dual_weight_bound,
    gap_check,
    min_weight,
    _fmt_endpoint,
)

SCHEMA_VERSION = 1

PROVED = "proved-by-exhaustion"
SEARCHED = "searched-no-counterexample"
SKIPPED = "hypothesis-not-met"
FAILED = "counterexample-found"

EXIT_CODES = {PROVED: 0, SKIPPED: 0, FAILED: 1, SEARCHED: 2}


def hypothesis_flags(n: int, q: int, k: int) -> dict[str, bool]:
    p, h = prime_power(q)
    return {
        "q_prime": h == 1,
        "p_gt_5": p > 5,
        "p_eq_7": p == 7,
        "p_gt_7": p > 7,
        "p_ge_7": p >= 7,
        "n_ge_2": n >= 2,
        "k_in_range": 1 <= k <= n - 1,
        "k_ge_half": 2 * k >= n,
        "hyperplane": k == n - 1,
        "plane_lines": n == 2 and k == 1,
    }


@dataclass(frozen=True)
class Statement:
    ident: str
    text: str
    requires: tuple[str, ...]
    run: Callable[..., dict]


def _exhaustive_ok(code, cfg: SearchConfig) -> bool:
    return code.p**code.dim <= cfg.exhaustive_budget


def _endpoint_witnesses(n: int, q: int, k: int, exclusion=None) -> dict:
    code = build_code(n, q, k)
    line = Codeword.incidence(code.space.point_sets(k)[0], code.length, code.p)
    out = {"lower": {"construction": "k-space incidence vector", "weight": line.weight,
                     "in_code": code.contains(line)}}
    if k < n:
        diff = construct_weight_2qk(n, q, k)
        out["upper"] = {"construction": "difference of two k-spaces meeting in a (k-1)-space",
                        "weight": diff.weight, "in_code": code.contains(diff)}
        if exclusion is not None:
            out["upper"]["in_exclusion"] = exclusion.contains(diff)
    return out


def _gap_statement(interval_fn, exclusion_fn=None, endpoints=True):
    def run(n: int, q: int, k: int, cfg: SearchConfig, applicable: bool) -> dict:
        code = build_code(n, q, k)
        lo, hi, lo_open, hi_open = interval_fn(n, q, k)
        excl = exclusion_fn(n, q, k) if exclusion_fn else None
        out = {"interval": {"lo": _fmt_endpoint(lo), "hi": _fmt_endpoint(hi),
                            "lo_open": lo_open, "hi_open": hi_open}}
        if Fraction(lo) > Fraction(hi):
            # e.g. [p+2, 2p-1] for p = 2: no weights to exclude
            return out | {"gap": {"mode": "vacuous", "verdict": "empty"}, "status": PROVED}
        if not applicable and not _exhaustive_ok(code, cfg):
            return out | {"status": SKIPPED}
        rep = gap_check(code, lo, hi, lo_open, hi_open, exclusion=excl, config=cfg)
        out["gap"] = rep.to_dict()
        if endpoints and k < n:
            out["endpoints"] = _endpoint_witnesses(n, q, k, excl)
        if rep.verdict == "witness":
            out["status"] = FAILED
        else:
            out["status"] = PROVED if rep.proved else SEARCHED
        return out

    return run


def _main_interval(n, q, k):
    return theta(k, q), 2 * q**k, True, True


def _thm12_interval(n, q, k):
    p, _ = prime_power(q)
    c = 2 if p == 7 else 6
    return theta(k, q), Fraction(12 * theta(k, q) + c, 7), True, True


def _prime_plane_interval(n, q, k):
    p, _ = prime_power(q)
    return p + 2, 2 * p - 1, False, False


def _exclusion_dual(n, q, k):
    return dual(build_code(n, q, n - k))


def _run_dual_bound(n, q, k, cfg, applicable):
    p, _ = prime_power(q)
    bound = dual_weight_bound(p, n - k, q) or Fraction(12 * theta(n - k, q) + 6, 7)
    dcode = dual(build_code(n, q, k))
    if not applicable and not _exhaustive_ok(dcode, cfg):
        return {"bound": _fmt_endpoint(bound), "status": SKIPPED}
    mw = min_weight(dcode, cfg)
    out = {"bound": _fmt_endpoint(bound), "min_weight": mw.weight, "exact": mw.exact,
           "mode": mw.mode, "steps": mw.steps,
           "witness": {str(i): v for i, v in mw.witness.sparse().items()}}
    if mw.weight < bound:
        out["status"] = FAILED
    else:
        out["status"] = PROVED if mw.exact else SEARCHED
    return out


def _run_hull(n, q, k, cfg, applicable):
    code = build_code(n, q, k)
    hcode = hull(code)
    expected = 2 * q ** (n - 1)
    out = {"expected_min_weight": expected, "hull_dim": hcode.dim}
    if hcode.dim == 0:
        return out | {"status": FAILED if applicable else SKIPPED, "note": "hull is the zero code"}
    if not applicable and not _exhaustive_ok(hcode, cfg):
        return out | {"status": SKIPPED}
    mw = min_weight(hcode, cfg)
    out |= {"min_weight": mw.weight, "exact": mw.exact, "mode": mw.mode, "steps": mw.steps,
            "witness": {str(i): v for i, v in mw.witness.sparse().items()}}
    if k < n:
        diff = construct_weight_2qk(n, q, k)
        out["upper_witness_in_hull"] = hcode.contains(diff)
    if mw.weight < expected or (mw.exact and mw.weight != expected):
        out["status"] = FAILED
    else:
        out["status"] = PROVED if mw.exact else SEARCHED
    return out


def _run_dual_prime(n, q, k, cfg, applicable):
    dcode = dual(build_code(n, q, k))
    if not applicable and not _exhaustive_ok(dcode, cfg):
        return {"status": SKIPPED}
    rep = dual_min_weight_check(n, q, k, cfg)
    expected = 2 * prime_power(q)[0] ** (n - k)
    out = dict(rep)
    out["expected_min_weight"] = expected
    if rep["min_weight"] < expected:
        out["status"] = FAILED
    elif rep["exact"]:
        ok = rep["min_weight"] == expected and rep.get("all_structured", False)
        out["status"] = PROVED if ok else FAILED
    else:
        out["status"] = SEARCHED
    return out


def _identity_vectors(code, cfg: SearchConfig, samples: int) -> tuple[np.ndarray, bool]:
    if code.p**code.dim <= min(cfg.exhaustive_budget, 10**5):
        from .spectrum import _all_messages

        return code.encode(_all_messages(code.dim, code.p)), True
    rng = np.random.default_rng(cfg.seed)
    return code.random_codewords(samples, rng), False


def _run_identify(n, q, k, cfg, applicable, samples: int = 1000):
    code = build_code(n, q, k)
    words, exhaustive = _identity_vectors(code, cfg, samples)
    space = code.space
    in_dual_k = ~functional_values(words, space, [k], code.p).any(axis=1)
    in_dual_nk = ~functional_values(words, space, [n - k], code.p).any(axis=1)
    vanish = ~functional_values(words, space, range(n - k, n + 1), code.p).any(axis=1)
    in_hull = hull(code).contains(words)
    set_mismatch = int(np.count_nonzero(in_dual_k != in_dual_nk))
    hull_mismatch = int(np.count_nonzero(vanish != in_hull))
    out = {
        "codewords_checked": int(words.shape[0]),
        "mode": "exhaustive" if exhaustive else "sampled",
        "in_hull": int(np.count_nonzero(in_hull)),
        "difference_mismatches": set_mismatch,
        "hull_characterization_mismatches": hull_mismatch,
    }
    if set_mismatch or hull_mismatch:
        out["status"] = FAILED
    else:
        out["status"] = PROVED if exhaustive else SEARCHED
    return out


def _run_constant(n, q, k, cfg, applicable, samples: int = 1000):
    code = build_code(n, q, k)
    words, exhaustive = _identity_vectors(code, cfg, samples)
    vals = functional_values(words, code.space, range(n - k, n + 1), code.p)
    bad = int(np.count_nonzero(~np.all(vals == vals[:, :1], axis=1)))
    values = sorted({int(v) for v in vals[:, 0]})
    return {"codewords_checked": int(words.shape[0]), "mode": "exhaustive" if exhaustive else "sampled",
            "violations": bad, "constants_seen": values,
            "status": FAILED if bad else (PROVED if exhaustive else SEARCHED)}


STATEMENTS: dict[str, Statement] = {
    s.ident: s
    for s in [
        Statement("thm-main",
                  "No codeword of C_k(n,q) outside C_{n-k}(n,q)^perp has weight in ]theta_k, 2q^k[ (p > 5, 1 <= k <= n-1).",
                  ("p_gt_5", "n_ge_2", "k_in_range"),
                  _gap_statement(_main_interval, _exclusion_dual)),
        Statement("thm-12th7",
                  "No codeword of C_k(n,q) has weight in ]theta_k, (12 theta_k + c)/7[, c = 2 for p = 7, c = 6 for p > 7.",
                  ("p_ge_7", "n_ge_2", "k_in_range"),
                  _gap_statement(_thm12_interval, endpoints=False)),
        Statement("cor-identify",
                  "For k >= n/2: C_k minus C_{n-k}^perp equals C_k minus C_k^perp; a codeword lies in the hull "
                  "iff (c, U) = 0 for every subspace U with dim U >= n-k.",
                  ("k_ge_half", "k_in_range"),
                  _run_identify),
        Statement("cor-hyperplane",
                  "No codeword of C_{n-1}(n,q) has weight in ]theta_{n-1}, 2q^{n-1}[ (p > 5).",
                  ("p_gt_5", "n_ge_2", "hyperplane"),
                  _gap_statement(_main_interval)),
        Statement("cor-plane",
                  "No codeword of the code of points and lines of PG(2,q) has weight in ]q+1, 2q[ (p > 5).",
                  ("p_gt_5", "plane_lines"),
                  _gap_statement(_main_interval)),
        Statement("cor-prime",
                  "For q = p prime, p > 5: no codeword of C_k(n,p) has weight in ]theta_k, 2p^k[.",
                  ("q_prime", "p_gt_5", "n_ge_2", "k_in_range"),
                  _gap_statement(_main_interval)),
        Statement("res-prime-plane",
                  "For q = p prime: no codeword of C_1(2,p) has weight in [p+2, 2p-1].",
                  ("q_prime", "plane_lines"),
                  _gap_statement(_prime_plane_interval, endpoints=False)),
        Statement("res-dual-bound",
                  "The minimum weight of C_k(n,q)^perp is at least (12 theta_{n-k} + 2)/7 for p = 7 "
                  "and (12 theta_{n-k} + 6)/7 for p > 7.",
                  ("p_ge_7", "n_ge_2", "k_in_range"),
                  _run_dual_bound),
        Statement("res-hull",
                  "The minimum weight of C_{n-1}(n,q) ∩ C_{n-1}(n,q)^perp is 2q^{n-1}.",
                  ("n_ge_2", "hyperplane"),
                  _run_hull),
        Statement("res-dual-prime",
                  "For q = p prime the minimum weight of C_k(n,p)^perp is 2p^{n-k}, attained exactly by scalar "
                  "multiples of differences of two (n-k)-spaces meeting in an (n-k-1)-space.",
                  ("q_prime", "n_ge_2", "k_in_range"),
                  _run_dual_prime),
        Statement("lem-constant",
                  "For c in C_k(n,q), (c, U) takes one constant value over all subspaces U with dim U >= n-k.",
                  ("k_in_range",),
                  _run_constant),
    ]
}

ALIASES = {"dual-min": "res-dual-prime", "hull-min": "res-hull", "prime-plane": "res-prime-plane"}


def manifest() -> dict[str, str]:
    return {ident: s.text for ident, s in STATEMENTS.items()}


def _note(ident: str, n: int, q: int, k: int, flags: dict[str, bool], missing: list[str]) -> str | None:
    if not missing:
        return None
    p, h = prime_power(q)
    parts = [f"hypothesis not met: {', '.join(missing)}"]
    if "p_gt_5" in missing and ident in ("thm-main", "cor-plane", "cor-hyperplane", "cor-prime"):
        if h == 1 and n == 2 and k == 1:
            parts.append("this instance is covered by res-prime-plane (same integer interval)")
        elif h > 1:
            parts.append("open: for p <= 5 and h > 1 the gap is not settled by the known results")
    return "; ".join(parts)


def verify(ident: str, n: int, q: int, k: int | None = None, config: SearchConfig | None = None) -> dict:
    """Run one statement on the instance (n, q, k); k defaults to n - 1."""
    ident = ALIASES.get(ident, ident)
    if ident not in STATEMENTS:
        raise ParameterError(f"unknown statement id {ident!r}; known: {', '.join(STATEMENTS)}")
    k = n - 1 if k is None else k
    p, h = prime_power(q)
    if n < 1 or not 0 <= k <= n:
        raise ParameterError(f"invalid (n, k) = ({n}, {k})")
    cfg = config or SearchConfig()
    st = STATEMENTS[ident]
    flags = hypothesis_flags(n, q, k)
    missing = [f for f in st.requires if not flags[f]]
    applicable = not missing
    t0 = time.perf_counter()
    if not (n >= 2 and 1 <= k <= n - 1):
        result = {"status": SKIPPED}
    else:
        result = st.run(n, q, k, cfg, applicable)
    status = result.pop("status")
    report = {
        "schema": SCHEMA_VERSION,
        "id": ident,
        "statement": st.text,
        "instance": {"n": n, "p": p, "h": h, "q": q, "k": k},
        "hypotheses": {f: flags[f] for f in st.requires},
        "hypothesis_flags": flags,
        "hypotheses_met": applicable,
        "verdict": status if applicable else SKIPPED,
        "note": _note(ident, n, q, k, flags, missing),
    }
    if applicable:
        report["check"] = result
    else:
        report["observation"] = result | {"outcome": status}
    report["timing"] = {"wall_time_s": round(time.perf_counter() - t0, 3)}
    return report


def theorem_suite(n: int, q: int, k: int, config: SearchConfig | None = None) -> dict:
    """Every registered statement on one instance, with hypothesis gating."""
    cfg = config or SearchConfig()
    t0 = time.perf_counter()
    p, h = prime_power(q)
    results = {}
    for ident in STATEMENTS:
        rep = verify(ident, n, q, k, cfg)
        rep.pop("timing")
        results[ident] = rep
    return {
        "schema": SCHEMA_VERSION,
        "instance": {"n": n, "p": p, "h": h, "q": q, "k": k},
        "hypothesis_flags": hypothesis_flags(n, q, k),
        "results": results,
        "timing": {"wall_time_s": round(time.perf_counter() - t0, 3)},
    }


def report_body(report: dict) -> dict:
    """The report without its timing block (the part that must be reproducible)."""
    return {key: val for key, val in report.items() if key != "timing"}
