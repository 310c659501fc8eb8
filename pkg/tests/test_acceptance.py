"""Acceptance gate: one test per criterion, each with its time limit.

Run `pytest tests/test_acceptance.py` (the PASS/FAIL table is printed in the
terminal summary) or `python tests/test_acceptance.py`.
"""

from __future__ import annotations

import json
import sys
import time
from contextlib import contextmanager

import numpy as np

from pgcodes.blocking import (
    B_of,
    PointSet,
    certify,
    desarguesian_spread,
    linear_blocking_set,
    span_closure,
    subspace_set,
)
from pgcodes.codes import Codeword, build_code, dual, functional_values, hull
from pgcodes.geometry import Subspace, count_subspaces, projective_space, theta
from pgcodes.spectrum import SearchConfig, codewords_of_weight, full_spectrum, naive_spectrum, subspace_differences
from pgcodes.theorems import SEARCHED, report_body, verify

try:
    from conftest import ACCEPTANCE
except ImportError:  # imported as a plain script from elsewhere
    ACCEPTANCE = {}

SEARCH_10 = SearchConfig(budget_steps=10**7, samples=10**6, seed=2024)


@contextmanager
def criterion(num: int, limit_s: float, label: str):
    t0 = time.perf_counter()
    try:
        yield
    except Exception as exc:
        ACCEPTANCE[num] = (False, f"{label}: {type(exc).__name__}: {exc}")
        raise
    elapsed = time.perf_counter() - t0
    ok = elapsed < limit_s
    ACCEPTANCE[num] = (ok, f"{label} ({elapsed:.2f} s, limit {limit_s:g} s)")
    assert ok, f"criterion {num} took {elapsed:.2f} s > {limit_s} s"


def test_criterion_01_geometry_counts():
    with criterion(1, 1.0, "PG(2,3): 13 points, 13 lines; PG(3,2): 35 lines"):
        s = projective_space(2, 3)
        assert theta(2, 3) == 13 == s.num_points
        assert len(s.subspaces(1)) == 13
        assert len(projective_space(3, 2).subspaces(1)) == 35 == count_subspaces(3, 2, 1)


def test_criterion_02_fano():
    with criterion(2, 1.0, "C_1(2,2): dim 4, spectrum {0:1,3:7,4:7,7:1}"):
        c = build_code(2, 2, 1)
        assert c.dim == 4
        dist = full_spectrum(c)
        assert dist.total == 16
        assert dist.counts == {0: 1, 3: 7, 4: 7, 7: 1} == naive_spectrum(c)


def test_criterion_03_plane_order_three():
    with criterion(3, 1.0, "C_1(2,3): no weight 5, weight 4 only on line multiples, weight 6 present"):
        c = build_code(2, 3, 1)
        dist = full_spectrum(c)
        assert dist.total == 3**7 == 2187
        assert dist[5] == 0
        assert dist.min_nonzero() == 4
        lines = {Codeword.incidence(r, c.length, 3) for r in c.space.point_sets(1)}
        assert {w.canonical() for w in codewords_of_weight(c, 4)} == lines
        assert dist[6] > 0
        l1, l2 = (Codeword.incidence(r, c.length, 3) for r in c.space.point_sets(1)[:2])
        assert (l1 - l2).weight == 6 and c.contains(l1 - l2)


def test_criterion_04_dual_minimum():
    with criterion(4, 1.0, "C_1(2,3)^perp: min weight 6, every minimum word is a(L1 - L2)"):
        d = dual(build_code(2, 3, 1))
        assert d.dim == 6
        dist = full_spectrum(d)
        assert dist.total == 729 and dist.min_nonzero() == 6 == 2 * 3
        words = codewords_of_weight(d, 6)
        diffs = subspace_differences(2, 3, 1)
        assert len(words) == dist[6]
        assert all(w.canonical() in diffs for w in words)


def test_criterion_05_hull():
    with criterion(5, 1.0, "hull of C_1(2,3): min weight 6"):
        h = hull(build_code(2, 3, 1))
        assert full_spectrum(h).min_nonzero() == 6 == 2 * 3


def test_criterion_06_constant_functional():
    with criterion(6, 10.0, "(c,U) constant for dim U >= n-k on 1000 codewords each of C_1(2,3), C_2(3,2)"):
        rng = np.random.default_rng(6)
        for n, q, k in [(2, 3, 1), (3, 2, 2)]:
            c = build_code(n, q, k)
            words = c.random_codewords(1000, rng)
            vals = functional_values(words, c.space, range(n - k, n + 1), c.p)
            violations = int(np.count_nonzero(~np.all(vals == vals[:, :1], axis=1)))
            assert violations == 0


def test_criterion_07_hull_characterization():
    with criterion(7, 10.0, "hull membership iff (c,U)=0 for dim U >= n-k, 1000 codewords of C_1(2,3)"):
        c = build_code(2, 3, 1)
        words = c.random_codewords(1000, np.random.default_rng(7))
        vanish = ~functional_values(words, c.space, range(1, 3), 3).any(axis=1)
        in_hull = hull(c).contains(words)
        assert np.array_equal(vanish, in_hull)
        assert in_hull.any() and not in_hull.all()


def test_criterion_08_spread():
    with criterion(8, 5.0, "1-spread of PG(3,3), 45 closed pairs, B(reduced image) round trips"):
        sp = desarguesian_spread(1, 3, 2)
        assert len(sp.elements) == 10 and sp.ambient.num_points == 40
        assert sp.check_partition()
        pairs = [(i, j) for i in range(10) for j in range(i + 1, 10)]
        assert len(pairs) == 45 and all(span_closure(sp, i, j) for i, j in pairs)
        flat = desarguesian_spread(2, 3, 1)
        lines = flat.base.subspaces(1)
        assert len(lines) == 13
        assert all(B_of(flat.reduced_image(l), flat) == subspace_set(flat.base, l) for l in lines)
        from pgcodes.geometry import span

        joined = span(sp.elements[0], sp.elements[1])
        whole = B_of(joined, sp)
        # two points of PG(1,9) span the whole line: theta_1(9) = 10 points
        assert len(whole) == theta(1, 9) == 10


def test_criterion_09_residues():
    with criterion(9, 60.0, "residues in {0,1} mod p: lines of PG(2,3), planes of PG(3,2), B(U) in PG(2,9)"):
        plane = projective_space(2, 3)
        for row in plane.point_sets(1):
            rep = certify(PointSet(plane, tuple(row)), 1)
            assert rep.is_small and rep.is_minimal and set(rep.residue_histogram) <= {0, 1}
        solid = projective_space(3, 2)
        for row in solid.point_sets(2):
            rep = certify(PointSet(solid, tuple(row)), 2)
            assert rep.is_small and rep.is_minimal and set(rep.residue_histogram) <= {0, 1}
        sp = desarguesian_spread(2, 3, 2)
        u = Subspace.from_rows(sp.ambient.field, [[1, 0, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0], [0, 0, 0, 0, 1, 0]])
        pts, rep = linear_blocking_set(2, 3, 2, 1, u, sp)
        assert len(pts) == 13 and rep.is_small and rep.is_minimal
        assert sum(rep.per_dim[1].values()) == 91
        assert set(rep.per_dim[1]) <= {0, 1}
        assert set(rep.residue_histogram) <= {0, 1}


_REPORTS: list[dict] = []


def _budgeted_report() -> dict:
    return verify("cor-plane", 2, 7, 1, SEARCH_10)


def test_criterion_10_budgeted_plane_of_order_seven():
    with criterion(10, 300.0, "C_1(2,7): 10^7 seeded steps, nothing in ]8,14[, endpoints 8 and 14"):
        rep = _budgeted_report()
        _REPORTS.append(rep)
        gap = rep["check"]["gap"]
        assert gap["integer_weights"] == [9, 13]
        assert gap["steps"] == 10**7 and gap["mode"] == "budgeted"
        assert gap["verdict"] == "empty"
        ends = rep["check"]["endpoints"]
        assert ends["lower"]["weight"] == 8 and ends["lower"]["in_code"]
        assert ends["upper"]["weight"] == 14 and ends["upper"]["in_code"]
        assert rep["verdict"] == SEARCHED == "searched-no-counterexample"


def test_criterion_11_determinism():
    with criterion(11, 600.0, "repeated seeded search gives a byte-identical report body"):
        first = _REPORTS[0] if _REPORTS else _budgeted_report()
        second = _budgeted_report()
        a = json.dumps(report_body(first), sort_keys=True).encode()
        b = json.dumps(report_body(second), sort_keys=True).encode()
        assert a == b


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted((k, v) for k, v in dict(globals()).items() if k.startswith("test_criterion_")):
        try:
            fn()
        except Exception:
            failed += 1
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        print(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    sys.exit(1 if failed else 0)
