from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pgcodes.errors import BudgetExceeded, ParameterError
from pgcodes.galois import make_field
from pgcodes.geometry import (
    ProjectivePoint,
    ProjectiveSpace,
    Subspace,
    count_subspaces,
    enumerate_points,
    enumerate_subspaces,
    field_rref,
    gaussian_binomial,
    incident,
    meet,
    projective_space,
    span,
    theta,
)


def _brute_subspace_count(n: int, p: int, d: int) -> int:
    """Distinct spans of (d+1)-tuples of vectors over a prime field, counted as point sets."""
    vecs = [v for v in itertools.product(range(p), repeat=n + 1) if any(v)]
    seen = set()
    for tup in itertools.combinations(vecs, d + 1):
        pts = set()
        for coef in itertools.product(range(p), repeat=d + 1):
            w = tuple(sum(c * x for c, x in zip(coef, col)) % p for col in zip(*tup))
            if any(w):
                lead = next(x for x in w if x)
                inv = pow(lead, p - 2, p)
                pts.add(tuple(x * inv % p for x in w))
        if len(pts) == theta(d, p):
            seen.add(frozenset(pts))
    return len(seen)


def test_theta_values():
    assert theta(2, 3) == 13
    assert theta(2, 2) == 7
    assert theta(-1, 5) == 0
    assert theta(0, 9) == 1
    assert all(theta(m, q) % prime == 1 for m in range(4) for q, prime in [(4, 2), (9, 3), (7, 7)])


@pytest.mark.parametrize("n,p,d", [(2, 2, 1), (2, 3, 1), (3, 2, 1), (3, 2, 2), (3, 3, 1)])
def test_counts_match_brute_force(n, p, d):
    assert count_subspaces(n, p, d) == _brute_subspace_count(n, p, d)
    assert len(projective_space(n, p).subspaces(d)) == count_subspaces(n, p, d)


def test_gaussian_binomial_symmetry_and_known():
    assert gaussian_binomial(4, 2, 2) == 35
    for n in range(6):
        for k in range(n + 1):
            assert gaussian_binomial(n, k, 3) == gaussian_binomial(n, n - k, 3)


@pytest.mark.parametrize("n,q", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (2, 9), (4, 2)])
def test_duality_and_regularity(n, q):
    s = projective_space(n, q)
    assert s.num_points == theta(n, q)
    for d in range(n):
        assert s.count(d) == s.count(n - 1 - d)
        inc = s.incidence(d)
        assert inc.shape == (count_subspaces(n, q, d), theta(n, q))
        assert np.all(inc.sum(axis=1) == theta(d, q))
        # each point is on the same number of d-spaces: count of (d-1)-spaces in the quotient
        assert np.all(inc.sum(axis=0) == count_subspaces(n - 1, q, d - 1) if d else inc.sum(axis=0) == 1)


@pytest.mark.parametrize("n,q,d", [(2, 3, 1), (3, 2, 1), (3, 2, 2), (2, 4, 1)])
def test_double_count(n, q, d):
    inc = projective_space(n, q).incidence(d)
    assert inc.sum() == count_subspaces(n, q, d) * theta(d, q)
    # two distinct points lie on count(n-2, d-2) common d-spaces
    if d >= 1:
        common = inc[:, 0].astype(int) @ inc[:, 1].astype(int)
        assert common == count_subspaces(n - 2, q, d - 2) if d >= 2 else common == 1


def test_point_order_is_canonical():
    s = projective_space(2, 3)
    pts = [tuple(int(x) for x in row) for row in s.points]
    assert pts == sorted(pts)
    assert pts[0] == (0, 0, 1)
    for row in pts:
        assert next(x for x in row if x) == 1
    assert [tuple(p.coords) for p in enumerate_points(2, 3)] == pts


def test_lookup_handles_scalar_multiples():
    s = projective_space(2, 4)
    f = s.field
    rng = np.random.default_rng(1)
    for i in rng.integers(0, s.num_points, 30):
        for lam in range(1, 4):
            v = f.mul_arr(np.full(3, lam), s.points[i])
            assert s.index_of(v) == i


def test_rref_canonical_form():
    f = make_field(3, 2)
    rows = [(1, 2, 3), (4, 5, 6)]
    a = field_rref(f, rows)
    # same space from a different generating set
    combo = [tuple(int(x) for x in f.add_arr(np.array(rows[0]), f.mul_arr(np.full(3, 7), np.array(rows[1])))), rows[1]]
    assert field_rref(f, combo) == a
    assert Subspace.from_rows(f, rows) == Subspace.from_rows(f, combo)


def test_subspace_index_roundtrip():
    s = projective_space(3, 2)
    subs = s.subspaces(1)
    for i in (0, 7, 34):
        assert s.subspace_index(subs[i]) == i
    bases = [sub.flat() for sub in subs]
    assert bases == sorted(bases)
    assert enumerate_subspaces(3, 2, 1) == subs


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_span_meet_dimension_formula(data):
    q = data.draw(st.sampled_from([2, 3, 4]))
    n = 3
    s = projective_space(n, q)
    da, db = data.draw(st.integers(0, 2)), data.draw(st.integers(0, 2))
    a = s.subspaces(da)[data.draw(st.integers(0, s.count(da) - 1))]
    b = s.subspaces(db)[data.draw(st.integers(0, s.count(db) - 1))]
    j = span(a, b)
    m = meet(a, b)
    dm = -1 if m is None else m.dim
    assert j.dim + dm == a.dim + b.dim
    pa, pb = set(s.points_of(a)), set(s.points_of(b))
    assert set(s.points_of(m)) == pa & pb if m is not None else not (pa & pb)
    assert pa | pb <= set(s.points_of(j))


def test_incident():
    f = make_field(2)
    line = Subspace.from_rows(f, [(1, 0, 0), (0, 1, 0)])
    assert incident(ProjectivePoint.from_coords(f, (1, 1, 0)), line)
    assert not incident(ProjectivePoint.from_coords(f, (0, 0, 1)), line)


def test_mismatched_spaces_raise():
    a = Subspace.from_rows(make_field(2), [(1, 0, 0)])
    b = Subspace.from_rows(make_field(3), [(1, 0, 0)])
    c = Subspace.from_rows(make_field(2), [(1, 0, 0, 0)])
    with pytest.raises(ParameterError):
        span(a, b)
    with pytest.raises(ParameterError):
        meet(a, c)


def test_cell_budget_guard():
    s = ProjectiveSpace(3, make_field(3), cell_budget=100)
    with pytest.raises(BudgetExceeded):
        s.incidence(1)


def test_csv_exports(tmp_path):
    s = projective_space(2, 2)
    s.write_points_csv(tmp_path / "pts.csv")
    s.write_subspaces_csv(1, tmp_path / "lines.csv")
    assert len((tmp_path / "pts.csv").read_text().strip().splitlines()) == 1 + 7
    assert len((tmp_path / "lines.csv").read_text().strip().splitlines()) == 1 + 7
