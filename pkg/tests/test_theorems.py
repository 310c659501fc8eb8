from __future__ import annotations

import json

import pytest

from pgcodes.errors import ParameterError
from pgcodes.spectrum import SearchConfig
from pgcodes.theorems import (
    ALIASES,
    EXIT_CODES,
    FAILED,
    PROVED,
    SEARCHED,
    SKIPPED,
    STATEMENTS,
    hypothesis_flags,
    manifest,
    report_body,
    theorem_suite,
    verify,
)

QUICK = SearchConfig(budget_steps=30_000, samples=5_000, seed=1)


def test_exit_codes():
    assert EXIT_CODES == {PROVED: 0, SKIPPED: 0, FAILED: 1, SEARCHED: 2}


def test_flags():
    f = hypothesis_flags(2, 7, 1)
    assert f["p_gt_5"] and f["p_eq_7"] and not f["p_gt_7"] and f["plane_lines"]
    g = hypothesis_flags(3, 9, 1)
    assert not g["q_prime"] and not g["k_ge_half"] and not g["hyperplane"]


def test_manifest_and_aliases():
    ids = manifest()
    assert set(ids) == set(STATEMENTS)
    for alias, target in ALIASES.items():
        assert verify(alias, 2, 3, 1)["id"] == target
    with pytest.raises(ParameterError):
        verify("no-such-thing", 2, 3, 1)


def test_suite_on_plane_of_order_three():
    rep = theorem_suite(2, 3, 1)
    res = rep["results"]
    assert res["res-prime-plane"]["verdict"] == PROVED
    assert res["res-hull"]["verdict"] == PROVED
    assert res["res-hull"]["check"]["min_weight"] == 6
    assert res["res-dual-prime"]["check"]["all_structured"]
    assert res["cor-identify"]["check"]["hull_characterization_mismatches"] == 0
    assert res["lem-constant"]["check"]["violations"] == 0
    main = res["thm-main"]
    assert main["verdict"] == SKIPPED and not main["hypotheses_met"]
    assert "res-prime-plane" in main["note"]
    assert main["observation"]["outcome"] == PROVED
    # p = 3 lies outside the 12/7 statement; the observation may find weights there
    assert res["thm-12th7"]["verdict"] == SKIPPED


def test_open_case_note():
    rep = verify("thm-main", 2, 4, 1)
    assert rep["verdict"] == SKIPPED
    assert rep["note"].startswith("hypothesis not met") and "open" in rep["note"]


def test_degenerate_k_is_skipped():
    rep = verify("lem-constant", 2, 3, 0)
    assert rep["verdict"] == SKIPPED


def test_budgeted_instance_reads_searched():
    rep = verify("cor-plane", 2, 7, 1, QUICK)
    assert rep["hypotheses_met"]
    assert rep["verdict"] == SEARCHED
    gap = rep["check"]["gap"]
    assert gap["mode"] == "budgeted" and gap["verdict"] == "empty"
    ends = rep["check"]["endpoints"]
    assert ends["lower"]["weight"] == 8 and ends["upper"]["weight"] == 14
    assert ends["lower"]["in_code"] and ends["upper"]["in_code"]


def test_main_statement_excludes_dual():
    rep = verify("thm-main", 2, 7, 1, QUICK)
    assert rep["check"]["gap"]["restriction"].startswith("outside")
    assert rep["check"]["endpoints"]["upper"]["in_exclusion"]


def test_report_body_is_reproducible():
    a = report_body(verify("cor-plane", 2, 7, 1, QUICK))
    b = report_body(verify("cor-plane", 2, 7, 1, QUICK))
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert "timing" not in a


def test_dual_bound_on_order_seven():
    rep = verify("res-dual-bound", 2, 7, 1, QUICK)
    chk = rep["check"]
    assert rep["verdict"] in (PROVED, SEARCHED)
    assert chk["bound"] == 14 and chk["min_weight"] == 14
