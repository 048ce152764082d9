from __future__ import annotations

import itertools

from hypothesis import given, settings
from hypothesis import strategies as st

from polybound.frontend import parse_its
from polybound.interp import Verdict, check_bound_soundness, explore_runs, max_post_sizes, run_trace
from polybound.ir import Bound, ZERO
from loop_fixtures import corpus

COUNTDOWN = corpus("countdown")

SPIN = parse_its(
    """(GOAL COMPLEXITY)
(STARTTERM (FUNCTIONSYMBOLS l0))
(VAR x)
(RULES
  l0(x) -> l1(x)
  l1(x) -> l1(x+1) :|: x > 0
)"""
)

DEAD = parse_its(
    """(GOAL COMPLEXITY)
(STARTTERM (FUNCTIONSYMBOLS l0))
(VAR x)
(RULES
  l0(x) -> l1(x) :|: x > 0 && x < 0
)"""
)

CHOICE = parse_its(
    """(GOAL COMPLEXITY)
(STARTTERM (FUNCTIONSYMBOLS l0))
(VAR x)
(RULES
  l0(x) -> l1(u) :|: u >= 0
  l1(x) -> l1(x-1) :|: x > 0
)"""
)


def test_twn_nest_trace_prefix():
    p = corpus("twn_nest")
    trace = run_trace(p, dict(zip(p.pv, (5, 7, 1, 1, 3))), ["t0", "t1", "t5", "t5", "t5"])
    loc, state = trace[-1]
    assert loc == "l3"
    assert tuple(state[v] for v in p.pv) == (-8, 55, 1, 1, 3)


def test_countdown_count():
    stats = explore_runs(COUNTDOWN, {"x": 3})
    assert stats.max_counts["t1"] == 3 and not stats.truncated


def test_unsatisfiable_guard():
    stats = explore_runs(DEAD, {"x": 1})
    assert stats.max_counts == {"t0": 0}
    assert stats.runs == 1


def test_temporaries_branch_over_range():
    stats = explore_runs(CHOICE, {"x": 0}, temp_range=(-2, 2))
    assert stats.max_counts["t1"] == 2
    wider = explore_runs(CHOICE, {"x": 0}, temp_range=(-4, 4))
    assert wider.max_counts["t1"] == 4


def test_soundness_verdicts():
    ok = {"t0": Bound.const(1), "t1": Bound.var("x")}
    assert check_bound_soundness(COUNTDOWN, ok, {"x": 3}).verdict is Verdict.PASS
    bad = check_bound_soundness(COUNTDOWN, {"t0": ZERO, "t1": Bound.var("x")}, {"x": 3})
    assert bad.verdict is Verdict.FAIL and bad.violations == [("t0", 1, 0)]


def test_truncation_is_never_pass():
    rep = check_bound_soundness(COUNTDOWN, {"t1": Bound.var("x")}, {"x": 50}, depth_cap=1)
    assert rep.verdict is Verdict.INCONCLUSIVE


def test_non_termination_is_inconclusive():
    rep = check_bound_soundness(SPIN, {"t0": Bound.const(1), "t1": Bound.omega()}, {"x": 1}, depth_cap=500)
    assert rep.verdict is Verdict.INCONCLUSIVE
    assert rep.stats.truncated


def test_violation_under_truncation_still_fails():
    rep = check_bound_soundness(SPIN, {"t1": Bound.const(3)}, {"x": 1}, depth_cap=100)
    assert rep.verdict is Verdict.FAIL


def test_twn_nest_t3_needs_the_extra_iteration():
    # with x4 = 0 the loop l1 -> l2 is still taken once, so x4 alone is not a bound
    p = corpus("twn_nest")
    claimed = {"t3": Bound.var("x4")}
    rep = check_bound_soundness(p, claimed, dict(zip(p.pv, (0, 0, 1, 0, 0))))
    assert rep.verdict is Verdict.FAIL
    assert rep.violations == [("t3", 1, 0)]
    assert explore_runs(p, dict(zip(p.pv, (0, 0, 1, 3, 0)))).max_counts["t3"] == 4


def test_post_sizes():
    sizes, truncated = max_post_sizes(COUNTDOWN, {"x": -2})
    assert not truncated and sizes == {("t0", "x"): 2}


@given(st.tuples(*[st.integers(-3, 3)] * 5))
@settings(max_examples=25, deadline=None)
def test_exploration_is_deterministic(vals):
    p = corpus("twn_nest")
    s = dict(zip(p.pv, vals))
    assert explore_runs(p, s) == explore_runs(p, s)


def test_caps_are_monotone():
    for x in range(0, 6):
        small = explore_runs(CHOICE, {"x": x}, temp_range=(-1, 1))
        big = explore_runs(CHOICE, {"x": x}, temp_range=(-3, 3))
        assert all(big.max_counts[t] >= c for t, c in small.max_counts.items())
    for cap, x in itertools.product((2, 5, 50), range(8)):
        a = explore_runs(COUNTDOWN, {"x": x}, depth_cap=cap).max_counts
        b = explore_runs(COUNTDOWN, {"x": x}, depth_cap=cap * 2).max_counts
        assert all(b[t] >= a[t] for t in a)
