from __future__ import annotations

import itertools

import pytest

from polybound.analysis import _Analyzer, Options, analyze
from polybound.cycles import cycle_local_bounds
from polybound.frontend import load
from polybound.interp import explore_runs
from polybound import smt
from polybound.ir import Bound, bound_sum, classify, from_poly_abs, var
from polybound.twn.loops import loop_of_transition
from polybound.twn_bounds import join, sth_bound
from loop_fixtures import corpus, corpus_files


@pytest.fixture(scope="module")
def twn_nest():
    return analyze(corpus("twn_nest"))


def test_twn_nest_bounds(twn_nest):
    rb = twn_nest.runtime
    assert rb["t0"] == Bound.const(1)
    assert rb["t1"] == rb["t2"] == rb["t4"] == Bound.var("x4")
    assert rb["t5"] == Bound.var("x4") * (Bound.const(8) * Bound.var("x5") + Bound.const(13006))
    assert twn_nest.complexity.big_o() == "O(n^2)"


def test_twn_nest_t3_counts_the_final_visit(twn_nest):
    # l1 -> l2 is taken once more after x4 has reached 0
    assert twn_nest.runtime["t3"] == Bound.var("x4") + Bound.const(1)


def test_twn_nest_split_bounds():
    res = analyze(corpus("twn_nest_split"))
    want = Bound.var("x4") * (Bound.const(8) * Bound.var("x5") + Bound.const(13008))
    assert res.runtime["t5"] == res.runtime["t6"] == want
    assert res.complexity.big_o() == "O(n^2)"


def test_standalone_tnn_loop_gets_its_threshold_bound():
    p = corpus("square_root")
    res = analyze(p, technique="twn")
    assert res.runtime["t0"] == Bound.const(1)
    assert res.runtime["t1"] == sth_bound(loop_of_transition(p["t1"]))[0]


def test_per_entry_bounds_beat_a_shared_bound(twn_nest):
    p = corpus("twn_nest")
    locals_ = cycle_local_bounds(p, [p["t5"]])
    shared = join(
        [var("x2") * 4 + var("x3") ** 3 * 4 + var("x3") ** 5 * 4 + 3, var("x2") * 4 + 3]
    )
    shared_b = from_poly_abs(shared)
    assert all(shared_b.evaluate({"x2": 2, "x3": 2}) >= eb.bound.evaluate({"x2": 2, "x3": 2}) for eb in locals_.values())
    an = _Analyzer(p, Options(), smt.default_solver())
    an.rb, an.sb = dict(twn_nest.runtime), dict(twn_nest.size)
    entries = [p["t1"], p["t4"]]
    lifted_shared = an.lift(entries, lambda r: shared_b)
    lifted_each = an.lift(entries, lambda r: locals_[r.id].bound)
    assert classify(lifted_each).big_o() == "O(n^2)"
    assert classify(lifted_shared).big_o() == "O(n^6)"


def test_rf_only_leaves_the_non_linear_loop_unbounded():
    res = analyze(corpus("twn_nest"), technique="rf")
    assert res.runtime["t5"].is_omega()
    assert res.complexity.big_o() == "INF"


def test_twn_alone_cannot_bound_twn_nest():
    # t5 re-enters the outer cycle, so neither loop gets a finite entry bound
    res = analyze(corpus("twn_nest"), technique="twn")
    assert all(res.runtime[t].is_omega() for t in ("t1", "t2", "t5"))


def test_unknown_technique():
    with pytest.raises(ValueError):
        analyze(corpus("countdown"), technique="magic")


def test_nested_loops_are_quadratic():
    res = analyze(corpus("nested"))
    assert res.complexity.big_o() == "O(n^2)"


def test_deterministic():
    a = analyze(corpus("twn_nest_split"))
    b = analyze(corpus("twn_nest_split"))
    assert {k: str(v) for k, v in a.runtime.items()} == {k: str(v) for k, v in b.runtime.items()}
    assert a.proof == b.proof


def test_second_pass_never_worsens():
    for name in ("twn_nest", "nested", "outer_twn", "linear_then_twn"):
        p = corpus(name)
        one = analyze(p, passes=1)
        two = analyze(p, passes=2)
        assert all(classify(two.runtime[t]) <= classify(one.runtime[t]) for t in one.runtime)


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.stem)
def test_overall_bound_covers_every_run(path):
    p = load(str(path))
    res = analyze(p)
    radius = 2 if len(p.pv) >= 4 else 3
    for vals in itertools.product(range(-radius, radius + 1), repeat=len(p.pv)):
        s0 = dict(zip(p.pv, vals))
        stats = explore_runs(p, s0)
        assert not stats.truncated
        sizes = {v: abs(n) for v, n in s0.items()}
        assert res.overall.evaluate(sizes) >= sum(stats.max_counts.values())


def test_overall_is_sum_of_transitions(twn_nest):
    assert twn_nest.overall == bound_sum(twn_nest.runtime.values())
