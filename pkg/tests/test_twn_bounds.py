from __future__ import annotations

import itertools
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from polybound.interp import reachable_edges
from polybound.ir import Polynomial, compare, const, from_poly_abs, holds, var
from polybound.ir import formula as fm
from polybound.twn.closed_form import closed_form
from polybound.twn.loops import loop_of_transition, recognize_twn, square
from polybound.twn.npe import NPE, subst_npe
from polybound.twn_bounds import (
    check_update_invariant,
    join,
    local_bound_twn,
    monotonicity_threshold,
    select_kernel,
    sth_bound,
    synthesize_update_invariant,
)
from loop_fixtures import corpus

x, x1, x2, x3 = var("x"), var("x1"), var("x2"), var("x3")
POS_X3 = compare(x3, ">", 0)


def nest_square(psi=fm.TRUE):
    return square(loop_of_transition(corpus("twn_nest")["t5"])).with_psi(psi)


def main_atom_npe(loop):
    atom = fm.normalize(compare(x1**2 + x3**5, "<", x2))
    return subst_npe(atom.poly, closed_form(loop).cl).integerized()


class TestThresholds:
    def test_known_values(self):
        assert monotonicity_threshold(1, (4, 0), (3, 1)) == 7
        assert monotonicity_threshold(1, (9, 0), (1, 1)) == 0
        assert monotonicity_threshold(1, (16, 0), (9, 1)) == 0
        assert monotonicity_threshold(1, (9, 0), (1, 0)) == 1
        assert monotonicity_threshold(1, (1, 0), (0, 0)) == 0

    @given(
        st.integers(1, 5),
        st.tuples(st.integers(0, 6), st.integers(0, 3)),
        st.tuples(st.integers(0, 6), st.integers(0, 3)),
    )
    @settings(max_examples=150, deadline=None)
    def test_minimal_and_permanent(self, k, p, q):
        hi, lo = max(p, q), min(p, q)
        if hi == lo or hi[0] == 0:
            return
        (b1, a1), (b2, a2) = hi, lo
        pw = lambda b, n: 0 if b == 0 else b**n  # noqa: E731
        holds_at = lambda n: n**a1 * pw(b1, n) > k * n**a2 * pw(b2, n)  # noqa: E731
        n0 = monotonicity_threshold(k, hi, lo)
        assert all(holds_at(n) for n in range(n0, n0 + 300))
        if n0 > 0:
            assert not holds_at(n0 - 1)


class TestJoin:
    def test_examples(self):
        assert join([x3**3 - x3**5, x2 - x3**3]) == x2 + x3**3 + x3**5
        assert join([-3 * x + 2]) == 3 * x + 2
        assert join([]) == Polynomial()

    @given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=1, max_size=4), st.tuples(*[st.integers(-5, 5)] * 2))
    @settings(max_examples=200)
    def test_dominates_absolute_values(self, coeffs, point):
        ps = [c0 + c1 * x1 + c2 * x1 * x2**2 for c0, c1, c2 in coeffs]
        s = {"x1": point[0], "x2": point[1]}
        abs_s = {v: abs(n) for v, n in s.items()}
        assert all(join(ps).evaluate(abs_s) >= abs(p.evaluate(s)) for p in ps)


class TestKernel:
    def test_integerize(self):
        npe = NPE.term(x.scale(Fraction(1, 2)), 0, 2) + NPE.term(const(Fraction(1, 3)), 1, 1)
        assert npe.integerized() == NPE.term(3 * x, 0, 2) + NPE.term(const(2), 1, 1)
        loop = nest_square()
        atom = fm.normalize(compare(x1**2 + x3**5, "<", x2))
        raw = subst_npe(atom.poly, closed_form(loop).cl)
        assert raw.integerized() == raw

    def test_with_positive_x3(self):
        loop = nest_square(POS_X3)
        k = select_kernel(main_atom_npe(loop), fm.conj(POS_X3, loop.guard))
        assert str(k.npe) == "(-x1^2)*16^n + (x2)*9^n"
        assert [(str(p), a, b, tgt) for (p, a, b), tgt in k.delta] == [("x3^3", 0, 1, (9, 0))]
        assert [(str(p), a, b, tgt) for (p, a, b), tgt in k.gamma] == [("-x3^5", 0, 1, (0, 0))]
        assert k.d == 1

    def test_without_invariant_nothing_moves(self):
        loop = nest_square()
        npe = main_atom_npe(loop)
        k = select_kernel(npe, loop.guard)
        assert k.npe == npe and not k.delta and not k.gamma and k.d == 0

    def test_kernel_is_an_over_approximation(self):
        loop = nest_square(POS_X3)
        npe = main_atom_npe(loop)
        ctx = fm.conj(POS_X3, loop.guard)
        k = select_kernel(npe, ctx)
        for vals in itertools.product(range(-4, 5), repeat=3):
            e = dict(zip(("x1", "x2", "x3"), vals))
            if holds(ctx, e):
                assert all(k.npe.evaluate(e, n) >= npe.evaluate(e, n) for n in range(k.d, k.d + 51))


class TestSthBounds:
    def test_nest_square_without_invariant(self):
        b, der = sth_bound(nest_square())
        assert str(b) == "2*x3^5 + 2*x3^3 + 2*x2 + 1"
        assert der.c == 1

    def test_nest_square_with_invariant(self):
        b, der = sth_bound(nest_square(POS_X3))
        assert str(b) == "2*x2 + 1"
        assert der.d == 1
        side = [a for a in der.atoms if a.atom.poly.degree() == 1]
        assert len(side) == 2 and all(a.c == 1 and a.pol == () for a in side)

    def test_local_bounds(self):
        t5 = loop_of_transition(corpus("twn_nest")["t5"])
        assert local_bound_twn(t5).bound == from_poly_abs(4 * x2 + 4 * x3**3 + 4 * x3**5 + 3)
        assert local_bound_twn(t5.with_psi(POS_X3)).bound == from_poly_abs(4 * x2 + 3)

    def test_non_terminating_gives_omega(self):
        loop = recognize_twn(compare(x, ">", 0), {"x": x + 1})
        assert local_bound_twn(loop).bound.is_omega()

    def test_tnn_loop_bound_is_sth(self):
        loop = recognize_twn(compare(x, ">", 0), {"x": x - 1})
        res = local_bound_twn(loop)
        assert res.note == "tnn loop"
        assert res.bound == sth_bound(loop)[0]


class TestUpdateInvariant:
    def test_twn_nest_entries(self):
        p = corpus("twn_nest")
        order = loop_of_transition(p["t5"]).order
        assert synthesize_update_invariant(p["t5"], p["t1"], order) == fm.normalize(POS_X3)
        assert synthesize_update_invariant(p["t5"], p["t4"], order) == fm.TRUE
        assert synthesize_update_invariant(p["t5"], p["t0"], order) == fm.TRUE

    def test_invariants_hold_on_reachable_states(self):
        p = corpus("twn_nest")
        order = loop_of_transition(p["t5"]).order
        for r in (p["t1"], p["t4"]):
            psi = synthesize_update_invariant(p["t5"], r, order)
            assert check_update_invariant(psi, p["t5"].update) == psi
            for vals in itertools.product(range(-2, 3), repeat=5):
                edges, _ = reachable_edges(p, dict(zip(p.pv, vals)))
                for tid, _, post in edges:
                    if tid == r.id:
                        assert holds(psi, post)

    def test_check_rejects_non_invariant(self):
        assert check_update_invariant(compare(x, ">", 0), {"x": x - 1}) == fm.TRUE
