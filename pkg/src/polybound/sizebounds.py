"""Size bounds: ``|v|`` after taking a transition, in terms of initial sizes.

Each entry is computed from the sizes before the transition, which come from
(a) constant bounds in its own guard, (b) the initial value for variables no
transition changes, or (c) the sum of the distinct size bounds of its
predecessors.  An update whose guard implies ``|v'| <= |v|`` keeps the
pre-state size of ``v``.  The table is iterated to a fixed point from zero; entries
still changing after a fixed number of rounds are widened to omega.  Any
table that reproduces itself under this step (omega entries aside) bounds
every reachable size, by induction on run length.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping

from . import smt
from .ir import formula as fm
from .ir.bounds import OMEGA, ZERO, Bound, bound_sum, classify, from_poly_abs
from .ir.poly import Polynomial
from .ir.program import Program, Transition
from .rank import location_invariants


def guard_interval(guard: fm.Formula, v: str):
    """(lo, hi) integer bounds on ``v`` from top-level single-variable linear atoms."""
    lo = hi = None
    for atom in fm.top_conjuncts(fm.normalize(guard)):
        if not isinstance(atom, fm.Atom):
            continue
        lin = atom.poly.as_linear()
        if lin is None:
            continue
        coeffs, const = lin
        if set(coeffs) != {v}:
            continue
        a = coeffs[v]
        # a*v + const > 0
        if a > 0:
            cand = math.floor(Fraction(-const) / a) + 1
            lo = cand if lo is None else max(lo, cand)
        else:
            cand = math.ceil(Fraction(const) / (-a)) - 1
            hi = cand if hi is None else min(hi, cand)
    return lo, hi


def guard_constant(guard: fm.Formula, v: str):
    lo, hi = guard_interval(guard, v)
    if lo is None or hi is None:
        return None
    return Bound.const(max(abs(lo), abs(hi)))


def _size_key(b: Bound):
    if b.is_omega():
        return (classify(b), math.inf)
    return (classify(b), b.evaluate({v: 2 for v in b.variables()}))


def non_increasing(t: Transition, v: str, solver=None, invariant: fm.Formula = fm.TRUE) -> bool:
    """Whether the guard of ``t`` (with ``invariant`` at its source) implies ``|v'| <= |v|``."""
    p = t.post(v)
    if p == Polynomial.var(v):
        return True
    grows = fm.Atom(p * p - Polynomial.var(v) ** 2, ">")
    return isinstance((solver or smt.builtin_only()).check_sat(fm.conj(invariant, t.guard, grows)), smt.Unsat)


class SizeBoundTable:
    def __init__(self, program: Program, solver=None):
        self.program = program
        self.pv = program.pv
        self.preds = {t.id: [r for r in program.transitions if r.tgt == t.src] for t in program.transitions}
        self.never_updated = {v for v in program.pv if not any(v in t.update for t in program.transitions)}
        inv = {loc: fm.conj(*atoms) for loc, atoms in location_invariants(program, solver).items()}
        self.shrinking = {
            (t.id, v)
            for t in program.transitions
            for v in t.update
            if v in program.pv and non_increasing(t, v, solver, inv[t.src])
        }
        self.consts = {(t.id, w): guard_constant(t.guard, w) for t in program.transitions for w in t.variables() | set(program.pv)}

    def pre(self, t: Transition, w: str, sb: Mapping) -> Bound:
        c = self.consts.get((t.id, w))
        if c is not None:
            return c
        if w not in self.pv:
            return OMEGA
        if t.src == self.program.start:
            return Bound.var(w)
        cands = []
        if w in self.never_updated:
            cands.append(Bound.var(w))
        cands.append(bound_sum(dict.fromkeys(sb[(r.id, w)] for r in self.preds[t.id])))
        return min(cands, key=_size_key)

    def post(self, t: Transition, v: str, sb: Mapping) -> Bound:
        p = t.post(v)
        shape = from_poly_abs(p).subst({w: self.pre(t, w, sb) for w in p.variables()})
        if (t.id, v) in self.shrinking:
            return min(shape, self.pre(t, v, sb), key=_size_key)
        return shape


def compute_size_bounds(program: Program, rb: Mapping | None = None, widen_after: int | None = None, solver=None) -> dict:
    """Map (transition id, variable) to a Bound on the variable's absolute value after it.

    ``rb`` (global runtime bounds) is accepted for interface symmetry; the
    propagation above does not need it.
    """
    table = SizeBoundTable(program, solver)
    keys = [(t.id, v) for t in program.transitions for v in program.pv]
    sb = {k: ZERO for k in keys}
    frozen: set = set()
    limit = widen_after if widen_after is not None else len(program.transitions) + 6
    rounds = 0
    while True:
        changed = set()
        for t in program.transitions:
            for v in program.pv:
                k = (t.id, v)
                if k in frozen:
                    continue
                new = table.post(t, v, sb)
                if new != sb[k]:
                    sb[k] = new
                    changed.add(k)
        rounds += 1
        if not changed:
            return sb
        if rounds >= limit:
            for k in changed:
                sb[k] = OMEGA
                frozen.add(k)
