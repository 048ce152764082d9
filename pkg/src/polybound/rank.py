"""Linear ranking functions via Farkas' lemma, plus guard-atom location invariants.

Ranking functions are location-dependent: one affine function per location
of the analysed transition set.  Non-linear guard atoms are dropped and
non-linear updates are treated as arbitrary values, both of which only
weaken the premises.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import smt
from .ir import formula as fm
from .ir.bounds import Bound
from .ir.poly import Polynomial
from .ir.program import Program, Transition
from .smt.linear import fm_infeasible, lp_minimize


@dataclass(frozen=True)
class LinearRF:
    coefficients: Mapping  # location -> {variable: Fraction}
    constants: Mapping  # location -> Fraction

    def value(self, loc: str, state: Mapping[str, int]) -> Fraction:
        coeffs = self.coefficients[loc]
        return sum((c * state[v] for v, c in coeffs.items()), Fraction(0)) + self.constants[loc]

    def bound_at(self, loc: str) -> Bound:
        """sum |coeff| * v + max(ceil(const), 0)."""
        b = Bound.const(max(math.ceil(self.constants[loc]), 0))
        for v, c in sorted(self.coefficients[loc].items()):
            if c:
                b = b + Bound.const(math.ceil(abs(c))) * Bound.var(v)
        return b

    def __str__(self) -> str:
        parts = []
        for loc in sorted(self.coefficients):
            f = Polynomial.const(self.constants[loc])
            for v, c in self.coefficients[loc].items():
                f = f + Polynomial.var(v).scale(c)
            parts.append(f"{loc}: {f}")
        return "; ".join(parts)


def _linear_atoms(atoms: Iterable[fm.Atom]) -> list:
    return [a for a in atoms if a.poly.as_linear() is not None]


def _as_constraint(a: fm.Atom):
    coeffs, const = a.poly.as_linear()
    return dict(coeffs), const - 1  # p > 0  <=>  p - 1 >= 0


def location_invariants(program: Program, solver: smt.Solver | None = None) -> dict:
    """Linear guard atoms that hold whenever a location is reached (greatest fixed point)."""
    solver = solver or smt.builtin_only()
    cands = []
    for t in program.transitions:
        for a in fm.atoms(fm.normalize(t.guard)):
            if a.poly.as_linear() is not None and a.poly.variables() <= set(program.pv):
                cands.append(a)
    cands = list(dict.fromkeys(cands))
    inv = {loc: ([] if loc == program.start else list(cands)) for loc in program.locations}
    changed = True
    while changed:
        changed = False
        for t in program.transitions:
            pre = fm.conj(*inv[t.src], t.guard)
            keep = []
            for a in inv[t.tgt]:
                if solver.proves(pre, fm.substitute(a, dict(t.update))):
                    keep.append(a)
                else:
                    changed = True
            inv[t.tgt] = keep
    return inv


class _LP:
    def __init__(self):
        self.n = 0
        self.eqs: list = []
        self.ubs: list = []

    def new(self) -> int:
        self.n += 1
        return self.n - 1


def synthesize_rf(
    program: Program,
    scc: Sequence[Transition],
    strict: Sequence[Transition],
    invariants: Mapping | None = None,
    entries: Sequence[Transition] | None = None,
):
    """Ranking function over ``scc`` that decreases on (and is >= 1 before) ``strict``.

    Minimizes the size of the functions at entry locations.  Returns None if
    no linear ranking function exists for the linearized transitions.
    """
    invariants = invariants or {}
    strict_ids = {t.id for t in strict}
    locs = sorted({t.src for t in scc} | {t.tgt for t in scc})
    vars_ = sorted({v for t in scc for v in t.variables() if v in program.pv})
    lp = _LP()
    coef = {}  # (loc, var) -> (pos col, neg col); var None is the constant
    for loc in locs:
        for v in vars_ + [None]:
            coef[(loc, v)] = (lp.new(), lp.new())

    def unknown(loc, v, scale=Fraction(1)) -> dict:
        p, n = coef[(loc, v)]
        return {p: scale, n: -scale}

    def add_into(acc: dict, d: dict):
        for k, c in d.items():
            acc[k] = acc.get(k, 0) + c

    for t in scc:
        delta = 1 if t.id in strict_ids else 0
        clauses = fm.dnf(fm.conj(*invariants.get(t.src, []), t.guard))
        if clauses is None:
            return None
        lin_upd = {}
        fresh = {}
        for v in vars_:
            lin = t.post(v).as_linear()
            if lin is None:
                fresh[v] = f"{v}'"
            else:
                lin_upd[v] = lin
        for clause in clauses:
            rows = [_as_constraint(a) for a in _linear_atoms(clause)]
            if fm_infeasible(rows):
                continue
            zvars = sorted({w for r in rows for w in r[0]} | set(vars_) | {w for v, (c, _) in lin_upd.items() for w in c} | set(fresh.values()))
            # decrease / non-increase: f_src(x) - f_tgt(x') - delta >= 0
            lin_forms = {w: {} for w in zvars}
            for v in vars_:
                add_into(lin_forms[v], unknown(t.src, v))
                if v in fresh:
                    add_into(lin_forms[fresh[v]], unknown(t.tgt, v, Fraction(-1)))
                else:
                    cs, _ = lin_upd[v]
                    for w, c in cs.items():
                        add_into(lin_forms[w], unknown(t.tgt, v, Fraction(-c)))
            const_form = {}
            add_into(const_form, unknown(t.src, None))
            add_into(const_form, unknown(t.tgt, None, Fraction(-1)))
            for v, (_, c0) in lin_upd.items():
                if c0:
                    add_into(const_form, unknown(t.tgt, v, Fraction(-c0)))
            _farkas(lp, rows, zvars, lin_forms, const_form, Fraction(delta))
            if delta:
                lin_forms = {w: {} for w in zvars}
                for v in vars_:
                    add_into(lin_forms[v], unknown(t.src, v))
                _farkas(lp, rows, zvars, lin_forms, unknown(t.src, None), Fraction(1))

    entry_locs = sorted({r.tgt for r in entries}) if entries else locs
    cost = {}
    for loc in entry_locs:
        for v in vars_:
            p, n = coef[(loc, v)]
            cost[p] = 1
            cost[n] = 1
        cost[coef[(loc, None)][0]] = 1
    res = lp_minimize(lp.n, cost, lp.eqs, lp.ubs)
    if res.status != "optimal":
        return None
    x = res.x
    coeffs = {loc: {v: x[coef[(loc, v)][0]] - x[coef[(loc, v)][1]] for v in vars_} for loc in locs}
    consts = {loc: x[coef[(loc, None)][0]] - x[coef[(loc, None)][1]] for loc in locs}
    return LinearRF(coeffs, consts)


def _farkas(lp: _LP, rows: list, zvars: list, lin_forms: Mapping, const_form: Mapping, rhs_const: Fraction):
    """Encode: for all z with rows (c.z + k >= 0): lin.z + const - rhs_const >= 0.

    Rows are rewritten as -c.z <= k; Farkas gives lambda >= 0 with
    sum lambda_i * (-c_i) = -lin and sum lambda_i * k_i <= const - rhs_const.
    """
    lams = [lp.new() for _ in rows]
    for w in zvars:
        eq = {}
        for lam, (c, _) in zip(lams, rows):
            a = -Fraction(c.get(w, 0))
            if a:
                eq[lam] = eq.get(lam, 0) + a
        for k, c in lin_forms.get(w, {}).items():
            eq[k] = eq.get(k, 0) + c
        eq = {k: c for k, c in eq.items() if c}
        if eq:
            lp.eqs.append((eq, Fraction(0)))
    ub = {}
    for lam, (_, k) in zip(lams, rows):
        if k:
            ub[lam] = ub.get(lam, 0) + Fraction(k)
    for kk, c in const_form.items():
        ub[kk] = ub.get(kk, 0) - c
    lp.ubs.append(({k: c for k, c in ub.items() if c}, -rhs_const))


def rf_local_bound(rf: LinearRF, entry: Transition) -> Bound:
    return rf.bound_at(entry.tgt)
