"""Sound but incomplete satisfiability checks for non-linear integer formulas.

Each non-linear monomial is replaced by a fresh variable.  When few base
variables are involved the check splits on the sign of every base variable
and adds the magnitude facts valid for integers in that sign case
(``|m| >= |v|`` for every variable ``v`` of a non-zero monomial ``m``);
otherwise only the unconditional even-power facts are added.  The resulting
linear system is refuted with Fourier-Motzkin.
"""

from __future__ import annotations

from itertools import product
from typing import Mapping

from ..ir import formula as fm
from ..ir.poly import integerize, mono_degree
from .linear import fm_infeasible

MAX_SPLIT_VARS = 4


def _linearize(atoms: list):
    """Replace non-linear monomials; returns (constraints, monomial->name)."""
    names: dict = {}
    constraints = []
    for a in atoms:
        p = integerize(a.poly)
        coeffs = {}
        const = 0
        for m, c in p.items():
            if m == ():
                const = int(c)
            elif mono_degree(m) == 1:
                coeffs[m[0][0]] = coeffs.get(m[0][0], 0) + int(c)
            else:
                if m not in names:
                    names[m] = f"_m{len(names)}"
                coeffs[names[m]] = coeffs.get(names[m], 0) + int(c)
        # p > 0  <=>  p - 1 >= 0 over the integers
        constraints.append((coeffs, const - 1))
    return constraints, names


def _sign_case_axioms(names: Mapping, signs: Mapping[str, int]) -> list:
    out = []
    info = {}
    for m, name in names.items():
        if any(signs[v] == 0 for v, _ in m):
            out.append(({name: 1}, 0))
            out.append(({name: -1}, 0))
            continue
        s = 1
        for v, e in m:
            if e % 2 and signs[v] < 0:
                s = -s
        info[m] = s
        out.append(({name: s}, -1))
        for v, _ in m:
            out.append(({name: s, v: -signs[v]}, 0))
    for m1, s1 in info.items():
        for m2, s2 in info.items():
            if m1 != m2 and _divides(m2, m1):
                out.append(({names[m1]: s1, names[m2]: -s2}, 0))
    return out


def _divides(small, big) -> bool:
    b = dict(big)
    return all(b.get(v, 0) >= e for v, e in small)


def _plain_axioms(names: Mapping) -> list:
    out = []
    for m, name in names.items():
        if all(e % 2 == 0 for _, e in m):
            out.append(({name: 1}, 0))
            if len(m) == 1:
                v = m[0][0]
                out.append(({name: 1, v: -1}, 0))
                out.append(({name: 1, v: 1}, 0))
    return out


def conjunction_unsat(atoms: list) -> bool:
    """True when the conjunction of normal-form atoms has no integer model."""
    constraints, names = _linearize(atoms)
    if not names:
        return fm_infeasible(constraints)
    bases = sorted({v for m in names for v, _ in m})
    if len(bases) > MAX_SPLIT_VARS:
        return fm_infeasible(constraints + _plain_axioms(names))
    for combo in product((1, 0, -1), repeat=len(bases)):
        signs = dict(zip(bases, combo))
        case = list(constraints)
        for v, s in signs.items():
            if s > 0:
                case.append(({v: 1}, -1))
            elif s < 0:
                case.append(({v: -1}, -1))
            else:
                case.append(({v: 1}, 0))
                case.append(({v: -1}, 0))
        case += _sign_case_axioms(names, signs)
        if not fm_infeasible(case):
            return False
    return True


def refute(f: fm.Formula, dnf_limit: int = 64):
    """True if ``f`` is proved unsatisfiable, False if not refuted, None if too large."""
    clauses = fm.dnf(f, dnf_limit)
    if clauses is None:
        return None
    return all(conjunction_unsat(c) for c in clauses)


def search_model(f: fm.Formula, radius: int = 3, budget: int = 5000):
    """Small exhaustive search for an integer model."""
    vs = sorted(fm.variables(f))
    if (2 * radius + 1) ** len(vs) > budget:
        return None
    check = fm.compile_formula(f)
    values = sorted(range(-radius, radius + 1), key=lambda x: (abs(x), x))
    for combo in product(values, repeat=len(vs)):
        state = dict(zip(vs, combo))
        if check(state):
            return state
    return None

