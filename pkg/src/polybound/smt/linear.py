"""Exact linear arithmetic: Fourier-Motzkin over the integers and a rational simplex."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping

# A constraint is (coeffs, const) meaning sum(coeffs[v] * v) + const >= 0.


def _tighten(coeffs: Mapping[str, int], const: int):
    coeffs = {v: c for v, c in coeffs.items() if c}
    g = 0
    for c in coeffs.values():
        g = gcd(g, c)
    if g > 1:
        coeffs = {v: c // g for v, c in coeffs.items()}
        const = const // g  # floor division: valid rounding for integer points
    return coeffs, const


def _integral(coeffs: Mapping[str, Fraction], const: Fraction):
    den = 1
    for c in list(coeffs.values()) + [const]:
        den = den * Fraction(c).denominator // gcd(den, Fraction(c).denominator)
    return {v: int(c * den) for v, c in coeffs.items()}, int(const * den)


def fm_infeasible(constraints: Iterable, max_constraints: int = 4000) -> bool:
    """True when the system has no integer solution (proved by FM + rounding).

    False means "not refuted" and says nothing about feasibility.
    """
    store: dict = {}

    def add(coeffs, const) -> bool:
        coeffs, const = _tighten(coeffs, const)
        if not coeffs:
            return const < 0
        key = tuple(sorted(coeffs.items()))
        old = store.get(key)
        if old is None or const < old:
            store[key] = const
        return False

    for coeffs, const in constraints:
        coeffs, const = _integral(coeffs, const)
        if add(coeffs, const):
            return True

    while True:
        # Opposite-direction pairs of the same hyperplane give a cheap contradiction check.
        for key, c in store.items():
            neg = tuple((v, -a) for v, a in key)
            if neg in store and c + store[neg] < 0:
                return True
        live = {v for key in store for v, _ in key}
        if not live:
            return False
        best = None
        for v in sorted(live):
            pos = sum(1 for key in store if dict(key).get(v, 0) > 0)
            neg = sum(1 for key in store if dict(key).get(v, 0) < 0)
            cost = pos * neg - pos - neg
            if best is None or cost < best[0]:
                best = (cost, v)
        v = best[1]
        pos, neg, rest = [], [], {}
        for key, c in store.items():
            a = dict(key).get(v, 0)
            if a > 0:
                pos.append((dict(key), c))
            elif a < 0:
                neg.append((dict(key), c))
            else:
                rest[key] = c
        store = rest
        for pc, pk in pos:
            for nc, nk in neg:
                a, b = pc[v], -nc[v]
                coeffs = {}
                for w in set(pc) | set(nc):
                    if w != v:
                        coeffs[w] = b * pc.get(w, 0) + a * nc.get(w, 0)
                if add(coeffs, b * pk + a * nk):
                    return True
        if len(store) > max_constraints:
            return False


# ---------------------------------------------------------------------------
# Simplex


class LPResult:
    def __init__(self, status: str, x=None, value=None):
        self.status = status  # "optimal", "infeasible" or "unbounded"
        self.x = x
        self.value = value

    def __repr__(self) -> str:
        return f"LPResult({self.status!r}, value={self.value})"


class _Tableau:
    def __init__(self, rows: list, rhs: list, basis: list):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis

    def pivot(self, r: int, c: int, objs: list):
        row = self.rows[r]
        piv = row[c]
        if piv != 1:
            row = {k: v / piv for k, v in row.items()}
            self.rhs[r] = self.rhs[r] / piv
            self.rows[r] = row
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other.get(c)
            if f:
                for k, v in row.items():
                    nv = other.get(k, 0) - f * v
                    if nv:
                        other[k] = nv
                    else:
                        other.pop(k, None)
                self.rhs[i] -= f * self.rhs[r]
        for obj in objs:
            f = obj[0].get(c)
            if f:
                for k, v in row.items():
                    nv = obj[0].get(k, 0) - f * v
                    if nv:
                        obj[0][k] = nv
                    else:
                        obj[0].pop(k, None)
                obj[1] -= f * self.rhs[r]
        self.basis[r] = c

    def optimize(self, obj: list, allowed, extra_objs=()) -> str:
        """Minimize; ``obj`` is [reduced_costs, -value] and is updated in place."""
        while True:
            entering = None
            for k in sorted(obj[0]):
                if obj[0][k] < 0 and allowed(k):
                    entering = k
                    break
            if entering is None:
                return "optimal"
            best = None
            for i, row in enumerate(self.rows):
                a = row.get(entering, 0)
                if a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded"
            self.pivot(best[1], entering, [obj, *extra_objs])


def lp_minimize(n: int, cost: Mapping[int, Fraction], eqs: list, ubs: list) -> LPResult:
    """Minimize ``cost . x`` subject to ``eqs`` (row == rhs), ``ubs`` (row <= rhs), x >= 0.

    Rows are (dict index -> coefficient, rhs).  Exact arithmetic, Bland's rule.
    """
    rows, rhs, basis = [], [], []
    col = n
    n_art_start = None
    pending = []
    for coeffs, b in ubs:
        r = {k: Fraction(v) for k, v in coeffs.items() if v}
        b = Fraction(b)
        r[col] = Fraction(1)
        slack = col
        col += 1
        if b < 0:
            r = {k: -v for k, v in r.items()}
            b = -b
            pending.append((r, b))
        else:
            rows.append(r)
            rhs.append(b)
            basis.append(slack)
    for coeffs, b in eqs:
        r = {k: Fraction(v) for k, v in coeffs.items() if v}
        b = Fraction(b)
        if b < 0:
            r = {k: -v for k, v in r.items()}
            b = -b
        pending.append((r, b))
    n_art_start = col
    for r, b in pending:
        r = dict(r)
        r[col] = Fraction(1)
        rows.append(r)
        rhs.append(b)
        basis.append(col)
        col += 1
    tab = _Tableau(rows, rhs, basis)

    def reduced(c: Mapping[int, Fraction]):
        red = {k: Fraction(v) for k, v in c.items() if v}
        val = Fraction(0)
        for i, bvar in enumerate(tab.basis):
            cb = Fraction(c.get(bvar, 0))
            if cb:
                for k, v in tab.rows[i].items():
                    nv = red.get(k, 0) - cb * v
                    if nv:
                        red[k] = nv
                    else:
                        red.pop(k, None)
                val -= cb * tab.rhs[i]
        return [red, val]

    phase2 = reduced(cost)
    if col > n_art_start:
        phase1 = reduced({k: 1 for k in range(n_art_start, col)})
        tab.optimize(phase1, lambda k: True, extra_objs=[phase2])
        if -phase1[1] > 0:
            return LPResult("infeasible")
        # drive zero-level artificials out of the basis
        for i in range(len(tab.rows) - 1, -1, -1):
            if tab.basis[i] >= n_art_start:
                cand = sorted(k for k in tab.rows[i] if k < n_art_start)
                if cand:
                    tab.pivot(i, cand[0], [phase2])
                else:
                    del tab.rows[i], tab.rhs[i], tab.basis[i]
        for row in tab.rows:
            for k in [k for k in row if k >= n_art_start]:
                del row[k]
        for k in [k for k in phase2[0] if k >= n_art_start]:
            del phase2[0][k]
    status = tab.optimize(phase2, lambda k: k < n_art_start)
    if status == "unbounded":
        return LPResult("unbounded")
    x = [Fraction(0)] * n
    for i, bvar in enumerate(tab.basis):
        if bvar < n:
            x[bvar] = tab.rhs[i]
    value = sum((Fraction(cost.get(k, 0)) * x[k] for k in range(n)), Fraction(0))
    return LPResult("optimal", x, value)
