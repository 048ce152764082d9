"""Closed forms of tnn loops as poly-exponential expressions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from ..ir.poly import Polynomial
from .loops import TwnLoop
from .npe import NPE, subst_npe


@dataclass(frozen=True)
class ClosedForm:
    """``cl[v]`` equals the value of ``v`` after n iterations, for all n >= n0."""

    cl: Mapping[str, NPE]
    n0: int


def _solve(matrix: list, rhs: list) -> list:
    """Gauss-Jordan elimination over the rationals (square, non-singular)."""
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(r)] for row, r in zip(matrix, rhs)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n] for row in a]


@lru_cache(maxsize=None)
def _sum_basis(c: int, a: int, b: int):
    """Coefficients of sum_{m<n} c^(n-1-m) m^a b^m over its exponential-polynomial basis.

    Returns a tuple of ((deg, base), coefficient) pairs.
    """
    if c == b:
        basis = [(i, b) for i in range(a + 2)]
    else:
        basis = [(i, b) for i in range(a + 1)] + [(0, c)]
    k = len(basis)

    def direct(n: int) -> int:
        return sum(c ** (n - 1 - m) * m ** a * b ** m for m in range(n))

    matrix = [[n ** d * base ** n for d, base in basis] for n in range(k)]
    coeffs = _solve(matrix, [direct(n) for n in range(k)])
    return tuple((bk, co) for bk, co in zip(basis, coeffs) if co)


def npe_sum_recurrence(c: int, p: NPE) -> NPE:
    """NPE ``Q`` with ``Q(n) = sum_{m<n} c^(n-1-m) * p(m)`` for every n >= 0 (c >= 1).

    For ``c == 0`` the sum is ``p(n-1)``, returned via a shift and valid for n >= 1.
    """
    if c == 0:
        return p.shift_back()
    total = NPE()
    for (a, b), coeff in p.items():
        for (d, base), co in _sum_basis(c, a, b):
            total = total + NPE.term(coeff.scale(co), d, base)
    return total


def iterate_update(update: Mapping[str, Polynomial], v: str, k: int) -> Polynomial:
    """The polynomial for ``v`` after k symbolic applications of ``update``."""
    p = Polynomial.var(v)
    for _ in range(k):
        p = p.subs(update)
    return p


def closed_form(loop: TwnLoop) -> ClosedForm:
    """Closed form of a tnn loop, computed from the last variable of the order backwards."""
    if not loop.is_tnn:
        raise ValueError("closed forms are only computed for tnn loops")
    cl: dict = {}
    starts: dict = {}
    for v in reversed(loop.order):
        c, rest = loop.parts(v)
        c = int(c)
        k = max((starts[w] for w in rest.variables()), default=0)
        inhom = subst_npe(rest, cl)
        q = npe_sum_recurrence(c, inhom)
        if c == 0:
            cl[v] = q
            starts[v] = k + 1
        else:
            xk = iterate_update(loop.update, v, k)
            head = (xk - q.at(k)).scale(Fraction(1, c ** k))
            cl[v] = NPE.term(head, 0, c) + q
            starts[v] = k
    return ClosedForm(cl, max(starts.values(), default=0))
