"""Normalized poly-exponential expressions ``sum p * n^a * b^n``."""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterator, Mapping

from ..ir import formula as fm
from ..ir.poly import Polynomial, integerize


def _pow0(b: int, n: int) -> int:
    # 0^n is 0 for every n, including n = 0 (only b >= 1 occurs in closed forms)
    return 0 if b == 0 else b ** n


class NPE:
    """Map from (a, b) to the coefficient polynomial of ``n^a * b^n``."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | None = None):
        self._terms = {k: p for k, p in (terms or {}).items() if not p.is_zero()}

    @staticmethod
    def of_poly(p: Polynomial) -> "NPE":
        return NPE({(0, 1): p})

    @staticmethod
    def term(p, a: int, b: int) -> "NPE":
        return NPE({(a, b): Polynomial.coerce(p)})

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, a: int, b: int) -> Polynomial:
        return self._terms.get((a, b), Polynomial())

    def addends(self) -> list:
        """(p, a, b) triples sorted by (b, a) descending."""
        return [(p, a, b) for (a, b), p in sorted(self._terms.items(), key=lambda kv: (kv[0][1], kv[0][0]), reverse=True)]

    def monomial_addends(self) -> list:
        """Split every coefficient into single monomials: (m, a, b) triples."""
        out = []
        for p, a, b in self.addends():
            for m in p.monomials():
                out.append((m, a, b))
        return out

    def __add__(self, other: "NPE") -> "NPE":
        res = dict(self._terms)
        for k, p in other._terms.items():
            res[k] = res.get(k, Polynomial()) + p
        return NPE(res)

    def __neg__(self) -> "NPE":
        return NPE({k: -p for k, p in self._terms.items()})

    def __sub__(self, other: "NPE") -> "NPE":
        return self + (-other)

    def __mul__(self, other) -> "NPE":
        if not isinstance(other, NPE):
            other = NPE.of_poly(Polynomial.coerce(other))
        res: dict = {}
        for (a1, b1), p1 in self._terms.items():
            for (a2, b2), p2 in other._terms.items():
                k = (a1 + a2, b1 * b2)
                res[k] = res.get(k, Polynomial()) + p1 * p2
        return NPE(res)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "NPE":
        out = NPE.of_poly(Polynomial.const(1))
        for _ in range(e):
            out = out * self
        return out

    def scale(self, c) -> "NPE":
        return NPE({k: p.scale(c) for k, p in self._terms.items()})

    def at(self, n: int) -> Polynomial:
        """Instantiate the symbolic n."""
        total = Polynomial()
        for (a, b), p in self._terms.items():
            total = total + p.scale(Fraction(n ** a * _pow0(b, n)))
        return total

    def evaluate(self, state: Mapping[str, int], n: int) -> Fraction:
        total = Fraction(0)
        for (a, b), p in self._terms.items():
            total += p.evaluate(state) * (n ** a) * _pow0(b, n)
        return total

    def shift_back(self) -> "NPE":
        """The expression ``n -> self(n - 1)`` (requires b >= 1)."""
        res: dict = {}
        for (a, b), p in self._terms.items():
            base = p.scale(Fraction(1, b))
            for i in range(a + 1):
                c = comb(a, i) * (-1) ** (a - i)
                k = (i, b)
                res[k] = res.get(k, Polynomial()) + base.scale(c)
        return NPE(res)

    def variables(self) -> frozenset:
        out: set = set()
        for p in self._terms.values():
            out |= p.variables()
        return frozenset(out)

    def integerized(self) -> "NPE":
        """Scale by the positive lcm of all coefficient denominators."""
        from math import lcm

        d = lcm(1, *(p.denominator_lcm() for p in self._terms.values()))
        return self if d == 1 else self.scale(d)

    def __eq__(self, other) -> bool:
        return isinstance(other, NPE) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __iter__(self) -> Iterator:
        return iter(self.addends())

    def __repr__(self) -> str:
        return f"NPE({str(self)!r})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for p, a, b in self.addends():
            factors = [f"({p})"]
            if a:
                factors.append("n" if a == 1 else f"n^{a}")
            if b != 1:
                factors.append(f"{b}^n")
            parts.append("*".join(factors))
        return " + ".join(parts)


def subst_npe(p: Polynomial, cl: Mapping[str, NPE]) -> NPE:
    """Replace each variable of ``p`` by its NPE (variables without one stay)."""
    total = NPE()
    cache: dict = {}
    for m, c in p.items():
        term = NPE.of_poly(Polynomial.const(c))
        for v, e in m:
            if v in cl:
                key = (v, e)
                if key not in cache:
                    cache[key] = cl[v] ** e
                term = term * cache[key]
            else:
                term = term * Polynomial.var(v) ** e
        total = total + term
    return total


def eventual_sign_formula(npe: NPE) -> fm.Formula:
    """Formula over the variables that holds iff ``npe(n) > 0`` for all large n.

    With addends ordered by (b, a), the sign for large n is the sign of the
    leading non-vanishing coefficient.
    """
    adds = npe.addends()
    disjuncts = []
    for j, (p, _, _) in enumerate(adds):
        conds = [fm.gt0(integerize(p))]
        for q, _, _ in adds[:j]:
            conds.append(fm.Atom(integerize(q), "="))
        disjuncts.append(fm.conj(*conds))
    return fm.normalize(fm.disj(*disjuncts))
