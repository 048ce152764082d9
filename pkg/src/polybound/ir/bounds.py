"""Weakly monotone bound expressions over the naturals extended with omega.

A bound is kept in a canonical sum-of-products form whose factors are
variables, exponentials ``k^(b)`` and the symbol omega.  Canonicalization
uses only rewrites valid in the extended naturals (``0*omega = 0``,
``omega*omega = omega``, ``c*omega = omega`` for ``c >= 1``, and a sum with
an omega summand is omega).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

from .poly import Polynomial

OMEGA_GEN = "ω"


@dataclass(frozen=True)
class ExpGen:
    base: int
    exponent: "Bound"


Gen = Union[str, ExpGen]


def _gen_key(g: Gen):
    if g == OMEGA_GEN:
        return (2, "", 0)
    if isinstance(g, ExpGen):
        return (1, str(g.exponent), g.base)
    return (0, g, 0)


def _mono_key(m) -> tuple:
    deg = sum(e for g, e in m if isinstance(g, str) and g != OMEGA_GEN)
    return (-deg, tuple((_gen_key(g), -e) for g, e in m))


def _mono_mul(m1, m2):
    exps: dict = {}
    for g, e in m1 + m2:
        exps[g] = exps.get(g, 0) + e
    if OMEGA_GEN in exps:
        exps[OMEGA_GEN] = 1
    return tuple(sorted(exps.items(), key=lambda ge: _gen_key(ge[0])))


_PURE_OMEGA = ((OMEGA_GEN, 1),)


class Bound:
    """Canonical bound expression; build with ``Bound.const``/``var``/``omega``."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping | None = None):
        clean: dict = {}
        for m, c in (terms or {}).items():
            if c < 0:
                raise ValueError("bounds have natural coefficients")
            if c == 0:
                continue
            if any(g == OMEGA_GEN for g, _ in m):
                c = 1
            clean[m] = clean.get(m, 0) + c
            if any(g == OMEGA_GEN for g, _ in m):
                clean[m] = 1
        if _PURE_OMEGA in clean:
            clean = {_PURE_OMEGA: 1}
        self._terms = clean
        self._hash = None

    # construction -----------------------------------------------------
    @staticmethod
    def const(c: int) -> "Bound":
        if c < 0:
            raise ValueError("negative constant")
        return Bound({(): int(c)})

    @staticmethod
    def var(name: str) -> "Bound":
        return Bound({((name, 1),): 1})

    @staticmethod
    def omega() -> "Bound":
        return Bound({_PURE_OMEGA: 1})

    @staticmethod
    def exp(base: int, exponent: "Bound") -> "Bound":
        if base < 0:
            raise ValueError("negative base")
        if exponent.is_constant():
            return Bound.const(base ** exponent.constant_value())
        if base == 1:
            return Bound.const(1)
        if exponent.is_omega():
            return Bound.omega() if base >= 2 else Bound.const(0)
        return Bound({((ExpGen(base, exponent), 1),): 1})

    @staticmethod
    def coerce(x) -> "Bound":
        if isinstance(x, Bound):
            return x
        if isinstance(x, int):
            return Bound.const(x)
        if isinstance(x, str):
            return Bound.var(x)
        raise TypeError(f"cannot convert {x!r} to Bound")

    # inspection -------------------------------------------------------
    def is_omega(self) -> bool:
        return _PURE_OMEGA in self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m == () for m in self._terms)

    def constant_value(self) -> int:
        return self._terms.get((), 0)

    def items(self):
        return self._terms.items()

    def variables(self) -> frozenset:
        out: set = set()
        for m in self._terms:
            for g, _ in m:
                if isinstance(g, ExpGen):
                    out |= g.exponent.variables()
                elif g != OMEGA_GEN:
                    out.add(g)
        return frozenset(out)

    # arithmetic -------------------------------------------------------
    def __add__(self, other) -> "Bound":
        other = Bound.coerce(other)
        res = dict(self._terms)
        for m, c in other._terms.items():
            res[m] = res.get(m, 0) + c
        return Bound(res)

    __radd__ = __add__

    def __mul__(self, other) -> "Bound":
        other = Bound.coerce(other)
        res: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                res[m] = res.get(m, 0) + c1 * c2
        return Bound(res)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Bound":
        out = Bound.const(1)
        for _ in range(k):
            out = out * self
        return out

    def subst(self, mapping: Mapping[str, "Bound"]) -> "Bound":
        """Replace variables by bounds (missing ones stay)."""
        total = Bound()
        for m, c in self._terms.items():
            term = Bound.const(c)
            for g, e in m:
                if g == OMEGA_GEN:
                    term = term * Bound.omega()
                elif isinstance(g, ExpGen):
                    term = term * Bound.exp(g.base, g.exponent.subst(mapping)) ** e
                elif g in mapping:
                    term = term * Bound.coerce(mapping[g]) ** e
                else:
                    term = term * Bound({((g, 1),): 1}) ** e
            total = total + term
        return total

    def evaluate(self, sizes: Mapping[str, int]):
        """Value under absolute variable sizes; ``math.inf`` stands for omega."""
        total = 0
        for m, c in self._terms.items():
            val = c
            inf = False
            for g, e in m:
                if g == OMEGA_GEN:
                    inf = True
                    continue
                if isinstance(g, ExpGen):
                    ev = g.exponent.evaluate(sizes)
                    if ev == math.inf:
                        x = math.inf if g.base >= 2 else g.base
                    else:
                        x = g.base ** ev
                else:
                    x = abs(sizes[g])
                if x == 0:
                    val = 0
                    inf = False
                    break
                val = val * x ** e if x != math.inf else math.inf
            if val == 0:
                continue
            if inf or val == math.inf:
                return math.inf
            total += val
        return total

    # comparison / display --------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Bound.const(other)
        if not isinstance(other, Bound):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Bound({str(self)!r})"

    def __str__(self) -> str:
        if self.is_omega():
            return "omega"
        if not self._terms:
            return "0"
        parts = []
        for m, c in sorted(self._terms.items(), key=lambda kv: _mono_key(kv[0])):
            factors = []
            for g, e in m:
                if g == OMEGA_GEN:
                    name = "omega"
                elif isinstance(g, ExpGen):
                    name = f"{g.base}^({g.exponent})"
                else:
                    name = g
                factors.append(name if e == 1 else f"{name}^{e}")
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts)


OMEGA = Bound.omega()
ZERO = Bound()
ONE = Bound.const(1)


def bound_eval(b: Bound, sizes: Mapping[str, int]):
    return b.evaluate(sizes)


def bound_subst(b: Bound, mapping: Mapping[str, Bound]) -> Bound:
    return b.subst(mapping)


def from_poly_abs(p: Polynomial) -> Bound:
    """Bound obtained by taking absolute values (ceiling) of every coefficient.

    For integer inputs ``|p(x)| <= from_poly_abs(p)(|x|)``.
    """
    terms = {}
    for m, c in p.items():
        a = abs(c)
        terms[tuple(m)] = math.ceil(a) if isinstance(a, Fraction) else a
    return Bound(terms)


def bound_sum(items) -> Bound:
    total = Bound()
    for b in items:
        total = total + b
    return total


@dataclass(frozen=True, order=True)
class ComplexityClass:
    """Totally ordered classes: Const < Poly(k) < Exp < Infinite."""

    rank: int
    degree: int = 0

    @staticmethod
    def const() -> "ComplexityClass":
        return ComplexityClass(0, 0)

    @staticmethod
    def poly(k: int) -> "ComplexityClass":
        return ComplexityClass(0, 0) if k == 0 else ComplexityClass(1, k)

    @staticmethod
    def exp() -> "ComplexityClass":
        return ComplexityClass(2, 0)

    @staticmethod
    def infinite() -> "ComplexityClass":
        return ComplexityClass(3, 0)

    def big_o(self) -> str:
        if self.rank == 0:
            return "O(1)"
        if self.rank == 1:
            return "O(n)" if self.degree == 1 else f"O(n^{self.degree})"
        if self.rank == 2:
            return "EXP"
        return "INF"

    def __str__(self) -> str:
        return self.big_o()


def classify(b: Bound) -> ComplexityClass:
    if b.is_zero():
        return ComplexityClass.const()
    deg = 0
    expo = False
    for m in b._terms:
        d = 0
        for g, e in m:
            if g == OMEGA_GEN:
                return ComplexityClass.infinite()
            if isinstance(g, ExpGen):
                if g.base >= 2:
                    expo = True
            else:
                d += e
        deg = max(deg, d)
    if expo:
        return ComplexityClass.exp()
    return ComplexityClass.poly(deg)
