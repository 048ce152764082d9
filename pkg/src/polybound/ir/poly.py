"""Exact multivariate polynomials with rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Callable, Iterable, Mapping, Union

# A monomial is a sorted tuple of (variable, exponent) pairs; () is the unit monomial.
Monomial = tuple
Number = Union[int, Fraction]


def mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    exps = dict(m1)
    for v, e in m2:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def mono_sort_key(m: Monomial):
    """Higher degree first, then lexicographic on variables."""
    return (-mono_degree(m), tuple((v, -e) for v, e in m))


def mono_str(m: Monomial) -> str:
    return "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)


class Polynomial:
    """Immutable polynomial over the rationals.

    Instances are hashable and compare structurally; integers and Fractions
    are coerced on arithmetic so ``2 * Polynomial.var("x") - 1`` works.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Number] | None = None):
        clean: dict = {}
        if terms:
            for m, c in terms.items():
                if c:
                    clean[m] = Fraction(c)
        self._terms = clean
        self._hash = None

    # construction -----------------------------------------------------
    @staticmethod
    def const(c: Number) -> "Polynomial":
        return Polynomial({(): c})

    @staticmethod
    def var(name: str) -> "Polynomial":
        return Polynomial({((name, 1),): 1})

    @staticmethod
    def coerce(x) -> "Polynomial":
        if isinstance(x, Polynomial):
            return x
        if isinstance(x, (int, Fraction)):
            return Polynomial.const(x)
        if isinstance(x, str):
            return Polynomial.var(x)
        raise TypeError(f"cannot convert {x!r} to Polynomial")

    # inspection -------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def sorted_items(self) -> list:
        return sorted(self._terms.items(), key=lambda kv: mono_sort_key(kv[0]))

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m == () for m in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def coefficient(self, m: Monomial) -> Fraction:
        return self._terms.get(m, Fraction(0))

    def variables(self) -> frozenset:
        return frozenset(v for m in self._terms for v, _ in m)

    def degree(self) -> int:
        return max((mono_degree(m) for m in self._terms), default=0)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._terms.values())

    def denominator_lcm(self) -> int:
        return lcm(1, *(c.denominator for c in self._terms.values()))

    def monomials(self) -> list:
        """Single-term summands in canonical order."""
        return [Polynomial({m: c}) for m, c in self.sorted_items()]

    def as_linear(self):
        """Return (coeffs, const) when the polynomial is affine, else None."""
        coeffs = {}
        for m, c in self._terms.items():
            if m == ():
                continue
            if len(m) != 1 or m[0][1] != 1:
                return None
            coeffs[m[0][0]] = c
        return coeffs, self.constant_term()

    # arithmetic -------------------------------------------------------
    def __add__(self, other) -> "Polynomial":
        other = Polynomial.coerce(other)
        res = dict(self._terms)
        for m, c in other._terms.items():
            res[m] = res.get(m, 0) + c
        return Polynomial(res)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-Polynomial.coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return Polynomial.coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        other = Polynomial.coerce(other)
        res: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = mono_mul(m1, m2)
                res[m] = res.get(m, 0) + c1 * c2
        return Polynomial(res)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative exponent")
        result = Polynomial.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c: Number) -> "Polynomial":
        return Polynomial({m: v * c for m, v in self._terms.items()})

    # substitution and evaluation -------------------------------------
    def subs(self, mapping: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Simultaneous substitution of variables by polynomials."""
        if not any(v in mapping for v in self.variables()):
            return self
        powers: dict = {}
        res = Polynomial()
        for m, c in self._terms.items():
            term = Polynomial.const(c)
            rest = []
            for v, e in m:
                if v in mapping:
                    key = (v, e)
                    if key not in powers:
                        powers[key] = Polynomial.coerce(mapping[v]) ** e
                    term = term * powers[key]
                else:
                    rest.append((v, e))
            if rest:
                term = term * Polynomial({tuple(rest): 1})
            res = res + term
        return res

    def evaluate(self, state: Mapping[str, Number]) -> Fraction:
        total = Fraction(0)
        for m, c in self._terms.items():
            t = c
            for v, e in m:
                t *= state[v] ** e
            total += t
        return total

    def compile(self) -> Callable[[Mapping[str, int]], Number]:
        """Compile to a Python function of a state dict (fast integer eval)."""
        return _compile_expr(self._expr_source())

    def _expr_source(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.sorted_items():
            factors = [f"s[{v!r}]" if e == 1 else f"s[{v!r}]**{e}" for v, e in m]
            coef = str(c.numerator) if c.denominator == 1 else f"F({c.numerator},{c.denominator})"
            parts.append("*".join([f"({coef})"] + factors))
        return " + ".join(parts)

    # comparison / display --------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for i, (m, c) in enumerate(self.sorted_items()):
            neg = c < 0
            a = -c if neg else c
            cs = str(a) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
            if m == ():
                body = cs
            elif a == 1:
                body = mono_str(m)
            else:
                body = f"{cs}*{mono_str(m)}"
            if i == 0:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)


_COMPILED: dict = {}


def _compile_expr(src: str):
    fn = _COMPILED.get(src)
    if fn is None:
        fn = eval(f"lambda s: {src}", {"F": Fraction})  # noqa: S307 - generated from our own terms
        _COMPILED[src] = fn
    return fn


def var(name: str) -> Polynomial:
    return Polynomial.var(name)


def const(c: Number) -> Polynomial:
    return Polynomial.const(c)


def poly_sum(items: Iterable[Polynomial]) -> Polynomial:
    total = Polynomial()
    for p in items:
        total = total + p
    return total


def integerize(p: Polynomial) -> Polynomial:
    """Scale by the lcm of coefficient denominators (a positive factor)."""
    d = p.denominator_lcm()
    return p if d == 1 else p.scale(d)
