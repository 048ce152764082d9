"""Quantifier-free arithmetic formulas over polynomial atoms."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Mapping, Union

from .poly import Polynomial

RELATIONS = ("<", "<=", "=", "!=", ">=", ">")


@dataclass(frozen=True)
class Atom:
    """``poly rel 0``."""

    poly: Polynomial
    rel: str

    def __post_init__(self):
        if self.rel not in RELATIONS:
            raise ValueError(f"unknown relation {self.rel!r}")

    def __str__(self) -> str:
        return f"{self.poly} {self.rel} 0"


@dataclass(frozen=True)
class And:
    args: tuple

    def __str__(self) -> str:
        return " && ".join(_paren(a) for a in self.args)


@dataclass(frozen=True)
class Or:
    args: tuple

    def __str__(self) -> str:
        return " || ".join(_paren(a) for a in self.args)


@dataclass(frozen=True)
class BoolConst:
    value: bool

    def __str__(self) -> str:
        return "true" if self.value else "false"


Formula = Union[Atom, And, Or, BoolConst]
TRUE = BoolConst(True)
FALSE = BoolConst(False)


def _paren(f: Formula) -> str:
    return f"({f})" if isinstance(f, (And, Or)) else str(f)


def compare(lhs, rel: str, rhs) -> Atom:
    """Atom for ``lhs rel rhs``."""
    return Atom(Polynomial.coerce(lhs) - Polynomial.coerce(rhs), rel)


def gt0(p) -> Atom:
    """The strict normal-form atom ``0 < p``."""
    return Atom(Polynomial.coerce(p), ">")


def conj(*fs: Formula) -> Formula:
    args = []
    for f in fs:
        if f == TRUE:
            continue
        if f == FALSE:
            return FALSE
        if isinstance(f, And):
            args.extend(f.args)
        else:
            args.append(f)
    args = list(dict.fromkeys(args))
    if not args:
        return TRUE
    return args[0] if len(args) == 1 else And(tuple(args))


def disj(*fs: Formula) -> Formula:
    args = []
    for f in fs:
        if f == FALSE:
            continue
        if f == TRUE:
            return TRUE
        if isinstance(f, Or):
            args.extend(f.args)
        else:
            args.append(f)
    args = list(dict.fromkeys(args))
    if not args:
        return FALSE
    return args[0] if len(args) == 1 else Or(tuple(args))


def _rel_holds(value, rel: str) -> bool:
    if rel == ">":
        return value > 0
    if rel == "<":
        return value < 0
    if rel == ">=":
        return value >= 0
    if rel == "<=":
        return value <= 0
    if rel == "=":
        return value == 0
    return value != 0


def holds(f: Formula, state: Mapping) -> bool:
    if isinstance(f, Atom):
        return _rel_holds(f.poly.evaluate(state), f.rel)
    if isinstance(f, And):
        return all(holds(a, state) for a in f.args)
    if isinstance(f, Or):
        return any(holds(a, state) for a in f.args)
    return f.value


def compile_formula(f: Formula):
    """Fast evaluator for integer states."""
    src = _formula_source(f)
    from .poly import _compile_expr

    return _compile_expr(src)


def _formula_source(f: Formula) -> str:
    if isinstance(f, Atom):
        op = {"=": "==", "!=": "!="}.get(f.rel, f.rel)
        return f"(({f.poly._expr_source()}) {op} 0)"
    if isinstance(f, And):
        return "(" + " and ".join(_formula_source(a) for a in f.args) + ")"
    if isinstance(f, Or):
        return "(" + " or ".join(_formula_source(a) for a in f.args) + ")"
    return "True" if f.value else "False"


def substitute(f: Formula, mapping: Mapping[str, Polynomial]) -> Formula:
    if isinstance(f, Atom):
        return Atom(f.poly.subs(mapping), f.rel)
    if isinstance(f, And):
        return conj(*(substitute(a, mapping) for a in f.args))
    if isinstance(f, Or):
        return disj(*(substitute(a, mapping) for a in f.args))
    return f


def atoms(f: Formula) -> list:
    if isinstance(f, Atom):
        return [f]
    if isinstance(f, (And, Or)):
        out = []
        for a in f.args:
            out.extend(atoms(a))
        return list(dict.fromkeys(out))
    return []


def variables(f: Formula) -> frozenset:
    vs: set = set()
    for a in atoms(f):
        vs |= a.poly.variables()
    return frozenset(vs)


def _normalize_atom(a: Atom) -> Formula:
    p, rel = a.poly, a.rel
    if p.is_constant():
        return TRUE if _rel_holds(p.constant_term(), rel) else FALSE
    # Integer semantics: p >= 0 iff p + 1 > 0.
    if rel == ">":
        return gt0(p)
    if rel == "<":
        return gt0(-p)
    if rel == ">=":
        return gt0(p + 1)
    if rel == "<=":
        return gt0(1 - p)
    if rel == "=":
        return conj(gt0(p + 1), gt0(1 - p))
    return disj(gt0(p), gt0(-p))


def normalize(f: Formula) -> Formula:
    """Rewrite every atom into the strict form ``0 < p``.

    Assumes integer-valued polynomials (all program guards are integral).
    """
    if isinstance(f, Atom):
        return _normalize_atom(f)
    if isinstance(f, And):
        return conj(*(normalize(a) for a in f.args))
    if isinstance(f, Or):
        return disj(*(normalize(a) for a in f.args))
    return f


def negate(f: Formula) -> Formula:
    """Negation, returned in normal form."""
    f = normalize(f)
    if isinstance(f, Atom):
        return gt0(1 - f.poly)
    if isinstance(f, And):
        return disj(*(negate(a) for a in f.args))
    if isinstance(f, Or):
        return conj(*(negate(a) for a in f.args))
    return BoolConst(not f.value)


def dnf(f: Formula, limit: int = 256):
    """Disjunctive normal form as a list of atom lists, or None past ``limit``."""
    f = normalize(f)
    if f == TRUE:
        return [[]]
    if f == FALSE:
        return []
    if isinstance(f, Atom):
        return [[f]]
    if isinstance(f, Or):
        out = []
        for a in f.args:
            sub = dnf(a, limit)
            if sub is None:
                return None
            out.extend(sub)
            if len(out) > limit:
                return None
        return out
    parts = []
    size = 1
    for a in f.args:
        sub = dnf(a, limit)
        if sub is None:
            return None
        size *= max(len(sub), 1)
        if size > limit:
            return None
        parts.append(sub)
    out = []
    for combo in product(*parts):
        out.append([atom for group in combo for atom in group])
    return out


def top_conjuncts(f: Formula) -> list:
    """Top-level conjuncts of ``f`` (a single formula if it is not an And)."""
    if isinstance(f, And):
        return list(f.args)
    if f == TRUE:
        return []
    return [f]
