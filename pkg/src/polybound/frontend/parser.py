"""Reader and printer for the TPDB/KoAT integer transition system format."""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product

from ..ir import formula as fm
from ..ir.poly import Polynomial
from ..ir.program import Program, ProgramError, Transition


class InputError(ValueError):
    """Base class for user-facing input problems."""


class ParseError(InputError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


class SemanticError(InputError):
    pass


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<cost>-\{[^}]*\}>)
  | (?P<op>->|:\|:|&&|\|\||/\\|<=|>=|==|!=|\*\*|[()<>=+\-*^,])
  | (?P<num>\d+)
  | (?P<id>[A-Za-z_][A-Za-z0-9_'.]*)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list:
    out = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("ws", "comment"):
            out.append(Token(kind, chunk, line, pos - line_start + 1))
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


_RELS = {"<": "<", "<=": "<=", ">": ">", ">=": ">=", "=": "=", "==": "=", "!=": "!="}


@dataclass
class _Rule:
    lhs: str
    lhs_args: list
    rhs: str
    rhs_args: list
    guard: fm.Formula
    token: Token


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.col)

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if self.tok.text != text:
            self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.next()

    def ident(self) -> str:
        if self.tok.kind != "id":
            self.error(f"expected identifier, found {self.tok.text or 'end of input'!r}")
        return self.next().text

    # sections ---------------------------------------------------------
    def file(self):
        start = None
        rules = None
        declared = []
        while self.tok.kind != "eof":
            self.expect("(")
            head = self.ident()
            if head == "GOAL":
                self.ident()
                self.expect(")")
            elif head == "STARTTERM":
                self.expect("(")
                kind = self.ident()
                if kind != "FUNCTIONSYMBOLS":
                    self.error("only (STARTTERM (FUNCTIONSYMBOLS ...)) is supported")
                start = self.ident()
                self.expect(")")
                self.expect(")")
            elif head == "VAR":
                while self.tok.kind == "id":
                    declared.append(self.next().text)
                self.expect(")")
            elif head == "RULES":
                rules = []
                while self.tok.text != ")":
                    if self.tok.kind == "eof":
                        self.error("unterminated RULES section")
                    rules.append(self.rule())
                self.expect(")")
            elif head == "COMMENT":
                depth = 1
                while depth:
                    t = self.next()
                    if t.kind == "eof":
                        self.error("unterminated COMMENT")
                    depth += {"(": 1, ")": -1}.get(t.text, 0)
            else:
                self.error(f"unknown section {head!r}")
        return start, declared, rules

    def rule(self) -> _Rule:
        tok = self.tok
        lhs = self.ident()
        self.expect("(")
        lhs_args = []
        if self.tok.text != ")":
            lhs_args.append(self.ident())
            while self.tok.text == ",":
                self.next()
                lhs_args.append(self.ident())
        self.expect(")")
        if self.tok.kind == "cost":
            self.error("rule costs are not supported")
        self.expect("->")
        rhs, rhs_args = self.rhs()
        guard = fm.TRUE
        if self.tok.text == ":|:":
            self.next()
            guard = self.disjunction()
        return _Rule(lhs, lhs_args, rhs, rhs_args, guard, tok)

    def rhs(self):
        name = self.ident()
        if re.fullmatch(r"Com_\d+", name):
            self.expect("(")
            if name != "Com_1":
                self.error(f"{name}: branching right-hand sides are not supported")
            inner = self.rhs()
            self.expect(")")
            return inner
        self.expect("(")
        args = []
        if self.tok.text != ")":
            args.append(self.expr())
            while self.tok.text == ",":
                self.next()
                args.append(self.expr())
        self.expect(")")
        return name, args

    # formulas ---------------------------------------------------------
    def disjunction(self) -> fm.Formula:
        parts = [self.conjunction()]
        while self.tok.text == "||":
            self.next()
            parts.append(self.conjunction())
        return fm.disj(*parts)

    def conjunction(self) -> fm.Formula:
        parts = [self.unit()]
        while self.tok.text in ("&&", "/\\"):
            self.next()
            parts.append(self.unit())
        return fm.conj(*parts)

    def unit(self) -> fm.Formula:
        if self.tok.kind == "id" and self.tok.text in ("TRUE", "true"):
            self.next()
            return fm.TRUE
        if self.tok.kind == "id" and self.tok.text in ("FALSE", "false"):
            self.next()
            return fm.FALSE
        if self.tok.text == "(":
            save = self.i
            try:
                self.next()
                inner = self.disjunction()
                self.expect(")")
                if self.tok.text not in _RELS and self.tok.text not in ("+", "-", "*", "^", "**"):
                    return inner
            except ParseError:
                pass
            self.i = save
        return self.comparison()

    def comparison(self) -> fm.Formula:
        left = self.expr()
        if self.tok.text not in _RELS:
            self.error(f"expected a comparison operator, found {self.tok.text or 'end of input'!r}")
        atoms = []
        while self.tok.text in _RELS:
            rel = _RELS[self.next().text]
            right = self.expr()
            atoms.append(fm.compare(left, rel, right))
            left = right
        return fm.conj(*atoms)

    # arithmetic -------------------------------------------------------
    def expr(self) -> Polynomial:
        p = self.term()
        while self.tok.text in ("+", "-"):
            op = self.next().text
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Polynomial:
        p = self.factor()
        while self.tok.text == "*":
            self.next()
            p = p * self.factor()
        return p

    def factor(self) -> Polynomial:
        if self.tok.text == "-":
            self.next()
            return -self.factor()
        base = self.atom()
        if self.tok.text in ("^", "**"):
            self.next()
            if self.tok.kind != "num":
                self.error("exponent must be a natural number")
            base = base ** int(self.next().text)
        return base

    def atom(self) -> Polynomial:
        t = self.tok
        if t.kind == "num":
            self.next()
            return Polynomial.const(int(t.text))
        if t.kind == "id":
            self.next()
            return Polynomial.var(t.text)
        if t.text == "(":
            self.next()
            p = self.expr()
            self.expect(")")
            return p
        self.error(f"unexpected {t.text or 'end of input'!r} in expression")


def parse_its(text: str, neq_mode: str = "guard") -> Program:
    """Parse a KoAT-style ITS.

    Transition ids are ``t0, t1, ...`` in rule order.  Variables of a rule
    that are not among its left-hand-side arguments are temporaries.  With
    ``neq_mode="split"`` each disequality produces separate transitions
    instead of an in-guard disjunction.
    """
    parser = _Parser(text)
    start, _declared, rules = parser.file()
    if rules is None or not rules:
        raise SemanticError("the RULES section is missing or empty")
    if start is None:
        start = rules[0].lhs
    arity = len(rules[0].lhs_args)
    pv = None
    locations = [start]
    transitions = []
    for idx, r in enumerate(rules):
        if len(r.lhs_args) != arity or len(r.rhs_args) != arity:
            raise SemanticError(f"rule {idx + 1} (line {r.token.line}): arity mismatch, expected {arity} arguments")
        if len(set(r.lhs_args)) != arity:
            raise SemanticError(f"rule {idx + 1} (line {r.token.line}): repeated left-hand-side variable")
        if pv is None:
            pv = list(r.lhs_args)
        if r.rhs == start:
            raise SemanticError(f"rule {idx + 1} (line {r.token.line}): rules must not enter the start location {start}")
        for loc in (r.lhs, r.rhs):
            if loc not in locations:
                locations.append(loc)
        rename = {a: Polynomial.var(p) for a, p in zip(r.lhs_args, pv)}
        used = set(fm.variables(r.guard))
        for a in r.rhs_args:
            used |= a.variables()
        for v in sorted(used - set(r.lhs_args)):
            fresh = v
            while fresh in pv or fresh in {str(x) for x in rename.values()}:
                fresh = fresh + "'"
            rename[v] = Polynomial.var(fresh)
        guard = fm.substitute(r.guard, rename)
        update = {pv[i]: a.subs(rename) for i, a in enumerate(r.rhs_args)}
        guards = [guard]
        if neq_mode == "split":
            guards = _split_neq(guard)
        for j, g in enumerate(guards):
            tid = f"t{idx}" if len(guards) == 1 else f"t{idx}_{j}"
            transitions.append(Transition(tid, r.lhs, r.rhs, g, update))
    if start not in {r.lhs for r in rules}:
        raise SemanticError(f"start location {start} has no outgoing rule")
    try:
        return Program(tuple(pv), tuple(locations), start, tuple(transitions))
    except ProgramError as exc:
        raise SemanticError(str(exc)) from exc


def _split_neq(guard: fm.Formula) -> list:
    conjuncts = fm.top_conjuncts(guard)
    options = []
    for c in conjuncts:
        if isinstance(c, fm.Atom) and c.rel == "!=":
            options.append([fm.Atom(c.poly, ">"), fm.Atom(c.poly, "<")])
        else:
            options.append([c])
    return [fm.conj(*combo) for combo in product(*options)] or [guard]


def print_its(program: Program) -> str:
    pv = ",".join(program.pv)
    temps = sorted({v for t in program.transitions for v in program.temporaries(t)})
    lines = [
        "(GOAL COMPLEXITY)",
        f"(STARTTERM (FUNCTIONSYMBOLS {program.start}))",
        "(VAR " + " ".join(list(program.pv) + temps) + ")",
        "(RULES",
    ]
    for t in program.transitions:
        args = ",".join(str(t.post(v)) for v in program.pv)
        rule = f"  {t.src}({pv}) -> {t.tgt}({args})"
        if t.guard != fm.TRUE:
            rule += f" :|: {_guard_str(t.guard)}"
        lines.append(rule)
    lines.append(")")
    return "\n".join(lines) + "\n"


def _guard_str(f: fm.Formula) -> str:
    if isinstance(f, fm.Atom):
        return f"{f.poly} {f.rel} 0"
    if isinstance(f, fm.And):
        return " && ".join(_wrap(a) for a in f.args)
    if isinstance(f, fm.Or):
        return " || ".join(_wrap(a) for a in f.args)
    return "TRUE" if f.value else "FALSE"


def _wrap(f: fm.Formula) -> str:
    return f"({_guard_str(f)})" if isinstance(f, (fm.And, fm.Or)) else _guard_str(f)


def load(path: str, neq_mode: str = "guard") -> Program:
    with open(path, encoding="utf-8") as fh:
        return parse_its(fh.read(), neq_mode)
