"""SMT-LIB2 subprocess backend (QF_NIA)."""

from __future__ import annotations

import shlex
import subprocess

from ..ir import formula as fm
from ..ir.poly import Polynomial, integerize


def poly_to_smt(p: Polynomial) -> str:
    p = integerize(p)
    if p.is_zero():
        return "0"
    terms = []
    for m, c in p.sorted_items():
        c = int(c)
        cs = str(c) if c >= 0 else f"(- {-c})"
        factors = []
        for v, e in m:
            factors.extend([_sym(v)] * e)
        if not factors:
            terms.append(cs)
        elif c == 1:
            terms.append(factors[0] if len(factors) == 1 else f"(* {' '.join(factors)})")
        else:
            terms.append(f"(* {cs} {' '.join(factors)})")
    return terms[0] if len(terms) == 1 else f"(+ {' '.join(terms)})"


def _sym(v: str) -> str:
    if v.replace("_", "").isalnum() and not v[0].isdigit():
        return v
    return f"|{v}|"


def formula_to_smt(f: fm.Formula) -> str:
    if isinstance(f, fm.Atom):
        op = {"!=": None}.get(f.rel, f.rel)
        body = poly_to_smt(f.poly)
        if op is None:
            return f"(not (= {body} 0))"
        return f"({op} {body} 0)"
    if isinstance(f, fm.And):
        return "(and " + " ".join(formula_to_smt(a) for a in f.args) + ")"
    if isinstance(f, fm.Or):
        return "(or " + " ".join(formula_to_smt(a) for a in f.args) + ")"
    return "true" if f.value else "false"


def script(f: fm.Formula) -> str:
    lines = ["(set-logic QF_NIA)"]
    for v in sorted(fm.variables(f)):
        lines.append(f"(declare-const {_sym(v)} Int)")
    lines.append(f"(assert {formula_to_smt(f)})")
    lines.append("(check-sat)")
    lines.append("(get-model)")
    return "\n".join(lines) + "\n"


def _tokens(text: str) -> list:
    return text.replace("(", " ( ").replace(")", " ) ").split()


def parse_model(text: str) -> dict:
    toks = _tokens(text)
    model = {}
    i = 0
    while i < len(toks):
        if toks[i] == "define-fun" and i + 5 < len(toks):
            name = toks[i + 1].strip("|")
            # name ( ) Int value
            j = i + 5
            if toks[j] == "(" and toks[j + 1] == "-":
                model[name] = -int(toks[j + 2])
                i = j + 4
                continue
            try:
                model[name] = int(toks[j])
            except ValueError:
                pass
            i = j + 1
            continue
        i += 1
    return model


def run(f: fm.Formula, command: str, timeout_ms: int):
    """Return ("sat", model), ("unsat", None) or ("unknown", reason)."""
    argv = shlex.split(command)
    if argv and argv[0].endswith("z3"):
        argv = argv + [f"-t:{timeout_ms}"]
    try:
        proc = subprocess.run(
            argv,
            input=script(f),
            capture_output=True,
            text=True,
            timeout=timeout_ms / 1000 + 1,
        )
    except (OSError, subprocess.TimeoutExpired) as exc:
        return "unknown", str(exc)
    out = proc.stdout.strip()
    first = out.split("\n", 1)[0].strip() if out else ""
    if first == "unsat":
        return "unsat", None
    if first == "sat":
        return "sat", parse_model(out)
    return "unknown", first or proc.stderr.strip()[:200]
