"""Satisfiability and entailment over integer polynomial arithmetic.

The built-in backend is tried first because it is cheap and never spawns a
process; an external SMT-LIB solver is consulted when it cannot decide.
Both backends are sound for unsatisfiability, and every reported model is
re-checked by evaluation.
"""

from __future__ import annotations

import shutil
import shlex
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from ..ir import formula as fm
from . import builtin, smtlib


@dataclass(frozen=True)
class Sat:
    model: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Unsat:
    pass


@dataclass(frozen=True)
class Unknown:
    reason: str = ""


class Entailment(Enum):
    PROVEN = "proven"
    UNKNOWN = "unknown"


@dataclass
class SolverConfig:
    command: Optional[str] = "z3 -in"
    timeout_ms: int = 5000
    use_external: bool = True


class Solver:
    def __init__(self, config: SolverConfig | None = None):
        self.config = config or SolverConfig()
        self._cache: dict = {}
        self.external_calls = 0
        cmd = self.config.command
        self._external_ok = bool(
            self.config.use_external and cmd and shutil.which(shlex.split(cmd)[0])
        )

    def check_sat(self, f: fm.Formula):
        f = fm.normalize(f)
        key = str(f)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        res = self._check(f)
        self._cache[key] = res
        return res

    def _check(self, f: fm.Formula):
        if f == fm.TRUE:
            return Sat({})
        if f == fm.FALSE:
            return Unsat()
        refuted = builtin.refute(f)
        if refuted:
            return Unsat()
        if self._external_ok:
            self.external_calls += 1
            status, payload = smtlib.run(f, self.config.command, self.config.timeout_ms)
            if status == "unsat":
                return Unsat()
            if status == "sat":
                model = {v: payload.get(v, 0) for v in fm.variables(f)}
                if fm.holds(f, model):
                    return Sat(model)
        model = builtin.search_model(f)
        if model is not None:
            return Sat(model)
        return Unknown("undecided")

    def entails(self, phi: fm.Formula, psi: fm.Formula) -> Entailment:
        """PROVEN iff ``phi and not psi`` is unsatisfiable."""
        res = self.check_sat(fm.conj(fm.normalize(phi), fm.negate(psi)))
        return Entailment.PROVEN if isinstance(res, Unsat) else Entailment.UNKNOWN

    def proves(self, phi: fm.Formula, psi: fm.Formula) -> bool:
        return self.entails(phi, psi) is Entailment.PROVEN


_default = None


def default_solver() -> Solver:
    global _default
    if _default is None:
        _default = Solver()
    return _default


def configure(command: Optional[str] = "z3 -in", timeout_ms: int = 5000, use_external: bool = True) -> Solver:
    global _default
    _default = Solver(SolverConfig(command, timeout_ms, use_external))
    return _default


def check_sat(f: fm.Formula, solver: Solver | None = None):
    return (solver or default_solver()).check_sat(f)


def entails(phi: fm.Formula, psi: fm.Formula, solver: Solver | None = None) -> Entailment:
    return (solver or default_solver()).entails(phi, psi)


def builtin_only() -> Solver:
    return Solver(SolverConfig(None, 0, False))
