"""Single-path loops in triangular weakly non-linear (twn) form."""

from __future__ import annotations

from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter
from typing import Mapping, Sequence

from ..ir import formula as fm
from ..ir.formula import TRUE, Formula
from ..ir.poly import Polynomial
from ..ir.program import Transition


@dataclass(frozen=True)
class TwnLoop:
    """``while guard do update`` started in states satisfying ``psi``.

    ``order`` lists the variables so that the update of ``order[i]`` is
    ``c_i * order[i] + p_i`` where ``p_i`` only mentions later variables.
    """

    psi: Formula
    guard: Formula
    update: Mapping[str, Polynomial]
    order: tuple

    def parts(self, v: str):
        return decompose(self.update[v], v)

    @property
    def is_tnn(self) -> bool:
        return all(self.parts(v)[0] >= 0 for v in self.order)

    def with_psi(self, psi: Formula) -> "TwnLoop":
        return TwnLoop(psi, self.guard, self.update, self.order)


def decompose(p: Polynomial, v: str):
    """Split ``p`` as ``c*v + rest`` with ``v`` not in ``rest``; None if impossible."""
    c = 0
    rest = {}
    for m, coef in p.items():
        exps = dict(m)
        if v in exps:
            if m != ((v, 1),):
                return None
            c = coef
        else:
            rest[m] = coef
    return c, Polynomial(rest)


def recognize_twn(guard: Formula, update: Mapping[str, Polynomial], psi: Formula = TRUE):
    """Return a TwnLoop (with a triangular variable order) or None."""
    vs = set(fm.variables(guard)) | set(fm.variables(psi))
    for v, p in update.items():
        if p != Polynomial.var(v):
            vs.add(v)
            vs |= p.variables()
    full = {v: update.get(v, Polynomial.var(v)) for v in vs}
    deps = {}
    for v in sorted(vs):
        parts = decompose(full[v], v)
        if parts is None:
            return None
        c, rest = parts
        if c.denominator != 1 or not rest.is_integral():
            return None
        deps[v] = sorted(rest.variables())
    try:
        topo = list(TopologicalSorter(deps).static_order())
    except CycleError:
        return None
    order = tuple(reversed(topo))
    return TwnLoop(psi, guard, full, order)


def loop_of_transition(t: Transition, psi: Formula = TRUE):
    return recognize_twn(t.guard, dict(t.update), psi)


def compose_updates(first: Mapping[str, Polynomial], second: Mapping[str, Polynomial]) -> dict:
    """Update performing ``first`` and then ``second``."""
    out = {}
    for v in set(first) | set(second):
        out[v] = second.get(v, Polynomial.var(v)).subs(first)
    return {v: p for v, p in out.items() if p != Polynomial.var(v)}


def chain(ts: Sequence[Transition], tid: str | None = None) -> Transition:
    """Sequential composition of consecutive transitions into one transition."""
    guard = ts[0].guard
    upd = dict(ts[0].update)
    for t in ts[1:]:
        guard = fm.conj(guard, fm.substitute(t.guard, upd))
        upd = compose_updates(upd, dict(t.update))
    return Transition(tid or "*".join(t.id for t in ts), ts[0].src, ts[-1].tgt, guard, upd)


def square(loop: TwnLoop, full_guard: bool = False) -> TwnLoop:
    """The loop unrolled twice; its coefficients are squares, so it is tnn.

    By default the guard of the second iteration is dropped, which can only
    lengthen runs; ``full_guard`` keeps the exact conjunction.
    """
    upd2 = {v: loop.update[v].subs(loop.update) for v in loop.order}
    guard = loop.guard
    if full_guard:
        guard = fm.conj(guard, fm.substitute(loop.guard, loop.update))
    return TwnLoop(loop.psi, guard, upd2, loop.order)
