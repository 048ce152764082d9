"""Local runtime bounds for simple cycles that chain into a twn loop."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import smt
from .ir.bounds import OMEGA, Bound
from .ir.program import Program, Transition, entry_transitions
from .twn.loops import chain, recognize_twn
from .twn_bounds import local_bound_twn, synthesize_update_invariant


@dataclass(frozen=True)
class EntryBound:
    entry: str
    bound: Bound
    psi: str
    note: str


def rotate_to(cycle: Sequence[Transition], loc: str) -> list:
    """The cycle rotated so that it starts at the transition leaving ``loc``."""
    cycle = list(cycle)
    for i, t in enumerate(cycle):
        if t.src == loc:
            return cycle[i:] + cycle[:i]
    raise ValueError(f"{loc} is not on the cycle")


def cycle_local_bounds(
    program: Program,
    cycle: Sequence[Transition],
    solver: smt.Solver | None = None,
    full_chained_guard: bool = False,
) -> dict:
    """Local runtime bound of the cycle for each of its entry transitions.

    For an entry reaching the cycle at location l the cycle is unrolled
    starting at l and chained into one loop.  A cycle of length > 1 gets an
    extra 1, since the guard may fail in the middle of the last round.
    """
    out = {}
    has_temps = any(program.temporaries(t) for t in cycle)
    for r in entry_transitions(program, cycle):
        if has_temps:
            out[r.id] = EntryBound(r.id, OMEGA, "true", "cycle uses temporaries")
            continue
        rotated = rotate_to(cycle, r.tgt)
        chained = chain(rotated) if len(rotated) > 1 else rotated[0]
        loop = recognize_twn(chained.guard, dict(chained.update))
        if loop is None:
            out[r.id] = EntryBound(r.id, OMEGA, "true", "not a twn loop")
            continue
        psi = synthesize_update_invariant(chained, r, loop.order, solver)
        loop = loop.with_psi(psi)
        res = local_bound_twn(loop, solver, full_chained_guard)
        bound = res.bound
        if len(cycle) > 1 and not bound.is_omega():
            bound = bound + Bound.const(1)
        out[r.id] = EntryBound(r.id, bound, str(psi), res.note)
    return out
