"""Shared loop fixtures: tnn loops with mixed self-coefficients and general twn loops."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from polybound.frontend import load, parse_its
from polybound.ir import TRUE, compare, conj, const, var
from polybound.twn.loops import recognize_twn

CORPUS = Path(__file__).parent / "corpus"


def corpus_files():
    return sorted(CORPUS.glob("*.koat"))


def corpus(name: str):
    return load(str(CORPUS / f"{name}.koat"))


x, y, z = var("x"), var("y"), var("z")
x1, x2, x3 = var("x1"), var("x2"), var("x3")
GT = lambda a, b: compare(a, ">", b)  # noqa: E731
LT = lambda a, b: compare(a, "<", b)  # noqa: E731
NE = lambda a, b: compare(a, "!=", b)  # noqa: E731


@dataclass(frozen=True)
class LoopFixture:
    name: str
    loop: object

    @property
    def variables(self):
        return self.loop.order


def _fix(name, guard, update, psi=TRUE):
    loop = recognize_twn(guard, update, psi)
    assert loop is not None, name
    return LoopFixture(name, loop)


def tnn_loops():
    """Terminating tnn loops covering self-coefficients 0, 1 and >= 2."""
    squared = {"x1": 4 * x1, "x2": 9 * x2 - 8 * x3**3, "x3": x3}
    squared_guard = conj(LT(x3**5 + x1**2, x2), NE(x1, const(0)))
    return [
        _fix("countdown", GT(x, const(0)), {"x": x - 1}),
        _fix("doubling", conj(GT(x, const(0)), LT(x, y)), {"x": 2 * x}),
        _fix("square_root", LT(x**2, y), {"x": x + 1}),
        _fix("quadratic_drift", conj(GT(x, const(0)), GT(y, const(0))), {"x": x - y**2}),
        _fix("shift", GT(x, const(0)), {"x": y, "y": const(0)}),
        _fix("sum_down", GT(x + y, const(0)), {"x": x - 1, "y": y - 1}),
        _fix("phase_change", GT(x, const(0)), {"x": x + y, "y": y - 1}),
        _fix("triple_plus_one", conj(GT(x, const(0)), LT(x, y)), {"x": 3 * x + 1}),
        _fix("drain_square", GT(z, const(0)), {"z": z - x**2, "x": x + 1}),
        _fix("zero_then_double", conj(GT(y, const(0)), LT(y, const(5))), {"x": const(0), "y": 2 * y + x}),
        _fix("chained_nest", squared_guard, squared),
        _fix("chained_nest_psi", squared_guard, squared, GT(x3, const(0))),
    ]


def twn_loops():
    """Terminating twn loops, some with negative self-coefficients."""
    return [
        _fix("nest_loop", conj(LT(x1**2 + x3**5, x2), NE(x1, const(0))), {"x1": -2 * x1, "x2": 3 * x2 - 2 * x3**3}),
        _fix("alternating_sign", conj(GT(y, const(0)), NE(x, const(0))), {"x": -x, "y": y - x**2}),
        _fix("flip_once", GT(x, const(0)), {"x": -x}),
        _fix("flip_shift", conj(GT(x, const(0)), GT(y, const(0))), {"x": 1 - x, "y": y - 1}),
        _fix("grow_alternating", conj(LT(x**2, y), NE(x, const(0))), {"x": -2 * x}),
        _fix("countdown", GT(x, const(0)), {"x": x - 1}),
    ]


def loop_program(loop):
    """A two-location program that enters ``loop`` once; its loop transition is t1."""
    vs = ",".join(loop.order)
    upd = ",".join(str(loop.update.get(v, var(v))) for v in loop.order)
    text = f"""(GOAL COMPLEXITY)
(STARTTERM (FUNCTIONSYMBOLS l0))
(VAR {' '.join(loop.order)})
(RULES
  l0({vs}) -> l1({vs})
  l1({vs}) -> l1({upd}) :|: {loop.guard}
)
"""
    return parse_its(text)
