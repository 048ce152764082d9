"""Integer programs: locations, transitions and their control-flow graph."""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Dict, Iterable, Mapping, Union

import networkx as nx

from . import formula as fm
from .formula import TRUE, Formula
from .poly import Polynomial

State = Dict[str, int]


class ProgramError(ValueError):
    """A structurally invalid program."""


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str  # "program" or "temporary"


@dataclass(frozen=True, eq=False)
class Transition:
    """A guarded transition; variables absent from ``update`` keep their value."""

    id: str
    src: str
    tgt: str
    guard: Formula = TRUE
    update: Mapping[str, Polynomial] = field(default_factory=dict)

    def __post_init__(self):
        upd = {v: Polynomial.coerce(p) for v, p in dict(self.update).items()}
        upd = {v: p for v, p in upd.items() if p != Polynomial.var(v)}
        object.__setattr__(self, "update", MappingProxyType(dict(sorted(upd.items()))))

    def post(self, v: str) -> Polynomial:
        return self.update.get(v, Polynomial.var(v))

    def changed(self) -> frozenset:
        return frozenset(self.update)

    def variables(self) -> frozenset:
        vs = set(fm.variables(self.guard)) | set(self.update)
        for p in self.update.values():
            vs |= p.variables()
        return frozenset(vs)

    @property
    def is_self_loop(self) -> bool:
        return self.src == self.tgt

    def __eq__(self, other) -> bool:
        if not isinstance(other, Transition):
            return NotImplemented
        return (self.id, self.src, self.tgt, self.guard, dict(self.update)) == (
            other.id, other.src, other.tgt, other.guard, dict(other.update)
        )

    def __hash__(self) -> int:
        return hash((self.id, self.src, self.tgt))

    def __repr__(self) -> str:
        return f"Transition({self.id}: {self.src}->{self.tgt})"


@dataclass(frozen=True)
class Program:
    pv: tuple
    locations: tuple
    start: str
    transitions: tuple

    def __post_init__(self):
        object.__setattr__(self, "pv", tuple(self.pv))
        object.__setattr__(self, "locations", tuple(self.locations))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        if self.start not in self.locations:
            raise ProgramError(f"start location {self.start!r} is not a location")
        ids = [t.id for t in self.transitions]
        if len(set(ids)) != len(ids):
            raise ProgramError("duplicate transition ids")
        locs = set(self.locations)
        for t in self.transitions:
            if t.src not in locs or t.tgt not in locs:
                raise ProgramError(f"transition {t.id} uses an unknown location")
            if t.tgt == self.start:
                raise ProgramError(f"transition {t.id} enters the start location")
            for v in t.update:
                if v not in self.pv:
                    raise ProgramError(f"transition {t.id} updates non-program variable {v!r}")

    def transition(self, tid: str) -> Transition:
        for t in self.transitions:
            if t.id == tid:
                return t
        raise KeyError(tid)

    def __getitem__(self, tid: str) -> Transition:
        return self.transition(tid)

    def outgoing(self, loc: str) -> list:
        return [t for t in self.transitions if t.src == loc]

    def incoming(self, loc: str) -> list:
        return [t for t in self.transitions if t.tgt == loc]

    def initial_transitions(self) -> list:
        return self.outgoing(self.start)

    def temporaries(self, t: Transition) -> frozenset:
        return frozenset(v for v in t.variables() if v not in self.pv)

    def variables(self) -> list:
        out = [Variable(v, "program") for v in self.pv]
        temps = sorted({v for t in self.transitions for v in self.temporaries(t)})
        return out + [Variable(v, "temporary") for v in temps]

    def rename_transitions(self, mapping: Mapping[str, str]) -> "Program":
        ts = [Transition(mapping.get(t.id, t.id), t.src, t.tgt, t.guard, t.update) for t in self.transitions]
        return Program(self.pv, self.locations, self.start, ts)


def apply_update(target: Union[Polynomial, Formula], update: Mapping[str, Polynomial]):
    """Replace each variable by its update (identity for absent ones)."""
    if isinstance(target, Polynomial):
        return target.subs(update)
    return fm.substitute(target, update)


def entry_transitions(program: Program, sub: Iterable[Transition]) -> list:
    """Transitions outside ``sub`` that enter the source of some transition of ``sub``."""
    sub = list(sub)
    ids = {t.id for t in sub}
    sources = {t.src for t in sub}
    return [t for t in program.transitions if t.id not in ids and t.tgt in sources]


def location_graph(program: Program) -> nx.MultiDiGraph:
    g = nx.MultiDiGraph()
    g.add_nodes_from(program.locations)
    for t in program.transitions:
        g.add_edge(t.src, t.tgt, key=t.id)
    return g


def _location_sccs(program: Program, transitions=None):
    transitions = program.transitions if transitions is None else transitions
    g = nx.DiGraph()
    g.add_nodes_from(program.locations)
    g.add_edges_from((t.src, t.tgt) for t in transitions)
    cond = nx.condensation(g)
    order = {loc: i for i, loc in enumerate(program.locations)}
    topo = nx.lexicographical_topological_sort(
        cond, key=lambda n: min(order[loc] for loc in cond.nodes[n]["members"])
    )
    return [cond.nodes[n]["members"] for n in topo]


def sccs_topological(program: Program, transitions: Iterable[Transition] | None = None) -> list:
    """Non-trivial transition SCCs in topological order.

    An SCC is the list of transitions whose endpoints lie in the same
    strongly connected set of locations; SCCs without transitions are skipped.
    ``transitions`` restricts the graph to a subset.
    """
    ts_all = program.transitions if transitions is None else list(transitions)
    out = []
    for members in _location_sccs(program, ts_all):
        ts = [t for t in ts_all if t.src in members and t.tgt in members]
        if ts:
            out.append(ts)
    return out


def in_cycle(program: Program, t: Transition) -> bool:
    return any(t in scc for scc in sccs_topological(program))


def transitions_in_cycles(program: Program) -> set:
    return {t.id for scc in sccs_topological(program) for t in scc}


def simple_cycles_through(program: Program, t: Transition, max_len: int = 6) -> list:
    """Simple cycles (pairwise distinct locations) containing ``t``, as transition lists.

    Each cycle starts with ``t``; results are sorted by length, then ids.
    """
    if t.is_self_loop:
        return [[t]]
    out = []

    def dfs(loc: str, path: list, seen: set):
        if len(path) > max_len:
            return
        for r in program.outgoing(loc):
            if r.tgt == t.src:
                if len(path) + 1 <= max_len:
                    out.append(path + [r])
            elif r.tgt not in seen and r.src != r.tgt:
                dfs(r.tgt, path + [r], seen | {r.tgt})

    dfs(t.tgt, [t], {t.src, t.tgt})
    out.sort(key=lambda c: (len(c), [x.id for x in c]))
    return out
