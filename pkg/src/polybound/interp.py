"""Exhaustive small-step interpreter used as a ground-truth oracle.

Runs branch on every enabled transition and on every value of a temporary
inside ``temp_range``.  Exploration is memoized on configurations, so the
per-transition maxima are taken over all runs without enumerating them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Iterable, Mapping, Optional

from .ir import formula as fm
from .ir.bounds import Bound
from .ir.program import Program, State, Transition

DEFAULT_TEMP_RANGE = (-2, 2)
DEFAULT_DEPTH_CAP = 10_000


@dataclass(frozen=True)
class RunStats:
    max_counts: dict
    runs: int
    truncated: bool
    configurations: int


class Verdict(Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class SoundnessReport:
    verdict: Verdict
    violations: list = field(default_factory=list)
    stats: Optional[RunStats] = None


class _Compiled:
    def __init__(self, program: Program, t: Transition):
        self.t = t
        self.guard = fm.compile_formula(t.guard)
        self.updates = [(v, p.compile()) for v, p in t.update.items()]
        self.temps = sorted(program.temporaries(t))


class Machine:
    """Successor computation for one program (compiled once)."""

    def __init__(self, program: Program, temp_range=DEFAULT_TEMP_RANGE, transitions: Iterable[Transition] | None = None):
        self.program = program
        self.pv = program.pv
        allowed = None if transitions is None else {t.id for t in transitions}
        self.out: dict = {}
        for t in program.transitions:
            if allowed is None or t.id in allowed:
                self.out.setdefault(t.src, []).append(_Compiled(program, t))
        self.temp_values = list(range(temp_range[0], temp_range[1] + 1))
        self.index = {t.id: i for i, t in enumerate(program.transitions)}

    def successors(self, loc: str, values: tuple) -> list:
        base = dict(zip(self.pv, values))
        seen = set()
        out = []
        for ct in self.out.get(loc, ()):
            choices = product(self.temp_values, repeat=len(ct.temps)) if ct.temps else [()]
            for tv in choices:
                s = dict(base)
                s.update(zip(ct.temps, tv))
                if not ct.guard(s):
                    continue
                post = dict(base)
                for v, fn in ct.updates:
                    val = fn(s)
                    post[v] = int(val)
                key = (ct.t.id, ct.t.tgt, tuple(post[v] for v in self.pv))
                if key not in seen:
                    seen.add(key)
                    out.append(key)
        return out


def step(program: Program, loc: str, state: Mapping[str, int], temp_range=DEFAULT_TEMP_RANGE) -> list:
    """All (transition id, target, successor state) triples."""
    m = Machine(program, temp_range)
    values = tuple(state[v] for v in program.pv)
    return [(tid, tgt, dict(zip(program.pv, vals))) for tid, tgt, vals in m.successors(loc, values)]


def explore_runs(
    program: Program,
    sigma0: Mapping[str, int],
    temp_range=DEFAULT_TEMP_RANGE,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    start: str | None = None,
    transitions: Iterable[Transition] | None = None,
    machine: Machine | None = None,
) -> RunStats:
    """Maximal per-transition use counts over all runs from ``(start, sigma0)``.

    ``truncated`` is set when a configuration repeats along a run (an infinite
    run) or when more than ``depth_cap`` configurations would be explored.
    """
    m = machine or Machine(program, temp_range, transitions)
    nt = len(program.transitions)
    idx = m.index
    root = (start or program.start, tuple(sigma0[v] for v in program.pv))
    memo: dict = {}
    on_stack: set = set()
    truncated = False
    zero = (0,) * nt

    stack = [[root, None, 0, list(zero), 0]]
    on_stack.add(root)
    result = None
    while stack:
        frame = stack[-1]
        key = frame[0]
        if frame[1] is None:
            frame[1] = m.successors(*key)
        succs = frame[1]
        if frame[2] < len(succs):
            tid, tgt, vals = succs[frame[2]]
            frame[2] += 1
            child = (tgt, vals)
            if child in on_stack:
                truncated = True
                continue
            if child in memo:
                _merge(frame, memo[child], idx[tid])
                continue
            if len(memo) + len(stack) >= depth_cap:
                truncated = True
                continue
            stack.append([child, None, 0, list(zero), 0])
            on_stack.add(child)
            frame.append((tid,))  # edge pending until the child returns
            continue
        # all successors processed
        runs = frame[4] or 1
        res = (tuple(frame[3]), runs)
        memo[key] = res
        on_stack.discard(key)
        stack.pop()
        if stack:
            parent = stack[-1]
            tid = parent.pop()[0]
            _merge(parent, res, idx[tid])
        else:
            result = res
    counts = {t.id: result[0][i] for i, t in enumerate(program.transitions)}
    return RunStats(counts, result[1], truncated, len(memo))


def _merge(frame: list, child_res, ti: int):
    vec, runs = child_res
    acc = frame[3]
    for i, c in enumerate(vec):
        if i == ti:
            c += 1
        if c > acc[i]:
            acc[i] = c
    frame[4] += runs


def reachable_edges(
    program: Program,
    sigma0: Mapping[str, int],
    temp_range=DEFAULT_TEMP_RANGE,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    machine: Machine | None = None,
):
    """All distinct (transition id, pre-config, post-state) edges reachable from the start.

    Returns (edges, truncated); states are dicts over the program variables.
    """
    m = machine or Machine(program, temp_range)
    root = (program.start, tuple(sigma0[v] for v in program.pv))
    seen = {root}
    frontier = [root]
    edges = []
    truncated = False
    while frontier:
        nxt = []
        for loc, vals in frontier:
            for tid, tgt, post in m.successors(loc, vals):
                edges.append((tid, (loc, dict(zip(program.pv, vals))), dict(zip(program.pv, post))))
                child = (tgt, post)
                if child not in seen:
                    if len(seen) >= depth_cap:
                        truncated = True
                        continue
                    seen.add(child)
                    nxt.append(child)
        frontier = nxt
    return edges, truncated


def max_post_sizes(program: Program, sigma0: Mapping[str, int], temp_range=DEFAULT_TEMP_RANGE, depth_cap: int = DEFAULT_DEPTH_CAP):
    """Largest absolute value of each variable right after each transition."""
    edges, truncated = reachable_edges(program, sigma0, temp_range, depth_cap)
    out: dict = {}
    for tid, _, post in edges:
        for v, x in post.items():
            k = (tid, v)
            out[k] = max(out.get(k, 0), abs(x))
    return out, truncated


def sizes_of(state: Mapping[str, int]) -> dict:
    return {v: abs(x) for v, x in state.items()}


def check_bound_soundness(
    program: Program,
    bounds: Mapping[str, Bound],
    sigma0: Mapping[str, int],
    temp_range=DEFAULT_TEMP_RANGE,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    machine: Machine | None = None,
) -> SoundnessReport:
    """Compare claimed global runtime bounds with exhaustive exploration.

    A violation is a FAIL even under truncation (observed counts are lower
    bounds); otherwise truncation yields INCONCLUSIVE, never PASS.
    """
    stats = explore_runs(program, sigma0, temp_range, depth_cap, machine=machine)
    sizes = sizes_of(sigma0)
    violations = []
    for tid, b in bounds.items():
        val = b.evaluate(sizes)
        if val != math.inf and stats.max_counts[tid] > val:
            violations.append((tid, stats.max_counts[tid], val))
    if violations:
        return SoundnessReport(Verdict.FAIL, violations, stats)
    if stats.truncated:
        return SoundnessReport(Verdict.INCONCLUSIVE, [], stats)
    return SoundnessReport(Verdict.PASS, [], stats)


def run_trace(program: Program, sigma0: Mapping[str, int], choices: Iterable[str], temps: Mapping | None = None) -> list:
    """Follow the given transition ids deterministically; returns the visited states."""
    state: State = dict(sigma0)
    loc = program.start
    trace = [(loc, dict(state))]
    for tid in choices:
        t = program.transition(tid)
        if t.src != loc:
            raise ValueError(f"{tid} does not leave {loc}")
        s = dict(state)
        s.update(temps or {})
        if not fm.holds(t.guard, s):
            raise ValueError(f"guard of {tid} is false in {state}")
        state = {v: int(t.post(v).evaluate(s)) for v in program.pv}
        loc = t.tgt
        trace.append((loc, dict(state)))
    return trace
