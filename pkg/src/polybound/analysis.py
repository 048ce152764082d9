"""Whole-program runtime-bound inference."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import smt
from .cycles import cycle_local_bounds
from .ir.bounds import OMEGA, ONE, Bound, ComplexityClass, bound_sum, classify
from .ir.program import Program, entry_transitions, sccs_topological, simple_cycles_through
from .rank import location_invariants, synthesize_rf
from .sizebounds import compute_size_bounds

TECHNIQUES = ("twn", "rf", "twn+rf")


@dataclass
class AnalysisResult:
    program: Program
    runtime: dict
    size: dict
    overall: Bound
    complexity: ComplexityClass
    proof: list = field(default_factory=list)
    local: dict = field(default_factory=dict)


@dataclass
class Options:
    technique: str = "twn+rf"
    cycle_max_len: int = 6
    full_chained_guard: bool = False
    passes: int = 2


class _Analyzer:
    def __init__(self, program: Program, options: Options, solver: smt.Solver):
        self.p = program
        self.opt = options
        self.solver = solver
        cyclic = {t.id for scc in sccs_topological(program) for t in scc}
        self.rb = {t.id: (OMEGA if t.id in cyclic else ONE) for t in program.transitions}
        self.sb = compute_size_bounds(program)
        self.proof = []
        self.local = {}
        self._cycle_cache = {}
        for t in program.transitions:
            if t.id not in cyclic:
                self.proof.append(f"{t.id}: 1 (on no cycle)")

    def lift(self, entries, local_of) -> Bound:
        """sum over entries r of RB(r) * local(r)[v := SB(r, v)]."""
        total = Bound()
        for r in entries:
            loc = local_of(r)
            sizes = {v: self.sb[(r.id, v)] for v in self.p.pv}
            total = total + self.rb[r.id] * loc.subst(sizes)
        return total

    def improve(self, tid: str, new: Bound, why: str) -> bool:
        if classify(new) < classify(self.rb[tid]):
            self.rb[tid] = new
            self.proof.append(f"{tid}: {new} ({why})")
            return True
        return False

    def rf_phase(self, scc, inv):
        self._rf_on(scc, inv)
        # nested loops: rank the still-unbounded part on its own, entered from the rest
        rest = [t for t in scc if self.rb[t.id].is_omega()]
        for sub in sccs_topological(self.p, rest):
            if len(sub) < len(scc):
                self._rf_on(sub, inv)

    def _rf_on(self, scc, inv):
        unbounded = [t for t in scc if self.rb[t.id].is_omega()]
        if not unbounded:
            return
        entries = entry_transitions(self.p, scc)
        attempts = [unbounded] + ([[t] for t in unbounded] if len(unbounded) > 1 else [])
        for strict in attempts:
            if all(not self.rb[t.id].is_omega() for t in strict):
                continue
            rf = synthesize_rf(self.p, scc, strict, inv, entries)
            if rf is None:
                continue
            glob = self.lift(entries, lambda r: rf.bound_at(r.tgt))
            for t in strict:
                self.improve(t.id, glob, f"ranking function {rf}")
            if strict is unbounded:
                break

    def predecessor_phase(self, scc):
        for t in scc:
            if not self.rb[t.id].is_omega() or t.is_self_loop:
                continue
            preds = [r for r in self.p.incoming(t.src) if not r.is_self_loop]
            new = bound_sum(self.rb[r.id] for r in preds)
            if not new.is_omega():
                self.improve(t.id, new, "sum over transitions entering " + t.src)

    def cycle_candidate(self, cycle):
        key = tuple(sorted(t.id for t in cycle))
        if key not in self._cycle_cache:
            self._cycle_cache[key] = cycle_local_bounds(self.p, cycle, self.solver, self.opt.full_chained_guard)
        locals_ = self._cycle_cache[key]
        entries = entry_transitions(self.p, cycle)
        if any(locals_[r.id].bound.is_omega() for r in entries):
            return OMEGA, locals_
        return self.lift(entries, lambda r: locals_[r.id].bound), locals_

    def twn_phase(self, scc):
        for t in scc:
            if not self.rb[t.id].is_omega():
                continue
            best = None
            for cycle in simple_cycles_through(self.p, t, self.opt.cycle_max_len):
                glob, locals_ = self.cycle_candidate(cycle)
                key = (classify(glob), len(cycle), [c.id for c in cycle])
                if best is None or key < best[0]:
                    best = (key, glob, cycle, locals_)
            if best is None or best[1].is_omega():
                continue
            _, glob, cycle, locals_ = best
            ids = ",".join(c.id for c in cycle)
            for r, eb in locals_.items():
                self.local[(ids, r)] = eb
            for c in cycle:
                self.improve(c.id, glob, f"twn cycle [{ids}], local bounds " + "; ".join(f"via {r}: {eb.bound} (psi: {eb.psi})" for r, eb in locals_.items()))

    def run(self) -> AnalysisResult:
        use_rf = self.opt.technique in ("rf", "twn+rf")
        use_twn = self.opt.technique in ("twn", "twn+rf")
        inv = location_invariants(self.p) if use_rf else {}
        for _ in range(self.opt.passes):
            for scc in sccs_topological(self.p):
                if use_rf:
                    self._rf_on(scc, inv)
                    self.predecessor_phase(scc)
                    self.rf_phase(scc, inv)
                self.predecessor_phase(scc)
                if use_twn:
                    self.twn_phase(scc)
                    self.predecessor_phase(scc)
            self.sb = compute_size_bounds(self.p, self.rb)
        overall = bound_sum(self.rb[t.id] for t in self.p.transitions)
        return AnalysisResult(self.p, dict(self.rb), dict(self.sb), overall, classify(overall), self.proof, self.local)


def analyze(program: Program, technique: str = "twn+rf", solver: smt.Solver | None = None, **kwargs) -> AnalysisResult:
    if technique not in TECHNIQUES:
        raise ValueError(f"unknown technique {technique!r}")
    opts = Options(technique=technique, **kwargs)
    return _Analyzer(program, opts, solver or smt.default_solver()).run()
