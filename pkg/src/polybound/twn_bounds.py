"""Runtime bounds for terminating twn loops via stabilization thresholds."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from . import smt
from .ir import formula as fm
from .ir.bounds import OMEGA, Bound, from_poly_abs
from .ir.poly import Polynomial, mono_degree
from .ir.program import Transition
from .twn.closed_form import closed_form
from .twn.loops import TwnLoop, square
from .twn.npe import NPE, eventual_sign_formula, subst_npe
from .twn.termination import Terminating, check_termination


def _pow0(b: int, n: int) -> int:
    return 0 if b == 0 else b ** n


def monotonicity_threshold(k: int, hi: tuple, lo: tuple) -> int:
    """Smallest n0 with ``n^a1 * b1^n > k * n^a2 * b2^n`` for all n >= n0.

    ``hi = (b1, a1)`` must be lexicographically larger than ``lo = (b2, a2)``.
    Uses ``0^n = 0`` for every n and ``n^0 = 1``.
    """
    (b1, a1), (b2, a2) = hi, lo
    if not (b1, a1) > (b2, a2):
        raise ValueError("thresholds need (b1, a1) >lex (b2, a2)")
    if k < 1:
        raise ValueError("k must be positive")

    def holds(n: int) -> bool:
        return n ** a1 * _pow0(b1, n) > k * n ** a2 * _pow0(b2, n)

    if b2 == 0:
        return 0 if a1 == 0 else 1
    d = a1 - a2
    start = 1
    if d < 0:
        # the ratio of consecutive quotients exceeds 1 from here on
        while not b1 * start ** (-d) > b2 * (start + 1) ** (-d):
            start += 1
    if holds(start):
        m = start
    else:
        lo_n, hi_n = start, start * 2
        while not holds(hi_n):
            lo_n, hi_n = hi_n, hi_n * 2
        while hi_n - lo_n > 1:
            mid = (lo_n + hi_n) // 2
            if holds(mid):
                hi_n = mid
            else:
                lo_n = mid
        m = hi_n
    while m > 0 and holds(m - 1):
        m -= 1
    return m


def join(polys: Iterable[Polynomial]) -> Polynomial:
    """Per monomial, the largest absolute coefficient (the empty join is 0)."""
    best: dict = {}
    for p in polys:
        for m, c in p.items():
            best[m] = max(best.get(m, Fraction(0)), abs(c))
    return Polynomial(best)


@dataclass(frozen=True)
class Kernel:
    npe: NPE
    delta: tuple  # ((monomial, a, b), (target_b, target_a))
    gamma: tuple
    d: int


def _eventually_nonpositive(kernel: NPE, context: fm.Formula, solver) -> bool:
    return isinstance(smt.check_sat(fm.conj(context, eventual_sign_formula(kernel)), solver), smt.Unsat)


def select_kernel(npe: NPE, context: fm.Formula, solver: smt.Solver | None = None) -> Kernel:
    """Greedy over-approximation of ``npe`` for states satisfying ``context``.

    Addends are visited by decreasing monomial degree.  A provably positive
    addend with a negated twin at a larger (b, a) is cancelled against it; a
    provably non-positive addend is dropped.  A move is kept only if the
    kernel is still eventually non-positive under ``context``.
    """
    current = {}
    for m, a, b in npe.monomial_addends():
        (mono, coef), = m.items()
        current[(mono, a, b)] = coef
    delta, gamma = [], []
    d = 0

    def as_npe(items) -> NPE:
        total = NPE()
        for (mono, a, b), coef in items.items():
            total = total + NPE.term(Polynomial({mono: coef}), a, b)
        return total

    degrees = sorted({mono_degree(k[0]) for k in current}, reverse=True)
    for deg in degrees:
        group = sorted(
            [k for k in current if mono_degree(k[0]) == deg],
            key=lambda k: (k[2], k[1], str(k[0])),
        )
        for key in group:  # cancellations first
            if key not in current:
                continue
            mono, a, b = key
            coef = current[key]
            p = Polynomial({mono: coef})
            twins = sorted(
                (k for k in current if k[0] == mono and (k[2], k[1]) > (b, a) and current[k] == -coef),
                key=lambda k: (k[2], k[1]),
            )
            if not twins or not (solver or smt.default_solver()).proves(context, fm.gt0(p)):
                continue
            twin = twins[0]
            trial = dict(current)
            del trial[key]
            del trial[twin]
            if _eventually_nonpositive(as_npe(trial), context, solver):
                current = trial
                delta.append(((p, a, b), (twin[2], twin[1])))
                d = max(d, monotonicity_threshold(1, (twin[2], twin[1]), (b, a)))
        for key in group:  # then drops
            if key not in current:
                continue
            mono, a, b = key
            p = Polynomial({mono: current[key]})
            if not (solver or smt.default_solver()).proves(context, fm.Atom(p, "<=")):
                continue
            trial = dict(current)
            del trial[key]
            if _eventually_nonpositive(as_npe(trial), context, solver):
                current = trial
                gamma.append(((p, a, b), (0, 0)))
                d = max(d, monotonicity_threshold(1, (b, a), (0, 0)))
    return Kernel(as_npe(current), tuple(delta), tuple(gamma), d)


@dataclass(frozen=True)
class AtomDerivation:
    atom: fm.Atom
    npe: NPE
    kernel: Kernel
    c: int
    pol: tuple


@dataclass(frozen=True)
class SthDerivation:
    n0: int
    atoms: tuple
    c: int
    d: int
    joined: Polynomial
    bound: Bound
    closed_forms: Mapping = field(default_factory=dict)


def _threshold_constant(adds: list) -> int:
    """max(1, N_2, M_2, ..., N_l, M_l) for addends ordered lowest (b, a) first (1-based)."""
    ell = len(adds)
    val = 1
    ba = [None] + [(b, a) for _, a, b in adds]
    for j in range(2, ell + 1):
        bj, aj = ba[j]
        bp, ap = ba[j - 1]
        m_j = 0 if bj == bp else monotonicity_threshold(1, (bj, aj), (bp, ap + 1))
        if j == 2:
            n_j = 1
        else:
            mt_prime = monotonicity_threshold(j - 2, ba[j - 1], ba[j - 2])
            if j == 3:
                n_j = mt_prime
            else:
                mt = max(monotonicity_threshold(1, ba[j - 2], ba[i]) for i in range(1, j - 2))
                n_j = max(mt, mt_prime)
        val = max(val, n_j, m_j)
    return val


def sth_bound(loop: TwnLoop, solver: smt.Solver | None = None):
    """Bound on the stabilization threshold of a terminating tnn loop.

    Returns (bound, derivation): ``2 * join(Pol) + max(n0, C, D)``.
    """
    cf = closed_form(loop)
    context = fm.conj(fm.normalize(loop.psi), fm.normalize(loop.guard))
    derivs = []
    pols = []
    c_all, d_all = 1, 0
    for atom in fm.atoms(fm.normalize(loop.guard)):
        npe = subst_npe(atom.poly, cf.cl).integerized()
        kernel = select_kernel(npe, context, solver)
        adds = list(reversed(kernel.npe.addends()))  # index 0 is the smallest (b, a)
        c_alpha = _threshold_constant(adds)
        pol = tuple(p for p, _, _ in adds[:-1])
        pols.extend(pol)
        c_all = max(c_all, c_alpha)
        d_all = max(d_all, kernel.d)
        derivs.append(AtomDerivation(atom, npe, kernel, c_alpha, pol))
    joined = join(pols)
    bound = Bound.const(2) * from_poly_abs(joined) + Bound.const(max(cf.n0, c_all, d_all))
    return bound, SthDerivation(cf.n0, tuple(derivs), c_all, d_all, joined, bound, dict(cf.cl))


@dataclass(frozen=True)
class LocalTwnResult:
    bound: Bound
    note: str
    derivation: object = None


def local_bound_twn(loop: TwnLoop, solver: smt.Solver | None = None, full_chained_guard: bool = False) -> LocalTwnResult:
    """Local runtime bound of a twn loop entered in a psi-state (omega when unknown)."""
    verdict = check_termination(loop, solver)
    if not isinstance(verdict, Terminating):
        return LocalTwnResult(OMEGA, f"termination not proved: {verdict}")
    if loop.is_tnn:
        b, der = sth_bound(loop, solver)
        return LocalTwnResult(b, "tnn loop", der)
    sq = square(loop, full_guard=full_chained_guard)
    if not full_chained_guard and not isinstance(check_termination(sq, solver), Terminating):
        sq = square(loop, full_guard=True)
    b, der = sth_bound(sq, solver)
    return LocalTwnResult(Bound.const(2) * b + Bound.const(1), "twn loop via two-step unrolling", der)


def _constant_facts(r: Transition) -> list:
    out = []
    for v, p in r.update.items():
        if p.is_constant():
            out.append(fm.normalize(fm.compare(Polynomial.var(v), ">=", p)))
            out.append(fm.normalize(fm.compare(Polynomial.var(v), "<=", p)))
    return out


def synthesize_update_invariant(loop_t: Transition, r: Transition, variables: Iterable[str], solver: smt.Solver | None = None) -> fm.Formula:
    """Conjunction of atoms that hold after ``r`` and are preserved by ``loop_t``."""
    solver = solver or smt.default_solver()
    allowed = set(variables)
    cands = fm.atoms(fm.normalize(r.guard)) + fm.atoms(fm.normalize(loop_t.guard)) + _constant_facts(r)
    kept = []
    upd_r = dict(r.update)
    upd_t = dict(loop_t.update)
    for alpha in dict.fromkeys(cands):
        if not alpha.poly.variables() <= allowed:
            continue
        if not solver.proves(r.guard, fm.substitute(alpha, upd_r)):
            continue
        if not solver.proves(alpha, fm.substitute(alpha, upd_t)):
            continue
        kept.append(alpha)
    return fm.conj(*kept)


def check_update_invariant(psi: fm.Formula, update: Mapping[str, Polynomial], solver: smt.Solver | None = None) -> fm.Formula:
    """``psi`` if it is provably preserved by ``update``, otherwise true."""
    if (solver or smt.default_solver()).proves(psi, fm.substitute(psi, dict(update))):
        return psi
    return fm.TRUE
