"""Core representation: polynomials, formulas, programs and bounds."""

from .bounds import (
    OMEGA,
    ONE,
    ZERO,
    Bound,
    ComplexityClass,
    bound_eval,
    bound_subst,
    bound_sum,
    classify,
    from_poly_abs,
)
from .formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    BoolConst,
    Formula,
    Or,
    compare,
    conj,
    disj,
    dnf,
    gt0,
    holds,
    negate,
    normalize,
)
from .poly import Polynomial, const, integerize, var
from .program import (
    Program,
    ProgramError,
    State,
    Transition,
    Variable,
    apply_update,
    entry_transitions,
    in_cycle,
    sccs_topological,
    simple_cycles_through,
)

__all__ = [
    "OMEGA", "ONE", "ZERO", "Bound", "ComplexityClass", "bound_eval", "bound_subst",
    "bound_sum", "classify", "from_poly_abs", "FALSE", "TRUE", "And", "Atom", "BoolConst",
    "Formula", "Or", "compare", "conj", "disj", "dnf", "gt0", "holds", "negate", "normalize",
    "Polynomial", "const", "integerize", "var", "Program", "ProgramError", "State",
    "Transition", "Variable", "apply_update", "entry_transitions", "in_cycle",
    "sccs_topological", "simple_cycles_through",
]
