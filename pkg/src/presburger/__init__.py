"""Presburger arithmetic with bounded quantifier alternation.

Formulas, a decision procedure that is exact on the innermost quantifier
block, semilinear and ultimately periodic solution sets, Boolean circuits and
the circuit-based formula families built from them.
"""

from .circuits import Circuit, SuccinctCircuit, evaluate, evaluate_numbers, expand_succinct, prime_circuit
from .decide import DecideConfig, Decider, Verdict, decide, decide_innermost_exists, decide_with_info, weispfenning_bound
from .diophantine import (
    DiophantineSystem,
    LinearSet,
    SemilinearSet,
    find_solution,
    frobenius_number,
    is_feasible,
    pottier_bound,
    project_first,
    semilinear_of,
)
from .formula import (
    And,
    Atom,
    Exists,
    Forall,
    Formula,
    LinearTerm,
    Not,
    Or,
    bounded_eval,
    classify,
    norm,
    size,
    substitute,
)
from .normalize import clause_to_system, to_dnf, to_prenex
from .parsing import parse_circuit, parse_formula, print_circuit, print_formula
from .upset import UPSet, equal, lcm_range, member, normalize, union, upset_of

__all__ = [
    "And",
    "Atom",
    "Circuit",
    "DecideConfig",
    "Decider",
    "DiophantineSystem",
    "Exists",
    "Forall",
    "Formula",
    "LinearSet",
    "LinearTerm",
    "Not",
    "Or",
    "SemilinearSet",
    "SuccinctCircuit",
    "UPSet",
    "Verdict",
    "bounded_eval",
    "classify",
    "clause_to_system",
    "decide",
    "decide_innermost_exists",
    "decide_with_info",
    "equal",
    "evaluate",
    "evaluate_numbers",
    "expand_succinct",
    "find_solution",
    "frobenius_number",
    "is_feasible",
    "lcm_range",
    "member",
    "norm",
    "normalize",
    "parse_circuit",
    "parse_formula",
    "pottier_bound",
    "prime_circuit",
    "print_circuit",
    "print_formula",
    "project_first",
    "semilinear_of",
    "size",
    "substitute",
    "to_dnf",
    "to_prenex",
    "union",
    "upset_of",
    "weispfenning_bound",
]
