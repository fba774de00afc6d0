# src/fixpoint.py
"""
Elimination of pfp / lfp / gfp operators over a structure.

Each operator is unrolled from ⊥ (pfp, lfp) or ⊤ (gfp). After every step
the iterate is replaced by the disjunction of the isolating formulas of its
type set, so iterates stay small and repeats are detected by comparing
type sets. Variables free in a body besides the bound parameters become
extra type coordinates.
"""
import logging
from dataclasses import dataclass, field
from typing import Sequence

from src.errors import FixpointError
from src.logic.fo import (
    And, Bottom, Exists, FOFormula, Fixpoint, Forall, Not, Or, RelApp, Top,
    disjoin, free_vars, substitute, substitute_relation,
)
from src.structures import CompleteType, Structure

log = logging.getLogger(__name__)


@dataclass
class IterationTrace:
    op: str
    relation: str
    coordinates: tuple[str, ...]
    iterates: list[FOFormula] = field(default_factory=list)
    type_sets: list[frozenset[CompleteType]] = field(default_factory=list)
    stable_at: int | None = None            # first n with ι(ψ_n) = ι(ψ_{n+1})
    cycle: tuple[int, int] | None = None    # (m, n): ι(ψ_n) = ι(ψ_m) without a fixed point

    @property
    def monotone(self) -> bool:
        return all(a <= b for a, b in zip(self.type_sets, self.type_sets[1:]))

    @property
    def result(self) -> FOFormula:
        return Bottom() if self.stable_at is None else self.iterates[self.stable_at]


def canonical(structure: Structure, types: frozenset[CompleteType],
              coordinates: Sequence[str]) -> FOFormula:
    return disjoin(structure.isolating_formula(t, coordinates) for t in sorted(types))


def iterate_fixpoint(structure: Structure, op: str, relation: str, params: tuple[str, ...],
                     body: FOFormula, traces: list[IterationTrace] | None = None) -> IterationTrace:
    """Unroll one operator until its type set repeats."""
    coordinates = tuple(params) + tuple(sorted(free_vars(body) - set(params)))
    psi: FOFormula = Top() if op == "gfp" else Bottom()
    trace = IterationTrace(op, relation, coordinates)
    trace.iterates.append(psi)
    trace.type_sets.append(structure.iota(psi, coordinates))
    seen = {trace.type_sets[0]: 0}
    while True:
        step = eliminate_fixpoints(structure, substitute_relation(body, relation, params, psi), traces)
        types = structure.iota(step, coordinates)
        psi = canonical(structure, types, coordinates)
        n = len(trace.iterates)
        trace.iterates.append(psi)
        trace.type_sets.append(types)
        log.debug("%s %s: iterate %d has %d types", op, relation, n, len(types))
        if types == trace.type_sets[n - 1]:
            trace.stable_at = n - 1
            break
        if types in seen:
            trace.cycle = (seen[types], n)
            break
        seen[types] = n
    if op != "pfp" and not trace.monotone:
        log.warning("%s %s: iteration is not monotone", op, relation)
    if trace.cycle is not None:
        log.info("%s %s: iterates cycle between %d and %d; no fixed point",
                 op, relation, *trace.cycle)
    return trace


def eliminate_fixpoints(structure: Structure, formula: FOFormula,
                        traces: list[IterationTrace] | None = None) -> FOFormula:
    """
    Logically equivalent fixpoint-free formula; inner operators go first.

    Args:
        structure: Structure the formula is interpreted in
        formula: Formula possibly containing fixpoint operators
        traces: Optional list collecting one IterationTrace per operator

    Raises:
        FixpointError: On a relation symbol with no enclosing fixpoint
        ResourceCapError: If an iterate exceeds the structure's arity cap
    """
    match formula:
        case Fixpoint(op, relation, params, body, args):
            trace = iterate_fixpoint(structure, op, relation, params, body, traces)
            if traces is not None:
                traces.append(trace)
            return substitute(trace.result, dict(zip(params, args)))
        case RelApp(relation, _):
            raise FixpointError(f"relation '{relation}' is not bound by a fixpoint")
        case Not(a):
            return Not(eliminate_fixpoints(structure, a, traces))
        case And(a, b) | Or(a, b):
            return type(formula)(eliminate_fixpoints(structure, a, traces),
                                 eliminate_fixpoints(structure, b, traces))
        case Exists(v, body) | Forall(v, body):
            return type(formula)(v, eliminate_fixpoints(structure, body, traces))
    return formula


def equivalent(structure: Structure, f: FOFormula, g: FOFormula,
               variables: int | Sequence[str] | None = None) -> bool:
    """Same type set over the given coordinates (default: the joint free variables)."""
    if variables is None:
        variables = tuple(sorted(free_vars(f) | free_vars(g)))
    return structure.iota(f, variables) == structure.iota(g, variables)


def check_monotone_iteration(structure: Structure, body: FOFormula, relation: str,
                             params: tuple[str, ...]) -> bool:
    """Whether the least-fixpoint iterates of `body` grow until they stabilise."""
    return iterate_fixpoint(structure, "lfp", relation, params, body).monotone
