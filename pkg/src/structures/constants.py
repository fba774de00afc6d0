# src/structures/constants.py
"""
Expansion of a structure by finitely many named constants.

A k-type of the expansion is a (k+c)-type of the base whose last c
coordinates realize the fixed type of the constant values. Atoms refer to
the constants as `Const(name)`; they are mapped onto those trailing
coordinates before the base decides them.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import ClassVar, Iterable, Sequence

from src.logic.fo import (
    Compl, Const, Eq, FOFormula, Join, Less, Meet, Proj, Term, Var, substitute,
)
from src.logic.spec_schema import ConstantDecl
from src.structures.base import CompleteType, Element, Structure, default_variables

log = logging.getLogger(__name__)


def _hidden(name: str) -> str:
    # not a valid identifier, so it never clashes with a user variable
    return f"@{name}"


def _pin(t: Term) -> Term:
    match t:
        case Const(name):
            return Var(_hidden(name))
        case Meet(a, b):
            return Meet(_pin(a), _pin(b))
        case Join(a, b):
            return Join(_pin(a), _pin(b))
        case Compl(a):
            return Compl(_pin(a))
        case Proj(i, a):
            return Proj(i, _pin(a))
    return t


@dataclass(frozen=True)
class ConstantsStructure(Structure):
    kind: ClassVar[str] = "constants"
    base: Structure = None
    names: tuple[str, ...] = ()
    values: tuple[Element, ...] = ()

    @property
    def arity_cap(self) -> int:
        return self.base.arity_cap - len(self.names)

    @property
    def constant_type(self) -> CompleteType:
        return self.base.type_of(self.values)

    def _wrap(self, base_type: CompleteType) -> CompleteType:
        return CompleteType(self.kind, base_type.arity - len(self.names), (base_type,))

    def _hidden_names(self) -> tuple[str, ...]:
        return tuple(_hidden(n) for n in self.names)

    def _types(self, k: int) -> tuple[CompleteType, ...]:
        c = len(self.names)
        fixed = self.constant_type
        tail = range(k, k + c)
        return tuple(self._wrap(t) for t in self.base.enumerate_types(k + c)
                     if self.base.select(t, tail) == fixed)

    def type_of(self, elements: Sequence[Element]) -> CompleteType:
        return self._wrap(self.base.type_of(tuple(elements) + self.values))

    def select(self, tau: CompleteType, indices: Sequence[int]) -> CompleteType:
        k = tau.arity
        tail = list(range(k, k + len(self.names)))
        return self._wrap(self.base.select(tau.payload[0], list(indices) + tail))

    def atomic_holds(self, tau: CompleteType, atom: FOFormula, variables: Sequence[str]) -> bool:
        if isinstance(atom, (Eq, Less)):
            atom = type(atom)(_pin(atom.left), _pin(atom.right))
        return self.base.atomic_holds(tau.payload[0], atom, tuple(variables) + self._hidden_names())

    def _extend(self, context: Sequence[Element], tau: CompleteType) -> Element:
        # move the new coordinate behind the constants so the base extends the last slot
        k = len(context)
        c = len(self.names)
        order = list(range(k)) + list(range(k + 1, k + 1 + c)) + [k]
        target = self.base.select(tau.payload[0], order)
        return self.base.extend_witness(tuple(context) + self.values, target)

    def isolating_formula(self, tau: CompleteType, variables: Sequence[str] | None = None) -> FOFormula:
        names = tuple(variables or default_variables(tau.arity))
        hidden = self._hidden_names()
        local = self.base.isolating_formula(tau.payload[0], names + hidden)
        return substitute(local, {h: Const(n) for h, n in zip(hidden, self.names)})

    def render_type(self, tau: CompleteType) -> str:
        return self.base.render_type(tau.payload[0])

    def parse_element(self, literal: str) -> Element:
        return self.base.parse_element(literal)

    def render_element(self, element: Element) -> str:
        return self.base.render_element(element)

    def seed_element(self) -> Element:
        return self.base.seed_element()

    def fresh_elements(self, count: int, avoid: Iterable[Element] = ()) -> tuple[Element, ...]:
        return self.base.fresh_elements(count, avoid)

    def value_of(self, name: str) -> Element:
        return self.values[self.names.index(name)]


def with_constants(base: Structure, decls: Sequence[ConstantDecl]) -> Structure:
    """
    Expand `base` by the declared constants; uninterpreted ones get canonical fresh values.

    Raises:
        MalformedElementError: If a constant literal is not an element of `base`
    """
    if not decls:
        return base
    given = {d.name: base.parse_element(d.literal) for d in decls if d.literal is not None}
    free = [d.name for d in decls if d.literal is None]
    fresh = dict(zip(free, base.fresh_elements(len(free), given.values())))
    values = tuple(given[d.name] if d.name in given else fresh[d.name] for d in decls)
    log.debug("constants: %s", ", ".join(f"{d.name}={base.render_element(v)}" for d, v in zip(decls, values)))
    return ConstantsStructure(base=base, names=tuple(d.name for d in decls), values=values)
