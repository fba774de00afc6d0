# src/structures/base.py
"""
Common interface of the structure backends.

A backend presents its complete k-types as canonical, hashable
CompleteType values and decides the atoms of its signature on them.
Everything else (formula-to-type-set encoding, tuple extension, memory
restriction) is generic and lives here.

Coordinates are 0-based inside this package; variable tuples passed to
`iota` / `isolating_formula` name the coordinates in order.
"""
from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, ClassVar, Hashable, Iterable, Mapping, Sequence

from src.errors import (
    FixpointError, ResourceCapError, SpecValidationError, WitnessError,
)
from src.logic.fo import (
    And, Bottom, Eq, Exists, FOFormula, Fixpoint, Forall, Less, Not, Or,
    RelApp, Top, Var, fresh_name, free_vars, names_in, quantifier_depth,
    substitute,
)

log = logging.getLogger(__name__)

Element = Hashable


@dataclass(frozen=True, order=True)
class CompleteType:
    kind: str
    arity: int
    payload: tuple[Any, ...]


def default_variables(k: int) -> tuple[str, ...]:
    return tuple(f"x{i}" for i in range(1, k + 1))


@dataclass(frozen=True)
class Structure(ABC):
    """One effectively presented ω-categorical structure."""

    kind: ClassVar[str] = "abstract"
    # concrete backends declare an `arity_cap: int` field

    # ---------- backend surface ----------
    @abstractmethod
    def _types(self, k: int) -> tuple[CompleteType, ...]:
        """All k-types in canonical order (no cap check)."""

    @abstractmethod
    def type_of(self, elements: Sequence[Element]) -> CompleteType: ...

    @abstractmethod
    def select(self, tau: CompleteType, indices: Sequence[int]) -> CompleteType:
        """Type of the sub-tuple (t[i] for i in indices); order is kept, repeats are not allowed."""

    @abstractmethod
    def atomic_holds(self, tau: CompleteType, atom: FOFormula, variables: Sequence[str]) -> bool: ...

    @abstractmethod
    def _extend(self, context: Sequence[Element], tau: CompleteType) -> Element:
        """Witness for the last coordinate of tau; precondition already checked."""

    @abstractmethod
    def isolating_formula(self, tau: CompleteType,
                          variables: Sequence[str] | None = None) -> FOFormula: ...

    @abstractmethod
    def render_type(self, tau: CompleteType) -> str: ...

    @abstractmethod
    def parse_element(self, literal: str) -> Element: ...

    @abstractmethod
    def render_element(self, element: Element) -> str: ...

    @abstractmethod
    def seed_element(self) -> Element: ...

    @abstractmethod
    def fresh_elements(self, count: int, avoid: Iterable[Element] = ()) -> tuple[Element, ...]:
        """`count` canonical pairwise-distinct elements outside `avoid`."""

    # ---------- generic type algebra ----------
    def enumerate_types(self, k: int) -> tuple[CompleteType, ...]:
        if k < 0:
            raise ValueError("arity must be non-negative")
        if k > self.arity_cap:
            raise ResourceCapError(f"{self.kind}: arity {k} exceeds the cap {self.arity_cap}")
        return self._cached_types(k)

    @lru_cache(maxsize=None)
    def _cached_types(self, k: int) -> tuple[CompleteType, ...]:
        types = self._types(k)
        log.debug("%s: %d types of arity %d", self.kind, len(types), k)
        return types

    def restrict(self, tau: CompleteType, indices: Iterable[int]) -> CompleteType:
        """Sub-tuple type for an index set, renumbered in increasing order."""
        chosen = sorted(set(indices))
        if chosen and (chosen[0] < 0 or chosen[-1] >= tau.arity):
            raise IndexError(f"restriction indices {chosen} out of range for arity {tau.arity}")
        return self.select(tau, chosen)

    def memory_type(self, tau: CompleteType, w_m: int, w_x: int, w_y: int) -> CompleteType:
        if tau.arity != w_m + w_x + w_y:
            raise ValueError(f"type of arity {tau.arity} does not fit widths ({w_m}, {w_x}, {w_y})")
        return self.select(tau, range(w_m + w_x, w_m + w_x + w_y))

    def iota(self, formula: FOFormula, variables: int | Sequence[str]) -> frozenset[CompleteType]:
        """
        The set of types (over `variables`) in which `formula` holds.

        Raises:
            FixpointError: If a fixpoint or relation symbol is still present
            SpecValidationError: If a free variable is not among `variables`
            ResourceCapError: If arity plus quantifier depth exceeds the cap
        """
        names = default_variables(variables) if isinstance(variables, int) else tuple(variables)
        stray = free_vars(formula) - set(names)
        if stray:
            raise SpecValidationError(f"free variables {sorted(stray)} outside {list(names)}")
        depth = len(names) + quantifier_depth(formula)
        if depth > self.arity_cap:
            raise ResourceCapError(
                f"{self.kind}: arity {len(names)} with quantifier depth "
                f"{quantifier_depth(formula)} exceeds the cap {self.arity_cap}")
        return self._iota(formula, names)

    @lru_cache(maxsize=None)
    def _iota(self, f: FOFormula, names: tuple[str, ...]) -> frozenset[CompleteType]:
        every = frozenset(self.enumerate_types(len(names)))
        match f:
            case Top():
                return every
            case Bottom():
                return frozenset()
            case Eq() | Less():
                return frozenset(t for t in every if self.atomic_holds(t, f, names))
            case Not(a):
                return every - self._iota(a, names)
            case And(a, b):
                return self._iota(a, names) & self._iota(b, names)
            case Or(a, b):
                return self._iota(a, names) | self._iota(b, names)
            case Exists(v, body):
                return self._project(v, body, names)
            case Forall(v, body):
                return every - self._project(v, Not(body), names)
            case Fixpoint() | RelApp():
                raise FixpointError("eliminate fixpoints before computing type sets")
        raise TypeError(f"not a formula: {f!r}")

    def _project(self, v: str, body: FOFormula, names: tuple[str, ...]) -> frozenset[CompleteType]:
        if v in names:
            fresh = fresh_name(v, set(names) | names_in(body))
            body, v = substitute(body, {v: Var(fresh)}), fresh
        wider = self._iota(body, names + (v,))
        keep = range(len(names))
        return frozenset(self.select(t, keep) for t in wider)

    def holds(self, formula: FOFormula, elements: Sequence[Element],
              variables: Sequence[str] | None = None) -> bool:
        """Concrete truth of a fixpoint-free formula at a tuple."""
        names = tuple(variables) if variables is not None else default_variables(len(elements))
        return self.type_of(elements) in self.iota(formula, names)

    # ---------- witnesses ----------
    def extend_witness(self, context: Sequence[Element], tau: CompleteType) -> Element:
        """
        An element b with type_of(context ⧺ b) == tau, chosen by fixed rules.

        Raises:
            WitnessError: If tau does not extend the type of the context
        """
        k = len(context)
        if tau.arity != k + 1:
            raise WitnessError(f"type of arity {tau.arity} cannot extend a {k}-tuple by one")
        if self.select(tau, range(k)) != self.type_of(context):
            raise WitnessError(
                f"type {self.render_type(tau)} does not extend the context type "
                f"{self.render_type(self.type_of(context))}")
        return self._extend(tuple(context), tau)

    def extend_witness_tuple(self, context: Sequence[Element], tau: CompleteType,
                             pinned: Mapping[int, Element] | None = None) -> tuple[Element, ...]:
        """
        Extend coordinate by coordinate; `pinned` fixes the value of a full-tuple index.

        Raises:
            WitnessError: On a precondition failure or a pinned value of the wrong type
        """
        pinned = pinned or {}
        k = len(context)
        if tau.arity < k:
            raise WitnessError(f"type of arity {tau.arity} is shorter than the context")
        current = list(context)
        for pos in range(k, tau.arity):
            target = self.select(tau, range(pos + 1))
            if pos in pinned:
                value = pinned[pos]
                if self.type_of(current + [value]) != target:
                    raise WitnessError(
                        f"pinned value {self.render_element(value)} at coordinate {pos + 1} "
                        f"does not realize {self.render_type(target)}")
            else:
                value = self.extend_witness(current, target)
            current.append(value)
        return tuple(current[k:])

    def seed_tuple(self, width: int) -> tuple[Element, ...]:
        return (self.seed_element(),) * width
