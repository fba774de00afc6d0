# src/structures/equality.py
"""
Pure equality over the naturals.

A k-type is the equality pattern of the tuple, stored as a restricted
growth string: coordinate i carries the index of its block in order of
first appearance. Rendering lists blocks with 1-based members, e.g. `{1 3|2}`.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import ClassVar, Iterable, Sequence

from src.errors import MalformedElementError, SignatureError
from src.logic.fo import Eq, FOFormula, Top, Var, conjoin, neq
from src.structures.base import CompleteType, Element, Structure, default_variables


def restricted_growth(values: Sequence) -> tuple[int, ...]:
    seen: dict = {}
    return tuple(seen.setdefault(v, len(seen)) for v in values)


def _growth_strings(k: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []

    def grow(prefix: list[int], blocks: int) -> None:
        if len(prefix) == k:
            out.append(tuple(prefix))
            return
        for b in range(blocks + 1):
            grow(prefix + [b], max(blocks, b + 1))

    grow([], 0)
    return out


def coordinate(term, variables: Sequence[str], where: str) -> int:
    """Position of a plain variable term, or SignatureError."""
    if isinstance(term, Var) and term.name in variables:
        return list(variables).index(term.name)
    raise SignatureError(f"{where}: only variables may appear in atoms, got {term!r}")


@dataclass(frozen=True)
class EqualityStructure(Structure):
    kind: ClassVar[str] = "eq"
    arity_cap: int = 8

    def _types(self, k: int) -> tuple[CompleteType, ...]:
        return tuple(CompleteType(self.kind, k, p) for p in _growth_strings(k))

    def type_of(self, elements: Sequence[Element]) -> CompleteType:
        for e in elements:
            self._check(e)
        return CompleteType(self.kind, len(elements), restricted_growth(elements))

    def select(self, tau: CompleteType, indices: Sequence[int]) -> CompleteType:
        return CompleteType(self.kind, len(indices), restricted_growth([tau.payload[i] for i in indices]))

    def atomic_holds(self, tau: CompleteType, atom: FOFormula, variables: Sequence[str]) -> bool:
        if not isinstance(atom, Eq):
            raise SignatureError(f"eq interprets only '=', got {atom!r}")
        i = coordinate(atom.left, variables, self.kind)
        j = coordinate(atom.right, variables, self.kind)
        return tau.payload[i] == tau.payload[j]

    def _extend(self, context: Sequence[Element], tau: CompleteType) -> Element:
        block = tau.payload[-1]
        for value, b in zip(context, tau.payload):
            if b == block:
                return value
        return self.fresh_elements(1, context)[0]

    def isolating_formula(self, tau: CompleteType, variables: Sequence[str] | None = None) -> FOFormula:
        names = variables or default_variables(tau.arity)
        if tau.arity < 2:
            return Top()
        parts = []
        for i, j in combinations(range(tau.arity), 2):
            atom = Eq(Var(names[i]), Var(names[j]))
            parts.append(atom if tau.payload[i] == tau.payload[j] else neq(atom.left, atom.right))
        return conjoin(parts)

    def render_type(self, tau: CompleteType) -> str:
        blocks: dict[int, list[str]] = {}
        for i, b in enumerate(tau.payload):
            blocks.setdefault(b, []).append(str(i + 1))
        return "{" + "|".join(" ".join(members) for members in blocks.values()) + "}"

    def parse_element(self, literal: str) -> Element:
        text = literal.strip()
        if not text.isdigit():
            raise MalformedElementError(f"eq elements are natural numbers, got '{literal}'")
        return int(text)

    def render_element(self, element: Element) -> str:
        return str(self._check(element))

    def seed_element(self) -> Element:
        return 0

    def fresh_elements(self, count: int, avoid: Iterable[Element] = ()) -> tuple[Element, ...]:
        taken = set(avoid)
        out: list[int] = []
        n = 0
        while len(out) < count:
            if n not in taken:
                out.append(n)
            n += 1
        return tuple(out)

    def _check(self, e: Element) -> int:
        if isinstance(e, bool) or not isinstance(e, int) or e < 0:
            raise MalformedElementError(f"not an eq element: {e!r}")
        return e
