# src/structures/product.py
"""
Products of structures with projection functions.

Types are tuples of component types of the same arity. Atoms must live in
one component (every variable under the same projection `v.i`), except
whole-element equality `u = v`, which holds iff it holds in every component.
Element literals are written `<e1 * e2 * ...>`.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product as cartesian
from typing import ClassVar, Iterable, Sequence

from src.errors import MalformedElementError, SignatureError
from src.logic.fo import (
    Compl, Eq, FOFormula, Join, Less, Meet, One, Proj, Term, Var, Zero,
    conjoin, substitute,
)
from src.structures.base import CompleteType, Element, Structure, default_variables


def _component_of(t: Term) -> tuple[set, Term]:
    """(projection indices used, term with projections stripped); None marks a bare variable."""
    match t:
        case Proj(i, inner):
            found, stripped = _component_of(inner)
            if found - {None}:
                raise SignatureError("nested projections are not supported")
            return {i}, stripped
        case Var():
            return {None}, t
        case Meet(a, b) | Join(a, b):
            fa, sa = _component_of(a)
            fb, sb = _component_of(b)
            return fa | fb, type(t)(sa, sb)
        case Compl(a):
            found, stripped = _component_of(a)
            return found, Compl(stripped)
        case Zero() | One():
            return set(), t
    raise SignatureError(f"product cannot interpret the term {t!r}")


def split_tokens(text: str, sep: str = "*") -> list[str]:
    depth, chunks, current = 0, [], []
    for ch in text:
        if ch == "<":
            depth += 1
        elif ch == ">":
            depth -= 1
        if ch == sep and depth == 0:
            chunks.append("".join(current))
            current = []
        else:
            current.append(ch)
    chunks.append("".join(current))
    return chunks


@dataclass(frozen=True)
class ProductStructure(Structure):
    kind: ClassVar[str] = "product"
    components: tuple[Structure, ...] = ()

    def __post_init__(self):
        if not self.components:
            raise ValueError("a product needs at least one component")

    @property
    def arity_cap(self) -> int:
        return min(c.arity_cap for c in self.components)

    def _types(self, k: int) -> tuple[CompleteType, ...]:
        per_component = [c.enumerate_types(k) for c in self.components]
        return tuple(CompleteType(self.kind, k, combo) for combo in cartesian(*per_component))

    def _coordinates(self, elements: Sequence[Element]) -> list[list[Element]]:
        n = len(self.components)
        for e in elements:
            if not isinstance(e, tuple) or len(e) != n:
                raise MalformedElementError(f"expected a {n}-component element, got {e!r}")
        return [[e[i] for e in elements] for i in range(n)]

    def type_of(self, elements: Sequence[Element]) -> CompleteType:
        columns = self._coordinates(elements)
        return CompleteType(self.kind, len(elements),
                            tuple(c.type_of(col) for c, col in zip(self.components, columns)))

    def select(self, tau: CompleteType, indices: Sequence[int]) -> CompleteType:
        return CompleteType(self.kind, len(indices),
                            tuple(c.select(t, indices) for c, t in zip(self.components, tau.payload)))

    def atomic_holds(self, tau: CompleteType, atom: FOFormula, variables: Sequence[str]) -> bool:
        if not isinstance(atom, (Eq, Less)):
            raise SignatureError(f"product atoms are '=' or '<', got {atom!r}")
        found_l, left = _component_of(atom.left)
        found_r, right = _component_of(atom.right)
        used = found_l | found_r
        if used == {None} and isinstance(atom, Eq) and isinstance(left, Var) and isinstance(right, Var):
            return all(c.atomic_holds(t, atom, variables)
                       for c, t in zip(self.components, tau.payload))
        indices = used - {None}
        if None in used or len(indices) != 1:
            raise SignatureError(
                "product atoms must project every variable to the same component")
        i = indices.pop()
        if not 1 <= i <= len(self.components):
            raise SignatureError(f"projection .{i} out of range for {len(self.components)} components")
        return self.components[i - 1].atomic_holds(tau.payload[i - 1], type(atom)(left, right), variables)

    def _extend(self, context: Sequence[Element], tau: CompleteType) -> Element:
        columns = self._coordinates(context)
        return tuple(c.extend_witness(col, t)
                     for c, col, t in zip(self.components, columns, tau.payload))

    def isolating_formula(self, tau: CompleteType, variables: Sequence[str] | None = None) -> FOFormula:
        names = variables or default_variables(tau.arity)
        parts = []
        for i, (c, t) in enumerate(zip(self.components, tau.payload), start=1):
            local = c.isolating_formula(t, names)
            parts.append(substitute(local, {n: Proj(i, Var(n)) for n in names}))
        return conjoin(parts)

    def render_type(self, tau: CompleteType) -> str:
        return "<" + " * ".join(c.render_type(t) for c, t in zip(self.components, tau.payload)) + ">"

    def parse_element(self, literal: str) -> Element:
        text = literal.strip()
        if not (text.startswith("<") and text.endswith(">")):
            raise MalformedElementError(f"product elements are written <e1 * e2 ...>, got '{literal}'")
        parts = split_tokens(text[1:-1])
        if len(parts) != len(self.components):
            raise MalformedElementError(
                f"'{literal}' has {len(parts)} components, expected {len(self.components)}")
        return tuple(c.parse_element(p) for c, p in zip(self.components, parts))

    def render_element(self, element: Element) -> str:
        column = [col[0] for col in self._coordinates([element])]
        return "<" + " * ".join(c.render_element(e) for c, e in zip(self.components, column)) + ">"

    def seed_element(self) -> Element:
        return tuple(c.seed_element() for c in self.components)

    def fresh_elements(self, count: int, avoid: Iterable[Element] = ()) -> tuple[Element, ...]:
        taken = list(avoid)
        columns = [c.fresh_elements(count, [e[i] for e in taken])
                   for i, c in enumerate(self.components)]
        return tuple(zip(*columns))
