# src/structures/dense_order.py
"""
(ℚ, <): a k-type is a weak order of the coordinates, stored as dense
ranks (0 for the least block). Rendered as `1=2<3`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import ClassVar, Iterable, Sequence

from src.errors import MalformedElementError, SignatureError
from src.logic.fo import Eq, FOFormula, Less, Top, Var, conjoin
from src.structures.base import CompleteType, Element, Structure, default_variables
from src.structures.equality import _growth_strings, coordinate


def dense_ranks(values: Sequence) -> tuple[int, ...]:
    order = {v: r for r, v in enumerate(sorted(set(values)))}
    return tuple(order[v] for v in values)


@dataclass(frozen=True)
class DenseOrderStructure(Structure):
    kind: ClassVar[str] = "dlo"
    arity_cap: int = 8

    def _types(self, k: int) -> tuple[CompleteType, ...]:
        # ordered set partitions: every set partition under every block order
        ranks = set()
        for rgs in _growth_strings(k):
            blocks = max(rgs, default=-1) + 1
            for perm in permutations(range(blocks)):
                ranks.add(tuple(perm[b] for b in rgs))
        return tuple(CompleteType(self.kind, k, r) for r in sorted(ranks))

    def type_of(self, elements: Sequence[Element]) -> CompleteType:
        return CompleteType(self.kind, len(elements), dense_ranks([self._check(e) for e in elements]))

    def select(self, tau: CompleteType, indices: Sequence[int]) -> CompleteType:
        return CompleteType(self.kind, len(indices), dense_ranks([tau.payload[i] for i in indices]))

    def atomic_holds(self, tau: CompleteType, atom: FOFormula, variables: Sequence[str]) -> bool:
        if not isinstance(atom, (Eq, Less)):
            raise SignatureError(f"dlo interprets '=' and '<', got {atom!r}")
        i = coordinate(atom.left, variables, self.kind)
        j = coordinate(atom.right, variables, self.kind)
        if isinstance(atom, Eq):
            return tau.payload[i] == tau.payload[j]
        return tau.payload[i] < tau.payload[j]

    def _extend(self, context: Sequence[Element], tau: CompleteType) -> Element:
        target = tau.payload[-1]
        below, above = None, None
        for value, r in zip(context, tau.payload):
            if r == target:
                return value
            if r < target and (below is None or value > below):
                below = value
            if r > target and (above is None or value < above):
                above = value
        if below is not None and above is not None:
            return (below + above) / 2
        if below is not None:
            return below + 1
        if above is not None:
            return above - 1
        return Fraction(0)

    def isolating_formula(self, tau: CompleteType, variables: Sequence[str] | None = None) -> FOFormula:
        names = variables or default_variables(tau.arity)
        blocks: dict[int, list[int]] = {}
        for i, r in enumerate(tau.payload):
            blocks.setdefault(r, []).append(i)
        chain = [blocks[r] for r in sorted(blocks)]
        parts: list[FOFormula] = []
        for members in chain:
            parts += [Eq(Var(names[a]), Var(names[b])) for a, b in zip(members, members[1:])]
        for lower, upper in zip(chain, chain[1:]):
            parts.append(Less(Var(names[lower[0]]), Var(names[upper[0]])))
        return conjoin(parts) if parts else Top()

    def render_type(self, tau: CompleteType) -> str:
        if tau.arity == 0:
            return "()"
        blocks: dict[int, list[str]] = {}
        for i, r in enumerate(tau.payload):
            blocks.setdefault(r, []).append(str(i + 1))
        return "<".join("=".join(blocks[r]) for r in sorted(blocks))

    def parse_element(self, literal: str) -> Element:
        try:
            return Fraction(literal.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedElementError(f"dlo elements are rationals p/q, got '{literal}'") from exc

    def render_element(self, element: Element) -> str:
        q = self._check(element)
        return f"{q.numerator}/{q.denominator}"

    def seed_element(self) -> Element:
        return Fraction(0)

    def fresh_elements(self, count: int, avoid: Iterable[Element] = ()) -> tuple[Element, ...]:
        taken = set(avoid)
        out: list[Fraction] = []
        n = 0
        while len(out) < count:
            if Fraction(n) not in taken:
                out.append(Fraction(n))
            n += 1
        return tuple(out)

    def _check(self, e: Element) -> Fraction:
        if isinstance(e, bool) or not isinstance(e, (int, Fraction)):
            raise MalformedElementError(f"not a dlo element: {e!r}")
        return Fraction(e)
