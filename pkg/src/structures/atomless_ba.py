# src/structures/atomless_ba.py
"""
The countable atomless Boolean algebra, realised by dyadic interval unions.

A k-type records which of the 2^k minterms of the tuple are nonzero. Minterm m
takes coordinate i positively when bit (k-1-i) of m is set, so the bit string
`0101` over (x1, x2) reads: ¬x1∧¬x2 = 0, ¬x1∧x2 ≠ 0, x1∧¬x2 = 0, x1∧x2 ≠ 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar, Iterable, Sequence

from src.errors import MalformedElementError, SignatureError
from src.logic.fo import (
    Compl, Eq, FOFormula, Join, Meet, One, Term, Top, Var, Zero,
    conjoin, meet_all, neq,
)
from src.structures.base import CompleteType, Element, Structure, default_variables
from src.structures.dyadic import DyadicUnion, independent_family


def sign(m: int, i: int, k: int) -> int:
    return (m >> (k - 1 - i)) & 1


def _evaluate(t: Term, valuation: dict[str, int]) -> int:
    """Truth of a Boolean term on one minterm (a 0/1 valuation of the variables)."""
    match t:
        case Var(name):
            return valuation[name]
        case Zero():
            return 0
        case One():
            return 1
        case Meet(a, b):
            return _evaluate(a, valuation) & _evaluate(b, valuation)
        case Join(a, b):
            return _evaluate(a, valuation) | _evaluate(b, valuation)
        case Compl(a):
            return 1 - _evaluate(a, valuation)
    raise SignatureError(f"aba cannot interpret the term {t!r}")


@dataclass(frozen=True)
class AtomlessBAStructure(Structure):
    kind: ClassVar[str] = "aba"
    arity_cap: int = 4

    def _types(self, k: int) -> tuple[CompleteType, ...]:
        n = 2 ** k
        return tuple(CompleteType(self.kind, k, tuple(int(b) for b in format(v, f"0{n}b")))
                     for v in range(1, 2 ** n))

    def minterm(self, elements: Sequence[DyadicUnion], m: int) -> DyadicUnion:
        k = len(elements)
        region = DyadicUnion.one()
        for i, e in enumerate(elements):
            region = region.meet(e if sign(m, i, k) else e.complement())
        return region

    def type_of(self, elements: Sequence[Element]) -> CompleteType:
        values = [self._check(e) for e in elements]
        k = len(values)
        bits = tuple(0 if self.minterm(values, m).is_zero() else 1 for m in range(2 ** k))
        return CompleteType(self.kind, k, bits)

    def select(self, tau: CompleteType, indices: Sequence[int]) -> CompleteType:
        k, r = tau.arity, len(indices)
        bits = [0] * (2 ** r)
        for m, bit in enumerate(tau.payload):
            if bit:
                sub = 0
                for i in indices:
                    sub = (sub << 1) | sign(m, i, k)
                bits[sub] = 1
        return CompleteType(self.kind, r, tuple(bits))

    def atomic_holds(self, tau: CompleteType, atom: FOFormula, variables: Sequence[str]) -> bool:
        if not isinstance(atom, Eq):
            raise SignatureError(f"aba interprets '=' over Boolean terms, got {atom!r}")
        k = tau.arity
        for m, bit in enumerate(tau.payload):
            if not bit:
                continue
            valuation = {name: sign(m, i, k) for i, name in enumerate(variables)}
            if _evaluate(atom.left, valuation) != _evaluate(atom.right, valuation):
                return False
        return True

    def _extend(self, context: Sequence[Element], tau: CompleteType) -> Element:
        k = len(context)
        chosen = DyadicUnion.zero()
        for m in range(2 ** k):
            neg, pos = tau.payload[2 * m], tau.payload[2 * m + 1]
            if not pos:
                continue
            region = self.minterm(context, m)
            chosen = chosen.join(region.left_half() if neg else region)
        return chosen

    def minterm_term(self, m: int, names: Sequence[str]) -> Term:
        k = len(names)
        return meet_all(Var(n) if sign(m, i, k) else Compl(Var(n)) for i, n in enumerate(names))

    def isolating_formula(self, tau: CompleteType, variables: Sequence[str] | None = None) -> FOFormula:
        names = variables or default_variables(tau.arity)
        if tau.arity == 0:
            return Top()
        parts = []
        for m, bit in enumerate(tau.payload):
            term = self.minterm_term(m, names)
            parts.append(neq(term, Zero()) if bit else Eq(term, Zero()))
        return conjoin(parts)

    def render_type(self, tau: CompleteType) -> str:
        return "".join(str(b) for b in tau.payload)

    def parse_element(self, literal: str) -> Element:
        return DyadicUnion.parse(literal)

    def render_element(self, element: Element) -> str:
        return self._check(element).render()

    def seed_element(self) -> Element:
        return independent_family(0)

    def fresh_elements(self, count: int, avoid: Iterable[Element] = ()) -> tuple[Element, ...]:
        taken = set(avoid)
        out: list[DyadicUnion] = []
        index = 0
        while len(out) < count:
            candidate = independent_family(index)
            if candidate not in taken:
                out.append(candidate)
            index += 1
        return tuple(out)

    def _check(self, e: Element) -> DyadicUnion:
        if not isinstance(e, DyadicUnion):
            raise MalformedElementError(f"not an aba element: {e!r}")
        return e

