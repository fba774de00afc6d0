# src/backend/alphabet.py
"""
Letters of a propositional alphabet as BDDs.

A letter is a full valuation of the declared propositions; sets of letters
(transition labels, output classes) are BDDs over those propositions. Bit
strings list the propositions in declaration order, '1' for true.
"""
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

from dd.autoref import BDD, Function

Valuation = dict[str, bool]


class Alphabet:
    def __init__(self, props: Sequence[str]):
        self.bdd = BDD()
        self.props = tuple(props)
        if self.props:
            self.bdd.declare(*self.props)

    @property
    def true(self) -> Function:
        return self.bdd.true

    @property
    def false(self) -> Function:
        return self.bdd.false

    def var(self, name: str) -> Function:
        return self.bdd.var(name)

    def ensure(self, names: Iterable[str]) -> None:
        """Declare auxiliary variables (tableau guesses) on first use."""
        missing = [n for n in names if n not in self.bdd.vars]
        if missing:
            self.bdd.declare(*missing)

    def iff(self, u: Function, v: Function) -> Function:
        return (u & v) | (~u & ~v)

    def cube(self, valuation: Mapping[str, bool]) -> Function:
        u = self.bdd.true
        for name, value in valuation.items():
            v = self.bdd.var(name)
            u &= v if value else ~v
        return u

    def pattern(self, names: Sequence[str], text: str) -> Function:
        """Cube of a 0/1/- pattern over `names`."""
        return self.cube({n: c == "1" for n, c in zip(names, text) if c != "-"})

    def restrict(self, u: Function, valuation: Mapping[str, bool]) -> Function:
        return self.bdd.let(dict(valuation), u)

    def holds(self, u: Function, valuation: Mapping[str, bool]) -> bool:
        support = self.bdd.support(u)
        return self.bdd.let({n: bool(valuation.get(n, False)) for n in support}, u) == self.bdd.true

    def least(self, u: Function, names: Sequence[str]) -> Valuation | None:
        """Least satisfying valuation of `names`, False before True in declared order."""
        others = self.bdd.support(u) - set(names)
        if others:
            u = self.bdd.exist(others, u)
        if u == self.bdd.false:
            return None
        out: Valuation = {}
        for name in names:
            low = self.bdd.let({name: False}, u)
            if low != self.bdd.false:
                out[name], u = False, low
            else:
                out[name], u = True, self.bdd.let({name: True}, u)
        return out

    def assignments(self, u: Function, names: Sequence[str]) -> list[Valuation]:
        """All valuations of `names` in u (u projected onto them), in canonical order."""
        if not names:
            return [{}] if u != self.bdd.false else []
        others = self.bdd.support(u) - set(names)
        if others:
            u = self.bdd.exist(others, u)
        found = list(self.bdd.pick_iter(u, care_vars=set(names)))
        found = [{n: bool(a.get(n, False)) for n in names} for a in found]
        return sorted(found, key=lambda a: tuple(a[n] for n in names))

    def cubes(self, u: Function, names: Sequence[str]) -> list[str]:
        """0/1/- cubes over `names` whose union is u."""
        out: list[str] = []
        rest = u
        while rest != self.bdd.false:
            point = self.least(rest, names)
            # widen the point greedily while staying inside u
            pattern = {n: point[n] for n in names}
            for n in names:
                wider = {m: v for m, v in pattern.items() if m != n}
                if self.cube(wider) & ~u == self.bdd.false:
                    pattern = wider
            out.append("".join("-" if n not in pattern else "1" if pattern[n] else "0" for n in names))
            rest &= ~self.cube(pattern)
        return out

    def refine(self, labels: Iterable[Function]) -> list[Function]:
        """Coarsest partition of TRUE on which every label is constant."""
        blocks = [self.bdd.true]
        for label in labels:
            split = []
            for block in blocks:
                for part in (block & label, block & ~label):
                    if part != self.bdd.false:
                        split.append(part)
            blocks = split
        return blocks


def all_valuations(names: Sequence[str]) -> Iterator[Valuation]:
    """Every valuation of `names`, counting up with the last name fastest."""
    for bits in product((False, True), repeat=len(names)):
        yield dict(zip(names, bits))


def to_bits(valuation: Mapping[str, bool], names: Sequence[str]) -> str:
    return "".join("1" if valuation.get(n) else "0" for n in names)


def from_bits(bits: str, names: Sequence[str]) -> Valuation:
    return {n: c == "1" for n, c in zip(names, bits)}
