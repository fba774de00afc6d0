# src/structures/dyadic.py
"""
Finite unions of half-open dyadic intervals of [0, 1): the elements of the
countable atomless Boolean algebra.

Values are kept normalised (sorted, disjoint, adjacent pieces merged), so
two unions denote the same set iff they compare equal.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from src.errors import MalformedElementError

Interval = tuple[Fraction, Fraction]


def is_dyadic(q: Fraction) -> bool:
    d = q.denominator
    return d & (d - 1) == 0


def _normalise(pieces: Iterable[Interval]) -> tuple[Interval, ...]:
    merged: list[list[Fraction]] = []
    for lo, hi in sorted(p for p in pieces if p[0] < p[1]):
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return tuple((lo, hi) for lo, hi in merged)


@dataclass(frozen=True, order=True)
class DyadicUnion:
    intervals: tuple[Interval, ...] = ()

    @classmethod
    def of(cls, pieces: Iterable[tuple]) -> "DyadicUnion":
        return cls(_normalise((Fraction(lo), Fraction(hi)) for lo, hi in pieces))

    @classmethod
    def zero(cls) -> "DyadicUnion":
        return cls()

    @classmethod
    def one(cls) -> "DyadicUnion":
        return cls(((Fraction(0), Fraction(1)),))

    def is_zero(self) -> bool:
        return not self.intervals

    def meet(self, other: "DyadicUnion") -> "DyadicUnion":
        pieces = []
        for a_lo, a_hi in self.intervals:
            for b_lo, b_hi in other.intervals:
                lo, hi = max(a_lo, b_lo), min(a_hi, b_hi)
                if lo < hi:
                    pieces.append((lo, hi))
        return DyadicUnion(_normalise(pieces))

    def join(self, other: "DyadicUnion") -> "DyadicUnion":
        return DyadicUnion(_normalise(self.intervals + other.intervals))

    def complement(self) -> "DyadicUnion":
        pieces, cursor = [], Fraction(0)
        for lo, hi in self.intervals:
            pieces.append((cursor, lo))
            cursor = hi
        pieces.append((cursor, Fraction(1)))
        return DyadicUnion(_normalise(pieces))

    def left_half(self) -> "DyadicUnion":
        """Left half of the leftmost interval; nonzero and strictly below self when self ≠ 0."""
        lo, hi = self.intervals[0]
        return DyadicUnion(((lo, (lo + hi) / 2),))

    def render(self) -> str:
        if self.is_zero():
            return "0"
        return ",".join(f"{lo.numerator}/{lo.denominator}:{hi.numerator}/{hi.denominator}"
                        for lo, hi in self.intervals)

    @classmethod
    def parse(cls, literal: str) -> "DyadicUnion":
        """
        Read `a/b:c/d,...`; `0` is the empty union and `1` the whole interval.

        Raises:
            MalformedElementError: On non-dyadic or out-of-range endpoints
        """
        text = literal.strip()
        if text == "0":
            return cls.zero()
        if text == "1":
            return cls.one()
        pieces = []
        for chunk in text.split(","):
            try:
                lo_text, hi_text = chunk.split(":")
                lo, hi = Fraction(lo_text.strip()), Fraction(hi_text.strip())
            except (ValueError, ZeroDivisionError) as exc:
                raise MalformedElementError(f"bad interval '{chunk}' in '{literal}'") from exc
            if not (is_dyadic(lo) and is_dyadic(hi)):
                raise MalformedElementError(f"interval '{chunk}' has a non-dyadic endpoint")
            if not (0 <= lo < hi <= 1):
                raise MalformedElementError(f"interval '{chunk}' is empty or leaves [0,1)")
            pieces.append((lo, hi))
        return cls.of(pieces)


def independent_family(index: int) -> DyadicUnion:
    """The index-th member of a fixed family whose Boolean combinations are all nonzero."""
    cells = 2 ** (index + 1)
    width = Fraction(1, cells)
    return DyadicUnion.of((i * width, (i + 1) * width) for i in range(0, cells, 2))
