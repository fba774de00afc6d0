# src/backend/lasso.py
"""
Ultimately periodic words u·v^ω over propositional letters, and direct
evaluation of temporal formulas on them.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from src.logic.ltl import (
    LAnd, LFalse, LNot, LTrue, Ltl, Next, Prop, Since, Until, Yesterday, past_depth,
)

Letter = frozenset[str]        # the propositions that hold


@dataclass(frozen=True)
class Lasso:
    prefix: tuple[Letter, ...]
    loop: tuple[Letter, ...]

    def __post_init__(self):
        if not self.loop:
            raise ValueError("a lasso needs a nonempty loop")

    @classmethod
    def of(cls, prefix: Sequence, loop: Sequence) -> "Lasso":
        return cls(tuple(frozenset(a) for a in prefix), tuple(frozenset(a) for a in loop))

    def letter(self, t: int) -> Letter:
        if t < len(self.prefix):
            return self.prefix[t]
        return self.loop[(t - len(self.prefix)) % len(self.loop)]

    def unrolled(self, copies: int) -> "Lasso":
        """Same word with `copies` loop iterations moved into the prefix."""
        return Lasso(self.prefix + self.loop * copies, self.loop)

    def render(self, props: Sequence[str] | None = None) -> str:
        def one(letter: Letter) -> str:
            names = props if props is not None else sorted(letter)
            shown = [p if p in letter else "!" + p for p in names]
            return "{" + ", ".join(shown) + "}"
        head = " ".join(one(a) for a in self.prefix)
        tail = " ".join(one(a) for a in self.loop)
        return f"{head} ({tail})^w".strip()


def evaluate(f: Ltl, lasso: Lasso) -> bool:
    """
    Truth of f at position 0 of the lasso.

    Past subformulas are evaluated on a copy whose prefix holds enough loop
    iterations for every past value to be periodic on the kept loop copy.
    """
    depth = past_depth(f)
    word = lasso.unrolled(depth + 1) if depth else lasso
    start = len(word.prefix)
    n = start + len(word.loop)
    letters = list(word.prefix) + list(word.loop)
    succ = [i + 1 if i + 1 < n else start for i in range(n)]
    memo: dict[Ltl, list[bool]] = {}

    def values(g: Ltl) -> list[bool]:
        if g in memo:
            return memo[g]
        match g:
            case LTrue():
                out = [True] * n
            case LFalse():
                out = [False] * n
            case Prop(name):
                out = [name in a for a in letters]
            case LNot(a):
                out = [not v for v in values(a)]
            case LAnd(a, b):
                out = [x and y for x, y in zip(values(a), values(b))]
            case Next(a):
                va = values(a)
                out = [va[succ[i]] for i in range(n)]
            case Until(a, b):
                va, vb = values(a), values(b)
                out = [False] * n
                changed = True
                while changed:
                    changed = False
                    for i in reversed(range(n)):
                        v = vb[i] or (va[i] and out[succ[i]])
                        if v != out[i]:
                            out[i], changed = v, True
            case Yesterday(a):
                va = values(a)
                out = [False] + va[:-1]
            case Since(a, b):
                va, vb = values(a), values(b)
                out = []
                for i in range(n):
                    out.append(vb[i] or (i > 0 and va[i] and out[i - 1]))
            case _:
                raise TypeError(f"not a propositional temporal formula: {g!r}")
        memo[g] = out
        return out

    return values(f)[0]
