# src/logic/ltl.py
"""
Temporal layer shared by data-level and propositional specifications.

Only the core connectives are nodes: negation, conjunction, X, U, Y, S.
The builders below produce the derived forms (|, ->, G, F, <->) in terms
of them, so every consumer handles one small grammar.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Union

from src.logic.fo import FOFormula, render_formula


@dataclass(frozen=True)
class LTrue:
    pass


@dataclass(frozen=True)
class LFalse:
    pass


@dataclass(frozen=True)
class Prop:
    name: str


@dataclass(frozen=True)
class Data:
    formula: FOFormula
    guard: int = 0           # atom is false before this step


@dataclass(frozen=True)
class LNot:
    arg: "Ltl"


@dataclass(frozen=True)
class LAnd:
    left: "Ltl"
    right: "Ltl"


@dataclass(frozen=True)
class Next:
    arg: "Ltl"


@dataclass(frozen=True)
class Until:
    left: "Ltl"
    right: "Ltl"


@dataclass(frozen=True)
class Yesterday:
    arg: "Ltl"


@dataclass(frozen=True)
class Since:
    left: "Ltl"
    right: "Ltl"


Ltl = Union[LTrue, LFalse, Prop, Data, LNot, LAnd, Next, Until, Yesterday, Since]

BINARY = (LAnd, Until, Since)


# ---------------------------  Builders  --------------------------- #

def lnot(a: Ltl) -> Ltl:
    match a:
        case LTrue():
            return LFalse()
        case LFalse():
            return LTrue()
        case LNot(inner):
            return inner
    return LNot(a)


def _balanced(items: list[Ltl]) -> Ltl:
    if len(items) == 1:
        return items[0]
    mid = len(items) // 2
    return LAnd(_balanced(items[:mid]), _balanced(items[mid:]))


def conj(items: Iterable[Ltl]) -> Ltl:
    parts = [f for f in items if not isinstance(f, LTrue)]
    if any(isinstance(f, LFalse) for f in parts):
        return LFalse()
    return _balanced(parts) if parts else LTrue()


def disj(items: Iterable[Ltl]) -> Ltl:
    return lnot(conj(lnot(f) for f in items))


def land(a: Ltl, b: Ltl) -> Ltl:
    return conj([a, b])


def lor(a: Ltl, b: Ltl) -> Ltl:
    return disj([a, b])


def implies(a: Ltl, b: Ltl) -> Ltl:
    return lnot(conj([a, lnot(b)]))


def iff(a: Ltl, b: Ltl) -> Ltl:
    return conj([implies(a, b), implies(b, a)])


def always(a: Ltl) -> Ltl:
    if isinstance(a, LTrue):
        return a
    return LNot(Until(LTrue(), lnot(a)))


def eventually(a: Ltl) -> Ltl:
    return Until(LTrue(), a)


def yesterday_n(a: Ltl, n: int) -> Ltl:
    for _ in range(n):
        a = Yesterday(a)
    return a


def exactly_one(props: list[Ltl]) -> Ltl:
    """At least one holds and no two hold together."""
    if not props:
        return LFalse()
    pairs = [lnot(conj([a, b])) for i, a in enumerate(props) for b in props[i + 1:]]
    return conj([disj(props), *pairs])


# ---------------------------  Traversal  --------------------------- #

def children(f: Ltl) -> tuple[Ltl, ...]:
    match f:
        case LNot(a) | Next(a) | Yesterday(a):
            return (a,)
        case LAnd(a, b) | Until(a, b) | Since(a, b):
            return (a, b)
    return ()


def subformulas(f: Ltl) -> Iterator[Ltl]:
    """Post-order, each distinct subformula once."""
    seen: set = set()
    stack: list[tuple[Ltl, bool]] = [(f, False)]
    while stack:
        node, expanded = stack.pop()
        if node in seen:
            continue
        if expanded:
            seen.add(node)
            yield node
            continue
        stack.append((node, True))
        for child in reversed(children(node)):
            if child not in seen:
                stack.append((child, False))


def props_of(f: Ltl) -> list[str]:
    out: list[str] = []
    for g in subformulas(f):
        if isinstance(g, Prop) and g.name not in out:
            out.append(g.name)
    return out


def data_atoms(f: Ltl) -> list[Data]:
    """Distinct data atoms in order of first occurrence."""
    out: list[Data] = []

    def walk(g: Ltl) -> None:
        if isinstance(g, Data):
            if g not in out:
                out.append(g)
            return
        for c in children(g):
            walk(c)

    walk(f)
    return out


def map_atoms(f: Ltl, fn: Callable[[Ltl], Ltl]) -> Ltl:
    """Rebuild f with every Prop / Data leaf replaced by fn(leaf)."""
    memo: dict[Ltl, Ltl] = {}

    def walk(g: Ltl) -> Ltl:
        if g in memo:
            return memo[g]
        match g:
            case Prop() | Data():
                out = fn(g)
            case LNot(a):
                out = LNot(walk(a))
            case LAnd(a, b):
                out = LAnd(walk(a), walk(b))
            case Next(a):
                out = Next(walk(a))
            case Until(a, b):
                out = Until(walk(a), walk(b))
            case Yesterday(a):
                out = Yesterday(walk(a))
            case Since(a, b):
                out = Since(walk(a), walk(b))
            case _:
                out = g
        memo[g] = out
        return out

    return walk(f)


def rebuild(f: Ltl, fn: Callable[[Ltl], Ltl]) -> Ltl:
    """Same node with fn applied to each direct child."""
    match f:
        case LNot(a):
            return LNot(fn(a))
        case LAnd(a, b):
            return LAnd(fn(a), fn(b))
        case Next(a):
            return Next(fn(a))
        case Until(a, b):
            return Until(fn(a), fn(b))
        case Yesterday(a):
            return Yesterday(fn(a))
        case Since(a, b):
            return Since(fn(a), fn(b))
    return f


def past_depth(f: Ltl) -> int:
    match f:
        case Yesterday(a):
            return 1 + past_depth(a)
        case Since(a, b):
            return 1 + max(past_depth(a), past_depth(b))
    return max((past_depth(c) for c in children(f)), default=0)


def first_past(f: Ltl) -> Ltl | None:
    """The first Y / S subformula in pre-order, or None when past-free."""
    if isinstance(f, (Yesterday, Since)):
        return f
    for c in children(f):
        hit = first_past(c)
        if hit is not None:
            return hit
    return None


def yesterday_chain(f: Ltl) -> int | None:
    """k when f is Y^k TRUE with k >= 1, else None."""
    depth = 0
    while isinstance(f, Yesterday):
        depth += 1
        f = f.arg
    return depth if depth and isinstance(f, LTrue) else None


# ---------------------------  Rendering  --------------------------- #

def render_ltl(f: Ltl) -> str:
    """Canonical text in the spec grammar (propositions print bare)."""
    match f:
        case LTrue():
            return "TRUE"
        case LFalse():
            return "FALSE"
        case Prop(name):
            return name
        case Data(formula, _):
            return "{ " + render_formula(formula) + " }"
        case LNot(a):
            return "!" + render_ltl(a)
        case LAnd(a, b):
            return f"({render_ltl(a)} & {render_ltl(b)})"
        case Next(a):
            return "X " + render_ltl(a)
        case Until(a, b):
            return f"({render_ltl(a)} U {render_ltl(b)})"
        case Yesterday(a):
            return "Y " + render_ltl(a)
        case Since(a, b):
            return f"({render_ltl(a)} S {render_ltl(b)})"
    raise TypeError(f"not a temporal formula: {f!r}")
