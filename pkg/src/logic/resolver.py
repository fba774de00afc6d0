# src/logic/resolver.py
"""
Resolve identifiers in parsed data formulas: stream references, declared
constants, quantified variables and fixpoint relation symbols.
"""
import re
from typing import Optional

from src.errors import SpecValidationError
from src.logic.fo import (
    And, Bottom, Compl, Const, Eq, Exists, FOFormula, Fixpoint, Forall, Join,
    Less, Meet, Not, One, Or, Proj, RelApp, Term, Top, Var, Zero,
)
from src.logic.ltl import Data, Ltl, map_atoms
from src.logic.spec_schema import SurfaceSpec, parse_stream_name, stream_name

_LAGGED = re.compile(r"^(?P<base>[A-Za-z_][A-Za-z0-9_]*)(\[-(?P<lag>\d+)\])?$")

# bare `x` / `y` stand for the first stream
ALIASES = {"x": "x1", "y": "y1"}


class _Scope:
    def __init__(self, constants: frozenset[str], streams: Optional[int], lookback: Optional[int]):
        self.constants = constants
        self.streams = streams          # None: free names become variables
        self.lookback = lookback

    def name(self, raw: str, bound: frozenset[str]) -> Term:
        m = _LAGGED.match(raw)
        base, lag = m.group("base"), int(m.group("lag") or 0)
        if base in bound or (self.streams is None and base not in self.constants):
            if lag:
                raise SpecValidationError(f"'{raw}': only stream references carry a lag")
            return Var(base)
        if base in self.constants:
            if lag:
                raise SpecValidationError(f"'{raw}': constants carry no lag")
            return Const(base)
        if base in ALIASES:
            raw = stream_name(base, 1, lag)
        ref = parse_stream_name(raw)
        if ref is None:
            raise SpecValidationError(f"undeclared stream or constant '{raw}'")
        if ref.index > self.streams:
            raise SpecValidationError(
                f"stream reference '{raw}' exceeds the {self.streams} declared stream(s)")
        if ref.lag > self.lookback:
            raise SpecValidationError(
                f"lag {ref.lag} in '{raw}' exceeds lookback {self.lookback}")
        return Var(ref.name)


def _term(t: Term, scope: _Scope, bound: frozenset[str]) -> Term:
    match t:
        case Var(name):
            return scope.name(name, bound)
        case Meet(a, b):
            return Meet(_term(a, scope, bound), _term(b, scope, bound))
        case Join(a, b):
            return Join(_term(a, scope, bound), _term(b, scope, bound))
        case Compl(a):
            return Compl(_term(a, scope, bound))
        case Proj(i, a):
            return Proj(i, _term(a, scope, bound))
        case Zero() | One() | Const():
            return t
    raise TypeError(f"not a term: {t!r}")


def _formula(f: FOFormula, scope: _Scope, bound: frozenset[str],
             relations: dict[str, int]) -> FOFormula:
    match f:
        case Top() | Bottom():
            return f
        case Eq(a, b):
            return Eq(_term(a, scope, bound), _term(b, scope, bound))
        case Less(a, b):
            return Less(_term(a, scope, bound), _term(b, scope, bound))
        case RelApp(r, args):
            if r not in relations:
                raise SpecValidationError(f"relation '{r}' is not bound by an enclosing fixpoint")
            if relations[r] != len(args):
                raise SpecValidationError(
                    f"relation '{r}' has arity {relations[r]} but is applied to {len(args)} terms")
            return RelApp(r, tuple(_term(t, scope, bound) for t in args))
        case Not(a):
            return Not(_formula(a, scope, bound, relations))
        case And(a, b):
            return And(_formula(a, scope, bound, relations), _formula(b, scope, bound, relations))
        case Or(a, b):
            return Or(_formula(a, scope, bound, relations), _formula(b, scope, bound, relations))
        case Exists(v, body) | Forall(v, body):
            return type(f)(v, _formula(body, scope, bound | {v}, relations))
        case Fixpoint(op, r, params, body, args):
            if len(set(params)) != len(params):
                raise SpecValidationError(f"fixpoint {r} repeats a parameter name")
            if len(params) != len(args):
                raise SpecValidationError(
                    f"fixpoint {r} binds {len(params)} parameters but is applied to {len(args)} terms")
            inner = _formula(body, scope, bound | set(params), {**relations, r: len(params)})
            return Fixpoint(op, r, params, inner, tuple(_term(t, scope, bound) for t in args))
    raise TypeError(f"not a formula: {f!r}")


def resolve_spec(headers: dict, formula: Ltl) -> SurfaceSpec:
    """Check every data atom against the declared streams, lookback and constants."""
    constants = tuple(headers["constants"])
    names = frozenset(c.name for c in constants)
    for c in constants:
        if parse_stream_name(c.name) is not None or c.name in ALIASES:
            raise SpecValidationError(f"constant '{c.name}' clashes with a stream name")
    scope = _Scope(names, headers["streams"], headers["lookback"])

    def resolve(leaf: Ltl) -> Ltl:
        if isinstance(leaf, Data):
            return Data(_formula(leaf.formula, scope, frozenset(), {}), leaf.guard)
        return leaf

    return SurfaceSpec(headers["structure"], headers["streams"], headers["lookback"],
                       constants, map_atoms(formula, resolve))


def resolve_free_formula(f: FOFormula, constants: frozenset[str]) -> FOFormula:
    """Resolve a formula outside any spec: unknown names stay variables."""
    return _formula(f, _Scope(constants, None, None), frozenset(), {})
