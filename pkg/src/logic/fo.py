# src/logic/fo.py
"""
First-order data formulas: AST, free variables, capture-avoiding
substitution and the canonical text rendering used for round trips.

Disjunction is kept as a node; implication and `!=` are expanded by the
parser. Stream references are plain variables named `x1`, `y2[-1]`, ...
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Mapping, Union

from src.errors import FixpointError


# ---------------------------  Terms  --------------------------- #

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Meet:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Join:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Compl:
    arg: "Term"


@dataclass(frozen=True)
class Proj:
    index: int          # 1-based component of a product element
    arg: "Term"


Term = Union[Var, Const, Zero, One, Meet, Join, Compl, Proj]


# ---------------------------  Formulas  --------------------------- #

@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Less:
    left: Term
    right: Term


@dataclass(frozen=True)
class RelApp:
    relation: str
    args: tuple[Term, ...]


@dataclass(frozen=True)
class Not:
    arg: "FOFormula"


@dataclass(frozen=True)
class And:
    left: "FOFormula"
    right: "FOFormula"


@dataclass(frozen=True)
class Or:
    left: "FOFormula"
    right: "FOFormula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "FOFormula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "FOFormula"


@dataclass(frozen=True)
class Fixpoint:
    op: str                      # pfp | lfp | gfp
    relation: str
    params: tuple[str, ...]
    body: "FOFormula"
    args: tuple[Term, ...]


FOFormula = Union[Top, Bottom, Eq, Less, RelApp, Not, And, Or, Exists, Forall, Fixpoint]

ATOMS = (Eq, Less)
FIXPOINT_OPS = ("pfp", "lfp", "gfp")


# ---------------------------  Builders  --------------------------- #

def _balanced(items: list, node):
    if len(items) == 1:
        return items[0]
    mid = len(items) // 2
    return node(_balanced(items[:mid], node), _balanced(items[mid:], node))


def conjoin(items: Iterable[FOFormula]) -> FOFormula:
    """Balanced conjunction; TRUE for no operands."""
    parts = [f for f in items if not isinstance(f, Top)]
    if any(isinstance(f, Bottom) for f in parts):
        return Bottom()
    return _balanced(parts, And) if parts else Top()


def disjoin(items: Iterable[FOFormula]) -> FOFormula:
    """Balanced disjunction; FALSE for no operands."""
    parts = [f for f in items if not isinstance(f, Bottom)]
    if any(isinstance(f, Top) for f in parts):
        return Top()
    return _balanced(parts, Or) if parts else Bottom()


def neq(left: Term, right: Term) -> FOFormula:
    return Not(Eq(left, right))


def meet_all(terms: Iterable[Term]) -> Term:
    terms = list(terms)
    return reduce(Meet, terms) if terms else One()


# ---------------------------  Variables  --------------------------- #

def term_vars(t: Term) -> frozenset[str]:
    match t:
        case Var(name):
            return frozenset({name})
        case Meet(a, b) | Join(a, b):
            return term_vars(a) | term_vars(b)
        case Compl(a) | Proj(_, a):
            return term_vars(a)
        case _:
            return frozenset()


def term_consts(t: Term) -> frozenset[str]:
    match t:
        case Const(name):
            return frozenset({name})
        case Meet(a, b) | Join(a, b):
            return term_consts(a) | term_consts(b)
        case Compl(a) | Proj(_, a):
            return term_consts(a)
        case _:
            return frozenset()


def free_vars(f: FOFormula) -> frozenset[str]:
    """Exact free-variable set; relation symbols are not variables."""
    match f:
        case Top() | Bottom():
            return frozenset()
        case Eq(a, b) | Less(a, b):
            return term_vars(a) | term_vars(b)
        case RelApp(_, args):
            return frozenset().union(*(term_vars(t) for t in args))
        case Not(a):
            return free_vars(a)
        case And(a, b) | Or(a, b):
            return free_vars(a) | free_vars(b)
        case Exists(v, body) | Forall(v, body):
            return free_vars(body) - {v}
        case Fixpoint(_, _, params, body, args):
            outer = frozenset().union(*(term_vars(t) for t in args))
            return outer | (free_vars(body) - set(params))
    raise TypeError(f"not a formula: {f!r}")


def names_in(f: FOFormula) -> frozenset[str]:
    """Every variable name occurring free or bound."""
    match f:
        case Exists(v, body) | Forall(v, body):
            return names_in(body) | {v}
        case Fixpoint(_, _, params, body, args):
            return names_in(body) | set(params) | frozenset().union(*(term_vars(t) for t in args))
        case Not(a):
            return names_in(a)
        case And(a, b) | Or(a, b):
            return names_in(a) | names_in(b)
        case _:
            return free_vars(f)


def constants_in(f: FOFormula) -> frozenset[str]:
    match f:
        case Eq(a, b) | Less(a, b):
            return term_consts(a) | term_consts(b)
        case RelApp(_, args):
            return frozenset().union(*(term_consts(t) for t in args))
        case Not(a) | Exists(_, a) | Forall(_, a):
            return constants_in(a)
        case And(a, b) | Or(a, b):
            return constants_in(a) | constants_in(b)
        case Fixpoint(_, _, _, body, args):
            return constants_in(body) | frozenset().union(*(term_consts(t) for t in args))
        case _:
            return frozenset()


def quantifier_depth(f: FOFormula) -> int:
    match f:
        case Exists(_, body) | Forall(_, body):
            return 1 + quantifier_depth(body)
        case Not(a):
            return quantifier_depth(a)
        case And(a, b) | Or(a, b):
            return max(quantifier_depth(a), quantifier_depth(b))
        case Fixpoint(_, _, params, body, _):
            return len(params) + quantifier_depth(body)
        case _:
            return 0


def has_fixpoint(f: FOFormula) -> bool:
    match f:
        case Fixpoint() | RelApp():
            return True
        case Not(a) | Exists(_, a) | Forall(_, a):
            return has_fixpoint(a)
        case And(a, b) | Or(a, b):
            return has_fixpoint(a) or has_fixpoint(b)
        case _:
            return False


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    taken = set(avoid)
    n = 1
    while f"{base}_{n}" in taken:
        n += 1
    return f"{base}_{n}"


# ---------------------------  Substitution  --------------------------- #

def substitute_term(t: Term, mapping: Mapping[str, Term]) -> Term:
    match t:
        case Var(name):
            return mapping.get(name, t)
        case Meet(a, b):
            return Meet(substitute_term(a, mapping), substitute_term(b, mapping))
        case Join(a, b):
            return Join(substitute_term(a, mapping), substitute_term(b, mapping))
        case Compl(a):
            return Compl(substitute_term(a, mapping))
        case Proj(i, a):
            return Proj(i, substitute_term(a, mapping))
        case _:
            return t


def substitute(f: FOFormula, mapping: Mapping[str, Term]) -> FOFormula:
    """
    Simultaneous capture-avoiding substitution of free variables.

    Binders that would capture a variable of a substituted term are renamed.
    """
    if not mapping:
        return f
    match f:
        case Top() | Bottom():
            return f
        case Eq(a, b):
            return Eq(substitute_term(a, mapping), substitute_term(b, mapping))
        case Less(a, b):
            return Less(substitute_term(a, mapping), substitute_term(b, mapping))
        case RelApp(r, args):
            return RelApp(r, tuple(substitute_term(t, mapping) for t in args))
        case Not(a):
            return Not(substitute(a, mapping))
        case And(a, b):
            return And(substitute(a, mapping), substitute(b, mapping))
        case Or(a, b):
            return Or(substitute(a, mapping), substitute(b, mapping))
        case Exists(v, body) | Forall(v, body):
            node = type(f)
            var, inner, scoped = _enter_binder(v, body, mapping)
            return node(var, substitute(inner, scoped))
        case Fixpoint(op, r, params, body, args):
            new_args = tuple(substitute_term(t, mapping) for t in args)
            scoped = {k: t for k, t in mapping.items() if k not in params}
            clash = frozenset().union(*(term_vars(t) for t in scoped.values())) if scoped else frozenset()
            if clash & set(params):
                avoid = names_in(body) | clash | set(scoped)
                renamed = []
                for p in params:
                    if p in clash:
                        q = fresh_name(p, avoid)
                        avoid |= {q}
                        renamed.append(q)
                    else:
                        renamed.append(p)
                body = substitute(body, {p: Var(q) for p, q in zip(params, renamed) if p != q})
                params = tuple(renamed)
            return Fixpoint(op, r, params, substitute(body, scoped), new_args)
    raise TypeError(f"not a formula: {f!r}")


def _enter_binder(v: str, body: FOFormula, mapping: Mapping[str, Term]):
    scoped = {k: t for k, t in mapping.items() if k != v}
    if not scoped:
        return v, body, scoped
    incoming = frozenset().union(*(term_vars(t) for t in scoped.values()))
    if v not in incoming:
        return v, body, scoped
    fresh = fresh_name(v, names_in(body) | incoming | set(scoped))
    return fresh, substitute(body, {v: Var(fresh)}), scoped


def substitute_relation(body: FOFormula, relation: str, params: tuple[str, ...],
                        definition: FOFormula) -> FOFormula:
    """
    Replace every R(t̄) in body by definition[params ↦ t̄], avoiding capture.

    Raises:
        FixpointError: If some occurrence of R has the wrong arity
    """
    exposed = free_vars(definition) - set(params)

    def walk(f: FOFormula) -> FOFormula:
        match f:
            case RelApp(r, args) if r == relation:
                if len(args) != len(params):
                    raise FixpointError(
                        f"relation {relation} has arity {len(params)} but is applied to {len(args)} terms")
                return substitute(definition, dict(zip(params, args)))
            case Not(a):
                return Not(walk(a))
            case And(a, b):
                return And(walk(a), walk(b))
            case Or(a, b):
                return Or(walk(a), walk(b))
            case Exists(v, inner) | Forall(v, inner):
                if v in exposed:
                    fresh = fresh_name(v, names_in(inner) | exposed | names_in(definition))
                    inner = substitute(inner, {v: Var(fresh)})
                    v = fresh
                return type(f)(v, walk(inner))
            case Fixpoint(op, r, ps, inner, args) if r != relation:
                clash = exposed & set(ps)
                if clash:
                    avoid = names_in(inner) | exposed | names_in(definition)
                    renamed = []
                    for p in ps:
                        q = fresh_name(p, avoid) if p in clash else p
                        avoid |= {q}
                        renamed.append(q)
                    inner = substitute(inner, {p: Var(q) for p, q in zip(ps, renamed) if p != q})
                    ps = tuple(renamed)
                return Fixpoint(op, r, ps, walk(inner), args)
            case _:
                return f

    return walk(body)


# ---------------------------  Rendering  --------------------------- #

def render_term(t: Term) -> str:
    match t:
        case Var(name) | Const(name):
            return name
        case Zero():
            return "0"
        case One():
            return "1"
        case Meet(a, b):
            return f"({render_term(a)} & {render_term(b)})"
        case Join(a, b):
            return f"({render_term(a)} | {render_term(b)})"
        case Compl(a):
            return f"~{render_term(a)}"
        case Proj(i, a):
            return f"{render_term(a)}.{i}"
    raise TypeError(f"not a term: {t!r}")


def _operand(f: FOFormula) -> str:
    text = render_formula(f)
    return f"({text})" if isinstance(f, ATOMS) else text


def render_formula(f: FOFormula) -> str:
    """Canonical text; parse(render(f)) == f."""
    match f:
        case Top():
            return "TRUE"
        case Bottom():
            return "FALSE"
        case Eq(a, b):
            return f"{render_term(a)} = {render_term(b)}"
        case Less(a, b):
            return f"{render_term(a)} < {render_term(b)}"
        case RelApp(r, args):
            return f"{r}({', '.join(render_term(t) for t in args)})"
        case Not(a):
            return f"!{_operand(a)}"
        case And(a, b):
            return f"({render_formula(a)} & {render_formula(b)})"
        case Or(a, b):
            return f"({render_formula(a)} | {render_formula(b)})"
        case Exists(v, body):
            return f"exists {v}. {_operand(body)}"
        case Forall(v, body):
            return f"forall {v}. {_operand(body)}"
        case Fixpoint(op, r, params, body, args):
            return (f"{op} {r}({', '.join(params)}). {_operand(body)} "
                    f"@ ({', '.join(render_term(t) for t in args)})")
    raise TypeError(f"not a formula: {f!r}")
