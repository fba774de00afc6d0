# src/logic/parser.py
"""
Spec-language parser built on a lark Earley grammar.

Three entry points share one grammar: full specification files, standalone
FO formulas (for `elimfix`) and structure expressions (for `types`).
Propositional temporal formulas (PropSpec files) use a sibling grammar whose
atoms are lower-case proposition names instead of braced data formulas.
"""
import logging

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

from src.errors import OcSynthError, SpecSyntaxError, SpecValidationError
from src.logic.fo import (
    Bottom, Compl, Eq, Exists, FOFormula, Fixpoint, Forall, Join, Less, Meet,
    Not, One, Or, And, Proj, RelApp, Top, Var, Zero,
)
from src.logic.ltl import (
    Data, LAnd, LFalse, LNot, LTrue, Ltl, Next, Prop, Since, Until, Yesterday,
)
from src.logic.resolver import resolve_free_formula, resolve_spec
from src.logic.spec_schema import ConstantDecl, StructureDecl, SurfaceSpec

log = logging.getLogger(__name__)

LTL_RULES = r"""
?ltl: ltl_or
    | ltl_or "->" ltl               -> ltl_implies
?ltl_or: ltl_and
    | ltl_or "|" ltl_and            -> ltl_disj
?ltl_and: ltl_bin
    | ltl_and "&" ltl_bin           -> ltl_conj
?ltl_bin: ltl_un
    | ltl_un "U" ltl_bin            -> ltl_until
    | ltl_un "S" ltl_bin            -> ltl_since
?ltl_un: ltl_atom
    | "!" ltl_un                    -> ltl_not
    | "X" ltl_un                    -> ltl_next
    | "Y" ltl_un                    -> ltl_yesterday
    | "G" ltl_un                    -> ltl_globally
    | "F" ltl_un                    -> ltl_finally
    | "TRUE"                        -> ltl_true
    | "FALSE"                       -> ltl_false
    | "(" ltl ")"
"""

SPEC_GRAMMAR = LTL_RULES + r"""
start: header* "spec" ":"? ltl
fo_start: fo
struct_start: struct_expr

header: "structure" struct_expr ";"        -> structure_header
      | "streams" INT ";"                  -> streams_header
      | "lookback" INT ";"                 -> lookback_header
      | "constant" NAME "=" LITERAL ";"    -> constant_header
      | "constant" NAME ";"                -> free_constant_header

?struct_expr: STRUCT_KIND                  -> struct_base
      | "product" "(" struct_expr ("," struct_expr)* ")"   -> struct_product

ltl_atom: "{" fo "}"

?fo: fo_or
   | fo_or "->" fo                         -> fo_implies
?fo_or: fo_and
   | fo_or "|" fo_and                      -> fo_disj
?fo_and: fo_un
   | fo_and "&" fo_un                      -> fo_conj
?fo_un: "!" fo_un                          -> fo_not
   | "~" "(" fo ")"                        -> fo_not
   | QUANT NAME "." fo_un                  -> fo_quant
   | FIXOP NAME "(" name_list ")" "." fo_un "@" "(" term_list ")"  -> fo_fixpoint
   | "TRUE"                                -> fo_true
   | "FALSE"                               -> fo_false
   | term "=" term                         -> fo_eq
   | term "!=" term                        -> fo_neq
   | term "<" term                         -> fo_less
   | NAME "(" term_list ")"                -> fo_rel
   | "(" fo ")"

name_list: NAME ("," NAME)*
term_list: term ("," term)*

?term: term_meet
   | term "|" term_meet                    -> term_join
?term_meet: term_un
   | term_meet "&" term_un                 -> term_meet_op
?term_un: term_atom
   | "~" term_un                           -> term_compl
?term_atom: NAME                           -> term_name
   | NAME "[" "-" INT "]"                  -> term_lagged
   | term_atom "." INT                     -> term_proj
   | "0"                                   -> term_zero
   | "1"                                   -> term_one
   | "(" term ")"

QUANT: "exists" | "forall"
FIXOP: "pfp" | "lfp" | "gfp"
STRUCT_KIND: "eq" | "dlo" | "aba"
NAME: /[A-Za-z_][A-Za-z0-9_]*/
INT: /[0-9]+/
LITERAL: /[^;\s][^;]*/
COMMENT: /#[^\n]*/

%import common.WS
%ignore WS
%ignore COMMENT
"""

PROP_GRAMMAR = LTL_RULES + r"""
prop_start: ltl
ltl_atom: PROP
PROP: /[a-z_][a-z0-9_]*/

%import common.WS
%ignore WS
"""

_SPEC_PARSER = Lark(SPEC_GRAMMAR, parser="earley", start=["start", "fo_start", "struct_start"])
_PROP_PARSER = Lark(PROP_GRAMMAR, parser="earley", start="prop_start")


@v_args(inline=True)
class _TemporalBuilder(Transformer):
    """Core-connective AST; |, ->, G and F are expanded here."""

    def ltl_implies(self, a, b):
        return LNot(LAnd(a, LNot(b)))

    def ltl_disj(self, a, b):
        return LNot(LAnd(LNot(a), LNot(b)))

    def ltl_conj(self, a, b):
        return LAnd(a, b)

    def ltl_until(self, a, b):
        return Until(a, b)

    def ltl_since(self, a, b):
        return Since(a, b)

    def ltl_not(self, a):
        return LNot(a)

    def ltl_next(self, a):
        return Next(a)

    def ltl_yesterday(self, a):
        return Yesterday(a)

    def ltl_globally(self, a):
        return LNot(Until(LTrue(), LNot(a)))

    def ltl_finally(self, a):
        return Until(LTrue(), a)

    def ltl_true(self):
        return LTrue()

    def ltl_false(self):
        return LFalse()


@v_args(inline=True)
class _PropBuilder(_TemporalBuilder):
    def ltl_atom(self, name):
        return Prop(str(name))

    def prop_start(self, f):
        return f


@v_args(inline=True)
class _SpecBuilder(_TemporalBuilder):
    # ---------- headers ----------
    def start(self, *items):
        *headers, formula = items
        return list(headers), formula

    def fo_start(self, f):
        return f

    def struct_start(self, s):
        return s

    def structure_header(self, decl):
        return ("structure", decl)

    def streams_header(self, n):
        return ("streams", int(n))

    def lookback_header(self, n):
        return ("lookback", int(n))

    def constant_header(self, name, literal):
        return ("constant", ConstantDecl(str(name), str(literal).strip()))

    def free_constant_header(self, name):
        return ("constant", ConstantDecl(str(name)))

    def struct_base(self, kind):
        return StructureDecl(str(kind))

    def struct_product(self, *components):
        return StructureDecl("product", tuple(components))

    # ---------- data atoms ----------
    def ltl_atom(self, f):
        return Data(f)

    def fo_implies(self, a, b):
        return Or(Not(a), b)

    def fo_disj(self, a, b):
        return Or(a, b)

    def fo_conj(self, a, b):
        return And(a, b)

    def fo_not(self, a):
        return Not(a)

    def fo_quant(self, quant, name, body):
        return (Exists if str(quant) == "exists" else Forall)(str(name), body)

    def fo_fixpoint(self, op, relation, params, body, args):
        return Fixpoint(str(op), str(relation), params, body, args)

    def fo_true(self):
        return Top()

    def fo_false(self):
        return Bottom()

    def fo_eq(self, a, b):
        return Eq(a, b)

    def fo_neq(self, a, b):
        return Not(Eq(a, b))

    def fo_less(self, a, b):
        return Less(a, b)

    def fo_rel(self, name, args):
        return RelApp(str(name), args)

    def name_list(self, *names):
        return tuple(str(n) for n in names)

    def term_list(self, *terms):
        return tuple(terms)

    def term_join(self, a, b):
        return Join(a, b)

    def term_meet_op(self, a, b):
        return Meet(a, b)

    def term_compl(self, a):
        return Compl(a)

    def term_name(self, name):
        return Var(str(name))

    def term_lagged(self, name, lag):
        lag = int(lag)
        return Var(str(name) if lag == 0 else f"{name}[-{lag}]")

    def term_proj(self, arg, index):
        if int(index) < 1:
            raise SpecValidationError("projection indices start at 1")
        return Proj(int(index), arg)

    def term_zero(self):
        return Zero()

    def term_one(self):
        return One()


def _run(parser: Lark, builder: Transformer, text: str, start: str | None = None):
    try:
        tree = parser.parse(text, start=start) if start else parser.parse(text)
    except UnexpectedInput as exc:
        line = exc.line if getattr(exc, "line", -1) != -1 else None
        column = exc.column if getattr(exc, "column", -1) != -1 else None
        raise SpecSyntaxError("syntax error", line, column) from exc
    try:
        return builder.transform(tree)
    except VisitError as exc:
        if isinstance(exc.orig_exc, OcSynthError):
            raise exc.orig_exc from exc
        raise


# ---------------------------  Public helpers  --------------------------- #

def parse_spec(text: str) -> SurfaceSpec:
    """
    Parse and resolve a specification file.

    Args:
        text: Spec-language source

    Returns:
        SurfaceSpec with stream and constant references resolved

    Raises:
        SpecSyntaxError: On text outside the grammar (with line/column)
        SpecValidationError: On undeclared names, bad lags, missing headers
    """
    headers, formula = _run(_SPEC_PARSER, _SpecBuilder(), text, "start")
    spec = resolve_spec(_validate(headers), formula)
    log.info("parsed spec: structure=%s streams=%d lookback=%d",
             spec.structure.render(), spec.streams, spec.lookback)
    return spec


def _validate(headers: list[tuple[str, object]]) -> dict:
    """Hard validation of the header block."""
    seen: dict = {"constants": []}
    for key, value in headers:
        if key == "constant":
            if any(c.name == value.name for c in seen["constants"]):
                raise SpecValidationError(f"constant '{value.name}' declared twice")
            seen["constants"].append(value)
            continue
        if key in seen:
            raise SpecValidationError(f"duplicate '{key}' header")
        seen[key] = value
    if "structure" not in seen:
        raise SpecValidationError("missing 'structure' header")
    seen.setdefault("streams", 1)
    seen.setdefault("lookback", 0)
    if seen["streams"] < 1:
        raise SpecValidationError("a specification needs at least one stream")
    return seen


def parse_fo(text: str, constants: tuple[str, ...] = ()) -> FOFormula:
    """Standalone FO formula; declared constant names become constants, other names variables."""
    raw = _run(_SPEC_PARSER, _SpecBuilder(), text, "fo_start")
    return resolve_free_formula(raw, frozenset(constants))


def parse_structure_expr(text: str) -> StructureDecl:
    return _run(_SPEC_PARSER, _SpecBuilder(), text, "struct_start")


def parse_prop_ltl(text: str) -> Ltl:
    """Propositional temporal formula (PropSpec FORMULA section)."""
    return _run(_PROP_PARSER, _PropBuilder(), text)
