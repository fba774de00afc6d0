# src/backend/tlsf.py
"""
Export of past-free propositional specifications in TLSF basic format.

The assumption is folded into the single guarantee as an implication, so
the ASSUMPTIONS block stays empty.
"""
import logging

from src.errors import UnsupportedFeatureError
from src.logic.ltl import (
    LAnd, LFalse, LNot, LTrue, Ltl, Next, Prop, Since, Until, Yesterday,
    first_past, render_ltl,
)
from src.translate.propspec import PropSpec

log = logging.getLogger(__name__)


def _negated_prop(f: Ltl) -> bool:
    return isinstance(f, LNot) and isinstance(f.arg, Prop)


def render_tlsf(f: Ltl) -> str:
    """Implications and disjunctions are read back from the negation-conjunction core."""
    match f:
        case LTrue():
            return "true"
        case LFalse():
            return "false"
        case Prop(name):
            return name
        case LNot(Until(LTrue(), LNot(a))):
            return "G " + render_tlsf(a)
        case LNot(Until(LTrue(), a)):
            return "G !" + render_tlsf(a)
        case Until(LTrue(), a):
            return "F " + render_tlsf(a)
        case LNot(LAnd(a, LNot(b))) if not _negated_prop(a):
            return f"({render_tlsf(a)} -> {render_tlsf(b)})"
        case LNot(LAnd(LNot(a), LNot(b))):
            return f"({render_tlsf(a)} || {render_tlsf(b)})"
        case LNot(a):
            return "!" + render_tlsf(a)
        case LAnd(a, b):
            return f"({render_tlsf(a)} && {render_tlsf(b)})"
        case Next(a):
            return "X " + render_tlsf(a)
        case Until(a, b):
            return f"({render_tlsf(a)} U {render_tlsf(b)})"
        case Yesterday() | Since():
            raise UnsupportedFeatureError(f"TLSF has no past operators: {render_ltl(f)}")
    raise TypeError(f"not a propositional temporal formula: {f!r}")


def _block(name: str, items: list[str], indent: str = "  ") -> list[str]:
    return [f"{indent}{name} {{", *[f"{indent}  {item};" for item in items], f"{indent}}}"]


def export_tlsf(spec: PropSpec, title: str = "ocsynth") -> str:
    """
    TLSF document for a PropSpec.

    Raises:
        UnsupportedFeatureError: If the formula still has Y or S; use counter guards
    """
    past = first_past(spec.formula)
    if past is not None:
        raise UnsupportedFeatureError(
            f"past operator in {render_ltl(past)}; translate with counter guards to export")
    lines = ["INFO {",
             f'  TITLE:       "{title}"',
             f'  DESCRIPTION: "{spec.mode.value} encoding of a data specification"',
             "  SEMANTICS:   Mealy",
             "  TARGET:      Mealy",
             "}",
             "",
             "MAIN {",
             *_block("INPUTS", list(spec.inputs)),
             *_block("OUTPUTS", list(spec.outputs)),
             *_block("ASSUMPTIONS", []),
             *_block("GUARANTEES", [render_tlsf(spec.formula)]),
             "}"]
    log.info("TLSF export: %d inputs, %d outputs", len(spec.inputs), len(spec.outputs))
    return "\n".join(lines) + "\n"
