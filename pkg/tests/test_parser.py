from pathlib import Path

import pytest

from src.errors import SpecSyntaxError, SpecValidationError
from src.logic.fo import Const, Eq, Fixpoint, Less, Var
from src.logic.ltl import Data, LNot, LTrue, Until, data_atoms, props_of
from src.logic.parser import parse_fo, parse_prop_ltl, parse_spec, parse_structure_expr

DATA = Path(__file__).parent / "data"


def test_echo_spec():
    spec = parse_spec((DATA / "echo.spec").read_text())
    assert spec.structure.kind == "eq"
    assert (spec.streams, spec.lookback) == (1, 0)
    assert spec.formula == LNot(Until(LTrue(), LNot(Data(Eq(Var("y1"), Var("x1"))))))


def test_headers_default():
    spec = parse_spec("structure dlo; spec: G {y < x}")
    assert (spec.streams, spec.lookback) == (1, 0)
    assert data_atoms(spec.formula) == [Data(Less(Var("y1"), Var("x1")))]


def test_lagged_references_and_constants():
    spec = parse_spec("structure dlo; streams 2; lookback 2; constant c = 1/2;\n"
                      "spec: G {y2[-2] < x1 & x2 < c}")
    (atom,) = data_atoms(spec.formula)
    assert atom.formula.left == Less(Var("y2[-2]"), Var("x1"))
    assert atom.formula.right == Less(Var("x2"), Const("c"))
    assert spec.constants[0].literal == "1/2"


@pytest.mark.parametrize("name", sorted(p.name for p in DATA.glob("*.spec")))
def test_render_round_trip(name):
    spec = parse_spec((DATA / name).read_text())
    assert parse_spec(spec.render()) == spec


def test_syntax_error_reports_position():
    with pytest.raises(SpecSyntaxError) as exc:
        parse_spec("structure eq;\nspec: G {y = }")
    assert exc.value.line == 2


@pytest.mark.parametrize("text", [
    "structure eq; lookback 1; spec: G {y = x[-2]}",
    "structure eq; streams 1; spec: G {y2 = x}",
    "streams 1; spec: G {y = x}",
    "structure eq; structure dlo; spec: TRUE",
    "structure eq; constant x1; spec: TRUE",
    "structure eq; spec: {z = x}",
    "structure eq; streams 0; spec: TRUE",
])
def test_validation_errors(text):
    with pytest.raises(SpecValidationError):
        parse_spec(text)


def test_structure_expressions():
    assert parse_structure_expr("product(eq, dlo)").render() == "product(eq, dlo)"
    assert parse_structure_expr("aba").kind == "aba"


def test_free_formulas():
    f = parse_fo("lfp R(v). (v = a | R(v)) @ (w)", ("a",))
    assert isinstance(f, Fixpoint)
    assert f.args == (Var("w"),)
    with pytest.raises(SpecValidationError):
        parse_fo("lfp R(v). R(v, v) @ (w)")
    with pytest.raises(SpecValidationError):
        parse_fo("S(v)")


def test_propositional_formulas():
    f = parse_prop_ltl("G (p_0 -> X q_0) & F q_1")
    assert props_of(f) == ["p_0", "q_0", "q_1"]
    with pytest.raises(SpecSyntaxError):
        parse_prop_ltl("G {p_0}")
