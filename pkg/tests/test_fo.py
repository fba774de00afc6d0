import pytest

from src.errors import FixpointError
from src.fixpoint import eliminate_fixpoints, equivalent
from src.logic.fo import (
    And, Bottom, Const, Eq, Exists, Less, Or, RelApp, Top, Var, free_vars, substitute_relation,
)
from src.logic.parser import parse_fo
from src.structures import DenseOrderStructure


@pytest.mark.parametrize("text, expected", [
    ("exists z. (x < z & z < y)", {"x", "y"}),
    ("x = x", {"x"}),
    ("forall x. (x = x)", set()),
    ("pfp R(x). (R(x) & x = z) @ (w)", {"w", "z"}),
])
def test_free_vars(text, expected):
    assert free_vars(parse_fo(text)) == expected


def test_substitute_bottom():
    body = Or(RelApp("R", (Var("x"),)), Eq(Var("x"), Const("c")))
    assert substitute_relation(body, "R", ("X1",), Bottom()) == Or(Bottom(), Eq(Var("x"), Const("c")))


def test_substitute_under_a_quantifier():
    body = Exists("y", And(RelApp("R", (Var("y"),)), Less(Var("y"), Var("x"))))
    definition = Eq(Var("X1"), Const("a"))
    expected = Exists("y", And(Eq(Var("y"), Const("a")), Less(Var("y"), Var("x"))))
    assert substitute_relation(body, "R", ("X1",), definition) == expected


def test_substitution_renames_a_capturing_binder():
    body = Exists("y", And(RelApp("R", (Var("y"),)), Less(Var("y"), Var("x"))))
    definition = Less(Var("X1"), Var("y"))
    result = substitute_relation(body, "R", ("X1",), definition)
    fresh = result.var
    assert fresh != "y"
    assert result == Exists(fresh, And(Less(Var(fresh), Var("y")), Less(Var(fresh), Var("x"))))
    assert free_vars(result) == {"x", "y"}


def test_substitution_checks_arity():
    body = RelApp("R", (Var("x"), Var("y")))
    with pytest.raises(FixpointError):
        substitute_relation(body, "R", ("X1",), Top())


def test_fixpoint_iteration_keeps_outer_variables_free():
    # the body's bound y must not capture the free y of the iterates
    formula = parse_fo("lfp R(v). (v = y | exists y. (R(y) & y < v)) @ (w)")
    result = eliminate_fixpoints(DenseOrderStructure(), formula)
    assert free_vars(result) <= {"w", "y"}
    assert equivalent(DenseOrderStructure(), result, parse_fo("y = w | y < w"), ("w", "y"))
    assert not equivalent(DenseOrderStructure(), result, Top(), ("w", "y"))
