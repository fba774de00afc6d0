import pytest

from src.errors import FixpointError
from src.fixpoint import check_monotone_iteration, eliminate_fixpoints, equivalent
from src.logic.fo import Bottom, RelApp, Top, Var, render_formula
from src.logic.parser import parse_fo
from src.logic.spec_schema import ConstantDecl
from src.structures import DenseOrderStructure, EqualityStructure, with_constants

INTERVAL = "lfp R(x). (x = a | x = b | exists u. exists v. (R(u) & R(v) & u < x & x < v)) @ (x)"


@pytest.fixture
def bounded():
    return with_constants(DenseOrderStructure(), [ConstantDecl("a", "0"), ConstantDecl("b", "1")])


def test_interval_closure_stabilises_at_the_second_iterate(bounded):
    traces = []
    result = eliminate_fixpoints(bounded, parse_fo(INTERVAL, ("a", "b")), traces)
    assert len(traces) == 1
    assert traces[0].stable_at == 2
    assert traces[0].monotone
    expected = parse_fo("x = a | x = b | (a < x & x < b)", ("a", "b"))
    assert equivalent(bounded, result, expected)


def test_pfp_without_fixed_point_is_false():
    traces = []
    result = eliminate_fixpoints(EqualityStructure(), parse_fo("pfp R(x). !R(x) @ (x)"), traces)
    assert result == Bottom()
    assert traces[0].stable_at is None
    assert traces[0].cycle == (0, 2)


def test_gfp_of_identity_is_true():
    result = eliminate_fixpoints(EqualityStructure(), parse_fo("gfp R(x). R(x) @ (x)"))
    assert result == Top()
    assert render_formula(result) == "TRUE"


def test_fixpoint_free_formula_is_unchanged():
    f = parse_fo("x = y | !(x = z)")
    assert eliminate_fixpoints(EqualityStructure(), f) == f


def test_fixpoint_arguments_are_substituted(bounded):
    f = parse_fo("lfp R(x). (x = a) @ (y)", ("a", "b"))
    assert equivalent(bounded, eliminate_fixpoints(bounded, f), parse_fo("y = a", ("a",)))


def test_unbound_relation_is_rejected():
    with pytest.raises(FixpointError):
        eliminate_fixpoints(EqualityStructure(), RelApp("R", (Var("x"),)))


def test_monotone_iteration_diagnostic(bounded):
    grow = parse_fo("lfp R(x). (x = a | R(x)) @ (x)", ("a", "b"))
    assert check_monotone_iteration(bounded, grow.body, "R", ("x",))
    flip = parse_fo("pfp R(x). !R(x) @ (x)")
    assert not check_monotone_iteration(EqualityStructure(), flip.body, "R", ("x",))
