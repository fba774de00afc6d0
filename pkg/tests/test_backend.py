import json
import random
from pathlib import Path

import pytest

from src.backend.alphabet import Alphabet, all_valuations, from_bits, to_bits
from src.backend.lasso import Lasso, evaluate
from src.backend.machine import (
    MealyMachine, minimize_mealy, read_machine, verify_machine, write_machine,
)
from src.backend.nba import accepts_lasso, check_sat, to_nba
from src.backend.tlsf import export_tlsf, render_tlsf
from src.errors import MachineFormatError, UnsupportedFeatureError
from src.logic.ltl import (
    LAnd, LFalse, LNot, LTrue, Next, Prop, Since, Until, Yesterday,
)
from src.logic.parser import parse_prop_ltl
from src.run_config import EncodingMode, GuardMode
from src.translate.encoders import translate
from tests.conftest import load

GOLDEN = Path(__file__).parent / "golden"
PROPS = ("a", "b", "c")


def _random_formula(rng, size):
    if size <= 1:
        return rng.choice([Prop(p) for p in PROPS] + [LTrue(), LFalse()])
    op = rng.choice([LNot, Next, Yesterday, LAnd, Until, Since])
    if op in (LNot, Next, Yesterday):
        return op(_random_formula(rng, size - 1))
    left = rng.randint(1, size - 2) if size > 2 else 1
    return op(_random_formula(rng, left), _random_formula(rng, max(1, size - 1 - left)))


def _random_lasso(rng):
    def letter():
        return frozenset(p for p in PROPS if rng.random() < 0.5)
    return Lasso(tuple(letter() for _ in range(rng.randint(0, 2))),
                 tuple(letter() for _ in range(rng.randint(1, 3))))


# ---------------------------  Automata  --------------------------- #

def test_automaton_agrees_with_direct_evaluation():
    rng = random.Random(2024)
    for _ in range(500):
        f = _random_formula(rng, rng.randint(1, 8))
        nba = to_nba(f, Alphabet(PROPS))
        for _ in range(3):
            lasso = _random_lasso(rng)
            assert accepts_lasso(nba, lasso) == evaluate(f, lasso), (f, lasso)


@pytest.mark.parametrize("text, word, expected", [
    ("G (a -> X b)", ([], [{"a", "b"}]), True),
    ("G (a -> X b)", ([{"a"}], [set()]), False),
    ("F a & G !b", ([set(), {"a"}], [set()]), True),
    ("G F a", ([], [{"a"}, set()]), True),
    ("F G a", ([], [{"a"}, set()]), False),
    ("G (b -> Y a)", ([{"b"}], [set()]), False),
    ("G (b -> (a S c))", ([{"c"}, {"a"}], [{"a", "b"}]), True),
])
def test_lasso_membership_examples(text, word, expected):
    f = parse_prop_ltl(text)
    lasso = Lasso.of(*word)
    assert evaluate(f, lasso) == expected
    assert accepts_lasso(to_nba(f, Alphabet(PROPS)), lasso) == expected


def test_sat_models_are_real_models():
    for text in ("a U (b & X !a)", "G (a -> X !a) & G F a", "F (b & Y Y a)"):
        f = parse_prop_ltl(text)
        result = check_sat(f)
        assert result.sat
        assert evaluate(f, result.lasso)


def test_unsat_formulas():
    for text in ("a & !a", "G a & F !a", "F Y FALSE", "X (Y !a) & a"):
        assert not check_sat(parse_prop_ltl(text)).sat


# ---------------------------  Alphabet  --------------------------- #

def test_alphabet_valuations():
    A = Alphabet(("p", "q", "r"))
    u = A.var("p") & ~A.var("r")
    assert A.least(u, A.props) == {"p": True, "q": False, "r": False}
    assert [to_bits(v, A.props) for v in A.assignments(u, A.props)] == ["100", "110"]
    assert A.least(A.false, A.props) is None
    assert A.holds(u, {"p": True, "q": True, "r": False})
    assert not A.holds(u, {"p": True, "r": True})


def test_alphabet_cubes_cover_exactly():
    A = Alphabet(("p", "q", "r"))
    u = (A.var("p") & ~A.var("q")) | A.var("r")
    union = A.false
    for cube in A.cubes(u, A.props):
        union |= A.pattern(A.props, cube)
    assert union == u


def test_bits():
    names = ("x", "y")
    assert [to_bits(v, names) for v in all_valuations(names)] == ["00", "01", "10", "11"]
    assert from_bits("10", names) == {"x": True, "y": False}


# ---------------------------  Machines  --------------------------- #

def _copy_machine(states=2):
    trans = {(s, i): (i, int(i) % states) for s in range(states) for i in ("0", "1")}
    return MealyMachine(("p",), ("q",), tuple(range(states)), 0, trans)


def test_machine_file_round_trip():
    machine = _copy_machine()
    machine.meta = {"propspec": ["mode naive"]}
    back = read_machine(write_machine(machine))
    assert back.trans == machine.trans
    assert back.meta == machine.meta
    assert (back.inputs, back.outputs, back.init) == (("p",), ("q",), 0)


def test_minimisation_merges_equivalent_states():
    machine = minimize_mealy(_copy_machine())
    assert len(machine) == 1
    assert machine.step(0, "1") == ("1", 0)


def test_unreachable_states_are_dropped_on_read():
    doc = json.loads(write_machine(_copy_machine()))
    doc["states"].append(7)
    doc["trans"] += [[7, "0", "0", 7], [7, "1", "0", 7]]
    assert 7 not in read_machine(json.dumps(doc)).states


@pytest.mark.parametrize("edit", [
    lambda d: d.update(init=5),
    lambda d: d["trans"].pop(),
    lambda d: d["trans"].append(d["trans"][0]),
    lambda d: d["trans"].__setitem__(0, [0, "00", "0", 0]),
    lambda d: d["trans"].__setitem__(0, [0, "0", "0", 9]),
    lambda d: d.update(outputs=["p"]),
    lambda d: d.update(colour="blue"),
])
def test_malformed_machine_files(edit):
    doc = json.loads(write_machine(_copy_machine()))
    edit(doc)
    with pytest.raises(MachineFormatError):
        read_machine(json.dumps(doc))


def test_machine_file_must_be_json():
    with pytest.raises(MachineFormatError):
        read_machine("states: [0]")


def test_counter_strategy_files():
    doc = {"kind": "moore", "inputs": ["p"], "outputs": ["q", "r"], "states": [0], "init": 0,
           "emit": [[0, "1"]], "trans": [[0, "1-", 0], [0, "0-", 0]]}
    machine = read_machine(json.dumps(doc))
    assert machine.step(0, "10") == 0
    doc["trans"].pop()
    with pytest.raises(MachineFormatError):
        read_machine(json.dumps(doc))


def test_verification_returns_a_counterexample():
    f = parse_prop_ltl("G ((p -> q) & (q -> p))")
    assert verify_machine(_copy_machine(), f).ok
    stuck = MealyMachine(("p",), ("q",), (0,), 0, {(0, "0"): ("0", 0), (0, "1"): ("0", 0)})
    result = verify_machine(stuck, f)
    assert not result.ok
    assert not evaluate(f, result.counterexample)


# ---------------------------  TLSF  --------------------------- #

@pytest.mark.parametrize("text, expected", [
    ("G (p -> F q)", "G (p -> F q)"),
    ("p | q", "(p || q)"),
    ("!p -> X q", "(p || X q)"),
    ("(p U q) & !r", "((p U q) && !r)"),
    ("G !p", "G !p"),
])
def test_render_tlsf(text, expected):
    assert render_tlsf(parse_prop_ltl(text)) == expected


@pytest.mark.parametrize("mode, golden", [
    (EncodingMode.NAIVE, "echo.tlsf"),
    (EncodingMode.MINTERM, "echo_minterm.tlsf"),
])
def test_tlsf_export_matches_golden(mode, golden):
    _, _, kernel = load("echo.spec")
    text = export_tlsf(translate(kernel, mode), title="echo")
    assert text == (GOLDEN / golden).read_text()


def test_tlsf_export_needs_counter_guards_for_lookback():
    _, _, kernel = load("eq_deviate.spec")
    with pytest.raises(UnsupportedFeatureError):
        export_tlsf(translate(kernel, EncodingMode.NAIVE, GuardMode.PAST))
    text = export_tlsf(translate(kernel, EncodingMode.NAIVE, GuardMode.COUNTER))
    assert "    c_0;" in text
    assert " Y " not in text
