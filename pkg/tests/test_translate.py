import pytest

from src.backend.alphabet import Alphabet
from src.backend.lasso import evaluate
from src.backend.nba import accepts_lasso, check_sat, to_nba
from src.errors import DecodeError, MachineFormatError
from src.logic.fo import Eq, Less, Var
from src.logic.ltl import data_atoms, first_past, props_of
from src.logic.parser import parse_spec
from src.response_formatter import fmt_counts
from src.run_config import AtomGuard, EncodingMode, GuardMode
from src.structures import build_structure
from src.translate.encoders import translate, translate_sat
from src.translate.kernel import Copy, reduce_to_kernel
from src.translate.propspec import read_propspec, write_propspec
from tests.conftest import load


def _kernel(text, atom_guard=AtomGuard.LOOKBACK):
    surface = parse_spec(text)
    return reduce_to_kernel(surface, build_structure(surface.structure), atom_guard)


def test_kernel_widths_without_lookback():
    _, _, kernel = load("echo.spec")
    assert (kernel.w_m, kernel.w_x, kernel.w_y) == (0, 1, 1)
    assert kernel.copies == ()
    assert kernel.atoms == (Eq(Var("y1"), Var("x1")),)


def test_kernel_widths_with_lagged_output():
    _, _, kernel = load("eq_deviate.spec")
    assert (kernel.w_m, kernel.w_x, kernel.w_y) == (1, 1, 1)
    assert kernel.atoms == (Eq(Var("x1"), Var("m1")),)


def test_lagged_input_gets_a_copy_slot():
    kernel = _kernel("structure eq; lookback 1; spec: G (Y TRUE -> {y = x[-1]})")
    assert (kernel.w_m, kernel.w_x, kernel.w_y) == (2, 1, 2)
    assert kernel.window == (("x", 1, 0), ("y", 1, 0))
    assert kernel.copies == (Copy(0, "x", 0),)
    assert kernel.output_slots == (1,)
    assert Eq(Var("y2"), Var("m1")) in kernel.atoms


def test_deeper_lookback_shifts_memory():
    kernel = _kernel("structure eq; lookback 2; spec: G (Y Y TRUE -> {y = y[-2]})")
    assert kernel.window == (("y", 1, 0), ("y", 1, 1))
    assert kernel.copies == (Copy(1, "m", 0),)


def test_atom_guard_scope():
    below, descend = Less(Var("y1"), Var("x1")), Less(Var("y1"), Var("m1"))
    _, _, lookback = load("dlo_descend.spec")
    assert {d.formula: d.guard for d in data_atoms(lookback.formula)} == {below: 1, descend: 1}
    _, _, lag = load("dlo_descend.spec", AtomGuard.LAG)
    assert {d.formula: d.guard for d in data_atoms(lag.formula)} == {below: 0, descend: 1}


def test_copy_constraint_is_unguarded():
    kernel = _kernel("structure eq; lookback 1; spec: G (Y TRUE -> {y = x[-1]})")
    guards = {d.formula: d.guard for d in data_atoms(kernel.formula)}
    assert guards[Eq(Var("y1"), Var("x1"))] == 0
    assert guards[Eq(Var("y2"), Var("m1"))] == 1


@pytest.mark.parametrize("name, mode, expected", [
    ("echo.spec", EncodingMode.NAIVE, "1 input, 2 output propositions"),
    ("echo.spec", EncodingMode.MINTERM, "1 P, 1 R, 1 D"),
    ("eq_deviate.spec", EncodingMode.NAIVE, "2 input, 5 output propositions"),
    ("eq_deviate.spec", EncodingMode.BINARY, "1+3 bits"),
    ("eq_deviate.spec", EncodingMode.MINTERM, "2 P, 1 R, 1 D"),
    ("dlo_chain.spec", EncodingMode.NAIVE, "3 input, 13 output propositions"),
    ("dlo_chain.spec", EncodingMode.BINARY, "2+4 bits"),
    ("dlo_chain.spec", EncodingMode.MINTERM, "3 P, 1 R, 1 D"),
])
def test_proposition_counts(name, mode, expected):
    _, _, kernel = load(name)
    assert fmt_counts(translate(kernel, mode)) == expected


def test_counter_guards_remove_past_operators():
    _, _, kernel = load("eq_deviate.spec")
    past = translate(kernel, EncodingMode.NAIVE, GuardMode.PAST)
    counter = translate(kernel, EncodingMode.NAIVE, GuardMode.COUNTER)
    assert first_past(past.formula) is not None
    assert first_past(counter.formula) is None
    assert counter.counters == ("c_0", "c_1")
    assert fmt_counts(counter) == "2 input, 5 output propositions (+2 counters)"


def test_binary_subencoding_for_minterm():
    _, _, kernel = load("dlo_chain.spec")
    spec = translate(kernel, EncodingMode.MINTERM, binary_subencoding=True)
    assert spec.inputs == ("pb_0", "pb_1")
    assert "rb_0" not in spec.outputs
    assert "d_0" in spec.outputs


@pytest.mark.parametrize("mode", list(EncodingMode))
def test_propspec_text_round_trip(mode):
    _, _, kernel = load("eq_deviate.spec")
    spec = translate(kernel, mode)
    doc = read_propspec(write_propspec(spec))
    assert doc.inputs == spec.inputs
    assert doc.outputs == spec.outputs
    assert doc.formula == spec.formula
    assert doc.mode == mode.value
    assert list(doc.meta) == spec.meta()


def test_propspec_reader_rejects_bad_files():
    with pytest.raises(MachineFormatError):
        read_propspec("INPUTS\np\nOUTPUTS\nq\nFORMULA\nG r\nMETA\n")
    with pytest.raises(MachineFormatError):
        read_propspec("INPUTS\np\nOUTPUTS\np\nFORMULA\nG p\nMETA\n")
    with pytest.raises(MachineFormatError):
        read_propspec("INPUTS\np\nFORMULA\nG p\n")


def test_table_codec_decodes_types():
    _, structure, kernel = load("echo.spec")
    spec = translate(kernel, EncodingMode.NAIVE)
    sigma = structure.type_of((4,))
    assert spec.codec.environment_valuation(sigma) == {"p_0": True}
    tau = spec.codec.decode({"q_0": True, "q_1": False}, sigma)
    assert tau == structure.type_of((4, 4))
    with pytest.raises(DecodeError):
        spec.codec.decode({"q_0": True, "q_1": True}, sigma)


def test_minterm_codec_uses_the_witness_table():
    _, structure, kernel = load("echo.spec")
    spec = translate(kernel, EncodingMode.MINTERM)
    sigma = structure.type_of((4,))
    assert spec.codec.decode({"r_0": True, "d_0": False}, sigma) == structure.type_of((4, 5))
    assert spec.codec.system_valuation(structure.type_of((4, 4))) == {"r_0": True, "d_0": True}


@pytest.mark.parametrize("name, sat", [
    ("echo.spec", True),
    ("eq_contradiction.spec", False),
    ("dlo_chain.spec", True),
])
def test_satisfiability(name, sat):
    _, _, kernel = load(name)
    f = translate_sat(kernel)
    result = check_sat(f)
    assert result.sat == sat
    if sat:
        assert evaluate(f, result.lasso)
        assert accepts_lasso(to_nba(f, Alphabet(props_of(f))), result.lasso)
