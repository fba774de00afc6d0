import random

import pytest

from config import synth_config
from src.backend.alphabet import all_valuations, to_bits
from src.backend.lasso import evaluate
from src.backend.machine import MealyMachine, play, verify_counter_strategy, verify_machine
from src.backend.synthesis import Status, realize
from src.errors import MachineFormatError, SpecValidationError
from src.logic.parser import parse_prop_ltl
from src.run_config import AtomGuard, EncodingMode, GuardMode
from src.translate.encoders import translate
from tests.conftest import load


def synthesize(name, mode=EncodingMode.NAIVE, atom_guard=AtomGuard.LOOKBACK,
               guard=GuardMode.PAST, cap=6):
    _, _, kernel = load(name, atom_guard)
    spec = translate(kernel, mode, guard)
    return spec, realize(spec.formula, spec.inputs, spec.outputs, cap=cap,
                         meta={"propspec": spec.meta()})


def assert_verified(spec, verdict):
    if verdict.status == Status.REALIZABLE:
        assert verify_machine(verdict.machine, spec.formula).ok
        assert verdict.machine.meta["propspec"] == spec.meta()
    else:
        assert verify_counter_strategy(verdict.counter_strategy, spec.formula).ok


# ---------------------------  Propositional  --------------------------- #

def test_copying_the_input_is_realizable():
    f = parse_prop_ltl("G ((p -> q) & (q -> p))")
    verdict = realize(f, ["p"], ["q"])
    assert verdict.status == Status.REALIZABLE
    assert verdict.exit_code == 0
    assert len(verdict.machine) == 1
    assert verdict.machine.step(0, "1") == ("1", 0)


def test_predicting_the_input_is_unrealizable():
    f = parse_prop_ltl("G ((q -> X p) & (X p -> q))")
    verdict = realize(f, ["p"], ["q"])
    assert verdict.status == Status.UNREALIZABLE
    assert verdict.exit_code == 1
    assert verify_counter_strategy(verdict.counter_strategy, f).ok


def test_liveness_needs_memory():
    f = parse_prop_ltl("G (p -> F q) & G (q -> X !q)")
    verdict = realize(f, ["p"], ["q"])
    assert verdict.status == Status.REALIZABLE
    assert verify_machine(verdict.machine, f).ok


def test_partition_is_checked():
    f = parse_prop_ltl("G (p -> q)")
    with pytest.raises(SpecValidationError):
        realize(f, ["p", "q"], ["q"])
    with pytest.raises(SpecValidationError):
        realize(f, ["p"], [])


# ---------------------------  Data specifications  --------------------------- #

BATTERY = [
    ("echo.spec", AtomGuard.LOOKBACK, Status.REALIZABLE),
    ("eq_deviate.spec", AtomGuard.LOOKBACK, Status.UNREALIZABLE),
    ("dlo_below.spec", AtomGuard.LOOKBACK, Status.REALIZABLE),
    ("dlo_descend.spec", AtomGuard.LAG, Status.REALIZABLE),
    ("aba_disjoint.spec", AtomGuard.LOOKBACK, Status.UNREALIZABLE),
    ("aba_assumed.spec", AtomGuard.LOOKBACK, Status.REALIZABLE),
]


@pytest.mark.parametrize("mode", list(EncodingMode))
@pytest.mark.parametrize("name, atom_guard, expected", BATTERY)
def test_battery(name, atom_guard, expected, mode):
    spec, verdict = synthesize(name, mode, atom_guard)
    assert verdict.status == expected
    assert_verified(spec, verdict)


def test_lookback_guard_makes_the_first_step_unsatisfiable():
    # {y < x} is forced false at step 0 when every atom waits for the lookback
    spec, verdict = synthesize("dlo_descend.spec")
    assert verdict.status == Status.UNREALIZABLE
    assert_verified(spec, verdict)


def test_counter_guards_agree_with_past_guards():
    for name, expected in (("eq_deviate.spec", Status.UNREALIZABLE), ("echo.spec", Status.REALIZABLE)):
        spec, verdict = synthesize(name, guard=GuardMode.COUNTER)
        assert verdict.status == expected
        assert_verified(spec, verdict)


def test_small_cap_gives_no_verdict():
    _, verdict = synthesize("eq_first_differs.spec", cap=1)
    assert verdict.status == Status.UNKNOWN
    assert verdict.exit_code == 2
    _, verdict = synthesize("eq_first_differs.spec", cap=4)
    assert verdict.status == Status.REALIZABLE
    assert len(verdict.machine) >= 2


def _random_mealy(inputs, outputs, states, rng):
    trans = {}
    for s in range(states):
        for v in all_valuations(inputs):
            outbits = "".join(rng.choice("01") for _ in outputs)
            trans[(s, to_bits(v, inputs))] = (outbits, rng.randrange(states))
    return MealyMachine(tuple(inputs), tuple(outputs), tuple(range(states)), 0, trans)


@pytest.mark.parametrize("name", ["eq_deviate.spec", "aba_disjoint.spec"])
def test_counter_strategy_beats_every_system_machine(name):
    spec, verdict = synthesize(name)
    environment = verdict.counter_strategy
    rng = random.Random(synth_config.DEFAULT_SEED)
    for _ in range(12):
        system = _random_mealy(spec.inputs, spec.outputs, rng.randint(1, 3), rng)
        assert not evaluate(spec.formula, play(system, environment))


def test_play_needs_matching_propositions():
    spec, verdict = synthesize("eq_deviate.spec")
    other = MealyMachine(("a",), ("b",), (0,), 0, {(0, "0"): ("0", 0), (0, "1"): ("0", 0)})
    with pytest.raises(MachineFormatError):
        play(other, verdict.counter_strategy)
