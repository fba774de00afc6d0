import json
from pathlib import Path

import pytest

from src.main import build_parser, main
from tests.conftest import DATA

GOLDEN = Path(__file__).parent / "golden"


def spec(name):
    return str(DATA / name)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_types_lists_one_line_per_type(capsys):
    code, out, _ = run(capsys, "types", "eq", "3")
    lines = out.splitlines()
    assert code == 0
    assert lines[-1] == "5 types"
    assert len(lines) == 6
    assert "{1 2 3}" in lines


def test_types_of_a_product(capsys):
    code, out, _ = run(capsys, "types", "product(eq, dlo)", "2")
    assert code == 0
    assert out.splitlines()[-1] == "6 types"


def test_translate_to_file_reports_counts(capsys, tmp_path):
    target = tmp_path / "echo.prop"
    code, out, _ = run(capsys, "translate", spec("echo.spec"), "-o", str(target))
    assert code == 0
    assert out.strip() == "1 input, 2 output propositions"
    text = target.read_text()
    assert text.startswith("INPUTS\np_0\nOUTPUTS\nq_0 q_1\nFORMULA\n")
    assert "mode naive" in text


def test_translate_counts_per_mode(capsys, tmp_path):
    target = str(tmp_path / "out.prop")
    _, out, _ = run(capsys, "translate", spec("eq_deviate.spec"), "--mode", "binary", "-o", target)
    assert out.strip() == "1+3 bits"
    _, out, _ = run(capsys, "translate", spec("dlo_chain.spec"), "--mode", "minterm", "-o", target)
    assert out.strip() == "3 P, 1 R, 1 D"


@pytest.mark.parametrize("name, extra, code, verdict", [
    ("echo.spec", [], 0, "REALIZABLE"),
    ("eq_deviate.spec", [], 1, "UNREALIZABLE"),
    ("eq_first_differs.spec", ["--cap", "1"], 2, "UNKNOWN"),
    ("dlo_descend.spec", ["--atom-guard", "lag"], 0, "REALIZABLE"),
])
def test_synth_exit_codes(capsys, tmp_path, name, extra, code, verdict):
    machine = tmp_path / "machine.json"
    got, out, _ = run(capsys, "synth", spec(name), "-o", str(machine), *extra)
    assert got == code
    assert out.splitlines()[0].startswith(verdict)
    if code == 2:
        assert not machine.exists()
    else:
        kind = json.loads(machine.read_text())["kind"]
        assert kind == ("mealy" if code == 0 else "moore")


def test_check_sat_and_trace(capsys):
    code, out, _ = run(capsys, "check", spec("echo.spec"), "--sat")
    assert (code, out.splitlines()[0]) == (0, "SAT")
    code, out, _ = run(capsys, "check", spec("eq_contradiction.spec"))
    assert (code, out.strip()) == (1, "UNSAT")
    code, out, _ = run(capsys, "check", spec("echo.spec"), "--trace", spec("echo_good.trace"))
    assert (code, out.strip()) == (0, "TRACE SAT")
    code, out, _ = run(capsys, "check", spec("echo.spec"), "--trace", spec("echo_bad.trace"))
    assert (code, out.strip()) == (1, "TRACE UNSAT")


def test_simulate_a_synthesized_machine(capsys, tmp_path):
    machine = str(tmp_path / "echo.json")
    assert run(capsys, "synth", spec("echo.spec"), "-o", machine)[0] == 0
    code, out, _ = run(capsys, "simulate", machine, spec("echo.spec"), spec("echo_inputs.txt"))
    assert code == 0
    rows = [line.split(" | ") for line in out.splitlines()]
    assert [r[0] for r in rows] == ["0", "1", "2"]
    assert [r[-1] for r in rows] == ["3", "9", "3"]

    code, out, _ = run(capsys, "simulate", machine, spec("echo.spec"), spec("echo_inputs.txt"), "--loop")
    assert code == 0
    assert out.splitlines()[-1] == "TRACE SAT"


def test_simulate_on_seeded_random_lassos(capsys, tmp_path):
    machine = str(tmp_path / "echo.json")
    assert run(capsys, "synth", spec("echo.spec"), "-o", machine)[0] == 0
    argv = ["simulate", machine, spec("echo.spec"), "--random", "30", "--seed", "7"]
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out.splitlines() == ["30 random lassos (seed 7): 30 closed, 0 violating", "TRACE SAT"]
    assert run(capsys, *argv)[1] == out


@pytest.mark.parametrize("extra", [[], [str(DATA / "echo_inputs.txt"), "--random", "3"]])
def test_simulate_needs_exactly_one_input_source(capsys, tmp_path, extra):
    machine = str(tmp_path / "echo.json")
    run(capsys, "synth", spec("echo.spec"), "-o", machine)
    code, out, err = run(capsys, "simulate", machine, spec("echo.spec"), *extra)
    assert code == 3
    assert out == ""
    assert "error:" in err


def test_simulate_rejects_a_machine_for_another_encoding(capsys, tmp_path):
    machine = str(tmp_path / "echo.json")
    run(capsys, "synth", spec("echo.spec"), "-o", machine)
    code, _, err = run(capsys, "simulate", machine, spec("echo.spec"), spec("echo_inputs.txt"),
                       "--mode", "minterm")
    assert code == 3
    assert "error" in err


def test_simulate_rejects_a_counter_strategy(capsys, tmp_path):
    machine = str(tmp_path / "deviate.json")
    assert run(capsys, "synth", spec("eq_deviate.spec"), "-o", machine)[0] == 1
    code, _, _ = run(capsys, "simulate", machine, spec("eq_deviate.spec"), spec("echo_inputs.txt"))
    assert code == 3


def test_elimfix(capsys):
    code, out, _ = run(capsys, "elimfix", "pfp R(x). !R(x) @ (x)", "--structure", "eq")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "FALSE"
    assert "no fixed point" in lines[1]

    code, out, _ = run(capsys, "elimfix", "lfp R(x). (x = a | R(x)) @ (x)",
                       "--structure", "dlo", "--constant", "a=0")
    assert code == 0
    assert "fixed at iterate" in out


@pytest.mark.parametrize("mode, golden", [("naive", "echo.tlsf"), ("minterm", "echo_minterm.tlsf")])
def test_export_tlsf(capsys, tmp_path, mode, golden):
    target = tmp_path / "echo.tlsf"
    code, _, _ = run(capsys, "export-tlsf", spec("echo.spec"), "--mode", mode, "-o", str(target))
    assert code == 0
    assert target.read_text() == (GOLDEN / golden).read_text()


def test_export_tlsf_with_past_operators_fails(capsys):
    code, _, err = run(capsys, "export-tlsf", spec("eq_deviate.spec"))
    assert code == 3
    assert "counter" in err
    code, out, _ = run(capsys, "export-tlsf", spec("eq_deviate.spec"), "--guard", "counter")
    assert code == 0
    assert "c_0;" in out


@pytest.mark.parametrize("argv", [
    ["synth", "no-such-file.spec"],
    ["check", str(DATA / "echo_inputs.txt")],
    ["types", "ring", "2"],
    ["types", "aba", "9"],
    ["synth", str(DATA / "echo.spec"), "--cap", "0"],
])
def test_errors_exit_with_three(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 3
    assert out == ""
    assert "error:" in err


def test_parser_rejects_conflicting_check_options():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["check", "x.spec", "--sat", "--trace", "t"])
