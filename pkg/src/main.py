import argparse, dataclasses, logging, sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape

from config import synth_config
from src.backend.machine import MealyMachine, read_machine, write_machine
from src.backend.nba import check_sat
from src.backend.synthesis import realize
from src.backend.tlsf import export_tlsf
from src.errors import ConfigError, MachineFormatError, OcSynthError
from src.fixpoint import IterationTrace, eliminate_fixpoints
from src.logic.ltl import Data, map_atoms
from src.logic.parser import parse_fo, parse_spec, parse_structure_expr
from src.logic.spec_schema import ConstantDecl, SurfaceSpec
from src.response_formatter import (
    fmt_counts, fmt_fixpoint, fmt_sampling, fmt_sat, fmt_simulation, fmt_trace_verdict, fmt_types,
    fmt_verdict,
)
from src.run_config import RunConfig, make_config
from src.runtime.sampling import check_random_lassos
from src.runtime.traces import check_trace, parse_input_file, parse_trace_file
from src.runtime.transducer import decode_strategy, simulate
from src.structures import Structure, build_structure
from src.translate.encoders import translate, translate_sat
from src.translate.kernel import KernelSpec, reduce_to_kernel
from src.translate.propspec import PropSpec, write_propspec
from src.utils import read_text, write_text

log = logging.getLogger("ocsynth")

console = Console()
err_console = Console(stderr=True)


def say(text: str) -> None:
    """Plain result text on stdout; results are never styled."""
    console.print(text, markup=False, highlight=False, soft_wrap=True)


def emit(config: RunConfig, text: str) -> None:
    """Write to the -o path when one was given, stdout otherwise."""
    if config.output is not None:
        write_text(config.output, text)
        log.info("wrote %s", config.output)
    else:
        say(text.rstrip("\n"))


def setup_logging(verbosity: int) -> None:
    level = [synth_config.LOG_LEVEL, "INFO", "DEBUG"][min(verbosity, 2)]
    logging.basicConfig(level=level, format="%(message)s",
                        handlers=[RichHandler(console=err_console, show_path=False)], force=True)


# ---------------------------  Pipeline  --------------------------- #

def _load_spec(path: str, config: RunConfig) -> tuple[SurfaceSpec, Structure, KernelSpec]:
    """Parse a spec file, remove fixpoints inside its atoms and reduce it to a kernel."""
    surface = parse_spec(read_text(path))
    structure = build_structure(surface.structure, surface.constants, config.arity_caps)

    def without_fixpoints(leaf):
        if isinstance(leaf, Data):
            return Data(eliminate_fixpoints(structure, leaf.formula), leaf.guard)
        return leaf

    surface = dataclasses.replace(surface, formula=map_atoms(surface.formula, without_fixpoints))
    return surface, structure, reduce_to_kernel(surface, structure, config.atom_guard)


def _translate(path: str, config: RunConfig) -> tuple[SurfaceSpec, KernelSpec, PropSpec]:
    surface, _, kernel = _load_spec(path, config)
    spec = translate(kernel, config.mode, config.guard, config.binary_subencoding)
    return surface, kernel, spec


# ---------------------------  Commands  --------------------------- #

def cmd_types(args, config: RunConfig) -> int:
    structure = build_structure(parse_structure_expr(args.structure), (), config.arity_caps)
    say(fmt_types(structure, structure.enumerate_types(args.arity)))
    return 0


def cmd_translate(args, config: RunConfig) -> int:
    _, _, spec = _translate(args.spec, config)
    emit(config, write_propspec(spec))
    if config.output is not None:
        say(fmt_counts(spec))
    else:
        err_console.print(fmt_counts(spec), markup=False, highlight=False)
    return 0


def cmd_synth(args, config: RunConfig) -> int:
    _, _, spec = _translate(args.spec, config)
    verdict = realize(spec.formula, spec.inputs, spec.outputs, cap=config.cap,
                      meta={"propspec": spec.meta()})
    say(fmt_verdict(verdict))
    machine = verdict.machine or verdict.counter_strategy
    if machine is not None:
        emit(config, write_machine(machine))
    return verdict.exit_code


def cmd_check(args, config: RunConfig) -> int:
    surface, structure, kernel = _load_spec(args.spec, config)
    if args.trace:
        trace = parse_trace_file(read_text(args.trace), structure, surface.streams)
        ok = check_trace(surface, structure, trace, config.atom_guard)
        say(fmt_trace_verdict(ok))
        return 0 if ok else 1
    result = check_sat(translate_sat(kernel, config.guard))
    say(fmt_sat(result))
    return 0 if result.sat else 1


def cmd_simulate(args, config: RunConfig) -> int:
    surface, structure, kernel = _load_spec(args.spec, config)
    spec = translate(kernel, config.mode, config.guard, config.binary_subencoding)
    machine = read_machine(read_text(args.machine))
    if not isinstance(machine, MealyMachine):
        raise MachineFormatError("simulation needs a Mealy machine, got a counter-strategy")
    recorded = machine.meta.get("propspec")
    if recorded is not None and list(recorded) != spec.meta():
        raise MachineFormatError("machine was synthesized for a different specification or encoding")
    transducer = decode_strategy(machine, spec, kernel)
    if args.random is not None:
        if args.inputs is not None:
            raise ConfigError("give either an inputs file or --random, not both")
        report = check_random_lassos(transducer, args.random, config.seed, config.atom_guard)
        say(fmt_sampling(report))
        return {True: 0, False: 1, None: 2}[report.verdict]
    if args.inputs is None:
        raise ConfigError("simulate needs an inputs file or --random N")
    inputs = parse_input_file(read_text(args.inputs), structure, surface.streams)
    result = simulate(transducer, inputs, steps=config.steps, loop=config.loop)
    say(fmt_simulation(structure, result))
    if not config.loop:
        return 0
    say(fmt_trace_verdict(result.verdict))
    return {True: 0, False: 1, None: 2}[result.verdict]


def _constant(text: str) -> ConstantDecl:
    name, _, literal = text.partition("=")
    return ConstantDecl(name.strip(), literal.strip() or None)


def cmd_elimfix(args, config: RunConfig) -> int:
    constants = [_constant(c) for c in args.constant or []]
    structure = build_structure(parse_structure_expr(args.structure), constants, config.arity_caps)
    formula = parse_fo(args.formula, tuple(c.name for c in constants))
    traces: List[IterationTrace] = []
    result = eliminate_fixpoints(structure, formula, traces)
    say(fmt_fixpoint(result, traces))
    return 0


def cmd_export_tlsf(args, config: RunConfig) -> int:
    _, _, spec = _translate(args.spec, config)
    emit(config, export_tlsf(spec, title=Path(args.spec).stem))
    return 0


COMMANDS: Dict[str, Callable[[argparse.Namespace, RunConfig], int]] = {
    "types": cmd_types,
    "translate": cmd_translate,
    "synth": cmd_synth,
    "check": cmd_check,
    "simulate": cmd_simulate,
    "elimfix": cmd_elimfix,
    "export-tlsf": cmd_export_tlsf,
}


# ---------------------------  Argument parsing  --------------------------- #

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=["naive", "binary", "minterm"],
                        help="propositional encoding (default %s)" % synth_config.DEFAULT_MODE)
    common.add_argument("--cap", type=int, help="largest bound and machine size tried")
    common.add_argument("--guard", choices=["past", "counter"],
                        help="early-step guards as Y-chains or a step counter")
    common.add_argument("--atom-guard", choices=["lookback", "lag"],
                        help="atoms false before the lookback or before their own lag")
    common.add_argument("--seed", type=int,
                        help="seed of the random input lassos (simulate --random)")
    common.add_argument("--loop", action="store_true", default=None,
                        help="treat the input file as the period of a lasso")
    common.add_argument("-o", "--output", help="write the result to this file")
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("--binary-subencoding", action="store_true", default=None,
                        help="binary P and R codes in minterm mode")

    parser = argparse.ArgumentParser(prog="ocsynth",
                                     description="Reactive synthesis over data streams")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("types", parents=[common], help="list the complete types of a structure")
    p.add_argument("structure", help="e.g. eq, dlo, 'product(eq, dlo)'")
    p.add_argument("arity", type=int)

    for name, text in (("translate", "write the propositional specification"),
                       ("synth", "decide realizability and write a machine"),
                       ("export-tlsf", "export the propositional specification as TLSF")):
        sub.add_parser(name, parents=[common], help=text).add_argument("spec")

    p = sub.add_parser("check", parents=[common], help="satisfiability or trace check")
    p.add_argument("spec")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--sat", action="store_true", help="decide satisfiability (default)")
    group.add_argument("--trace", help="lasso trace file to check against the spec")

    p = sub.add_parser("simulate", parents=[common], help="run a synthesized machine on data")
    p.add_argument("machine")
    p.add_argument("spec")
    p.add_argument("inputs", nargs="?", help="input file, one tuple per line")
    p.add_argument("--random", type=int, metavar="N",
                   help="check the machine on N seeded random input lassos instead")
    p.add_argument("--steps", type=int)

    p = sub.add_parser("elimfix", parents=[common], help="eliminate fixpoint operators")
    p.add_argument("formula")
    p.add_argument("--structure", required=True)
    p.add_argument("--constant", action="append", metavar="NAME[=LITERAL]")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    try:
        config = make_config(mode=args.mode, cap=args.cap, guard=args.guard,
                             atom_guard=args.atom_guard, seed=args.seed, loop=args.loop,
                             output=args.output, verbosity=args.verbose,
                             binary_subencoding=args.binary_subencoding,
                             steps=getattr(args, "steps", None))
        log.debug("run configuration: %s", config)
        return COMMANDS[args.command](args, config)
    except (OcSynthError, OSError) as e:
        err_console.print(f"[bold red]error:[/bold red] {escape(str(e))}")
        return 3


if __name__ == "__main__":
    sys.exit(main())
