# src/runtime/traces.py
"""
Concrete and kernel-level lasso traces, the trace-semantics oracle and the
encoding of kernel traces into propositional letters.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

from src.backend.lasso import Lasso, evaluate
from src.errors import TraceError
from src.logic.fo import free_vars
from src.logic.ltl import Data, Ltl, Prop, data_atoms, map_atoms
from src.logic.spec_schema import SurfaceSpec, parse_stream_name
from src.run_config import AtomGuard
from src.structures import CompleteType, Element, Structure
from src.translate.kernel import KernelSpec, atom_lag
from src.translate.propspec import PropSpec
from src.utils import content_lines, split_literals

log = logging.getLogger(__name__)


# ---------------------------  Concrete traces  --------------------------- #

@dataclass(frozen=True)
class Step:
    inputs: tuple[Element, ...]
    outputs: tuple[Element, ...]


@dataclass(frozen=True)
class ConcreteTrace:
    prefix: tuple[Step, ...]
    loop: tuple[Step, ...]

    def __post_init__(self):
        if not self.loop:
            raise TraceError("a lasso trace needs a nonempty period")
        steps = self.prefix + self.loop
        widths = {(len(s.inputs), len(s.outputs)) for s in steps}
        if len(widths) != 1:
            raise TraceError(f"inconsistent stream widths in trace: {sorted(widths)}")

    @property
    def streams(self) -> int:
        return len(self.loop[0].inputs)

    def step(self, t: int) -> Step:
        if t < len(self.prefix):
            return self.prefix[t]
        return self.loop[(t - len(self.prefix)) % len(self.loop)]

    def value(self, kind: str, stream: int, t: int) -> Element:
        s = self.step(t)
        return (s.inputs if kind == "x" else s.outputs)[stream - 1]


def parse_input_file(text: str, structure: Structure, streams: int) -> list[tuple[Element, ...]]:
    """One input tuple per line."""
    rows = []
    for n, line in enumerate(content_lines(text), start=1):
        parts = split_literals(line, streams, f"input line {n}")
        rows.append(tuple(structure.parse_element(p) for p in parts))
    if not rows:
        raise TraceError("input file has no steps")
    return rows


def parse_trace_file(text: str, structure: Structure, streams: int) -> ConcreteTrace:
    """
    Lines `in1;..;ins | out1;..;outs`; a line `--` separates prefix from period.
    Without a separator the whole file is the period.
    """
    prefix: list[Step] = []
    loop: list[Step] = []
    current = prefix
    seen_separator = False
    for n, line in enumerate(content_lines(text), start=1):
        if line == "--":
            if seen_separator:
                raise TraceError("trace file has two '--' separators")
            seen_separator, current = True, loop
            continue
        if line.count("|") != 1:
            raise TraceError(f"trace line {n}: expected 'inputs | outputs'")
        left, right = line.split("|")
        xs = split_literals(left, streams, f"trace line {n} inputs")
        ys = split_literals(right, streams, f"trace line {n} outputs")
        current.append(Step(tuple(structure.parse_element(p) for p in xs),
                            tuple(structure.parse_element(p) for p in ys)))
    if not seen_separator:
        prefix, loop = [], prefix
    return ConcreteTrace(tuple(prefix), tuple(loop))


# ---------------------------  Trace semantics  --------------------------- #

def _atom_guard(atom: Data, lookback: int, atom_guard: AtomGuard) -> int:
    return lookback if atom_guard == AtomGuard.LOOKBACK else atom_lag(atom.formula)


def _abstract(formula: Ltl) -> tuple[Ltl, list[Data], dict[Data, str]]:
    atoms = data_atoms(formula)
    names = {a: f"_a{i}" for i, a in enumerate(atoms)}
    return map_atoms(formula, lambda d: Prop(names[d]) if isinstance(d, Data) else d), atoms, names


def check_trace(spec: SurfaceSpec | KernelSpec, structure: Structure, trace: ConcreteTrace,
                atom_guard: AtomGuard = AtomGuard.LOOKBACK) -> bool:
    """
    Truth of the surface formula at step 0 of a concrete lasso trace.

    A data atom at step t is evaluated on the values it references, t - lag
    for each lagged name, and is false while t is below its guard.

    Raises:
        TraceError: If the trace width differs from the stream count
    """
    if isinstance(spec, KernelSpec):
        if spec.source is None:
            raise TraceError("kernel spec has no surface source to check against")
        spec = spec.source
    if trace.streams != spec.streams:
        raise TraceError(f"trace has {trace.streams} stream(s), spec has {spec.streams}")

    prop_formula, atoms, names = _abstract(spec.formula)
    copies = -(-spec.lookback // len(trace.loop)) if spec.lookback else 0
    start = len(trace.prefix) + copies * len(trace.loop)
    horizon = start + len(trace.loop)

    letters = []
    for t in range(horizon):
        true = set()
        for atom in atoms:
            if t < _atom_guard(atom, spec.lookback, atom_guard):
                continue
            variables = tuple(sorted(free_vars(atom.formula)))
            values = []
            for v in variables:
                ref = parse_stream_name(v)
                values.append(trace.value(ref.kind, ref.index, t - ref.lag))
            if structure.holds(atom.formula, values, variables):
                true.add(names[atom])
        letters.append(frozenset(true))
    return evaluate(prop_formula, Lasso(tuple(letters[:start]), tuple(letters[start:])))


# ---------------------------  Kernel traces  --------------------------- #

@dataclass(frozen=True)
class KernelStep:
    memory: tuple[Element, ...]
    inputs: tuple[Element, ...]
    window: tuple[Element, ...]

    @property
    def full(self) -> tuple[Element, ...]:
        return self.memory + self.inputs + self.window


@dataclass(frozen=True)
class KernelTrace:
    prefix: tuple[KernelStep, ...]
    loop: tuple[KernelStep, ...]

    def steps(self) -> list[KernelStep]:
        return list(self.prefix) + list(self.loop)


def check_threading(kernel: KernelSpec, trace: KernelTrace) -> None:
    """
    Raises:
        TraceError: If some step's memory is not the previous step's window
    """
    if kernel.w_m == 0:
        return
    steps = trace.steps()
    pairs = list(zip(steps, steps[1:])) + [(steps[-1], trace.loop[0])]
    for t, (a, b) in enumerate(pairs):
        if b.memory != a.window:
            raise TraceError(f"memory after step {t} is not the window of step {t}")


def encode_types(spec: PropSpec, taus: Sequence[CompleteType],
                 sigmas: Sequence[CompleteType], loop_start: int) -> Lasso:
    """Letters of the PropSpec for a lasso of (partial type, full type) pairs."""
    codec = spec.codec
    depth = len(spec.counters) - 1
    n = len(taus)
    period = n - loop_start
    extra = 0
    while loop_start + extra * period < depth:
        extra += 1
    order = list(range(n)) + [loop_start + (j % period) for j in range(extra * period)]
    letters = []
    for t, i in enumerate(order):
        valuation = dict(codec.environment_valuation(sigmas[i]))
        valuation.update(codec.system_valuation(taus[i]))
        for c, name in enumerate(spec.counters):
            valuation[name] = c == min(t, depth)
        letters.append(frozenset(p for p, v in valuation.items() if v))
    start = loop_start + extra * period
    return Lasso(tuple(letters[:start]), tuple(letters[start:]))


def encode_trace(spec: PropSpec, kernel: KernelSpec, trace: KernelTrace) -> Lasso:
    """
    Propositional lasso of a kernel trace: each step's partial and full type
    written with the PropSpec's codes, plus the step counter in counter mode.

    Raises:
        TraceError: If memory is not threaded from window to window
    """
    check_threading(kernel, trace)
    S = kernel.structure
    steps = trace.steps()
    sigmas = [S.type_of(s.memory + s.inputs) for s in steps]
    taus = [S.type_of(s.full) for s in steps]
    return encode_types(spec, taus, sigmas, len(trace.prefix))


def check_type_lasso(kernel: KernelSpec, taus: Sequence[CompleteType], loop_start: int) -> bool:
    """Kernel formula on an ultimately periodic sequence of full types."""
    S = kernel.structure
    prop_formula, atoms, names = _abstract(kernel.formula)
    sets = {a: S.iota(a.formula, kernel.full_names) for a in atoms}
    letters = []
    for t, tau in enumerate(taus):
        letters.append(frozenset(names[a] for a in atoms if t >= a.guard and tau in sets[a]))
    if loop_start < max((a.guard for a in atoms), default=0):
        raise TraceError("type lasso closes before every atom guard has expired")
    return evaluate(prop_formula, Lasso(tuple(letters[:loop_start]), tuple(letters[loop_start:])))
