# src/runtime/transducer.py
"""
Data-level transducers decoded from propositional strategies.

Each step types the memory together with the fresh inputs, feeds the
matching input letter to the machine, decodes the answer to a full type
and builds a window of concrete values realizing it. The window becomes the
next memory.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

from config import synth_config
from src.backend.machine import MealyMachine
from src.errors import MachineFormatError, TraceError
from src.logic.ltl import data_atoms
from src.runtime.traces import (
    ConcreteTrace, KernelStep, KernelTrace, Step, check_type_lasso,
)
from src.structures import CompleteType, Element
from src.translate.kernel import KernelSpec
from src.translate.propspec import PropSpec

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class StepRecord:
    t: int
    sigma: CompleteType
    state: int
    tau: CompleteType
    memory: tuple[Element, ...]
    inputs: tuple[Element, ...]
    window: tuple[Element, ...]
    outputs: tuple[Element, ...]

    @property
    def kernel_step(self) -> KernelStep:
        return KernelStep(self.memory, self.inputs, self.window)


class Transducer:
    """Single-owner stepper; not safe to share between threads."""

    def __init__(self, machine: MealyMachine, spec: PropSpec, kernel: KernelSpec):
        self.machine = machine
        self.spec = spec
        self.kernel = kernel
        self.structure = kernel.structure
        self.reset()

    def reset(self) -> None:
        self.state = self.machine.init
        self.memory: tuple[Element, ...] = self.structure.seed_tuple(self.kernel.w_m)
        self.t = 0
        self.history: list[StepRecord] = []

    def _pinned(self, inputs: Sequence[Element]) -> dict[int, Element]:
        k = self.kernel
        base = k.w_m + k.w_x
        source = {"x": inputs, "m": self.memory}
        return {base + c.target: source[c.source_kind][c.source] for c in k.copies}

    def step(self, inputs: Sequence[Element]) -> tuple[Element, ...]:
        """
        Outputs for one step of inputs; advances machine state and memory.

        Raises:
            TraceError: On a wrong number of inputs
            DecodeError: If the machine answers outside the decode metadata
            WitnessError: If the decoded type cannot be realized from the step's values
        """
        k, S = self.kernel, self.structure
        inputs = tuple(inputs)
        if len(inputs) != k.w_x:
            raise TraceError(f"expected {k.w_x} input value(s), got {len(inputs)}")
        context = self.memory + inputs
        sigma = S.type_of(context)
        answer, nxt = self.machine.react(self.state, self.spec.codec.environment_valuation(sigma))
        tau = self.spec.codec.decode(answer, sigma)
        window = S.extend_witness_tuple(context, tau, self._pinned(inputs))
        outputs = tuple(window[i] for i in k.output_slots)
        record = StepRecord(self.t, sigma, self.state, tau, self.memory, inputs, window, outputs)
        self.history.append(record)
        log.debug("step %d: state %d -> %d, type %s", self.t, self.state, nxt, S.render_type(tau))
        self.memory = window if k.w_m else ()
        self.state = nxt
        self.t += 1
        return outputs


def decode_strategy(machine: MealyMachine, spec: PropSpec, kernel: KernelSpec) -> Transducer:
    """
    Raises:
        MachineFormatError: If the machine's propositions differ from the PropSpec's
    """
    if spec.codec is None:
        raise MachineFormatError("PropSpec carries no decode tables")
    if tuple(machine.inputs) != tuple(spec.inputs) or tuple(machine.outputs) != tuple(spec.outputs):
        raise MachineFormatError("machine propositions do not match the translated specification")
    return Transducer(machine, spec, kernel)


# ---------------------------  Simulation  --------------------------- #

@dataclass
class SimulationResult:
    records: list[StepRecord] = field(default_factory=list)
    closure: tuple[int, int] | None = None      # (t1, t2): the closure key at t2 equals the one at t1
    verdict: bool | None = None

    @property
    def outputs(self) -> list[tuple[Element, ...]]:
        return [r.outputs for r in self.records]


def _closure_key(transducer: Transducer, position: int, loop_values: tuple[Element, ...]):
    S = transducer.structure
    return transducer.state, position, S.type_of(transducer.memory + loop_values)


def simulate(transducer: Transducer, inputs: Sequence[Sequence[Element]], steps: int | None = None,
             loop: bool = False) -> SimulationResult:
    """
    Run the transducer on an input file.

    With `loop` the file is the period of an input lasso: inputs cycle, and
    the run stops once (machine state, loop position, type of the memory
    with all loop inputs) repeats after every guard has expired. The kernel
    formula is then evaluated on the full types of steps t1..t2 with the
    last stretch repeated. That word is a play of the machine, but the
    concrete run need not repeat it: witnesses such as the least fresh
    value for eq depend on the values in memory, not only on their type.
    Use run_lasso for a concretely periodic run.
    """
    rows = [tuple(r) for r in inputs]
    if not rows:
        raise TraceError("no inputs to simulate")
    transducer.reset()
    result = SimulationResult()
    if not loop:
        budget = steps if steps is not None else len(rows)
        if budget > len(rows):
            raise TraceError(f"{budget} steps requested but the input file has {len(rows)} line(s)")
        for t in range(budget):
            transducer.step(rows[t])
        result.records = list(transducer.history)
        return result

    budget = steps if steps is not None else synth_config.SIMULATION_STEP_CAP
    distinct: list[Element] = []
    for row in rows:
        for v in row:
            if v not in distinct:
                distinct.append(v)
    loop_values = tuple(distinct)
    guard = max((d.guard for d in data_atoms(transducer.kernel.formula)), default=0)
    seen: dict = {}
    for t in range(budget):
        position = t % len(rows)
        if t >= guard:
            key = _closure_key(transducer, position, loop_values)
            if key in seen:
                result.closure = (seen[key], t)
                break
            seen[key] = t
        transducer.step(rows[position])
    result.records = list(transducer.history)
    if result.closure is None:
        log.info("no type repeat within %d steps", budget)
        return result
    t1, t2 = result.closure
    taus = [r.tau for r in result.records[:t2]]
    result.verdict = check_type_lasso(transducer.kernel, taus, t1)
    log.info("type lasso closes at step %d with period %d", t2, t2 - t1)
    return result


def run_lasso(transducer: Transducer, prefix: Sequence[Sequence[Element]],
              period: Sequence[Sequence[Element]], max_rounds: int = 64
              ) -> tuple[ConcreteTrace, KernelTrace] | None:
    """
    Feed u·v^ω until machine state and memory repeat at a period boundary.

    Returns the concrete trace and its kernel-level counterpart, both
    periodic from the first repeated boundary, or None within `max_rounds`.
    """
    transducer.reset()
    for row in prefix:
        transducer.step(row)
    boundaries: dict = {}
    for r in range(max_rounds + 1):
        key = (transducer.state, transducer.memory)
        if key in boundaries:
            start = boundaries[key]
            records = transducer.history
            cut = len(prefix) + start * len(period)
            end = len(prefix) + r * len(period)
            steps = [Step(rec.inputs, rec.outputs) for rec in records[:end]]
            kernel_steps = [rec.kernel_step for rec in records[:end]]
            return (ConcreteTrace(tuple(steps[:cut]), tuple(steps[cut:])),
                    KernelTrace(tuple(kernel_steps[:cut]), tuple(kernel_steps[cut:])))
        boundaries[key] = r
        for row in period:
            transducer.step(row)
    return None
