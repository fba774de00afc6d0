# src/runtime/sampling.py
"""
Seeded random input lassos for transducer runs.

Each value extends its recent context (the previous input row and the row so
far) towards a uniformly chosen complete type, so repeats and order patterns
with earlier values come up as often as fresh values do.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from typing import Sequence

from src.run_config import AtomGuard
from src.runtime.traces import ConcreteTrace, KernelTrace, check_trace
from src.runtime.transducer import Transducer, run_lasso
from src.structures import Element, Structure

log = logging.getLogger(__name__)


def random_tuple(structure: Structure, width: int, rng: random.Random,
                 context: Sequence[Element] = ()) -> tuple[Element, ...]:
    """`width` new values whose joint type with `context` is drawn uniformly step by step."""
    values = tuple(context)
    for _ in range(width):
        current = structure.type_of(values)
        options = [t for t in structure.enumerate_types(len(values) + 1)
                   if structure.restrict(t, range(len(values))) == current]
        values += (structure.extend_witness(values, rng.choice(options)),)
    return values[len(context):]


def random_input_lasso(structure: Structure, streams: int, rng: random.Random,
                       max_prefix: int = 2, max_period: int = 3
                       ) -> tuple[list[tuple[Element, ...]], list[tuple[Element, ...]]]:
    """(prefix rows, period rows); the period is never empty."""
    prefix_len = rng.randint(0, max_prefix)
    period_len = rng.randint(1, max_period)
    rows: list[tuple[Element, ...]] = []
    previous: tuple[Element, ...] = ()
    for _ in range(prefix_len + period_len):
        previous = random_tuple(structure, streams, rng, previous)
        rows.append(previous)
    return rows[:prefix_len], rows[prefix_len:]


@dataclass
class SampleReport:
    seed: int
    runs: int = 0
    lassos: list[tuple[ConcreteTrace, KernelTrace]] = field(default_factory=list)
    failures: list[int] = field(default_factory=list)     # indices into lassos

    @property
    def closed(self) -> int:
        return len(self.lassos)

    @property
    def verdict(self) -> bool | None:
        """None when no run closed into a lasso."""
        if not self.lassos:
            return None
        return not self.failures


def check_random_lassos(transducer: Transducer, count: int, seed: int,
                        atom_guard: AtomGuard = AtomGuard.LOOKBACK,
                        max_rounds: int = 64) -> SampleReport:
    """
    Run the transducer on `count` random input lassos and check every run
    that closes (machine state and memory repeat at a period boundary)
    against the specification the kernel was reduced from.

    Args:
        transducer: Decoded strategy to run
        count: Number of input lassos to draw
        seed: Seed of the input generator
        atom_guard: Early-step rule the trace check applies
        max_rounds: Period repetitions tried before a run counts as open
    """
    rng = random.Random(seed)
    kernel = transducer.kernel
    report = SampleReport(seed)
    for n in range(count):
        prefix, period = random_input_lasso(transducer.structure, kernel.w_x, rng)
        report.runs += 1
        found = run_lasso(transducer, prefix, period, max_rounds)
        if found is None:
            log.debug("run %d does not close within %d rounds", n, max_rounds)
            continue
        concrete, _ = found
        if not check_trace(kernel, transducer.structure, concrete, atom_guard):
            log.warning("run %d violates the specification", n)
            report.failures.append(len(report.lassos))
        report.lassos.append(found)
    log.info("%d of %d random runs closed, %d failing", report.closed, count, len(report.failures))
    return report
