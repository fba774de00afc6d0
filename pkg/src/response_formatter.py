# Very small helpers that keep main.py clean
from typing import List, Sequence

from src.backend.lasso import Lasso
from src.backend.nba import SatResult
from src.backend.synthesis import Status, Verdict
from src.fixpoint import IterationTrace
from src.logic.fo import FOFormula, render_formula
from src.run_config import EncodingMode
from src.runtime.sampling import SampleReport
from src.runtime.transducer import SimulationResult
from src.structures import CompleteType, Structure
from src.translate.propspec import PropSpec
from src.utils import plural


def fmt_types(structure: Structure, types: Sequence[CompleteType]) -> str:
    lines = [structure.render_type(t) for t in types]
    lines.append(plural(len(types), "type"))
    return "\n".join(lines)


def fmt_counts(spec: PropSpec) -> str:
    """Proposition counts the way each encoding is usually quoted."""
    outputs = len(spec.outputs) - len(spec.counters)
    if spec.mode == EncodingMode.NAIVE:
        line = f"{len(spec.inputs)} input, {outputs} output propositions"
    elif spec.mode == EncodingMode.BINARY:
        line = f"{len(spec.inputs)}+{outputs} bits"
    else:
        r = sum(1 for p in spec.outputs if p.startswith("r"))
        d = sum(1 for p in spec.outputs if p.startswith("d_"))
        line = f"{len(spec.inputs)} P, {r} R, {d} D"
    if spec.counters:
        line += f" (+{plural(len(spec.counters), 'counter')})"
    return line


def fmt_verdict(verdict: Verdict) -> str:
    if verdict.status == Status.REALIZABLE:
        return f"REALIZABLE (bound {verdict.bound}, {plural(len(verdict.machine), 'state')})"
    if verdict.status == Status.UNREALIZABLE:
        return (f"UNREALIZABLE (bound {verdict.bound}, counter-strategy with "
                f"{plural(len(verdict.counter_strategy), 'state')})")
    return f"UNKNOWN (no verdict below bound {verdict.bound})"


def fmt_lasso(lasso: Lasso, props: Sequence[str] | None = None) -> str:
    lines = [f"prefix: {' '.join(_letter(a, props) for a in lasso.prefix) or '-'}",
             f"loop:   {' '.join(_letter(a, props) for a in lasso.loop)}"]
    return "\n".join(lines)


def _letter(letter: frozenset, props: Sequence[str] | None) -> str:
    shown = sorted(letter) if props is None else [p for p in props if p in letter]
    return "{" + ",".join(shown) + "}"


def fmt_sat(result: SatResult) -> str:
    if not result.sat:
        return "UNSAT"
    return "SAT\n" + fmt_lasso(result.lasso)


def fmt_simulation(structure: Structure, result: SimulationResult) -> str:
    """One row per step: step | partial type | machine state | full type | outputs."""
    lines: List[str] = []
    for r in result.records:
        outs = ";".join(structure.render_element(v) for v in r.outputs)
        lines.append(f"{r.t} | {structure.render_type(r.sigma)} | {r.state} | "
                     f"{structure.render_type(r.tau)} | {outs}")
    return "\n".join(lines)


def fmt_trace_verdict(verdict: bool | None) -> str:
    if verdict is None:
        return "TRACE UNKNOWN"
    return "TRACE SAT" if verdict else "TRACE UNSAT"


def fmt_sampling(report: SampleReport) -> str:
    """Summary line of a random-lasso check, then the trace verdict."""
    line = (f"{plural(report.runs, 'random lasso')} (seed {report.seed}): "
            f"{report.closed} closed, {len(report.failures)} violating")
    return line + "\n" + fmt_trace_verdict(report.verdict)


def fmt_fixpoint(result: FOFormula, traces: Sequence[IterationTrace]) -> str:
    lines = [render_formula(result)]
    for tr in traces:
        head = f"{tr.op} {tr.relation}({', '.join(tr.coordinates)})"
        sizes = ", ".join(str(len(s)) for s in tr.type_sets)
        if tr.stable_at is not None:
            lines.append(f"{head}: fixed at iterate {tr.stable_at} (type counts {sizes})")
        else:
            m, n = tr.cycle
            lines.append(f"{head}: no fixed point, iterate {n} repeats iterate {m} (type counts {sizes})")
    return "\n".join(lines)
