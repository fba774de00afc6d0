# src/translate/propspec.py
"""
Propositional specifications and their text form.

    INPUTS
    p_0 p_1
    OUTPUTS
    q_0 q_1 q_2
    FORMULA
    <one line in the temporal grammar, propositions bare>
    META
    mode naive
    P 0 {1|2}
    ...

META records: `mode`, `structure`, `widths m x y`, `counters ...`, then
`P|Q|R <index> <type>`, `D <index> <atom>` and minterm witnesses
`W <p-index> <r-index> <atom bits> <full type>`.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any

from src.errors import MachineFormatError, OcSynthError
from src.logic.ltl import Ltl, implies, props_of, render_ltl
from src.logic.parser import parse_prop_ltl
from src.run_config import EncodingMode

log = logging.getLogger(__name__)

SECTIONS = ("INPUTS", "OUTPUTS", "FORMULA", "META")


@dataclass(frozen=True)
class PropSpec:
    mode: EncodingMode
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    assumption: Ltl
    guarantee: Ltl
    codec: Any = field(default=None, compare=False, repr=False)
    counters: tuple[str, ...] = ()

    def __post_init__(self):
        clash = set(self.inputs) & set(self.outputs)
        if clash:
            raise ValueError(f"propositions on both sides: {sorted(clash)}")

    @property
    def formula(self) -> Ltl:
        return implies(self.assumption, self.guarantee)

    def meta(self) -> list[str]:
        lines = [f"mode {self.mode.value}"]
        if self.codec is not None:
            k = self.codec.kernel
            lines += [f"structure {k.source.structure.render() if k.source else k.structure.kind}",
                      f"widths {k.w_m} {k.w_x} {k.w_y}"]
        if self.counters:
            lines.append("counters " + " ".join(self.counters))
        if self.codec is not None:
            lines += self.codec.meta()
        return lines


@dataclass(frozen=True)
class PropSpecDocument:
    """A PropSpec as read back from text: no live decode tables."""
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    formula: Ltl
    meta: tuple[str, ...]

    @property
    def mode(self) -> str | None:
        for line in self.meta:
            if line.startswith("mode "):
                return line.split(maxsplit=1)[1]
        return None


def write_propspec(spec: PropSpec) -> str:
    out = ["INPUTS", " ".join(spec.inputs),
           "OUTPUTS", " ".join(spec.outputs),
           "FORMULA", render_ltl(spec.formula),
           "META", *spec.meta()]
    return "\n".join(out) + "\n"


def read_propspec(text: str) -> PropSpecDocument:
    """
    Parse the PropSpec text form.

    Raises:
        MachineFormatError: On missing sections, undeclared or doubly
            declared propositions, or an unparsable formula
    """
    sections: dict[str, list[str]] = {}
    current = None
    for raw in text.splitlines():
        line = raw.rstrip()
        if line in SECTIONS:
            if line in sections:
                raise MachineFormatError(f"section {line} appears twice")
            current = line
            sections[current] = []
        elif current is None:
            if line.strip():
                raise MachineFormatError("text before the INPUTS section")
        else:
            sections[current].append(line)
    missing = [s for s in SECTIONS if s not in sections]
    if missing:
        raise MachineFormatError(f"missing section(s): {', '.join(missing)}")

    inputs = tuple(" ".join(sections["INPUTS"]).split())
    outputs = tuple(" ".join(sections["OUTPUTS"]).split())
    if set(inputs) & set(outputs):
        raise MachineFormatError("a proposition is declared as both input and output")
    try:
        formula = parse_prop_ltl(" ".join(sections["FORMULA"]))
    except OcSynthError as exc:
        raise MachineFormatError(f"FORMULA section: {exc}") from exc
    undeclared = set(props_of(formula)) - set(inputs) - set(outputs)
    if undeclared:
        raise MachineFormatError(f"undeclared propositions: {sorted(undeclared)}")
    meta = tuple(line for line in sections["META"] if line.strip())
    log.debug("read PropSpec with %d inputs, %d outputs", len(inputs), len(outputs))
    return PropSpecDocument(inputs, outputs, formula, meta)
