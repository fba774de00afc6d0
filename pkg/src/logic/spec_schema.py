"""
Surface specification records produced by the parser and consumed by the
kernel reduction, the trace oracle and the CLI.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from src.logic.ltl import Ltl, render_ltl

STREAM_REF = re.compile(r"^(?P<kind>[xy])(?P<index>\d+)(\[-(?P<lag>\d+)\])?$")


@dataclass(frozen=True)
class StructureDecl:
    kind: str                                   # eq | dlo | aba | product
    components: tuple["StructureDecl", ...] = ()

    def render(self) -> str:
        if self.kind == "product":
            return f"product({', '.join(c.render() for c in self.components)})"
        return self.kind


@dataclass(frozen=True)
class ConstantDecl:
    name: str
    literal: str | None = None                  # None: uninterpreted


@dataclass(frozen=True)
class StreamRef:
    kind: str                                   # x | y
    index: int                                  # 1-based stream
    lag: int

    @property
    def name(self) -> str:
        return stream_name(self.kind, self.index, self.lag)


def stream_name(kind: str, index: int, lag: int = 0) -> str:
    return f"{kind}{index}" if lag == 0 else f"{kind}{index}[-{lag}]"


def parse_stream_name(name: str) -> StreamRef | None:
    m = STREAM_REF.match(name)
    if not m or int(m.group("index")) < 1:
        return None
    return StreamRef(m.group("kind"), int(m.group("index")), int(m.group("lag") or 0))


@dataclass(frozen=True)
class SurfaceSpec:
    structure: StructureDecl
    streams: int
    lookback: int
    constants: tuple[ConstantDecl, ...]
    formula: Ltl

    def render(self) -> str:
        """Canonical source text; parse_spec(render()) rebuilds an equal spec."""
        lines = [f"structure {self.structure.render()};",
                 f"streams {self.streams};",
                 f"lookback {self.lookback};"]
        for c in self.constants:
            lines.append(f"constant {c.name} = {c.literal};" if c.literal is not None
                         else f"constant {c.name};")
        lines.append(f"spec: {render_ltl(self.formula)}")
        return "\n".join(lines) + "\n"
