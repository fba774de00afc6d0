# src/translate/kernel.py
"""
Reduction of a surface specification to kernel form.

Past values are carried by auxiliary output slots: the system's output at
step t is a window holding every referenced stream value of lags 0..ℓ-1,
and the memory m̄ at step t is the window of step t-1. Atoms then only
mention m̄, x̄ and ȳ, and copy constraints keep the window honest.
"""
import logging
from dataclasses import dataclass, field

from src.logic.fo import Eq, FOFormula, Var, conjoin, free_vars, substitute
from src.logic.ltl import Data, Ltl, always, data_atoms, land, map_atoms
from src.logic.spec_schema import SurfaceSpec, parse_stream_name, stream_name
from src.run_config import AtomGuard
from src.structures import Structure

log = logging.getLogger(__name__)

# (kind, stream, lag); sorted by (lag, kind, stream)
Slot = tuple[str, int, int]


@dataclass(frozen=True)
class Copy:
    """Output slot `target` (0-based) equals input / memory slot `source`."""
    target: int
    source_kind: str          # x | m
    source: int


@dataclass(frozen=True)
class KernelSpec:
    structure: Structure
    w_m: int
    w_x: int
    w_y: int
    formula: Ltl                                  # includes the copy conjunct
    window: tuple[Slot, ...]                      # meaning of each y slot
    copies: tuple[Copy, ...] = ()
    lookback: int = 0
    streams: int = 1
    source: SurfaceSpec | None = field(default=None, compare=False)

    @property
    def m_names(self) -> tuple[str, ...]:
        return tuple(f"m{i}" for i in range(1, self.w_m + 1))

    @property
    def x_names(self) -> tuple[str, ...]:
        return tuple(f"x{i}" for i in range(1, self.w_x + 1))

    @property
    def y_names(self) -> tuple[str, ...]:
        return tuple(f"y{i}" for i in range(1, self.w_y + 1))

    @property
    def partial_names(self) -> tuple[str, ...]:
        return self.m_names + self.x_names

    @property
    def full_names(self) -> tuple[str, ...]:
        return self.m_names + self.x_names + self.y_names

    @property
    def output_slots(self) -> tuple[int, ...]:
        """Index into ȳ of the lag-0 output of each stream."""
        return tuple(self.window.index(("y", i, 0)) for i in range(1, self.streams + 1))

    @property
    def atoms(self) -> tuple[FOFormula, ...]:
        """Distinct data formulas of the kernel formula (guards ignored)."""
        out: list[FOFormula] = []
        for d in data_atoms(self.formula):
            if d.formula not in out:
                out.append(d.formula)
        return tuple(out)


def _referenced(spec: SurfaceSpec) -> dict[tuple[str, int], int]:
    """Largest lag referenced per (kind, stream)."""
    deepest: dict[tuple[str, int], int] = {}
    for atom in data_atoms(spec.formula):
        for name in free_vars(atom.formula):
            ref = parse_stream_name(name)
            if ref is not None:
                key = (ref.kind, ref.index)
                deepest[key] = max(deepest.get(key, 0), ref.lag)
    return deepest


def atom_lag(atom: FOFormula) -> int:
    lags = [parse_stream_name(n).lag for n in free_vars(atom) if parse_stream_name(n)]
    return max(lags, default=0)


def reduce_to_kernel(spec: SurfaceSpec, structure: Structure,
                     atom_guard: AtomGuard = AtomGuard.LOOKBACK) -> KernelSpec:
    """
    Rewrite stream references into memory / input / output slots.

    Args:
        spec: Parsed and resolved surface specification
        structure: The structure the spec is interpreted in (constants included)
        atom_guard: Whether atoms are false for t < ℓ or for t < their own deepest lag

    Returns:
        KernelSpec whose atoms mention only m1.., x1.., y1..
    """
    s, ell = spec.streams, spec.lookback
    mapping: dict[str, Var] = {stream_name("x", i): Var(f"x{i}") for i in range(1, s + 1)}

    if ell == 0:
        window: tuple[Slot, ...] = tuple(("y", i, 0) for i in range(1, s + 1))
    else:
        slots = {("y", i, 0) for i in range(1, s + 1)}
        for (kind, i), lag in _referenced(spec).items():
            slots |= {(kind, i, j) for j in range(lag)}
        window = tuple(sorted(slots, key=lambda slot: (slot[2], slot[0], slot[1])))

    for pos, (kind, i, lag) in enumerate(window):
        if lag == 0 and kind == "y":
            mapping[stream_name("y", i)] = Var(f"y{pos + 1}")
    if ell > 0:
        for pos, (kind, i, lag) in enumerate(window):
            # memory slot pos holds this slot one step later
            mapping[stream_name(kind, i, lag + 1)] = Var(f"m{pos + 1}")

    copies: list[Copy] = []
    if ell > 0:
        for pos, (kind, i, lag) in enumerate(window):
            if kind == "x" and lag == 0:
                copies.append(Copy(pos, "x", i - 1))
            elif lag > 0:
                copies.append(Copy(pos, "m", window.index((kind, i, lag - 1))))

    def rewrite(leaf: Ltl) -> Ltl:
        if not isinstance(leaf, Data):
            return leaf
        guard = ell if atom_guard == AtomGuard.LOOKBACK else atom_lag(leaf.formula)
        return Data(substitute(leaf.formula, mapping), guard)

    formula = map_atoms(spec.formula, rewrite)
    w_m = len(window) if ell > 0 else 0
    if copies:
        names = {"x": lambda j: Var(f"x{j + 1}"), "m": lambda j: Var(f"m{j + 1}")}
        equalities = [Eq(Var(f"y{c.target + 1}"), names[c.source_kind](c.source)) for c in copies]
        formula = land(formula, always(Data(conjoin(equalities), 0)))

    kernel = KernelSpec(structure, w_m, s, len(window), formula, window, tuple(copies),
                        ell, s, spec)
    log.info("kernel widths (m, x, y) = (%d, %d, %d), %d copy constraint(s)",
             kernel.w_m, kernel.w_x, kernel.w_y, len(copies))
    return kernel
