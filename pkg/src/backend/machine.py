# src/backend/machine.py
"""
Finite-state strategies, their JSON file form, minimisation and
verification against a propositional formula.

Mealy machines (system strategies) read the step's input bits and answer
with output bits in the same step. Moore machines (environment
counter-strategies) commit to input bits per state and branch on 0/1/-
cubes over the outputs.
"""
from __future__ import annotations

import json
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Literal

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from config import synth_config
from src.backend.alphabet import Alphabet, all_valuations, from_bits, to_bits
from src.backend.lasso import Lasso
from src.backend.nba import find_accepting_lasso, to_nba
from src.errors import MachineFormatError
from src.logic.ltl import Ltl, lnot, props_of

log = logging.getLogger(__name__)


@dataclass
class MealyMachine:
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    states: tuple[int, ...]
    init: int
    trans: dict[tuple[int, str], tuple[str, int]]
    meta: dict[str, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.states)

    def step(self, state: int, inbits: str) -> tuple[str, int]:
        return self.trans[(state, inbits)]

    def react(self, state: int, valuation: dict[str, bool]) -> tuple[dict[str, bool], int]:
        outbits, nxt = self.step(state, to_bits(valuation, self.inputs))
        return from_bits(outbits, self.outputs), nxt


@dataclass
class MooreMachine:
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    states: tuple[int, ...]
    init: int
    emit: dict[int, str]
    trans: dict[int, list[tuple[str, int]]]
    meta: dict[str, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.states)

    def step(self, state: int, outbits: str) -> int:
        for cube, nxt in self.trans[state]:
            if all(c == "-" or c == b for c, b in zip(cube, outbits)):
                return nxt
        raise MachineFormatError(f"state {state} has no transition for outputs {outbits}")


# ---------------------------  File form  --------------------------- #

class _MachineFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    inputs: list[str]
    outputs: list[str]
    states: list[int]
    init: int
    meta: dict[str, Any] = Field(default_factory=dict)


class MealyFile(_MachineFile):
    kind: Literal["mealy"] = "mealy"
    trans: list[tuple[int, str, str, int]]


class MooreFile(_MachineFile):
    kind: Literal["moore"]
    emit: list[tuple[int, str]]
    trans: list[tuple[int, str, int]]


def _check_bits(text: str, width: int, what: str, cube: bool = False) -> None:
    allowed = set("01-") if cube else set("01")
    if len(text) != width or not set(text) <= allowed:
        raise MachineFormatError(f"{what} '{text}' is not a {width}-letter {'cube' if cube else 'bit string'}")


def write_machine(machine: MealyMachine | MooreMachine) -> str:
    if isinstance(machine, MealyMachine):
        doc = MealyFile(inputs=list(machine.inputs), outputs=list(machine.outputs),
                        states=list(machine.states), init=machine.init, meta=machine.meta,
                        trans=[(s, i, o, n) for (s, i), (o, n) in sorted(machine.trans.items())])
    else:
        doc = MooreFile(kind="moore", inputs=list(machine.inputs), outputs=list(machine.outputs),
                        states=list(machine.states), init=machine.init, meta=machine.meta,
                        emit=sorted(machine.emit.items()),
                        trans=[(s, c, n) for s in machine.states for c, n in machine.trans[s]])
    return json.dumps(doc.model_dump(), indent=2) + "\n"


def read_machine(text: str) -> MealyMachine | MooreMachine:
    """
    Load a machine file, check it and drop unreachable states.

    Raises:
        MachineFormatError: On malformed JSON, unknown states, wrong bit widths,
            missing or duplicate transitions
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MachineFormatError(f"machine file is not JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise MachineFormatError("machine file must hold a JSON object")
    try:
        if raw.get("kind", "mealy") == "moore":
            return _load_moore(MooreFile.model_validate(raw))
        return _load_mealy(MealyFile.model_validate(raw))
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        raise MachineFormatError(f"machine file field {where}: {first['msg']}") from exc


def _check_header(doc: _MachineFile) -> set[int]:
    states = set(doc.states)
    if len(states) != len(doc.states):
        raise MachineFormatError("duplicate state ids")
    if doc.init not in states:
        raise MachineFormatError(f"initial state {doc.init} is not declared")
    if set(doc.inputs) & set(doc.outputs):
        raise MachineFormatError("a proposition is declared as both input and output")
    return states


def _load_mealy(doc: MealyFile) -> MealyMachine:
    states = _check_header(doc)
    trans: dict[tuple[int, str], tuple[str, int]] = {}
    for s, i, o, n in doc.trans:
        if s not in states or n not in states:
            raise MachineFormatError(f"transition {s} -> {n} uses an undeclared state")
        _check_bits(i, len(doc.inputs), "input")
        _check_bits(o, len(doc.outputs), "output")
        if (s, i) in trans:
            raise MachineFormatError(f"state {s} has two transitions on input {i}")
        trans[(s, i)] = (o, n)
    for s in doc.states:
        for v in all_valuations(doc.inputs):
            if (s, to_bits(v, doc.inputs)) not in trans:
                raise MachineFormatError(
                    f"machine is not total: state {s} has no transition on input {to_bits(v, doc.inputs)}")
    machine = MealyMachine(tuple(doc.inputs), tuple(doc.outputs), tuple(doc.states),
                           doc.init, trans, doc.meta)
    return prune_mealy(machine)


def _load_moore(doc: MooreFile) -> MooreMachine:
    states = _check_header(doc)
    emit: dict[int, str] = {}
    for s, bits in doc.emit:
        if s not in states or s in emit:
            raise MachineFormatError(f"bad or repeated emission for state {s}")
        _check_bits(bits, len(doc.inputs), "input")
        emit[s] = bits
    if set(emit) != states:
        raise MachineFormatError("every state needs exactly one input emission")
    trans: dict[int, list[tuple[str, int]]] = {s: [] for s in doc.states}
    for s, cube, n in doc.trans:
        if s not in states or n not in states:
            raise MachineFormatError(f"transition {s} -> {n} uses an undeclared state")
        _check_bits(cube, len(doc.outputs), "output guard", cube=True)
        trans[s].append((cube, n))
    A = Alphabet(doc.outputs)
    for s in doc.states:
        covered = A.false
        for cube, _ in trans[s]:
            covered |= A.pattern(doc.outputs, cube)
        if covered != A.true:
            raise MachineFormatError(f"machine is not total: state {s} misses some outputs")
    machine = MooreMachine(tuple(doc.inputs), tuple(doc.outputs), tuple(doc.states),
                           doc.init, emit, trans, doc.meta)
    return prune_moore(machine)


# ---------------------------  Reachability and minimisation  --------------------------- #

def _reachable(init: int, edges: list[tuple[int, int]]) -> set[int]:
    g = nx.DiGraph()
    g.add_node(init)
    g.add_edges_from(edges)
    return {init} | nx.descendants(g, init)


def prune_mealy(m: MealyMachine) -> MealyMachine:
    keep = _reachable(m.init, [(s, n) for (s, _), (_, n) in m.trans.items()])
    if len(keep) < len(m.states):
        log.info("dropping %d unreachable state(s)", len(m.states) - len(keep))
    return MealyMachine(m.inputs, m.outputs, tuple(s for s in m.states if s in keep), m.init,
                        {k: v for k, v in m.trans.items() if k[0] in keep}, m.meta)


def prune_moore(m: MooreMachine) -> MooreMachine:
    keep = _reachable(m.init, [(s, n) for s, ts in m.trans.items() for _, n in ts])
    if len(keep) < len(m.states):
        log.info("dropping %d unreachable state(s)", len(m.states) - len(keep))
    return MooreMachine(m.inputs, m.outputs, tuple(s for s in m.states if s in keep), m.init,
                        {s: e for s, e in m.emit.items() if s in keep},
                        {s: ts for s, ts in m.trans.items() if s in keep}, m.meta)


def _refine(states: list[int], signature) -> dict[int, int]:
    """Coarsest stable partition; signature(s, block) must depend on blocks of successors."""
    block = {s: 0 for s in states}
    while True:
        keys: dict[Any, int] = {}
        new = {}
        for s in states:
            key = signature(s, block)
            new[s] = keys.setdefault(key, len(keys))
        if len(keys) == len(set(block.values())):
            return new
        block = new


def _bfs_order(init: int, successors) -> list[int]:
    order, seen, queue = [], {init}, deque([init])
    while queue:
        s = queue.popleft()
        order.append(s)
        for n in successors(s):
            if n not in seen:
                seen.add(n)
                queue.append(n)
    return order


def minimize_mealy(m: MealyMachine) -> MealyMachine:
    """Merge equivalent states; states are renumbered 0.. in breadth-first order."""
    letters = [to_bits(v, m.inputs) for v in all_valuations(m.inputs)]
    states = list(m.states)

    def signature(s, block):
        return tuple((m.trans[(s, i)][0], block[m.trans[(s, i)][1]]) for i in letters)

    block = _refine(states, signature)
    rep = {}
    for s in states:
        rep.setdefault(block[s], s)
    order = _bfs_order(block[m.init], lambda b: [block[m.trans[(rep[b], i)][1]] for i in letters])
    number = {b: k for k, b in enumerate(order)}
    trans = {}
    for b in order:
        for i in letters:
            out, nxt = m.trans[(rep[b], i)]
            trans[(number[b], i)] = (out, number[block[nxt]])
    return MealyMachine(m.inputs, m.outputs, tuple(range(len(order))), 0, trans, m.meta)


def minimize_moore(m: MooreMachine) -> MooreMachine:
    states = list(m.states)

    def signature(s, block):
        return m.emit[s], tuple((c, block[n]) for c, n in m.trans[s])

    block = _refine(states, signature)
    rep = {}
    for s in states:
        rep.setdefault(block[s], s)
    order = _bfs_order(block[m.init], lambda b: [block[n] for _, n in m.trans[rep[b]]])
    number = {b: k for k, b in enumerate(order)}
    emit = {number[b]: m.emit[rep[b]] for b in order}
    trans = {number[b]: [(c, number[block[n]]) for c, n in m.trans[rep[b]]] for b in order}
    return MooreMachine(m.inputs, m.outputs, tuple(range(len(order))), 0, emit, trans, m.meta)


# ---------------------------  Verification  --------------------------- #

@dataclass(frozen=True)
class Verification:
    ok: bool
    counterexample: Lasso | None = None


def _covered(machine, f: Ltl) -> Alphabet:
    missing = set(props_of(f)) - set(machine.inputs) - set(machine.outputs)
    if missing:
        raise MachineFormatError(f"machine does not declare {sorted(missing)}")
    return Alphabet(machine.inputs + machine.outputs)


def _letter(valuation: dict[str, bool]) -> frozenset[str]:
    return frozenset(p for p, v in valuation.items() if v)


def verify_machine(machine: MealyMachine, f: Ltl,
                   node_cap: int = synth_config.GAME_POSITION_CAP) -> Verification:
    """
    Whether every play of the machine satisfies f.

    The product of the machine with the automaton of ¬f is searched for an
    accepting cycle; one found is returned as a counterexample.
    """
    alphabet = _covered(machine, f)
    nba = to_nba(lnot(f), alphabet)
    moves = []
    for v in all_valuations(machine.inputs):
        moves.append((v, to_bits(v, machine.inputs)))
    fires: dict[tuple[int, int, str, str], bool] = {}

    def successors(node):
        s, q = node
        for iv, inbits in moves:
            outbits, nxt = machine.trans[(s, inbits)]
            valuation = {**iv, **from_bits(outbits, machine.outputs)}
            for k, t in enumerate(nba.transitions[q]):
                key = (q, k, inbits, outbits)
                if key not in fires:
                    fires[key] = alphabet.holds(t.label, valuation)
                if fires[key]:
                    yield (nxt, t.target), t.accepting, _letter(valuation)

    found = find_accepting_lasso((machine.init, nba.initial), successors, node_cap)
    if found is None:
        return Verification(True)
    log.warning("machine violates the formula")
    return Verification(False, Lasso(tuple(found[0]), tuple(found[1])))


def verify_counter_strategy(machine: MooreMachine, f: Ltl,
                            node_cap: int = synth_config.GAME_POSITION_CAP) -> Verification:
    """Whether every play against the environment strategy violates f."""
    alphabet = _covered(machine, f)
    nba = to_nba(f, alphabet)
    names = machine.inputs + machine.outputs

    def successors(node):
        s, q = node
        committed = alphabet.cube(from_bits(machine.emit[s], machine.inputs))
        for cube, nxt in machine.trans[s]:
            guard = committed & alphabet.pattern(machine.outputs, cube)
            for t in nba.transitions[q]:
                both = t.label & guard
                if both != alphabet.false:
                    yield (nxt, t.target), t.accepting, _letter(alphabet.least(both, names))

    found = find_accepting_lasso((machine.init, nba.initial), successors, node_cap)
    if found is None:
        return Verification(True)
    log.warning("counter-strategy admits a play satisfying the formula")
    return Verification(False, Lasso(tuple(found[0]), tuple(found[1])))


def play(system: MealyMachine, environment: MooreMachine) -> Lasso:
    """
    The unique play of a system machine against an environment strategy,
    cut where the pair of states repeats.

    Raises:
        MachineFormatError: If the two machines disagree on the propositions
    """
    sides = (tuple(system.inputs), tuple(system.outputs))
    if sides != (tuple(environment.inputs), tuple(environment.outputs)):
        raise MachineFormatError("system and environment machines use different propositions")
    names = tuple(system.inputs) + tuple(system.outputs)
    seen: dict[tuple[int, int], int] = {}
    letters: list[frozenset[str]] = []
    s, e = system.init, environment.init
    while (s, e) not in seen:
        seen[(s, e)] = len(letters)
        inbits = environment.emit[e]
        outbits, s_next = system.step(s, inbits)
        letters.append(frozenset(p for p, b in zip(names, inbits + outbits) if b == "1"))
        s, e = s_next, environment.step(e, outbits)
    start = seen[(s, e)]
    return Lasso(tuple(letters[:start]), tuple(letters[start:]))
