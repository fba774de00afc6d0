# src/backend/synthesis.py
"""
Bounded synthesis for propositional LTL with past.

For b = 0, 1, ... the system is asked to keep every run of the automaton of
¬f below b+1 accepting visits (a safety game over counting functions), and
the environment, committing its input before the step's output, is asked
the same of the automaton of f. Strategies are extracted, minimised,
size-checked and verified before a verdict is returned.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Any, Sequence

from config import synth_config
from src.backend.alphabet import Alphabet, all_valuations, to_bits
from src.backend.machine import (
    MealyMachine, MooreMachine, minimize_mealy, minimize_moore,
    verify_counter_strategy, verify_machine,
)
from src.backend.nba import Nba, to_nba
from src.errors import SpecValidationError
from src.logic.ltl import Ltl, lnot, props_of

log = logging.getLogger(__name__)

Position = tuple[tuple[int, int], ...]     # (automaton state, visits) with the largest count kept


class Status(str, Enum):
    REALIZABLE   = "realizable"
    UNREALIZABLE = "unrealizable"
    UNKNOWN      = "unknown"


EXIT_CODES = {Status.REALIZABLE: 0, Status.UNREALIZABLE: 1, Status.UNKNOWN: 2}


@dataclass
class Verdict:
    status: Status
    machine: MealyMachine | None = None
    counter_strategy: MooreMachine | None = None
    bound: int | None = None

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]


class _CountingGame:
    """Safety game whose positions are counting functions of a universal co-Büchi automaton."""

    def __init__(self, nba: Nba, inputs: Sequence[str], outputs: Sequence[str], bound: int):
        self.nba = nba
        self.inputs = tuple(inputs)
        self.outputs = tuple(outputs)
        self.bound = bound
        A = nba.alphabet
        self.letters = list(all_valuations(self.inputs))
        labels = nba.labels()
        # per input letter: output classes as (least member, class BDD)
        self.classes: list[list[tuple[dict[str, bool], Any]]] = []
        for iv in self.letters:
            atoms = A.refine(A.restrict(label, iv) for label in labels)
            reps = [(A.least(atom, self.outputs), atom) for atom in atoms]
            reps.sort(key=lambda r: tuple(r[0][o] for o in self.outputs))
            self.classes.append(reps)
        self._fires: dict[tuple[int, int, int, int], bool] = {}

    def start(self) -> Position:
        return ((self.nba.initial, 0),)

    def _fired(self, q: int, t: int, i: int, k: int) -> bool:
        key = (q, t, i, k)
        if key not in self._fires:
            valuation = {**self.letters[i], **self.classes[i][k][0]}
            self._fires[key] = self.nba.alphabet.holds(self.nba.transitions[q][t].label, valuation)
        return self._fires[key]

    def successor(self, pos: Position, i: int, k: int) -> Position | None:
        """None once some run exceeds the bound."""
        best: dict[int, int] = {}
        for q, c in pos:
            for t, tr in enumerate(self.nba.transitions[q]):
                if not self._fired(q, t, i, k):
                    continue
                count = c + tr.accepting
                if count > self.bound:
                    return None
                if best.get(tr.target, -1) < count:
                    best[tr.target] = count
        return tuple(sorted(best.items()))

    def solve(self, environment_first: bool, position_cap: int):
        """
        Positions from which the safe player keeps every count within the bound.

        With environment_first False the safe player answers each input
        (∀ input ∃ class); otherwise it commits an input (∃ input ∀ class).
        Returns (winning set, move table), or None when the cap is hit.
        """
        moves: dict[Position, list[list[Position | None]]] = {}
        queue = deque([self.start()])
        moves[self.start()] = []
        while queue:
            pos = queue.popleft()
            rows = []
            for i in range(len(self.letters)):
                row = [self.successor(pos, i, k) for k in range(len(self.classes[i]))]
                for nxt in row:
                    if nxt is not None and nxt not in moves:
                        if len(moves) >= position_cap:
                            log.warning("game exceeds %d positions at bound %d", position_cap, self.bound)
                            return None
                        moves[nxt] = []
                        queue.append(nxt)
                rows.append(row)
            moves[pos] = rows
        log.debug("bound %d: %d positions", self.bound, len(moves))

        winning = set(moves)

        def ok(nxt):
            return nxt is not None and nxt in winning

        def safe(pos):
            if environment_first:
                return any(all(ok(n) for n in row) for row in moves[pos])
            return all(any(ok(n) for n in row) for row in moves[pos])

        changed = True
        while changed:
            changed = False
            for pos in list(winning):
                if not safe(pos):
                    winning.discard(pos)
                    changed = True
        return winning, moves


def _system_strategy(game: _CountingGame, position_cap: int) -> MealyMachine | None:
    solved = game.solve(False, position_cap)
    if solved is None or game.start() not in solved[0]:
        return None
    winning, moves = solved
    index = {game.start(): 0}
    queue = deque([game.start()])
    trans = {}
    while queue:
        pos = queue.popleft()
        for i, row in enumerate(moves[pos]):
            k = next(k for k, n in enumerate(row) if n is not None and n in winning)
            nxt = row[k]
            if nxt not in index:
                index[nxt] = len(index)
                queue.append(nxt)
            trans[(index[pos], to_bits(game.letters[i], game.inputs))] = (
                to_bits(game.classes[i][k][0], game.outputs), index[nxt])
    return MealyMachine(game.inputs, game.outputs, tuple(range(len(index))), 0, trans)


def _environment_strategy(game: _CountingGame, position_cap: int) -> MooreMachine | None:
    solved = game.solve(True, position_cap)
    if solved is None or game.start() not in solved[0]:
        return None
    winning, moves = solved
    A = game.nba.alphabet
    index = {game.start(): 0}
    queue = deque([game.start()])
    emit, trans = {}, {}
    while queue:
        pos = queue.popleft()
        s = index[pos]
        i = next(i for i, row in enumerate(moves[pos])
                 if all(n is not None and n in winning for n in row))
        emit[s] = to_bits(game.letters[i], game.inputs)
        trans[s] = []
        for k, nxt in enumerate(moves[pos][i]):
            if nxt not in index:
                index[nxt] = len(index)
                queue.append(nxt)
            for cube in A.cubes(game.classes[i][k][1], game.outputs):
                trans[s].append((cube, index[nxt]))
    return MooreMachine(game.inputs, game.outputs, tuple(range(len(index))), 0, emit, trans)


def check_partition(f: Ltl, inputs: Sequence[str], outputs: Sequence[str]) -> None:
    clash = set(inputs) & set(outputs)
    if clash:
        raise SpecValidationError(f"propositions on both sides: {sorted(clash)}")
    missing = set(props_of(f)) - set(inputs) - set(outputs)
    if missing:
        raise SpecValidationError(f"propositions neither input nor output: {sorted(missing)}")


def realize(f: Ltl, inputs: Sequence[str], outputs: Sequence[str],
            cap: int = synth_config.DEFAULT_BOUND_CAP,
            position_cap: int = synth_config.GAME_POSITION_CAP,
            meta: dict | None = None) -> Verdict:
    """
    Decide realizability of f with the environment owning `inputs`.

    Args:
        f: Propositional formula
        inputs: Environment propositions, read first each step
        outputs: System propositions
        cap: Largest bound tried and largest machine accepted
        position_cap: Game size beyond which a bound is skipped
        meta: Attached to the returned machine

    Returns:
        Verdict with a verified machine or counter-strategy, or UNKNOWN
    """
    check_partition(f, inputs, outputs)
    props = tuple(inputs) + tuple(outputs)
    negative = to_nba(lnot(f), Alphabet(props))
    positive = to_nba(f, Alphabet(props))
    log.info("automata: %d states for the negation, %d for the formula", len(negative), len(positive))

    for bound in range(cap):
        log.info("trying bound %d", bound)
        machine = _system_strategy(_CountingGame(negative, inputs, outputs, bound), position_cap)
        if machine is not None:
            machine = minimize_mealy(machine)
            if len(machine) > cap:
                log.info("bound %d: strategy needs %d states (cap %d)", bound, len(machine), cap)
            elif verify_machine(machine, f).ok:
                machine.meta = dict(meta or {})
                log.info("realizable: %d-state machine at bound %d", len(machine), bound)
                return Verdict(Status.REALIZABLE, machine=machine, bound=bound)
            else:
                log.warning("bound %d: extracted strategy failed verification", bound)

        counter = _environment_strategy(_CountingGame(positive, inputs, outputs, bound), position_cap)
        if counter is not None:
            counter = minimize_moore(counter)
            if len(counter) > cap:
                log.info("bound %d: counter-strategy needs %d states (cap %d)", bound, len(counter), cap)
            elif verify_counter_strategy(counter, f).ok:
                counter.meta = dict(meta or {})
                log.info("unrealizable: %d-state counter-strategy at bound %d", len(counter), bound)
                return Verdict(Status.UNREALIZABLE, counter_strategy=counter, bound=bound)
            else:
                log.warning("bound %d: extracted counter-strategy failed verification", bound)

    log.info("no verdict up to bound %d", cap - 1)
    return Verdict(Status.UNKNOWN, bound=cap)
