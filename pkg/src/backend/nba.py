# src/backend/nba.py
"""
Tableau construction of a Büchi automaton for propositional LTL with past,
plus emptiness and lasso membership.

A state records what the previous letter promised about the current
position (the truth of every X-element: arguments of X and Until nodes)
and the truth at the previous position of every Y-element (arguments of Y
and Since nodes). Until obligations are generalized-Büchi conditions,
degeneralized with a counter over the Until nodes in order of appearance.
Acceptance sits on transitions.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable

import networkx as nx
from dd.autoref import Function

from config import synth_config
from src.backend.alphabet import Alphabet
from src.backend.lasso import Lasso
from src.errors import ResourceCapError
from src.logic.ltl import (
    LAnd, LFalse, LNot, LTrue, Ltl, Next, Prop, Since, Until, Yesterday,
    props_of, render_ltl, subformulas,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class NbaState:
    init: bool
    req: tuple[bool, ...] = ()       # X-elements true at this position
    past: tuple[bool, ...] = ()      # Y-elements true at the previous position
    counter: int = 0


@dataclass(frozen=True)
class Transition:
    source: int
    label: Function = field(compare=False)
    target: int
    accepting: bool


@dataclass
class Nba:
    alphabet: Alphabet
    props: tuple[str, ...]
    states: list[NbaState]
    transitions: dict[int, list[Transition]]
    initial: int = 0

    def __len__(self) -> int:
        return len(self.states)

    def labels(self) -> list[Function]:
        out: list[Function] = []
        for ts in self.transitions.values():
            for t in ts:
                if not any(t.label == u for u in out):
                    out.append(t.label)
        return out


def _x_elements(f: Ltl) -> list[Ltl]:
    out: list[Ltl] = []
    for g in subformulas(f):
        item = g.arg if isinstance(g, Next) else g if isinstance(g, Until) else None
        if item is not None and item not in out:
            out.append(item)
    return out


def _y_elements(f: Ltl) -> list[Ltl]:
    out: list[Ltl] = []
    for g in subformulas(f):
        item = g.arg if isinstance(g, Yesterday) else g if isinstance(g, Since) else None
        if item is not None and item not in out:
            out.append(item)
    return out


class _Tableau:
    def __init__(self, f: Ltl, alphabet: Alphabet):
        self.f = f
        self.A = alphabet
        self.xs = _x_elements(f)
        self.ys = _y_elements(f)
        self.untils = [g for g in self.xs if isinstance(g, Until)]
        self.xv = [f"_x{i}" for i in range(len(self.xs))]
        self.yv = [f"_y{j}" for j in range(len(self.ys))]
        self.nv = [f"_n{j}" for j in range(len(self.ys))]
        alphabet.ensure(self.xv + self.yv + self.nv)
        self.x_index = {g: i for i, g in enumerate(self.xs)}
        self.y_index = {g: j for j, g in enumerate(self.ys)}
        self.memo: dict[Ltl, Function] = {}
        self.next_past = alphabet.true
        for j, g in enumerate(self.ys):
            self.next_past &= alphabet.iff(alphabet.var(self.nv[j]), self.encode(g))
        self.conditions = [~self.encode(u) | self.encode(u.right) for u in self.untils]
        self.requirements = [self.encode(g) for g in self.xs]

    def encode(self, g: Ltl) -> Function:
        """Truth of g at the current position, given the guess variables."""
        if g in self.memo:
            return self.memo[g]
        A = self.A
        match g:
            case LTrue():
                out = A.true
            case LFalse():
                out = A.false
            case Prop(name):
                if name not in A.props:
                    raise ValueError(f"proposition '{name}' is not declared")
                out = A.var(name)
            case LNot(a):
                out = ~self.encode(a)
            case LAnd(a, b):
                out = self.encode(a) & self.encode(b)
            case Next(a):
                out = A.var(self.xv[self.x_index[a]])
            case Until(a, b):
                out = self.encode(b) | (self.encode(a) & A.var(self.xv[self.x_index[g]]))
            case Yesterday(a):
                out = A.var(self.yv[self.y_index[a]])
            case Since(a, b):
                out = self.encode(b) | (self.encode(a) & A.var(self.yv[self.y_index[g]]))
            case _:
                raise TypeError(f"not a propositional temporal formula: {g!r}")
        self.memo[g] = out
        return out

    def successors(self, s: NbaState) -> list[tuple[Function, NbaState, bool]]:
        A = self.A
        if s.init:
            base = self.encode(self.f)
        else:
            base = A.true
            for r, holds in zip(self.requirements, s.req):
                base &= r if holds else ~r
        past = dict(zip(self.yv, s.past if s.past else (False,) * len(self.ys)))
        base = A.restrict(base & self.next_past, past)
        guesses = self.xv + self.nv
        out = []
        for a in A.assignments(base, guesses):
            label = A.restrict(base, a)
            req = tuple(a[v] for v in self.xv)
            nxt = tuple(a[v] for v in self.nv)
            if not self.untils:
                out.append((label, NbaState(False, req, nxt, 0), True))
                continue
            cond = A.restrict(A.restrict(self.conditions[s.counter], past), a)
            hit, miss = label & cond, label & ~cond
            if hit != A.false:
                c = s.counter + 1
                wrap = c == len(self.untils)
                out.append((hit, NbaState(False, req, nxt, 0 if wrap else c), wrap))
            if miss != A.false:
                out.append((miss, NbaState(False, req, nxt, s.counter), False))
        return out


def to_nba(f: Ltl, alphabet: Alphabet | None = None,
           state_cap: int = synth_config.NBA_STATE_CAP) -> Nba:
    """
    Büchi automaton over the alphabet's propositions accepting exactly the models of f.

    Raises:
        ResourceCapError: When more than `state_cap` states are reachable
    """
    if alphabet is None:
        alphabet = Alphabet(props_of(f))
    tab = _Tableau(f, alphabet)
    start = NbaState(True)
    index = {start: 0}
    states = [start]
    transitions: dict[int, list[Transition]] = {}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        src = index[s]
        transitions[src] = []
        for label, target, accepting in tab.successors(s):
            if target not in index:
                if len(states) >= state_cap:
                    raise ResourceCapError(f"automaton exceeds {state_cap} states")
                index[target] = len(states)
                states.append(target)
                queue.append(target)
            transitions[src].append(Transition(src, label, index[target], accepting))
    log.debug("automaton for %s: %d states, %d transitions", render_ltl(f)[:60],
              len(states), sum(len(ts) for ts in transitions.values()))
    return Nba(alphabet, alphabet.props, states, transitions)


# ---------------------------  Emptiness  --------------------------- #

Successors = Callable[[Hashable], Iterable[tuple[Hashable, bool, Any]]]


def find_accepting_lasso(initial: Hashable, successors: Successors,
                         node_cap: int | None = None) -> tuple[list, list] | None:
    """
    Letters of a path to an accepting edge inside a strongly connected
    component, then around the cycle through that edge.

    Args:
        initial: Start node
        successors: node -> (target, accepting, letter) triples
        node_cap: Optional bound on explored nodes

    Returns:
        (prefix letters, loop letters), or None if no accepting cycle is reachable
    """
    g = nx.DiGraph()
    g.add_node(initial)
    queue = deque([initial])
    while queue:
        node = queue.popleft()
        for target, accepting, letter in successors(node):
            if target not in g:
                if node_cap is not None and g.number_of_nodes() >= node_cap:
                    raise ResourceCapError(f"product exceeds {node_cap} nodes")
                g.add_node(target)
                queue.append(target)
            if g.has_edge(node, target):
                data = g.edges[node, target]
                if accepting and not data["accepting"]:
                    data.update(accepting=True, letter=letter)
            else:
                g.add_edge(node, target, letter=letter, accepting=accepting)

    component: dict[Hashable, int] = {}
    for i, members in enumerate(nx.strongly_connected_components(g)):
        for v in members:
            component[v] = i
    for u, v, data in g.edges(data=True):
        if not data["accepting"] or component[u] != component[v]:
            continue
        head = nx.shortest_path(g, initial, u)
        inside = g.subgraph(w for w in g if component[w] == component[u])
        back = nx.shortest_path(inside, v, u)
        prefix = [g.edges[a, b]["letter"] for a, b in zip(head, head[1:])]
        loop = [data["letter"]] + [g.edges[a, b]["letter"] for a, b in zip(back, back[1:])]
        return prefix, loop
    return None


@dataclass(frozen=True)
class SatResult:
    sat: bool
    lasso: Lasso | None = None


def _letter(nba: Nba, label: Function) -> frozenset[str]:
    valuation = nba.alphabet.least(label, nba.props)
    return frozenset(p for p, v in valuation.items() if v)


def check_sat(f: Ltl, props: Iterable[str] | None = None) -> SatResult:
    """A lasso model of f, if there is one."""
    alphabet = Alphabet(list(props) if props is not None else props_of(f))
    nba = to_nba(f, alphabet)

    def successors(q: int):
        for t in nba.transitions[q]:
            yield t.target, t.accepting, t.label

    found = find_accepting_lasso(nba.initial, successors)
    if found is None:
        log.info("formula is unsatisfiable")
        return SatResult(False)
    prefix, loop = found
    lasso = Lasso(tuple(_letter(nba, u) for u in prefix), tuple(_letter(nba, u) for u in loop))
    log.info("formula is satisfiable; model of length %d + %d", len(lasso.prefix), len(lasso.loop))
    return SatResult(True, lasso)


def accepts_lasso(nba: Nba, lasso: Lasso) -> bool:
    """Whether the automaton has an accepting run on u·v^ω."""
    start = len(lasso.prefix)
    n = start + len(lasso.loop)
    valuations = [{p: p in lasso.letter(i) for p in nba.props} for i in range(n)]

    def successors(node):
        q, i = node
        j = i + 1 if i + 1 < n else start
        for t in nba.transitions[q]:
            if nba.alphabet.holds(t.label, valuations[i]):
                yield (t.target, j), t.accepting, None

    return find_accepting_lasso((nba.initial, 0), successors) is not None
