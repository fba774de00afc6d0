# src/translate/encoders.py
"""
Kernel spec → propositional LTL+P, in three encodings.

naive    one proposition per partial type (P, environment) and per full
         type (Q, system), with exactly-one constraints.
binary   the same type numbers written in ⌈log₂ n⌉ bits; unused codes
         are forbidden on the side that owns them.
minterm  the system reports the memory type (R) and the truth of each data
         atom (D) instead of a full type; infeasible combinations are
         forbidden clause by clause.

Every translation has the shape  G(Ψ_I ∧ Φ_I) → (φ* ∧ G(...)).
"""
import logging
from dataclasses import dataclass
from typing import Callable, Hashable, Sequence

from src.errors import DecodeError
from src.logic.fo import FOFormula, render_formula
from src.logic.ltl import (
    Data, LTrue, Ltl, Next, Prop, always, conj, disj, exactly_one, implies,
    land, lnot, map_atoms, rebuild, subformulas, yesterday_chain, yesterday_n,
)
from src.run_config import EncodingMode, GuardMode
from src.structures import CompleteType
from src.translate.kernel import KernelSpec
from src.translate.propspec import PropSpec

log = logging.getLogger(__name__)

Valuation = dict[str, bool]


# ---------------------------  Codes  --------------------------- #

class OneHot:
    """One proposition per item."""

    def __init__(self, prefix: str, items: Sequence[Hashable]):
        self.items = tuple(items)
        self.index = {item: i for i, item in enumerate(self.items)}
        self.props = tuple(f"{prefix}_{i}" for i in range(len(self.items)))

    def literal(self, item) -> Ltl:
        return Prop(self.props[self.index[item]])

    def valuation(self, item) -> Valuation:
        hot = self.index[item]
        return {p: i == hot for i, p in enumerate(self.props)}

    def decode(self, valuation: Valuation):
        hot = [i for i, p in enumerate(self.props) if valuation.get(p)]
        if len(hot) != 1:
            raise DecodeError(f"expected exactly one of {self.props[0]}.. to hold, got {len(hot)}")
        return self.items[hot[0]]

    def constraint(self) -> Ltl:
        return exactly_one([Prop(p) for p in self.props])


class BinaryCode:
    """Item number i written in ⌈log₂ n⌉ bits, least significant bit first."""

    def __init__(self, prefix: str, items: Sequence[Hashable]):
        self.items = tuple(items)
        self.index = {item: i for i, item in enumerate(self.items)}
        self.width = (len(self.items) - 1).bit_length()
        self.props = tuple(f"{prefix}_{j}" for j in range(self.width))

    def _pattern(self, code: int) -> Ltl:
        return conj(Prop(p) if (code >> j) & 1 else lnot(Prop(p)) for j, p in enumerate(self.props))

    def literal(self, item) -> Ltl:
        return self._pattern(self.index[item])

    def valuation(self, item) -> Valuation:
        code = self.index[item]
        return {p: bool((code >> j) & 1) for j, p in enumerate(self.props)}

    def decode(self, valuation: Valuation):
        code = sum(1 << j for j, p in enumerate(self.props) if valuation.get(p))
        if code >= len(self.items):
            raise DecodeError(f"code {code} is unused (only {len(self.items)} items)")
        return self.items[code]

    def constraint(self) -> Ltl:
        return conj(lnot(self._pattern(c)) for c in range(len(self.items), 2 ** self.width))


def make_code(prefix: str, items: Sequence[Hashable], binary: bool) -> OneHot | BinaryCode:
    return BinaryCode(prefix + "b", items) if binary else OneHot(prefix, items)


# ---------------------------  Feasibility  --------------------------- #

@dataclass(frozen=True)
class FeasibilityTable:
    atoms: tuple[FOFormula, ...]
    entries: dict                    # (σ, ρ, A) -> first full type in canonical order

    def witness(self, sigma: CompleteType, rho: CompleteType, answers: tuple[bool, ...]) -> CompleteType | None:
        return self.entries.get((sigma, rho, answers))

    def is_feasible(self, sigma: CompleteType, rho: CompleteType, answers: tuple[bool, ...]) -> bool:
        return (sigma, rho, answers) in self.entries


def feasible_combinations(kernel: KernelSpec) -> FeasibilityTable:
    """Scan the full types once; keep the first witness of each (σ, ρ, A)."""
    S = kernel.structure
    names = kernel.full_names
    sets = [S.iota(a, names) for a in kernel.atoms]
    partial = range(kernel.w_m + kernel.w_x)
    entries: dict = {}
    for tau in S.enumerate_types(len(names)):
        key = (S.select(tau, partial),
               S.memory_type(tau, kernel.w_m, kernel.w_x, kernel.w_y),
               tuple(tau in s for s in sets))
        entries.setdefault(key, tau)
    log.debug("feasibility table: %d feasible combinations", len(entries))
    return FeasibilityTable(kernel.atoms, entries)


# ---------------------------  Codecs  --------------------------- #

class TableCodec:
    """Decode metadata of the naive and binary encodings."""

    def __init__(self, kernel: KernelSpec, P, Q):
        self.kernel, self.P, self.Q = kernel, P, Q

    def environment_valuation(self, sigma: CompleteType) -> Valuation:
        return self.P.valuation(sigma)

    def system_valuation(self, tau: CompleteType) -> Valuation:
        return self.Q.valuation(tau)

    def decode(self, valuation: Valuation, sigma: CompleteType) -> CompleteType:
        tau = self.Q.decode(valuation)
        S = self.kernel.structure
        if S.select(tau, range(self.kernel.w_m + self.kernel.w_x)) != sigma:
            raise DecodeError(
                f"full type {S.render_type(tau)} does not extend the step's partial type {S.render_type(sigma)}")
        return tau

    def meta(self) -> list[str]:
        S = self.kernel.structure
        lines = [f"P {i} {S.render_type(t)}" for i, t in enumerate(self.P.items)]
        lines += [f"Q {i} {S.render_type(t)}" for i, t in enumerate(self.Q.items)]
        return lines


class MintermCodec:
    """Decode metadata of the minterm encoding: the witness table."""

    def __init__(self, kernel: KernelSpec, P, R, d_props: tuple[str, ...], table: FeasibilityTable):
        self.kernel, self.P, self.R, self.d_props, self.table = kernel, P, R, d_props, table
        S = kernel.structure
        self._sets = [S.iota(a, kernel.full_names) for a in table.atoms]

    def environment_valuation(self, sigma: CompleteType) -> Valuation:
        return self.P.valuation(sigma)

    def system_valuation(self, tau: CompleteType) -> Valuation:
        k = self.kernel
        valuation = self.R.valuation(k.structure.memory_type(tau, k.w_m, k.w_x, k.w_y))
        valuation.update({d: tau in s for d, s in zip(self.d_props, self._sets)})
        return valuation

    def decode(self, valuation: Valuation, sigma: CompleteType) -> CompleteType:
        rho = self.R.decode(valuation)
        answers = tuple(bool(valuation.get(d)) for d in self.d_props)
        tau = self.table.witness(sigma, rho, answers)
        if tau is None:
            raise DecodeError("machine output names an infeasible (partial type, memory type, atoms) combination")
        return tau

    def meta(self) -> list[str]:
        S = self.kernel.structure
        lines = [f"P {i} {S.render_type(t)}" for i, t in enumerate(self.P.items)]
        lines += [f"R {i} {S.render_type(t)}" for i, t in enumerate(self.R.items)]
        lines += [f"D {i} {render_formula(a)}" for i, a in enumerate(self.table.atoms)]
        for (sigma, rho, answers), tau in self.table.entries.items():
            bits = "".join("1" if a else "0" for a in answers)
            lines.append(f"W {self.P.index[sigma]} {self.R.index[rho]} {bits or '-'} {S.render_type(tau)}")
        return lines


# ---------------------------  Shared pieces  --------------------------- #

class _Translation:
    def __init__(self, kernel: KernelSpec, guard: GuardMode):
        S = kernel.structure
        self.kernel = kernel
        self.guard_mode = guard
        self.partial = S.enumerate_types(kernel.w_m + kernel.w_x)
        self.full = S.enumerate_types(kernel.w_m + kernel.w_x + kernel.w_y)
        self.memory = S.enumerate_types(kernel.w_y)
        self.depth = self._counter_depth() if guard == GuardMode.COUNTER else 0
        self.counters = tuple(f"c_{i}" for i in range(self.depth + 1)) if self.depth else ()

    def _counter_depth(self) -> int:
        depth = 0
        for g in subformulas(self.kernel.formula):
            if isinstance(g, Data):
                depth = max(depth, g.guard)
            chain = yesterday_chain(g)
            if chain:
                depth = max(depth, chain)
        return depth

    def guard(self, g: int) -> Ltl:
        if g == 0:
            return LTrue()
        if self.guard_mode == GuardMode.PAST:
            return yesterday_n(LTrue(), g)
        return disj(Prop(c) for c in self.counters[g:])

    def atom_types(self, atom: FOFormula) -> frozenset[CompleteType]:
        return self.kernel.structure.iota(atom, self.kernel.full_names)

    def phi_star(self, replace: Callable[[FOFormula], Ltl]) -> Ltl:
        def leaf(d: Ltl) -> Ltl:
            return land(self.guard(d.guard), replace(d.formula)) if isinstance(d, Data) else d

        f = map_atoms(self.kernel.formula, leaf)
        if self.guard_mode == GuardMode.COUNTER:
            f = self._drop_chains(f)
        return f

    def _drop_chains(self, f: Ltl) -> Ltl:
        chain = yesterday_chain(f)
        if chain:
            return self.guard(chain)
        return rebuild(f, self._drop_chains)

    def counter_constraints(self) -> Ltl:
        if not self.counters:
            return LTrue()
        c = [Prop(n) for n in self.counters]
        steps = [implies(a, Next(b)) for a, b in zip(c, c[1:])]
        return conj([c[0], always(conj([exactly_one(c), *steps, implies(c[-1], Next(c[-1]))]))])

    def memory_of_partial(self, sigma: CompleteType) -> CompleteType:
        return self.kernel.structure.select(sigma, range(self.kernel.w_m))

    def partial_of_full(self, tau: CompleteType) -> CompleteType:
        return self.kernel.structure.select(tau, range(self.kernel.w_m + self.kernel.w_x))

    def memory_of_full(self, tau: CompleteType) -> CompleteType:
        k = self.kernel
        return k.structure.memory_type(tau, k.w_m, k.w_x, k.w_y)

    def psi_i(self, memory_literal: Callable[[CompleteType], Ltl | None], P) -> Ltl:
        """ρ now → some partial type with memory ρ next; vacuous without memory."""
        if self.kernel.w_m == 0:
            return LTrue()
        parts = []
        for rho in self.memory:
            lhs = memory_literal(rho)
            if lhs is None:
                continue
            successors = [P.literal(s) for s in self.partial if self.memory_of_partial(s) == rho]
            parts.append(implies(lhs, Next(disj(successors))))
        return conj(parts)

    def psi_o(self, P, Q) -> Ltl:
        parts = []
        for sigma in self.partial:
            above = [Q.literal(t) for t in self.full if self.partial_of_full(t) == sigma]
            parts.append(implies(disj(above), P.literal(sigma)))
        return conj(parts)

    def naive_memory_literal(self, Q) -> Callable[[CompleteType], Ltl | None]:
        def literal(rho: CompleteType) -> Ltl | None:
            members = [Q.literal(t) for t in self.full if self.memory_of_full(t) == rho]
            return disj(members) if members else None
        return literal


def _log_counts(spec: PropSpec) -> None:
    log.info("%s encoding: %d environment and %d system propositions",
             spec.mode.value, len(spec.inputs), len(spec.outputs))


# ---------------------------  Translations  --------------------------- #

def _table_translation(kernel: KernelSpec, mode: EncodingMode, guard: GuardMode) -> PropSpec:
    tr = _Translation(kernel, guard)
    binary = mode == EncodingMode.BINARY
    P = make_code("p", tr.partial, binary)
    Q = make_code("q", tr.full, binary)

    def replace(atom: FOFormula) -> Ltl:
        types = tr.atom_types(atom)
        return disj(Q.literal(t) for t in tr.full if t in types)

    assumption = always(conj([tr.psi_i(tr.naive_memory_literal(Q), P), P.constraint()]))
    guarantee = conj([tr.phi_star(replace),
                      always(conj([tr.psi_o(P, Q), Q.constraint()])),
                      tr.counter_constraints()])
    spec = PropSpec(mode, P.props, Q.props + tr.counters, assumption, guarantee,
                    TableCodec(kernel, P, Q), tr.counters)
    _log_counts(spec)
    return spec


def translate_naive(kernel: KernelSpec, guard: GuardMode = GuardMode.PAST) -> PropSpec:
    """Type propositions with exactly-one constraints on both sides."""
    return _table_translation(kernel, EncodingMode.NAIVE, guard)


def translate_binary(kernel: KernelSpec, guard: GuardMode = GuardMode.PAST) -> PropSpec:
    """Type numbers in binary; unused codes forbidden instead of exactly-one constraints."""
    return _table_translation(kernel, EncodingMode.BINARY, guard)


def translate_minterm(kernel: KernelSpec, guard: GuardMode = GuardMode.PAST,
                      binary_subencoding: bool = False) -> PropSpec:
    """
    The system names the memory type and the truth of each data atom.

    Infeasible (partial type, memory type, atom answers) combinations become
    forbidden-pattern clauses, which also keep the output consistent with
    the step's partial type.
    """
    tr = _Translation(kernel, guard)
    table = feasible_combinations(kernel)
    P = make_code("p", tr.partial, binary_subencoding)
    R = make_code("r", tr.memory, binary_subencoding)
    d_props = tuple(f"d_{i}" for i in range(len(table.atoms)))
    index = {a: i for i, a in enumerate(table.atoms)}

    clauses = []
    for sigma in tr.partial:
        for rho in tr.memory:
            for bits in range(2 ** len(d_props)):
                answers = tuple(bool((bits >> (len(d_props) - 1 - i)) & 1) for i in range(len(d_props)))
                if table.is_feasible(sigma, rho, answers):
                    continue
                lits = [Prop(d) if a else lnot(Prop(d)) for d, a in zip(d_props, answers)]
                clauses.append(lnot(conj([P.literal(sigma), R.literal(rho), *lits])))
    log.debug("minterm encoding: %d forbidden combinations", len(clauses))

    assumption = always(conj([tr.psi_i(R.literal, P), P.constraint()]))
    guarantee = conj([tr.phi_star(lambda atom: Prop(d_props[index[atom]])),
                      always(conj([R.constraint(), *clauses])),
                      tr.counter_constraints()])
    spec = PropSpec(EncodingMode.MINTERM, P.props, d_props + R.props + tr.counters,
                    assumption, guarantee, MintermCodec(kernel, P, R, d_props, table), tr.counters)
    _log_counts(spec)
    return spec


def translate(kernel: KernelSpec, mode: EncodingMode = EncodingMode.NAIVE,
              guard: GuardMode = GuardMode.PAST, binary_subencoding: bool = False) -> PropSpec:
    if mode == EncodingMode.MINTERM:
        return translate_minterm(kernel, guard, binary_subencoding)
    return _table_translation(kernel, mode, guard)


def translate_sat(kernel: KernelSpec, guard: GuardMode = GuardMode.PAST) -> Ltl:
    """Single-trace formula: φ* ∧ G(Φ_I ∧ Φ_O ∧ Ψ_O ∧ Ψ_I), all propositions existential."""
    tr = _Translation(kernel, guard)
    P = OneHot("p", tr.partial)
    Q = OneHot("q", tr.full)

    def replace(atom: FOFormula) -> Ltl:
        types = tr.atom_types(atom)
        return disj(Q.literal(t) for t in tr.full if t in types)

    body = conj([P.constraint(), Q.constraint(), tr.psi_o(P, Q),
                 tr.psi_i(tr.naive_memory_literal(Q), P)])
    return conj([tr.phi_star(replace), always(body), tr.counter_constraints()])
