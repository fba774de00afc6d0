import random
from fractions import Fraction

import pytest

from src.errors import MalformedElementError, ResourceCapError, WitnessError
from src.logic.parser import parse_fo
from src.logic.spec_schema import ConstantDecl
from src.runtime.sampling import random_tuple
from src.structures import (
    AtomlessBAStructure, DenseOrderStructure, DyadicUnion, EqualityStructure, product, with_constants,
)

EQ = EqualityStructure()
DLO = DenseOrderStructure()
ABA = AtomlessBAStructure()


@pytest.mark.parametrize("structure, counts", [
    (EQ, [1, 1, 2, 5, 15, 52]),
    (DLO, [1, 1, 3, 13, 75, 541]),
    (ABA, [1, 3, 15, 255]),
])
def test_type_counts(structure, counts):
    assert [len(structure.enumerate_types(k)) for k in range(len(counts))] == counts


def test_product_type_counts():
    assert len(product([EQ]).enumerate_types(2)) == 2
    assert len(product([EQ, DLO]).enumerate_types(2)) == 6
    assert len(product([EQ, EQ]).enumerate_types(3)) == 25


def test_enumeration_is_duplicate_free_and_deterministic():
    first = DLO.enumerate_types(3)
    assert len(set(first)) == len(first)
    assert DenseOrderStructure().enumerate_types(3) == first


def test_arity_cap():
    with pytest.raises(ResourceCapError):
        AtomlessBAStructure(arity_cap=2).enumerate_types(3)


def test_type_of_examples():
    assert EQ.render_type(EQ.type_of((5, 7, 5))) == "{1 3|2}"
    assert DLO.render_type(DLO.type_of((Fraction(1, 2), Fraction(1, 2), Fraction(2)))) == "1=2<3"
    half = DyadicUnion.parse("0/1:1/2")
    assert ABA.render_type(ABA.type_of((half, DyadicUnion.one()))) == "0101"


def test_restrict_examples():
    tau = DLO.type_of((0, 1, 1))
    assert DLO.render_type(DLO.restrict(tau, [1, 2])) == "1=2"
    sigma = EQ.type_of((4, 4, 6))
    assert EQ.render_type(EQ.restrict(sigma, [1, 2])) == "{1|2}"
    with pytest.raises(IndexError):
        EQ.restrict(sigma, [3])


def test_memory_type_keeps_the_output_columns():
    tau = DLO.type_of((3, 0, 2, 5, 2))
    assert DLO.memory_type(tau, 2, 1, 2) == DLO.restrict(tau, [3, 4])
    with pytest.raises(ValueError):
        DLO.memory_type(tau, 1, 1, 1)


@pytest.mark.parametrize("structure, k", [(EQ, 4), (DLO, 4), (ABA, 2)])
def test_restriction_consistency(structure, k):
    rng = random.Random(7)
    for _ in range(1000):
        values = random_tuple(structure, k, rng)
        keep = sorted(rng.sample(range(k), rng.randint(0, k)))
        expected = structure.type_of(tuple(values[i] for i in keep))
        assert structure.restrict(structure.type_of(values), keep) == expected


@pytest.mark.parametrize("structure, k", [(EQ, 3), (DLO, 3), (ABA, 2)])
def test_extension_soundness(structure, k):
    rng = random.Random(11)
    for _ in range(1000):
        context = random_tuple(structure, k, rng)
        current = structure.type_of(context)
        options = [t for t in structure.enumerate_types(k + 1)
                   if structure.restrict(t, range(k)) == current]
        tau = rng.choice(options)
        b = structure.extend_witness(context, tau)
        assert structure.type_of(context + (b,)) == tau
        assert structure.extend_witness(context, tau) == b


def test_extension_examples():
    tau = DLO.type_of((0, 2, 1))
    assert DLO.extend_witness((Fraction(0), Fraction(1)), tau) == Fraction(1, 2)
    assert EQ.extend_witness((5,), EQ.type_of((5, 6))) == 0
    half = DyadicUnion.parse("0/1:1/2")
    quarter = ABA.extend_witness((half,), ABA.type_of((half, DyadicUnion.parse("0/1:1/4"))))
    assert quarter.render() == "0/1:1/4"
    assert EQ.extend_witness_tuple((3,), EQ.type_of((1, 1, 2))) == (3, 0)


def test_extension_rejects_a_foreign_type():
    with pytest.raises(WitnessError):
        EQ.extend_witness((1, 2), EQ.type_of((4, 4, 4)))


@pytest.mark.parametrize("structure, k", [(EQ, 3), (DLO, 3), (ABA, 2)])
def test_isolating_formulas_isolate(structure, k):
    for tau in structure.enumerate_types(k):
        assert structure.iota(structure.isolating_formula(tau), k) == frozenset({tau})


def test_automorphisms_preserve_types():
    rng = random.Random(3)
    for _ in range(1000):
        values = tuple(rng.randint(0, 6) for _ in range(4))
        assert EQ.type_of(values) == EQ.type_of(tuple(2 * v + 7 for v in values))
        rationals = tuple(Fraction(v, rng.randint(1, 3)) for v in values)
        assert DLO.type_of(rationals) == DLO.type_of(tuple(3 * q + Fraction(1, 2) for q in rationals))


def test_quantifier_projection():
    density = parse_fo("exists z. (x1 < z & z < x2)")
    assert DLO.iota(density, 2) == DLO.iota(parse_fo("x1 < x2"), 2)
    infinite = parse_fo("exists z. z != x1")
    assert EQ.iota(infinite, 1) == frozenset(EQ.enumerate_types(1))
    atomless = parse_fo("exists z. (!(z = 0) & !(z = x1) & (z & x1) = z)")
    nonzero = ABA.iota(parse_fo("!(x1 = 0)"), 1)
    assert len(nonzero) == 2
    assert ABA.iota(atomless, 1) == nonzero


def test_atomic_truth():
    assert not DLO.holds(parse_fo("x2 < x1"), (0, 1))
    assert EQ.holds(parse_fo("x1 = x2"), (4, 4))
    assert EQ.iota(parse_fo("FALSE"), 2) == frozenset()


def test_constants_expansion():
    assert len(with_constants(EQ, [ConstantDecl("c")]).enumerate_types(1)) == 2
    bounded = with_constants(DLO, [ConstantDecl("a", "0"), ConstantDecl("b", "1")])
    assert len(bounded.enumerate_types(1)) == 5
    inside = parse_fo("a < x1 & x1 < b", ("a", "b"))
    assert bounded.holds(inside, (Fraction(1, 3),))
    assert not bounded.holds(inside, (Fraction(2),))


def test_malformed_elements():
    with pytest.raises(MalformedElementError):
        EQ.parse_element("-1")
    with pytest.raises(MalformedElementError):
        DLO.parse_element("one")
    with pytest.raises(MalformedElementError):
        ABA.parse_element("0/1:1/3")
