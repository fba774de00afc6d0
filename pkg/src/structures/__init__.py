"""
Structure backends: equality, dense order, atomless Boolean algebra,
products of those, and expansions by constants.
"""
from typing import Mapping, Sequence

from src.logic.spec_schema import ConstantDecl, StructureDecl
from src.structures.atomless_ba import AtomlessBAStructure
from src.structures.base import CompleteType, Element, Structure
from src.structures.constants import ConstantsStructure, with_constants
from src.structures.dense_order import DenseOrderStructure
from src.structures.dyadic import DyadicUnion
from src.structures.equality import EqualityStructure
from src.structures.product import ProductStructure

BACKENDS = {
    "eq": EqualityStructure,
    "dlo": DenseOrderStructure,
    "aba": AtomlessBAStructure,
}


def product(components: Sequence[Structure]) -> Structure:
    return ProductStructure(components=tuple(components))


def build_structure(decl: StructureDecl, constants: Sequence[ConstantDecl] = (),
                    arity_caps: Mapping[str, int] | None = None) -> Structure:
    """Instantiate a declared structure, then expand it by the declared constants."""
    caps = arity_caps or {}

    def build(d: StructureDecl) -> Structure:
        if d.kind == "product":
            return product([build(c) for c in d.components])
        backend = BACKENDS[d.kind]
        return backend(arity_cap=caps[d.kind]) if d.kind in caps else backend()

    return with_constants(build(decl), constants)


__all__ = [
    "AtomlessBAStructure", "CompleteType", "ConstantsStructure", "DenseOrderStructure",
    "DyadicUnion", "Element", "EqualityStructure", "ProductStructure", "Structure",
    "build_structure", "product", "with_constants",
]
