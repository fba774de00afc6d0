from pathlib import Path

import pytest

from src.logic.parser import parse_spec
from src.run_config import AtomGuard
from src.structures import build_structure
from src.translate.kernel import reduce_to_kernel

DATA = Path(__file__).parent / "data"


def load(name: str, atom_guard: AtomGuard = AtomGuard.LOOKBACK):
    """(surface spec, structure, kernel) for a spec file under tests/data."""
    surface = parse_spec((DATA / name).read_text())
    structure = build_structure(surface.structure, surface.constants)
    return surface, structure, reduce_to_kernel(surface, structure, atom_guard)


@pytest.fixture
def load_spec():
    return load
