import pytest

from uproj.adjoint import AdjointConstruction
from uproj.liealg import chevalley_constants
from uproj.rootsystem import build_root_system

ADJOINT_SYSTEMS = [("A", 1), ("A", 2), ("A", 3), ("B", 2), ("G", 2)]

_basis_cache = {}
_adjoint_cache = {}


def get_basis(series, rank):
    key = (series, rank)
    if key not in _basis_cache:
        _basis_cache[key] = chevalley_constants(build_root_system(series, rank))
    return _basis_cache[key]


def get_adjoint(series, rank):
    key = (series, rank)
    if key not in _adjoint_cache:
        _adjoint_cache[key] = AdjointConstruction(get_basis(series, rank))
    return _adjoint_cache[key]


@pytest.fixture(scope="session")
def basis_of():
    return get_basis


@pytest.fixture(scope="session")
def adjoint_of():
    return get_adjoint
