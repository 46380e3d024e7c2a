import pytest

from modsupp.core.modules import Code
from modsupp.core.ring import galois_field, make_ring
from modsupp.core.support import LeeWeight, TableSupport, support_from_json

Z6_SUPPORT = {'kind': 'compose_linear', 'matrix': [[3, 4, 1], [5, 3, 3], [2, 4, 5]],
              'inner': {'kind': 'pir', 'values': [[[2]], [[1]]]}}

EXPATO_ENTRIES = {'0,0': [0, 0], '1,0': [1, 1], '0,1': [0, 1], '1,1': [1, 1]}


@pytest.fixture
def z4():
    return make_ring({'kind': 'Zm', 'm': 4})


@pytest.fixture
def z6():
    return make_ring({'kind': 'Zm', 'm': 6})


@pytest.fixture
def f2():
    return galois_field(2)


@pytest.fixture
def f3():
    return galois_field(3)


@pytest.fixture
def z6_sigma(z6):
    return support_from_json(Z6_SUPPORT, z6, 3)


@pytest.fixture
def z6_code(z6):
    return Code.from_labels(z6, [[3, 1, 2], [2, 4, 3]])


@pytest.fixture
def even_weight(f2):
    return Code.from_labels(f2, [[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1]])


@pytest.fixture
def lee_code(z4):
    return Code.from_labels(z4, [[1, 1, 0], [3, 2, 1]])


@pytest.fixture
def lee(z4):
    return LeeWeight(z4, 3)


@pytest.fixture
def expato(f2):
    return TableSupport(f2, EXPATO_ENTRIES)


@pytest.fixture(autouse=True)
def no_caps_env(monkeypatch):
    monkeypatch.delenv('MODSUPP_CAPS', raising=False)
