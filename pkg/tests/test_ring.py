import pytest

from modsupp.core.ring import (default_modulus, galois_field, idempotents, inverse, is_irreducible, is_unit,
                               make_ring, radical_data, ring_axioms_hold)
from modsupp.core.verifications import CapExceededError, ValidationError

RINGS = [
    {'kind': 'Zm', 'm': 6},
    {'kind': 'Zm', 'm': 12},
    {'kind': 'Zpe', 'p': 2, 'e': 3},
    {'kind': 'GF', 'p': 2, 'm': 2},
    {'kind': 'GF', 'p': 3, 'm': 2},
    {'kind': 'product', 'factors': [{'kind': 'Zpe', 'p': 2, 'e': 2}, {'kind': 'GF', 'p': 3, 'm': 1}]},
]


@pytest.mark.parametrize('description', RINGS)
def test_ring_axioms(description):
    assert ring_axioms_hold(make_ring(description))


def test_zm_factors(z6):
    assert [str(factor) for factor in z6.factors] == ['Z_2', 'Z_3']
    assert z6.size == 6
    assert z6.ell == 2
    assert str(z6) == 'Z_6'


def test_zm_labels_round_trip(z6):
    assert sorted(z6.label(index) for index in range(6)) == list(range(6))
    for k in range(6):
        assert z6.label(z6.parse(k)) == k
    assert z6.parse(-1) == z6.parse(5)


def test_crt_residues(z6):
    assert z6.element(5).residues == (1, 2)
    assert z6.element([1, 2]) == z6.element(5)


def test_arithmetic(z6):
    assert int(z6.element(3) * z6.element(2)) == 0
    assert int(z6.element(5) + z6.element(4)) == 3
    assert int(z6.element(1) - z6.element(2)) == 5
    assert int(-z6.element(1)) == 5


def test_arithmetic_across_rings(z4, z6):
    with pytest.raises(ValidationError):
        z4.element(1) + z6.element(1)


def test_units_and_inverses(z6):
    assert is_unit(z6.element(5))
    assert int(inverse(z6.element(5))) == 5
    with pytest.raises(ValidationError):
        inverse(z6.element(2))


def test_idempotents(z6):
    assert [int(e) for e in idempotents(z6)] == [3, 4]
    for e in idempotents(z6):
        assert e * e == e


def test_radical_data(z4, z6):
    data = radical_data(z4)
    assert data.alpha == (2,)
    assert data.epsilon == (2,)
    assert data.residue_field_sizes == (2,)
    assert radical_data(z6).epsilon == (1, 1)


def test_gf4_multiplication():
    ring = galois_field(4)
    # x * x = x + 1 modulo x^2 + x + 1
    assert ring.mul_rows[2][2] == 3
    assert all(is_unit(ring.element(a)) for a in range(1, 4))
    assert ring.element([(0, 1)]) == ring.element(2)


def test_default_modulus():
    assert default_modulus(2, 2) == (1, 1, 1)
    assert default_modulus(5, 2) == (2, 0, 1)
    assert not is_irreducible((1, 0, 1), 5)
    assert is_irreducible((2, 0, 1), 5)


def test_product_ring_labels():
    ring = make_ring({'kind': 'product', 'factors': [{'kind': 'Zpe', 'p': 2, 'e': 2},
                                                     {'kind': 'Zpe', 'p': 3, 'e': 2}]})
    assert ring.size == 36
    element = ring.element([3, 5])
    assert element.residues == (3, 5)
    assert int(element) == 3 + 5 * 4


def test_json_round_trip(z6):
    assert make_ring(z6.to_json()) == z6
    gf9 = make_ring({'kind': 'GF', 'p': 3, 'm': 2})
    assert make_ring(gf9.to_json()) == gf9


@pytest.mark.parametrize('description', [
    {'kind': 'Zm', 'm': 1},
    {'kind': 'Zm', 'm': 'six'},
    {'kind': 'Zpe', 'p': 4, 'e': 1},
    {'kind': 'Zpe', 'p': 2, 'e': 0},
    {'kind': 'GF', 'p': 2, 'm': 2, 'modulus': [1, 0, 1]},
    {'kind': 'GF', 'p': 2, 'm': 2, 'modulus': [1, 1]},
    {'kind': 'product', 'factors': []},
    {'kind': 'product', 'factors': [5]},
    {'kind': 'product', 'factors': 5},
    {'kind': 'GF', 'p': 2, 'm': 2, 'modulus': 'x'},
    {'kind': 'matrix'},
    {'m': 6},
])
def test_invalid_rings(description):
    with pytest.raises(ValidationError):
        make_ring(description)


def test_ring_table_cap():
    with pytest.raises(CapExceededError):
        make_ring({'kind': 'Zm', 'm': 2000})
    assert make_ring({'kind': 'Zm', 'm': 2000}, caps={'ring_table': 4096}).size == 2000


def test_galois_field_needs_prime_power():
    with pytest.raises(ValidationError):
        galois_field(6)


@pytest.mark.parametrize('description', RINGS + [{'kind': 'Zm', 'm': 30}])
def test_units_have_inverses(description):
    ring = make_ring(description)
    for a in range(ring.size):
        has_inverse = any(ring.mul_rows[a][b] == ring.one for b in range(ring.size))
        assert ring.units[a] == has_inverse


@pytest.mark.parametrize('description', RINGS + [{'kind': 'Zm', 'm': 30}])
def test_radical_is_jacobson(description):
    ring = make_ring(description)
    add, mul = ring.add_rows, ring.mul_rows
    jacobson = {r for r in range(ring.size)
                if all(ring.units[add[ring.one][mul[r][s]]] for s in range(ring.size))}
    assert jacobson == {mul[ring.alpha][s] for s in range(ring.size)}


@pytest.mark.parametrize('description', RINGS + [{'kind': 'Zm', 'm': 30}])
def test_idempotents_are_complete_and_orthogonal(description):
    ring = make_ring(description)
    es = idempotents(ring)
    assert len(es) == ring.ell
    total = es[0]
    for e in es[1:]:
        total = total + e
    assert total.index == ring.one
    for i, e in enumerate(es):
        assert (e * e) == e
        for f in es[i + 1:]:
            assert (e * f).index == 0
