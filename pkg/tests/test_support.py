import numpy as np
import pytest

from modsupp.core.modules import Code
from modsupp.core.ring import galois_field, make_ring, zm
from modsupp.core.support import (ChainRingSupport, ChainSupport, ComposeLinear, Concat, Drop, Duplicate,
                                  HammingSupport, InsertZero, LeeWeight, Permute, PirSupport, Product, Scale,
                                  TableSupport, all_vectors, code_support, decompose_modular, evaluate,
                                  factor_join_holds, is_modular, is_support, join_over_codewords,
                                  pir_values_modular, require_modular, support_from_json, unit_eliminator,
                                  vector_positions, weight)
from modsupp.core.verifications import CapExceededError, HypothesisError, ValidationError
from modsupp.core.weights import gen_weights_fast


def test_all_vectors_label_order(z6):
    vectors = all_vectors(z6, 2)
    assert [z6.label(a) for a in vectors[7]] == [1, 1]
    assert np.array_equal(vector_positions(z6, vectors), np.arange(36))


def test_omega_values(z6):
    sigma = PirSupport(z6, 1, [[[2]], [[1]]])
    assert evaluate(sigma, [z6.element(3)]) == (2, 0)
    assert evaluate(sigma, [z6.element(2)]) == (0, 1)
    assert evaluate(sigma, [z6.element(5)]) == (2, 1)
    assert weight(sigma, [z6.element(0)]) == 0


def test_chain_ring_values(z4):
    sigma = ChainRingSupport(z4, 1)
    assert [sigma((a,))[0] for a in range(4)] == [0, 2, 1, 2]
    assert is_modular(sigma) == (True, None)


def test_z6_support_is_modular(z6_sigma):
    assert is_support(z6_sigma) == (True, None)
    assert is_modular(z6_sigma) == (True, None)
    assert factor_join_holds(z6_sigma)


def test_lee_fails_triangle_axiom(z4):
    holds, witness = is_support(LeeWeight(z4, 1))
    assert not holds
    assert witness == {'axiom': 'P3', 'v': [1], 'w': [1], 'r': None}


def test_lee_weight_needs_integers_mod_m(z6):
    assert LeeWeight(z6, 1)((z6.parse(4),)) == (2,)
    assert LeeWeight(make_ring({'kind': 'Zpe', 'p': 3, 'e': 2}), 1)((7,)) == (2,)
    with pytest.raises(ValidationError):
        LeeWeight(galois_field(4), 1)
    two_factors = make_ring({'kind': 'product', 'factors': [{'kind': 'Zpe', 'p': 2}, {'kind': 'Zpe', 'p': 3}]})
    with pytest.raises(ValidationError):
        LeeWeight(two_factors, 1)


def test_first_axiom_witness(f2):
    holds, witness = is_support(TableSupport(f2, {'0': [0], '1': [0]}))
    assert not holds
    assert witness == {'axiom': 'P1', 'v': [1], 'w': None, 'r': None}


def test_scalar_axiom_witness():
    # multiplication by the primitive element is not additive over GF(4)
    gf4 = galois_field(4)
    holds, witness = is_support(TableSupport(gf4, {'0': [0], '1': [1], '2': [2], '3': [2]}))
    assert not holds
    assert witness == {'axiom': 'P2', 'v': [1], 'w': None, 'r': 2}


def test_expato_is_not_modular(expato):
    assert is_support(expato) == (True, None)
    assert is_modular(expato) == (False, {'v': [0, 1], 'w': [1, 0], 'i': 1})


def test_derived_properties_without_modularity(expato):
    ring = expato.ring
    vectors = [tuple(v) for v in all_vectors(ring, 2).tolist()]
    for v in vectors:
        for r in ring.unit_list:
            assert expato(ring.vscale(r, v)) == expato(v)
        for w in vectors:
            total = expato(ring.vadd(v, w))
            for i, (a, b) in enumerate(zip(expato(v), expato(w))):
                if a == 0:
                    assert (total[i] == 0) == (b == 0)


def test_modular_needs_support(z4):
    with pytest.raises(HypothesisError):
        is_modular(LeeWeight(z4, 1))
    holds, _ = is_modular(LeeWeight(z4, 1), unchecked=True)
    assert holds in (True, False)


@pytest.mark.parametrize('m, ideals, modular', [
    (4, [[0], [2]], True),
    (4, [[0]], False),
    (6, [[0], [2]], False),
])
def test_chain_supports(m, ideals, modular):
    sigma = ChainSupport(zm(m), 1, ideals)
    assert is_support(sigma)[0]
    assert is_modular(sigma)[0] is modular


@pytest.mark.parametrize('ideals', [[[2]], [[0], [2], [2]], []])
def test_invalid_chains(z4, ideals):
    with pytest.raises(ValidationError):
        ChainSupport(z4, 1, ideals)


def test_pir_closed_form(z4):
    assert pir_values_modular([[[2]], [[1]]])
    assert pir_values_modular([[[2], [1]]])
    assert not pir_values_modular([[[2], [2]]])
    assert not pir_values_modular([[[3, 1], [2, 1]]])
    assert not pir_values_modular([[[1], [0]]])
    assert not pir_values_modular([[[]]])

    strict = PirSupport(z4, 1, [[[2], [1]]])
    assert strict.known_modular()
    assert is_modular(strict) == (True, None)
    flat = PirSupport(z4, 1, [[[1], [1]]])
    assert flat.known_modular() is None
    assert is_modular(flat) == (False, {'v': [1], 'w': [2], 'i': 0})


@pytest.mark.parametrize('values', [[[[1]]], [[[2], [1]], [[1]]], [[[1], [2]]], [[[1], [-1]]]])
def test_invalid_pir_values(z4, values):
    with pytest.raises(ValidationError):
        PirSupport(z4, 1, values)


def _combinators(f3):
    inner = HammingSupport(f3, 2)
    return [
        Permute(inner, [1, 0]),
        Scale(inner, 0, 3),
        Duplicate(inner, 1),
        InsertZero(inner, 0),
        Drop(Duplicate(inner, 0), 0),
        Concat([inner, ChainRingSupport(f3, 2)]),
        Product([HammingSupport(f3, 1), ChainRingSupport(f3, 1)]),
        ComposeLinear(inner, [[1, 1], [0, 2]]),
        Scale(Permute(Duplicate(inner, 0), [2, 0, 1]), 1, 2),
    ]


def test_combinators_preserve_modularity(f3):
    for sigma in _combinators(f3):
        assert is_support(sigma) == (True, None), sigma
        assert is_modular(sigma) == (True, None), sigma


def test_json_round_trip(f3, z6_sigma):
    for sigma in _combinators(f3) + [z6_sigma]:
        rebuilt = support_from_json(sigma.to_json(), sigma.ring, sigma.n)
        assert np.array_equal(rebuilt.value_table(), sigma.value_table())


def test_combinator_values(f3):
    inner = HammingSupport(f3, 2)
    weighted = TableSupport.from_function(f3, 2, lambda v: (int(v[0] != 0), 2 * int(v[1] != 0)))
    assert Permute(weighted, [1, 0])((1, 1)) == (2, 1)
    assert Duplicate(inner, 0)((1, 0)) == (1, 1, 0)
    assert InsertZero(inner, 0)((1, 1)) == (1, 0, 1)
    assert Scale(inner, 1, 5)((0, 2)) == (0, 5)
    assert Drop(inner, 0)((1, 1)) == (1,)


@pytest.mark.parametrize('build', [
    lambda inner: Permute(inner, [0, 0]),
    lambda inner: Scale(inner, 0, 0),
    lambda inner: Scale(inner, 2, 1),
    lambda inner: Duplicate(inner, -1),
    lambda inner: ComposeLinear(inner, [[1, 1]]),
])
def test_invalid_combinators(f3, build):
    with pytest.raises(ValidationError):
        build(HammingSupport(f3, 2))


def test_compose_linear_needs_injective_map(z4):
    with pytest.raises(ValidationError) as info:
        ComposeLinear(HammingSupport(z4, 1), [[2]])
    assert info.value.witness == [2]


def _diagonal(n, entries):
    return [[entries.get(i, 1) if i == j else (2 if j == i + 1 else 0) for j in range(n)] for i in range(n)]


@pytest.mark.parametrize('ring', [galois_field(4), zm(4), zm(12)])
def test_compose_linear_rank_over_residue_fields(ring):
    n = 9 if ring.size == 4 else 5
    inner = HammingSupport(ring, n)
    unit = ring.label(ring.unit_list[-1])
    assert ComposeLinear(inner, _diagonal(n, {0: unit})).n == n
    with pytest.raises(ValidationError):
        ComposeLinear(inner, _diagonal(n, {n - 1: 2 if ring.modulus_m else 0}))
    with pytest.raises(ValidationError):
        ComposeLinear(inner, [row[:-1] + [0] for row in _diagonal(n, {})])


def test_table_needs_every_vector(f2):
    with pytest.raises(ValidationError):
        TableSupport(f2, {'0,0': [0], '1,0': [1]})
    with pytest.raises(ValidationError):
        TableSupport(f2, {'0': [0], '1': [-1]})


def test_unknown_kind(z6):
    with pytest.raises(ValidationError):
        support_from_json({'kind': 'rank'}, z6, 2)


@pytest.mark.parametrize('description', [
    {'kind': 'table', 'entries': {'a': [0], '1': [1]}},
    {'kind': 'table', 'entries': [[0], [1]]},
    {'kind': 'table', 'entries': {'0': 0, '1': [1]}},
    {'kind': 'product', 'parts': [5]},
    {'kind': 'product', 'parts': [{'kind': 'hamming', 'n': 0}]},
    {'kind': 'concat', 'parts': {'kind': 'hamming'}},
    {'kind': 'compose_linear', 'matrix': 1, 'inner': {'kind': 'hamming'}},
    {'kind': 'pir', 'values': [[['1']]]},
    {'kind': 'permute', 's': 0, 'inner': {'kind': 'hamming'}},
])
def test_malformed_descriptions(f2, description):
    with pytest.raises(ValidationError):
        support_from_json(description, f2, 1)


def test_exhaustive_cap(z6):
    with pytest.raises(CapExceededError):
        is_support(HammingSupport(z6, 7))


def test_support_check_bounded_by_vector_count(f2):
    # the pair scan is bounded through |R|^n only
    caps = {'modular_work': 256, 'exhaustive_vectors': 16}
    assert is_support(HammingSupport(f2, 4), caps) == (True, None)
    with pytest.raises(CapExceededError):
        is_support(HammingSupport(f2, 5), caps)


def test_require_modular(z4, expato):
    with pytest.raises(HypothesisError):
        require_modular(LeeWeight(z4, 2))
    with pytest.raises(HypothesisError) as info:
        require_modular(expato)
    assert info.value.witness == {'v': [0, 1], 'w': [1, 0], 'i': 1}
    require_modular(expato, unchecked=True)


def test_decompose_modular(z6):
    decomposition = decompose_modular(PirSupport(z6, 1, [[[2]], [[1]]]))
    assert decomposition.partition == [[0], [1]]
    first, second = decomposition.supports
    assert first((1,)) == (2,)
    assert second((1,)) == (1,)
    assert second((2,)) == (1,)


def test_decompose_z6_example(z6_sigma):
    decomposition = decompose_modular(z6_sigma)
    assert decomposition.partition == [[0, 2, 4], [1, 3, 5]]
    assert [support.n for support in decomposition.supports] == [3, 3]


def test_unit_eliminator(f3):
    sigma = HammingSupport(f3, 2)
    assert unit_eliminator(sigma, (1, 1), (2, 0), 0) == 2
    with pytest.raises(HypothesisError):
        unit_eliminator(sigma, (0, 1), (2, 0), 0)


def test_code_support(z6_sigma, z6_code):
    assert code_support(z6_sigma, z6_code) == (2, 1, 2, 1, 2, 1)


def test_pseudo_support_join(z4):
    lee = LeeWeight(z4, 1)
    code = Code.from_labels(z4, [[1]])
    with pytest.raises(HypothesisError):
        code_support(lee, code)
    assert code_support(lee, code, unchecked=True) == (1,)
    assert join_over_codewords(lee, code) == (2,)


def test_pir_zero_bottom_value_is_not_trusted(z4):
    sigma = PirSupport(z4, 1, [[[1], [0]]])
    assert sigma.known_modular() is not True
    assert is_support(sigma) == (False, {'axiom': 'P1', 'v': [2], 'w': None, 'r': None})
    with pytest.raises(HypothesisError):
        gen_weights_fast(Code.from_labels(z4, [[1]]), sigma)
