import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix

from modsupp.core.linalg import exact_rank, rank_fraction_free, rank_mod_p, rank_over_field, verify_characteristic
from modsupp.core.ring import galois_field
from modsupp.core.verifications import ValidationError


@pytest.mark.parametrize('matrix, rank', [
    ([[1, 2], [2, 4]], 1),
    ([[2, 4], [1, 3]], 2),
    (np.eye(3, dtype=int), 3),
    (np.zeros((2, 3), dtype=int), 0),
    (np.zeros((0, 3), dtype=int), 0),
    ([[0, 1, 2], [0, 2, 4], [1, 0, 0]], 2),
])
def test_rank_fraction_free(matrix, rank):
    assert rank_fraction_free(matrix) == rank


def test_characteristic_changes_rank():
    matrix = [[1, 1], [1, -1]]
    assert exact_rank(matrix, 0) == 2
    assert exact_rank(matrix, 2) == 1
    assert exact_rank(matrix, 3) == 2


def test_rank_mod_p():
    assert rank_mod_p([[3, 6], [1, 2]], 3) == 1
    assert rank_mod_p([[1, 2, 3], [4, 5, 6], [7, 8, 9]], 5) == 2
    assert rank_mod_p(np.zeros((0, 2), dtype=int), 7) == 0


@pytest.mark.parametrize('char', [1, 4, -3, 'two'])
def test_invalid_characteristic(char):
    with pytest.raises(ValidationError):
        verify_characteristic(char)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(lambda cols: st.lists(st.lists(st.integers(-3, 3), min_size=cols, max_size=cols),
                                                       min_size=1, max_size=5)))
def test_rank_matches_sympy(rows):
    assert rank_fraction_free(rows) == Matrix(rows).rank()
    assert rank_mod_p(rows, 2) <= rank_fraction_free(rows)


def test_rank_over_gf4():
    gf4 = galois_field(4)
    # the second row is x times the first
    assert rank_over_field(gf4, [[1, 2], [2, 3]]) == 1
    assert rank_over_field(gf4, [[1, 2], [0, 3], [1, 1]]) == 2
    assert rank_over_field(gf4, [[0, 0]]) == 0
    assert rank_over_field(galois_field(5), [[1, 2, 3], [2, 4, 1]]) == 1
    assert rank_over_field(galois_field(5), [[1, 2, 3], [2, 4, 0]]) == 2


@given(st.lists(st.lists(st.integers(0, 2), min_size=3, max_size=3), min_size=1, max_size=4))
def test_rank_over_prime_field_matches_mod_p(rows):
    assert rank_over_field(galois_field(3), rows) == rank_mod_p(rows, 3)
