"""
Exact ranks of integer matrices over Q (fraction-free elimination), over F_p and over finite fields given by their tables.
"""
import numpy as np

from .verifications import ValidationError, verify_prime


def verify_characteristic(char):
    if char != 0:
        try:
            verify_prime(char)
        except ValidationError as e:
            raise ValidationError('Field characteristic must be 0 or a prime, got {!r}.'.format(char)) from e


def rank_fraction_free(matrix):
    """
    Rank over Q by Bareiss elimination; every intermediate entry stays an integer

    Parameters
    ----------
    matrix : array_like
        Integer entries

    Returns
    -------
    int
    """
    rows = [[int(x) for x in row] for row in np.asarray(matrix).tolist()]
    if not rows or not rows[0]:
        return 0
    n_rows, n_cols = len(rows), len(rows[0])
    rank, previous = 0, 1
    for col in range(n_cols):
        pivot = next((i for i in range(rank, n_rows) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        top = rows[rank]
        for i in range(rank + 1, n_rows):
            row = rows[i]
            factor = row[col]
            rows[i] = [(top[col] * row[j] - factor * top[j]) // previous for j in range(n_cols)]
        previous = top[col]
        rank += 1
        if rank == n_rows:
            break
    return rank


def rank_mod_p(matrix, p):
    """Rank over F_p by Gaussian elimination on reduced residues."""
    a = np.array(matrix, dtype=np.int64) % p
    if a.size == 0:
        return 0
    n_rows, n_cols = a.shape
    rank = 0
    for col in range(n_cols):
        candidates = np.flatnonzero(a[rank:, col])
        if not len(candidates):
            continue
        pivot = rank + candidates[0]
        a[[rank, pivot]] = a[[pivot, rank]]
        a[rank] = (a[rank] * pow(int(a[rank, col]), -1, p)) % p
        below = np.flatnonzero(a[:, col])
        below = below[below != rank]
        a[below] = (a[below] - np.outer(a[below, col], a[rank])) % p
        rank += 1
        if rank == n_rows:
            break
    return rank


def exact_rank(matrix, char=0):
    verify_characteristic(char)
    if char == 0:
        return rank_fraction_free(matrix)
    return rank_mod_p(matrix, char)


def rank_over_field(field, matrix):
    """
    Rank over a finite field given as a RingSpec, by elimination on its arithmetic tables

    Parameters
    ----------
    field : RingSpec
        A single GF factor or Z_p
    matrix : list of list
        Element indices of the field
    """
    add, mul, neg, inverses = field.add_rows, field.mul_rows, field.neg, field.inverses
    a = [list(row) for row in matrix]
    if not a or not a[0]:
        return 0
    rank = 0
    for col in range(len(a[0])):
        pivot = next((i for i in range(rank, len(a)) if a[i][col]), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        scale = inverses[a[rank][col]]
        a[rank] = [mul[scale][x] for x in a[rank]]
        for i in range(len(a)):
            factor = a[i][col]
            if i != rank and factor:
                a[i] = [add[x][neg[mul[factor][y]]] for x, y in zip(a[i], a[rank])]
        rank += 1
        if rank == len(a):
            break
    return rank
