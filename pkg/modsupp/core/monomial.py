"""
Monomial ideals of codes and their graded Betti numbers through the strands of the Taylor complex.
"""
import logging
from dataclasses import dataclass, field

import dask
import numpy as np
import pandas as pd

from .caps import resolve_caps
from .linalg import exact_rank, verify_characteristic
from .modules import big_M, format_vector
from .support import _blocks, _compute, leq, require_modular
from .verifications import MismatchError, ValidationError, verify_cap, verify_nonzero_code, verify_same_ring
from .weights import WeightProfile, compare_with_oracle, min_codewords

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class Monomial:
    """x^a for an exponent vector a in N^u."""
    exponents: tuple

    def __post_init__(self):
        exponents = tuple(int(x) for x in self.exponents)
        if any(x < 0 for x in exponents):
            raise ValidationError('Exponents must be nonnegative, got {}.'.format(list(exponents)))
        object.__setattr__(self, 'exponents', exponents)

    @property
    def degree(self):
        return sum(self.exponents)

    def to_text(self):
        return ' '.join(str(x) for x in self.exponents)

    def __str__(self):
        factors = ['x{}'.format(i + 1) if x == 1 else 'x{}^{}'.format(i + 1, x)
                   for i, x in enumerate(self.exponents) if x]
        return '*'.join(factors) or '1'


def _minimal_exponents(exponents):
    distinct = sorted(set(exponents))
    return [a for a in distinct if not any(b != a and leq(b, a) for b in distinct)]


class MonomialIdeal:
    """
    A monomial ideal of S = K[x_1, ..., x_u], kept by its minimal generators

    Attributes
    ----------
    generators : tuple of Monomial
        Minimal generators in decreasing lexicographic order of exponent vectors, so that
        x_1 > x_2 > ... as in the lex monomial order
    u : int
        Number of variables
    reduced : bool
        Whether the given generators contained redundant ones

    Examples
    --------
    >> ideal = MonomialIdeal([(1, 1, 0), (1, 0, 1), (0, 1, 1)])
    >> str(ideal)
    '(x1*x2, x1*x3, x2*x3)'
    """

    def __init__(self, generators, u=None):
        exponents = [tuple(int(x) for x in g) for g in generators]
        if not exponents:
            raise ValidationError('A monomial ideal needs at least one generator.')
        if u is None:
            u = len(exponents[0])
        bad = [g for g in exponents if len(g) != u]
        if bad:
            raise ValidationError('Monomial {} has {} exponents, expected {}.'.format(list(bad[0]), len(bad[0]), u))
        minimal = _minimal_exponents(exponents)
        if minimal == [(0,) * u]:
            raise ValidationError('The unit ideal has no Taylor resolution to compute.')
        self.u = u
        self.reduced = len(minimal) != len(exponents)
        self.generators = tuple(Monomial(a) for a in sorted(minimal, reverse=True))

    def __len__(self):
        return len(self.generators)

    def __eq__(self, other):
        if not isinstance(other, MonomialIdeal):
            return NotImplemented
        return self.u == other.u and self.generators == other.generators

    def __hash__(self):
        return hash((self.u, self.generators))

    def __str__(self):
        return '(' + ', '.join(str(g) for g in self.generators) + ')'

    def __repr__(self):
        return 'MonomialIdeal{}'.format(self)

    @property
    def array(self):
        return np.array([g.exponents for g in self.generators], dtype=np.int64)

    def to_text(self):
        return ''.join(g.to_text() + '\n' for g in self.generators)

    def to_json(self):
        return {'u': self.u, 'generators': [list(g.exponents) for g in self.generators], 'text': str(self)}


def ideal_from_text(text, u=None):
    """
    Parses one monomial per line as space-separated exponents; blank lines and # comments are skipped
    """
    generators = []
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        try:
            generators.append(tuple(int(x) for x in line.split()))
        except ValueError as e:
            raise ValidationError('Line {} is not a list of integer exponents: {!r}'.format(number, line)) from e
    return MonomialIdeal(generators, u)


def _ideal_from_minimal(minimal, sigma, unchecked=False):
    ideal = MonomialIdeal(minimal.supports, sigma.u)
    if ideal.reduced:
        # minimal supports are pairwise incomparable
        if not unchecked:
            raise MismatchError('Supports of minimal codewords are not minimal generators of I_C.')
        logger.warning('reduced the generators of I_C for %s', sigma.kind)
    return ideal


def ideal_of_code(code, sigma, unchecked=False, caps=None):
    """
    I_C = (x^sigma(v) : v in C nonzero), minimally generated by the supports of Min(C)

    Parameters
    ----------
    code : Code
        Nonzero
    sigma : SupportSpec
    unchecked : bool, default False
        Allows pseudo-supports

    Returns
    -------
    MonomialIdeal
    """
    verify_same_ring(code.ring, sigma.ring)
    verify_nonzero_code(code, 'ideal_of_code')
    return _ideal_from_minimal(min_codewords(code, sigma, unchecked, caps), sigma, unchecked)


@dataclass
class _TaylorLattice:
    """lcm of every subset of generators, subset A as the bit mask sum 2^i over i in A."""
    lcms: np.ndarray
    sizes: np.ndarray
    multidegrees: np.ndarray
    group_of: np.ndarray
    order: np.ndarray
    bounds: np.ndarray

    def strand(self, g):
        return self.order[self.bounds[g]:self.bounds[g + 1]]


def _taylor_lattice(ideal, caps=None):
    caps = resolve_caps(caps)
    t = len(ideal)
    verify_cap(t, caps, 'taylor_generators', 'number of minimal generators t')
    generators = ideal.array
    lcms = np.zeros((1 << t, ideal.u), dtype=np.int64)
    sizes = np.zeros(1 << t, dtype=np.int64)
    for k in range(t):
        size = 1 << k
        lcms[size:2 * size] = np.maximum(lcms[:size], generators[k])
        sizes[size:2 * size] = sizes[:size] + 1
    multidegrees, group_of, counts = np.unique(lcms, axis=0, return_inverse=True, return_counts=True)
    group_of = np.asarray(group_of).reshape(-1)
    order = np.argsort(group_of, kind='stable')
    bounds = np.concatenate([[0], np.cumsum(counts)])
    logger.debug('%d subsets of %d generators, %d distinct lcms', 1 << t, t, len(multidegrees))
    return _TaylorLattice(lcms, sizes, multidegrees, group_of, order, bounds)


def _strand_homology(g, masks, group_of, char):
    """Chain ranks and homology ranks of one strand, keyed by homological degree."""
    bases = {}
    for mask in masks:
        bases.setdefault(bin(mask).count('1'), []).append(mask)
    taylor = {r: len(basis) for r, basis in bases.items()}
    if len(masks) == 1:
        return taylor, dict(taylor)

    positions = {mask: j for basis in bases.values() for j, mask in enumerate(basis)}
    ranks = {}
    for r, basis in bases.items():
        lower = bases.get(r - 1)
        if r == 1 or not lower:
            continue
        matrix = np.zeros((len(lower), len(basis)), dtype=np.int64)
        for column, mask in enumerate(basis):
            bits = [x for x in range(mask.bit_length()) if mask >> x & 1]
            for k, bit in enumerate(bits):
                face = mask ^ (1 << bit)
                if group_of[face] == g:
                    matrix[positions[face], column] = 1 if k % 2 == 0 else -1
        ranks[r] = exact_rank(matrix, char)
    homology = {r: taylor[r] - ranks.get(r, 0) - ranks.get(r + 1, 0) for r in taylor}
    return taylor, {r: rank for r, rank in homology.items() if rank}


def _strand_block(items, group_of, char):
    return [(g, ) + _strand_homology(g, masks, group_of, char) for g, masks in items]


def _strands(ideal, char=0, caps=None, client=None):
    """
    Taylor chain ranks and Betti numbers of every strand, in increasing multidegree order

    Returns
    -------
    list of tuple
        (multidegree, taylor, betti) with taylor and betti mapping r to a rank
    """
    verify_characteristic(char)
    lattice = _taylor_lattice(ideal, caps)
    empty = lattice.group_of[0]
    groups = [g for g in range(len(lattice.multidegrees)) if g != empty]
    items = [(g, lattice.strand(g).tolist()) for g in groups]
    tasks = [dask.delayed(_strand_block)(items[start:stop], lattice.group_of, char)
             for start, stop in _blocks(len(items))]
    found = [hit for block in _compute(tasks, client) for hit in block]
    return [(tuple(int(x) for x in lattice.multidegrees[g]), taylor, homology) for g, taylor, homology in found]


@dataclass
class BettiTable:
    """
    Multigraded Betti numbers beta_{r,a} of S/I, r >= 1

    Attributes
    ----------
    multigraded : dict
        (r, a) -> beta_{r,a}, nonzero entries only
    char : int
        Characteristic of the coefficient field
    """
    multigraded: dict
    char: int = 0
    ideal: MonomialIdeal = field(default=None, repr=False)

    @property
    def coarse(self):
        coarse = {}
        for (r, a), rank in sorted(self.multigraded.items()):
            key = (r, sum(a))
            coarse[key] = coarse.get(key, 0) + rank
        return dict(sorted(coarse.items()))

    @property
    def pd(self):
        return max((r for r, _ in self.multigraded), default=0)

    @property
    def min_shifts(self):
        return [min(sum(a) for s, a in self.multigraded if s == r) for r in range(1, self.pd + 1)]

    def lowest_multidegree(self, r):
        """Lexicographically least multidegree of total degree b_r in homological degree r."""
        lowest = self.min_shifts[r - 1]
        return min(a for s, a in self.multigraded if s == r and sum(a) == lowest)

    def table(self):
        """Coarse Betti numbers with homological degree as rows and total degree as columns."""
        coarse = pd.Series(self.coarse, dtype='int64')
        coarse.index.names = ['r', 'degree']
        return coarse.unstack(fill_value=0)

    def to_json(self):
        coarse = {}
        for (r, degree), rank in self.coarse.items():
            coarse.setdefault(str(r), {})[str(degree)] = rank
        return {'pd': self.pd, 'coarse': coarse, 'min_shifts': self.min_shifts, 'char': self.char,
                'multigraded': [{'r': r, 'a': list(a), 'rank': rank}
                                for (r, a), rank in sorted(self.multigraded.items())]}


def betti(ideal, char=0, caps=None, client=None):
    """
    Graded Betti numbers of S/I from the strands of the Taylor complex

    For each lcm multidegree a, the strand has basis {A : lcm(m_A) = x^a} in homological degree
    |A| and differential e_A -> sum_k (-1)^(k+1) e_(A - i_k) over faces with the same lcm, A sorted
    ascending. beta_{r,a} = dim ker d_r - rank d_(r+1).

    Parameters
    ----------
    ideal : MonomialIdeal
    char : int, default 0
        0 for exact rational ranks by fraction-free elimination, or a prime p
    caps : dict, default None
    client : dask.distributed.Client, default None

    Returns
    -------
    BettiTable
    """
    multigraded = {}
    for a, _, homology in _strands(ideal, char, caps, client):
        for r, rank in homology.items():
            multigraded[(r, a)] = rank
    table = BettiTable(dict(sorted(multigraded.items())), char, ideal)
    logger.debug('betti numbers of %s over char %d: pd = %d', ideal, char, table.pd)
    return table


def taylor_ranks(ideal, caps=None):
    """Ranks of the Taylor complex per (r, total degree), r >= 1."""
    lattice = _taylor_lattice(ideal, caps)
    keys = np.stack([lattice.sizes[1:], lattice.lcms[1:].sum(axis=1)], axis=1)
    distinct, counts = np.unique(keys, axis=0, return_counts=True)
    return {(int(r), int(degree)): int(count) for (r, degree), count in zip(distinct.tolist(), counts)}


def taylor_cancellation_report(ideal, char=0, caps=None, client=None):
    """
    Taylor chain ranks against minimal Betti numbers for every (r, a)

    Returns
    -------
    pandas.DataFrame
        Columns r, multidegree, degree, taylor, betti, cancelled, sorted by r, degree, multidegree
    """
    rows = []
    for a, taylor, homology in _strands(ideal, char, caps, client):
        for r, rank in taylor.items():
            rows.append({'r': r, 'multidegree': a, 'degree': sum(a), 'taylor': rank,
                         'betti': homology.get(r, 0)})
    report = pd.DataFrame(rows, columns=['r', 'multidegree', 'degree', 'taylor', 'betti'])
    report['cancelled'] = report['taylor'] - report['betti']
    return report.sort_values(['r', 'degree', 'multidegree']).reset_index(drop=True)


def coarse_cancellations(report):
    """Cancellation report summed over multidegrees of equal total degree."""
    return report.groupby(['r', 'degree'], as_index=False)[['taylor', 'betti', 'cancelled']].sum()


def independent_sets_from_ideal(ideal, n=None, caps=None):
    """
    Subsets A of [n] with x^A not in I, as sorted 0-based tuples
    """
    caps = resolve_caps(caps)
    n = ideal.u if n is None else n
    if n != ideal.u:
        raise ValidationError('The ideal has {} variables, expected {}.'.format(ideal.u, n))
    verify_cap(n, caps, 'matroid_length', 'n')
    bits = 1 << np.arange(n, dtype=np.int64)
    squarefree = [g.exponents for g in ideal.generators if max(g.exponents) <= 1]
    subsets = np.arange(1 << n, dtype=np.int64)
    dependent = np.zeros(len(subsets), dtype=bool)
    if squarefree:
        masks = np.array(squarefree, dtype=np.int64) @ bits
        for start in range(0, len(subsets), 4096):
            block = subsets[start:start + 4096]
            dependent[start:start + len(block)] = ((masks[None, :] & ~block[:, None]) == 0).any(axis=1)
    result = [tuple(x for x in range(n) if int(a) >> x & 1) for a in np.flatnonzero(~dependent)]
    return sorted(result, key=lambda a: (len(a), a))


def weights_from_betti(code, sigma, char=0, unchecked=False, caps=None, client=None):
    """
    M(C) = pd(S/I_C) and d_r(C) = b_r, the least total degree in homological degree r

    When pd(S/I_C) differs from M(C), computed from the code, the profile carries a mismatch
    note instead of being returned as if the route held. Unchecked runs on supports not known
    to be modular are also compared with the submodule oracle.

    Returns
    -------
    WeightProfile
        Witnesses list the minimal codeword representatives below the lowest multidegree
    """
    verify_same_ring(code.ring, sigma.ring)
    verify_nonzero_code(code, 'weights_from_betti')
    require_modular(sigma, caps, unchecked)
    minimal = min_codewords(code, sigma, unchecked=True, caps=caps)
    ideal = _ideal_from_minimal(minimal, sigma, unchecked)
    table = betti(ideal, char, caps, client)

    witnesses = []
    for r in range(1, table.pd + 1):
        a = table.lowest_multidegree(r)
        witnesses.append([format_vector(code.ring, v) for v, value in minimal.representatives if leq(value, a)])
    profile = WeightProfile(table.pd, table.min_shifts, witnesses, 'betti')
    M = big_M(code)
    if table.pd != M:
        profile.mismatch = 'pd(S/I_C) = {} differs from M(C) = {}'.format(table.pd, M)
        logger.warning(profile.mismatch)
    return compare_with_oracle(profile, code, sigma, unchecked, caps)
