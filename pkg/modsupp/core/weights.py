"""
Minimal and maximal codewords, generalized weights and the matroid of a code.
"""
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction

import dask
import numpy as np
from sympy import factorint

from .modules import (Code, all_submodules, big_M, decompose, format_vector, greedy_generators, label_key,
                      minimal_genset_sizes, span)
from .ring import galois_field
from .support import (HammingSupport, decompose_modular, join, join_over_codewords, leq, require_modular,
                      require_support, unit_eliminator)
from .verifications import (CapExceededError, HypothesisError, MismatchError, ValidationError, verify_binary_values,
                            verify_cap, verify_field, verify_nonzero_code, verify_same_ring)

logger = logging.getLogger(__name__)


@dataclass
class MinimalCodewordSet:
    """
    Min(C) grouped by support

    Attributes
    ----------
    representatives : list of tuple
        (vector, support value) with the least vector in label order of each minimal support
    members : dict
        Support value -> every minimal codeword with that support
    """
    ring: object = field(repr=False)
    representatives: list
    members: dict

    @property
    def vectors(self):
        return [v for v, _ in self.representatives]

    @property
    def supports(self):
        return [value for _, value in self.representatives]

    @property
    def all_members(self):
        return sorted((v for words in self.members.values() for v in words), key=lambda v: label_key(self.ring, v))

    def to_json(self, all_members=False):
        result = {'representatives': [{'vector': format_vector(self.ring, v), 'support': list(value)}
                                      for v, value in self.representatives]}
        if all_members:
            result['members'] = [format_vector(self.ring, v) for v in self.all_members]
        return result


@dataclass
class WeightProfile:
    """
    Generalized weights d_1, ..., d_M of a code

    Attributes
    ----------
    M : int
    d : list of int
    witnesses : list
        Generators of one subcode achieving each d_r, in integer form
    method : str
        "bruteforce-min-subcodes", "bruteforce-all-submodules", "betti" or "factors"
    mismatch : str, default None
        Set when the route found its own result inconsistent with M(C) or, on an unchecked run,
        with the submodule oracle
    """
    M: int
    d: list
    witnesses: list
    method: str
    mismatch: str = None

    def agrees(self, other):
        return self.M == other.M and list(self.d) == list(other.d)

    def to_json(self):
        result = {'method': self.method, 'M': self.M, 'd': list(self.d), 'witnesses': self.witnesses}
        if self.mismatch is not None:
            result['mismatch'] = self.mismatch
        return result


def _nonzero_array(code):
    words = code.nonzero_codewords
    return words, np.array(words, dtype=np.int64).reshape(len(words), code.n)


def _minimal_rows(values):
    """Mask of rows of a distinct-value array not strictly above another row."""
    minimal = np.ones(len(values), dtype=bool)
    for start in range(0, len(values), 1024):
        block = values[start:start + 1024]
        below = (values[:, None, :] <= block[None, :, :]).all(axis=2)
        below[start + np.arange(len(block)), np.arange(len(block))] = False
        minimal[start:start + len(block)] = ~below.any(axis=0)
    return minimal


def _maximal_rows(values):
    maximal = np.ones(len(values), dtype=bool)
    for start in range(0, len(values), 1024):
        block = values[start:start + 1024]
        above = (block[None, :, :] <= values[:, None, :]).all(axis=2)
        above[start + np.arange(len(block)), np.arange(len(block))] = False
        maximal[start:start + len(block)] = ~above.any(axis=0)
    return maximal


def min_codewords(code, sigma, unchecked=False, caps=None):
    """
    Nonzero codewords whose support is minimal among the supports of nonzero codewords

    Parameters
    ----------
    code : Code
    sigma : SupportSpec
    unchecked : bool, default False
        Allows pseudo-supports and supports failing the axioms

    Returns
    -------
    MinimalCodewordSet
    """
    verify_same_ring(code.ring, sigma.ring)
    verify_nonzero_code(code, 'min_codewords')
    require_support(sigma, caps, unchecked)
    ring = code.ring
    words, array = _nonzero_array(code)
    values = sigma.evaluate_many(array)
    distinct, inverse = np.unique(values, axis=0, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    minimal = _minimal_rows(distinct)

    members = {}
    for row, word in zip(inverse.tolist(), words):
        if minimal[row]:
            members.setdefault(tuple(int(x) for x in distinct[row]), []).append(word)
    representatives = []
    for value, group in members.items():
        group.sort(key=lambda v: label_key(ring, v))
        representatives.append((group[0], value))
    representatives.sort(key=lambda item: label_key(ring, item[0]))
    logger.debug('%d minimal supports, %d minimal codewords', len(members), sum(map(len, members.values())))
    return MinimalCodewordSet(ring, representatives, members)


def min_weight(code, sigma):
    verify_nonzero_code(code, 'min_weight')
    return int(sigma.evaluate_many(_nonzero_array(code)[1]).sum(axis=1).min())


def max_weight(code, sigma):
    words = np.array(sorted(code.codewords), dtype=np.int64)
    return int(sigma.evaluate_many(words).sum(axis=1).max())


def _is_independent(ring, n, vectors):
    """No vector lies in the span of the others."""
    return all(vectors[i] not in span(ring, n, vectors[:i] + vectors[i + 1:]) for i in range(len(vectors)))


def minimal_subcodes(code, sigma, r, unchecked=False, caps=None):
    """Subcodes generated by r minimal codeword representatives forming a minimal generating set."""
    minimal = min_codewords(code, sigma, unchecked, caps)
    subcodes = []
    for combination in itertools.combinations(minimal.vectors, r):
        if _is_independent(code.ring, code.n, list(combination)):
            subcodes.append(Code(code.ring, code.n, combination, caps=code.caps))
    return subcodes


def _fast_search(code, values, vectors, r):
    """Least |join| over independent r-subsets of the representatives with M(D) = r."""
    ring, n = code.ring, code.n
    best = [None, None]

    def search(start, chosen, current):
        weight = sum(current)
        if best[0] is not None and weight >= best[0]:
            return
        if len(chosen) == r:
            generators = [vectors[j] for j in chosen]
            if _is_independent(ring, n, generators) and big_M(Code(ring, n, generators, caps=code.caps)) == r:
                best[0], best[1] = weight, generators
            return
        for j in range(start, len(vectors) - (r - len(chosen)) + 1):
            search(j + 1, chosen + [j], join(current, values[j]))

    search(0, [], (0,) * len(values[0]))
    return best[0], best[1]


def gen_weights_fast(code, sigma, unchecked=False, caps=None, client=None):
    """
    d_r(C) as the least |sigma(D)| over subcodes D minimally generated by r minimal codewords

    Parameters
    ----------
    code : Code
    sigma : SupportSpec
        Must be modular unless unchecked
    client : dask.distributed.Client, default None

    Returns
    -------
    WeightProfile
    """
    verify_same_ring(code.ring, sigma.ring)
    verify_nonzero_code(code, 'gen_weights_fast')
    require_modular(sigma, caps, unchecked)
    M = big_M(code)
    minimal = min_codewords(code, sigma, unchecked=True, caps=caps)
    vectors, values = minimal.vectors, minimal.supports

    tasks = [dask.delayed(_fast_search)(code, values, vectors, r) for r in range(1, M + 1)]
    found = client.gather(client.compute(tasks)) if client is not None else dask.compute(*tasks)
    d, witnesses = [], []
    for r, (weight, generators) in zip(range(1, M + 1), found):
        if weight is None:
            raise MismatchError('No subcode of {} minimal codewords has M = {}.'.format(r, r))
        d.append(weight)
        witnesses.append([format_vector(code.ring, g) for g in generators])
    profile = WeightProfile(M, d, witnesses, 'bruteforce-min-subcodes')
    return compare_with_oracle(profile, code, sigma, unchecked, caps)


def gen_weights_oracle(code, sigma, unchecked=False, caps=None):
    """
    d_r(C) = min{|sigma(D)| : D submodule of C, M(D) >= r} over every submodule of C

    sigma(D) is the join over all codewords of D, which is also the right value for
    pseudo-supports. When |C| is within the genset_search cap the minimal generating set
    formulations are evaluated too and must agree.
    """
    verify_same_ring(code.ring, sigma.ring)
    verify_nonzero_code(code, 'gen_weights_oracle')
    require_support(sigma, caps, unchecked)
    ring = code.ring
    M = big_M(code)
    subcodes = all_submodules(code)
    rows = []
    for sub in subcodes:
        if sub.is_zero():
            continue
        generators = sorted(sub.generators, key=lambda v: label_key(ring, v))
        rows.append((sum(join_over_codewords(sigma, sub)), big_M(sub), sub, generators))

    def minimum(predicate):
        candidates = [(weight, [label_key(ring, g) for g in generators], generators)
                      for weight, m, sub, generators in rows if predicate(m, sub)]
        weight, _, generators = min(candidates, key=lambda item: (item[0], item[1]))
        return weight, [format_vector(ring, g) for g in generators]

    d, witnesses = [], []
    for r in range(1, M + 1):
        weight, witness = minimum(lambda m, sub: m >= r)
        d.append(weight)
        witnesses.append(witness)

    if len(code.codewords) <= code.caps['genset_search']:
        try:
            sizes = {id(sub): minimal_genset_sizes(sub) for _, _, sub, _ in rows}
        except CapExceededError:
            logger.info('skipping the minimal generating set cross-check, genset_size cap reached')
        else:
            for r in range(1, M + 1):
                at_least = minimum(lambda m, sub: max(sizes[id(sub)]) >= r)[0]
                exactly = minimum(lambda m, sub: r in sizes[id(sub)])[0]
                if not at_least == exactly == d[r - 1]:
                    raise MismatchError('d_{} differs between formulations: {}, {}, {}.'.format(
                        r, d[r - 1], at_least, exactly))
    return WeightProfile(M, d, witnesses, 'bruteforce-all-submodules')


def compare_with_oracle(profile, code, sigma, unchecked=False, caps=None):
    """
    Flags an unchecked profile that the submodule oracle contradicts

    Only runs when unchecked and sigma is a pseudo-support or not provably modular; the
    routes other than the oracle are then unreliable. Leaves an existing mismatch note.
    """
    if not unchecked or profile.mismatch is not None:
        return profile
    if not sigma.pseudo and sigma.known_modular():
        return profile
    try:
        oracle = gen_weights_oracle(code, sigma, unchecked=True, caps=caps)
    except (CapExceededError, MismatchError) as e:
        logger.warning('%s route unchecked and not compared with the oracle: %s', profile.method, e)
        return profile
    if list(oracle.d) != list(profile.d):
        profile.mismatch = '{} gives d = {}, the submodule oracle gives d = {}'.format(
            profile.method, list(profile.d), list(oracle.d))
        logger.warning(profile.mismatch)
    return profile


def _in_ambient_socle(ring, v):
    return ring.vscale(ring.alpha, v) == (0,) * len(v)


def special_genset(code, sigma, unchecked=False, caps=None):
    """
    Minimal generating set {v_1, ..., v_j} of a code inside 0:_{R^n} J with private
    coordinates k_i: sigma(v_i)_{k_i} != 0 and sigma(v_h)_{k_i} = 0 for h != i

    Built by elimination from a basis of each factor component, j = M(D).

    Returns
    -------
    tuple
        (vectors, coordinates)
    """
    verify_same_ring(code.ring, sigma.ring)
    require_modular(sigma, caps, unchecked)
    ring, n = code.ring, code.n
    if not all(_in_ambient_socle(ring, g) for g in code.generators):
        raise HypothesisError('special_genset needs a code annihilated by the radical.')
    if code.is_zero():
        return [], []

    start = []
    for i in range(ring.ell):
        component = sorted({ring.vcomponent(v, i) for v in code.codewords} - {code.zero},
                           key=lambda v: label_key(ring, v))
        start.extend(greedy_generators(ring, n, component)[0])

    def eliminate(generators):
        first = generators[0]
        k = next(x for x, value in enumerate(sigma(first)) if value)
        if len(generators) == 1:
            return [first], [k]
        rest = []
        for w in generators[1:]:
            if sigma(w)[k]:
                w = ring.vsub(w, ring.vscale(unit_eliminator(sigma, w, first, k), first))
            rest.append(w)
        vectors, coordinates = eliminate(rest)
        for v, x in zip(vectors, coordinates):
            if sigma(first)[x]:
                first = ring.vsub(first, ring.vscale(unit_eliminator(sigma, first, v, x), v))
        return [first] + vectors, [k] + coordinates

    vectors, coordinates = eliminate(start)
    values = [sigma(v) for v in vectors]
    private = all(values[i][k] and all(values[h][k] == 0 for h in range(len(values)) if h != i)
                  for i, k in enumerate(coordinates))
    if not private or span(ring, n, vectors) != code.codewords:
        raise MismatchError('Elimination did not produce private coordinates.',
                            witness=[format_vector(ring, v) for v in vectors])
    return vectors, coordinates


def replace_by_minimal(code, sigma, v, i, unchecked=False, caps=None):
    """A minimal codeword w with sigma(w) <= sigma(v) and sigma(w)_i != 0, for v in a socle code."""
    value = sigma(v)
    if not value[i]:
        raise HypothesisError('sigma(v) vanishes at coordinate {}.'.format(i))
    minimal = min_codewords(code, sigma, unchecked, caps)
    for w in minimal.all_members:
        support = sigma(w)
        if support[i] and leq(support, value):
            return w
    raise MismatchError('No minimal codeword below sigma(v) at coordinate {}.'.format(i),
                        witness=format_vector(code.ring, v))


def _verify_circuit_axioms(circuits):
    if any(not circuit for circuit in circuits):
        raise MismatchError('The empty set is a circuit.')
    for a, b in itertools.permutations(circuits, 2):
        if a < b:
            raise MismatchError('Circuit {} is contained in {}.'.format(sorted(a), sorted(b)))
    for a, b in itertools.combinations(circuits, 2):
        for e in a & b:
            union = (a | b) - {e}
            if not any(c <= union for c in circuits):
                raise MismatchError('Circuit elimination fails for {}, {} at {}.'.format(sorted(a), sorted(b), e))


def circuits(code, sigma, unchecked=False, caps=None):
    """
    Minimal supports of a {0,1}-valued modular support, as subsets of value coordinates

    Returns
    -------
    list of frozenset
        Checked against the circuit axioms, sorted by size then elements
    """
    require_modular(sigma, caps, unchecked)
    minimal = min_codewords(code, sigma, unchecked=True, caps=caps)
    verify_binary_values(minimal.supports)
    result = [frozenset(x for x, value in enumerate(support) if value) for support in minimal.supports]
    result.sort(key=lambda c: (len(c), sorted(c)))
    _verify_circuit_axioms(result)
    return result


def _subset_masks(n):
    return np.arange(2 ** n, dtype=np.int64)


def matroid_independent_sets(code):
    """
    Independent sets of the matroid of a code over F_q: A is independent when no nonzero
    codeword has Hamming support inside A

    Returns
    -------
    list of tuple
        0-based coordinate subsets sorted by size then elements
    """
    verify_field(code.ring)
    verify_cap(code.n, code.caps, 'matroid_length', 'n')
    n = code.n
    bits = 1 << np.arange(n, dtype=np.int64)
    masks = np.zeros(1, dtype=np.int64)
    if not code.is_zero():
        _, array = _nonzero_array(code)
        masks = np.unique((array != 0).astype(np.int64) @ bits)
    subsets = _subset_masks(n)
    dependent = np.zeros(len(subsets), dtype=bool)
    for start in range(0, len(subsets), 4096):
        block = subsets[start:start + 4096]
        dependent[start:start + len(block)] = ((masks[None, :] & ~block[:, None]) == 0).any(axis=1)
    if code.is_zero():
        dependent[:] = False
    independent = [int(a) for a in np.flatnonzero(~dependent)]

    if not code.is_zero():
        circuit_masks = [sum(1 << x for x in circuit) for circuit in circuits(code, HammingSupport(code.ring, n))]
        expected = [a for a in range(2 ** n) if not any(c & ~a == 0 for c in circuit_masks)]
        if expected != independent:
            raise MismatchError('Independent sets disagree with the circuits.')
    result = [tuple(x for x in range(n) if a >> x & 1) for a in independent]
    return sorted(result, key=lambda a: (len(a), a))


@dataclass
class MaximalGeneration:
    generated: bool
    maximal_words: list

    def to_json(self, ring):
        return {'generated': self.generated, 'maximal_words': [format_vector(ring, v) for v in self.maximal_words]}


def maximal_generation(code, sigma):
    """Codewords of maximal support among nonzero codewords, and whether they generate C."""
    verify_nonzero_code(code, 'maximal_generation')
    words, array = _nonzero_array(code)
    values = sigma.evaluate_many(array)
    distinct, inverse = np.unique(values, axis=0, return_inverse=True)
    maximal = _maximal_rows(distinct)
    chosen = [w for w, row in zip(words, np.asarray(inverse).reshape(-1).tolist()) if maximal[row]]
    chosen.sort(key=lambda v: label_key(code.ring, v))
    generated = span(code.ring, code.n, chosen) == code.codewords
    return MaximalGeneration(generated, chosen)


def _verify_estimate_arguments(q, n, k):
    factors = factorint(q) if isinstance(q, int) and q >= 2 else {}
    if len(factors) != 1:
        raise ValidationError('q = {} is not a prime power.'.format(q))
    if not isinstance(n, int) or not isinstance(k, int) or not 1 <= k <= n:
        raise ValidationError('Need 1 <= k <= n, got n={}, k={}.'.format(n, k))


def estimate_maximal(q, n, k):
    """
    Lower bound on the share of k-dimensional codes in F_q^n generated by their maximal codewords

    Returns
    -------
    Fraction
    """
    _verify_estimate_arguments(q, n, k)
    denominator = (q ** n - 1) * (q ** k - q ** (k - 1) - 1)
    if denominator == 0:
        raise ValidationError('The estimate is undefined for q = 2, k = 1 (zero denominator).')
    numerator = (q - 1) ** n * (q ** k - 1) - (q ** n - 1) * q ** (k - 1)
    return Fraction(numerator, denominator)


@dataclass
class MonteCarloResult:
    proportion: float
    generated: int
    samples: int

    @property
    def standard_error(self):
        p = self.proportion
        return float(np.sqrt(p * (1 - p) / self.samples))

    def to_json(self):
        return {'proportion': self.proportion, 'generated': self.generated, 'samples': self.samples,
                'standard_error': self.standard_error}


def sample_code(ring, n, k, rng):
    """Row space of a uniform k x n matrix over a field, redrawn until it has rank k."""
    q = ring.size
    while True:
        rows = [tuple(row) for row in rng.integers(0, q, size=(k, n)).tolist()]
        words = span(ring, n, rows)
        if len(words) == q ** k:
            return Code.from_words(ring, n, words, rows)


def _sample_block(q, n, k, seed, start, stop):
    ring = galois_field(q)
    hamming = HammingSupport(ring, n)
    generated = 0
    for index in range(start, stop):
        code = sample_code(ring, n, k, np.random.default_rng([seed, index]))
        generated += maximal_generation(code, hamming).generated
    return generated


def monte_carlo_maximal(q, n, k, samples, seed=0, blocks=8, client=None):
    """
    Share of uniformly sampled k-dimensional codes generated by their maximal codewords

    Codes are row spaces of uniform k x n matrices of rank k; sample i draws from
    numpy.random.default_rng([seed, i]), so the result does not depend on the blocking.
    """
    _verify_estimate_arguments(q, n, k)
    if not isinstance(samples, int) or samples < 1:
        raise ValidationError('samples must be a positive integer, got {!r}.'.format(samples))
    size = -(-samples // blocks)
    tasks = [dask.delayed(_sample_block)(q, n, k, seed, start, min(start + size, samples))
             for start in range(0, samples, size)]
    counts = client.gather(client.compute(tasks)) if client is not None else dask.compute(*tasks)
    generated = int(sum(counts))
    return MonteCarloResult(generated / samples, generated, samples)


def _ambient_socle_support(sigma):
    ring, n = sigma.ring, sigma.n
    generators = []
    for i, factor in enumerate(ring.factors):
        element = ring.embed(1, i)
        for _ in range(factor.epsilon - 1):
            element = ring.mul_rows[element][ring.embed(factor.alpha, i)]
        for j in range(n):
            generators.append(tuple(element if x == j else 0 for x in range(n)))
    return sigma.evaluate_many(np.array(generators, dtype=np.int64)).max(axis=0)


def singleton_bounds(code, sigma, unchecked=False, caps=None):
    """
    (lower, upper) bounds min wt(C) + r - 1 <= d_r(C) <= |sigma(0:_{R^n} J)| - M(C) + r
    """
    require_modular(sigma, caps, unchecked)
    M = big_M(code)
    lowest = min_weight(code, sigma)
    ceiling = int(_ambient_socle_support(sigma).sum())
    return [(lowest + r - 1, ceiling - M + r) for r in range(1, M + 1)]


def weights_by_factors(code, sigma, unchecked=False, caps=None):
    """
    d_r(C) = min over r = r_1 + ... + r_l of the sum of d_{r_j}(C_j), from the decompositions
    of the code and of the support along the ring factors
    """
    verify_nonzero_code(code, 'weights_by_factors')
    decomposition = decompose_modular(sigma, caps, unchecked)
    profiles = []
    for part, factor_support in zip(decompose(code), decomposition.supports):
        if part.is_zero():
            profiles.append([0])
        else:
            profiles.append([0] + gen_weights_fast(part, factor_support, unchecked, caps).d)
    M = sum(len(profile) - 1 for profile in profiles)
    if M != big_M(code):
        raise MismatchError('Factor ranks sum to {}, M(C) = {}.'.format(M, big_M(code)))
    d = []
    for r in range(1, M + 1):
        d.append(min(sum(profile[j] for profile, j in zip(profiles, composition))
                     for composition in itertools.product(*(range(len(profile)) for profile in profiles))
                     if sum(composition) == r))
    return compare_with_oracle(WeightProfile(M, d, [[] for _ in d], 'factors'), code, sigma, unchecked, caps)


