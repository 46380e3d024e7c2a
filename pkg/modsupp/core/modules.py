"""
Codes as submodules of R^n.

Vectors are tuples of element indices of a RingSpec. Codeword sets are frozensets of such
tuples; every exhaustive routine works on these sets or on their numpy stacking.
"""
import logging
import threading

import numpy as np

from .caps import resolve_caps
from .verifications import (CapExceededError, HypothesisError, MismatchError, ValidationError, verify_cap,
                            verify_length)

logger = logging.getLogger(__name__)


def parse_vector(ring, obj, n=None):
    if not isinstance(obj, (list, tuple)):
        raise ValidationError('A vector is a list of ring elements, got {!r}.'.format(obj))
    if n is not None:
        verify_length(obj, n)
    return tuple(ring.parse(x) for x in obj)


def format_vector(ring, v):
    return [ring.label(a) for a in v]


def label_key(ring, v):
    """Sort key ordering vectors by their integer I/O form."""
    return tuple(ring.label(a) for a in v)


def _multiples(ring, g):
    """The distinct vectors r g, r in R, as an array."""
    return np.unique(ring.mul_table[:, list(g)], axis=0)


def _extend(ring, words, g):
    """Closure step S -> S + Rg on a (s, n) array of vectors."""
    multiples = _multiples(ring, g)
    n = words.shape[1]
    sums = ring.add_table[words[:, None, :], multiples[None, :, :]].reshape(-1, n)
    return np.unique(sums, axis=0)


def _as_set(words):
    return frozenset(map(tuple, words.tolist()))


def span(ring, n, vectors):
    """Submodule generated by the given vectors, as a frozenset."""
    words = np.zeros((1, n), dtype=np.int64)
    for v in vectors:
        words = _extend(ring, words, v)
    return _as_set(words)


def extend_span(ring, words, v):
    """The set {s + r v : s in words, r in R}."""
    multiples = set(map(tuple, _multiples(ring, v).tolist()))
    return frozenset(ring.vadd(s, m) for s in words for m in multiples)


def greedy_generators(ring, n, vectors):
    """Generating set of span(vectors): keep each vector not yet spanned by the earlier ones."""
    generators, current = [], frozenset([(0,) * n])
    for v in vectors:
        if v not in current:
            generators.append(v)
            current = extend_span(ring, current, v)
    return generators, current


class Code:
    """
    A code C, the submodule of R^n generated by a list of vectors

    Attributes
    ----------
    ring : RingSpec
    n : int
        Length
    generators : tuple
        Nonzero distinct generators, as tuples of element indices
    caps : dict
        Resolved caps used for enumeration

    Examples
    --------
    >> ring = make_ring({'kind': 'Zm', 'm': 6})
    >> code = Code.from_labels(ring, [[3, 1, 2], [2, 4, 3]])
    >> len(code.codewords)
    36
    """

    def __init__(self, ring, n, generators=(), caps=None):
        if not isinstance(n, int) or n < 1:
            raise ValidationError('Code length must be a positive integer, got {!r}.'.format(n))
        self.ring = ring
        self.n = n
        self.caps = resolve_caps(caps)
        zero = (0,) * n
        kept = []
        for g in generators:
            g = tuple(g)
            verify_length(g, n)
            if g != zero and g not in kept:
                kept.append(g)
        self.generators = tuple(kept)
        self._codewords = None
        self._lock = threading.Lock()

    @classmethod
    def from_labels(cls, ring, generators, n=None, caps=None):
        """Builds a code from generators written in integer or per-factor residue form."""
        generators = list(generators)
        if n is None:
            if not generators:
                raise ValidationError('The length n is needed for a code without generators.')
            n = len(generators[0])
        return cls(ring, n, [parse_vector(ring, g, n) for g in generators], caps=caps)

    @classmethod
    def from_words(cls, ring, n, words, generators=None, caps=None):
        """Code whose codeword set is already known."""
        words = frozenset(words)
        if generators is None:
            generators, _ = greedy_generators(ring, n, sorted(words))
        code = cls(ring, n, generators, caps=caps)
        code._codewords = words
        return code

    def __repr__(self):
        return 'Code({}, n={}, generators={})'.format(self.ring, self.n,
                                                    [format_vector(self.ring, g) for g in self.generators])

    def __eq__(self, other):
        if not isinstance(other, Code):
            return NotImplemented
        return self.ring == other.ring and self.n == other.n and self.codewords == other.codewords

    def __hash__(self):
        return hash((self.n, self.codewords))

    def __contains__(self, v):
        return tuple(v) in self.codewords

    def __len__(self):
        return len(self.codewords)

    def is_zero(self):
        return not self.generators

    @property
    def zero(self):
        return (0,) * self.n

    @property
    def codewords(self):
        if self._codewords is None:
            with self._lock:
                if self._codewords is None:
                    self._codewords = enumerate_codewords(self)
        return self._codewords

    @property
    def nonzero_codewords(self):
        return sorted(self.codewords - {self.zero})

    def is_subcode_of(self, other):
        return self.codewords <= other.codewords

    def to_json(self):
        return {'generators': [format_vector(self.ring, g) for g in self.generators]}


def enumerate_codewords(code):
    """
    Exact codeword set of a code by incremental closure S -> S + Rg over the generators

    Parameters
    ----------
    code : Code

    Returns
    -------
    frozenset of tuple
    """
    ring, n = code.ring, code.n
    k = len(code.generators)
    work = min(ring.size ** k, ring.size ** n)
    verify_cap(work, code.caps, 'enumeration', 'min(|R|^k, |R|^n)')

    words = np.zeros((1, n), dtype=np.int64)
    for g in code.generators:
        words = _extend(ring, words, g)
    codewords = _as_set(words)

    if ring.size ** n % len(codewords):
        raise MismatchError('|C| = {} does not divide |R|^n = {}.'.format(len(codewords), ring.size ** n))
    for v in codewords:
        if any(ring.vadd(v, g) not in codewords for g in code.generators):
            raise MismatchError('Enumerated codewords are not closed under addition.',
                                witness=format_vector(ring, v))
    logger.debug('enumerated %d codewords of %r', len(codewords), code)
    return codewords


def decompose(code):
    """Per-factor codes C_i = pi_i(C) over the chain factors of the ring."""
    ring = code.ring
    return [Code(ring.factor_ring(i), code.n, [ring.vproject(g, i) for g in code.generators], caps=code.caps)
            for i in range(ring.ell)]


def reconstruct(ring, parts):
    """Codeword set of C_1 x ... x C_l inside R^n."""
    n = parts[0].n
    words = np.zeros((1, n), dtype=np.int64)
    for i, part in enumerate(parts):
        embedded = np.array(sorted(part.codewords), dtype=np.int64) * ring.strides[i]
        # digits of distinct factors never carry into each other
        words = (words[:, None, :] + embedded[None, :, :]).reshape(-1, n)
    return _as_set(words)


def socle(code):
    """
    The subcode 0:_C J = {v in C : alpha v = 0}

    Returns
    -------
    Code
        With a greedy generating set taken from its codewords in label order
    """
    ring = code.ring
    zero = code.zero
    words = [v for v in code.codewords if ring.vscale(ring.alpha, v) == zero]
    words.sort(key=lambda v: label_key(ring, v))
    return Code.from_words(ring, code.n, words, greedy_generators(ring, code.n, words)[0], caps=code.caps)


def _integer_log(value, base):
    exponent = 0
    while value % base == 0 and value > 1:
        value //= base
        exponent += 1
    if value != 1:
        raise MismatchError('{} is not a power of {}.'.format(value, base))
    return exponent


def mu_local(code):
    """
    Minimal number of generators of a code over a chain ring, log_q |C / alpha C|
    """
    ring = code.ring
    if ring.ell != 1:
        raise HypothesisError('mu_local expects a code over a single chain factor, got {}.'.format(ring))
    if code.is_zero():
        return 0
    radical_words = {ring.vscale(ring.alpha, v) for v in code.codewords}
    ratio, remainder = divmod(len(code.codewords), len(radical_words))
    if remainder:
        raise MismatchError('|alpha C| does not divide |C|.')
    return _integer_log(ratio, ring.factors[0].residue_field_size)


def big_M(code):
    """M(C), the sum of mu over the factor projections."""
    return sum(mu_local(part) for part in decompose(code))


def cyclic_representatives(code):
    """One generator per distinct nonzero cyclic submodule, least in label order."""
    ring = code.ring
    seen, representatives = set(), []
    for v in sorted(code.nonzero_codewords, key=lambda w: label_key(ring, w)):
        cyclic = span(ring, code.n, [v])
        if cyclic not in seen:
            seen.add(cyclic)
            representatives.append(v)
    return representatives


def all_submodules(code):
    """
    Every submodule of C by breadth-first closure from the zero module, adding one codeword at a time

    Returns
    -------
    list of Code
        Ordered by size, then by sorted codeword list
    """
    ring, n = code.ring, code.n
    verify_cap(len(code.codewords), code.caps, 'submodules', '|C|')
    candidates = cyclic_representatives(code)

    start = frozenset([code.zero])
    found = {start: ()}
    frontier = [start]
    while frontier:
        following = []
        for words in frontier:
            for v in candidates:
                if v in words:
                    continue
                extended = extend_span(ring, words, v)
                if extended not in found:
                    found[extended] = found[words] + (v,)
                    following.append(extended)
        frontier = following
    logger.debug('%d submodules of a code with %d codewords', len(found), len(code.codewords))
    ordered = sorted(found, key=lambda words: (len(words), sorted(words)))
    return [Code.from_words(ring, n, words, found[words], caps=code.caps) for words in ordered]


def is_minimal_generating_set(ring, n, vectors, words):
    if span(ring, n, vectors) != words:
        return False
    return all(span(ring, n, vectors[:i] + vectors[i + 1:]) != words for i in range(len(vectors)))


class _TopSpace:
    """
    C / JC split along the ring factors

    Cosets of alpha C are numbered and the point of v on factor i is the coset of e_i v. Codewords
    are grouped into classes with the same points up to unit multiples, each represented by its
    least codeword in label order. Whether vectors generate C only depends on their classes.
    Spans are bit masks over the coset numbers.
    """

    def __init__(self, code):
        ring = code.ring
        self.ring = ring
        radical = frozenset(ring.vscale(ring.alpha, v) for v in code.codewords)
        self.coset = {}
        representatives = []
        for v in sorted(code.codewords, key=lambda w: label_key(ring, w)):
            if v not in self.coset:
                for a in radical:
                    self.coset[ring.vadd(v, a)] = len(representatives)
                representatives.append(v)
        self.zero = self.coset[code.zero]
        self.add = [[self.coset[ring.vadd(v, w)] for w in representatives] for v in representatives]
        self.multiples = [sorted({self.coset[ring.vscale(u, v)] for u in ring.unit_list} | {self.zero})
                          for v in representatives]

        classes = {}
        for v in sorted(code.nonzero_codewords, key=lambda w: label_key(ring, w)):
            point = tuple(self.coset[ring.vcomponent(v, i)] for i in range(ring.ell))
            key = tuple(frozenset(self.multiples[x]) for x in point)
            if any(x != self.zero for x in point) and key not in classes:
                classes[key] = (v, point)
        self.vectors = [v for v, _ in classes.values()]
        self.points = [point for _, point in classes.values()]
        self.full = tuple(self.span(point[i] for point in self.points) for i in range(ring.ell))

    def extend(self, mask, x):
        """Span of the cosets in the bit mask and the coset x."""
        if mask >> x & 1:
            return mask
        members = [w for w in range(mask.bit_length()) if mask >> w & 1]
        extended = 0
        for m in self.multiples[x]:
            for w in members:
                extended |= 1 << self.add[w][m]
        return extended

    def span(self, xs):
        mask = 1 << self.zero
        for x in xs:
            mask = self.extend(mask, x)
        return mask

    def profiles(self, chosen, profiles, spans, t):
        """
        Profiles after adding class t to the chosen ones

        The profile of a member holds, per factor, the span of the other members when the member
        lies outside it and None otherwise. Returns None when some member becomes redundant.
        """
        point = self.points[t]
        updated = []
        for j, profile in zip(chosen, profiles):
            profile = tuple(None if mask is None else self.extend(mask, x)
                            for mask, x in zip(profile, point))
            profile = tuple(None if mask is None or mask >> y & 1 else mask
                            for mask, y in zip(profile, self.points[j]))
            if all(mask is None for mask in profile):
                return None
            updated.append(profile)
        updated.append(tuple(None if mask >> x & 1 else mask for mask, x in zip(spans, point)))
        return tuple(updated)


def minimal_genset_search(code):
    """
    Exhaustive search of the inclusion-minimal generating sets of C

    Generating sets are built one class of C / JC at a time and every member must stay out of
    the span of the others. States are memoized on the spans reached and, over several ring
    factors, on the spans of the others seen from each member, which is all the rest of the
    search depends on.

    Returns
    -------
    dict
        Size of a minimal generating set -> the first such set found, as codeword vectors
    """
    ring = code.ring
    verify_cap(len(code.codewords), code.caps, 'genset_search', '|C|')
    if code.is_zero():
        return {0: []}
    top = _TopSpace(code)
    depth = code.caps['genset_size']
    memo = {}

    def search(chosen, spans, profiles):
        # over one factor a class outside the span never makes an earlier one redundant
        key = spans if ring.ell == 1 else (spans, frozenset(profiles))
        if key in memo:
            return memo[key]
        if spans == top.full:
            memo[key] = {0: ()}
            return memo[key]
        if len(chosen) == depth:
            raise CapExceededError('Minimal generating set search needs more than {} generators.'.format(depth) +
                                   ' Raise the "genset_size" cap through MODSUPP_CAPS.')
        result, reached = {}, []
        for t, point in enumerate(top.points):
            if all(mask >> x & 1 for mask, x in zip(spans, point)):
                continue
            if ring.ell == 1 and any(mask >> point[0] & 1 for mask in reached):
                # same span as an earlier extension
                continue
            extended = tuple(top.extend(mask, x) for mask, x in zip(spans, point))
            following = ()
            if ring.ell == 1:
                reached.append(extended[0])
            else:
                following = top.profiles(chosen, profiles, spans, t)
                if following is None:
                    continue
            for size, rest in search(chosen + (t,), extended, following).items():
                result.setdefault(size + 1, (t,) + rest)
        memo[key] = result
        return result

    found = search((), tuple(1 << top.zero for _ in range(ring.ell)), ())
    logger.debug('minimal generating sets of sizes %s, %d search states', sorted(found), len(memo))
    return {size: [top.vectors[t] for t in members] for size, members in sorted(found.items())}


def minimal_genset_sizes(code):
    return sorted(minimal_genset_search(code))


def max_min_genset(code):
    """
    Largest inclusion-minimal generating set of C

    Returns
    -------
    tuple
        (size, witness), the witness being the first largest set found
    """
    found = minimal_genset_search(code)
    largest = max(found)
    witness = found[largest]
    if not is_minimal_generating_set(code.ring, code.n, witness, code.codewords):
        raise MismatchError('Search returned {} which is not a minimal generating set.'.format(
            [format_vector(code.ring, v) for v in witness]))
    return largest, witness


def max_min_genset_size(code):
    return max_min_genset(code)[0]
