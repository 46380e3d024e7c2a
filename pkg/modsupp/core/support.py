"""
Support functions sigma: R^n -> N^u as serializable expression trees.

Every node evaluates a whole batch of vectors at once: ``evaluate_many`` takes an (N, n)
array of element indices and returns the (N, u) array of support values. The exhaustive
axiom and modularity checkers run on the value table of all of R^n, enumerated in
lexicographic order of integer labels so that the first witness found is the least one.
"""
import itertools
import logging
from dataclasses import dataclass

import dask
import numpy as np

from .caps import resolve_caps
from .linalg import rank_over_field
from .modules import format_vector, parse_vector, span
from .ring import ChainFactor, RingSpec
from .verifications import (HypothesisError, MismatchError, ValidationError, verify_cap,
                            verify_integers, verify_length, verify_list, verify_object, verify_same_ring)

logger = logging.getLogger(__name__)

CHECK_BLOCKS = 8


def join(s, t):
    return tuple(max(a, b) for a, b in zip(s, t))


def leq(s, t):
    return all(a <= b for a, b in zip(s, t))


def all_vectors(ring, n):
    """Every vector of R^n as an (|R|^n, n) index array, in lexicographic label order."""
    by_label = [ring.parse(k) for k in range(ring.size)]
    return np.array(list(itertools.product(by_label, repeat=n)), dtype=np.int64).reshape(-1, n)


def vector_positions(ring, vectors):
    """Row positions of the given index vectors inside all_vectors(ring, n)."""
    vectors = np.asarray(vectors, dtype=np.int64)
    n = vectors.shape[-1]
    labels = np.array([ring.label(a) for a in range(ring.size)], dtype=np.int64)
    powers = ring.size ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return labels[vectors] @ powers


class SupportSpec:
    """
    Base class of support expression trees

    Attributes
    ----------
    ring : RingSpec
    n : int
        Length of the vectors the support is evaluated on
    u : int
        Number of value coordinates
    pseudo : bool
        True when the tree contains a pseudo-support leaf (lee)
    """
    kind = None

    def __init__(self, ring, n, u):
        self.ring = ring
        self.n = n
        self.u = u
        self._table = None
        self._checks = {}

    @property
    def children(self):
        return ()

    @property
    def pseudo(self):
        return any(child.pseudo for child in self.children)

    def known_modular(self):
        """True when modularity follows from the construction; None when it needs an exhaustive check."""
        return None

    def evaluate_many(self, vectors):
        raise NotImplementedError

    def __call__(self, v):
        return tuple(int(x) for x in self.evaluate_many(np.array([v], dtype=np.int64).reshape(1, self.n))[0])

    def value_table(self, caps=None):
        """(|R|^n, u) values on all_vectors(ring, n)."""
        if self._table is None:
            caps = resolve_caps(caps)
            verify_cap(self.ring.size ** self.n, caps, 'exhaustive_vectors', '|R|^n')
            self._table = self.evaluate_many(all_vectors(self.ring, self.n))
        return self._table

    def to_json(self):
        raise NotImplementedError

    def __repr__(self):
        return 'SupportSpec({})'.format(self.to_json())


class _CoordinatewiseSupport(SupportSpec):
    """Leaf applying a map R -> N^w to every coordinate, u = n w."""

    def __init__(self, ring, n, element_values):
        element_values = np.asarray(element_values, dtype=np.int64).reshape(ring.size, -1)
        super().__init__(ring, n, n * element_values.shape[1])
        self.element_values = element_values

    def evaluate_many(self, vectors):
        vectors = np.asarray(vectors, dtype=np.int64)
        return self.element_values[vectors].reshape(vectors.shape[0], self.u)


class HammingSupport(_CoordinatewiseSupport):
    kind = 'hamming'

    def __init__(self, ring, n):
        super().__init__(ring, n, (np.arange(ring.size) != 0).astype(np.int64))

    def known_modular(self):
        # modular exactly over fields
        return True if self.ring.ell == 1 and self.ring.factors[0].epsilon == 1 else None

    def to_json(self):
        return {'kind': self.kind}


class ChainRingSupport(_CoordinatewiseSupport):
    """
    Chain ring support, epsilon_i - v(pi_i(r)) on every chain factor; coordinate j of the
    vector owns the value coordinates j*l, ..., j*l + l - 1.
    """
    kind = 'chain_ring'

    def __init__(self, ring, n):
        values = np.zeros((ring.size, ring.ell), dtype=np.int64)
        for a in range(ring.size):
            for i, factor in enumerate(ring.factors):
                values[a, i] = factor.epsilon - factor.valuation(ring.project(a, i))
        super().__init__(ring, n, values)

    def known_modular(self):
        return True

    def to_json(self):
        return {'kind': self.kind}


class ChainSupport(_CoordinatewiseSupport):
    """
    Chain support of 0 = I_0 < I_1 < ... < I_eps = R: sigma(r) = min{i : r in I_i}

    Parameters
    ----------
    ideals : list of list
        Generators of I_0, ..., I_{eps-1}; I_eps = R is implicit
    """
    kind = 'chain'

    def __init__(self, ring, n, ideals):
        if not ideals:
            raise ValidationError('A chain support needs at least the zero ideal.')
        for generators in verify_list(ideals, 'chain ideals'):
            verify_list(generators, 'chain ideal generators')
        self.ideals = [[ring.label(ring.parse(x)) for x in generators] for generators in ideals]
        members = [span(ring, 1, [(ring.parse(x),) for x in generators]) for generators in ideals]
        members.append(frozenset((a,) for a in range(ring.size)))
        if members[0] != frozenset([(0,)]):
            raise ValidationError('The chain must start at the zero ideal, got {}.'.format(self.ideals[0]))
        for smaller, larger in zip(members, members[1:]):
            if not smaller < larger:
                raise ValidationError('Ideals {} do not form a strictly increasing chain.'.format(self.ideals))
        values = [min(i for i, ideal in enumerate(members) if (a,) in ideal) for a in range(ring.size)]
        super().__init__(ring, n, values)

    def to_json(self):
        return {'kind': self.kind, 'ideals': self.ideals}


def pir_values_modular(values):
    """
    Closed-form modularity test for pir values: strictly decreasing along every chain, with a
    nonzero entry in every value vector
    """
    if any(not any(vector) for chain in values for vector in chain):
        return False
    for chain in values:
        for upper, lower in zip(chain, chain[1:]):
            if any(a <= b for a, b in zip(upper, lower)):
                return False
    return True


class PirSupport(_CoordinatewiseSupport):
    """
    Support on a PIR from value vectors: sigma_i(r alpha_i^j) = values[i][j] for r a unit of R_i;
    coordinate j of the vector owns the concatenation of the per-factor blocks.
    """
    kind = 'pir'

    def __init__(self, ring, n, values):
        for chain in verify_list(values, 'pir values'):
            for vector in verify_list(chain, 'pir value chain'):
                verify_integers(verify_list(vector, 'pir value vector'), 'pir value vector')
        if len(values) != ring.ell:
            raise ValidationError('pir support needs one value list per factor ({}), got {}.'.format(ring.ell,
                                                                                                    len(values)))
        widths = []
        for factor, chain in zip(ring.factors, values):
            if len(chain) != factor.epsilon:
                raise ValidationError('Factor {} needs {} value vectors, got {}.'.format(factor, factor.epsilon,
                                                                                        len(chain)))
            width = {len(vector) for vector in chain}
            if len(width) != 1:
                raise ValidationError('Value vectors of factor {} differ in length.'.format(factor))
            for upper, lower in zip(chain, chain[1:]):
                if not leq(lower, upper):
                    raise ValidationError('Values {} of factor {} do not decrease.'.format(chain, factor))
            if any(x < 0 for vector in chain for x in vector):
                raise ValidationError('Support values must be nonnegative.')
            widths.append(width.pop())
        self.values = [[list(vector) for vector in chain] for chain in values]

        element_values = np.zeros((ring.size, sum(widths)), dtype=np.int64)
        offsets = np.cumsum([0] + widths)
        for a in range(ring.size):
            for i, factor in enumerate(ring.factors):
                residue = ring.project(a, i)
                if residue:
                    element_values[a, offsets[i]:offsets[i + 1]] = self.values[i][factor.valuation(residue)]
        super().__init__(ring, n, element_values)

    def known_modular(self):
        return True if pir_values_modular(self.values) else None

    def to_json(self):
        return {'kind': self.kind, 'values': self.values}


class LeeWeight(_CoordinatewiseSupport):
    """Coordinatewise Lee weight min(k, m - k), a pseudo-support, over Z_m or a single Z_{p^e}."""
    kind = 'lee'

    def __init__(self, ring, n):
        if ring.modulus_m is None and (ring.ell != 1 or ring.factors[0].kind != 'Zpe'):
            raise ValidationError('The Lee weight needs a ring of integers mod m, got {}.'.format(ring))
        m = ring.size
        labels = np.array([ring.label(a) for a in range(m)], dtype=np.int64)
        super().__init__(ring, n, np.minimum(labels, m - labels))

    @property
    def pseudo(self):
        return True

    def known_modular(self):
        return False

    def to_json(self):
        return {'kind': self.kind}


class TableSupport(SupportSpec):
    """
    Explicit support given on every vector of R^n

    Parameters
    ----------
    entries : dict
        Comma-joined integer labels of a vector, e.g. "1,0", mapped to its value list
    """
    kind = 'table'

    def __init__(self, ring, entries, n=None):
        parsed = {}
        for key, value in verify_object(entries, 'Table support entries').items():
            try:
                labels = [int(x) for x in str(key).split(',')]
            except ValueError as e:
                raise ValidationError('Table key "{}" is not a comma-joined list of integers.'.format(key)) from e
            vector = parse_vector(ring, labels, n)
            if vector in parsed:
                raise ValidationError('Table key "{}" repeats vector {}.'.format(key, format_vector(ring, vector)))
            value = verify_integers(verify_list(list(value) if isinstance(value, tuple) else value,
                                                'Table value of "{}"'.format(key)), 'Table value')
            parsed[vector] = tuple(value)
        lengths = {len(vector) for vector in parsed}
        widths = {len(value) for value in parsed.values()}
        if len(lengths) != 1 or len(widths) != 1:
            raise ValidationError('Table keys and values must have constant lengths.')
        n = lengths.pop()
        super().__init__(ring, n, widths.pop())
        if len(parsed) != ring.size ** n:
            raise ValidationError('Table support lists {} vectors, R^{} has {}.'.format(len(parsed), n,
                                                                                     ring.size ** n))
        if any(x < 0 for value in parsed.values() for x in value):
            raise ValidationError('Support values must be nonnegative.')
        vectors = np.array(list(parsed), dtype=np.int64)
        lookup = np.zeros((ring.size ** n, self.u), dtype=np.int64)
        lookup[vector_positions(ring, vectors)] = np.array(list(parsed.values()), dtype=np.int64)
        self.lookup = lookup

    @classmethod
    def from_function(cls, ring, n, function):
        """Tabulates a function of index tuples returning value tuples."""
        entries = {}
        for v in all_vectors(ring, n).tolist():
            entries[','.join(str(x) for x in format_vector(ring, v))] = list(function(tuple(v)))
        return cls(ring, entries, n)

    def evaluate_many(self, vectors):
        return self.lookup[vector_positions(self.ring, vectors)]

    def to_json(self):
        vectors = all_vectors(self.ring, self.n)
        return {'kind': self.kind,
                'entries': {','.join(str(x) for x in format_vector(self.ring, v)): row
                            for v, row in zip(vectors.tolist(), self.lookup.tolist())}}


class _Combinator(SupportSpec):

    def __init__(self, inner, u):
        super().__init__(inner.ring, inner.n, u)
        self.inner = inner

    @property
    def children(self):
        return (self.inner,)

    def known_modular(self):
        return True if self.inner.known_modular() else None

    def _check_coordinate(self, i, bound):
        if not isinstance(i, int) or not 0 <= i < bound:
            raise ValidationError('{} coordinate {} outside [0, {}).'.format(self.kind, i, bound))


class Permute(_Combinator):
    """out[k] = in[s[k]]"""
    kind = 'permute'

    def __init__(self, inner, s):
        s = verify_integers(verify_list(list(s) if isinstance(s, tuple) else s, 'permute s'), 'permute s')
        if sorted(s) != list(range(inner.u)):
            raise ValidationError('{} is not a permutation of [0, {}).'.format(list(s), inner.u))
        super().__init__(inner, inner.u)
        self.s = list(s)

    def evaluate_many(self, vectors):
        return self.inner.evaluate_many(vectors)[:, self.s]

    def to_json(self):
        return {'kind': self.kind, 's': self.s, 'inner': self.inner.to_json()}


class Scale(_Combinator):
    kind = 'scale'

    def __init__(self, inner, i, a):
        if not isinstance(a, int) or a < 1:
            raise ValidationError('Scale factor must be a positive integer, got {!r}.'.format(a))
        super().__init__(inner, inner.u)
        self._check_coordinate(i, inner.u)
        self.i, self.a = i, a

    def evaluate_many(self, vectors):
        values = self.inner.evaluate_many(vectors).copy()
        values[:, self.i] *= self.a
        return values

    def to_json(self):
        return {'kind': self.kind, 'i': self.i, 'a': self.a, 'inner': self.inner.to_json()}


class Duplicate(_Combinator):
    """Repeats coordinate i right after itself."""
    kind = 'duplicate'

    def __init__(self, inner, i):
        super().__init__(inner, inner.u + 1)
        self._check_coordinate(i, inner.u)
        self.i = i

    def evaluate_many(self, vectors):
        values = self.inner.evaluate_many(vectors)
        return np.insert(values, self.i + 1, values[:, self.i], axis=1)

    def to_json(self):
        return {'kind': self.kind, 'i': self.i, 'inner': self.inner.to_json()}


class Drop(_Combinator):
    kind = 'drop'

    def __init__(self, inner, i):
        super().__init__(inner, inner.u - 1)
        self._check_coordinate(i, inner.u)
        self.i = i

    def known_modular(self):
        return None

    def evaluate_many(self, vectors):
        return np.delete(self.inner.evaluate_many(vectors), self.i, axis=1)

    def to_json(self):
        return {'kind': self.kind, 'i': self.i, 'inner': self.inner.to_json()}


class InsertZero(_Combinator):
    """Inserts a constant zero coordinate right after coordinate i."""
    kind = 'insert_zero'

    def __init__(self, inner, i):
        super().__init__(inner, inner.u + 1)
        self._check_coordinate(i, inner.u)
        self.i = i

    def evaluate_many(self, vectors):
        return np.insert(self.inner.evaluate_many(vectors), self.i + 1, 0, axis=1)

    def to_json(self):
        return {'kind': self.kind, 'i': self.i, 'inner': self.inner.to_json()}


class ComposeLinear(_Combinator):
    """
    sigma(f(v)) for the R-linear map f(v) = A v, A with inner.n rows and n columns

    The map must be injective: checked by enumerating R^n when it is within the
    exhaustive cap, otherwise by full column rank over the residue field of every factor.
    """
    kind = 'compose_linear'

    def __init__(self, inner, matrix, n=None, caps=None):
        ring = inner.ring
        rows = [list(row) for row in matrix]
        if len(rows) != inner.n or len({len(row) for row in rows}) != 1:
            raise ValidationError('compose_linear needs a matrix with {} rows of equal length.'.format(inner.n))
        if n is not None:
            verify_length(rows[0], n)
        super().__init__(inner, inner.u)
        self.n = len(rows[0])
        self.matrix = [[ring.label(ring.parse(x)) for x in row] for row in rows]
        self._indices = np.array([[ring.parse(x) for x in row] for row in rows], dtype=np.int64)
        self._verify_injective(resolve_caps(caps))

    def _apply(self, vectors):
        ring = self.ring
        vectors = np.asarray(vectors, dtype=np.int64)
        out = np.zeros((vectors.shape[0], self.inner.n), dtype=np.int64)
        for i, row in enumerate(self._indices):
            for j, a in enumerate(row):
                out[:, i] = ring.add_table[out[:, i], ring.mul_table[a, vectors[:, j]]]
        return out

    def _verify_injective(self, caps):
        ring = self.ring
        if ring.size ** self.n <= caps['exhaustive_vectors']:
            vectors = all_vectors(ring, self.n)
            zero = ~self._apply(vectors).any(axis=1)
            kernel = vectors[zero & vectors.any(axis=1)]
            if len(kernel):
                raise ValidationError('compose_linear matrix is not injective.',
                                      witness=format_vector(ring, kernel[0].tolist()))
            return
        for i, factor in enumerate(ring.factors):
            # injective over a chain ring exactly when of full column rank over its residue field
            if factor.kind == 'Zpe':
                field = RingSpec((ChainFactor('Zpe', factor.p),))
            else:
                field = ring.factor_ring(i)
            reduced = [[ring.project(a, i) % field.size for a in row] for row in self._indices.tolist()]
            rank = rank_over_field(field, reduced)
            if rank < self.n:
                raise ValidationError('compose_linear matrix has rank {} < {} over the residue field of {}.'.format(
                    rank, self.n, factor))

    def evaluate_many(self, vectors):
        return self.inner.evaluate_many(self._apply(vectors))

    def to_json(self):
        return {'kind': self.kind, 'matrix': self.matrix, 'inner': self.inner.to_json()}


class _MultiCombinator(SupportSpec):

    def __init__(self, parts, n, u):
        if not parts:
            raise ValidationError('{} needs at least one part.'.format(self.kind))
        for part in parts[1:]:
            verify_same_ring(parts[0].ring, part.ring)
        super().__init__(parts[0].ring, n, u)
        self.parts = list(parts)

    @property
    def children(self):
        return tuple(self.parts)

    def known_modular(self):
        return True if all(part.known_modular() for part in self.parts) else None


class Product(_MultiCombinator):
    """(v_1, ..., v_k) -> (sigma_1(v_1), ..., sigma_k(v_k))"""
    kind = 'product'

    def __init__(self, parts):
        super().__init__(parts, sum(part.n for part in parts), sum(part.u for part in parts))

    def evaluate_many(self, vectors):
        vectors = np.asarray(vectors, dtype=np.int64)
        bounds = np.cumsum([0] + [part.n for part in self.parts])
        return np.hstack([part.evaluate_many(vectors[:, start:stop])
                          for part, start, stop in zip(self.parts, bounds, bounds[1:])])

    def to_json(self):
        return {'kind': self.kind, 'parts': [dict(part.to_json(), n=part.n) for part in self.parts]}


class Concat(_MultiCombinator):
    """v -> (sigma_1(v), ..., sigma_k(v))"""
    kind = 'concat'

    def __init__(self, parts):
        if len({part.n for part in parts}) != 1:
            raise ValidationError('concat parts must share the length n.')
        super().__init__(parts, parts[0].n, sum(part.u for part in parts))

    def evaluate_many(self, vectors):
        return np.hstack([part.evaluate_many(vectors) for part in self.parts])

    def to_json(self):
        return {'kind': self.kind, 'parts': [part.to_json() for part in self.parts]}


def support_from_json(obj, ring, n, caps=None):
    """
    Builds a SupportSpec from its JSON description

    Parameters
    ----------
    obj : dict
        Node description with a "kind" key
    ring : RingSpec
    n : int
        Length of the vectors the support acts on
    caps : dict, default None

    Returns
    -------
    SupportSpec
    """
    if not isinstance(obj, dict) or 'kind' not in obj:
        raise ValidationError('Support description must be an object with a "kind", got {!r}.'.format(obj))
    kind = obj['kind']
    if kind == 'hamming':
        return HammingSupport(ring, n)
    if kind == 'chain_ring':
        return ChainRingSupport(ring, n)
    if kind == 'chain':
        return ChainSupport(ring, n, obj.get('ideals') or [])
    if kind == 'pir':
        return PirSupport(ring, n, obj.get('values') or [])
    if kind == 'lee':
        return LeeWeight(ring, n)
    if kind == 'table':
        support = TableSupport(ring, obj.get('entries') or {})
        if support.n != n:
            raise ValidationError('Table support acts on length {}, expected {}.'.format(support.n, n))
        return support
    if kind == 'compose_linear':
        matrix = verify_list(obj.get('matrix') or [], 'compose_linear matrix')
        for row in matrix:
            verify_list(row, 'compose_linear matrix row')
        inner = support_from_json(obj.get('inner'), ring, len(matrix), caps)
        return ComposeLinear(inner, matrix, n, caps=caps)
    if kind == 'product':
        parts = []
        for part in verify_list(obj.get('parts') or [], 'product parts'):
            length = verify_object(part, 'product part').get('n', 1)
            if not isinstance(length, int) or isinstance(length, bool) or length < 1:
                raise ValidationError('Product part length must be a positive integer, got {!r}.'.format(length))
            parts.append(support_from_json(part, ring, length, caps))
        support = Product(parts)
        if support.n != n:
            raise ValidationError('Product parts cover length {}, expected {}.'.format(support.n, n))
        return support
    if kind == 'concat':
        return Concat([support_from_json(part, ring, n, caps)
                       for part in verify_list(obj.get('parts') or [], 'concat parts')])
    inner = support_from_json(obj.get('inner'), ring, n, caps) if kind in (
        'permute', 'scale', 'duplicate', 'drop', 'insert_zero') else None
    if kind == 'permute':
        return Permute(inner, obj.get('s') or [])
    if kind == 'scale':
        return Scale(inner, obj.get('i'), obj.get('a'))
    if kind == 'duplicate':
        return Duplicate(inner, obj.get('i'))
    if kind == 'drop':
        return Drop(inner, obj.get('i'))
    if kind == 'insert_zero':
        return InsertZero(inner, obj.get('i'))
    raise ValidationError('Unknown support kind "{}".'.format(kind))


def _as_indices(sigma, v):
    v = list(v)
    verify_length(v, sigma.n)
    indices = []
    for x in v:
        if hasattr(x, 'ring'):
            verify_same_ring(sigma.ring, x.ring)
            indices.append(x.index)
        else:
            indices.append(x)
    return tuple(indices)


def evaluate(sigma, v):
    """sigma(v) for a vector of element indices or RingElem values."""
    return sigma(_as_indices(sigma, v))


def weight(sigma, v):
    return sum(evaluate(sigma, v))


def _compute(tasks, client=None):
    if client is not None:
        return client.gather(client.compute(tasks))
    return list(dask.compute(*tasks))


def _blocks(total, blocks=CHECK_BLOCKS):
    size = -(-total // blocks)
    return [(start, min(start + size, total)) for start in range(0, total, size)]


def _axiom_block(ring, vectors, table, start, stop):
    """First P3 then P2 violation for v in rows [start, stop)."""
    p3 = p2 = None
    for v in range(start, stop):
        sums = ring.add_table[vectors[v][None, :], vectors]
        bound = np.maximum(table[v][None, :], table)
        bad = ~(table[vector_positions(ring, sums)] <= bound).all(axis=1)
        if bad.any():
            p3 = (v, int(np.argmax(bad)))
            break
    for v in range(start, stop):
        multiples = ring.mul_table[:, vectors[v]]
        bad = ~(table[vector_positions(ring, multiples)] <= table[v][None, :]).all(axis=1)
        if bad.any():
            # r in label order
            labels = [ring.label(r) for r in np.flatnonzero(bad)]
            p2 = (v, min(labels))
            break
    return p3, p2


def is_support(sigma, caps=None, client=None):
    """
    Exhaustive check of the support axioms P1, P3 and P2, in this order

    Parameters
    ----------
    sigma : SupportSpec
    caps : dict, default None
    client : dask.distributed.Client, default None
        Evaluates the blocks of first vectors on a cluster when given

    Returns
    -------
    tuple
        (True, None) or (False, witness) with witness {"axiom", "v", "w", "r"}; v, w and r
        are the lexicographically least violation of the first failing axiom
    """
    if 'support' in sigma._checks:
        return sigma._checks['support']
    caps = resolve_caps(caps)
    ring = sigma.ring
    total = ring.size ** sigma.n
    table = sigma.value_table(caps)
    vectors = all_vectors(ring, sigma.n)

    result = (True, None)
    nonzero = table.any(axis=1)
    zero_position = 0
    bad_p1 = np.flatnonzero(nonzero == (np.arange(total) == zero_position))
    if len(bad_p1):
        result = (False, {'axiom': 'P1', 'v': format_vector(ring, vectors[bad_p1[0]].tolist()),
                          'w': None, 'r': None})
    else:
        tasks = [dask.delayed(_axiom_block)(ring, vectors, table, start, stop) for start, stop in _blocks(total)]
        found = _compute(tasks, client)
        p3 = [hit for hit, _ in found if hit is not None]
        p2 = [hit for _, hit in found if hit is not None]
        if p3:
            v, w = min(p3)
            result = (False, {'axiom': 'P3', 'v': format_vector(ring, vectors[v].tolist()),
                              'w': format_vector(ring, vectors[w].tolist()), 'r': None})
        elif p2:
            v, r = min(p2)
            result = (False, {'axiom': 'P2', 'v': format_vector(ring, vectors[v].tolist()), 'w': None, 'r': r})
    logger.debug('is_support(%s) = %s', sigma.kind, result[0])
    sigma._checks['support'] = result
    return result


def _modular_block(ring, vectors, table, start, stop):
    """First P-star violation (v, w, i) for v in rows [start, stop)."""
    scaled = ring.mul_table[:, vectors]
    for v in range(start, stop):
        value = table[v]
        if not value.any():
            continue
        sums = ring.add_table[vectors[v][None, None, :], scaled]
        reduced = table[vector_positions(ring, sums)].min(axis=0)
        bad = (value[None, :] != 0) & (value[None, :] <= table) & (reduced >= value[None, :])
        rows = np.flatnonzero(bad.any(axis=1))
        if len(rows):
            w = int(rows[0])
            return v, w, int(np.argmax(bad[w]))
    return None


def is_modular(sigma, caps=None, client=None, unchecked=False):
    """
    Exhaustive check of P-star: whenever 0 != sigma(v)_i <= sigma(w)_i some r gives
    sigma(v + r w)_i < sigma(v)_i

    Returns
    -------
    tuple
        (True, None) or (False, {"v", "w", "i"}) with the lexicographically least violation
    """
    if 'modular' in sigma._checks:
        return sigma._checks['modular']
    caps = resolve_caps(caps)
    if not unchecked:
        holds, witness = is_support(sigma, caps, client)
        if not holds:
            raise HypothesisError('Modularity is only defined for supports; {} fails {}.'.format(
                sigma.kind, witness['axiom']), witness=witness)
    ring = sigma.ring
    total = ring.size ** sigma.n
    verify_cap(total * total * ring.size * sigma.u, caps, 'modular_work', '|R|^(2n+1) u')
    vectors = all_vectors(ring, sigma.n)
    table = sigma.value_table(caps)

    tasks = [dask.delayed(_modular_block)(ring, vectors, table, start, stop) for start, stop in _blocks(total)]
    found = [hit for hit in _compute(tasks, client) if hit is not None]
    result = (True, None)
    if found:
        v, w, i = min(found)
        result = (False, {'v': format_vector(ring, vectors[v].tolist()),
                          'w': format_vector(ring, vectors[w].tolist()), 'i': i})
    logger.debug('is_modular(%s) = %s', sigma.kind, result[0])
    sigma._checks['modular'] = result
    return result


def require_support(sigma, caps=None, unchecked=False):
    if unchecked:
        if sigma.pseudo:
            logger.warning('running on the pseudo-support %s without axiom checks', sigma.kind)
        return
    if sigma.pseudo:
        raise HypothesisError('{} is a pseudo-support; pass unchecked to use it.'.format(sigma.kind))
    if sigma.known_modular():
        return
    holds, witness = is_support(sigma, caps)
    if not holds:
        raise HypothesisError('The support fails axiom {}.'.format(witness['axiom']), witness=witness)


def require_modular(sigma, caps=None, unchecked=False):
    """Raises HypothesisError unless sigma is a modular support; trusts the construction when it can."""
    if unchecked:
        if sigma.pseudo or sigma.known_modular() is not True:
            logger.warning('running on %s without checking modularity', sigma.kind)
        return
    if sigma.pseudo:
        raise HypothesisError('{} is a pseudo-support; pass unchecked to use it.'.format(sigma.kind))
    if sigma.known_modular():
        return
    holds, witness = is_modular(sigma, caps)
    if not holds:
        raise HypothesisError('The support is not modular.', witness=witness)


@dataclass
class ModularDecomposition:
    """
    sigma = sigma_1 x ... x sigma_l up to a permutation of the value coordinates

    Attributes
    ----------
    partition : list of list of int
        Value coordinates owned by each ring factor
    supports : list of TableSupport
        sigma_i on R_i^n, valued on its own coordinates
    """
    partition: list
    supports: list

    def to_json(self):
        return {'partition': self.partition, 'supports': [support.to_json() for support in self.supports]}


def decompose_modular(sigma, caps=None, unchecked=False):
    """
    Splits a modular support along the ring factors through sigma_i(v_i) = sigma(e_i v)

    Coordinates go to the first factor whose sigma_i touches them, untouched coordinates
    to factor 0. The result is verified by rebuilding sigma on all of R^n.
    """
    caps = resolve_caps(caps)
    if not unchecked:
        holds, witness = is_modular(sigma, caps)
        if not holds:
            raise HypothesisError('decompose_modular needs a modular support.', witness=witness)
    ring, n = sigma.ring, sigma.n
    factor_tables, owner = [], [None] * sigma.u
    for i in range(ring.ell):
        local = all_vectors(ring.factor_ring(i), n)
        table = sigma.evaluate_many(local * ring.strides[i])
        factor_tables.append((local, table))
        for x in np.flatnonzero(table.any(axis=0)):
            if owner[x] is None:
                owner[x] = i
            elif not unchecked:
                raise MismatchError('Coordinate {} is touched by factors {} and {}.'.format(int(x), owner[x], i))
    owner = [0 if i is None else i for i in owner]
    partition = [[x for x in range(sigma.u) if owner[x] == i] for i in range(ring.ell)]

    supports = []
    for i, (local, table) in enumerate(factor_tables):
        factor = ring.factor_ring(i)
        block = table[:, partition[i]]
        entries = {','.join(str(factor.label(a)) for a in v): row
                   for v, row in zip(local.tolist(), block.tolist())}
        supports.append(TableSupport(factor, entries, n))

    vectors = all_vectors(ring, n)
    rebuilt = np.zeros((len(vectors), sigma.u), dtype=np.int64)
    for i, support in enumerate(supports):
        projected = np.array([ring.vproject(v, i) for v in vectors.tolist()], dtype=np.int64).reshape(-1, n)
        rebuilt[:, partition[i]] = support.evaluate_many(projected)
    mismatch = np.flatnonzero((rebuilt != sigma.value_table(caps)).any(axis=1))
    if len(mismatch):
        raise MismatchError('Product of the factor supports differs from sigma.',
                            witness=format_vector(ring, vectors[mismatch[0]].tolist()))
    return ModularDecomposition(partition, supports)


def factor_join_holds(sigma, caps=None):
    """Exhaustive check of sigma(v) = sigma(e_1 v) v ... v sigma(e_l v)."""
    ring = sigma.ring
    vectors = all_vectors(ring, sigma.n)
    table = sigma.value_table(caps)
    joined = np.zeros_like(table)
    for e in ring.idempotent_indices:
        joined = np.maximum(joined, sigma.evaluate_many(ring.mul_table[e, vectors]))
    return bool(np.array_equal(joined, table))


def unit_eliminator(sigma, v, w, i):
    """
    A unit r with sigma(v - r w)_i = 0, for socle vectors v, w with sigma(v)_i and sigma(w)_i nonzero
    """
    ring = sigma.ring
    if sigma(v)[i] == 0 or sigma(w)[i] == 0:
        raise HypothesisError('Coordinate {} is not in both supports.'.format(i))
    for r in sorted(ring.unit_list, key=ring.label):
        if sigma(ring.vsub(v, ring.vscale(r, w)))[i] == 0:
            return r
    raise HypothesisError('No unit clears coordinate {}; the support is not modular on these vectors.'.format(i),
                          witness={'v': format_vector(ring, v), 'w': format_vector(ring, w), 'i': i})


def code_support(sigma, code, unchecked=False, caps=None):
    """
    sigma(C), the join of sigma over the generators of C

    Under unchecked, the join over all codewords is computed as well and a difference is logged.
    """
    verify_same_ring(sigma.ring, code.ring)
    verify_length(code.zero, sigma.n)
    require_support(sigma, caps, unchecked)
    value = (0,) * sigma.u
    if code.generators:
        value = tuple(int(x) for x in sigma.evaluate_many(np.array(code.generators)).max(axis=0))
    if unchecked and sigma.pseudo:
        full = join_over_codewords(sigma, code)
        if full != value:
            logger.warning('generator join %s differs from codeword join %s', value, full)
    return value


def join_over_codewords(sigma, code):
    words = np.array(sorted(code.codewords), dtype=np.int64)
    return tuple(int(x) for x in sigma.evaluate_many(words).max(axis=0))
