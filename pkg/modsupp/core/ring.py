"""
Finite principal ideal rings presented as products of chain rings Z_{p^e} and GF(p^m).

Elements are handled internally as integer indices into the ring. The index of an
element is the mixed-radix number formed by its per-factor indices, factor 0 being the
least significant digit. A Zpe residue is its own factor index; a GF residue with
coefficient vector (c_0, ..., c_{m-1}) has factor index c_0 + c_1 p + ... + c_{m-1} p^{m-1}.
"""
import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property, reduce

import numpy as np
from sympy import factorint

from .caps import resolve_caps
from .verifications import (ValidationError, verify_cap, verify_integers, verify_list, verify_object, verify_prime,
                            verify_same_ring)

logger = logging.getLogger(__name__)

# constant term first
BUILTIN_MODULI = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (3, 2): (1, 0, 1),
}


def _poly_trim(a):
    a = list(a)
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, modulus, p):
    """Remainder of a modulo a monic polynomial, coefficients constant term first."""
    a = [c % p for c in a]
    degree = len(modulus) - 1
    for k in range(len(a) - 1, degree - 1, -1):
        coefficient = a[k]
        if coefficient:
            shift = k - degree
            for j, c in enumerate(modulus):
                a[shift + j] = (a[shift + j] - coefficient * c) % p
    return a[:degree] + [0] * max(0, degree - len(a))


def _poly_mul(a, b, p):
    product = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                product[i + j] = (product[i + j] + x * y) % p
    return product


def is_irreducible(modulus, p):
    """
    Exhaustive factor search: a degree-m polynomial over F_p is irreducible when no monic
    polynomial of degree 1..m//2 divides it.
    """
    modulus = _poly_trim([c % p for c in modulus])
    degree = len(modulus) - 1
    if degree < 1:
        return False
    inverse_lead = pow(modulus[-1], -1, p)
    monic = [(c * inverse_lead) % p for c in modulus]
    for d in range(1, degree // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            divisor = list(tail) + [1]
            if not any(_poly_mod(monic, divisor, p)):
                return False
    return True


def default_modulus(p, m):
    """Built-in modulus for F_4, F_8, F_9; otherwise the first monic irreducible of degree m."""
    if (p, m) in BUILTIN_MODULI:
        return BUILTIN_MODULI[(p, m)]
    for tail in itertools.product(range(p), repeat=m):
        candidate = tail[::-1] + (1,)
        if is_irreducible(candidate, p):
            return candidate
    raise ValidationError('No irreducible polynomial of degree {} over F_{}.'.format(m, p))


@dataclass(frozen=True)
class ChainFactor:
    """
    One chain-ring factor, either Z_{p^e} or GF(p^m)

    Attributes
    ----------
    kind : str
        "Zpe" or "GF"
    p : int
        Characteristic prime
    e : int
        Chain length of Z_{p^e} (1 for GF)
    m : int
        Extension degree of GF(p^m) (1 for Zpe)
    modulus : tuple
        Monic irreducible polynomial of degree m, constant term first (GF only)
    """
    kind: str
    p: int
    e: int = 1
    m: int = 1
    modulus: tuple = ()

    def __post_init__(self):
        if self.kind not in ('Zpe', 'GF'):
            raise ValidationError('Unknown factor kind "{}". Use "Zpe" or "GF".'.format(self.kind))
        verify_prime(self.p)
        if self.kind == 'Zpe':
            if not isinstance(self.e, int) or self.e < 1:
                raise ValidationError('Zpe chain length e must be >= 1, got {}.'.format(self.e))
            if self.m != 1 or self.modulus:
                raise ValidationError('Zpe factors take no extension degree or modulus.')
            return
        if not isinstance(self.m, int) or self.m < 1 or self.e != 1:
            raise ValidationError('GF factors need m >= 1 and no chain length, got m={}, e={}.'.format(self.m,
                                                                                                     self.e))
        modulus = tuple(self.modulus) if self.modulus else default_modulus(self.p, self.m)
        modulus = tuple(c % self.p for c in modulus)
        if len(_poly_trim(modulus)) != self.m + 1:
            raise ValidationError('GF({}^{}) modulus {} does not have degree {}.'.format(self.p, self.m,
                                                                                       list(self.modulus), self.m))
        if not is_irreducible(modulus, self.p):
            raise ValidationError('Modulus {} is reducible over F_{}.'.format(list(modulus), self.p))
        inverse_lead = pow(modulus[-1], -1, self.p)
        object.__setattr__(self, 'modulus', tuple((c * inverse_lead) % self.p for c in modulus))

    def __str__(self):
        if self.kind == 'Zpe':
            return 'Z_{}'.format(self.p ** self.e)
        return 'GF({})'.format(self.p ** self.m)

    @property
    def size(self):
        return self.p ** (self.e if self.kind == 'Zpe' else self.m)

    @property
    def residue_field_size(self):
        return self.p if self.kind == 'Zpe' else self.p ** self.m

    @property
    def epsilon(self):
        return self.e if self.kind == 'Zpe' else 1

    @property
    def alpha(self):
        """Index of the generator of the maximal ideal."""
        return self.p % self.size if self.kind == 'Zpe' else 0

    def residue(self, index):
        if self.kind == 'Zpe':
            return index
        return tuple((index // self.p ** k) % self.p for k in range(self.m))

    def index(self, residue):
        if self.kind == 'Zpe':
            if isinstance(residue, (list, tuple)):
                raise ValidationError('Z_{} residues are integers, got {}.'.format(self.size, residue))
            return residue % self.size
        if isinstance(residue, int):
            if not 0 <= residue < self.size:
                raise ValidationError('GF({}) label {} out of range.'.format(self.size, residue))
            return residue
        coefficients = list(residue) + [0] * (self.m - len(residue))
        reduced = _poly_mod(coefficients, self.modulus, self.p)
        return sum(c * self.p ** k for k, c in enumerate(reduced))

    def valuation(self, index):
        """Largest j with index in (alpha^j); epsilon for zero."""
        if index == 0:
            return self.epsilon
        if self.kind == 'GF':
            return 0
        j = 0
        while index % self.p == 0:
            index //= self.p
            j += 1
        return j

    @cached_property
    def add_table(self):
        if self.kind == 'Zpe':
            idx = np.arange(self.size)
            return (idx[:, None] + idx[None, :]) % self.size
        digits = np.array([self.residue(i) for i in range(self.size)], dtype=np.int64)
        summed = (digits[:, None, :] + digits[None, :, :]) % self.p
        return summed @ (self.p ** np.arange(self.m))

    @cached_property
    def mul_table(self):
        if self.kind == 'Zpe':
            idx = np.arange(self.size)
            return (idx[:, None] * idx[None, :]) % self.size
        table = np.zeros((self.size, self.size), dtype=np.int64)
        for a in range(self.size):
            for b in range(a, self.size):
                product = _poly_mod(_poly_mul(list(self.residue(a)), list(self.residue(b)), self.p),
                                    self.modulus, self.p)
                table[a, b] = table[b, a] = self.index(product)
        return table

    def is_unit(self, index):
        return index % self.p != 0 if self.kind == 'Zpe' else index != 0

    def to_json(self):
        if self.kind == 'Zpe':
            return {'kind': 'Zpe', 'p': self.p, 'e': self.e}
        return {'kind': 'GF', 'p': self.p, 'm': self.m, 'modulus': list(self.modulus)}


@dataclass(frozen=True)
class RadicalData:
    alpha: tuple
    epsilon: tuple
    residue_field_sizes: tuple


@dataclass(frozen=True)
class RingSpec:
    """
    A finite PIR R = R_1 x ... x R_l given by its ordered chain-ring factors

    Attributes
    ----------
    factors : tuple of ChainFactor
    modulus_m : int, default None
        Set when the ring was built as Z_m; elements are then read and written as
        integers mod m through the CRT bijection
    """
    factors: tuple
    modulus_m: int = None

    def __post_init__(self):
        if len(self.factors) < 1:
            raise ValidationError('A ring needs at least one factor.')
        object.__setattr__(self, 'factors', tuple(self.factors))

    def __str__(self):
        if self.modulus_m is not None:
            return 'Z_{}'.format(self.modulus_m)
        return ' x '.join(str(factor) for factor in self.factors)

    @property
    def ell(self):
        return len(self.factors)

    @cached_property
    def size(self):
        return reduce(lambda a, b: a * b, (factor.size for factor in self.factors), 1)

    @cached_property
    def strides(self):
        strides = [1]
        for factor in self.factors[:-1]:
            strides.append(strides[-1] * factor.size)
        return tuple(strides)

    def digits(self, index):
        return tuple((index // stride) % factor.size for stride, factor in zip(self.strides, self.factors))

    def from_digits(self, digits):
        return sum(d * stride for d, stride in zip(digits, self.strides))

    @cached_property
    def _digit_array(self):
        idx = np.arange(self.size)
        return np.stack([(idx // stride) % factor.size
                         for stride, factor in zip(self.strides, self.factors)], axis=1)

    def _combine(self, table_name):
        digits = self._digit_array
        total = np.zeros((self.size, self.size), dtype=np.int64)
        for i, (stride, factor) in enumerate(zip(self.strides, self.factors)):
            table = getattr(factor, table_name)
            total += table[digits[:, i][:, None], digits[:, i][None, :]] * stride
        return total

    @cached_property
    def add_table(self):
        return self._combine('add_table')

    @cached_property
    def mul_table(self):
        return self._combine('mul_table')

    @cached_property
    def add_rows(self):
        return self.add_table.tolist()

    @cached_property
    def mul_rows(self):
        return self.mul_table.tolist()

    @cached_property
    def neg(self):
        return np.argmin(self.add_table, axis=1).tolist()

    @cached_property
    def one(self):
        return self.from_digits([1] * self.ell)

    @cached_property
    def units(self):
        return [all(factor.is_unit(d) for factor, d in zip(self.factors, self.digits(a)))
                for a in range(self.size)]

    @cached_property
    def unit_list(self):
        return [a for a in range(self.size) if self.units[a]]

    @cached_property
    def inverses(self):
        """Inverse index of every unit, None for non-units."""
        is_one = self.mul_table == self.one
        return [int(np.argmax(is_one[a])) if self.units[a] else None for a in range(self.size)]

    @cached_property
    def alpha(self):
        return self.from_digits([factor.alpha for factor in self.factors])

    @cached_property
    def idempotent_indices(self):
        return tuple(self.embed(1, i) for i in range(self.ell))

    def project(self, index, i):
        return (index // self.strides[i]) % self.factors[i].size

    def embed(self, factor_index, i):
        return factor_index * self.strides[i]

    def factor_ring(self, i):
        return RingSpec((self.factors[i],))

    @cached_property
    def _labels(self):
        if self.modulus_m is None:
            return list(range(self.size))
        labels = [0] * self.size
        for k in range(self.modulus_m):
            labels[self.from_digits([k % factor.size for factor in self.factors])] = k
        return labels

    @cached_property
    def _label_index(self):
        return {label: index for index, label in enumerate(self._labels)}

    def label(self, index):
        """Integer I/O form of an element."""
        return self._labels[index]

    def parse(self, obj):
        """Element index from its integer label or its per-factor residue list."""
        if isinstance(obj, bool):
            raise ValidationError('Ring elements are integers or residue lists, got {!r}.'.format(obj))
        if isinstance(obj, int):
            if self.modulus_m is not None:
                return self._label_index[obj % self.modulus_m]
            if not 0 <= obj < self.size:
                raise ValidationError('Element label {} out of range for {}.'.format(obj, self))
            return obj
        if isinstance(obj, (list, tuple)) and len(obj) == self.ell:
            return self.from_digits([factor.index(residue) for factor, residue in zip(self.factors, obj)])
        raise ValidationError('Cannot read {!r} as an element of {}.'.format(obj, self))

    def element(self, obj):
        return RingElem(self, self.parse(obj))

    # vector kernels on index tuples
    def vadd(self, v, w):
        add = self.add_rows
        return tuple(add[a][b] for a, b in zip(v, w))

    def vsub(self, v, w):
        add, neg = self.add_rows, self.neg
        return tuple(add[a][neg[b]] for a, b in zip(v, w))

    def vscale(self, r, v):
        row = self.mul_rows[r]
        return tuple(row[a] for a in v)

    def vproject(self, v, i):
        return tuple(self.project(a, i) for a in v)

    def vcomponent(self, v, i):
        """e_i v as a vector over R."""
        return self.vscale(self.idempotent_indices[i], v)

    def to_json(self):
        if self.modulus_m is not None:
            return {'kind': 'Zm', 'm': self.modulus_m}
        return {'kind': 'product', 'factors': [factor.to_json() for factor in self.factors]}


@dataclass(frozen=True)
class RingElem:
    """An element of a RingSpec, stored by index."""
    ring: RingSpec = field(repr=False)
    index: int

    @property
    def residues(self):
        return tuple(factor.residue(d) for factor, d in zip(self.ring.factors, self.ring.digits(self.index)))

    def __int__(self):
        return self.ring.label(self.index)

    def __add__(self, other):
        return arith(self, other, 'add')

    def __sub__(self, other):
        return arith(self, other, 'sub')

    def __mul__(self, other):
        return arith(self, other, 'mul')

    def __neg__(self):
        return arith(self, None, 'neg')


def make_ring(description, caps=None):
    """
    Builds a validated RingSpec from its JSON description

    Parameters
    ----------
    description : dict
        {"kind": "Zm", "m": 6}, {"kind": "Zpe", "p": 2, "e": 2}, {"kind": "GF", "p": 3, "m": 2,
        "modulus": [1, 0, 1]} or {"kind": "product", "factors": [...]}
    caps : dict, default None
        Cap overrides, see resolve_caps

    Returns
    -------
    RingSpec
    """
    caps = resolve_caps(caps)
    if not isinstance(description, dict) or 'kind' not in description:
        raise ValidationError('Ring description must be an object with a "kind", got {!r}.'.format(description))
    kind = description['kind']
    if kind == 'Zm':
        m = description.get('m')
        if not isinstance(m, int) or m < 2:
            raise ValidationError('Z_m needs an integer m >= 2, got {!r}.'.format(m))
        factors = tuple(ChainFactor('Zpe', p, e) for p, e in sorted(factorint(m).items()))
        ring = RingSpec(factors, modulus_m=m)
    elif kind == 'product':
        parts = verify_list(description.get('factors') or [], 'Product ring factors')
        ring = RingSpec(tuple(_make_factor(part) for part in parts))
    elif kind in ('Zpe', 'GF'):
        ring = RingSpec((_make_factor(description),))
    else:
        raise ValidationError('Unknown ring kind "{}".'.format(kind))
    verify_cap(ring.size, caps, 'ring_table', '|R|')
    logger.debug('ring %s with %d elements', ring, ring.size)
    return ring


def _make_factor(description):
    kind = verify_object(description, 'Ring factor').get('kind')
    if kind == 'Zpe':
        return ChainFactor('Zpe', description.get('p'), description.get('e', 1))
    if kind == 'GF':
        modulus = verify_integers(verify_list(description.get('modulus') or [], 'GF modulus'), 'GF modulus')
        return ChainFactor('GF', description.get('p'), m=description.get('m', 1), modulus=tuple(modulus))
    raise ValidationError('Unknown factor kind "{}".'.format(kind))


def zm(m):
    return make_ring({'kind': 'Zm', 'm': m})


def galois_field(q):
    """GF(q) for a prime power q, as a single GF factor."""
    factors = factorint(q) if isinstance(q, int) and q >= 2 else {}
    if len(factors) != 1:
        raise ValidationError('q = {} is not a prime power.'.format(q))
    (p, m), = factors.items()
    return RingSpec((ChainFactor('GF', p, m=m),))


def arith(a, b, op):
    """
    Ring arithmetic on RingElem values

    Parameters
    ----------
    a, b : RingElem
        b is ignored for "neg"
    op : str
        One of "add", "mul", "neg", "sub"
    """
    ring = a.ring
    if op == 'neg':
        return RingElem(ring, ring.neg[a.index])
    verify_same_ring(ring, b.ring)
    if op == 'add':
        return RingElem(ring, ring.add_rows[a.index][b.index])
    if op == 'sub':
        return RingElem(ring, ring.add_rows[a.index][ring.neg[b.index]])
    if op == 'mul':
        return RingElem(ring, ring.mul_rows[a.index][b.index])
    raise ValidationError('Unknown operation "{}".'.format(op))


def is_unit(a):
    return a.ring.units[a.index]


def inverse(a):
    if not is_unit(a):
        raise ValidationError('{} is not a unit of {}.'.format(int(a), a.ring))
    return RingElem(a.ring, a.ring.inverses[a.index])


def idempotents(ring):
    return [RingElem(ring, index) for index in ring.idempotent_indices]


def radical_data(ring):
    return RadicalData(alpha=tuple(factor.alpha for factor in ring.factors),
                       epsilon=tuple(factor.epsilon for factor in ring.factors),
                       residue_field_sizes=tuple(factor.residue_field_size for factor in ring.factors))


def ring_axioms_hold(ring):
    """Exhaustive associativity, commutativity and distributivity of the arithmetic tables."""
    add, mul = ring.add_table, ring.mul_table
    idx = np.arange(ring.size)
    for table in (add, mul):
        if not np.array_equal(table, table.T):
            return False
        left = table[table[:, :, None], idx[None, None, :]]
        right = table[idx[:, None, None], table[None, :, :]]
        if not np.array_equal(left, right):
            return False
    # a(b + c) = ab + ac
    left = mul[idx[:, None, None], add[None, :, :]]
    right = add[mul[:, :, None], mul[:, None, :]]
    return bool(np.array_equal(left, right))
