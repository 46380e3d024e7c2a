import logging

logger = logging.getLogger(__name__)


class ModsuppError(Exception):
    """Base class of every error raised by modsupp."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ValidationError(ModsuppError, ValueError):
    """Malformed input or violated precondition."""


class HypothesisError(ValidationError):
    """Input violates the hypotheses of the requested computation."""


class CapExceededError(ModsuppError):
    """An exhaustive search would exceed its configured cap."""


class MismatchError(ModsuppError, AssertionError):
    """An internal cross-check failed."""


def verify_prime(p):
    from sympy import isprime
    if not isinstance(p, int) or not isprime(p):
        raise ValidationError('p = {} is not a prime.'.format(p))


def verify_same_ring(ring, other):
    if ring != other:
        raise ValidationError('Ring mismatch: {} and {}.'.format(ring, other))


def verify_length(vector, n):
    if len(vector) != n:
        raise ValidationError('Vector {} has length {}, expected {}.'.format(list(vector), len(vector), n))


def verify_cap(value, caps, key, what):
    # caps come from resolve_caps, every key is present
    limit = caps[key]
    if value > limit:
        raise CapExceededError('{} = {} exceeds the "{}" cap of {}.'.format(what, value, key, limit) +
                               ' Raise it through MODSUPP_CAPS if this is intended.')


def verify_nonzero_code(code, operation):
    if code.is_zero():
        raise HypothesisError('{} requires a nonzero code.'.format(operation))


def verify_binary_values(values):
    bad = [value for value in values if any(x > 1 for x in value)]
    if bad:
        raise HypothesisError('Support takes the value {} outside {{0,1}}^u.'.format(list(bad[0])))


def verify_field(ring):
    if len(ring.factors) != 1 or ring.factors[0].epsilon != 1:
        raise HypothesisError('Ring {} is not a finite field.'.format(ring))


def verify_list(value, what):
    if not isinstance(value, list):
        raise ValidationError('{} must be a list, got {!r}.'.format(what, value))
    return value


def verify_object(value, what):
    if not isinstance(value, dict):
        raise ValidationError('{} must be an object, got {!r}.'.format(what, value))
    return value


def verify_integers(values, what):
    if any(not isinstance(x, int) or isinstance(x, bool) for x in values):
        raise ValidationError('{} must hold integers, got {!r}.'.format(what, values))
    return values
