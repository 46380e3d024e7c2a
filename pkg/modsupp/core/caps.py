import json
import logging
import os

from .verifications import ValidationError, verify_object

logger = logging.getLogger(__name__)

CAPS_ENV_VAR = 'MODSUPP_CAPS'

DEFAULT_CAPS = {
    # work units of an incremental span closure, min(|R|^k, |R|^n)
    'enumeration': 2 ** 24,
    # |R|^n for exhaustive axiom checks
    'exhaustive_vectors': 2 ** 16,
    # |R|^(2n+1) * u for the modularity check
    'modular_work': 2 ** 28,
    # |C| for the all-submodules oracle
    'submodules': 256,
    # |C| and depth for the minimal generating set search
    'genset_search': 64,
    'genset_size': 6,
    # number of minimal generators of a monomial ideal
    'taylor_generators': 20,
    'matroid_length': 16,
    # |R| for dense arithmetic tables
    'ring_table': 1024,
}


def _parse_env(text):
    text = text.strip()
    if not text:
        return {}
    if text.startswith('{'):
        try:
            return json.loads(text)
        except json.JSONDecodeError as e:
            raise ValidationError('{} is not valid JSON: {}'.format(CAPS_ENV_VAR, e)) from e
    parsed = {}
    for item in text.split(','):
        key, _, value = item.partition('=')
        try:
            parsed[key.strip()] = int(value)
        except ValueError as e:
            raise ValidationError('{} entry "{}" is not key=integer.'.format(CAPS_ENV_VAR, item)) from e
    return parsed


def resolve_caps(caps=None):
    """
    Merges the default caps with the MODSUPP_CAPS environment variable and explicit overrides

    Parameters
    ----------
    caps : dict, default None
        Explicit overrides, highest priority

    Returns
    -------
    dict
        Complete caps mapping
    """
    if caps is None:
        caps = {}
    verify_object(caps, 'caps')
    _env_caps = _parse_env(os.environ.get(CAPS_ENV_VAR, ''))
    resolved = {**DEFAULT_CAPS, **_env_caps, **caps}

    unknown = sorted(set(resolved) - set(DEFAULT_CAPS))
    if unknown:
        raise ValidationError('Unknown caps {}.'.format(', '.join(unknown)) +
                              ' Known caps are {}.'.format(', '.join(sorted(DEFAULT_CAPS))))
    for key, value in resolved.items():
        if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
            raise ValidationError('Cap "{}" must be a positive integer, got {!r}.'.format(key, value))
    if _env_caps:
        logger.debug('caps overridden from %s: %s', CAPS_ENV_VAR, _env_caps)
    return resolved
