import glob
import json
import logging
import os

import dask
import pandas as pd

from .caps import resolve_caps
from .modules import Code, big_M, decompose, format_vector, max_min_genset, mu_local, socle
from .monomial import (betti, coarse_cancellations, ideal_of_code, independent_sets_from_ideal,
                       taylor_cancellation_report, weights_from_betti)
from .ring import make_ring
from .support import HammingSupport, code_support, is_modular, is_support, join_over_codewords, support_from_json
from .verifications import CapExceededError, MismatchError, ModsuppError, ValidationError, verify_list, verify_object
from .weights import (circuits, estimate_maximal, gen_weights_fast, gen_weights_oracle, matroid_independent_sets,
                      min_codewords, monte_carlo_maximal)

logger = logging.getLogger(__name__)

FIXTURES_DIR = os.path.join(os.path.dirname(__file__), 'fixtures')

PROBLEM_COMMANDS = ('check-support', 'check-modular', 'minimal-codewords', 'socle', 'invariants', 'ideal', 'betti',
                    'weights', 'matroid')

WEIGHT_METHODS = ('fast', 'oracle', 'betti')


class ProblemManager:
    """
    Handles one problem: a ring, a length, a support and a code, with the computations
    of the command line as methods returning JSON-ready dictionaries

    Attributes
    ----------
    ring : RingSpec
    n : int
    sigma : SupportSpec or None
    code : Code
    options : dict
        caps, char, seed, threads and unchecked

    Examples
    --------
    >> pm = ProblemManager.from_file('modsupp/core/fixtures/z6-example.json')
    >> pm.run('weights', method='all')['agree']
    True
    >> pm = ProblemManager.from_file('lee-z4.json', overrides={'unchecked': True})
    >> pm.run('weights', method='all')['mismatch']
    True
    """

    def __init__(self,
                 ring: dict,
                 n: int,
                 support: dict = None,
                 code: list = None,
                 options: dict = None
                 ):
        """

        Parameters
        ----------
        ring : dict
            Ring description, see make_ring
        n : int
            Code length
        support : dict, default None
            Support description, see support_from_json
        code : list, default None
            Generators in integer or per-factor residue form
        options : dict, default None
            Overrides of the default options

        """
        _options = {'caps': {}, 'char': 0, 'seed': 0, 'threads': None, 'unchecked': False}
        if options is None:
            options = _options
        else:
            verify_object(options, 'options')
            unknown = sorted(set(options) - set(_options))
            if unknown:
                raise ValidationError('Unknown options {}.'.format(', '.join(unknown)))
            options = {**_options, **options}
        self.options = options
        self.caps = resolve_caps(options['caps'])

        self.ring = make_ring(ring, self.caps)
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise ValidationError('n must be a positive integer, got {!r}.'.format(n))
        self.n = n
        self.sigma = None if support is None else support_from_json(support, self.ring, n, self.caps)
        self.code = Code.from_labels(self.ring, verify_list(code or [], 'code'), n=n, caps=self.caps)

    @classmethod
    def from_json(cls, obj, overrides=None):
        if not isinstance(obj, dict):
            raise ValidationError('A problem is a JSON object, got {!r}.'.format(type(obj).__name__))
        missing = [key for key in ('ring', 'n') if key not in obj]
        if missing:
            raise ValidationError('Problem is missing {}.'.format(', '.join(missing)))
        options = {**verify_object(obj.get('options') or {}, 'options'), **(overrides or {})}
        return cls(obj['ring'], obj['n'], obj.get('support'), obj.get('code'), options)

    @classmethod
    def from_file(cls, path, overrides=None):
        try:
            with open(path) as f:
                obj = json.load(f)
        except json.JSONDecodeError as e:
            raise ValidationError('{} is not valid JSON: {}'.format(path, e)) from e
        return cls.from_json(obj, overrides)

    @property
    def unchecked(self):
        return bool(self.options['unchecked'])

    def _support(self):
        if self.sigma is None:
            raise ValidationError('The problem has no support.')
        return self.sigma

    def _dask_config(self):
        threads = self.options['threads']
        if threads is None:
            return {}
        return {'scheduler': 'threads', 'num_workers': threads}

    def run(self, command, **kwargs):
        """Runs one command by its command-line name."""
        if command not in PROBLEM_COMMANDS:
            raise ValidationError('Unknown command "{}".'.format(command))
        logger.info('running %s', command)
        with dask.config.set(**self._dask_config()):
            return getattr(self, command.replace('-', '_'))(**kwargs)

    def check_support(self):
        holds, witness = is_support(self._support(), self.caps)
        return {'support': holds, 'witness': witness}

    def check_modular(self):
        holds, witness = is_modular(self._support(), self.caps, unchecked=self.unchecked)
        return {'modular': holds, 'witness': witness}

    def minimal_codewords(self):
        minimal = min_codewords(self.code, self._support(), self.unchecked, self.caps)
        return minimal.to_json(all_members=True)

    def socle(self):
        sub = socle(self.code)
        return {'generators': sub.to_json()['generators'], 'size': len(sub), 'M': big_M(sub)}

    def _max_min_genset(self):
        if len(self.code) > self.caps['genset_search']:
            logger.info('|C| = %d is over the genset_search cap, max_min_genset left out', len(self.code))
            return None
        try:
            size, witness = max_min_genset(self.code)
        except CapExceededError as e:
            logger.info('max_min_genset left out: %s', e)
            return None
        return {'size': size, 'witness': [format_vector(self.ring, v) for v in witness]}

    def invariants(self):
        """
        Size, mu per ring factor, M, the socle size and, within the genset_search cap, the
        largest minimal generating set; with a support also sigma(C). For a pseudo-support
        "codeword_join" is the join over every codeword, which can differ from sigma(C).
        """
        mu = [mu_local(part) for part in decompose(self.code)]
        # mu(C) of a product of local modules is the largest local mu
        result = {'size': len(self.code), 'mu': mu, 'mu_code': max(mu), 'M': sum(mu),
                  'socle_size': len(socle(self.code)), 'max_min_genset': self._max_min_genset()}
        if self.sigma is not None and (self.unchecked or not self.sigma.pseudo):
            value = code_support(self.sigma, self.code, self.unchecked, self.caps)
            result['code_support'] = list(value)
            result['code_weight'] = sum(value)
            if self.sigma.pseudo:
                result['codeword_join'] = list(join_over_codewords(self.sigma, self.code))
        return result

    def ideal(self):
        return ideal_of_code(self.code, self._support(), self.unchecked, self.caps).to_json()

    def betti(self):
        ideal = ideal_of_code(self.code, self._support(), self.unchecked, self.caps)
        return betti_report(ideal, self.options['char'], self.caps)

    def weights(self, method='all'):
        """
        Generalized weights by one route or by all of them

        Returns
        -------
        dict
            "profiles" in route order, "agree" and "mismatch"; mismatch is set when routes
            disagree, a route fails its own cross-check or reports a mismatch
        """
        sigma = self._support()
        routes = {
            'fast': lambda: gen_weights_fast(self.code, sigma, self.unchecked, self.caps),
            'oracle': lambda: gen_weights_oracle(self.code, sigma, self.unchecked, self.caps),
            'betti': lambda: weights_from_betti(self.code, sigma, self.options['char'], self.unchecked, self.caps),
        }
        if method == 'all':
            methods = list(WEIGHT_METHODS)
        elif method in routes:
            methods = [method]
        else:
            raise ValidationError('Unknown weights method "{}".'.format(method))

        profiles, payload, failed = [], [], False
        for name in methods:
            try:
                profile = routes[name]()
            except MismatchError as e:
                logger.warning('%s route failed its cross-check: %s', name, e)
                payload.append({'method': name, 'error': str(e)})
                failed = True
                continue
            failed = failed or profile.mismatch is not None
            profiles.append(profile)
            payload.append(profile.to_json())
        agree = not failed and all(profiles[0].agrees(other) for other in profiles[1:])
        if not agree:
            logger.warning('weight routes disagree: %s', [(p.method, p.M, p.d) for p in profiles])
        return {'profiles': payload, 'agree': agree, 'mismatch': not agree}

    def matroid(self):
        found = circuits(self.code, self._support(), self.unchecked, self.caps)
        independent = matroid_independent_sets(self.code)
        ideal = ideal_of_code(self.code, HammingSupport(self.ring, self.n), caps=self.caps)
        if independent_sets_from_ideal(ideal, self.n, self.caps) != independent:
            raise MismatchError('Independent sets of the code and of its ideal differ.')
        return {'circuits': [sorted(circuit) for circuit in found],
                'independent_sets': [list(a) for a in independent]}


def betti_report(ideal, char=0, caps=None):
    table = betti(ideal, char, caps)
    report = coarse_cancellations(taylor_cancellation_report(ideal, char, caps))
    return {**table.to_json(), 'ideal': ideal.to_json(), 'cancellations': report.to_dict(orient='records')}


def estimate_report(q, n, k, samples=0, seed=0, client=None):
    """
    The closed-form lower bound and, when samples > 0, its Monte Carlo counterpart

    bound_holds compares the sampled proportion with the formula minus three binomial
    standard errors.
    """
    estimate = estimate_maximal(q, n, k)
    result = {'q': q, 'n': n, 'k': k, 'estimate': str(estimate), 'estimate_value': float(estimate),
              'monte_carlo': None, 'bound_holds': None}
    if samples:
        sampled = monte_carlo_maximal(q, n, k, samples, seed, client=client)
        result['monte_carlo'] = sampled.to_json()
        result['bound_holds'] = sampled.proportion >= float(estimate) - 3 * sampled.standard_error
    return result


def fixture_names():
    paths = glob.glob(os.path.join(FIXTURES_DIR, '*.expected.json'))
    return sorted(os.path.basename(path)[:-len('.expected.json')] for path in paths)


def _as_builtin(payload):
    return json.loads(json.dumps(payload))


def compare_expected(expected, actual, path='$'):
    """
    Differences between an expected JSON fragment and an actual payload

    Dictionaries are compared on the expected keys only, lists elementwise.

    Returns
    -------
    list of str
    """
    if isinstance(expected, dict):
        if not isinstance(actual, dict):
            return ['{}: expected an object, got {!r}'.format(path, actual)]
        differences = []
        for key, value in expected.items():
            if key not in actual:
                differences.append('{}.{}: missing'.format(path, key))
            else:
                differences.extend(compare_expected(value, actual[key], '{}.{}'.format(path, key)))
        return differences
    if isinstance(expected, list):
        if not isinstance(actual, list) or len(actual) != len(expected):
            return ['{}: expected {!r}, got {!r}'.format(path, expected, actual)]
        return [d for i, (e, a) in enumerate(zip(expected, actual))
                for d in compare_expected(e, a, '{}[{}]'.format(path, i))]
    if expected != actual:
        return ['{}: expected {!r}, got {!r}'.format(path, expected, actual)]
    return []


def _run_check(problem, check):
    command = check['command']
    try:
        manager = ProblemManager.from_json(problem, check.get('options'))
        actual = _as_builtin(manager.run(command, **(check.get('args') or {})))
    except ModsuppError as e:
        if check.get('raises') == type(e).__name__:
            return []
        return ['{} raised {}: {}'.format(command, type(e).__name__, e)]
    if 'raises' in check:
        return ['{} returned instead of raising {}'.format(command, check['raises'])]
    return compare_expected(check.get('expect', {}), actual)


def verify_fixtures(only=None):
    """
    Runs the bundled fixtures against their expected outputs

    Parameters
    ----------
    only : list of str, default None
        Fixture names to run, all of them when None

    Returns
    -------
    pandas.DataFrame
        One row per check: fixture, command, passed, detail
    """
    names = fixture_names()
    if only:
        unknown = sorted(set(only) - set(names))
        if unknown:
            raise ValidationError('Unknown fixtures {}; known fixtures are {}.'.format(
                ', '.join(unknown), ', '.join(names)))
        names = [name for name in names if name in only]

    rows = []
    for name in names:
        with open(os.path.join(FIXTURES_DIR, name + '.json')) as f:
            problem = json.load(f)
        with open(os.path.join(FIXTURES_DIR, name + '.expected.json')) as f:
            expected = json.load(f)
        for check in expected['checks']:
            differences = _run_check(problem, check)
            if differences:
                logger.warning('fixture %s, %s: %s', name, check['command'], '; '.join(differences))
            rows.append({'fixture': name, 'command': check['command'], 'passed': not differences,
                         'detail': '; '.join(differences)})
    return pd.DataFrame(rows, columns=['fixture', 'command', 'passed', 'detail'])
