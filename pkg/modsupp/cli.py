"""
modsupp command line: reads a problem file, runs one computation and writes a single JSON
document (or a text table) to stdout.
"""
import functools
import json
import logging
import sys

import click
import dask
import pandas as pd

from .core.base import ProblemManager, betti_report, estimate_report, verify_fixtures
from .core.monomial import BettiTable, ideal_from_text
from .core.verifications import CapExceededError, MismatchError, ValidationError

logger = logging.getLogger(__name__)

EXIT_VALIDATION = 2
EXIT_CAP = 3
EXIT_MISMATCH = 4


def _fail(error, code):
    payload = {'error': {'type': type(error).__name__, 'message': str(error),
                         'witness': getattr(error, 'witness', None)}}
    click.echo(json.dumps(payload, indent=2))
    raise SystemExit(code)


def _table(payload):
    if 'multigraded' in payload:
        multigraded = {(entry['r'], tuple(entry['a'])): entry['rank'] for entry in payload['multigraded']}
        frame = BettiTable(multigraded, payload['char']).table()
        frame.columns.name = None
        return frame
    flat = pd.json_normalize(payload, sep='.').T
    flat.columns = ['value']
    return flat


def _emit(payload, output_format):
    if output_format == 'table':
        frame = payload if isinstance(payload, pd.DataFrame) else _table(payload)
        click.echo(frame.to_string())
    else:
        click.echo(json.dumps(payload, indent=2))


def _guarded(command):
    """Maps library errors to the documented exit codes."""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except ValidationError as e:
            _fail(e, EXIT_VALIDATION)
        except CapExceededError as e:
            _fail(e, EXIT_CAP)
        except MismatchError as e:
            _fail(e, EXIT_MISMATCH)
    return wrapper


def problem_options(command):
    """Problem file argument and the option flags shared by every problem command."""
    decorators = [
        click.argument('problem', type=click.Path(exists=True, dir_okay=False)),
        click.option('--format', 'output_format', type=click.Choice(['json', 'table']), default='json',
                     help='Single JSON document or a text table'),
        click.option('--char', type=int, default=None,
                     help='Field characteristic for Betti numbers, 0 or a prime'),
        click.option('--seed', type=int, default=None, help='Master seed'),
        click.option('--unchecked', is_flag=True, default=False,
                     help='Run on pseudo-supports and non-modular supports'),
        click.option('--threads', type=int, default=None, help='Number of dask worker threads'),
    ]
    for decorator in reversed(decorators):
        command = decorator(command)
    return command


def _load(problem, char, seed, unchecked, threads):
    overrides = {key: value for key, value in
                 (('char', char), ('seed', seed), ('threads', threads)) if value is not None}
    if unchecked:
        overrides['unchecked'] = True
    return ProblemManager.from_file(problem, overrides)


def _problem_command(name, **run_kwargs):
    def body(problem, output_format, char, seed, unchecked, threads, **extra):
        payload = _load(problem, char, seed, unchecked, threads).run(name, **{**run_kwargs, **extra})
        _emit(payload, output_format)
        if isinstance(payload, dict) and payload.get('mismatch'):
            raise SystemExit(EXIT_MISMATCH)
    return body


@click.group()
@click.option('-v', '--verbose', count=True, help='Log progress to stderr, repeat for debug output')
def cli(verbose):
    """Support functions, generalized weights and Betti numbers of codes over finite principal ideal rings."""
    if verbose:
        logging.basicConfig(stream=sys.stderr, level=logging.DEBUG if verbose > 1 else logging.INFO,
                            format='%(asctime)s %(name)s %(levelname)s %(message)s')


@cli.command('check-support')
@problem_options
@_guarded
def check_support(**kwargs):
    """Exhaustive check of the support axioms."""
    _problem_command('check-support')(**kwargs)


@cli.command('check-modular')
@problem_options
@_guarded
def check_modular(**kwargs):
    """Exhaustive check of modularity."""
    _problem_command('check-modular')(**kwargs)


@cli.command('minimal-codewords')
@problem_options
@_guarded
def minimal_codewords(**kwargs):
    """Minimal codewords grouped by support."""
    _problem_command('minimal-codewords')(**kwargs)


@cli.command('socle')
@problem_options
@_guarded
def socle(**kwargs):
    """Subcode annihilated by the Jacobson radical."""
    _problem_command('socle')(**kwargs)


@cli.command('invariants')
@problem_options
@_guarded
def invariants(**kwargs):
    """Size, mu per ring factor, M and the largest minimal generating set."""
    _problem_command('invariants')(**kwargs)


@cli.command('ideal')
@problem_options
@_guarded
def ideal(problem, output_format, char, seed, unchecked, threads):
    """Monomial ideal I_C; the table format prints one monomial per line."""
    manager = _load(problem, char, seed, unchecked, threads)
    payload = manager.run('ideal')
    if output_format == 'table':
        click.echo(''.join(' '.join(str(x) for x in g) + '\n' for g in payload['generators']), nl=False)
    else:
        _emit(payload, output_format)


@cli.command('betti')
@click.option('--ideal', 'ideal_file', type=click.Path(exists=True, dir_okay=False), default=None,
              help='Monomial ideal in text form instead of a problem file')
@click.option('--format', 'output_format', type=click.Choice(['json', 'table']), default='json')
@click.option('--char', type=int, default=None, help='Field characteristic, 0 or a prime')
@click.option('--unchecked', is_flag=True, default=False)
@click.option('--threads', type=int, default=None)
@click.argument('problem', type=click.Path(exists=True, dir_okay=False), required=False)
@_guarded
def betti(ideal_file, output_format, char, unchecked, threads, problem):
    """Graded Betti numbers of S/I_C, or of the ideal given with --ideal."""
    if ideal_file is not None:
        with open(ideal_file) as f:
            monomial_ideal = ideal_from_text(f.read())
        config = {} if threads is None else {'scheduler': 'threads', 'num_workers': threads}
        with dask.config.set(**config):
            payload = betti_report(monomial_ideal, char or 0)
    elif problem is not None:
        payload = _load(problem, char, None, unchecked, threads).run('betti')
    else:
        raise ValidationError('betti needs a problem file or --ideal.')
    _emit(payload, output_format)


@cli.command('weights')
@problem_options
@click.option('--method', type=click.Choice(['fast', 'oracle', 'betti', 'all']), default='all')
@_guarded
def weights(**kwargs):
    """Generalized weights; exits 4 when routes disagree."""
    _problem_command('weights')(**kwargs)


@cli.command('matroid')
@problem_options
@_guarded
def matroid(**kwargs):
    """Circuits and independent sets of the code's matroid."""
    _problem_command('matroid')(**kwargs)


@cli.command('estimate-maximal')
@click.option('--q', type=int, required=True)
@click.option('--n', type=int, required=True)
@click.option('--k', type=int, required=True)
@click.option('--samples', type=int, default=0, help='Monte Carlo samples, none by default')
@click.option('--seed', type=int, default=0)
@click.option('--threads', type=int, default=None)
@click.option('--format', 'output_format', type=click.Choice(['json', 'table']), default='json')
@_guarded
def estimate_maximal(q, n, k, samples, seed, threads, output_format):
    """Share of k-dimensional codes in F_q^n generated by their maximal codewords."""
    config = {} if threads is None else {'scheduler': 'threads', 'num_workers': threads}
    with dask.config.set(**config):
        _emit(estimate_report(q, n, k, samples, seed), output_format)


@cli.command('verify-paper')
@click.option('--only', multiple=True, help='Fixture name, can be given several times')
@click.option('--format', 'output_format', type=click.Choice(['json', 'table']), default='json')
@_guarded
def verify_paper(only, output_format):
    """Runs the bundled fixtures and prints a pass/fail matrix."""
    report = verify_fixtures(list(only) or None)
    if output_format == 'table':
        _emit(report, output_format)
    else:
        _emit({'passed': bool(report['passed'].all()), 'checks': report.to_dict(orient='records')}, output_format)
    if not report['passed'].all():
        raise SystemExit(EXIT_MISMATCH)


def main():
    cli(prog_name='modsupp')


if __name__ == '__main__':
    main()
