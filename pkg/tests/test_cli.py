import json
import os
from fractions import Fraction

import pytest
from click.testing import CliRunner

from modsupp.cli import cli
from modsupp.core.base import FIXTURES_DIR


def fixture_path(name):
    return os.path.join(FIXTURES_DIR, name + '.json')


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args, env=None):
        return runner.invoke(cli, [str(arg) for arg in args], env=env)
    return invoke


def test_weights_all_routes(run):
    result = run('weights', fixture_path('z6-example'), '--method', 'all')
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload['agree'] and not payload['mismatch']
    assert [profile['d'] for profile in payload['profiles']] == [[1, 3, 5, 9]] * 3


def test_check_modular(run):
    result = run('check-modular', fixture_path('expato'))
    assert result.exit_code == 0
    assert json.loads(result.output) == {'modular': False, 'witness': {'v': [0, 1], 'w': [1, 0], 'i': 1}}


def test_pseudo_support_needs_unchecked(run):
    result = run('weights', fixture_path('lee-z4'))
    assert result.exit_code == 2
    assert json.loads(result.output)['error']['type'] == 'HypothesisError'


def test_route_disagreement_exits_4(run):
    result = run('weights', fixture_path('lee-z4'), '--unchecked')
    assert result.exit_code == 4
    payload = json.loads(result.output)
    assert payload['mismatch']
    assert [profile['d'] for profile in payload['profiles']] == [[2, 3], [4, 6], [2, 3]]


@pytest.mark.parametrize('method', ['betti', 'fast'])
def test_single_unchecked_route_exits_4(run, method):
    result = run('weights', fixture_path('lee-z4'), '--method', method, '--unchecked')
    assert result.exit_code == 4
    (profile,) = json.loads(result.output)['profiles']
    assert profile['d'] == [2, 3]
    assert profile['mismatch'].endswith('the submodule oracle gives d = [4, 6]')


def test_betti_mismatch_exits_4(run):
    result = run('weights', fixture_path('expato'), '--method', 'betti', '--unchecked')
    assert result.exit_code == 4
    assert json.loads(result.output)['profiles'][0]['mismatch'] == 'pd(S/I_C) = 1 differs from M(C) = 2'


def test_cap_exceeded_exits_3(run):
    result = run('weights', fixture_path('z6-example'), '--method', 'oracle', env={'MODSUPP_CAPS': 'submodules=4'})
    assert result.exit_code == 3
    error = json.loads(result.output)['error']
    assert error['type'] == 'CapExceededError'
    assert 'submodules' in error['message']


def test_minimal_codewords_are_deterministic(run):
    first = run('minimal-codewords', fixture_path('z6-example'), '--threads', 2)
    second = run('minimal-codewords', fixture_path('z6-example'))
    assert first.exit_code == second.exit_code == 0
    assert first.output == second.output


def test_ideal_table_format(run):
    result = run('ideal', fixture_path('z6-example'), '--format', 'table')
    assert result.exit_code == 0
    assert result.output.splitlines() == ['2 0 0 0 0 0', '0 1 0 1 0 0', '0 0 2 0 2 0', '0 0 0 0 0 1']


def test_betti_table_format(run):
    result = run('betti', fixture_path('even-weight'), '--format', 'table')
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[0].split() == ['2', '3', '4']
    assert lines[-1].split() == ['3', '0', '0', '3']


def test_betti_from_ideal_file(run, tmp_path):
    path = tmp_path / 'triangle.txt'
    path.write_text('# edges of a triangle\n1 1 0\n1 0 1\n0 1 1\n')
    result = run('betti', '--ideal', path, '--char', 3)
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload['pd'] == 2
    assert payload['coarse'] == {'1': {'2': 3}, '2': {'3': 2}}


def test_betti_needs_an_input(run):
    assert run('betti').exit_code == 2


def test_invalid_characteristic(run):
    result = run('betti', fixture_path('even-weight'), '--char', 4)
    assert result.exit_code == 2
    assert json.loads(result.output)['error']['type'] == 'ValidationError'


def test_invalid_problem_file(run, tmp_path):
    path = tmp_path / 'broken.json'
    path.write_text('{"ring": ')
    assert run('socle', path).exit_code == 2
    path.write_text(json.dumps({'ring': {'kind': 'Zm', 'm': 6}, 'n': 2, 'code': [[2, 3]], 'options': {'speed': 1}}))
    assert run('socle', path).exit_code == 2


@pytest.mark.parametrize('ring, support', [
    ({'kind': 'GF', 'p': 2, 'm': 1}, {'kind': 'table', 'entries': {'a': [0], '1': [1]}}),
    ({'kind': 'GF', 'p': 2, 'm': 1}, {'kind': 'product', 'parts': [5]}),
    ({'kind': 'product', 'factors': [5]}, {'kind': 'hamming'}),
])
def test_malformed_problem_nodes_exit_2(run, tmp_path, ring, support):
    path = tmp_path / 'malformed.json'
    path.write_text(json.dumps({'ring': ring, 'n': 1, 'support': support, 'code': [[1]]}))
    result = run('check-support', path)
    assert result.exit_code == 2
    assert json.loads(result.output)['error']['type'] == 'ValidationError'


def test_invariants_without_support(run):
    result = run('invariants', fixture_path('exz6'))
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload['max_min_genset'] == {'size': 2, 'witness': [[0, 3], [2, 0]]}
    assert 'code_support' not in payload


def test_estimate_maximal(run):
    result = run('estimate-maximal', '--q', 4, '--n', 3, '--k', 2)
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert Fraction(payload['estimate']) == Fraction(153, 693)
    assert payload['monte_carlo'] is None


def test_estimate_maximal_with_samples(run):
    result = run('estimate-maximal', '--q', 3, '--n', 2, '--k', 1, '--samples', 50, '--seed', 3)
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload['estimate'] == '0'
    assert payload['monte_carlo']['samples'] == 50
    assert payload['bound_holds']


def test_estimate_maximal_zero_denominator(run):
    assert run('estimate-maximal', '--q', 2, '--n', 2, '--k', 1).exit_code == 2


def test_verify_paper(run):
    result = run('verify-paper', '--only', 'z6-example', '--only', 'expato')
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload['passed']
    assert {check['fixture'] for check in payload['checks']} == {'z6-example', 'expato'}


def test_verify_paper_unknown_fixture(run):
    assert run('verify-paper', '--only', 'nope').exit_code == 2
