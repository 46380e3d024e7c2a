import json
import os
import shutil

import pytest

from modsupp.core import base
from modsupp.core.base import ProblemManager, compare_expected, fixture_names, verify_fixtures
from modsupp.core.verifications import ValidationError


def test_bundled_fixtures():
    assert fixture_names() == ['chain-z4-full', 'chain-z4-two-term', 'chain-z6', 'even-weight', 'exasupp-table',
                               'expato', 'exz6', 'lee-z4', 'z6-example']


@pytest.mark.parametrize('name', fixture_names())
def test_fixture_passes(name):
    report = verify_fixtures([name])
    assert len(report)
    failures = report[~report['passed']]
    assert failures.empty, '\n'.join(failures['command'] + ': ' + failures['detail'])


def test_corrupted_expectation_is_reported(tmp_path, monkeypatch):
    shutil.copy(os.path.join(base.FIXTURES_DIR, 'exz6.json'), tmp_path / 'exz6.json')
    expected = {'checks': [{'command': 'invariants', 'expect': {'M': 3}},
                           {'command': 'socle', 'expect': {'size': 6}}]}
    (tmp_path / 'exz6.expected.json').write_text(json.dumps(expected))
    monkeypatch.setattr(base, 'FIXTURES_DIR', str(tmp_path))

    report = verify_fixtures()
    assert report['passed'].tolist() == [False, True]
    assert report.loc[0, 'detail'] == '$.M: expected 3, got 2'


def test_unknown_fixture():
    with pytest.raises(ValidationError):
        verify_fixtures(['nope'])


def test_compare_expected():
    assert compare_expected({'a': [1, {'b': 2}]}, {'a': [1, {'b': 2, 'c': 3}], 'd': 4}) == []
    assert compare_expected({'a': 1}, {}) == ['$.a: missing']
    assert compare_expected({'a': [1, 2]}, {'a': [1]}) == ['$.a: expected [1, 2], got [1]']
    assert compare_expected({'a': {'b': 1}}, {'a': 5}) == ['$.a: expected an object, got 5']


def test_problem_manager_options():
    problem = {'ring': {'kind': 'Zm', 'm': 6}, 'n': 2, 'code': [[2, 3]]}
    manager = ProblemManager.from_json(problem, {'char': 2})
    assert manager.options == {'caps': {}, 'char': 2, 'seed': 0, 'threads': None, 'unchecked': False}
    with pytest.raises(ValidationError):
        manager.run('socle-size')
    with pytest.raises(ValidationError):
        manager.run('check-support')
    with pytest.raises(ValidationError):
        ProblemManager.from_json({'ring': {'kind': 'Zm', 'm': 6}})
    with pytest.raises(ValidationError):
        ProblemManager.from_json(dict(problem, n=0))


def test_problem_manager_invariants():
    problem = {'ring': {'kind': 'Zm', 'm': 6}, 'n': 3,
               'support': {'kind': 'compose_linear', 'matrix': [[3, 4, 1], [5, 3, 3], [2, 4, 5]],
                           'inner': {'kind': 'pir', 'values': [[[2]], [[1]]]}},
               'code': [[3, 1, 2], [2, 4, 3]]}
    invariants = ProblemManager.from_json(problem).run('invariants')
    assert invariants['mu'] == [2, 2]
    assert invariants['code_weight'] == 9


def test_matroid_command():
    problem = {'ring': {'kind': 'GF', 'p': 2, 'm': 1}, 'n': 3, 'support': {'kind': 'hamming'},
               'code': [[1, 1, 1]]}
    payload = ProblemManager.from_json(problem).run('matroid')
    assert payload['circuits'] == [[0, 1, 2]]
    assert payload['independent_sets'] == [[], [0], [1], [2], [0, 1], [0, 2], [1, 2]]


def test_invariants_over_genset_cap():
    problem = {'ring': {'kind': 'Zm', 'm': 6}, 'n': 3, 'code': [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}
    invariants = ProblemManager.from_json(problem).run('invariants')
    assert invariants['size'] == 216
    assert (invariants['mu'], invariants['M']) == ([3, 3], 6)
    assert invariants['max_min_genset'] is None


def test_invariants_of_pseudo_support():
    problem = {'ring': {'kind': 'Zm', 'm': 4}, 'n': 3, 'support': {'kind': 'lee'}, 'code': [[1, 1, 0], [3, 2, 1]]}
    assert 'code_support' not in ProblemManager.from_json(problem).run('invariants')
    invariants = ProblemManager.from_json(problem, {'unchecked': True}).run('invariants')
    assert invariants['code_support'] == [1, 2, 1]
    assert invariants['codeword_join'] == [2, 2, 2]
