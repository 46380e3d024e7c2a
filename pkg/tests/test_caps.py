import pytest

from modsupp.core.caps import CAPS_ENV_VAR, DEFAULT_CAPS, resolve_caps
from modsupp.core.verifications import CapExceededError, ValidationError, verify_cap


def test_defaults():
    assert resolve_caps() == DEFAULT_CAPS
    assert resolve_caps()['taylor_generators'] == 20


def test_env_json(monkeypatch):
    monkeypatch.setenv(CAPS_ENV_VAR, '{"submodules": 10}')
    assert resolve_caps()['submodules'] == 10


def test_env_key_values(monkeypatch):
    monkeypatch.setenv(CAPS_ENV_VAR, 'submodules=10, genset_size=3')
    caps = resolve_caps()
    assert caps['submodules'] == 10
    assert caps['genset_size'] == 3


def test_explicit_beats_env(monkeypatch):
    monkeypatch.setenv(CAPS_ENV_VAR, 'submodules=10')
    assert resolve_caps({'submodules': 12})['submodules'] == 12


@pytest.mark.parametrize('caps', [{'nonsense': 3}, {'submodules': 0}, {'submodules': -1}, {'submodules': 'many'}])
def test_invalid_caps(caps):
    with pytest.raises(ValidationError):
        resolve_caps(caps)


def test_invalid_env(monkeypatch):
    monkeypatch.setenv(CAPS_ENV_VAR, 'submodules')
    with pytest.raises(ValidationError):
        resolve_caps()


def test_verify_cap():
    caps = resolve_caps({'submodules': 5})
    verify_cap(5, caps, 'submodules', '|C|')
    with pytest.raises(CapExceededError, match='submodules'):
        verify_cap(6, caps, 'submodules', '|C|')
