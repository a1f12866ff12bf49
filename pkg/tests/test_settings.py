import os

import pytest

from spectra_count import settings
from spectra_count.settings import (
    DEFAULTS_PATH, THREADS_VARIABLE, get_setting, load_settings, resolve_threads, set_setting,
)


@pytest.fixture(autouse=True)
def restore_settings():
    yield
    load_settings()


def test_defaults():
    assert get_setting("oracle_cap") == 4096
    assert get_setting("breakdown_rtol") == 1e-12
    assert get_setting("bounds_steps") == 20
    assert get_setting("threads") is None
    assert get_setting("missing", "fallback") == "fallback"


def test_load_settings(tmp_path):
    path = tmp_path / "custom.yml"
    path.write_text("oracle_cap: 10\nsamples: 3\n")

    loaded = load_settings(str(path))

    assert loaded is settings.SETTINGS
    assert get_setting("oracle_cap") == 10
    assert get_setting("samples") == 3
    assert get_setting("boost_rtol") is None

    load_settings(DEFAULTS_PATH)
    assert get_setting("boost_rtol") == 1e-8


def test_empty_settings_file(tmp_path):
    path = tmp_path / "empty.yml"
    path.write_text("# nothing\n")

    assert load_settings(str(path)) == {}


def test_set_setting():
    set_setting("samples", 7)
    assert get_setting("samples") == 7


def test_threads_from_environment(monkeypatch):
    monkeypatch.setenv(THREADS_VARIABLE, "3")

    assert get_setting("threads") == 3
    assert resolve_threads() == 3
    assert resolve_threads(2) == 2


def test_resolve_threads(monkeypatch):
    monkeypatch.delenv(THREADS_VARIABLE, raising=False)

    assert resolve_threads() == (os.cpu_count() or 1)
    assert resolve_threads(0) == 1

    set_setting("threads", 5)
    assert resolve_threads() == 5
