import os

import pytest

from seifert_wrt._config import PRECISION_ENV


@pytest.fixture
def extended_precision(monkeypatch):
    monkeypatch.setenv(PRECISION_ENV, "128")
    yield 128


@pytest.fixture(autouse=True)
def _default_precision(monkeypatch):
    # tests assume hardware floats unless they opt in
    if os.environ.get(PRECISION_ENV):
        monkeypatch.delenv(PRECISION_ENV)
