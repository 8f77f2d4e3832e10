"""Shared fixtures for the AKZeta test suite"""

import mpmath
import pytest

from src.services.constant_cache import FileConstantCache
from src.services.numerics import Evaluator


@pytest.fixture(scope="module")
def evaluator():
    """128-bit evaluator without a persistent cache, shared within a module"""
    return Evaluator(precision=128)


@pytest.fixture
def cache(tmp_path):
    return FileConstantCache(tmp_path / "constants.mzvcache")


@pytest.fixture(autouse=True)
def isolated_user_config(tmp_path, monkeypatch):
    """Keep settings.json and the default cache file out of the real home directory."""
    monkeypatch.setenv("XDG_CONFIG_HOME", str(tmp_path / "config"))
    monkeypatch.setenv("APPDATA", str(tmp_path / "config"))
    monkeypatch.setenv("HOME", str(tmp_path / "home"))
    monkeypatch.delenv("AKZETA_CACHE", raising=False)


@pytest.fixture
def encloses():
    """check(ball, reference, tol): the reference lies within tol of the ball."""
    def check(ball, reference, tol=1e-30):
        with mpmath.workprec(400):
            gap = abs(ball.mid - reference)
        assert gap <= ball.rad + mpmath.mpf(tol), f"{ball} does not enclose {mpmath.nstr(reference, 30)}"
    return check
