import os
from pathlib import Path

import pytest

from zetapfrac.numkernel import PrecisionContext
from zetapfrac.zero_table import load_cache

DATA = Path(__file__).parent / "data"
ACCEPTANCE_LINES: list[str] = []


def cache_file(n: int) -> Path:
    return DATA / f"zeros_{n}.csv"


@pytest.fixture(scope="session")
def ctx():
    return PrecisionContext(digits=30)


@pytest.fixture(scope="session")
def mp(ctx):
    return ctx.mp


@pytest.fixture(scope="session")
def cache100(ctx):
    return load_cache(cache_file(100), ctx)


@pytest.fixture(scope="session")
def cache200(ctx):
    return load_cache(cache_file(200), ctx)


@pytest.fixture(scope="session")
def cache500(ctx):
    return load_cache(cache_file(500), ctx)


@pytest.fixture
def cli_env(monkeypatch, tmp_path):
    """Run CLI commands from a scratch directory against the stored 100-zero cache."""
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("ZETAPFRAC_CACHE", os.fspath(cache_file(100)))
    return tmp_path


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[2])):
            terminalreporter.write_line(line)
