from __future__ import annotations

import pytest

from pseudolinear.fixtures import DEFAULT_SEED, all_fixtures, catalogue, good_drawing_corpus, random_corpus


@pytest.fixture(scope="session")
def cat():
    return catalogue()


@pytest.fixture(scope="session")
def fixtures_all():
    return all_fixtures()


@pytest.fixture(scope="session")
def good_corpus():
    return good_drawing_corpus()


@pytest.fixture(scope="session")
def corpus():
    """The 300-instance seeded random corpus used by the acceptance tests."""
    return random_corpus(300, seed=DEFAULT_SEED)


@pytest.fixture(scope="session")
def sigma(cat):
    """String set of a named catalogue fixture, cached per name."""
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = cat[name].to_stringset()
        return cache[name]

    return get


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    """Collects the one-line verdict of each acceptance criterion."""
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
