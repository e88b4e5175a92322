import pytest

from toricgit.checks import builtin_corpus


@pytest.fixture(scope="session")
def corpus():
    return builtin_corpus()
