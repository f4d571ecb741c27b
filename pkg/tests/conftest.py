import pytest

import corpus


@pytest.fixture
def fano():
    return corpus.fano()


@pytest.fixture
def u23():
    return corpus.u23()


@pytest.fixture
def u12():
    return corpus.u12()


@pytest.fixture
def isthmus():
    return corpus.isthmus()


@pytest.fixture
def loop():
    return corpus.loop()
