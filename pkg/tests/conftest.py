import pytest

from kloverify.modp import PrimeContext
from kloverify.supercharacter import SuperTheory


@pytest.fixture(params=[5, 7, 11, 13], ids=lambda p: f"p{p}")
def ctx(request):
    return PrimeContext(request.param)


@pytest.fixture
def theory(ctx):
    return SuperTheory(ctx)


@pytest.fixture
def ctx5():
    return PrimeContext(5)


@pytest.fixture
def ctx7():
    return PrimeContext(7)


@pytest.fixture
def ctx11():
    return PrimeContext(11)


@pytest.fixture
def ctx13():
    return PrimeContext(13)


@pytest.fixture
def theory5(ctx5):
    return SuperTheory(ctx5)


@pytest.fixture
def theory7(ctx7):
    return SuperTheory(ctx7)


@pytest.fixture
def theory13(ctx13):
    return SuperTheory(ctx13)
