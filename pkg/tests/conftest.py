import random

import pytest

from secantcert.exactalg import DEFAULT_PRIMES, GF, QQ

P0 = DEFAULT_PRIMES[0]


@pytest.fixture
def Fp():
    return GF(P0)


@pytest.fixture(params=["QQ", "Fp"])
def field(request):
    return QQ if request.param == "QQ" else GF(P0)


@pytest.fixture
def rng(request):
    return random.Random(request.node.nodeid)
