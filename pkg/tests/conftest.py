import pytest

from twistparity.numberfield import quadratic_field, rational_field, places_above
from twistparity.curves import curve


@pytest.fixture(scope="session")
def Q():
    return rational_field()


@pytest.fixture(scope="session")
def Qi():
    return quadratic_field(-1)


@pytest.fixture(scope="session")
def K5():
    return quadratic_field(5)


@pytest.fixture(scope="session")
def e11a1(Q):
    # conductor 11, split multiplicative at 11, good elsewhere, rank 0
    return curve(Q, [0, -1, 1, -10, -20])


@pytest.fixture(scope="session")
def e37a1(Q):
    # conductor 37, nonsplit multiplicative at 37, rank 1
    return curve(Q, [0, 0, 1, -1, 0])


@pytest.fixture(scope="session")
def e389a1(Q):
    # conductor 389, split multiplicative at 389, rank 2
    return curve(Q, [0, 1, 1, -2, 0])


@pytest.fixture(scope="session")
def e_mult2(Q):
    # split multiplicative at 2 (disc -440 = -2^3*5*11, c4 = 49)
    return curve(Q, [1, 0, 0, -1, 1])


def place(K, p, idx=1):
    for v in places_above(K, p):
        if v.index == idx:
            return v
    raise LookupError((p, idx))
