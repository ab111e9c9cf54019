import random

import pytest

from hodge4d.fields import PolyField


@pytest.fixture
def rng():
    return random.Random(20240901)


@pytest.fixture
def xyzt():
    return tuple(PolyField.variable(i) for i in range(4))
