import numpy as np
import pytest

from expcong import kernels
from expcong.census import EquationInstance
from expcong.ff import field_from_spec, prime_field


@pytest.fixture
def F7():
    return prime_field(7)


@pytest.fixture
def F9():
    return field_from_spec("3^2/1,0,1")


@pytest.fixture
def canonical(F7):
    """a = g = (1, 3) in all three terms, b = 0."""
    return EquationInstance.build(F7, [(1, 3)] * 3, 0)


BACKENDS = ["python"] + (["compiled"] if kernels.COMPILED_AVAILABLE else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    with kernels.use_backend(request.param):
        yield request.param


def random_instance(field, rng: np.random.Generator, m: int = 3, b: int = 0) -> EquationInstance:
    pairs = [(int(rng.integers(1, field.q)), int(rng.integers(1, field.q))) for _ in range(m)]
    return EquationInstance.build(field, pairs, b)
