import numpy as np
import pytest

from upbforge.geom import steepest_descent
from upbforge.ppt import builtin_upb, build_state, projector_from_set
from upbforge.uom import builtin_a, instantiate, random_assignment


@pytest.fixture(scope="session")
def upb():
    return builtin_upb()


@pytest.fixture(scope="session")
def q(upb):
    return projector_from_set(upb)


@pytest.fixture(scope="session")
def alpha(upb):
    return build_state(upb)


@pytest.fixture(scope="session")
def descent(q):
    return steepest_descent(q)


@pytest.fixture(scope="session")
def generic_set():
    # random angles keep the instantiation away from the degenerate loci
    # that the concrete built-in amplitudes happen to sit on
    u = builtin_a()
    return instantiate(u, random_assignment(u, np.random.default_rng(11)))
