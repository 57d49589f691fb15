import numpy as np
import pytest

from twofluid.eos import EosParams, State


@pytest.fixture
def rng():
    return np.random.default_rng(20250809)


def random_params(rng) -> EosParams:
    return EosParams(
        alpha=rng.uniform(1.0, 3.0),
        gamma=rng.uniform(1.0, 3.0),
        A=rng.uniform(0.3, 2.0),
    )


def random_state(rng, zero_field: bool = False) -> State:
    return State(
        n=rng.uniform(0.2, 3.0),
        rho=rng.uniform(0.0, 3.0),
        u=rng.uniform(-2.0, 2.0, 3),
        H=np.zeros(3) if zero_field else rng.uniform(-2.0, 2.0, 3),
    )
