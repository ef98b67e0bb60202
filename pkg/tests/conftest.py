import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from atrous.sequences import FiniteSequence

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=1000,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

taps_st = st.lists(st.floats(-1, 1, allow_nan=False, allow_infinity=False), min_size=1, max_size=16)


@st.composite
def sequences(draw, max_len=16, nonzero=True):
    taps = draw(st.lists(st.floats(-1, 1, allow_nan=False, allow_infinity=False),
                         min_size=1, max_size=max_len))
    offset = draw(st.integers(-20, 20))
    x = FiniteSequence(offset, taps)
    if nonzero and x.is_zero():
        x = FiniteSequence.delta(offset)
    return x


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_sequence(rng, max_len=64, offset_range=10) -> FiniteSequence:
    n = int(rng.integers(1, max_len + 1))
    return FiniteSequence(int(rng.integers(-offset_range, offset_range + 1)), rng.standard_normal(n))
