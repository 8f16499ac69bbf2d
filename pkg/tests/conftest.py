import math

import numpy as np
import pytest
from hypothesis import strategies as st

from qphase.core import StateParams


@st.composite
def state_params(draw, max_r=1.0, max_nbar=1.0, max_alpha=1.0):
    mod = draw(st.floats(0.0, max_alpha))
    arg = draw(st.floats(0.0, 2 * math.pi))
    return StateParams.make(
        alpha=mod * complex(math.cos(arg), math.sin(arg)),
        r=draw(st.floats(0.0, max_r)),
        phi=draw(st.floats(0.0, 2 * math.pi)),
        n_bar=draw(st.floats(0.0, max_nbar)),
    )


@st.composite
def xis(draw, max_abs=2.0):
    mod = draw(st.floats(0.0, max_abs))
    arg = draw(st.floats(0.0, 2 * math.pi))
    return mod * complex(math.cos(arg), math.sin(arg))


orderings = st.sampled_from([1.0, 0.0, -1.0]) | st.floats(-2.0, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


# parameter point shared by several frozen oracle values
SPEC_POINT = StateParams.make(alpha=0.3 - 0.2j, r=0.6, phi=math.pi / 3, n_bar=0.5)
VAR_POINT = StateParams.make(alpha=0.4 + 0.3j, r=0.7, phi=math.pi / 4, n_bar=0.5)
