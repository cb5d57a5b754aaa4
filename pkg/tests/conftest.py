import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from hexiso import StrutProperties


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)


@pytest.fixture
def table1_strut():
    return StrutProperties(
        k=5000.0, c=7.2, L=0.3,
        m_t=0.6, m_b=0.4, eta_t=0.7, eta_b=0.2,
        I_t=2.5e-3, I_b=1.9e-3,
    )
