import os
import sys

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

from peanocurve import continuum  # noqa: E402


@pytest.fixture(scope="session")
def small_spaces():
    return [continuum.interval(5), continuum.interval(9), continuum.square(3),
            continuum.sierpinski_carpet(1), continuum.sierpinski_gasket(2)]
