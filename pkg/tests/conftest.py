from pathlib import Path

import pytest

from okounkov_core import GlobalBody

INSTANCE_DIR = Path(__file__).parent.parent / 'instances'


@pytest.fixture
def interval_body():
    """cone{(0|1), (1|1)}: the fiber over a is [0, a]"""
    return GlobalBody.from_rays(1, 1, [(0, 1), (1, 1)], 'interval')


@pytest.fixture
def twochamber_body():
    """Fiber over (a, b) is [0, min(2a, a + b)], chambers split by the wall (1, 1)"""
    return GlobalBody.from_rays(1, 2, [(0, 1, 0), (1, 1, 0), (0, 0, 1), (2, 1, 1)], 'twochamber')


@pytest.fixture
def simplex_body():
    """Fiber over a is a * conv{0, e1, e2}"""
    return GlobalBody.from_rays(2, 1, [(0, 0, 1), (1, 0, 1), (0, 1, 1)], 'simplex_product_2_1')


@pytest.fixture
def instance_dir():
    return INSTANCE_DIR
