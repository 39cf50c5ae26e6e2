"""Shared fixtures and helpers for the test suite."""

import numpy as np
import pytest

from resonances1d.potential import Potential


def make_zero_potential(a=-1.0, b=1.0):
    """An identically-zero potential on [a, b].

    The public constructors reject all-zero data (the trimmed support would
    be empty), so the free case is assembled directly; every solver must
    treat it as V = 0.
    """
    p = object.__new__(Potential)
    object.__setattr__(p, "breakpoints", (float(a), 0.0, float(b)))
    object.__setattr__(p, "values", (0.0, 0.0))
    object.__setattr__(p, "label", "free")
    return p


@pytest.fixture
def zero_potential():
    return make_zero_potential()


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
