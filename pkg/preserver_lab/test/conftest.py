import os
from fractions import Fraction

import pytest
from hypothesis import settings

from preserver_lab.algebra.domains import Mobius
from preserver_lab.analysis.operators import LinearOperator, MultiplierSeq

settings.register_profile('ci', max_examples=200, deadline=None, derandomize=True)
settings.register_profile('dev', max_examples=50, deadline=None)
settings.load_profile(os.environ.get('HYPOTHESIS_PROFILE', 'dev'))

# the slow suites draw at least this many cases per property
thorough = settings(max_examples=1000, deadline=None)


def disk_counterexample(n):
    """ T(z^k) = (n - k) z^k + k z^(k-1) on degree <= n. """
    columns = []
    for k in range(n + 1):
        col = [0] * (k + 1)
        col[k] += n - k
        if k:
            col[k - 1] += k
        columns.append(col)
    return LinearOperator.from_columns(columns, n)


@pytest.fixture
def disk_map():
    """ C = {|z| > 1}, so the closed unit disk is C'. """
    return Mobius((0, Fraction(1, 2)), Fraction(-1, 2), 1, (0, -1))


@pytest.fixture
def disk_operator():
    return disk_counterexample


@pytest.fixture
def derivative4():
    return LinearOperator.derivative(4)


@pytest.fixture
def gapped_multiplier():
    """ lambda = (1, 0, 1): z^2 + 1 = T[(z + 1)^2] is not real-rooted. """
    return MultiplierSeq([1, 0, 1])


@pytest.fixture
def reflection3():
    return LinearOperator.from_columns([[1], [0, -1], [0, 0, 1], [0, 0, 0, -1]])
