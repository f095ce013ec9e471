import random

import pytest

from saga_lefschetz.algebra import QuadricPresentation, build_algebra
from saga_lefschetz.core import QQ, DEFAULT_PRIME, PrimeField, VariableContext, parse_poly

FP = PrimeField(DEFAULT_PRIME)
SMALL_P = PrimeField(10007)


def algebra(lines, field=QQ, max_degree=None):
    return build_algebra(QuadricPresentation.from_strings(lines, field), max_degree)


def fermat_quadrics(n):
    return [f"x{i}^2" for i in range(n + 1)]


def w(text, n=3, field=QQ):
    return parse_poly(text, VariableContext.dual(n), field)


@pytest.fixture(scope="session")
def fermat3():
    return algebra(fermat_quadrics(3))


@pytest.fixture(scope="session")
def ex5():
    return algebra(["x0^2", "x1^2", "x2^2", "x3^2+2*x0*x1"])


@pytest.fixture(scope="session")
def ex3():
    return algebra(["3*x0^2+3*x1*x2", "3*x1^2+3*x0*x2", "3*x2^2+3*x0*x1", "3*x3^2"])


@pytest.fixture(scope="session")
def ex4():
    return algebra(["3*x0^2+x1^2+x2^2+x3^2", "3*x1^2+2*x0*x1", "3*x2^2+2*x0*x2",
                    "3*x3^2+2*x0*x3"])


@pytest.fixture
def rng():
    return random.Random(12345)
