import pytest

from k2res.linalg import FieldSpec
from k2res.gradedalg import expand, monomial_presentation, polynomial_presentation


@pytest.fixture(scope="session")
def gf():
    return FieldSpec.gf(32003)


@pytest.fixture(scope="session")
def qq():
    return FieldSpec.rationals()


@pytest.fixture(scope="session")
def S6(gf):
    return expand(polynomial_presentation(list("abcdef")), 6, gf)


@pytest.fixture(scope="session")
def S5(gf):
    return expand(polynomial_presentation(list("abcde")), 7, gf)


@pytest.fixture(scope="session")
def S7(gf):
    return expand(polynomial_presentation(list("abcdefg")), 7, gf)


@pytest.fixture(scope="session")
def algebra_C(gf):
    """k[a..e] modulo the two cubic monomials abc, cde."""
    return expand(monomial_presentation("abcde", [tuple("abc"), tuple("cde")]), 5, gf)
