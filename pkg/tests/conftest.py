import random
from importlib import resources

import pytest

from seshadri.polynomials import PolynomialRing
from seshadri.groebner import monomials_of_degree


def bundled(name):
    """Path of a bundled instance file."""
    return str(resources.files("seshadri") / "instances" / f"{name}.json")


def random_homogeneous(ring, degree, rng, spread=3, through_origin=False):
    """Random homogeneous form; optionally without the pure-x0 term."""
    while True:
        terms = []
        for exps in monomials_of_degree(ring.nvars, degree):
            if through_origin and exps[0] == degree:
                continue
            terms.append((exps, rng.randint(-spread, spread)))
        poly = ring.from_terms(terms)
        if poly and poly.total_degree() == degree:
            return poly


def random_poly(ring, max_degree, rng, spread=3):
    terms = []
    for d in range(max_degree + 1):
        for exps in monomials_of_degree(ring.nvars, d):
            if rng.random() < 0.4:
                terms.append((exps, rng.randint(-spread, spread)))
    return ring.from_terms(terms)


@pytest.fixture
def rng():
    return random.Random(20240811)


@pytest.fixture
def ring2():
    return PolynomialRing(("x0", "x1"))


@pytest.fixture
def ring3():
    return PolynomialRing(("x0", "x1", "x2"))


@pytest.fixture
def ring4():
    return PolynomialRing(("x0", "x1", "x2", "x3"))


@pytest.fixture
def ring5():
    return PolynomialRing(("x0", "x1", "x2", "x3", "x4"))
