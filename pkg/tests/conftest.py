import random

import pytest
from hypothesis import strategies as st

from saito_free.polyring import GF, QQ, Poly, Ring


def random_form(ring: Ring, degree: int, rng: random.Random, density: float = 0.5, lo=-5, hi=5) -> Poly:
    terms = {}
    for m in ring.monomials(degree):
        if rng.random() < density:
            terms[m] = ring.field(rng.randint(lo, hi))
    return Poly(ring, terms)


@st.composite
def forms(draw, ring: Ring, max_degree: int = 4, min_degree: int = 0):
    d = draw(st.integers(min_degree, max_degree))
    monos = ring.monomials(d)
    coeffs = draw(st.lists(st.integers(-6, 6), min_size=len(monos), max_size=len(monos)))
    return Poly(ring, {m: ring.field(c) for m, c in zip(monos, coeffs)})


@st.composite
def polys(draw, ring: Ring, max_degree: int = 3, max_terms: int = 6):
    """Not necessarily homogeneous."""
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        e = tuple(draw(st.lists(st.integers(0, max_degree), min_size=ring.nvars, max_size=ring.nvars)))
        terms[e] = ring.field(draw(st.integers(-9, 9)))
    return Poly(ring, terms)


@pytest.fixture
def R3():
    return Ring(3, QQ)


@pytest.fixture
def R3p():
    return Ring(3, GF())


@pytest.fixture
def R2():
    return Ring(2, QQ)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
