import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from saito_free.derivation import Derivation, apply, parse_derivation
from saito_free.polymatrix import (
    PolyMatrix,
    determinant,
    determinant_derivation,
    jacobian_matrix,
    maximal_minors,
    minors,
)
from saito_free.polyring import QQ, Ring, parse_poly, parse_polys

from conftest import random_form

R = Ring(3, QQ)


def P(s):
    return parse_poly(s, R)


def test_small_determinants():
    x, y, z, t = R.gens()
    assert determinant(PolyMatrix([[x, y], [x, y]])).is_zero()
    zero = R.zero()
    diag = [[x, zero, zero, zero], [zero, y, zero, zero], [zero, zero, z, zero], [zero, zero, zero, t]]
    assert determinant(PolyMatrix(diag)) == x * y * z * t
    with pytest.raises(ValueError):
        determinant(PolyMatrix([[x, y]]))


def test_signed_minors_base_case_and_shape_errors():
    x, y = R.gens()[:2]
    assert maximal_minors(PolyMatrix([[x, y]])) == [y, -x] or maximal_minors(PolyMatrix([[x, y]])) == [x, -y]
    with pytest.raises(ValueError):
        maximal_minors(PolyMatrix([[x], [y]]))


def test_fermat_eigen_minors_are_binomials():
    M = PolyMatrix([R.gens(), [P("x^2"), P("y^2"), P("z^2"), P("t^2")]])
    ms = minors(M, 2)
    assert len(ms) == 6
    assert all(len(m) == 2 and m.degree() == 3 for m in ms)
    assert P("x*y^2 - x^2*y") in ms


def test_jacobian_rows():
    J = jacobian_matrix(parse_polys(["x^2-y*z", "x^2-y*t", "x^2-z*t"], R))
    assert J.rows[0] == [P("2*x"), P("-z"), P("-y"), R.zero()]
    J1 = jacobian_matrix([P("x^3+y^3+z^3+t^3")])
    assert J1.rows[0] == [P("3*x^2"), P("3*y^2"), P("3*z^2"), P("3*t^2")]
    with pytest.raises(ValueError):
        jacobian_matrix([])


def test_remark_determinant_derivations():
    assert determinant_derivation(parse_polys(["x", "y", "x+y"], R)).is_zero()
    d = determinant_derivation(parse_polys(["x", "y", "z"], R))
    assert d.is_proportional(Derivation.partial(R, 3))
    d = determinant_derivation(parse_polys(["x^2-y*z", "y^2-x*z", "z^2-x*y"], R))
    expected = Derivation([R.zero(), R.zero(), R.zero(), P("x^3+y^3+z^3-3*x*y*z")], R)
    assert d.is_proportional(expected)
    d = determinant_derivation(parse_polys(["x^2-y*z", "x^2-y*t", "x^2-z*t"], R))
    printed = parse_derivation("(y*z*t, x*y*(-y+z+t), x*z*(y-z+t), x*t*(y+z-t))", R)
    assert d.normalized() == printed
    with pytest.raises(ValueError):
        determinant_derivation(parse_polys(["x", "y"], R))


def _random_matrix(rng, size, deg=1):
    return [[random_form(R, deg, rng, 0.4, -3, 3) for _ in range(size)] for _ in range(size)]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 4))
def test_determinant_alternating(seed, size):
    rng = random.Random(seed)
    rows = _random_matrix(rng, size)
    det = determinant(PolyMatrix(rows))
    i, j = rng.sample(range(size), 2)
    swapped = list(rows)
    swapped[i], swapped[j] = swapped[j], swapped[i]
    assert determinant(PolyMatrix(swapped)) == -det
    repeated = list(rows)
    repeated[i] = repeated[j]
    assert determinant(PolyMatrix(repeated)).is_zero()
    assert determinant(PolyMatrix(rows).transpose()) == det


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_laplace_along_any_row(seed):
    rng = random.Random(seed)
    rows = _random_matrix(rng, 4)
    det = determinant(PolyMatrix(rows))
    r = rng.randrange(4)
    total = R.zero()
    for c in range(4):
        minor = [[rows[i][j] for j in range(4) if j != c] for i in range(4) if i != r]
        sign = 1 if (r + c) % 2 == 0 else -1
        total = total + rows[r][c] * determinant(PolyMatrix(minor)) * sign
    assert total == det


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3))
def test_signed_minors_tautological_syzygy(seed, r):
    rng = random.Random(seed)
    rows = [[random_form(R, 1, rng, 0.5) for _ in range(r + 1)] for _ in range(r)]
    h = maximal_minors(PolyMatrix(rows))
    for row in rows:
        total = R.zero()
        for hi, e in zip(h, row):
            total = total + hi * e
        assert total.is_zero()


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_determinant_derivation_kills_the_span(seed):
    rng = random.Random(seed)
    fs = [random_form(R, 2, rng, 0.4) for _ in range(3)]
    d = determinant_derivation(fs)
    combo = R.zero()
    for f in fs:
        combo = combo + f * rng.randint(-4, 4)
    assert apply(d, combo).is_zero()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_leibniz_rule(seed):
    rng = random.Random(seed)
    d = Derivation([random_form(R, 2, rng) for _ in range(4)], R)
    f, g = random_form(R, 3, rng), random_form(R, 2, rng)
    assert apply(d, f * g) == f * apply(d, g) + g * apply(d, f)
    e = Derivation([random_form(R, 2, rng) for _ in range(4)], R)
    assert apply(d + e, f) == apply(d, f) + apply(e, f)


def test_derivation_validation():
    with pytest.raises(ValueError):
        Derivation([P("x"), P("y^2"), R.zero(), R.zero()], R)
    with pytest.raises(ValueError):
        Derivation([P("x")], R)
    assert Derivation.euler(R).degree == 1
    assert parse_derivation("(2*x^2+x*z, -x*y+y*z, -2*z^2-x*z, -x*t+z*t)", R).degree == 2
