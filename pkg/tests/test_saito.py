import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from saito_free.derivation import Derivation, parse_derivation
from saito_free.pencils import cubics_pencil_tensors
from saito_free.polymatrix import PolyMatrix, maximal_minors
from saito_free.polyring import QQ, Ring, parse_poly
from saito_free.saito import (
    Confirmed,
    Failed,
    HypothesisError,
    InDer0,
    InDerOnly,
    NotInDer,
    NotInDerError,
    apply,
    contains_me_scheme,
    in_der,
    saito_test,
)
from saito_free.syzmod import decide_freeness

from conftest import random_form

R = Ring(3, QQ)


def P(s):
    return parse_poly(s, R)


F1, F2 = P("x*y*z+x*z*t"), P("x*y*t+y*z*t")
Q1 = parse_derivation("(2*x^2+x*z, -x*y+y*z, -2*z^2-x*z, -x*t+z*t)", R)
Q2 = parse_derivation("(x*y-x*t, -2*y^2-y*t, y*z-z*t, y*t+2*t^2)", R)


def test_apply_examples():
    f = P("x^3+y^3+z^3+t^3")
    assert apply(Derivation.euler(R), f) == f * 3
    assert apply(Q1, F1).is_zero()
    assert apply(Derivation([R.zero()] * 4, R), f).is_zero()


def test_in_der_classification():
    v = in_der(Derivation.euler(R), F1)
    assert isinstance(v, InDerOnly) and v.quotient == R.const(3)
    assert isinstance(in_der(Q2, F2), InDer0)
    v = in_der(Derivation.partial(R, 3), P("x*y*z*t"))
    assert isinstance(v, NotInDer) and v.remainder == P("x*y*z")


def test_saito_test_on_arrangement():
    f = P("x*y*z*t")
    ds = [parse_derivation(s, R) for s in ("(x, -y, 0, 0)", "(0, y, -z, 0)", "(0, 0, z, -t)")]
    v = saito_test(f, ds)
    assert isinstance(v, Confirmed) and v.constant != 0
    assert v.determinant == f * v.constant


def test_saito_test_on_cubics_pencil_product():
    f = F1 * F2
    rep = decide_freeness(f)
    (linear,) = [d for d in rep.certificate if d.degree == 1]
    assert isinstance(saito_test(f, [linear, Q1, Q2]), Confirmed)
    v = saito_test(f, [Q1, Q2, Q1 + Q2])
    assert isinstance(v, Failed) and v.determinant.is_zero()
    with pytest.raises(NotInDerError):
        saito_test(f, [Derivation.partial(R, 0), Q1, Q2])


def test_containment_examples():
    tensors = cubics_pencil_tensors()
    cert = contains_me_scheme(F1 * F2, tensors)
    assert cert.contained and cert.codimension == 2
    assert cert.expand() == F1 * F2
    h = cert.minors
    c0 = contains_me_scheme(h[0] * P("x^2"), tensors)
    assert c0.contained
    rng = random.Random(3)
    with pytest.raises(HypothesisError):
        contains_me_scheme(random_form(R, 4, rng), tensors)


def test_containment_first_minor_itself():
    x, y, z, t = R.gens()
    rows = [[x, y, z, t], [y, z, t, x]]
    rng = random.Random(0)
    rows = [[random_form(R, 1, rng, 0.8) for _ in range(4)] for _ in range(2)]
    h = maximal_minors(PolyMatrix([R.gens()] + rows))
    cert = contains_me_scheme(h[0], rows, unchecked=True)
    assert cert.contained and "hypothesis unverified" in cert.notes
    assert cert.expand() == h[0]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_pencil_closure(seed):
    rng = random.Random(seed)
    a, b = rng.randint(1, 9), rng.randint(1, 9)
    for d in (Q1, Q2):
        assert isinstance(in_der(d, F1 * a + F2 * b), InDer0)
        assert isinstance(in_der(d, F1 * F2), InDer0)
