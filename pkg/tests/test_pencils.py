import pytest

from saito_free.derivation import Derivation, apply
from saito_free.polyring import parse_poly
from saito_free.pencils import (
    PencilSpec,
    cubics_pencil,
    cubics_pencil_tensors,
    hypertetrahedron,
    lastex_family,
    lastex_predicted,
    mainthm_tensors,
    parse_preset_name,
    pencil_product,
    predicted_exponents,
    preset,
    random_members,
    section4_pencil,
    verify_family,
)
from saito_free.syzmod import FREE, decide_freeness


def test_hypertetrahedron_faces():
    f, h = hypertetrahedron(3)
    x = f.ring.gens()
    assert len(h) == 4
    for i, g in enumerate(h):
        assert g * x[i] == f


def test_section4_pencil_shapes():
    s3 = section4_pencil(3)
    assert s3.f1 == parse_poly("x0*x1*x3+x0*x1*x2", s3.f1.ring)
    assert s3.f2 == parse_poly("x1*x2*x3+x0*x2*x3", s3.f1.ring)
    s4 = section4_pencil(4)
    assert len(s4.f1.terms) == 2 and len(s4.f2.terms) == 3
    with pytest.raises(ValueError):
        section4_pencil(2)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_mainthm_tensors_annihilate_both_members(n):
    mt = mainthm_tensors(n)
    assert mt.ok and len(mt.tensors) == n - 1
    assert mt.derived == bool(n % 2)
    spec = section4_pencil(n)
    for T in mt.tensors:
        assert not apply(Derivation(T.entries, spec.f1.ring), spec.f1)


def test_cubics_tensors_annihilate_pencil():
    spec = cubics_pencil()
    for T in cubics_pencil_tensors():
        d = Derivation(T.entries, spec.f1.ring)
        assert not apply(d, spec.f1) and not apply(d, spec.f2)


def test_pencil_product_rejects_bad_members():
    base = cubics_pencil()
    with pytest.raises(ValueError):
        pencil_product(PencilSpec(base.f1, base.f2, [(0, 1)]))
    with pytest.raises(ValueError):
        pencil_product(PencilSpec(base.f1, base.f2, [(1, 2), (2, 4)]))


def test_predicted_exponents():
    assert predicted_exponents([2, 2], 3, 0) == (1, 2, 2)
    assert predicted_exponents([2, 2], 3, 2) == (2, 2, 7)
    assert lastex_predicted(3, 0, "web") == (1, 1, 1)
    assert lastex_predicted(3, 3, "pencil") == (2, 2, 8)
    assert lastex_predicted(3, 3, "web") is None


@pytest.mark.parametrize("k", [0, 2])
def test_verify_family_cubics(k):
    spec = random_members(cubics_pencil(), k, seed=1)
    rep = verify_family(spec, cubics_pencil_tensors())
    assert rep.freeness.verdict == FREE
    assert rep.freeness.exponents == rep.predicted
    assert rep.me_containment.contained and rep.agree
    assert all(all(v) for _, v in rep.shared)


def test_freeness_invariant_under_member_scalars():
    base = cubics_pencil()
    a = decide_freeness(pencil_product(PencilSpec(base.f1, base.f2, [(1, 2)])))
    b = decide_freeness(pencil_product(PencilSpec(base.f1, base.f2, [(3, 6 + 1)])))
    assert a.exponents == b.exponents == (2, 2, 4)


def test_lastex_small_cases():
    assert decide_freeness(lastex_family(3, 0, seed=0)).exponents == (1, 1, 1)
    rep = decide_freeness(lastex_family(3, 1, seed=2, mode="web"))
    assert rep.verdict == FREE and rep.exponents == lastex_predicted(3, 1, "web")
    with pytest.raises(ValueError):
        lastex_family(3, 1, seed=0, mode="fan")


def test_preset_names():
    assert parse_preset_name("sec4:n=5") == ("sec4", {"n": 5, "k": 0, "seed": 0})
    assert parse_preset_name("lastex:mode=web,k=2")[1]["mode"] == "web"
    with pytest.raises(ValueError):
        parse_preset_name("nosuch")
    with pytest.raises(ValueError):
        parse_preset_name("sec4:m=3")


@pytest.mark.parametrize("name", ["example1", "example3", "example5", "cubicspencil"])
def test_presets_match_predictions(name):
    p = preset(name)
    rep = decide_freeness(p.f)
    assert rep.verdict == FREE and rep.exponents == p.predicted


def test_preset_sec4_odd_is_flagged():
    p = preset("sec4:n=3")
    assert any("derived" in note for note in p.notes)
    assert p.predicted == (1, 2, 2)
