import pytest

from frtbialg import (ASigma, AwAlgebra, build_phi, build_w_sigma, check_generalized_inverse, check_sigma_conditions,
                      verify_phi)
from frtbialg.weak import WeakASigma, WeakAw, WhaAntipode, verify_weak_axioms


@pytest.fixture(scope="module")
def setup(i1):
    As = ASigma(i1.sigma)
    As.set_witnesses(*As.default_witnesses())
    Aw = AwAlgebra(build_w_sigma(i1.sigma))
    _, phi = build_phi(i1.sigma, Aw, As)
    return i1, As, Aw, phi


def verdicts(recs, identity=None):
    return {r["verdict"] for r in recs if identity is None or r["identity"] == identity}


def test_fminus_equal_fplus_breaks_generalized_inverse(setup):
    inst, As, Aw, phi = setup
    W = WeakAw(Aw, inst.frobenius)
    WS = WeakASigma(As, inst.frobenius, bound=2)
    recs = check_generalized_inverse(W, phi, phi, WS, cap=1)
    fails = [r for r in recs if r["verdict"] == "fail"]
    assert fails and all(r["witness"].get("chi_nonzero") for r in fails)


def test_mismatched_sigma_leaves_face_images_uncertified(setup):
    inst, As, _, _ = setup
    s = inst.sigma
    bad = s.with_entry(*sorted(s.entries)[0], 0, (2,))
    assert check_sigma_conditions(bad) == []
    Awb = AwAlgebra(build_w_sigma(bad))
    _, phib = build_phi(s, Awb, As)
    recs = verify_phi(Awb, As, phib)
    assert "pass" in verdicts(recs, "face-generator-image")
    assert any(v.startswith("inconclusive") for v in verdicts(recs, "face-generator-image"))


def test_antipode_generator_rules(setup):
    inst, As, _, _ = setup
    S = WhaAntipode(WeakASigma(As, inst.frobenius))
    for a in range(As.nx):
        for b in range(As.nx):
            assert S(As.word_elem((As.L(a, b),))) == As.word_elem((As.Li(a, b),))


def test_weak_axioms_degree_one(setup):
    inst, _, Aw, _ = setup
    recs = verify_weak_axioms(WeakAw(Aw, inst.frobenius), cap=1)
    assert verdicts(recs) == {"pass"}
    assert {r["regime"] for r in [dict(x, regime=x["witness"]["regime"]) for x in recs]} == {"exact"}


def test_weak_axioms_catch_a_bad_frobenius(setup):
    from frtbialg.base import FrobeniusSystem
    inst, _, Aw, _ = setup
    with pytest.raises(ValueError):
        WeakAw(Aw, FrobeniusSystem((1,), (((2,), (1,)),)))


def test_inverse_antipode_composes_to_identity(setup):
    inst, As, _, _ = setup
    from frtbialg.weak import asigma_generators
    S = WhaAntipode(WeakASigma(As, inst.frobenius))
    for name, g in asigma_generators(As):
        assert S.S(S.S_inv(g)) == g, name
        assert S.S_inv(S.S(g)) == g, name
