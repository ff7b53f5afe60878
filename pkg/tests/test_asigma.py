import pytest

from frtbialg import ASigma, build_I_sigma, check_sigma_conditions, verify_rigidity
from frtbialg.asigma import certify_record


@pytest.mark.parametrize("name", ["i1", "i2", "m2"])
def test_bundled_sigma_satisfies_conditions(name, request):
    assert check_sigma_conditions(request.getfixturevalue(name).sigma) == []


def test_presentation_families_have_expected_sizes(i1):
    pres = build_I_sigma(i1.sigma)
    sizes = {k: len(v) for k, v in pres.families.items()}
    assert sizes[2] == 8 and sizes[5] == 1
    assert sizes[4] == 16


def test_chi_kills_family_four(i1, i2):
    for inst in (i1, i2):
        A = ASigma(inst.sigma)
        for g in A.family4():
            assert not any(any(r) for r in A.chi_rep(g))


@pytest.mark.parametrize("name", ["i1", "i2"])
def test_rigidity_with_L_witnesses(name, request):
    A = ASigma(request.getfixturevalue(name).sigma)
    x, y = A.default_witnesses()
    recs = verify_rigidity(A, x, y)
    assert len(recs) == 16 and {r["verdict"] for r in recs} == {"pass"}


def test_wrong_witness_is_refuted_not_certified(i1):
    A = ASigma(i1.sigma)
    x, y = A.default_witnesses()
    # swap in y for x: Li·Li sums are not δ·1
    recs = verify_rigidity(A, y, y)
    assert any(r["verdict"] != "pass" for r in recs)
    assert all(r["verdict"] != "pass" for r in recs if r["identity"].startswith("rigidity Li_cb"))


def test_certify_record_refutes_with_chi(i1):
    A = ASigma(i1.sigma)
    rec = certify_record(A, "probe", "1", A.one())
    assert rec["verdict"] == "fail" and rec["witness"]["chi_nonzero"]
