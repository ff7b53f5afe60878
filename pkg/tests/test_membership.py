from hypothesis import given, settings, strategies as st

from frtbialg.membership import FreeAlgebra, IdealSpan, membership_bounded


COMM = {(None, ("x", "y")): 1, (None, ("y", "x")): -1}  # xy - yx


def test_commutator_consequence_is_certified():
    target = {(None, ("x", "x", "y")): 1, (None, ("y", "x", "x")): -1}
    cert = membership_bounded(target, [COMM], 3)
    assert cert.found and cert.items
    span = IdealSpan(FreeAlgebra(), [COMM], 3)
    assert span.expand(cert) == target


def test_non_member_is_inconclusive_not_failure():
    cert = membership_bounded({(None, ("x",)): 1}, [COMM], 3)
    assert cert.inconclusive and cert.verdict() == "inconclusive(3)"


def test_unit_relation_consequence():
    # x y = 1 implies x x y y = 1
    g = {(None, ("x", "y")): 1, (None, ()): -1}
    target = {(None, ("x", "x", "y", "y")): 1, (None, ()): -1}
    assert membership_bounded(target, [g], 4).found
    assert membership_bounded(target, [g], 4, insertion=True).found


def test_bound_below_target_degree_is_rejected():
    import pytest
    with pytest.raises(ValueError):
        membership_bounded({(None, ("x", "y", "x")): 1}, [COMM], 2)


words = st.lists(st.sampled_from("xy"), min_size=0, max_size=2).map(tuple)


@settings(max_examples=30, deadline=None)
@given(words, words, st.integers(-3, 3).filter(bool))
def test_multiples_of_a_generator_are_found(u, v, c):
    target = {(None, u + w + v): c * a for (_, w), a in COMM.items()}
    cert = membership_bounded(target, [COMM], len(u) + len(v) + 2)
    assert cert.found
    assert IdealSpan(FreeAlgebra(), [COMM], 6).expand(cert) == target
