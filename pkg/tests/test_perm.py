import pytest

from modrep.errors import CapExceeded, InputError
from modrep.fixtures import c4xhprime_group
from modrep.perm import (GroupHandle, Perm, Subgroup, conjugacy_classes_small,
                         evaluate_word, normalizer_small, orbit, right_transversal,
                         subgroup_class_reps_in, subgroups_of_small, sylow_small)


def test_perm_basics():
    p = Perm.from_cycles(5, [(0, 1, 2)])
    assert p.act(0) == 1 and p.act(4) == 4
    assert p.order() == 3
    assert (p * p * p).is_identity()
    assert p.inverse() * p == Perm.identity(5)
    with pytest.raises(InputError):
        Perm([0, 0, 1])


def test_orbit_examples(a8):
    # trivial group: single point
    assert set(orbit([], 3, degree=5)) == {3}
    # the 8-point group is transitive
    assert set(orbit(a8.generators, 0)) == set(range(8))
    # a 3-cycle fixes an off-support point
    c = Perm.from_cycles(5, [(0, 1, 2)])
    assert set(orbit([c], 4)) == {4}
    # Schreier words transport the base point
    words = orbit(a8.generators, 0)
    for pt, w in words.items():
        assert evaluate_word(a8, w).act(0) == pt


def test_group_orders(a8, hprime):
    assert a8.order() == 20160
    assert hprime.order() == 72


def test_membership_and_word_factorization(a8):
    x = a8.generators[0] * a8.generators[1] * a8.generators[0].inverse()
    assert a8.membership(x)
    w = a8.factor_word(x)
    assert evaluate_word(a8, w) == x
    odd = Perm.from_cycles(8, [(0, 1)])
    assert not a8.membership(odd)
    with pytest.raises(InputError):
        a8.membership(Perm.identity(5))


def test_evaluate_word_examples(a8, p_sub):
    assert evaluate_word(a8, ()) == Perm.identity(8)
    assert evaluate_word(a8, (0, -1)).is_identity()
    for w in p_sub.gen_words_in_parent():
        elt = evaluate_word(a8, w)
        assert elt.order() == 3
    with pytest.raises(InputError):
        evaluate_word(a8, (5,))


def test_right_transversal(a8, p_sub, hp_sub):
    whole = Subgroup.whole(a8)
    t = right_transversal(a8, whole)
    assert len(t) == 1 and t[0].is_identity()
    t_hp = right_transversal(a8, hp_sub)
    assert len(t_hp) == 280
    t_p = right_transversal(a8, p_sub)
    assert len(t_p) == 2240
    assert t_p[0].is_identity()
    assert a8.order() == p_sub.order() * len(t_p)
    # coset lookup is consistent with membership
    x = t_p[17] * a8.generators[0]
    j = t_p.coset_index(x)
    assert p_sub.group.membership(x * t_p[j].inverse())


def test_normalizer_small(a8, p_sub):
    n = normalizer_small(a8, p_sub)
    assert n.order() == 72
    p_keys = p_sub.element_keys()
    for gen in n.generators:
        gi = gen.inverse()
        assert all((gi * e * gen)._key in p_keys for e in p_sub.group.elements())


def test_sylow_small(a8):
    syl = sylow_small(a8, 3)
    assert syl.order() == 9
    syl2 = sylow_small(a8, 2)
    assert syl2.order() == 64


def test_subgroup_classes(a8, p_sub, hprime):
    subs = subgroups_of_small(p_sub)
    assert [s.order() for s in subs] == [1, 3, 3, 3, 3, 9]
    reps3 = subgroup_class_reps_in(p_sub, hprime, order=3)
    assert len(reps3) == 2


def test_conjugacy_classes_product_group():
    g = c4xhprime_group()
    reps, sizes, class_of = conjugacy_classes_small(g)
    assert len(reps) == 36
    assert sum(sizes) == 288
    assert len(class_of) == 288


def test_caps_hard_fail(a8, p_sub):
    with pytest.raises(CapExceeded):
        a8.elements(cap=100)
    with pytest.raises(CapExceeded):
        normalizer_small(a8, p_sub, cap=1000)


def test_subgroup_validation(a8):
    with pytest.raises(InputError):
        Subgroup(a8, gens=[Perm.from_cycles(8, [(0, 1)])])  # odd, not a member
    sub = Subgroup(a8, words=[(0,)])
    assert sub.order() == 3
