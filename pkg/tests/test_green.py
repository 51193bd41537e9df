import numpy as np
import pytest

from modrep.errors import InputError, SplittingFieldError
from modrep.ffield import GF, Mat
from modrep.fixtures import a8_simple, label_hprime_module, q_subgroup, sylow_p
from modrep.green import (adjunction_composites, divides_induced,
                          green_correspondent, higman_test, relative_trace_matrix,
                          trivial_source_test, vertex)
from modrep.perm import GroupHandle, Perm, Subgroup
from modrep.prng import Prng
from modrep.rep import regular_module, restrict, trivial_rep
from modrep.structure import IndecCertificate, indec_decompose


def test_trace_whole_group_is_identity(hprime, hp_refs9):
    x = hp_refs9["2"]
    whole = Subgroup.whole(hprime)
    data = relative_trace_matrix(x, whole, g=hprime)
    assert data.source_basis.dim == data.target_basis.dim == 1
    assert data.matrix.A.tolist() == [[1]]
    assert data.identity_in_image


def test_trace_from_trivial_subgroup_scalar(hprime, F9):
    # trivial module: the trace multiplies by |G| in the field (72 = 0 mod 3)
    x = trivial_rep(hprime, F9)
    triv = Subgroup.trivial(hprime)
    data = relative_trace_matrix(x, triv, g=hprime)
    assert data.matrix.A.tolist() == [[0]]
    assert not data.identity_in_image
    # a group of order prime to p: multiplication by a unit
    c4 = GroupHandle([Perm.from_cycles(4, [(0, 1, 2, 3)])])
    x4 = trivial_rep(c4, GF(3))
    data4 = relative_trace_matrix(x4, Subgroup.trivial(c4), g=c4)
    assert data4.matrix.A.tolist() == [[1]]  # 4 mod 3
    assert data4.identity_in_image


def test_higman_examples(a8, hprime, p_sub, F9, F3, s7):
    assert higman_test(s7, Subgroup.whole(a8), a8)
    assert higman_test(s7, p_sub, a8)          # Sylow subgroup always works
    assert not higman_test(s7, Subgroup.trivial(a8), a8)  # 7 is not projective
    reg = regular_module(hprime, F9)
    assert higman_test(reg, Subgroup.trivial(hprime), hprime)  # free module


def test_trace_image_for_seven_contains_identity(a8, p_sub, s7):
    data = relative_trace_matrix(s7, p_sub, g=a8)
    assert data.identity_in_image


def test_vertex_of_pim_is_trivial(hprime, hp_pims9):
    p_local = Subgroup(hprime, gens=list(sylow_p().gens), name="P")
    pim = hp_pims9["1a"]
    report = vertex(pim.rep, p_local, g=hprime, cert=pim.certificate)
    assert report.vertex_order == 1


def test_vertex_requires_split_indecomposable(hprime, hp_refs9):
    p_local = Subgroup(hprime, gens=list(sylow_p().gens), name="P")
    from modrep.rep import direct_sum
    decomposable = direct_sum(hp_refs9["1a"], hp_refs9["1b"])
    with pytest.raises(SplittingFieldError):
        vertex(decomposable, p_local, g=hprime)


def test_green_report_structure(a8, p_sub, hp_sub, F3):
    s = a8_simple(7, F3)
    rep = green_correspondent(s, p_sub, hp_sub, g=a8, prng=Prng(0),
                              cert=IndecCertificate(1, 0))
    assert label_hprime_module(rep.correspondent, F3) == "1b"
    assert sum(x.multiplicity for x in rep.summands if x.is_correspondent) == 1
    others = [x for x in rep.summands if not x.is_correspondent]
    assert all(x.vertex_order < 9 for x in others)


def test_green_rejects_small_normalizer_overgroup(a8, p_sub, F3):
    s = a8_simple(7, F3)
    with pytest.raises(InputError):
        green_correspondent(s, p_sub, p_sub, g=a8, prng=Prng(0),
                            cert=IndecCertificate(1, 0))


def test_green_round_trip(a8, hp_sub, F3, hp_refs3):
    # inducing the correspondent back recovers the simple as a summand
    one_b = restrict_to_sub(hp_refs3["1b"], hp_sub)
    s7 = a8_simple(7, F3)
    assert divides_induced(s7, one_b, hp_sub, g=a8, cert=IndecCertificate(1, 0))
    one_a = restrict_to_sub(hp_refs3["1a"], hp_sub)
    assert not divides_induced(s7, one_a, hp_sub, g=a8, cert=IndecCertificate(1, 0))


def restrict_to_sub(ref, sub):
    """Reference simples live over the cached subgroup handle already."""
    from modrep.rep import Rep
    return Rep(sub.group, ref.field, ref.gen_mats, label=ref.label, validate=False)


def test_trivial_source_examples(hprime, hp_refs9, F9):
    p_local = Subgroup(hprime, gens=list(sylow_p().gens), name="P")
    triv = trivial_rep(hprime, F9, label="1a")
    assert trivial_source_test(triv, p_local, g=hprime, cert=IndecCertificate(1, 0))
    for lab in ("1a", "1b", "1c", "1d", "2"):
        assert trivial_source_test(hp_refs9[lab], p_local, g=hprime,
                                   cert=IndecCertificate(1, 0))


def test_trivial_source_rejects_wrong_vertex(hprime, hp_refs9):
    q_local = Subgroup(hprime, gens=list(q_subgroup().gens), name="Q")
    with pytest.raises(InputError):
        # the trivial module has vertex P, not Q
        trivial_source_test(hp_refs9["1a"], q_local, g=hprime,
                            cert=IndecCertificate(1, 0))


def test_higman_conjugation_invariance(a8, F3, s7):
    q = q_subgroup()
    base = higman_test(s7, q, a8)
    pr = Prng(17)
    elems = None
    for _ in range(3):
        w = [pr.below(2) for _ in range(6)]
        from modrep.perm import evaluate_word
        g = evaluate_word(a8, tuple(w))
        conj = q.conjugate(g)
        assert higman_test(s7, conj, a8) == base


def test_adjunction_composites_are_endomorphisms(hprime, hp_refs9):
    from modrep.rep import intertwines
    q_local = Subgroup(hprime, gens=list(q_subgroup().gens), name="Q")
    x = hp_refs9["2"]
    alphas, betas, composites = adjunction_composites(x, q_local, g=hprime)
    for row in composites:
        for comp in row:
            assert intertwines(comp, x, x)
