import numpy as np
import pytest

from modrep.chop import chop, iso_irr
from modrep.errors import InputError
from modrep.ffield import GF, Mat, mat_inv, mat_mul
from modrep.fixtures import sylow_p
from modrep.perm import Subgroup
from modrep.prng import Prng
from modrep.rep import (Rep, direct_sum, dual, hom_space, induce, perm_module,
                        regular_module, restrict, trivial_rep)
from modrep.structure import (AlgebraData, algebra_radical, end_algebra,
                              fitting_split, indec_decompose, iso_indec,
                              radical_series_layers, socle_series, socle_series_layers)

PIM_DIAGRAMS = {
    "1a": [("1a",), ("2",), ("1a", "1c", "1d"), ("2",), ("1a",)],
    "1b": [("1b",), ("2",), ("1b", "1c", "1d"), ("2",), ("1b",)],
    "1c": [("1c",), ("2",), ("1a", "1b", "1c"), ("2",), ("1c",)],
    "1d": [("1d",), ("2",), ("1a", "1b", "1d"), ("2",), ("1d",)],
    "2": [("2",), ("1a", "1b", "1c", "1d"), ("2", "2", "2"),
          ("1a", "1b", "1c", "1d"), ("2",)],
}


def _simple_list(refs):
    return [refs[lab] for lab in ("1a", "1b", "1c", "1d", "2")]


def test_end_algebra_dims(hp_refs9, hp_pims9):
    assert end_algebra(hp_refs9["1a"]).dim == 1
    both = direct_sum(hp_refs9["1a"], hp_refs9["1b"])
    assert end_algebra(both).dim == 2
    p2 = hp_pims9["2"].rep
    assert end_algebra(p2).dim == 5  # the diagonal Cartan entry


def test_algebra_radical_semisimple_and_triangular(F3, hp_refs9):
    # End of an absolutely irreducible module is the field: radical 0
    alg = end_algebra(hp_refs9["1a"])
    assert algebra_radical(alg) == []
    # upper triangular 2x2 matrices acting on k^2: radical is the strict part
    module = Rep.from_action(F3, [Mat.from_rows(F3, [[1, 1], [0, 1]])])
    basis = [Mat.identity(F3, 2), Mat.from_rows(F3, [[0, 1], [0, 0]])]
    alg = AlgebraData(module, basis)
    rad = algebra_radical(alg)
    assert len(rad) == 1
    assert mat_mul(rad[0], rad[0]).is_zero()


def test_radical_of_pim_end(hp_pims9):
    p1a = hp_pims9["1a"]
    alg = end_algebra(p1a.rep)
    assert alg.dim == 3          # Cartan diagonal entry
    rad = algebra_radical(alg)
    assert len(rad) == 2         # local ring with residue field k


def test_fitting_split_trivial_cases(hp_refs9):
    m = direct_sum(hp_refs9["1a"], hp_refs9["2"])
    ident = Mat.identity(m.field, 3)
    s = fitting_split(m, ident)
    assert s.kernel_part.dim == 0 and s.image_part.dim == 3
    z = Mat.zeros(m.field, 3, 3)
    s = fitting_split(m, z)
    assert s.kernel_part.dim == 3 and s.image_part.dim == 0


def test_fitting_split_projection(hp_refs9):
    m = direct_sum(hp_refs9["1a"], hp_refs9["2"])
    proj = np.zeros((3, 3), dtype=m.field.dtype)
    proj[0, 0] = 1                        # projection onto the 1a part
    s = fitting_split(m, Mat(m.field, proj))
    dims = sorted((s.kernel_part.dim, s.image_part.dim))
    assert dims == [1, 2]
    assert s.is_proper
    mat_inv(s.change_of_basis)


def test_indec_decompose_irreducible(hp_refs9):
    dec = indec_decompose(hp_refs9["2"], Prng(0))
    assert len(dec.summands) == 1
    assert dec.summands[0].multiplicity == 1
    assert dec.summands[0].certificate.is_local


def test_indec_decompose_induced_from_sylow(hprime, F9, hp_refs9):
    p_local = Subgroup(hprime, gens=list(sylow_p().gens), name="P")
    kp = induce(trivial_rep(p_local.group, F9), hprime, p_local)
    assert kp.dim == 8
    dec = indec_decompose(kp, Prng(0))
    found = {}
    for s in dec.summands:
        for lab, ref in hp_refs9.items():
            if s.rep.dim == ref.dim and iso_irr(s.rep, ref):
                found[lab] = s.multiplicity
    assert found == {"1a": 1, "1b": 1, "1c": 1, "1d": 1, "2": 2}


def test_regular_decomposition_multiplicities(hp_pims9):
    # regular = one copy of each linear PIM, two copies of the big one
    mults = {lab: s.multiplicity for lab, s in hp_pims9.items()}
    assert mults == {"1a": 1, "1b": 1, "1c": 1, "1d": 1, "2": 2}
    dims = {lab: s.rep.dim for lab, s in hp_pims9.items()}
    assert dims == {"1a": 9, "1b": 9, "1c": 9, "1d": 9, "2": 18}


def test_decomposition_certificate_resums(hprime, F9, hp_regular9):
    dec = indec_decompose(hp_regular9, Prng(0))
    cob = dec.change_of_basis()
    mat_inv(cob)  # the stacked bases must be a basis of the whole module
    total = sum(rep.dim for rep, _ in dec.all_bases)
    assert total == 72


def test_socle_series_semisimple(hp_refs9):
    m = direct_sum(hp_refs9["1a"], hp_refs9["2"])
    simples = _simple_list(hp_refs9)
    data = socle_series(m, simples)
    assert data.socle_layers == [("1a", "2")]
    assert data.radical_layers == [("1a", "2")]


def test_pim_loewy_fixtures(hp_pims9, hp_refs9):
    simples = _simple_list(hp_refs9)
    for lab, expected in PIM_DIAGRAMS.items():
        pim = hp_pims9[lab].rep
        rad = radical_series_layers(pim, simples)
        soc = socle_series_layers(pim, simples)
        assert rad == expected
        assert soc == list(reversed(expected))
        # symmetric algebra: socle isomorphic to top
        assert rad[0] == soc[0]


def test_radical_layers_sum_to_chop(hp_pims9, hp_refs9):
    simples = _simple_list(hp_refs9)
    pim = hp_pims9["1c"].rep
    layers = radical_series_layers(pim, simples)
    counted = {}
    for layer in layers:
        for lab in layer:
            counted[lab] = counted.get(lab, 0) + 1
    res = chop(pim, Prng(0))
    from modrep.fixtures import label_hprime_module
    chopped = {label_hprime_module(f.rep): f.multiplicity for f in res.factors}
    assert counted == chopped


def test_missing_simple_is_reported(hp_pims9, hp_refs9):
    simples = [hp_refs9["1a"], hp_refs9["1b"]]
    with pytest.raises(InputError):
        socle_series_layers(hp_pims9["1a"].rep, simples)


def test_iso_indec(hp_pims9, hp_refs9, F9):
    p1a = hp_pims9["1a"].rep
    p1b = hp_pims9["1b"].rep
    assert not iso_indec(p1a, p1b, Prng(0))
    pr = Prng(4)
    while True:
        basis = Mat.random(F9, 9, 9, pr)
        from modrep.ffield import echelonize
        if echelonize(basis).rank == 9:
            break
    assert iso_indec(p1a, p1a.conjugate(basis), Prng(0))
