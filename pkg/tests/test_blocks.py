import numpy as np
import pytest

from modrep.blocks import block_of, cartan_matrix, central_idempotents, pims
from modrep.errors import CapExceeded, InputError
from modrep.ffield import GF, echelonize, Mat
from modrep.fixtures import c4xhprime_group
from modrep.perm import GroupHandle, Perm
from modrep.prng import Prng
from modrep.rep import Rep, regular_module, trivial_rep

CARTAN_EXPECTED = [
    [3, 0, 1, 1, 2],
    [0, 3, 1, 1, 2],
    [1, 1, 3, 0, 2],
    [1, 1, 0, 3, 2],
    [2, 2, 2, 2, 5],
]


def test_single_block_group_algebras(hprime, F9, F3):
    bd = central_idempotents(hprime, F9)
    assert bd.nblocks == 1
    assert bd.principal_index == 0
    c3 = GroupHandle([Perm.from_cycles(3, [(0, 1, 2)])])
    assert central_idempotents(c3, F3).nblocks == 1  # p-group: one block


def test_idempotent_axioms_product_group(F9):
    g = c4xhprime_group()
    bd = central_idempotents(g, F9)
    assert bd.nblocks == 4
    Z = bd.algebra
    total = np.zeros(Z.nclasses, dtype=F9.dtype)
    for e in bd.idempotents:
        assert np.array_equal(Z.multiply(e, e), e)
        total = F9.vec_add(total, e)
        for other in bd.idempotents:
            if other is not e:
                assert not Z.multiply(e, other).any()
    assert np.array_equal(total, Z.unit)


def test_block_dimension_sum(hprime, F9):
    # the block component of the regular module has dim = rank of the idempotent action
    for group, expect in ((hprime, 72), (c4xhprime_group(), 288)):
        bd = central_idempotents(group, F9)
        reg = regular_module(group, F9)
        from modrep.blocks import _class_sums_on_module
        sums = _class_sums_on_module(reg, bd)
        total = 0
        for e in bd.idempotents:
            act = np.zeros((reg.dim, reg.dim), dtype=F9.dtype)
            for k in np.nonzero(e)[0]:
                act = F9.vec_add(act, F9.vec_mul(np.asarray(e[k], dtype=F9.dtype),
                                                 sums[int(k)]))
            total += echelonize(Mat(F9, act)).rank
        assert total == expect


def test_block_of_trivial_module_is_principal(hprime, F9):
    bd = central_idempotents(hprime, F9)
    assert block_of(trivial_rep(hprime, F9), bd) == bd.principal_index


def test_block_of_reports_split_modules(F9):
    g = c4xhprime_group()
    bd = central_idempotents(g, F9)
    reg = regular_module(g, F9)
    with pytest.raises(InputError):
        block_of(reg, bd)   # the regular module meets every block


def test_blocks_cap(F9, a8):
    with pytest.raises(CapExceeded):
        central_idempotents(a8, F9, cap=1000)


def test_cartan_fixture(hp_refs9, F9, hprime):
    simples = [hp_refs9[lab] for lab in ("1a", "1b", "1c", "1d", "2")]
    bd = central_idempotents(hprime, F9)
    reg = regular_module(hprime, F9)
    pim_list = pims(bd, 0, reg, simples, Prng(0), source_is_projective=True)
    C = cartan_matrix(pim_list, simples)
    assert C == CARTAN_EXPECTED
    # symmetric and entrywise positive on the diagonal blocks
    assert all(C[i][j] == C[j][i] for i in range(5) for j in range(5))


def test_pims_requires_projective_flag(hp_refs9, F9, hprime):
    simples = [hp_refs9[lab] for lab in ("1a", "1b", "1c", "1d", "2")]
    bd = central_idempotents(hprime, F9)
    reg = regular_module(hprime, F9)
    with pytest.raises(InputError):
        pims(bd, 0, reg, simples, Prng(0))


def test_defect_zero_cartan_is_one_by_one(F9):
    # group of order prime to p: every block has a single projective simple
    c4 = GroupHandle([Perm.from_cycles(4, [(0, 1, 2, 3)])])
    bd = central_idempotents(c4, F9)
    assert bd.nblocks == 4
    reg = regular_module(c4, F9)
    from modrep.structure import indec_decompose
    dec = indec_decompose(reg, Prng(0))
    assert sorted(s.rep.dim for s in dec.summands) == [1, 1, 1, 1]
    for s in dec.summands:
        idx = block_of(s.rep, bd)
        C = cartan_matrix([s.rep], [s.rep.relabel("S")])
        assert C == [[1]]
