"""Acceptance suite over the shipped fixtures.

Each criterion is a function returning a CriterionResult; run_all() executes
them in order, shares the expensive intermediate data, and prints one
pass/fail line per criterion.  All comparisons are exact (the domain is exact
algebra); the stated runtimes are targets, not assertions.

The 2.HS stretch criterion is gated on user-fetched data and reports SKIP
when the files are absent.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field as dcfield

import numpy as np

from .blocks import block_of, central_idempotents
from .chop import chop, iso_irr
from .config import CONFIG
from .errors import ModrepError
from .ffield import GF, Mat, echelonize, nullspace
from .fixtures import (a8_group, a8_simple, a8_simple_dims, hprime_group,
                       hprime_reference_simples, hprime_subgroup, label_hprime_module,
                       q_subgroup, r_subgroup, sylow_p)
from .green import higman_test, vertex
from .io_formats import parse_matrix_file, parse_perm_file, parse_word_file
from .perm import GroupHandle, Perm, Subgroup, evaluate_word
from .pipelines import (a8_simples, a8_vertices, c4xhprime_blocks, green_table,
                        hprime_cartan, hprime_pim_loewy, hprime_vertices,
                        trivial_source_census)
from .prng import Prng
from .rep import (Rep, dual, hom_space, induce, perm_module, restrict,
                  subsets_action, trivial_rep)
from .structure import indec_decompose, radical_series_layers, socle_series_layers

F3 = GF(3)
F9 = GF(3, 2)

CARTAN_EXPECTED = [
    [3, 0, 1, 1, 2],
    [0, 3, 1, 1, 2],
    [1, 1, 3, 0, 2],
    [1, 1, 0, 3, 2],
    [2, 2, 2, 2, 5],
]

REGULAR_CHOP_EXPECTED = {"1a": 9, "1b": 9, "1c": 9, "1d": 9, "2": 18}

PIM_DIAGRAMS = {
    "1a": [("1a",), ("2",), ("1a", "1c", "1d"), ("2",), ("1a",)],
    "1b": [("1b",), ("2",), ("1b", "1c", "1d"), ("2",), ("1b",)],
    "1c": [("1c",), ("2",), ("1a", "1b", "1c"), ("2",), ("1c",)],
    "1d": [("1d",), ("2",), ("1a", "1b", "1d"), ("2",), ("1d",)],
    "2": [("2",), ("1a", "1b", "1c", "1d"), ("2", "2", "2"),
          ("1a", "1b", "1c", "1d"), ("2",)],
}

# the eight cyclic-vertex trivial source modules, four per vertex class;
# each diagram is its radical series, top down
CYCLIC_DIAGRAMS_SET_ONE = [
    [("1a", "1d"), ("2",), ("1a", "1d")],
    [("1b", "1c"), ("2",), ("1b", "1c")],
    [("2",), ("1a", "1d"), ("2",)],
    [("2",), ("1b", "1c"), ("2",)],
]
CYCLIC_DIAGRAMS_SET_TWO = [
    [("1a", "1c"), ("2",), ("1a", "1c")],
    [("1b", "1d"), ("2",), ("1b", "1d")],
    [("2",), ("1a", "1c"), ("2",)],
    [("2",), ("1b", "1d"), ("2",)],
]

GREEN_EXPECTED = {1: "1a", 7: "1b", 28: "1d", 35: "2"}
GREEN_13_LAYERS = [("1c",), ("2",), ("1c",)]


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    skipped: bool = False
    detail: str = ""
    seconds: float = 0.0

    def line(self):
        status = "SKIP" if self.skipped else ("PASS" if self.passed else "FAIL")
        extra = f"  ({self.detail})" if self.detail else ""
        return f"[{status}] criterion {self.number}: {self.name} " \
               f"[{self.seconds:.1f}s]{extra}"


@dataclass
class SharedState:
    census: list | None = None
    greens: dict | None = None
    simples3: dict | None = None
    blocks3: object = None
    block_of3: dict | None = None


def _run(number, name, fn, state):
    t0 = time.time()
    try:
        detail = fn(state) or ""
        res = CriterionResult(number, name, True, detail=detail,
                              seconds=time.time() - t0)
    except SkipCriterion as exc:
        res = CriterionResult(number, name, False, skipped=True, detail=str(exc),
                              seconds=time.time() - t0)
    except (AssertionError, ModrepError) as exc:
        res = CriterionResult(number, name, False, detail=str(exc),
                              seconds=time.time() - t0)
    return res


class SkipCriterion(Exception):
    pass


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------

def criterion_1_cartan(state):
    C = hprime_cartan(F9)
    assert C == CARTAN_EXPECTED, f"Cartan matrix mismatch: {C}"
    return "5x5 Cartan matrix exact"


def criterion_2_regular_chop(state):
    from .pipelines import hprime_simples_from_regular
    labelled = hprime_simples_from_regular(F9)
    got = {lab: fac.multiplicity for lab, fac in labelled}
    assert got == REGULAR_CHOP_EXPECTED, f"multiset mismatch: {got}"
    assert all(fac.is_splitting for _, fac in labelled), "factor not absolutely irreducible"
    return "{1a:9, 1b:9, 1c:9, 1d:9, 2:18}"


def criterion_3_pim_loewy(state):
    loewy = hprime_pim_loewy(F9)
    for lab, expected in PIM_DIAGRAMS.items():
        rad, soc = loewy[lab]
        assert rad == expected, f"P({lab}) radical layers {rad} != {expected}"
        assert soc == list(reversed(expected)), \
            f"P({lab}) socle layers {soc} mismatch"
    return "all five PIM diagrams layer-by-layer"


def criterion_4_census(state):
    entries = trivial_source_census(F9)
    state.census = entries
    assert len(entries) == 18, f"census has {len(entries)} classes, expected 18"
    assert all(e.is_trivial_source for e in entries), "a summand failed the test"
    proj = [e for e in entries if e.vertex_order == 1]
    full = [e for e in entries if e.vertex_order == 9]
    cyc = [e for e in entries if e.vertex_order == 3]
    assert len(proj) == 5 and len(full) == 5 and len(cyc) == 8, \
        f"partition {len(proj)}/{len(full)}/{len(cyc)} != 5/5/8"
    assert sorted(e.rep.dim for e in full) == [1, 1, 1, 1, 2], "vertex-P dims wrong"
    by_class: dict = {}
    for e in cyc:
        by_class.setdefault(e.vertex_class, []).append(e.radical_layers)
    assert sorted(len(v) for v in by_class.values()) == [4, 4], \
        f"cyclic vertices split {dict((k, len(v)) for k, v in by_class.items())}"
    def norm(diagrams):
        return sorted(tuple(map(tuple, d)) for d in diagrams)
    sets = [norm(v) for v in by_class.values()]
    want_one = norm(CYCLIC_DIAGRAMS_SET_ONE)
    want_two = norm(CYCLIC_DIAGRAMS_SET_TWO)
    assert sorted(sets) == sorted([want_one, want_two]), "cyclic-vertex diagrams mismatch"
    return "18 = 5 projective + 5 vertex-P + 8 cyclic-vertex"


def criterion_5_a8_simples(state):
    simples, bd, blocks = a8_simples(F3)
    state.simples3 = simples
    state.blocks3 = bd
    state.block_of3 = blocks
    assert sorted(simples) == sorted(a8_simple_dims)
    for d, s in simples.items():
        assert s.dim == d
        assert hom_space(s, s).dim == 1, f"simple {d} is not absolutely irreducible"
    dims = sorted(simples)
    for i in range(len(dims)):
        for j in range(i + 1, len(dims)):
            assert not (dims[i] == dims[j]), "duplicate dimensions"
    principal = bd.principal_index
    for d in a8_simple_dims:
        assert blocks[d] == principal, f"simple {d} not in the principal block"
    return "dims {1,7,13,28,35}, absolutely irreducible, principal block"


def criterion_6_vertices(state):
    va = a8_vertices(F3)
    for d, report in va.items():
        assert report.vertex_order == 9, f"8-point simple {d} has vertex order {report.vertex_order}"
        assert len(report.minimal) == 1
    vh = hprime_vertices(F9)
    for lab, report in vh.items():
        assert report.vertex_order == 9, f"{lab} has vertex order {report.vertex_order}"
    return "all ten simples have the full Sylow subgroup as vertex"


def criterion_7_green(state):
    table = green_table(F3)
    state.greens = table
    for d, lab in GREEN_EXPECTED.items():
        got = table[d]["label"]
        assert got == lab, f"f'({d}) = {got}, expected {lab}"
    layers = table[13]["layers"]
    assert layers is not None, "f'(13) unexpectedly matched a simple"
    rad, soc = layers
    assert rad == GREEN_13_LAYERS and soc == GREEN_13_LAYERS, \
        f"f'(13) layers {rad} / {soc}"
    return "1->1a, 7->1b, 28->1d, 35->2, 13->[1c|2|1c]"


def criterion_8_blocks(state):
    bd, by_block, zaction, i4 = c4xhprime_blocks(F9)
    assert bd.nblocks == 4, f"{bd.nblocks} blocks, expected 4"
    faithful = [idx for idx, ks in zaction.items() if ks & {1, 3}]
    assert len(faithful) == 2, f"faithful blocks: {faithful}"
    for idx in faithful:
        dims = sorted(r.dim for r in by_block[idx])
        assert dims == [1, 1, 1, 1, 2], f"faithful block {idx} simple dims {dims}"
    total = sum(len(v) for v in by_block.values())
    assert total == 20, f"{total} simples placed, expected 20"
    return "4 blocks; the two faithful ones hold 5 simples of dims {1,1,1,1,2}"


def criterion_9_properties(state):
    notes = []
    # rank-nullity on 1000 seeded matrices
    prng = Prng(99)
    for i in range(1000):
        fld = F3 if i % 2 == 0 else F9
        rows = 1 + prng.below(12)
        cols = 1 + prng.below(12)
        m = Mat.random(fld, rows, cols, prng)
        assert echelonize(m).rank + nullspace(m).nrows == cols
    notes.append("rank-nullity x1000")

    # adjunction dimension equality on fixture triples
    g = hprime_group()
    refs = hprime_reference_simples(F9)
    for subname, sub in (("Q", q_subgroup()), ("P", sylow_p())):
        local = Subgroup(g, gens=list(sub.gens), name=subname)
        vup = induce(trivial_rep(local.group, F9), g, local)
        for lab in ("1a", "1b", "1c", "1d", "2"):
            x = refs[lab]
            left = hom_space(x, vup).dim
            right = hom_space(restrict(x, local), trivial_rep(local.group, F9)).dim
            assert left == right, f"adjunction fails for ({lab}, {subname})"
    a8 = a8_group()
    hp = hprime_subgroup()
    vup = induce(trivial_rep(hp.group, F3), a8, hp)
    for d in (1, 7, 13):
        x = a8_simple(d, F3)
        left = hom_space(x, vup).dim
        right = hom_space(restrict(x, hp), trivial_rep(hp.group, F3)).dim
        assert left == right, f"adjunction fails for (dim {d}, H')"
    notes.append("adjunction")

    # chop invariance under basis change
    m28 = perm_module(a8, subsets_action(a8, 2), F3)
    res = chop(m28, Prng(0))
    pr = Prng(7)
    while True:
        basis = Mat.random(F3, 28, 28, pr)
        if echelonize(basis).rank == 28:
            break
    res2 = chop(m28.conjugate(basis), Prng(3))
    assert res.dims_multiset() == res2.dims_multiset()
    for f2 in res2.factors:
        assert any(f1.rep.dim == f2.rep.dim and iso_irr(f1.rep, f2.rep)
                   and f1.multiplicity == f2.multiplicity
                   for f1 in res.factors)
    notes.append("chop basis invariance")

    # Loewy duality mirror on fixture modules (all H' simples are self-dual)
    simple_list = [refs[lab] for lab in ("1a", "1b", "1c", "1d", "2")]
    census = state.census or trivial_source_census(F9)
    state.census = census
    for e in census:
        if e.rep.dim > 18:
            continue
        dm = dual(e.rep)
        rad_d = radical_series_layers(dm, simple_list)
        assert rad_d == list(reversed(e.socle_layers)), \
            "dual radical layers are not the mirrored socle layers"
    notes.append("Loewy duality")

    # Higman monotonicity along 1 <= Q <= P
    x = a8_simple(7, F3)
    chain = [Subgroup(a8, gens=[Perm.identity(8)], name="1"), q_subgroup(), sylow_p()]
    verdicts = [higman_test(x, h, a8) for h in chain]
    for small, big in zip(verdicts, verdicts[1:]):
        assert (not small) or big, "Higman verdicts are not monotone"
    assert verdicts == [False, False, True]
    notes.append("Higman monotonicity")

    # idempotent axioms, exactly
    bd = central_idempotents(hprime_group(), F9)
    Z = bd.algebra
    total = np.zeros(Z.nclasses, dtype=F9.dtype)
    for e in bd.idempotents:
        assert np.array_equal(Z.multiply(e, e), e)
        total = F9.vec_add(total, e)
        for other in bd.idempotents:
            if other is not e:
                assert not Z.multiply(e, other).any()
    assert np.array_equal(total, Z.unit)
    notes.append("idempotent axioms")
    return "; ".join(notes)


STRETCH_FILES = ("2hs.perms", "2hs_a8.words", "2hs_s4.g1.mx", "2hs_s4.g2.mx")


def stretch_data_dir():
    return os.environ.get("MODREP_2HS_DATA", os.path.join(os.getcwd(), "2hs_data"))


def criterion_10_stretch(state):
    base = stretch_data_dir()
    missing = [f for f in STRETCH_FILES if not os.path.exists(os.path.join(base, f))]
    if missing:
        raise SkipCriterion(f"2.HS data not present under {base} (missing {missing})")
    perms = parse_perm_file(os.path.join(base, "2hs.perms"))
    big = GroupHandle(perms)
    order = big.order()
    assert order == 88704000, f"group order {order}"
    words = parse_word_file(os.path.join(base, "2hs_a8.words"))
    a8_sub = Subgroup(big, words=words, name="A8")
    assert a8_sub.order() == 20160, "embedded subgroup does not have order 20160"
    mats = [parse_matrix_file(os.path.join(base, f"2hs_s4.g{i}.mx"), F3)
            for i in (1, 2)]
    s4 = Rep(big, F3, mats, label="S4")
    assert s4.dim == 56
    down = restrict(s4, a8_sub)
    dec = indec_decompose(down, Prng(0))
    dims = sorted((s.rep.dim, s.multiplicity) for s in dec.summands)
    assert dims == [(28, 2)], f"restriction decomposes as {dims}, expected 28 (+) 28"
    twenty8 = a8_simple(28, F3)
    piece = dec.summands[0].rep
    assert piece.dim == 28
    return "group order 88704000; S4 restricted = 28 (+) 28"


CRITERIA = [
    (1, "Cartan matrix of the order-72 normalizer over GF(9)", criterion_1_cartan),
    (2, "chop of the 72-dim regular module", criterion_2_regular_chop),
    (3, "Loewy series of the five PIMs", criterion_3_pim_loewy),
    (4, "trivial-source census (18 modules, 5+5+8)", criterion_4_census),
    (5, "five simples of the 8-point group in the principal block", criterion_5_a8_simples),
    (6, "vertices of all ten simples", criterion_6_vertices),
    (7, "Green correspondence along the pinned embedding", criterion_7_green),
    (8, "block splitting of the order-288 product group", criterion_8_blocks),
    (9, "always-on property suites", criterion_9_properties),
    (10, "stretch: user-fetched 704-point data", criterion_10_stretch),
]


def run_all(include_stretch=True, verbose=True):
    state = SharedState()
    results = []
    for number, name, fn in CRITERIA:
        if number == 10 and not include_stretch:
            continue
        res = _run(number, name, fn, state)
        results.append(res)
        if verbose:
            print(res.line(), flush=True)
    return results
