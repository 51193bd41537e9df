"""End-to-end computations on the shipped fixtures.

These drive both the command-line `selftest`/task commands and the acceptance
test suite: the Cartan matrix and Loewy series of the order-72 normalizer,
the trivial-source census, the simples of the 8-point group, their vertices,
the Green correspondence table, and the block splitting of the order-288
direct product.
"""

from __future__ import annotations

from dataclasses import dataclass

from .blocks import block_of, cartan_matrix, central_idempotents, pims
from .chop import chop, iso_irr
from .errors import InputError
from .ffield import GF, FieldSpec, Mat
from .fixtures import (a8_group, a8_simple, a8_simple_dims, c4xhprime_group,
                       hprime_group, hprime_reference_simples, hprime_subgroup,
                       label_hprime_module, q_subgroup, r_subgroup, sylow_p)
from .green import green_correspondent, trivial_source_test, vertex
from .perm import Perm, Subgroup
from .prng import Prng
from .rep import Rep, induce, perm_module, regular_module, trivial_rep
from .structure import (IndecCertificate, indec_decompose, iso_indec,
                        radical_series_layers, socle_series_layers)

__all__ = [
    "hprime_simples_from_regular",
    "hprime_pims",
    "hprime_cartan",
    "hprime_pim_loewy",
    "trivial_source_census",
    "a8_simples",
    "a8_vertices",
    "hprime_vertices",
    "green_table",
    "c4xhprime_blocks",
    "CensusEntry",
]

F9 = GF(3, 2)
F3 = GF(3)


def hprime_simples_from_regular(field: FieldSpec, seed: int = 0):
    """Chop the regular module and attach the pinned labels."""
    g = hprime_group()
    reg = regular_module(g, field, label="regular")
    res = chop(reg, Prng(seed))
    labelled = []
    for fac in res.factors:
        lab = label_hprime_module(fac.rep, field)
        if lab is None:
            raise AssertionError("chop factor failed to match a reference simple")
        labelled.append((lab, fac))
    labelled.sort(key=lambda t: t[0])
    return labelled


def hprime_pims(field: FieldSpec, seed: int = 0):
    """(simples, pim list) of the one-block group algebra, in label order."""
    g = hprime_group()
    refs = hprime_reference_simples(field)
    simples = [refs[lab] for lab in ("1a", "1b", "1c", "1d", "2")]
    bd = central_idempotents(g, field)
    reg = regular_module(g, field, label="regular")
    pim_list = pims(bd, 0, reg, simples, Prng(seed), source_is_projective=True)
    return simples, pim_list, bd


def hprime_cartan(field: FieldSpec | None = None, seed: int = 0):
    simples, pim_list, _ = hprime_pims(field or F9, seed)
    return cartan_matrix(pim_list, simples)


def hprime_pim_loewy(field: FieldSpec | None = None, seed: int = 0):
    """{top label: (radical layers, socle layers)} for the five PIMs."""
    field = field or F9
    simples, pim_list, _ = hprime_pims(field, seed)
    out = {}
    for s, pim in zip(simples, pim_list):
        rad = radical_series_layers(pim, simples)
        soc = socle_series_layers(pim, simples)
        out[s.label] = (rad, soc)
    return out


@dataclass
class CensusEntry:
    rep: Rep
    vertex_order: int
    vertex_class: str           # "1", "Q", "R" or "P"
    is_trivial_source: bool
    radical_layers: list
    socle_layers: list
    sources: list               # which induced modules exposed it


def trivial_source_census(field: FieldSpec | None = None, seed: int = 0):
    """All trivial source modules of the order-72 normalizer.

    Decomposes the permutation modules induced from the two order-3 subgroup
    classes, from the Sylow subgroup, and the regular module; classifies
    every summand by vertex and the trivial-source predicate.
    """
    field = field or F9
    g = hprime_group()
    p_local = Subgroup(g, gens=list(sylow_p().gens), name="P")
    q_local = Subgroup(g, gens=list(q_subgroup().gens), name="Q")
    r_local = Subgroup(g, gens=list(r_subgroup().gens), name="R")
    sources = [
        ("kQ^up", induce(trivial_rep(q_local.group, field), g, q_local, label="kQ^up")),
        ("kR^up", induce(trivial_rep(r_local.group, field), g, r_local, label="kR^up")),
        ("kP^up", induce(trivial_rep(p_local.group, field), g, p_local, label="kP^up")),
        ("regular", regular_module(g, field, label="regular")),
    ]
    refs = hprime_reference_simples(field)
    simples = [refs[lab] for lab in ("1a", "1b", "1c", "1d", "2")]
    prng = Prng(seed)
    entries: list[CensusEntry] = []
    q_keys = q_local.element_keys()
    r_keys = r_local.element_keys()
    for src_name, module in sources:
        dec = indec_decompose(module, prng)
        for s in dec.summands:
            known = None
            for e in entries:
                if e.rep.dim == s.rep.dim and iso_indec(e.rep, s.rep, prng):
                    known = e
                    break
            if known is not None:
                if src_name not in known.sources:
                    known.sources.append(src_name)
                continue
            vr = vertex(s.rep, p_local, g=g, cert=s.certificate)
            vclass = "1"
            vsub = vr.minimal[0]
            if vr.vertex_order == 9:
                vclass = "P"
            elif vr.vertex_order == 3:
                keys = vsub.element_keys()
                if keys == q_keys or _keys_conjugate(g, keys, q_keys):
                    vclass = "Q"
                elif keys == r_keys or _keys_conjugate(g, keys, r_keys):
                    vclass = "R"
                else:
                    vclass = "?"
            ts = trivial_source_test(s.rep, vsub, g=g, cert=s.certificate,
                                     verify_vertex=False)
            entries.append(CensusEntry(
                rep=s.rep, vertex_order=vr.vertex_order, vertex_class=vclass,
                is_trivial_source=ts,
                radical_layers=radical_series_layers(s.rep, simples),
                socle_layers=socle_series_layers(s.rep, simples),
                sources=[src_name]))
    return entries


def _keys_conjugate(group, keys_a, keys_b):
    """Whether two subgroup element-key sets are conjugate in the group."""
    import numpy as np
    elems_a = [Perm(np.frombuffer(k, dtype=np.int32).copy()) for k in keys_a]
    for x in group.elements():
        xi = x.inverse()
        if frozenset((xi * e * x)._key for e in elems_a) == keys_b:
            return True
    return False


def a8_simples(field: FieldSpec | None = None, seed: int = 0):
    """The five canonical simples, with principal-block membership checks."""
    field = field or F3
    g = a8_group()
    simples = {d: a8_simple(d, field, seed) for d in a8_simple_dims}
    bd = central_idempotents(g, field)
    blocks = {d: block_of(simples[d], bd) for d in a8_simple_dims}
    return simples, bd, blocks


def a8_vertices(field: FieldSpec | None = None, seed: int = 0):
    field = field or F3
    p_sub = sylow_p()
    g = a8_group()
    out = {}
    for d in a8_simple_dims:
        s = a8_simple(d, field, seed)
        out[d] = vertex(s, p_sub, g=g, cert=IndecCertificate(1, 0))
    return out


def hprime_vertices(field: FieldSpec | None = None, seed: int = 0):
    field = field or F9
    g = hprime_group()
    p_local = Subgroup(g, gens=list(sylow_p().gens), name="P")
    refs = hprime_reference_simples(field)
    out = {}
    for lab in ("1a", "1b", "1c", "1d", "2"):
        out[lab] = vertex(refs[lab], p_local, g=g, cert=IndecCertificate(1, 0))
    return out


def green_table(field: FieldSpec | None = None, seed: int = 0):
    """{dim: report} for the Green correspondence along the pinned embedding.

    Each report carries the correspondent's label (for the four simples) or
    its Loewy layers (for the 4-dimensional correspondent of the
    13-dimensional simple).
    """
    field = field or F3
    g = a8_group()
    p_sub = sylow_p()
    n_sub = hprime_subgroup()
    refs = hprime_reference_simples(field)
    simples = [refs[lab] for lab in ("1a", "1b", "1c", "1d", "2")]
    out = {}
    for d in a8_simple_dims:
        s = a8_simple(d, field, seed)
        rep = green_correspondent(s, p_sub, n_sub, g=g, prng=Prng(seed),
                                  cert=IndecCertificate(1, 0))
        corr = rep.correspondent
        label = label_hprime_module(corr, field) if corr.dim in (1, 2) else None
        layers = None
        if label is None:
            layers = (radical_series_layers(corr, simples),
                      socle_series_layers(corr, simples))
        out[d] = {"report": rep, "label": label, "layers": layers}
    return out


def c4xhprime_blocks(field: FieldSpec | None = None, seed: int = 0):
    """Block data of the order-288 group plus the simple-per-block census.

    The 20 simples are built as tensor products of the four linear characters
    of the order-4 factor with the five simples of the order-72 factor (both
    factors act on disjoint point sets, so the product representations are
    direct constructions); completeness follows from counting 3-regular
    classes.  Each block reports the scalar through which the order-4
    generator acts ('faithful' blocks see a primitive fourth root of unity).
    """
    import numpy as np
    field = field or F9
    g = c4xhprime_group()
    bd = central_idempotents(g, field)
    if (field.q - 1) % 4 != 0:
        raise InputError("the field does not contain a primitive 4th root of unity")
    i4 = next(a for a in range(2, field.q)
              if field.pow(a, 4) == 1 and field.pow(a, 2) != 1)
    # simples of the 9-point factor, transported to the 13-point group
    h9 = _affine_factor_simples(g, field, seed)
    out = []
    for k in range(4):
        zscalar = field.pow(i4, k)
        for rep in h9:
            full = []
            for gi in range(4):
                if gi == 0:
                    arr = np.eye(rep.dim, dtype=field.dtype)
                    arr = field.vec_mul(np.asarray(zscalar, dtype=field.dtype), arr)
                    full.append(Mat(field, arr, _validate=False))
                else:
                    full.append(rep.gen_mats[gi - 1])
            srep = Rep(g, field, full, label=f"z^{k}(x){rep.label}", validate=False)
            out.append((k, srep))
    simples_by_block: dict = {}
    zaction: dict = {}
    for k, srep in out:
        idx = block_of(srep, bd)
        simples_by_block.setdefault(idx, []).append(srep)
        zaction.setdefault(idx, set()).add(k)
    return bd, simples_by_block, zaction, i4


def _affine_factor_simples(g, field, seed):
    """Simples of the order-72 factor of the 13-point group, labelled ad hoc.

    The 9-point permutation module is projective (point stabilizer of order
    8), so it exposes the trivial, two further linear, and the 2-dimensional
    simples; the remaining linear one is the product of the two nontrivial
    linears.
    """
    from .perm import GroupHandle
    from .rep import tensor as _tensor
    h = GroupHandle(g.generators[1:])
    if h.order() != 72:
        raise AssertionError("13-point fixture lost its order-72 factor")
    pm = perm_module(h, list(h.generators), field, label="aff9")
    res = chop(pm, Prng(seed))
    lin = [f.rep for f in res.factors if f.rep.dim == 1]
    two = [f.rep for f in res.factors if f.rep.dim == 2]
    if len(two) != 1 or len(lin) != 3:
        raise AssertionError("unexpected factor structure of the 9-point module")
    nontriv = [r for r in lin if not all(m.is_identity() for m in r.gen_mats)]
    triv = [r for r in lin if all(m.is_identity() for m in r.gen_mats)]
    if len(nontriv) != 2 or len(triv) != 1:
        raise AssertionError("linear factors of the 9-point module look wrong")
    fourth = _tensor(nontriv[0], nontriv[1])
    reps = [triv[0].relabel("u"), nontriv[0].relabel("l1"), nontriv[1].relabel("l2"),
            fourth.relabel("l3"), two[0].relabel("t")]
    # sanity: pairwise non-isomorphic
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            if reps[i].dim == reps[j].dim and iso_irr(reps[i], reps[j]):
                raise AssertionError("factor simples are not distinct")
    return reps
