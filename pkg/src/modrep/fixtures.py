"""Shipped fixture data: the alternating group on 8 points with its pinned
3-local subgroups, the order-288 direct-product group on 13 points, and the
reference simple modules fixing the label conventions.

Labels for the five order-72 normalizer simples follow the documented
canonicalization: `1a` is trivial; `1b` is the unique nontrivial linear
representation whose kernel contains an element of order 4; the tie between
`1c` and `1d` is broken by the pinned embedding into the 8-point group (the
Green correspondent of the 28-dimensional simple is `1d`).  The reference
matrices below were computed once with this package and are validated by the
test suite against all of those rules.
"""

from __future__ import annotations

from functools import lru_cache

from .chop import chop, iso_irr
from .errors import DataError, InputError
from .ffield import FieldSpec, GF, Mat
from .perm import GroupHandle, Perm, Subgroup, normalizer_small
from .prng import Prng
from .rep import Rep, perm_module, regular_module, subsets_action, tensor

__all__ = [
    "a8_group",
    "sylow_p",
    "q_subgroup",
    "r_subgroup",
    "hprime_subgroup",
    "hprime_group",
    "c4xhprime_group",
    "hprime_reference_simples",
    "label_hprime_module",
    "a8_simple",
    "a8_simple_dims",
]

# generators: a 3-cycle and a 7-cycle (0-based points)
A8_GEN_CYCLES = [[(0, 1, 2)], [(1, 2, 3, 4, 5, 6, 7)]]

# pinned subgroup generators, given as explicit permutations of the 8 points;
# loaders re-derive words through the stabilizer chain when words are needed
P_GEN_CYCLES = [[(0, 1, 2)], [(3, 4, 5)]]
Q_GEN_CYCLES = [[(0, 1, 2)]]
R_GEN_CYCLES = [[(0, 1, 2), (3, 4, 5)]]
HPRIME_GEN_CYCLES = [
    [(0, 1, 2)],
    [(3, 4, 5)],
    [(0, 1), (6, 7)],
    [(0, 2), (3, 4)],
    [(0, 4, 1, 3), (2, 5)],
]

# reference simple modules of the order-72 normalizer over GF(3), one scalar
# (or 2x2 matrix) per generator above
HPRIME_LINEAR_SCALARS = {
    "1a": (1, 1, 1, 1, 1),
    "1b": (1, 1, 2, 1, 1),
    "1c": (1, 1, 2, 1, 2),
    "1d": (1, 1, 1, 1, 2),
}
HPRIME_TWODIM_MATS = (
    ((1, 0), (0, 1)),
    ((1, 0), (0, 1)),
    ((1, 0), (0, 2)),
    ((2, 0), (0, 2)),
    ((0, 1), (2, 0)),
)


@lru_cache(maxsize=None)
def a8_group() -> GroupHandle:
    gens = [Perm.from_cycles(8, c) for c in A8_GEN_CYCLES]
    g = GroupHandle(gens)
    if g.order() != 20160:
        raise DataError("shipped 8-point generators do not generate the expected group")
    return g


def _subgroup(cycles, name, expected_order) -> Subgroup:
    g = a8_group()
    sub = Subgroup(g, gens=[Perm.from_cycles(8, c) for c in cycles], name=name)
    if sub.order() != expected_order:
        raise DataError(f"fixture subgroup {name} has order {sub.order()}, "
                        f"expected {expected_order}")
    return sub


@lru_cache(maxsize=None)
def sylow_p() -> Subgroup:
    return _subgroup(P_GEN_CYCLES, "P", 9)


@lru_cache(maxsize=None)
def q_subgroup() -> Subgroup:
    return _subgroup(Q_GEN_CYCLES, "Q", 3)


@lru_cache(maxsize=None)
def r_subgroup() -> Subgroup:
    return _subgroup(R_GEN_CYCLES, "R", 3)


@lru_cache(maxsize=None)
def hprime_subgroup() -> Subgroup:
    sub = _subgroup(HPRIME_GEN_CYCLES, "H'", 72)
    # the pinned embedding: H' must normalize P
    p_keys = sylow_p().element_keys()
    for gen in sub.gens:
        gi = gen.inverse()
        for e in sylow_p().group.elements():
            if (gi * e * gen)._key not in p_keys:
                raise DataError("fixture H' does not normalize the fixture P")
    return sub


@lru_cache(maxsize=None)
def hprime_group() -> GroupHandle:
    return hprime_subgroup().group


def hprime_reference_simples(field: FieldSpec | None = None):
    """The five labelled reference simples {1a, 1b, 1c, 1d, 2} over `field`.

    The matrices have prime-field entries, so they lift verbatim into any
    GF(3^e) under the fixed subfield encoding.
    """
    field = field or GF(3)
    if field.p != 3:
        raise InputError("reference simples live in characteristic 3")
    g = hprime_group()
    out = {}
    for label, scalars in HPRIME_LINEAR_SCALARS.items():
        mats = [Mat.from_rows(field, [[s]]) for s in scalars]
        out[label] = Rep(g, field, mats, label=label, validate=False)
    mats = [Mat.from_rows(field, [list(r) for r in m]) for m in HPRIME_TWODIM_MATS]
    out["2"] = Rep(g, field, mats, label="2", validate=False)
    return out


def label_hprime_module(m: Rep, field: FieldSpec | None = None):
    """Label of an irreducible module over the pinned H' (None if no match)."""
    refs = hprime_reference_simples(field or m.field)
    for label, ref in refs.items():
        if ref.dim == m.dim and iso_irr(ref, m):
            return label
    return None


# ---------------------------------------------------------------------------
# the order-288 direct product on 13 points
# ---------------------------------------------------------------------------

def _affine_hprime_perms():
    """Generators of the order-72 normalizer acting on the 9 affine points
    (a, b) <-> 3a + b: one translation plus the two linear symmetries."""
    def apply(fun):
        images = []
        for idx in range(9):
            a, b = divmod(idx, 3)
            na, nb = fun(a, b)
            images.append(3 * (na % 3) + (nb % 3))
        return images
    t1 = apply(lambda a, b: (a + 1, b))
    rot = apply(lambda a, b: (-b, a))
    refl = apply(lambda a, b: (b, a))
    return [t1, rot, refl]


@lru_cache(maxsize=None)
def c4xhprime_group() -> GroupHandle:
    """C4 x (P x| D8) on 13 points: 9 affine points plus a 4-cycle."""
    gens = []
    z = list(range(13))
    z[9:13] = [10, 11, 12, 9]
    gens.append(Perm(z))
    for images in _affine_hprime_perms():
        gens.append(Perm(list(images) + [9, 10, 11, 12]))
    g = GroupHandle(gens)
    if g.order() != 288:
        raise DataError(f"13-point fixture group has order {g.order()}, expected 288")
    return g


# ---------------------------------------------------------------------------
# canonical simples of the 8-point group
# ---------------------------------------------------------------------------

a8_simple_dims = (1, 7, 13, 28, 35)

_A8_SIMPLE_CACHE: dict = {}


def a8_simple(dim: int, field: FieldSpec | None = None, prng_seed: int = 0) -> Rep:
    """The simple module of the given dimension over GF(3), by the documented
    pipeline: 1 and 7 from the natural permutation module, 13 from 2-subsets,
    28 from 3-subsets, and 35 from the tensor product of 7 and 13."""
    field = field or GF(3)
    key = (dim, field, prng_seed)
    if key in _A8_SIMPLE_CACHE:
        return _A8_SIMPLE_CACHE[key]
    g = a8_group()
    if dim not in a8_simple_dims:
        raise InputError(f"no canonical simple of dimension {dim}")

    def factor_of(module, d):
        res = chop(module, Prng(prng_seed))
        hits = [f.rep for f in res.factors if f.rep.dim == d]
        if len(hits) != 1:
            raise AssertionError(f"expected a unique factor of dim {d}")
        return hits[0].relabel(str(d))

    if dim in (1, 7):
        m = perm_module(g, list(g.generators), field, label="perm8")
        rep = factor_of(m, dim)
    elif dim == 13:
        m = perm_module(g, subsets_action(g, 2), field, label="perm28")
        rep = factor_of(m, 13)
    elif dim == 28:
        m = perm_module(g, subsets_action(g, 3), field, label="perm56")
        rep = factor_of(m, 28)
    else:
        t = tensor(a8_simple(7, field, prng_seed), a8_simple(13, field, prng_seed))
        rep = factor_of(t, 35)
    _A8_SIMPLE_CACHE[key] = rep
    return rep
