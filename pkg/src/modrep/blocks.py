"""Block decomposition of small group algebras via central primitive
idempotents, block membership of modules, PIMs and Cartan matrices.

The center is handled in the class-sum basis.  Idempotents are refined by
factoring minimal polynomials of multiplication operators until every basis
operator on every summand acts with a primary minimal polynomial; for a
commutative algebra over the working field that stopping rule is exact
primitivity (a non-primitive summand always exposes an operator whose minimal
polynomial has two coprime factors).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import CONFIG
from .errors import CapExceeded, InputError
from .ffield import FieldSpec, Mat, Poly, echelonize, factor_poly, min_poly, solve_left
from .ffield import _mul_blas
from .perm import GroupHandle, conjugacy_classes_small
from .prng import Prng
from .rep import Rep, hom_space
from .structure import indec_decompose, radical_series_layers

__all__ = [
    "BlockData",
    "central_idempotents",
    "block_of",
    "pims",
    "cartan_matrix",
]


# ---------------------------------------------------------------------------
# class algebra
# ---------------------------------------------------------------------------

class _ClassAlgebra:
    """The center of kG in the class-sum basis, with right-multiplication ops."""

    def __init__(self, group: GroupHandle, field: FieldSpec):
        self.group = group
        self.field = field
        reps, sizes, class_of = conjugacy_classes_small(group)
        self.reps = reps
        self.sizes = sizes
        self.class_of = class_of
        c = len(reps)
        self.nclasses = c
        elements = group.elements()
        inv_class = [class_of[reps[k].inverse()._key] for k in range(c)]
        self.inverse_class = inv_class
        # a[j][i][k] = #{x in C_j, y in C_i : x y = z_k}, computed as
        # x in C_j, y = x^-1 z_k.
        counts = np.zeros((c, c, c), dtype=np.int64)
        for x in elements:
            j = class_of[x._key]
            xi = x.inverse()
            for k in range(c):
                y = xi * reps[k]
                counts[j, class_of[y._key], k] += 1
        p = field.p
        self.right_ops = []
        for i in range(c):
            self.right_ops.append(Mat(field, (counts[:, i, :] % p).astype(field.dtype),
                                      _validate=False))
        self.unit = np.zeros(c, dtype=field.dtype)
        self.unit[class_of[elements[0]._key]] = 1  # identity class

    def right_mult_operator(self, coords) -> Mat:
        f = self.field
        c = self.nclasses
        acc = np.zeros((c, c), dtype=f.dtype)
        for i in np.nonzero(coords)[0]:
            term = f.vec_mul(np.asarray(coords[i], dtype=f.dtype), self.right_ops[int(i)].A)
            acc = f.vec_add(acc, term)
        return Mat(f, acc, _validate=False)

    def multiply(self, u, v) -> np.ndarray:
        rv = self.right_mult_operator(v)
        return _mul_blas(self.field, np.asarray(u, dtype=self.field.dtype)[None, :], rv.A)[0]


def _poly_xgcd(a: Poly, b: Poly):
    """(g, s, t) with s*a + t*b = g (g monic or zero)."""
    f = a.field
    r0, r1 = a, b
    s0, s1 = Poly.one(f), Poly.zero(f)
    t0, t1 = Poly.zero(f), Poly.one(f)
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if not r0.is_zero():
        lead = r0.coeffs[-1]
        inv = f.inv(lead)
        r0, s0, t0 = r0.scale(inv), s0.scale(inv), t0.scale(inv)
    return r0, s0, t0


@dataclass
class BlockData:
    group: GroupHandle
    field: FieldSpec
    class_reps: list
    class_sizes: list
    idempotents: list          # coordinate vectors in the class-sum basis
    principal_index: int
    algebra: _ClassAlgebra

    @property
    def nblocks(self):
        return len(self.idempotents)


def central_idempotents(g: GroupHandle, field: FieldSpec, cap=None) -> BlockData:
    """Central primitive idempotents of kG over the given field."""
    cap = cap if cap is not None else CONFIG.enumeration_cap
    if g.order() > cap:
        raise CapExceeded(f"group order {g.order()} exceeds the block cap {cap}")
    Z = _ClassAlgebra(g, field)
    f = field
    c = Z.nclasses

    def subalgebra_basis(e):
        rows = np.stack([Z.multiply(e, _unit_vec(f, c, i)) for i in range(c)])
        ech = echelonize(Mat(f, rows, _validate=False))
        return Mat(f, ech.rref.A[:ech.rank], _validate=False)

    def split(e):
        """Return a list of >= 2 orthogonal idempotents summing to e, or None."""
        B = subalgebra_basis(e)
        ech = echelonize(B)
        d = B.nrows
        for ui in range(d):
            u = B.A[ui]
            op_rows = np.stack([Z.multiply(B.A[j], u) for j in range(d)])
            coords = solve_left(ech, op_rows, f)
            if coords is None:
                raise AssertionError("subalgebra is not multiplicatively closed")
            op = Mat(f, coords, _validate=False)
            mp = min_poly(op)
            facs = factor_poly(mp)
            if len(facs) < 2:
                continue
            parts = []
            for p_m, a_m in facs:
                f_m = p_m
                for _ in range(a_m - 1):
                    f_m = f_m * p_m
                g_m = mp // f_m
                gcd, s, _t = _poly_xgcd(g_m, f_m)
                if gcd.degree != 0:
                    raise AssertionError("primary factors are not coprime")
                h = (s * g_m) % mp
                parts.append(_eval_poly_in_algebra(Z, h, u, e))
            total = np.zeros(c, dtype=f.dtype)
            for part in parts:
                total = f.vec_add(total, part)
            if not np.array_equal(total, np.asarray(e, dtype=f.dtype)):
                raise AssertionError("primary idempotents do not sum to e")
            return parts
        return None

    work = [Z.unit.copy()]
    final = []
    while work:
        e = work.pop(0)
        parts = split(e)
        if parts is None:
            final.append(e)
        else:
            work.extend(parts)

    _validate_idempotents(Z, final)
    principal = _principal_index(Z, final)
    final = sorted(final, key=lambda v: v.tobytes())
    # keep the principal block first for readability
    principal = _principal_index(Z, final)
    return BlockData(group=g, field=field, class_reps=Z.reps, class_sizes=Z.sizes,
                     idempotents=[np.asarray(e, dtype=f.dtype) for e in final],
                     principal_index=principal, algebra=Z)


def _unit_vec(field, c, i):
    v = np.zeros(c, dtype=field.dtype)
    v[i] = 1
    return v


def _eval_poly_in_algebra(Z: _ClassAlgebra, poly: Poly, u, e):
    """poly(u) * e inside the subalgebra with unit e."""
    f = Z.field
    acc = np.zeros(Z.nclasses, dtype=f.dtype)
    for coeff in reversed(poly.coeffs):
        acc = Z.multiply(acc, u)
        if coeff:
            acc = f.vec_add(acc, f.vec_mul(np.asarray(coeff, dtype=f.dtype),
                                           np.asarray(e, dtype=f.dtype)))
    return acc


def _validate_idempotents(Z: _ClassAlgebra, idems):
    f = Z.field
    total = np.zeros(Z.nclasses, dtype=f.dtype)
    for i, e in enumerate(idems):
        if not np.array_equal(Z.multiply(e, e), np.asarray(e, dtype=f.dtype)):
            raise AssertionError("idempotent fails e*e = e")
        total = f.vec_add(total, np.asarray(e, dtype=f.dtype))
        for j, other in enumerate(idems):
            if i != j and Z.multiply(e, other).any():
                raise AssertionError("idempotents are not orthogonal")
    if not np.array_equal(total, Z.unit):
        raise AssertionError("idempotents do not sum to 1")


def _principal_index(Z: _ClassAlgebra, idems) -> int:
    """The idempotent acting as identity on the trivial module."""
    f = Z.field
    hits = []
    for i, e in enumerate(idems):
        val = 0
        for k in np.nonzero(e)[0]:
            val = f.add(val, f.mul(int(e[k]), Z.sizes[int(k)] % f.p))
        if val == 1:
            hits.append(i)
    if len(hits) != 1:
        raise AssertionError("principal block detection failed")
    return hits[0]


# ---------------------------------------------------------------------------
# block membership
# ---------------------------------------------------------------------------

def _class_sums_on_module(m: Rep, bd: BlockData):
    """Sum of m(g) over each conjugacy class, by BFS over the Cayley graph."""
    g = bd.group
    f = m.field
    n = m.dim
    if g.order() * n * n > 3 * 10**8:
        raise CapExceeded("class sums on this module would exceed the memory cap")
    elements = g.elements()
    # rebuild BFS provenance deterministically (child = parent * generator)
    seen = {elements[0]._key: 0}
    order = [elements[0]]
    prov = [None]
    qi = 0
    while qi < len(order):
        cur = order[qi]
        ci = seen[cur._key]
        for gi, gen in enumerate(g.generators):
            nxt = cur * gen
            if nxt._key not in seen:
                seen[nxt._key] = len(order)
                order.append(nxt)
                prov.append((ci, gi))
        qi += 1
    mats = [None] * len(order)
    mats[0] = np.eye(n, dtype=f.dtype)
    acc_shape = (bd.algebra.nclasses, n, n)
    if f.e == 1:
        acc = np.zeros(acc_shape, dtype=np.int64)
    else:
        acc = np.zeros(acc_shape + (f.e,), dtype=np.int64)
    for i, elem in enumerate(order):
        if i > 0:
            pi, gi = prov[i]
            mats[i] = _mul_blas(f, mats[pi], m.gen_mats[gi].A)
        cls = bd.algebra.class_of[elem._key]
        if f.e == 1:
            acc[cls] += mats[i]
        else:
            acc[cls] += f._digits[mats[i].astype(np.int64)]
    if f.e == 1:
        sums = (acc % f.p).astype(f.dtype)
    else:
        sums = ((acc % f.p) @ f._powers).astype(f.dtype)
    return sums


def block_of(m: Rep, bd: BlockData) -> int:
    """Index of the unique central idempotent acting as the identity on m."""
    if m.field != bd.field:
        raise InputError("module and block data live over different fields")
    sums = _class_sums_on_module(m, bd)
    f = m.field
    n = m.dim
    ident = np.eye(n, dtype=f.dtype)
    acting = []
    for i, e in enumerate(bd.idempotents):
        a = np.zeros((n, n), dtype=f.dtype)
        for k in np.nonzero(e)[0]:
            a = f.vec_add(a, f.vec_mul(np.asarray(e[k], dtype=f.dtype), sums[int(k)]))
        if np.array_equal(a, ident):
            return i
        if a.any():
            acting.append(i)
    raise InputError(
        "no central idempotent acts as identity: the module is split across "
        f"blocks {acting}; decompose it first")


# ---------------------------------------------------------------------------
# PIMs and the Cartan matrix
# ---------------------------------------------------------------------------

def pims(bd: BlockData, block_index: int, source: Rep, simples,
         prng: Prng | None = None, source_is_projective: bool = False):
    """PIMs of a block from a certified-projective source module.

    The source must be projective by construction (induced from a p'-subgroup,
    e.g. the regular module); the flag makes the caller say so explicitly.
    Returns the PIMs ordered like `simples`; errors if one is missing.
    """
    if not source_is_projective:
        raise InputError("pims needs a source that is projective by construction "
                         "(pass source_is_projective=True for e.g. the regular module)")
    prng = prng or Prng(0)
    dec = indec_decompose(source, prng)
    found = {}
    for s in dec.summands:
        if block_of(s.rep, bd) != block_index:
            continue
        head = radical_series_layers(s.rep, simples)[0]
        if len(head) != 1:
            raise AssertionError("projective summand has a non-simple top")
        label = head[0]
        found.setdefault(label, s.rep)
    labels = [s.label for s in simples]
    missing = [lab for lab in labels if lab not in found]
    if missing:
        raise InputError(f"source does not expose the PIMs of simples: {missing}")
    return [found[lab] for lab in labels]


def cartan_matrix(pim_list, simples):
    """Integer matrix with entry (S, T) = multiplicity of S in P(T), computed
    as dim Hom(P(S), P(T)); rows and columns follow the simples order."""
    n = len(pim_list)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            out[i][j] = hom_space(pim_list[i], pim_list[j]).dim
    return out
