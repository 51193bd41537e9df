"""Matrix representations of permutation groups and the standard functors.

Modules are row-vector spaces: an element v maps to v @ M(g), a homomorphism
phi: A -> B is a (dim A x dim B) matrix with M_A(g) @ phi = phi @ M_B(g) for
every generator, and composition is matrix product in diagram order.

hom_space solves the intertwining equations through a spinning algorithm that
first finds a small generating set of the source module, so the unknowns are
the images of those generators rather than a full dim*dim matrix.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .errors import InputError
from .ffield import FieldSpec, Mat, RowStepper, echelonize, mat_inv, mat_mul, nullspace
from .ffield import _mul_blas  # internal exact kernel for engine loops
from .perm import GroupHandle, Perm, Subgroup, TransversalData, right_transversal

__all__ = [
    "Rep",
    "HomBasis",
    "perm_module",
    "regular_module",
    "trivial_rep",
    "natural_action",
    "subsets_action",
    "restrict",
    "dual",
    "tensor",
    "direct_sum",
    "induce",
    "hom_space",
    "sub_rep",
    "quotient_rep",
    "hom_to_induced",
    "hom_from_induced",
    "restricted_hom_of_induced_map",
    "restricted_hom_of_map_to_induced",
    "transversal_matrices",
]


class Rep:
    """One invertible matrix per group generator; the package's kG-module."""

    __slots__ = ("group", "field", "dim", "gen_mats", "label", "_inv_mats", "_spin_cache")

    def __init__(self, group: GroupHandle | None, field: FieldSpec, gen_mats, label=None,
                 validate=True, dim=None):
        self.group = group
        self.field = field
        self.gen_mats = list(gen_mats)
        if group is not None and len(self.gen_mats) != len(group.generators):
            raise InputError("need exactly one matrix per group generator")
        dims = {m.nrows for m in self.gen_mats} | {m.ncols for m in self.gen_mats}
        if len(dims) > 1:
            raise InputError("generator matrices must be square of equal size")
        if dims:
            self.dim = dims.pop()
            if dim is not None and dim != self.dim:
                raise InputError("explicit dim contradicts the generator matrices")
        else:
            if dim is None:
                raise InputError("a representation without generators needs an explicit dim")
            self.dim = dim
        self.label = label
        self._inv_mats = None
        self._spin_cache = None
        if validate and self.dim and self.dim <= 512:
            for m in self.gen_mats:
                mat_inv(m)  # raises DomainError when singular

    @classmethod
    def from_action(cls, field: FieldSpec, mats, label=None) -> "Rep":
        """Module over an abstract matrix algebra (no group attached).

        Group functors (dual, restrict, induce) are unavailable; the chop and
        structure engines only need the action matrices and accept these.
        """
        return cls(None, field, mats, label=label, validate=False)

    @property
    def inv_mats(self):
        if self._inv_mats is None:
            self._inv_mats = [mat_inv(m) for m in self.gen_mats]
        return self._inv_mats

    def word_matrix(self, word) -> Mat:
        out = Mat.identity(self.field, self.dim)
        for letter in word:
            m = self.gen_mats[letter] if letter >= 0 else self.inv_mats[-letter - 1]
            out = mat_mul(out, m)
        return out

    def element_matrix(self, x: Perm) -> Mat:
        return self.word_matrix(self.group.factor_word(x))

    def relabel(self, label):
        return Rep(self.group, self.field, self.gen_mats, label=label, validate=False)

    def conjugate(self, basis: Mat) -> "Rep":
        """Equivalent representation in the new basis: M -> B M B^-1."""
        binv = mat_inv(basis)
        mats = [mat_mul(mat_mul(basis, m), binv) for m in self.gen_mats]
        return Rep(self.group, self.field, mats, label=self.label, validate=False)

    def __repr__(self):
        tag = f" {self.label!r}" if self.label else ""
        return f"Rep(dim={self.dim}, {self.field}{tag})"


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------

def perm_module(group: GroupHandle, point_perms, field: FieldSpec, label=None) -> Rep:
    """Permutation module from one point permutation per group generator."""
    if len(point_perms) != len(group.generators):
        raise InputError("need one action permutation per generator")
    n = point_perms[0].degree if point_perms else 0
    mats = []
    for p in point_perms:
        if p.degree != n:
            raise InputError("action permutations have mixed degrees")
        m = np.zeros((n, n), dtype=field.dtype)
        m[np.arange(n), p.images] = 1
        mats.append(Mat(field, m, _validate=False))
    return Rep(group, field, mats, label=label, validate=False)


def natural_action(group: GroupHandle):
    return list(group.generators)


def subsets_action(group: GroupHandle, k: int):
    """Induced permutations on sorted k-subsets of the natural domain."""
    points = list(combinations(range(group.degree), k))
    index = {s: i for i, s in enumerate(points)}
    out = []
    for g in group.generators:
        images = [index[tuple(sorted(g.act(x) for x in s))] for s in points]
        out.append(Perm(images, _validate=False))
    return out


def regular_module(group: GroupHandle, field: FieldSpec, label=None) -> Rep:
    """Right-regular permutation module on the deterministic element list."""
    elts = group.elements()
    index = {e._key: i for i, e in enumerate(elts)}
    perms = []
    for g in group.generators:
        images = [index[(e * g)._key] for e in elts]
        perms.append(Perm(images, _validate=False))
    return perm_module(group, perms, field, label=label or "regular")


def trivial_rep(group: GroupHandle, field: FieldSpec, label="1") -> Rep:
    mats = [Mat.identity(field, 1) for _ in group.generators]
    return Rep(group, field, mats, label=label, validate=False, dim=1)


# ---------------------------------------------------------------------------
# functors
# ---------------------------------------------------------------------------

def restrict(r: Rep, h: Subgroup) -> Rep:
    """Restriction along h <= r.group; subgroup generators are factorized
    through the stabilizer chain when given as explicit permutations."""
    if h.parent is not r.group:
        same = (r.group is not None and h.parent.degree == r.group.degree
                and len(h.parent.generators) == len(r.group.generators)
                and all(x == y for x, y in zip(h.parent.generators, r.group.generators)))
        if not same:
            raise InputError("subgroup does not live in the representation's group")
    words = h.action_words()
    mats = [r.word_matrix(w) for w in words]
    return Rep(h.group, r.field, mats, label=f"{r.label}|{h.name}" if r.label else None,
               validate=False, dim=r.dim)


def dual(r: Rep) -> Rep:
    mats = [m.transpose() for m in r.inv_mats]
    return Rep(r.group, r.field, mats,
               label=f"{r.label}*" if r.label else None, validate=False, dim=r.dim)


def _kron(field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if field.e == 1:
        out = (a.astype(np.int64)[:, None, :, None] * b.astype(np.int64)[None, :, None, :]) % field.p
    else:
        out = field.vec_mul(a[:, None, :, None], b[None, :, None, :])
    m, n = a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]
    return out.reshape(m, n).astype(field.dtype)


def tensor(a: Rep, b: Rep) -> Rep:
    if not same_group(a, b) or a.field != b.field:
        raise InputError("tensor factors must share group and field")
    mats = [Mat(a.field, _kron(a.field, x.A, y.A), _validate=False)
            for x, y in zip(a.gen_mats, b.gen_mats)]
    label = f"{a.label}(x){b.label}" if a.label and b.label else None
    return Rep(a.group, a.field, mats, label=label, validate=False, dim=a.dim * b.dim)


def direct_sum(a: Rep, b: Rep) -> Rep:
    if not same_group(a, b) or a.field != b.field:
        raise InputError("direct summands must share group and field")
    mats = []
    for x, y in zip(a.gen_mats, b.gen_mats):
        m = np.zeros((a.dim + b.dim, a.dim + b.dim), dtype=a.field.dtype)
        m[:a.dim, :a.dim] = x.A
        m[a.dim:, a.dim:] = y.A
        mats.append(Mat(a.field, m, _validate=False))
    label = f"{a.label}+{b.label}" if a.label and b.label else None
    return Rep(a.group, a.field, mats, label=label, validate=False, dim=a.dim + b.dim)


def transversal_matrices(r: Rep, trans: TransversalData):
    """r(t) and r(t)^-1 for every transversal rep, via the coset BFS tree."""
    field = r.field
    n = r.dim
    fwd = [None] * len(trans)
    bwd = [None] * len(trans)
    fwd[0] = np.eye(n, dtype=field.dtype)
    bwd[0] = np.eye(n, dtype=field.dtype)
    for i in range(1, len(trans)):
        pi, gi = trans.parents[i]
        fwd[i] = _mul_blas(field, fwd[pi], r.gen_mats[gi].A)
        bwd[i] = _mul_blas(field, r.inv_mats[gi].A, bwd[pi])
    return fwd, bwd


def induce(v: Rep, g: GroupHandle, h: Subgroup, label=None) -> Rep:
    """Induced module along h <= g with the deterministic right transversal.

    For generator x and coset rep t_i, block (i, j) holds v(t_i x t_j^-1)
    where j indexes the coset of t_i x; all other blocks in row i are zero.
    """
    if h.group.order() != v.group.order() or h.group.degree != v.group.degree:
        raise InputError("v must be a representation of the subgroup")
    trans = right_transversal(g, h)
    r = len(trans)
    d = v.dim
    field = v.field
    mats = []
    for x in g.generators:
        big = np.zeros((r * d, r * d), dtype=field.dtype)
        for i in range(r):
            tx = trans[i] * x
            j = trans.coset_index(tx)
            hh = tx * trans[j].inverse()
            block = v.element_matrix(hh)
            big[i * d:(i + 1) * d, j * d:(j + 1) * d] = block.A
        mats.append(Mat(field, big, _validate=False))
    return Rep(g, field, mats, label=label or (f"{v.label}^up" if v.label else None),
               validate=False)


# ---------------------------------------------------------------------------
# homomorphism spaces
# ---------------------------------------------------------------------------

def same_group(a: Rep, b: Rep) -> bool:
    """Structural equality of the acting generators (not object identity)."""
    if a.group is b.group:
        return True
    if a.group is None or b.group is None:
        return a.group is b.group
    return (a.group.degree == b.group.degree
            and len(a.group.generators) == len(b.group.generators)
            and all(x == y for x, y in zip(a.group.generators, b.group.generators)))


class HomBasis:
    """Basis of the intertwining maps source -> target."""

    __slots__ = ("source", "target", "basis")

    def __init__(self, source: Rep, target: Rep, basis):
        self.source = source
        self.target = target
        self.basis = list(basis)

    @property
    def dim(self):
        return len(self.basis)

    def combo(self, coeffs) -> Mat:
        field = self.source.field
        out = np.zeros((self.source.dim, self.target.dim), dtype=field.dtype)
        for c, m in zip(coeffs, self.basis):
            if c:
                out = field.vec_add(out, field.vec_mul(np.asarray(c, dtype=field.dtype), m.A))
        return Mat(field, out, _validate=False)

    def __iter__(self):
        return iter(self.basis)

    def __repr__(self):
        return f"HomBasis(dim={self.dim}, {self.source.dim}->{self.target.dim})"


class _SpinLog:
    """Spin closure of seed vectors with provenance and dependence records.

    basis_rows[i] is either a seed ('seed', s) or basis_rows[p] @ M_g
    ('mul', p, g).  Every reduction to zero is recorded as a dependence
    (provenance, coords) where coords expresses the offered row in the basis.
    The echelonized shadow is kept in RREF so reduction is one gather plus
    one exact matrix product.
    """

    def __init__(self, field, dim):
        self.field = field
        self.dim = dim
        self.rows = []          # raw basis rows, discovery order
        self.prov = []
        self.deps = []
        self._ech_rows = np.zeros((0, dim), dtype=field.dtype)
        self._ech_coords = np.zeros((0, dim), dtype=field.dtype)  # width grows with rows
        self._pivots: list[int] = []

    def _reduce(self, v):
        f = self.field
        k = len(self.rows)
        if not self._pivots:
            return v.astype(f.dtype).copy(), np.zeros(k, dtype=f.dtype)
        c = v.astype(f.dtype)[self._pivots]
        if not c.any():
            return v.astype(f.dtype).copy(), np.zeros(k, dtype=f.dtype)
        red = f.vec_sub(v.astype(f.dtype), _mul_blas(f, c[None, :], self._ech_rows)[0])
        coords = _mul_blas(f, c[None, :], self._ech_coords[:, :k])[0]
        return red, coords

    def offer(self, v, provenance):
        """Add v unless dependent; returns True when the basis grew."""
        f = self.field
        red, coords = self._reduce(v)
        nz = np.nonzero(red)[0]
        if len(nz) == 0:
            self.deps.append((provenance, coords))
            return False
        k = len(self.rows)
        self.rows.append(np.array(v, dtype=f.dtype))
        self.prov.append(provenance)
        piv = int(nz[0])
        inv = np.asarray(f.inv(int(red[piv])), dtype=f.dtype)
        red = f.vec_mul(inv, red)
        new_coords = np.zeros(max(self._ech_coords.shape[1], k + 1), dtype=f.dtype)
        new_coords[:len(coords)] = f.vec_neg(coords)
        new_coords[k] = 1
        new_coords = f.vec_mul(np.asarray(inv, dtype=f.dtype), new_coords)
        if self._ech_coords.shape[1] < len(new_coords):
            pad = np.zeros((len(self._ech_rows), len(new_coords)), dtype=f.dtype)
            pad[:, :self._ech_coords.shape[1]] = self._ech_coords
            self._ech_coords = pad
        # keep the shadow in RREF: clear the new pivot column above
        col = self._ech_rows[:, piv].copy()
        hit = np.nonzero(col)[0]
        if len(hit):
            self._ech_rows[hit] = f.vec_sub(self._ech_rows[hit],
                                            f.vec_mul(col[hit, None], red[None, :]))
            self._ech_coords[hit] = f.vec_sub(self._ech_coords[hit],
                                              f.vec_mul(col[hit, None], new_coords[None, :]))
        self._ech_rows = np.vstack([self._ech_rows, red[None, :]])
        self._ech_coords = np.vstack([self._ech_coords, new_coords[None, :]])
        self._pivots.append(piv)
        return True

    @property
    def spanned(self):
        return len(self.rows)


def _generating_spin(r: Rep):
    """Greedy generating seeds and the full spin log of the module."""
    field = r.field
    n = r.dim
    log = _SpinLog(field, n)
    steppers = [RowStepper(field, m.A) for m in r.gen_mats]
    seeds = []
    next_seed = 0
    while log.spanned < n:
        # find a standard basis vector outside the current span
        while True:
            if next_seed >= n:
                raise AssertionError("spin failed to span the module")
            v = np.zeros(n, dtype=field.dtype)
            v[next_seed] = 1
            next_seed += 1
            if log.offer(v, ("seed", len(seeds))):
                seeds.append(v)
                break
        # close under the action (process queue in discovery order)
        qi = len(log.rows) - 1
        while qi < len(log.rows):
            base = log.rows[qi]
            for gi, st in enumerate(steppers):
                log.offer(st.step(base), ("mul", qi, gi))
            qi += 1
    return seeds, log


def hom_space(a: Rep, b: Rep) -> HomBasis:
    """Full basis of Hom(a, b) over the common group algebra."""
    if not same_group(a, b):
        raise InputError("hom_space needs representations of the same group")
    if a.field != b.field:
        raise InputError("hom_space needs a common field")
    field = a.field
    n, m = a.dim, b.dim
    if n == 0 or m == 0:
        return HomBasis(a, b, [])
    if not a.gen_mats and not b.gen_mats:
        # trivial group: every linear map intertwines
        basis = []
        for i in range(n):
            for j in range(m):
                arr = np.zeros((n, m), dtype=field.dtype)
                arr[i, j] = 1
                basis.append(Mat(field, arr, _validate=False))
        return HomBasis(a, b, basis)
    if a._spin_cache is None:
        a._spin_cache = _generating_spin(a)
    seeds, log = a._spin_cache
    s = len(seeds)
    b_arrays = [g.A for g in b.gen_mats]

    # U[i]: (s*m, m) with image_of(rows[i]) = z @ U[i] for the unknown z.
    U = [None] * len(log.rows)
    for i, prov in enumerate(log.prov):
        if prov[0] == "seed":
            block = np.zeros((s * m, m), dtype=field.dtype)
            t = prov[1]
            block[t * m:(t + 1) * m] = np.eye(m, dtype=field.dtype)
            U[i] = block
        else:
            _, parent, gi = prov
            U[i] = _mul_blas(field, U[parent], b_arrays[gi])

    eq_blocks = []
    for prov, coords in log.deps:
        if prov[0] == "seed":
            continue  # a dependent seed candidate never entered the basis
        _, parent, gi = prov
        E = _mul_blas(field, U[parent], b_arrays[gi])
        for j in np.nonzero(coords)[0]:
            c = np.asarray(coords[j], dtype=field.dtype)
            E = field.vec_sub(E, field.vec_mul(c, U[int(j)]))
        if E.any():
            eq_blocks.append(E.T)  # each column is one scalar equation
    if eq_blocks:
        eqmat = Mat(field, np.concatenate(eq_blocks, axis=0), _validate=False)
        sols = nullspace(eqmat)
        zs = sols.A
    else:
        zs = np.eye(s * m, dtype=field.dtype)

    if zs.shape[0] == 0:
        return HomBasis(a, b, [])
    C = Mat(field, np.array(log.rows), _validate=False)
    Cinv = mat_inv(C)
    basis = []
    for z in zs:
        Y = np.array([_mul_blas(field, z[None, :], U[i])[0] for i in range(len(log.rows))])
        F = _mul_blas(field, Cinv.A, Y)
        basis.append(Mat(field, F, _validate=False))
    return HomBasis(a, b, basis)


def hom_dim(a: Rep, b: Rep) -> int:
    return hom_space(a, b).dim


def intertwines(f: Mat, a: Rep, b: Rep) -> bool:
    return all(mat_mul(ga, f) == mat_mul(f, gb)
               for ga, gb in zip(a.gen_mats, b.gen_mats))


# ---------------------------------------------------------------------------
# sub / quotient structure
# ---------------------------------------------------------------------------

def sub_rep(r: Rep, basis_rref: Mat) -> Rep:
    """Representation on an invariant row space given by RREF basis rows."""
    field = r.field
    ech = echelonize(basis_rref)
    if ech.rank != basis_rref.nrows:
        raise InputError("submodule basis rows are dependent")
    S = ech.rref.A
    piv = list(ech.pivots)
    mats = []
    for m in r.gen_mats:
        SM = _mul_blas(field, S, m.A)
        coords = SM[:, piv]
        if not np.array_equal(_mul_blas(field, coords, S), SM):
            raise InputError("row space is not invariant under the action")
        mats.append(Mat(field, coords, _validate=False))
    return Rep(r.group, field, mats, validate=False, dim=ech.rank)


def quotient_rep(r: Rep, basis_rref: Mat) -> Rep:
    """Representation on the quotient by an invariant row space (RREF rows)."""
    field = r.field
    ech = echelonize(basis_rref)
    S = ech.rref.A
    piv = list(ech.pivots)
    others = [j for j in range(r.dim) if j not in set(piv)]
    mats = []
    for m in r.gen_mats:
        TM = m.A[others, :]
        # reduce away the S-components, then read coordinates on the complement
        coeff = TM[:, piv]
        red = field.vec_sub(TM, _mul_blas(field, coeff, S))
        mats.append(Mat(field, red[:, others], _validate=False))
    return Rep(r.group, field, mats, validate=False, dim=len(others))


# ---------------------------------------------------------------------------
# explicit adjunction transport
# ---------------------------------------------------------------------------

def hom_to_induced(x: Rep, v: Rep, g: GroupHandle, h: Subgroup, phi: Mat,
                   trans=None, tmats=None) -> Mat:
    """Transport phi in Hom_h(x|h, v) to Hom_g(x, v^up): block j is x(t_j)^-1 @ phi."""
    trans = trans if trans is not None else right_transversal(g, h)
    if tmats is None:
        _, bwd = transversal_matrices(x, trans)
    else:
        _, bwd = tmats
    field = x.field
    blocks = [_mul_blas(field, bw, phi.A) for bw in bwd]
    return Mat(field, np.concatenate(blocks, axis=1), _validate=False)


def hom_from_induced(x: Rep, v: Rep, g: GroupHandle, h: Subgroup, psi: Mat,
                     trans=None, tmats=None) -> Mat:
    """Transport psi in Hom_h(v, x|h) to Hom_g(v^up, x): block j is psi @ x(t_j)."""
    trans = trans if trans is not None else right_transversal(g, h)
    if tmats is None:
        fwd, _ = transversal_matrices(x, trans)
    else:
        fwd, _ = tmats
    field = x.field
    blocks = [_mul_blas(field, psi.A, fw) for fw in fwd]
    return Mat(field, np.concatenate(blocks, axis=0), _validate=False)


def restricted_hom_of_map_to_induced(big: Mat, v_dim: int) -> Mat:
    """Inverse transport Hom_g(x, v^up) -> Hom_h(x|h, v): read off block 0."""
    return Mat(big.field, big.A[:, :v_dim], _validate=False)


def restricted_hom_of_induced_map(big: Mat, v_dim: int) -> Mat:
    """Inverse transport Hom_g(v^up, x) -> Hom_h(v, x|h): read off block 0."""
    return Mat(big.field, big.A[:v_dim, :], _validate=False)
