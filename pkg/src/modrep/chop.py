"""Composition factors and irreducibility.

The chop loop draws elements of the enveloping algebra from a seeded stream,
factors their minimal polynomials, and splits along small kernels; Norton's
criterion certifies irreducibility.  A certificate is only issued in the
configurations where the criterion is sound:

* the kernel of z = p(theta) has dimension deg p (the preferred Holt-Rees
  identifying setup; the kernel is then irreducible under theta, so a single
  kernel vector and a single transposed kernel vector decide), or
* every line of a small kernel is spun, plus one transposed vector.

Failure to certify within the iteration cap raises, never guesses.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dcfield

import numpy as np

from .config import CONFIG
from .errors import ComputationFailure, InputError
from .ffield import Mat, Poly, RowStepper, echelonize, factor_poly, mat_mul, min_poly, nullspace
from .ffield import _SpanTracker, _mul_blas
from .prng import Prng
from .rep import Rep, hom_space, quotient_rep, sub_rep

__all__ = [
    "ChopResult",
    "IrreducibilityCertificate",
    "spin",
    "random_algebra_element",
    "chop",
    "norton_irreducible",
    "verify_certificate",
    "fingerprint",
    "standard_basis",
    "iso_irr",
]

_NORTON_LINE_CAP = 400


# ---------------------------------------------------------------------------
# spinning
# ---------------------------------------------------------------------------

def spin(r: Rep, seeds) -> Mat:
    """Closure of seed vectors under the action; rows are the RREF basis.

    The reduced echelon form is canonical for the subspace, which keeps all
    downstream submodule bases byte-stable.
    """
    f = r.field
    n = r.dim
    tracker = _SpanTracker(f, n)
    queue = []
    for s in seeds:
        s = np.asarray(s, dtype=f.dtype)
        if tracker.add(s):
            queue.append(np.array(s, dtype=f.dtype))
    steppers = [RowStepper(f, m.A) for m in r.gen_mats]
    qi = 0
    while qi < len(queue) and tracker.dim < n:
        base = queue[qi]
        qi += 1
        for st in steppers:
            img = st.step(base)
            if tracker.add(img):
                queue.append(img)
    if tracker.dim == 0:
        return Mat.zeros(f, 0, n)
    order = np.argsort(tracker.pivots)
    arr = tracker.rows[order]
    return Mat(f, arr, _validate=False)


def spin_transposed(r: Rep, seeds) -> Mat:
    rt = Rep.from_action(r.field, [m.transpose() for m in r.gen_mats])
    return spin(rt, seeds)


# ---------------------------------------------------------------------------
# random algebra elements
# ---------------------------------------------------------------------------

def random_algebra_element(r: Rep, prng: Prng, word_length: int) -> Mat:
    """Deterministic-from-seed element of the enveloping algebra.

    Sums of one to three products of up to `word_length` generators with
    nonzero scalar weights; word_length 0 yields the identity (documented
    convention).
    """
    f = r.field
    n = r.dim
    ident = Mat.identity(f, n)
    if word_length == 0 or not r.gen_mats:
        return ident
    k = len(r.gen_mats)
    acc = Mat.zeros(f, n, n)
    terms = 1 + prng.below(3)
    for _ in range(terms):
        length = 1 + prng.below(word_length)
        prod = ident
        for _ in range(length):
            prod = mat_mul(prod, r.gen_mats[prng.below(k)])
        coeff = 1 + prng.below(f.q - 1)
        acc = acc + prod.scale(coeff)
    if prng.below(2):
        acc = acc + ident.scale(1 + prng.below(f.q - 1))
    return acc


# ---------------------------------------------------------------------------
# Norton's criterion
# ---------------------------------------------------------------------------

@dataclass
class IrreducibilityCertificate:
    witness: Mat              # algebra element z with nonzero nullity
    poly: Poly | None         # irreducible factor p with z = p(theta), when known
    vector: np.ndarray        # kernel vector certified to spin to the full space
    dual_vector: np.ndarray   # transposed-kernel vector spinning the dual
    nullity: int
    mode: str                 # "identifying" (nullity == deg p or 1) or "all-lines"
    extra_vectors: list = dcfield(default_factory=list)


def _kernel_lines(field, kernel_rows: np.ndarray):
    """One representative per 1-dimensional subspace of the row space."""
    d = kernel_rows.shape[0]
    q = field.q
    if d == 1:
        yield kernel_rows[0]
        return
    count = (q ** d - 1) // (q - 1)
    if count > _NORTON_LINE_CAP:
        raise ComputationFailure(
            f"kernel has {count} lines, above the Norton enumeration cap")
    # canonical reps: last nonzero coordinate 1, enumerate lexicographically
    for lead in range(d):
        tail = d - lead - 1
        for code in range(q ** lead):
            coeffs = np.zeros(d, dtype=field.dtype)
            v = code
            for i in range(lead):
                coeffs[i] = v % q
                v //= q
            coeffs[lead] = 1
            vec = np.zeros(kernel_rows.shape[1], dtype=field.dtype)
            for i in range(lead + 1):
                c = coeffs[i]
                if c:
                    vec = field.vec_add(vec, field.vec_mul(np.asarray(c, dtype=field.dtype),
                                                           kernel_rows[i]))
            yield vec
        if lead == 0 and tail == d - 1:
            continue


def norton_irreducible(r: Rep, witness: Mat, poly: Poly | None = None,
                       all_lines: bool = False):
    """(verdict, certificate_or_submodule) for a witness with nonzero nullity.

    verdict True comes with a re-checkable certificate; False comes with a
    proper submodule basis.

    Row-vector convention: the module kernel of z is {v : v z = 0}, i.e. the
    nullspace of z^T; the transposed module's kernel is the nullspace of z.
    If a proper submodule W avoids the module kernel, z is bijective on W,
    so W lies inside the image of z and every transposed-kernel vector
    annihilates W; spinning it under the transposed action then stays proper.
    """
    f = r.field
    ker = nullspace(witness.transpose())
    if ker.nrows == 0:
        raise InputError("Norton witness has zero nullity")
    sound_single = ker.nrows == 1 or (poly is not None and ker.nrows == poly.degree)
    vectors = [ker.A[0]] if (sound_single and not all_lines) else list(_kernel_lines(f, ker.A))
    spun = []
    for v in vectors:
        sub = spin(r, [v])
        if sub.nrows < r.dim:
            return False, sub
        spun.append(v)
    kert = nullspace(witness)
    w = kert.A[0]
    subt = spin_transposed(r, [w])
    if subt.nrows < r.dim:
        # the perp of a transposed-invariant subspace is a proper submodule
        perp = nullspace(subt)
        return False, perp
    cert = IrreducibilityCertificate(
        witness=witness, poly=poly, vector=spun[0], dual_vector=w,
        nullity=ker.nrows,
        mode="identifying" if sound_single else "all-lines",
        extra_vectors=spun[1:])
    return True, cert


def verify_certificate(r: Rep, cert: IrreducibilityCertificate) -> bool:
    """Independent checker: spin both designated vectors back to full rank."""
    ker = nullspace(cert.witness.transpose())
    if ker.nrows != cert.nullity or cert.nullity == 0:
        return False
    if cert.mode == "identifying":
        if cert.poly is not None and cert.nullity not in (1, cert.poly.degree):
            return False
    vecs = [cert.vector] + list(cert.extra_vectors)
    for v in vecs:
        if spin(r, [v]).nrows != r.dim:
            return False
    return spin_transposed(r, [cert.dual_vector]).nrows == r.dim


# ---------------------------------------------------------------------------
# chop
# ---------------------------------------------------------------------------

@dataclass
class ChopFactor:
    rep: Rep
    multiplicity: int
    certificate: IrreducibilityCertificate | None
    is_splitting: bool


@dataclass
class ChopResult:
    factors: list           # list[ChopFactor]
    dim: int

    def multiset(self, key=None):
        """Multiplicity dict keyed by label (or a custom key function)."""
        out = {}
        for fac in self.factors:
            k = key(fac.rep) if key else (fac.rep.label or f"dim{fac.rep.dim}")
            out[k] = out.get(k, 0) + fac.multiplicity
        return out

    def dims_multiset(self):
        out = {}
        for fac in self.factors:
            out[fac.rep.dim] = out.get(fac.rep.dim, 0) + fac.multiplicity
        return out


def _split_leaves(r: Rep, prng: Prng, depth=0):
    """Recursive chop worker: list of (irreducible Rep, certificate)."""
    n = r.dim
    if n == 0:
        return []
    if n == 1:
        return [(r, None)]
    word_length = 8
    stagnant = 0
    for attempt in range(CONFIG.chop_attempt_cap):
        theta = random_algebra_element(r, prng, word_length)
        mp = min_poly(theta)
        factors = factor_poly(mp)
        candidates = sorted(factors, key=lambda t: (t[0].degree, t[0].coeffs))
        for p, _mult in candidates:
            z = p.eval_mat(theta)
            ker = nullspace(z.transpose())      # module kernel {v : v z = 0}
            nullity = ker.nrows
            if nullity == 0:
                continue
            # a kernel vector either exposes a submodule or spins to everything
            sub = spin(r, [ker.A[0]])
            if sub.nrows < r.dim:
                return (_split_leaves(sub_rep(r, sub), prng, depth + 1)
                        + _split_leaves(quotient_rep(r, sub), prng, depth + 1))
            wker = nullspace(z)
            subt = spin_transposed(r, [wker.A[0]])
            if subt.nrows < r.dim:
                perp = nullspace(subt)
                return (_split_leaves(sub_rep(r, perp), prng, depth + 1)
                        + _split_leaves(quotient_rep(r, perp), prng, depth + 1))
            # both spins full: certify when Norton's criterion is sound here
            if nullity == p.degree or nullity == 1:
                verdict, data = norton_irreducible(r, z, poly=p)
                if not verdict:
                    raise AssertionError("Norton disagreed with a full spin")
                return [(r, data)]
            lines = (r.field.q ** nullity - 1) // (r.field.q - 1)
            if lines <= _NORTON_LINE_CAP:
                verdict, data = norton_irreducible(r, z, poly=p, all_lines=True)
                if verdict:
                    return [(r, data)]
                return (_split_leaves(sub_rep(r, data), prng, depth + 1)
                        + _split_leaves(quotient_rep(r, data), prng, depth + 1))
        stagnant += 1
        if stagnant >= 10 and word_length < 64:
            word_length *= 2
            stagnant = 0
    raise ComputationFailure(
        f"chop exhausted {CONFIG.chop_attempt_cap} attempts at dimension {n}")


def chop(r: Rep, prng: Prng | None = None) -> ChopResult:
    """Full composition-factor multiset with irreducibility certificates."""
    if r.dim < 1:
        raise InputError("chop needs a module of dimension >= 1")
    prng = prng or Prng(0)
    leaves = _split_leaves(r, prng)
    groups = []
    for rep_, cert in leaves:
        placed = False
        for g in groups:
            if g["rep"].dim == rep_.dim and iso_irr(g["rep"], rep_):
                g["mult"] += 1
                placed = True
                break
        if not placed:
            groups.append({"rep": rep_, "cert": cert, "mult": 1})
    groups.sort(key=lambda g: (g["rep"].dim, fingerprint(g["rep"])))
    factors = []
    for g in groups:
        end_dim = hom_space(g["rep"], g["rep"]).dim
        factors.append(ChopFactor(rep=g["rep"], multiplicity=g["mult"],
                                  certificate=g["cert"], is_splitting=end_dim == 1))
    total = sum(f.rep.dim * f.multiplicity for f in factors)
    if total != r.dim:
        raise AssertionError("composition factor dimensions do not sum up")
    return ChopResult(factors=factors, dim=r.dim)


# ---------------------------------------------------------------------------
# fingerprints, standard basis, isomorphism of irreducibles
# ---------------------------------------------------------------------------

def _public_words(r: Rep, count=6):
    """Fixed public sequence of algebra elements (identical construction for
    isomorphic representations; it only uses algebra operations on the
    generator matrices, driven by a constant seed)."""
    prng = Prng(0x5EED_F1A9)
    return [random_algebra_element(r, prng, 5) for _ in range(count)]


def fingerprint(r: Rep):
    """Ordered nullity data of irreducible factors over the public words."""
    out = []
    for theta in _public_words(r):
        mp = min_poly(theta)
        entry = []
        for p, mult in factor_poly(mp):
            z = p.eval_mat(theta)
            entry.append((p.degree, p.coeffs, mult, nullspace(z).nrows))
        out.append(tuple(entry))
    return tuple(out)


def standard_basis(r: Rep) -> Rep:
    """Canonical form of an irreducible representation.

    Finds the first public word with an irreducible min-poly factor whose
    kernel is one-dimensional, takes the kernel vector as seed, and rewrites
    the action in the breadth-first spin basis.  Isomorphic irreducibles give
    entrywise-equal matrices (the seed's scalar freedom cancels).
    """
    f = r.field
    for theta in _public_words(r, count=12):
        mp = min_poly(theta)
        for p, _ in factor_poly(mp):
            z = p.eval_mat(theta)
            ker = nullspace(z.transpose())   # module kernel: {v : v z = 0}
            if ker.nrows != 1:
                continue
            basis = _bfs_spin_basis(r, ker.A[0])
            if basis is None:
                raise InputError("standard_basis requires an irreducible input")
            return r.conjugate(Mat(f, basis, _validate=False))
    raise ComputationFailure(
        "no nullity-1 identifying word found (field may not be a splitting field)")


def _bfs_spin_basis(r: Rep, seed):
    """Breadth-first spin basis rows in a canonical discovery order, or None
    if the seed does not generate."""
    f = r.field
    n = r.dim
    tracker = _SpanTracker(f, n)
    raw = []

    def try_add(v):
        if tracker.add(v):
            raw.append(np.array(v, dtype=f.dtype))
            return True
        return False

    try_add(np.asarray(seed, dtype=f.dtype))
    steppers = [RowStepper(f, m.A) for m in r.gen_mats]
    qi = 0
    while qi < len(raw) and len(raw) < n:
        base = raw[qi]
        qi += 1
        for st in steppers:
            img = st.step(base)
            try_add(img)
            if len(raw) == n:
                break
    return np.array(raw, dtype=f.dtype) if len(raw) == n else None


def iso_irr(a: Rep, b: Rep) -> bool:
    """Isomorphism test for irreducible representations of one group."""
    if a.field != b.field:
        raise InputError("iso_irr needs a common field")
    if a.dim != b.dim:
        return False
    if a.dim == 1:
        return all(x == y for x, y in zip(a.gen_mats, b.gen_mats))
    if fingerprint(a) != fingerprint(b):
        return False
    try:
        sa = standard_basis(a)
        sb = standard_basis(b)
        return all(x == y for x, y in zip(sa.gen_mats, sb.gen_mats))
    except ComputationFailure:
        # Non-splitting field: fall back to the hom-space criterion (a nonzero
        # homomorphism between irreducibles is an isomorphism).
        return hom_space(a, b).dim > 0
