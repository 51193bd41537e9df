"""Relative projectivity, vertices, Green correspondents, trivial-source test.

Everything rests on the relative trace map: for a right transversal {t} of
H in G and a kH-endomorphism phi of a kG-module x (row-vector convention),

    Tr_H^G(phi) = sum_t  x(t)^-1 @ phi @ x(t)

is a kG-endomorphism, and x is H-projective exactly when the identity lies in
the image (Higman).  Vertex hunts factor the trace through a caller-supplied
Sylow subgroup: Tr_Q^G = Tr_P^G . Tr_Q^P, so the expensive transversal sum is
assembled once per module.  Over prime fields the sum of conjugation
operators is built as one exact float64 matrix product.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import CONFIG
from .errors import CapExceeded, InputError, SplittingFieldError
from .ffield import Mat, echelonize, solve_left
from .ffield import _mul_blas
from .perm import GroupHandle, Subgroup, right_transversal, subgroups_of_small, normalizer_small
from .prng import Prng
from .rep import (Rep, HomBasis, hom_space, restrict, transversal_matrices,
                  trivial_rep, hom_to_induced, hom_from_induced)
from .structure import algebra_radical, end_algebra, IndecCertificate, indec_decompose, iso_indec

__all__ = [
    "TraceMapData",
    "VertexReport",
    "GreenReport",
    "relative_trace_matrix",
    "higman_test",
    "vertex",
    "green_correspondent",
    "trivial_source_test",
]


# ---------------------------------------------------------------------------
# relative trace
# ---------------------------------------------------------------------------

class _ConjugationSum:
    """The operator phi -> sum_t x(t)^-1 phi x(t) on flattened matrices."""

    def __init__(self, x: Rep, fwd, bwd):
        self.field = x.field
        self.n = x.dim
        f = self.field
        n = self.n
        if f.e == 1:
            U = np.stack([m.reshape(-1) for m in bwd]).astype(np.float64)
            V = np.stack([m.T.copy().reshape(-1) for m in fwd]).astype(np.float64)
            P4 = U.T @ V      # exact: entries <= (p-1)^2 * |T| < 2^53
            P4 = np.mod(P4, f.p)
            M = P4.reshape(n, n, n, n).transpose(0, 2, 1, 3).reshape(n * n, n * n)
            self._M = M.astype(np.float64)
        else:
            M = np.zeros((n * n, n * n), dtype=f.dtype)
            for Z, X in zip(bwd, fwd):
                kron = f.vec_mul(Z[:, None, :, None], X.T[None, :, None, :])
                M = f.vec_add(M, kron.reshape(n * n, n * n))
            self._M = M

    def apply_flat(self, rows: np.ndarray) -> np.ndarray:
        """rows: (k, n*n) flattened endomorphisms -> their trace images."""
        f = self.field
        if f.e == 1:
            out = rows.astype(np.float64) @ self._M.T
            return np.mod(out, f.p).astype(f.dtype)
        out = np.zeros((rows.shape[0], self._M.shape[0]), dtype=f.dtype)
        for r in range(rows.shape[0]):
            acc = np.zeros(self._M.shape[0], dtype=f.dtype)
            nz = np.nonzero(rows[r])[0]
            for j in nz:
                c = np.asarray(rows[r][j], dtype=f.dtype)
                acc = f.vec_add(acc, f.vec_mul(c, self._M[:, j]))
            out[r] = acc
        return out

    def apply(self, phi: Mat) -> Mat:
        flat = self.apply_flat(phi.A.reshape(1, -1))
        return Mat(self.field, flat.reshape(self.n, self.n), _validate=False)


def _conjugation_sum_for(x: Rep, g: GroupHandle, h: Subgroup) -> _ConjugationSum:
    trans = right_transversal(g, h)
    fwd, bwd = transversal_matrices(x, trans)
    return _ConjugationSum(x, fwd, bwd)


@dataclass
class TraceMapData:
    source_basis: HomBasis     # basis of End_{kH}(x)
    target_basis: HomBasis     # basis of End_{kG}(x)
    matrix: Mat                # coordinates: column j = Tr(phi_j) in the target basis
    images_flat: np.ndarray    # raw images, one flattened endomorphism per row
    identity_in_image: bool


def _image_span_contains_identity(field, images_flat, n):
    ech = echelonize(Mat(field, images_flat, _validate=False))
    ident = np.eye(n, dtype=field.dtype).reshape(1, -1)
    return solve_left(ech, ident, field) is not None


def relative_trace_matrix(x: Rep, h: Subgroup, g: GroupHandle | None = None) -> TraceMapData:
    """Matrix of Tr_H^G : End_kH(x) -> End_kG(x) w.r.t. computed bases."""
    g = g or x.group
    if g is None:
        raise InputError("relative trace needs the ambient group")
    rx = restrict(x, h)
    end_h = hom_space(rx, rx)
    end_g = hom_space(x, x)
    conj = _conjugation_sum_for(x, g, h)
    if end_h.dim:
        flat = np.stack([b.A.reshape(-1) for b in end_h.basis])
        images = conj.apply_flat(flat)
    else:
        images = np.zeros((0, x.dim * x.dim), dtype=x.field.dtype)
    coords = _coords_in_end(x.field, end_g, images)
    ident = _image_span_contains_identity(x.field, images, x.dim) if end_h.dim else False
    return TraceMapData(end_h, end_g, coords, images, ident)


def _coords_in_end(field, end_g: HomBasis, images_flat) -> Mat:
    if end_g.dim == 0:
        raise InputError("trivial endomorphism ring (zero module?)")
    flat_g = np.stack([b.A.reshape(-1) for b in end_g.basis])
    ech = echelonize(Mat(field, flat_g, _validate=False))
    coords = solve_left(ech, images_flat, field)
    if coords is None:
        raise AssertionError("trace image escaped End_kG(x); engine bug")
    return Mat(field, coords.T, _validate=False)


def higman_test(x: Rep, h: Subgroup, g: GroupHandle | None = None) -> bool:
    """x is H-projective iff id_x lies in the image of the relative trace."""
    data = relative_trace_matrix(x, h, g)
    return data.identity_in_image


# ---------------------------------------------------------------------------
# vertices
# ---------------------------------------------------------------------------

@dataclass
class SubgroupVerdict:
    subgroup: Subgroup
    order: int
    projective: bool


@dataclass
class VertexReport:
    module_label: str | None
    sylow: Subgroup
    verdicts: list            # list[SubgroupVerdict], ordered by subgroup order
    minimal: list             # minimal subgroups with projective == True
    vertex_order: int

    def vertex_subgroups(self):
        return self.minimal


def _require_split_indecomposable(x: Rep, cert: IndecCertificate | None):
    if cert is None:
        alg = end_algebra(x)
        if alg.dim == 1:
            cert = IndecCertificate(1, 0)
        else:
            rad = algebra_radical(alg)
            cert = IndecCertificate(alg.dim, len(rad))
    if cert.end_dim - cert.rad_dim != 1:
        if cert.end_dim - cert.rad_dim > 1:
            raise SplittingFieldError(
                "module is not certified indecomposable with split endomorphism ring "
                f"(dim End/rad = {cert.end_dim - cert.rad_dim}); decompose it or extend the field")
        raise InputError("inconsistent indecomposability certificate")
    return cert


def vertex(x: Rep, sylow: Subgroup, g: GroupHandle | None = None,
           cert: IndecCertificate | None = None) -> VertexReport:
    """Minimal subgroups of the supplied Sylow p-subgroup relative to which the
    certified-indecomposable x is projective.

    All subgroups of the Sylow subgroup are tested (conjugacy between them is
    deliberately not used; relative projectivity is conjugation-invariant, so
    redundant tests are merely redundant).  The trace map to G is assembled
    once and every smaller subgroup factors through it.
    """
    g = g or x.group
    cert = _require_split_indecomposable(x, cert)
    conj_to_g = _conjugation_sum_for(x, g, sylow)
    end_g = hom_space(x, x)
    subs = subgroups_of_small(sylow)
    sylow_group = sylow.group
    sylow_order = sylow_group.order()
    verdicts = []
    for q in subs:
        rq = restrict(x, q)
        end_q = hom_space(rq, rq)
        if end_q.dim == 0:
            raise AssertionError("endomorphism ring cannot be empty")
        flat = np.stack([b.A.reshape(-1) for b in end_q.basis])
        if q.order() == sylow_order:
            inner_images = flat
        else:
            q_in_sylow = Subgroup(sylow_group, gens=list(q.gens))
            inner = _conjugation_sum_for(x, sylow_group, q_in_sylow)
            inner_images = inner.apply_flat(flat)
        images = conj_to_g.apply_flat(inner_images)
        ok = _image_span_contains_identity(x.field, images, x.dim)
        verdicts.append(SubgroupVerdict(q, q.order(), ok))
    # monotonicity sanity: H <= K and H projective => K projective
    for va in verdicts:
        for vb in verdicts:
            if va.subgroup.element_keys() < vb.subgroup.element_keys():
                if va.projective and not vb.projective:
                    raise AssertionError("Higman verdicts violate monotonicity")
    minimal = []
    for v in verdicts:
        if not v.projective:
            continue
        keys = v.subgroup.element_keys()
        has_smaller = any(w.projective and w.subgroup.element_keys() < keys
                          for w in verdicts)
        if not has_smaller:
            minimal.append(v.subgroup)
    if not minimal:
        raise AssertionError("no projective subgroup found although the Sylow must work")
    return VertexReport(module_label=x.label, sylow=sylow, verdicts=verdicts,
                        minimal=minimal, vertex_order=minimal[0].order())


# ---------------------------------------------------------------------------
# Green correspondence
# ---------------------------------------------------------------------------

@dataclass
class GreenSummand:
    rep: Rep
    multiplicity: int
    vertex_order: int
    is_correspondent: bool


@dataclass
class GreenReport:
    module_label: str | None
    correspondent: Rep
    summands: list            # list[GreenSummand]


def green_correspondent(x: Rep, p_sub: Subgroup, n_sub: Subgroup,
                        g: GroupHandle | None = None,
                        prng: Prng | None = None,
                        cert: IndecCertificate | None = None,
                        check_normalizer: bool = True) -> GreenReport:
    """The unique vertex-P summand of the restriction of x to n >= N_G(P)."""
    g = g or x.group
    prng = prng or Prng(0)
    if check_normalizer and g.order() <= CONFIG.normalizer_cap:
        norm = normalizer_small(g, p_sub)
        for gen in norm.generators:
            if not n_sub.group.membership(gen):
                raise InputError("n does not contain the normalizer of P")
    vrep = vertex(x, p_sub, g=g, cert=cert)
    p_keys = p_sub.element_keys()
    if not any(s.element_keys() == p_keys for s in vrep.minimal):
        raise InputError("module does not have vertex P; Green correspondence undefined")
    down = restrict(x, n_sub)
    dec = indec_decompose(down, prng)
    n_group = n_sub.group
    p_in_n = Subgroup(n_group, gens=list(p_sub.gens), name=p_sub.name)
    correspondent = None
    out = []
    for s in dec.summands:
        vr = vertex(s.rep, p_in_n, g=n_group, cert=s.certificate)
        v_ord = vr.vertex_order
        is_corr = any(m.element_keys() == p_keys for m in vr.minimal)
        if is_corr:
            if s.multiplicity != 1 or correspondent is not None:
                raise AssertionError(
                    "vertex-P summand is not unique; Green correspondence violated "
                    "(data bug)")
            correspondent = s.rep
        out.append(GreenSummand(rep=s.rep, multiplicity=s.multiplicity,
                                vertex_order=v_ord, is_correspondent=is_corr))
    if correspondent is None:
        raise AssertionError("no vertex-P summand found; Green correspondence violated")
    return GreenReport(module_label=x.label, correspondent=correspondent, summands=out)


# ---------------------------------------------------------------------------
# trivial source
# ---------------------------------------------------------------------------

def divides_induced(x: Rep, v: Rep, h: Subgroup, g: GroupHandle | None = None,
                    cert: IndecCertificate | None = None) -> bool:
    """Whether the indecomposable x is a direct summand of v induced from h.

    Via Frobenius reciprocity both hom spaces Hom_G(x, v^up) and
    Hom_G(v^up, x) are computed on their small adjoint sides; the transported
    composites are exactly the relative traces of the kH-endomorphisms
    phi_i psi_j, and x is a summand iff some combination is a unit of the
    local ring End(x), i.e. iff some composite is an invertible matrix.
    """
    g = g or x.group
    cert = _require_split_indecomposable(x, cert)
    rh = restrict(x, h)
    to_v = hom_space(rh, v)        # phi: x|h -> v
    from_v = hom_space(v, rh)      # psi: v -> x|h
    if to_v.dim == 0 or from_v.dim == 0:
        return False
    conj = _conjugation_sum_for(x, g, h)
    n = x.dim
    f = x.field
    for phi in to_v.basis:
        for psi in from_v.basis:
            prod = _mul_blas(f, phi.A, psi.A)       # an h-endomorphism of x
            comp = conj.apply_flat(prod.reshape(1, -1)).reshape(n, n)
            if echelonize(Mat(f, comp, _validate=False)).rank == n:
                return True
    return False


def trivial_source_test(x: Rep, q: Subgroup, g: GroupHandle | None = None,
                        cert: IndecCertificate | None = None,
                        verify_vertex: bool = True) -> bool:
    """True iff the indecomposable x with vertex q divides k_q induced to G."""
    g = g or x.group
    cert = _require_split_indecomposable(x, cert)
    if verify_vertex:
        _verify_vertex_is(x, q, g, cert)
    triv = trivial_rep(q.group, x.field)
    return divides_induced(x, triv, q, g=g, cert=cert)


def _verify_vertex_is(x: Rep, q: Subgroup, g: GroupHandle, cert):
    """Check q-projectivity and non-projectivity relative to all maximal
    subgroups of q (sufficient by conjugation invariance)."""
    if not higman_test(x, q, g):
        raise InputError("module is not projective relative to the claimed vertex")
    q_order = q.order()
    if q_order == 1:
        return
    subs = subgroups_of_small(q)
    maximal = []
    for s in subs:
        if s.order() == q_order:
            continue
        keys = s.element_keys()
        if not any(t.order() > s.order() and t.order() < q_order
                   and keys < t.element_keys() for t in subs):
            maximal.append(s)
    for s in maximal:
        if higman_test(x, s, g):
            raise InputError("claimed vertex is not minimal: module is projective "
                             f"relative to a subgroup of order {s.order()}")


def adjunction_composites(x: Rep, q: Subgroup, g: GroupHandle | None = None):
    """Explicitly transported maps and their composites, for inspection/tests.

    Returns (alphas, betas, composites) where alphas map x into k_q^up, betas
    map k_q^up onto x, and composites[i][j] = alpha_i . beta_j in End(x).
    """
    g = g or x.group
    rq = restrict(x, q)
    triv = trivial_rep(q.group, x.field)
    to_triv = hom_space(rq, triv)
    from_triv = hom_space(triv, rq)
    trans = right_transversal(g, q)
    tmats = transversal_matrices(x, trans)
    alphas = [hom_to_induced(x, triv, g, q, phi, trans, tmats) for phi in to_triv.basis]
    betas = [hom_from_induced(x, triv, g, q, psi, trans, tmats) for psi in from_triv.basis]
    f = x.field
    composites = [[Mat(f, _mul_blas(f, a.A, b.A), _validate=False) for b in betas]
                  for a in alphas]
    return alphas, betas, composites
