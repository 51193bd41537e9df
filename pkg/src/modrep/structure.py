"""Endomorphism algebras, Fitting splits, indecomposable decompositions,
socle/radical (Loewy) series, and isomorphism of indecomposables.

The only accepted indecomposability proof is the local-ring certificate
dim End - dim rad End = 1; "no split found" is never accepted.

The Jacobson radical of an algebra is computed through its regular module:
the radical equals the intersection of the kernels of all homomorphisms onto
the simple quotients, which reuses the chop and hom-space engines and stays
sound in small characteristic (a naive trace form does not).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import CONFIG
from .errors import ComputationFailure, InputError, SplittingFieldError
from .ffield import Mat, echelonize, mat_inv, mat_mul, min_poly, nullspace, factor_poly, Poly
from .ffield import _mul_blas
from .prng import Prng
from .rep import Rep, HomBasis, direct_sum, dual, hom_space, quotient_rep, sub_rep
from .chop import chop

__all__ = [
    "AlgebraData",
    "LoewyData",
    "DecompositionResult",
    "end_algebra",
    "algebra_radical",
    "fitting_split",
    "indec_decompose",
    "socle_series",
    "radical_series",
    "iso_indec",
]


# ---------------------------------------------------------------------------
# endomorphism algebras
# ---------------------------------------------------------------------------

class AlgebraData:
    """A unital matrix algebra given by a basis, with coordinate solving."""

    def __init__(self, module: Rep, basis):
        self.module = module
        self.field = module.field
        self.basis = list(basis)
        self.dim = len(self.basis)
        n = module.dim
        flat = np.array([b.A.reshape(-1) for b in self.basis],
                        dtype=self.field.dtype).reshape(self.dim, n * n)
        self._flat = flat
        self._ech = echelonize(Mat(self.field, flat, _validate=False))
        if self._ech.rank != self.dim:
            raise InputError("algebra basis is linearly dependent")
        ident = np.eye(n, dtype=self.field.dtype).reshape(1, -1)
        self.unit_coords = self.coords_flat(ident)
        if self.unit_coords is None:
            raise InputError("algebra does not contain the identity")

    def coords_flat(self, flat_rows):
        from .ffield import solve_left
        return solve_left(self._ech, np.asarray(flat_rows, dtype=self.field.dtype), self.field)

    def coords(self, m: Mat):
        out = self.coords_flat(m.A.reshape(1, -1))
        return None if out is None else out[0]

    def element(self, coords) -> Mat:
        f = self.field
        n = self.module.dim
        flat = _mul_blas(f, np.asarray(coords, dtype=f.dtype)[None, :], self._flat)[0]
        return Mat(f, flat.reshape(n, n), _validate=False)

    def right_mult_matrices(self):
        """Action of each basis element on the algebra by right multiplication."""
        out = []
        for b in self.basis:
            rows = np.array([mat_mul(a, b).A.reshape(-1) for a in self.basis],
                            dtype=self.field.dtype)
            coords = self.coords_flat(rows)
            if coords is None:
                raise InputError("algebra basis is not multiplicatively closed")
            out.append(Mat(self.field, coords, _validate=False))
        return out

    def random_element_coords(self, prng: Prng):
        f = self.field
        return np.array([prng.below(f.q) for _ in range(self.dim)], dtype=f.dtype)

    def __repr__(self):
        return f"AlgebraData(dim={self.dim} on {self.module.dim}-dim module)"


def end_algebra(m: Rep) -> AlgebraData:
    return AlgebraData(m, hom_space(m, m).basis)


def algebra_radical(alg: AlgebraData):
    """Basis (as matrices on the module) of the Jacobson radical."""
    if alg.dim == 0:
        return []
    f = alg.field
    reg = Rep.from_action(f, alg.right_mult_matrices())
    result = chop(reg, Prng(0xAD1CA7))
    kernels = []
    for fac in result.factors:
        hb = hom_space(reg, fac.rep)
        for phi in hb.basis:
            kernels.append(phi.A)
    if not kernels:
        return list(alg.basis)
    K = np.concatenate(kernels, axis=1)           # (dim, total)
    rad_coords = nullspace(Mat(f, K.T, _validate=False))
    return [alg.element(c) for c in rad_coords.A]


# ---------------------------------------------------------------------------
# Fitting's lemma
# ---------------------------------------------------------------------------

@dataclass
class FittingSplit:
    kernel_part: Rep
    image_part: Rep
    kernel_basis: Mat      # rows in the module's coordinates
    image_basis: Mat
    change_of_basis: Mat   # stacked [kernel; image], invertible

    @property
    def is_proper(self):
        return self.kernel_part.dim > 0 and self.image_part.dim > 0


def fitting_split(m: Rep, phi: Mat) -> FittingSplit:
    """m = ker(phi^N) (+) im(phi^N) for stabilized N; phi must lie in End(m).

    Row-vector convention: the kernel is {v : v phi^N = 0} (nullspace of the
    transpose) and the image is the row space of phi^N.
    """
    f = m.field
    n = m.dim
    power = phi
    k = 1
    while k < n:
        power = mat_mul(power, power)
        k *= 2
    kernel = nullspace(power.transpose())
    ech = echelonize(power)
    image = Mat(f, ech.rref.A[:ech.rank], _validate=False)
    cob_rows = np.concatenate([kernel.A, image.A], axis=0) if kernel.nrows else image.A
    if kernel.nrows + image.nrows != n:
        raise InputError("phi is not an endomorphism (rank drop inconsistent)")
    cob = Mat(f, cob_rows, _validate=False)
    mat_inv(cob)  # raises if the two parts fail to be complementary
    ker_rep = (sub_rep(m, kernel) if kernel.nrows
               else Rep(m.group, f, [Mat.zeros(f, 0, 0) for _ in m.gen_mats],
                        validate=False, dim=0))
    im_rep = (sub_rep(m, image) if image.nrows
              else Rep(m.group, f, [Mat.zeros(f, 0, 0) for _ in m.gen_mats],
                       validate=False, dim=0))
    return FittingSplit(ker_rep, im_rep, kernel, image, cob)


# ---------------------------------------------------------------------------
# indecomposable decomposition
# ---------------------------------------------------------------------------

@dataclass
class IndecCertificate:
    end_dim: int
    rad_dim: int

    @property
    def is_local(self):
        return self.end_dim - self.rad_dim == 1


@dataclass
class Summand:
    rep: Rep
    multiplicity: int
    certificate: IndecCertificate
    basis: Mat            # rows embedding one copy into the input module


@dataclass
class DecompositionResult:
    module: Rep
    summands: list        # list[Summand]
    all_bases: list       # one (rep, basis) per indecomposable copy, in order

    def multiset(self, key=None):
        out = {}
        for s in self.summands:
            k = key(s.rep) if key else (s.rep.label or f"dim{s.rep.dim}")
            out[k] = out.get(k, 0) + s.multiplicity
        return out

    def change_of_basis(self) -> Mat:
        rows = np.concatenate([b.A for _, b in self.all_bases], axis=0)
        return Mat(self.module.field, rows, _validate=False)


def _sub_basis_in_parent(parent_basis: Mat, rows: Mat) -> Mat:
    """Rows given in a part's coordinates, expressed in the module's coordinates."""
    f = parent_basis.field
    return Mat(f, _mul_blas(f, rows.A, parent_basis.A), _validate=False)


def _find_splitting_endo(alg: AlgebraData, prng: Prng, attempts: int):
    """An endomorphism whose minimal polynomial has >= 2 coprime factors, or None.

    Random elements split with good probability whenever End/rad is bigger
    than the ground field, so basis probes plus seeded random combinations
    suffice; the cap keeps the search honest.
    """
    budget = attempts
    for i in range(min(alg.dim, 16)):
        if budget <= 0:
            return None
        budget -= 1
        phi = alg.basis[i]
        facs = factor_poly(min_poly(phi))
        if len(facs) >= 2:
            return phi, facs
    while budget > 0:
        budget -= 1
        coords = alg.random_element_coords(prng)
        phi = alg.element(coords)
        facs = factor_poly(min_poly(phi))
        if len(facs) >= 2:
            return phi, facs
    return None


def indec_decompose(m: Rep, prng: Prng | None = None) -> DecompositionResult:
    """Full decomposition into indecomposables with local-End certificates."""
    prng = prng or Prng(0)
    f = m.field
    if m.dim == 0:
        return DecompositionResult(m, [], [])
    work = [(m, Mat.identity(f, m.dim))]
    finished = []
    while work:
        part, basis = work.pop(0)
        alg = end_algebra(part)
        if alg.dim == 1:
            finished.append((part, basis, IndecCertificate(1, 0)))
            continue
        found = _find_splitting_endo(alg, prng, attempts=min(alg.dim, 16) + 32)
        if found is None:
            # Probably local: certify through the radical before trying harder.
            rad = algebra_radical(alg)
            quotient_dim = alg.dim - len(rad)
            if quotient_dim == 1:
                finished.append((part, basis, IndecCertificate(alg.dim, len(rad))))
                continue
            found = _find_splitting_endo(alg, prng, attempts=CONFIG.decompose_attempt_cap)
            if found is None:
                raise SplittingFieldError(
                    f"End/rad has dimension {quotient_dim} > 1 with no rational "
                    "splitting: the module is indecomposable only after a field "
                    "extension, or the splitting search cap was exhausted")
        phi, facs = found
        p0 = facs[0][0]
        z = p0.eval_mat(phi)
        split = fitting_split(part, z)
        if not split.is_proper:
            raise AssertionError("coprime factor failed to split (engine bug)")
        work.append((split.kernel_part, _sub_basis_in_parent(basis, split.kernel_basis)))
        work.append((split.image_part, _sub_basis_in_parent(basis, split.image_basis)))
    # group isomorphic summands
    groups = []
    all_bases = []
    for rep_part, basis, cert in finished:
        all_bases.append((rep_part, basis))
        placed = False
        for g in groups:
            if g["rep"].dim == rep_part.dim and iso_indec(g["rep"], rep_part, prng,
                                                          cert_a=g["cert"], cert_b=cert):
                g["mult"] += 1
                placed = True
                break
        if not placed:
            groups.append({"rep": rep_part, "cert": cert, "mult": 1, "basis": basis})
    groups.sort(key=lambda g: (g["rep"].dim,))
    summands = [Summand(rep=g["rep"], multiplicity=g["mult"], certificate=g["cert"],
                        basis=g["basis"]) for g in groups]
    total = sum(s.rep.dim * s.multiplicity for s in summands)
    if total != m.dim:
        raise AssertionError("decomposition dimensions do not sum up")
    return DecompositionResult(m, summands, all_bases)


# ---------------------------------------------------------------------------
# isomorphism of indecomposables
# ---------------------------------------------------------------------------

def _has_invertible_combo(hb: HomBasis, prng: Prng):
    """Search the hom space for an invertible element; None = undecided."""
    f = hb.source.field
    d = hb.dim
    n = hb.source.dim
    if d == 0 or hb.source.dim != hb.target.dim:
        return False
    # cheap probes first: an isomorphism usually shows up immediately
    for phi in hb.basis:
        if echelonize(phi).rank == n:
            return True
    if f.q ** d <= CONFIG.iso_enumeration_bound:
        coeffs = np.zeros(d, dtype=np.int64)
        for code in range(1, f.q ** d):
            v = code
            for i in range(d):
                coeffs[i] = v % f.q
                v //= f.q
            cand = hb.combo(coeffs)
            if echelonize(cand).rank == n:
                return True
        return False
    for _ in range(CONFIG.iso_sample_count):
        coeffs = [prng.below(f.q) for _ in range(d)]
        if not any(coeffs):
            continue
        if echelonize(hb.combo(coeffs)).rank == n:
            return True
    return None


def iso_indec(a: Rep, b: Rep, prng: Prng | None = None, cert_a=None, cert_b=None) -> bool:
    """True iff certified-indecomposable a and b are isomorphic.

    Enumeration of the hom space when small, seeded sampling otherwise (a hit
    proves isomorphism; for local endomorphism rings a miss after many samples
    is overwhelming evidence but not proof), and a deterministic endomorphism
    ring fallback: End(a (+) b)/rad has dimension 4 exactly when a and b are
    isomorphic with split local Ends, and dimension 2 otherwise.
    """
    prng = prng or Prng(0)
    if a.dim != b.dim:
        return False
    hb = hom_space(a, b)
    if hb.dim == 0:
        return False
    verdict = _has_invertible_combo(hb, prng)
    if verdict is not None:
        return verdict
    both = direct_sum(a, b)
    alg = end_algebra(both)
    rad = algebra_radical(alg)
    quotient = alg.dim - len(rad)
    if quotient == 4:
        return True
    if quotient == 2:
        return False
    raise SplittingFieldError(
        f"End((a+b))/rad has dimension {quotient}; expected 2 or 4 for split "
        "local endomorphism rings - extend the field")


# ---------------------------------------------------------------------------
# Loewy series
# ---------------------------------------------------------------------------

@dataclass
class LoewyData:
    radical_layers: list   # top-down: head first; each layer a sorted label tuple
    socle_layers: list     # bottom-up: socle first
    dim: int

    @property
    def loewy_length(self):
        return len(self.radical_layers)


def _label_of(s: Rep, idx):
    return s.label if s.label is not None else f"simple#{idx}"


def _socle_data(cur: Rep, simples):
    """(layer multiset, socle row basis) of the current module."""
    f = cur.field
    rows = []
    layer = []
    for idx, s in enumerate(simples):
        hb = hom_space(s, cur)
        if hb.dim == 0:
            continue
        layer.extend([_label_of(s, idx)] * hb.dim)
        for phi in hb.basis:
            rows.append(phi.A)
    if not rows:
        return tuple(sorted(layer)), Mat.zeros(f, 0, cur.dim)
    stacked = Mat(f, np.concatenate(rows, axis=0), _validate=False)
    ech = echelonize(stacked)
    basis = Mat(f, ech.rref.A[:ech.rank], _validate=False)
    return tuple(sorted(layer)), basis


def socle_series(m: Rep, simples) -> LoewyData:
    """Loewy data with socle layers as the primary computation."""
    _require_split_simples(simples)
    soc = socle_series_layers(m, simples)
    rad = radical_series_layers(m, simples)
    return LoewyData(radical_layers=rad, socle_layers=soc, dim=m.dim)


def radical_series_layers(m: Rep, simples):
    """Head multisets from the top down (first layer = head of m)."""
    layers = []
    cur = m
    while cur.dim > 0:
        layer, rad_basis = _radical_data(cur, simples)
        if not layer:
            _raise_missing_simple(cur, simples)
        layers.append(layer)
        if rad_basis.nrows == 0:
            break
        cur = sub_rep(cur, rad_basis)
    total = sum(_layer_dim(l, simples) for l in layers)
    if total != m.dim:
        _raise_missing_simple(m, simples)
    return layers


def _layer_dim(layer, simples):
    dims = {}
    for idx, s in enumerate(simples):
        dims[_label_of(s, idx)] = s.dim
    return sum(dims[lab] for lab in layer)


def _radical_data(cur: Rep, simples):
    """(head multiset, radical row basis) of the current module."""
    f = cur.field
    cols = []
    layer = []
    use_dual = cur.group is not None
    dm = dual(cur) if use_dual else None
    for idx, s in enumerate(simples):
        if use_dual:
            hb = hom_space(dual(s), dm)
            mats = [Mat(f, phi.A.T, _validate=False) for phi in hb.basis]
        else:
            hb = hom_space(cur, s)
            mats = list(hb.basis)
        if not mats:
            continue
        layer.extend([_label_of(s, idx)] * len(mats))
        cols.extend(phi.A for phi in mats)
    if not cols:
        return tuple(), Mat.zeros(f, 0, cur.dim)
    K = np.concatenate(cols, axis=1)
    rad_rows = nullspace(Mat(f, K.T, _validate=False))
    return tuple(sorted(layer)), rad_rows


def radical_series(m: Rep, simples) -> LoewyData:
    """Loewy data with radical layers as the primary computation."""
    _require_split_simples(simples)
    rad = radical_series_layers(m, simples)
    soc = socle_series_layers(m, simples)
    return LoewyData(radical_layers=rad, socle_layers=soc, dim=m.dim)


def socle_series_layers(m: Rep, simples):
    """Socle multisets from the bottom up (first layer = socle of m)."""
    cur = m
    out = []
    total = 0
    while cur.dim > 0:
        layer, basis = _socle_data(cur, simples)
        if basis.nrows == 0:
            _raise_missing_simple(cur, simples)
        out.append(layer)
        total += basis.nrows
        cur = quotient_rep(cur, basis)
    if total != m.dim:
        _raise_missing_simple(m, simples)
    return out


def _require_split_simples(simples):
    for s in simples:
        if getattr(s, "dim", 0) <= 0:
            raise InputError("simple list contains an empty module")


def _raise_missing_simple(cur: Rep, simples):
    res = chop(cur, Prng(1))
    from .chop import iso_irr
    missing = []
    for fac in res.factors:
        if not any(fac.rep.dim == s.dim and iso_irr(fac.rep, s) for s in simples):
            missing.append(f"dim {fac.rep.dim}")
    raise InputError(
        "simple list does not cover all composition factors; missing: "
        + (", ".join(missing) if missing else "unknown factor"))
