"""Exact dense linear algebra over GF(p^e) for small q.

Elements are encoded as integers 0..q-1 whose base-p digits are the
coefficients of the residue polynomial (low digit = constant term), reduced
against a fixed standard modulus, so files and fixtures are byte-stable.

Matrices are stored one byte per element (uint16 above q=256); radix-packed
storage for q in {2,3,4} and the multiplication kernels ("grease" versus exact
float64 BLAS) are throughput toggles with identical output, selected through
:mod:`modrep.config` and never by input data.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .config import CONFIG
from .errors import ComputationFailure, DomainError, InputError

__all__ = [
    "FieldSpec",
    "GF",
    "Mat",
    "Poly",
    "field_arith",
    "echelonize",
    "nullspace",
    "mat_mul",
    "mat_inv",
    "min_poly",
    "factor_poly",
    "standard_modulus",
]


# ---------------------------------------------------------------------------
# standard modulus table
# ---------------------------------------------------------------------------

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _poly_mulmod_p(a, b, mod, p):
    """Product of coefficient tuples modulo `mod` (monic, low-to-high) over GF(p)."""
    res = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    deg = len(mod) - 1
    for k in range(len(res) - 1, deg - 1, -1):
        c = res[k]
        if c:
            res[k] = 0
            for j in range(deg):
                res[k - deg + j] = (res[k - deg + j] - c * mod[j]) % p
    while len(res) > deg:
        res.pop()
    while len(res) < deg:
        res.append(0)
    return tuple(res)


def _poly_powmod_p(base, exp, mod, p):
    deg = len(mod) - 1
    out = tuple([1] + [0] * (deg - 1))
    b = tuple(base)
    while exp:
        if exp & 1:
            out = _poly_mulmod_p(out, b, mod, p)
        exp >>= 1
        b = _poly_mulmod_p(b, b, mod, p)
    return out


def _poly_gcd_p(a, b, p):
    """gcd of coefficient lists (low-to-high) over GF(p), monic or zero."""
    a = list(a)
    b = list(b)

    def trim(v):
        while v and v[-1] == 0:
            v.pop()
        return v

    a, b = trim(a), trim(b)
    while b:
        inv = pow(b[-1], p - 2, p)
        r = list(a)
        while len(r) >= len(b):
            c = (r[-1] * inv) % p
            if c:
                off = len(r) - len(b)
                for j, bj in enumerate(b):
                    r[off + j] = (r[off + j] - c * bj) % p
            r.pop()
            r = trim(r)
            if not r:
                break
        a, b = b, r
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [(c * inv) % p for c in a]
    return a


def _is_irreducible(coeffs, p):
    """Rabin irreducibility test for a monic polynomial (low-to-high) over GF(p)."""
    n = len(coeffs) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    mod = list(coeffs)
    x = (0, 1) + (0,) * (n - 2)
    if _poly_powmod_p(x, p ** n, mod, p) != x:
        return False
    for ell in set(_prime_factors(n)):
        xe = _poly_powmod_p(x, p ** (n // ell), mod, p)
        diff = [(a - b) % p for a, b in zip(xe, x)]
        g = _poly_gcd_p(diff, mod, p)
        if len(g) - 1 != 0:
            return False
    return True


def _prime_factors(n: int):
    out = []
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _smallest_primitive_root(p: int) -> int:
    phi = p - 1
    fac = set(_prime_factors(phi))
    for r in range(2, p):
        if all(pow(r, phi // f, p) != 1 for f in fac):
            return r
    raise AssertionError("no primitive root found")


@lru_cache(maxsize=None)
def standard_modulus(p: int, e: int) -> tuple:
    """Shipped standard modulus for GF(p^e), low-to-high coefficients, monic.

    Degree-e candidates x^e - c_{e-1} x^{e-1} + c_{e-2} x^{e-2} - ... are
    scanned in lexicographic order of the word (c_{e-1}, ..., c_0); the first
    one that is irreducible, has x as a multiplicative generator, and is
    norm-compatible with the standard modulus of every proper subfield wins.
    This reproduces the classical compatible-polynomial tables (e.g. the GF(9)
    modulus is x^2 + 2x + 2).
    """
    if not _is_prime(p):
        raise InputError(f"{p} is not prime")
    if e < 1:
        raise InputError("extension degree must be >= 1")
    if e == 1:
        r = 1 if p == 2 else _smallest_primitive_root(p)
        return ((-r) % p, 1)
    q = p ** e
    sub = {m: standard_modulus(p, m) for m in range(1, e) if e % m == 0}
    x = (0, 1) + (0,) * (e - 2)
    for word in _lex_words(p, e):
        # word = (c_{e-1}, ..., c_0) -> coefficient of x^i is (-1)^(e-i) c_i.
        coeffs = [0] * (e + 1)
        coeffs[e] = 1
        for i in range(e):
            c = word[e - 1 - i]
            coeffs[i] = (c if (e - i) % 2 == 0 else (-c) % p) % p
        coeffs = tuple(coeffs)
        if coeffs[0] == 0:
            continue
        if not _is_irreducible(coeffs, p):
            continue
        if not _element_is_primitive(x, coeffs, p, q):
            continue
        ok = True
        for m, smod in sub.items():
            t = (q - 1) // (p ** m - 1)
            y = _poly_powmod_p(x, t, list(coeffs), p)
            if not _is_root_of(y, smod, coeffs, p):
                ok = False
                break
        if ok:
            return coeffs
    raise AssertionError("standard modulus search failed")


def _lex_words(p, e):
    total = p ** e
    for n in range(total):
        word = []
        v = n
        for _ in range(e):
            word.append(v % p)
            v //= p
        yield tuple(reversed(word))


def _element_is_primitive(elem, mod, p, q):
    one = (1,) + (0,) * (len(mod) - 2)
    if _poly_powmod_p(elem, q - 1, list(mod), p) != one:
        return False
    for f in set(_prime_factors(q - 1)):
        if _poly_powmod_p(elem, (q - 1) // f, list(mod), p) == one:
            return False
    return True


def _is_root_of(elem, poly, mod, p):
    """Evaluate `poly` (coeffs over GF(p)) at `elem` inside GF(p)[x]/mod."""
    deg = len(mod) - 1
    acc = (0,) * deg
    for c in reversed(poly):
        acc = _poly_mulmod_p(acc, elem, list(mod), p)
        acc = tuple((a + (c if i == 0 else 0)) % p for i, a in enumerate(acc))
    return all(a == 0 for a in acc)


# ---------------------------------------------------------------------------
# FieldSpec
# ---------------------------------------------------------------------------

_FIELD_CACHE: dict = {}


class FieldSpec:
    """GF(p^e) with a fixed modulus polynomial and precomputed arithmetic tables."""

    def __init__(self, p: int, e: int = 1, modulus: tuple | None = None):
        if not _is_prime(p):
            raise InputError(f"characteristic {p} is not prime")
        if e < 1:
            raise InputError("extension degree must be >= 1")
        q = p ** e
        if q > 2 ** 16:
            raise InputError(f"field size {q} exceeds 2^16")
        if modulus is None:
            modulus = standard_modulus(p, e)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != e + 1 or modulus[e] != 1:
                raise InputError("modulus must be monic of degree e")
            if not _is_irreducible(modulus, p):
                raise InputError("modulus is not irreducible over GF(p)")
        self.p = p
        self.e = e
        self.q = q
        self.modulus = modulus
        self.dtype = np.uint8 if q <= 256 else np.uint16
        self._build_tables()

    def _build_tables(self):
        p, e, q = self.p, self.e, self.q
        codes = np.arange(q, dtype=np.int64)
        digits = np.empty((q, e), dtype=np.int64)
        v = codes.copy()
        for i in range(e):
            digits[:, i] = v % p
            v //= p
        self._digits = digits
        self._powers = p ** np.arange(e, dtype=np.int64)

        if e == 1:
            self.neg_table = ((-codes) % p).astype(self.dtype)
            self.inv_table = np.array([0] + [pow(int(a), p - 2, p) for a in range(1, p)],
                                      dtype=self.dtype)
            if q <= 256:
                self.add_table = ((codes[:, None] + codes[None, :]) % p).astype(self.dtype)
                self.mul_table = ((codes[:, None] * codes[None, :]) % p).astype(self.dtype)
            return

        # Reduction of x^k for k = 0..2e-2 against the modulus, as digit rows.
        red = np.zeros((2 * e - 1, e), dtype=np.int64)
        cur = [1] + [0] * (e - 1)
        red[0] = cur
        for k in range(1, 2 * e - 1):
            nxt = [0] + cur[:-1]
            carry = cur[-1]
            if carry:
                for j in range(e):
                    nxt[j] = (nxt[j] - carry * self.modulus[j]) % self.p
            cur = [c % p for c in nxt]
            red[k] = cur
        self._xpow_red = red

        if q <= 256:
            ds = digits
            conv = np.einsum("ai,bj->abij", ds, ds)
            prod = np.zeros((q, q, 2 * e - 1), dtype=np.int64)
            for i in range(e):
                for j in range(e):
                    prod[:, :, i + j] += conv[:, :, i, j]
            red_digits = (prod.reshape(q * q, 2 * e - 1) @ red) % p
            self.mul_table = (red_digits @ self._powers).reshape(q, q).astype(self.dtype)
            add_digits = (digits[:, None, :] + digits[None, :, :]) % p
            self.add_table = (add_digits @ self._powers).astype(self.dtype)
            self.neg_table = (((-digits) % p) @ self._powers).astype(self.dtype)
            mt = self.mul_table
            inv = np.zeros(q, dtype=self.dtype)
            eq_one = np.argwhere(mt == 1)
            inv[eq_one[:, 0]] = eq_one[:, 1]
            self.inv_table = inv
        else:
            # log/exp tables; the standard modulus makes x a generator.
            exp = np.zeros(q - 1, dtype=np.int64)
            log = np.zeros(q, dtype=np.int64)
            cur = 1
            for i in range(q - 1):
                exp[i] = cur
                log[cur] = i
                cur = self._mul_code_slow(cur, p)  # multiply by x (code p)
            self._exp = exp
            self._log = log
            self.neg_table = (((-digits) % p) @ self._powers).astype(self.dtype)

    def _mul_code_slow(self, a: int, b: int) -> int:
        p, e = self.p, self.e
        da = [(a // p ** i) % p for i in range(e)]
        db = [(b // p ** i) % p for i in range(e)]
        prod = _poly_mulmod_p(tuple(da), tuple(db), list(self.modulus), p)
        return sum(c * p ** i for i, c in enumerate(prod))

    # -- scalar ops --------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        if self.q <= 256:
            return int(self.add_table[a, b])
        return int(self.vec_add(np.array([a]), np.array([b]))[0])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a * b) % self.p
        if self.q <= 256:
            return int(self.mul_table[a, b])
        if a == 0 or b == 0:
            return 0
        return int(self._exp[(self._log[a] + self._log[b]) % (self.q - 1)])

    def inv(self, a: int) -> int:
        if a == 0:
            raise DomainError("inversion of 0 in GF(q)")
        if self.q <= 256 or self.e == 1:
            return int(self.inv_table[a])
        return int(self._exp[(-self._log[a]) % (self.q - 1)])

    def embed_subfield(self, value: int, sub: "FieldSpec") -> int:
        """Code of a prime-subfield element inside this field (identity on codes)."""
        if sub.p != self.p or sub.e != 1:
            raise InputError("only prime-subfield embedding is supported")
        return value % self.p

    # -- vectorized ops on code arrays --------------------------------------

    def vec_add(self, a, b):
        if self.e == 1:
            return ((a.astype(np.int64) + b) % self.p).astype(self.dtype)
        if self.q <= 256:
            return self.add_table[a, b]
        da = self._digits[a.astype(np.int64)]
        db = self._digits[b.astype(np.int64)]
        return (((da + db) % self.p) @ self._powers).astype(self.dtype)

    def vec_neg(self, a):
        return self.neg_table[a]

    def vec_sub(self, a, b):
        return self.vec_add(a, self.neg_table[b])

    def vec_mul(self, a, b):
        if self.e == 1:
            return ((a.astype(np.int64) * b) % self.p).astype(self.dtype)
        if self.q <= 256:
            return self.mul_table[a, b]
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        a, b = np.broadcast_arrays(a, b)
        out = np.zeros(a.shape, dtype=np.int64)
        nz = (a != 0) & (b != 0)
        out[nz] = self._exp[(self._log[a[nz]] + self._log[b[nz]]) % (self.q - 1)]
        return out.astype(self.dtype)

    def vec_inv(self, a):
        if np.any(a == 0):
            raise DomainError("inversion of 0 in GF(q)")
        if self.q <= 256 or self.e == 1:
            return self.inv_table[a]
        return self._exp[(-self._log[a.astype(np.int64)]) % (self.q - 1)].astype(self.dtype)

    def pow(self, a: int, n: int) -> int:
        out, base = 1, a
        if n < 0:
            base, n = self.inv(a), -n
        while n:
            if n & 1:
                out = self.mul(out, base)
            n >>= 1
            base = self.mul(base, base)
        return out

    # -- blow-up to the prime field (regular representation) ----------------

    @property
    def blow_table(self):
        """(q, e, e) table: blow_table[c] is the multiply-by-c matrix over GF(p)."""
        tab = getattr(self, "_blow_table", None)
        if tab is None:
            q, e, p = self.q, self.e, self.p
            tab = np.zeros((q, e, e), dtype=np.uint8)
            x = p  # code of x
            for c in range(q):
                acc = c
                for j in range(e):
                    tab[c, :, j] = [(acc // p ** i) % p for i in range(e)]
                    acc = self._mul_code_slow(acc, x) if e > 1 else (acc * 1) % p
            self._blow_table = tab
        return tab

    def __eq__(self, other):
        return (isinstance(other, FieldSpec) and self.p == other.p
                and self.e == other.e and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.e})" if self.e > 1 else f"GF({self.p})"


def GF(p: int, e: int = 1, modulus: tuple | None = None) -> FieldSpec:
    key = (p, e, modulus)
    f = _FIELD_CACHE.get(key)
    if f is None:
        f = FieldSpec(p, e, modulus)
        _FIELD_CACHE[key] = f
    return f


def field_arith(field: FieldSpec, a: int, b: int | None, op: str) -> int:
    """Scalar arithmetic dispatch; `inv` and `neg` ignore b."""
    if op == "add":
        return field.add(a, b)
    if op == "mul":
        return field.mul(a, b)
    if op == "neg":
        return field.neg(a)
    if op == "inv":
        return field.inv(a)
    raise InputError(f"unknown field op {op!r}")


# ---------------------------------------------------------------------------
# packed storage
# ---------------------------------------------------------------------------

_PACK_BITS = {2: 1, 3: 2, 4: 2}


def _pack(arr: np.ndarray, q: int) -> np.ndarray:
    bits = _PACK_BITS[q]
    per = 8 // bits
    flat = arr.reshape(-1)
    pad = (-len(flat)) % per
    if pad:
        flat = np.concatenate([flat, np.zeros(pad, dtype=flat.dtype)])
    flat = flat.reshape(-1, per).astype(np.uint16)
    out = np.zeros(len(flat), dtype=np.uint16)
    for i in range(per):
        out |= flat[:, i] << (bits * i)
    return out.astype(np.uint8)


def _unpack(packed: np.ndarray, q: int, size: int) -> np.ndarray:
    bits = _PACK_BITS[q]
    per = 8 // bits
    mask = (1 << bits) - 1
    cols = [(packed >> (bits * i)) & mask for i in range(per)]
    flat = np.stack(cols, axis=1).reshape(-1)[:size]
    return flat.astype(np.uint8)


# ---------------------------------------------------------------------------
# Mat
# ---------------------------------------------------------------------------

class Mat:
    """Immutable dense matrix over a FieldSpec.

    The canonical layout is one element per byte, row-major; when packed
    storage is configured (q in {2,3,4}) the payload is bit-packed and
    unpacked transparently on access.
    """

    __slots__ = ("field", "nrows", "ncols", "_data", "_packed")

    def __init__(self, field: FieldSpec, array, _validate: bool = True):
        a = np.ascontiguousarray(array, dtype=field.dtype)
        if a is array:
            a = a.copy()
        if a.ndim != 2:
            raise InputError("matrix payload must be 2-dimensional")
        if _validate and a.size and int(a.max(initial=0)) >= field.q:
            raise InputError(f"entry {int(a.max())} not below field size {field.q}")
        self.field = field
        self.nrows, self.ncols = a.shape
        if CONFIG.packed_storage and field.q in _PACK_BITS:
            self._data = None
            self._packed = _pack(a, field.q)
        else:
            a.setflags(write=False)
            self._data = a
            self._packed = None

    @property
    def A(self) -> np.ndarray:
        """Dense element-per-cell view (read-only)."""
        if self._data is not None:
            return self._data
        a = _unpack(self._packed, self.field.q, self.nrows * self.ncols)
        a = a.reshape(self.nrows, self.ncols)
        a.setflags(write=False)
        return a

    # -- constructors --------------------------------------------------------

    @classmethod
    def zeros(cls, field, nrows, ncols):
        return cls(field, np.zeros((nrows, ncols), dtype=field.dtype), _validate=False)

    @classmethod
    def identity(cls, field, n):
        return cls(field, np.eye(n, dtype=field.dtype), _validate=False)

    @classmethod
    def from_rows(cls, field, rows):
        return cls(field, np.array(rows, dtype=field.dtype).reshape(len(rows), -1))

    @classmethod
    def random(cls, field, nrows, ncols, prng):
        data = np.array([prng.below(field.q) for _ in range(nrows * ncols)],
                        dtype=field.dtype).reshape(nrows, ncols)
        return cls(field, data, _validate=False)

    # -- arithmetic ----------------------------------------------------------

    def __matmul__(self, other):
        return mat_mul(self, other)

    def __add__(self, other):
        self._check_same_shape(other)
        return Mat(self.field, self.field.vec_add(self.A, other.A), _validate=False)

    def __sub__(self, other):
        self._check_same_shape(other)
        return Mat(self.field, self.field.vec_sub(self.A, other.A), _validate=False)

    def __neg__(self):
        return Mat(self.field, self.field.vec_neg(self.A), _validate=False)

    def scale(self, c: int):
        arr = self.field.vec_mul(np.asarray(c, dtype=self.field.dtype), self.A)
        return Mat(self.field, arr, _validate=False)

    def transpose(self):
        return Mat(self.field, self.A.T, _validate=False)

    def __eq__(self, other):
        return (isinstance(other, Mat) and self.field == other.field
                and self.nrows == other.nrows and self.ncols == other.ncols
                and np.array_equal(self.A, other.A))

    def __hash__(self):
        return hash((self.field, self.nrows, self.ncols, self.A.tobytes()))

    def is_zero(self):
        return not self.A.any()

    def is_identity(self):
        return self.nrows == self.ncols and np.array_equal(self.A, np.eye(self.nrows, dtype=self.field.dtype))

    def _check_same_shape(self, other):
        if self.field != other.field:
            raise InputError("field mismatch")
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise InputError("shape mismatch")

    def __repr__(self):
        return f"Mat({self.field}, {self.nrows}x{self.ncols})"

    def row(self, i) -> np.ndarray:
        return self.A[i]

    def to_list(self):
        return self.A.tolist()


# ---------------------------------------------------------------------------
# multiplication kernels
# ---------------------------------------------------------------------------

_F64_SAFE = float(2 ** 53)


def _mul_blas_prime(field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    p = field.p
    inner = a.shape[1]
    bound = float(inner) * (p - 1) ** 2
    if bound < _F64_SAFE:
        prod = a.astype(np.float64) @ b.astype(np.float64)
        return (prod % p).astype(field.dtype)
    # Chunk the inner dimension so every partial sum stays exact.
    step = max(1, int(_F64_SAFE // ((p - 1) ** 2)) - 1)
    acc = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for k in range(0, inner, step):
        part = a[:, k:k + step].astype(np.float64) @ b[k:k + step].astype(np.float64)
        acc += (part % p).astype(np.int64)
    return (acc % p).astype(field.dtype)


def _blow_up(field, arr: np.ndarray) -> np.ndarray:
    e = field.e
    m, n = arr.shape
    blocks = field.blow_table[arr.astype(np.int64)]        # (m, n, e, e)
    return blocks.transpose(0, 2, 1, 3).reshape(m * e, n * e)


def _blow_down(field, big: np.ndarray, m: int, n: int) -> np.ndarray:
    e = field.e
    four = big.reshape(m, e, n, e)
    digits = four[:, :, :, 0]                               # column 0 holds the codes
    codes = np.tensordot(digits.astype(np.int64), field._powers, axes=([1], [0]))
    return codes.astype(field.dtype)


def _mul_blas(field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if field.e == 1:
        return _mul_blas_prime(field, a, b)
    big = _mul_blas_prime(GF(field.p), _blow_up(field, a), _blow_up(field, b))
    return _blow_down(field, big, a.shape[0], b.shape[1])


def _mul_grease(field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Greased row-combination kernel: precompute all q^d combinations of each
    d-row group of b, then gather one table row per group per row of a."""
    q = field.q
    d = max(1, CONFIG.effective_grease_depth(q))
    m, inner = a.shape
    n = b.shape[1]
    out = np.zeros((m, n), dtype=field.dtype)
    a64 = a.astype(np.int64)
    for start in range(0, inner, d):
        rows = b[start:start + d]
        g = rows.shape[0]
        combos = q ** g
        # table[c] = sum_j digit_j(c) * rows[j], built one scalar layer at a time
        table = np.zeros((combos, n), dtype=field.dtype)
        idx = np.arange(combos, dtype=np.int64)
        for j in range(g):
            scal = ((idx // q ** j) % q).astype(field.dtype)
            table = field.vec_add(table, field.vec_mul(scal[:, None], rows[None, j]))
        digest = np.zeros(m, dtype=np.int64)
        for j in range(g):
            digest += a64[:, start + j] * q ** j
        out = field.vec_add(out, table[digest])
    return out


def mat_mul(a: Mat, b: Mat) -> Mat:
    if a.field != b.field:
        raise InputError("field mismatch in mat_mul")
    if a.ncols != b.nrows:
        raise InputError(f"inner dimensions disagree: {a.ncols} vs {b.nrows}")
    if a.ncols == 0 or a.nrows == 0 or b.ncols == 0:
        return Mat.zeros(a.field, a.nrows, b.ncols)
    if CONFIG.mul_kernel == "grease":
        data = _mul_grease(a.field, a.A, b.A)
    else:
        data = _mul_blas(a.field, a.A, b.A)
    return Mat(a.field, data, _validate=False)


# ---------------------------------------------------------------------------
# echelon form / nullspace / inverse
# ---------------------------------------------------------------------------

@dataclass
class EchelonForm:
    rank: int
    pivots: tuple
    rref: Mat
    transform: Mat


def _echelon_inplace(field, work: np.ndarray, limit: int):
    """Gauss-Jordan on `work`, pivoting only in columns < limit.

    Returns (rank, pivots). Columns >= limit ride along (augmented transform).
    """
    nrows = work.shape[0]
    r = 0
    pivots = []
    for c in range(limit):
        col = work[r:, c]
        nz = np.nonzero(col)[0]
        if len(nz) == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            work[[r, pr]] = work[[pr, r]]
        pv = int(work[r, c])
        if pv != 1:
            work[r] = field.vec_mul(np.asarray(field.inv(pv), dtype=field.dtype), work[r])
        factors = work[:, c].copy()
        factors[r] = 0
        rows_nz = np.nonzero(factors)[0]
        if len(rows_nz):
            upd = field.vec_mul(factors[rows_nz, None], work[None, r][0][None, :])
            work[rows_nz] = field.vec_sub(work[rows_nz], upd)
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return r, tuple(pivots)


def echelonize(m: Mat) -> EchelonForm:
    """Reduced row echelon form with the full transform: transform @ m = rref."""
    field = m.field
    n, c = m.nrows, m.ncols
    work = np.concatenate([m.A.copy(), np.eye(n, dtype=field.dtype)], axis=1)
    rank, pivots = _echelon_inplace(field, work, c)
    return EchelonForm(rank, pivots,
                       Mat(field, work[:, :c], _validate=False),
                       Mat(field, work[:, c:], _validate=False))


def rref_only(m: Mat) -> EchelonForm:
    """Reduced row echelon form without the transform (cheaper on tall input)."""
    field = m.field
    work = m.A.copy()
    rank, pivots = _echelon_inplace(field, work, m.ncols)
    return EchelonForm(rank, pivots, Mat(field, work, _validate=False), None)


def nullspace(m: Mat) -> Mat:
    """Rows form a basis of the right kernel: m @ v^T = 0 for each row v."""
    ech = rref_only(m)
    field = m.field
    n = m.ncols
    pivots = list(ech.pivots)
    free = [j for j in range(n) if j not in set(pivots)]
    if not free:
        return Mat.zeros(field, 0, n)
    rref = ech.rref.A
    basis = np.zeros((len(free), n), dtype=field.dtype)
    basis[np.arange(len(free)), free] = 1
    if pivots:
        basis[:, pivots] = field.vec_neg(rref[:len(pivots), :][:, free]).T
    return Mat(field, basis, _validate=False)


def mat_inv(a: Mat) -> Mat:
    if a.nrows != a.ncols:
        raise DomainError("inverse of a non-square matrix")
    ech = echelonize(a)
    if ech.rank != a.nrows:
        raise DomainError(f"singular matrix (rank {ech.rank} of {a.nrows})", rank=ech.rank)
    return ech.transform


class RowStepper:
    """Repeated row-vector actions v -> v @ M with the matrix prepared once."""

    __slots__ = ("field", "_mb", "_n")

    def __init__(self, field, marr: np.ndarray):
        self.field = field
        self._n = marr.shape[1]
        if field.e == 1:
            self._mb = marr.astype(np.float64)
        else:
            self._mb = _blow_up(field, marr).astype(np.float64)

    def step(self, v: np.ndarray) -> np.ndarray:
        f = self.field
        if f.e == 1:
            return np.mod(v.astype(np.float64) @ self._mb, f.p).astype(f.dtype)
        vb = _blow_up(f, v[None, :]).astype(np.float64)
        prod = np.mod(vb @ self._mb, f.p).astype(np.uint8)
        return _blow_down(f, prod, 1, self._n)[0]


def solve_left(basis_ech: EchelonForm, vecs: np.ndarray, field) -> np.ndarray | None:
    """Coordinates c with c @ B = vecs for the echelonized row space B.

    basis_ech must come from echelonize(B); returns None when some vector is
    outside the row space.
    """
    rref = basis_ech.rref.A[:basis_ech.rank]
    piv = list(basis_ech.pivots)
    coords = vecs[:, piv].astype(field.dtype)
    recon = _mul_blas(field, coords, rref) if rref.size else np.zeros_like(vecs)
    if not np.array_equal(recon, vecs):
        return None
    # Coordinates are w.r.t. the reduced rows; convert to the original rows.
    tr = basis_ech.transform.A[:basis_ech.rank]
    return _mul_blas(field, coords, tr)


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

class Poly:
    """Dense univariate polynomial over a FieldSpec, low-to-high coefficients."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        if any(c >= field.q or c < 0 for c in cs):
            raise InputError("coefficient outside field")
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls, field):
        return cls(field, [])

    @classmethod
    def one(cls, field):
        return cls(field, [1])

    @classmethod
    def x(cls, field):
        return cls(field, [0, 1])

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, Poly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __add__(self, other):
        f = self.field
        n = max(len(self.coeffs), len(other.coeffs), 1)
        a = np.zeros(n, dtype=f.dtype)
        b = np.zeros(n, dtype=f.dtype)
        a[:len(self.coeffs)] = self.coeffs
        b[:len(other.coeffs)] = other.coeffs
        return Poly(f, f.vec_add(a, b).tolist())

    def __sub__(self, other):
        f = self.field
        n = max(len(self.coeffs), len(other.coeffs), 1)
        a = np.zeros(n, dtype=f.dtype)
        b = np.zeros(n, dtype=f.dtype)
        a[:len(self.coeffs)] = self.coeffs
        b[:len(other.coeffs)] = other.coeffs
        return Poly(f, f.vec_sub(a, b).tolist())

    def __mul__(self, other):
        f = self.field
        if self.is_zero() or other.is_zero():
            return Poly.zero(f)
        a = np.array(self.coeffs, dtype=np.int64)
        b = np.array(other.coeffs, dtype=np.int64)
        if f.e == 1:
            out = np.convolve(a, b) % f.p
            return Poly(f, out.tolist())
        prods = f.vec_mul(a.astype(f.dtype)[:, None], b.astype(f.dtype)[None, :])
        digits = f._digits[prods.astype(np.int64)]          # (na, nb, e)
        acc = np.zeros((len(a) + len(b) - 1, f.e), dtype=np.int64)
        for i in range(len(a)):
            acc[i:i + len(b)] += digits[i]
        out = ((acc % f.p) @ f._powers)
        return Poly(f, out.tolist())

    def scale(self, c):
        f = self.field
        return Poly(f, [f.mul(c, a) for a in self.coeffs])

    def monic(self):
        if self.is_zero():
            return self
        lead = self.coeffs[-1]
        return self if lead == 1 else self.scale(self.field.inv(lead))

    def divmod(self, other):
        f = self.field
        if other.is_zero():
            raise DomainError("polynomial division by zero")
        rem = np.array(self.coeffs, dtype=f.dtype)
        nb = len(other.coeffs)
        dq = len(rem) - nb
        if dq < 0:
            return Poly.zero(f), self
        quo = [0] * (dq + 1)
        barr = np.array(other.coeffs, dtype=f.dtype)
        inv_lead = f.inv(other.coeffs[-1])
        for k in range(dq, -1, -1):
            c = f.mul(int(rem[k + nb - 1]), inv_lead)
            quo[k] = c
            if c:
                cc = np.asarray(c, dtype=f.dtype)
                rem[k:k + nb] = f.vec_sub(rem[k:k + nb], f.vec_mul(cc, barr))
        return Poly(f, quo), Poly(f, rem.tolist())

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def lcm(self, other):
        if self.is_zero() or other.is_zero():
            return Poly.zero(self.field)
        return ((self * other) // self.gcd(other)).monic()

    def pow_mod(self, n: int, mod: "Poly") -> "Poly":
        out = Poly.one(self.field) % mod
        base = self % mod
        while n:
            if n & 1:
                out = (out * base) % mod
            n >>= 1
            base = (base * base) % mod
        return out

    def derivative(self):
        f = self.field
        out = []
        for i in range(1, len(self.coeffs)):
            c = 0
            for _ in range(i % f.p):
                c = f.add(c, self.coeffs[i])
            out.append(c)
        return Poly(f, out)

    def eval_scalar(self, a: int) -> int:
        f = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, a), c)
        return acc

    def eval_mat(self, m: Mat) -> Mat:
        f = self.field
        acc = Mat.zeros(f, m.nrows, m.ncols)
        ident = Mat.identity(f, m.nrows)
        for c in reversed(self.coeffs):
            acc = mat_mul(acc, m) + ident.scale(c)
        return acc

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        terms = [f"{c}*x^{i}" for i, c in enumerate(self.coeffs) if c]
        return "Poly(" + " + ".join(terms) + ")"


# ---------------------------------------------------------------------------
# minimal polynomial
# ---------------------------------------------------------------------------

class _SpanTracker:
    """Incremental row span kept in reduced echelon form.

    Keeping full RREF makes reduction a single gather + matrix product
    (coordinates are read off the pivot columns), which is what every spin
    loop in the package leans on.
    """

    def __init__(self, field, width):
        self.field = field
        self.width = width
        self.rows = np.zeros((0, width), dtype=field.dtype)
        self.pivots: list[int] = []

    def reduce(self, v: np.ndarray) -> np.ndarray:
        f = self.field
        v = v.astype(f.dtype)
        if not self.pivots:
            return v.copy()
        coords = v[self.pivots]
        if not coords.any():
            return v.copy()
        prod = _mul_blas(f, coords[None, :], self.rows)[0]
        return f.vec_sub(v, prod)

    def contains(self, v) -> bool:
        return not self.reduce(v).any()

    def add(self, v) -> bool:
        """Insert v if independent; returns True when the span grew."""
        f = self.field
        red = self.reduce(v)
        nz = np.nonzero(red)[0]
        if len(nz) == 0:
            return False
        p = int(nz[0])
        red = f.vec_mul(np.asarray(f.inv(int(red[p])), dtype=f.dtype), red)
        if self.pivots:
            col = self.rows[:, p].copy()
            hit = np.nonzero(col)[0]
            if len(hit):
                upd = f.vec_mul(col[hit, None], red[None, :])
                self.rows[hit] = f.vec_sub(self.rows[hit], upd)
        self.rows = np.concatenate([self.rows, red[None, :]], axis=0)
        self.pivots.append(p)
        return True

    @property
    def dim(self):
        return self.rows.shape[0]


def min_poly(m: Mat) -> Poly:
    """Monic least-degree p with p(m) = 0, by Krylov spinning over deduplicated seeds."""
    if m.nrows != m.ncols:
        raise InputError("min_poly needs a square matrix")
    field = m.field
    n = m.nrows
    if n == 0:
        return Poly.one(field)
    span = _SpanTracker(field, n)
    result = Poly.one(field)
    stepper = RowStepper(field, m.A)
    for s in range(n):
        seed = np.zeros(n, dtype=field.dtype)
        seed[s] = 1
        if span.contains(seed):
            continue
        # Local cyclic spin with coefficient bookkeeping for the order polynomial.
        local = _SpanTracker(field, n)
        vecs = [seed]
        local.add(seed)
        cur = seed
        while True:
            cur = stepper.step(cur)
            if local.add(cur):
                vecs.append(cur)
                continue
            # Dependence: solve cur = sum a_i vecs[i].
            vmat = Mat(field, np.array(vecs), _validate=False)
            ech = echelonize(vmat)
            coords = solve_left(ech, cur[None, :], field)
            k = len(vecs)
            coeffs = [field.neg(int(coords[0, i])) for i in range(k)] + [1]
            result = result.lcm(Poly(field, coeffs))
            break
        for v in vecs:
            span.add(v)
        if span.dim == n:
            break
    return result


# ---------------------------------------------------------------------------
# polynomial factorization (Berlekamp / Cantor-Zassenhaus, deterministic)
# ---------------------------------------------------------------------------

def _squarefree_parts(f: Poly):
    """Yield (squarefree factor, multiplicity) pairs with product = input."""
    field = f.field
    p = field.p
    out = {}

    def accumulate(g: Poly, mult: int):
        if g.degree >= 1:
            out[g] = out.get(g, 0) + mult

    def work(g: Poly, mult: int):
        if g.degree < 1:
            return
        d = g.derivative()
        if d.is_zero():
            # g = h(x^p); take p-th roots of coefficients.
            root = [field.pow(c, field.q // p) for c in g.coeffs[::p]]
            work(Poly(field, root), mult * p)
            return
        c = g.gcd(d)
        w = g // c
        # w = product of squarefree factors at multiplicity not divisible by p
        i = 1
        while w.degree >= 1:
            y = w.gcd(c)
            fac = w // y
            if fac.degree >= 1:
                accumulate(fac, mult * i)
            w = y
            c = c // y
            i += 1
        if c.degree >= 1:
            work(c, mult)

    work(f.monic(), 1)
    return out


def _distinct_degree(f: Poly):
    """Split a squarefree monic polynomial into (product, degree) parts."""
    field = f.field
    q = field.q
    x = Poly.x(field)
    out = []
    h = x % f
    rest = f
    d = 0
    while rest.degree > 0:
        d += 1
        if 2 * d > rest.degree:
            out.append((rest, rest.degree))
            break
        h = h.pow_mod(q, rest)
        g = (h - x).gcd(rest)
        if g.degree > 0:
            out.append((g, d))
            rest = rest // g
            h = h % rest
    return out


def _equal_degree_split(f: Poly, d: int):
    """Factor a squarefree product of degree-d irreducibles, deterministically."""
    field = f.field
    q = field.q
    if f.degree == d:
        return [f]
    # Enumerate candidate elements u in a fixed order until a split appears.
    for code in range(1, q ** min(f.degree, 4)):
        coeffs = []
        v = code
        while v:
            coeffs.append(v % q)
            v //= q
        u = Poly(field, coeffs)
        if u.degree < 1 and f.degree > d:
            # constants never split; skip
            continue
        if field.p == 2:
            # trace map over GF(2^e)
            t = Poly.zero(field)
            w = u % f
            for _ in range(d * field.e):
                t = (t + w) % f
                w = w.pow_mod(2, f)
            g = t.gcd(f)
        else:
            t = u.pow_mod((q ** d - 1) // 2, f) - Poly.one(field)
            g = t.gcd(f)
        if 0 < g.degree < f.degree:
            return _equal_degree_split(g, d) + _equal_degree_split(f // g, d)
    raise ComputationFailure("equal-degree splitting exhausted its candidates")


def _certify_irreducible(g: Poly) -> bool:
    field = g.field
    n = g.degree
    if n == 1:
        return True
    x = Poly.x(field)
    if x.pow_mod(field.q ** n, g) != (x % g):
        return False
    for ell in set(_prime_factors(n)):
        diff = x.pow_mod(field.q ** (n // ell), g) - x
        if diff.gcd(g).degree != 0:
            return False
    return True


def factor_poly(f: Poly):
    """Full factorization into certified irreducibles: list of (Poly, multiplicity)."""
    if f.is_zero():
        raise DomainError("cannot factor the zero polynomial")
    result = []
    for sqf, mult in _squarefree_parts(f).items():
        for part, d in _distinct_degree(sqf):
            for irr in _equal_degree_split(part, d):
                irr = irr.monic()
                if not _certify_irreducible(irr):
                    raise AssertionError(f"factor {irr} failed its irreducibility certificate")
                result.append((irr, mult))
    result.sort(key=lambda t: (t[0].degree, t[0].coeffs))
    return result
