"""File formats and manifests.

Matrix format A (native)::

    matrix q=9 rows=2 cols=3
    0 1 2
    3 4 5

Matrix format B (compatibility, classic text exchange, q <= 9): a header of
four integers ``1 <q> <rows> <cols>`` followed by the entries as single
digits, row by row, each row starting on a new line and wrapped at 80 columns.

Permutation format A::

    permutation degree=8
    2 3 1 4 5 6 7 8

(images are 1-based; several permutation blocks may follow each other).
Permutation format B: header ``12 1 <degree> 1`` then one 1-based image per
line.

Word files: one word per line, letters as signed 1-based generator indices
(-k means the inverse of generator k); a line containing only ``id`` is the
empty word.

Manifests are plain-text ``key = value`` documents; see parse_manifest.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field as dcfield

import numpy as np

from .errors import InputError
from .ffield import FieldSpec, GF, Mat
from .perm import Perm

__all__ = [
    "write_matrix_file",
    "parse_matrix_file",
    "write_perm_file",
    "parse_perm_file",
    "parse_word_file",
    "write_word_file",
    "Manifest",
    "parse_manifest",
]


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

def write_matrix_file(path, m: Mat, fmt: str = "A"):
    q = m.field.q
    with open(path, "w") as fh:
        if fmt == "A":
            fh.write(f"matrix q={q} rows={m.nrows} cols={m.ncols}\n")
            for row in m.A:
                fh.write(" ".join(str(int(x)) for x in row) + "\n")
        elif fmt == "B":
            if q > 9:
                raise InputError("format B writes single digits; q must be <= 9")
            fh.write(f"1 {q} {m.nrows} {m.ncols}\n")
            for row in m.A:
                digits = "".join(str(int(x)) for x in row)
                for start in range(0, len(digits), 80):
                    fh.write(digits[start:start + 80] + "\n")
        else:
            raise InputError(f"unknown matrix format {fmt!r}")


def _diag(path, lineno, msg):
    return InputError(f"{path}:{lineno}: {msg}")


def parse_matrix_file(path, field: FieldSpec | None = None) -> Mat:
    """Read either format; the field defaults to GF(q) with the standard modulus."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise _diag(path, 1, "empty matrix file")
    head = lines[0].split()
    if lines[0].startswith("matrix"):
        m = re.fullmatch(r"matrix q=(\d+) rows=(\d+) cols=(\d+)", lines[0].strip())
        if not m:
            raise _diag(path, 1, "malformed native matrix header")
        q, rows, cols = map(int, m.groups())
        fld = field or _field_for(q)
        if fld.q != q:
            raise _diag(path, 1, f"file says q={q}, expected q={fld.q}")
        data = np.zeros((rows, cols), dtype=fld.dtype)
        if len(lines) < rows + 1:
            raise _diag(path, len(lines), f"truncated: expected {rows} data rows")
        for i in range(rows):
            parts = lines[1 + i].split()
            if len(parts) != cols:
                raise _diag(path, 2 + i, f"row has {len(parts)} entries, expected {cols}")
            for j, tok in enumerate(parts):
                v = int(tok)
                if not 0 <= v < q:
                    raise _diag(path, 2 + i, f"entry {v} at column {j + 1} not below q={q}")
                data[i, j] = v
        return Mat(fld, data, _validate=False)
    if len(head) == 4 and head[0] == "1":
        _, qs, rs, cs = head
        q, rows, cols = int(qs), int(rs), int(cs)
        if q > 9:
            raise _diag(path, 1, "compatibility reader handles one digit per entry (q <= 9)")
        fld = field or _field_for(q)
        if fld.q != q:
            raise _diag(path, 1, f"file says q={q}, expected q={fld.q}")
        digits = []
        rows_read = []
        for lineno, line in enumerate(lines[1:], start=2):
            stripped = line.strip()
            if not stripped:
                continue
            digits.append((lineno, stripped))
        data = np.zeros((rows, cols), dtype=fld.dtype)
        li = 0
        for i in range(rows):
            need = cols
            row_vals = []
            while need > 0:
                if li >= len(digits):
                    raise _diag(path, len(lines), f"truncated: row {i + 1} is incomplete")
                lineno, chunk = digits[li]
                li += 1
                take = chunk[:need]
                for j, ch in enumerate(take):
                    if not ch.isdigit() or int(ch) >= q:
                        raise _diag(path, lineno, f"entry {ch!r} at column {j + 1} not below q={q}")
                    row_vals.append(int(ch))
                if len(chunk) > need:
                    raise _diag(path, lineno, "row continues past its declared width")
                need -= len(take)
            data[i] = row_vals
        return Mat(fld, data, _validate=False)
    raise _diag(path, 1, "unrecognized matrix header")


def _field_for(q: int) -> FieldSpec:
    p = None
    for cand in range(2, q + 1):
        n, e = q, 0
        while n % cand == 0:
            n //= cand
            e += 1
        if n == 1 and e >= 1:
            p = cand
            break
    if p is None:
        raise InputError(f"{q} is not a prime power")
    e = 0
    n = q
    while n > 1:
        n //= p
        e += 1
    return GF(p, e)


# ---------------------------------------------------------------------------
# permutations
# ---------------------------------------------------------------------------

def write_perm_file(path, perms, fmt: str = "A"):
    perms = list(perms)
    with open(path, "w") as fh:
        for p in perms:
            if fmt == "A":
                fh.write(f"permutation degree={p.degree}\n")
                fh.write(" ".join(str(int(x) + 1) for x in p.images) + "\n")
            elif fmt == "B":
                fh.write(f"12 1 {p.degree} 1\n")
                for x in p.images:
                    fh.write(f"{int(x) + 1}\n")
            else:
                raise InputError(f"unknown permutation format {fmt!r}")


def parse_perm_file(path):
    """List of permutations from a file in either format."""
    with open(path) as fh:
        lines = [ln for ln in fh.read().splitlines()]
    perms = []
    i = 0
    while i < len(lines):
        line = lines[i].strip()
        if not line:
            i += 1
            continue
        if line.startswith("permutation"):
            m = re.fullmatch(r"permutation degree=(\d+)", line)
            if not m:
                raise _diag(path, i + 1, "malformed native permutation header")
            degree = int(m.group(1))
            if i + 1 >= len(lines):
                raise _diag(path, i + 1, "missing image line")
            parts = lines[i + 1].split()
            if len(parts) != degree:
                raise _diag(path, i + 2, f"expected {degree} images, got {len(parts)}")
            images = [int(t) - 1 for t in parts]
            perms.append(_checked_perm(path, i + 2, images, degree))
            i += 2
        else:
            head = line.split()
            if len(head) == 4 and head[0] == "12" and head[1] == "1" and head[3] == "1":
                degree = int(head[2])
                images = []
                j = i + 1
                while len(images) < degree:
                    if j >= len(lines):
                        raise _diag(path, len(lines), "truncated permutation body")
                    tok = lines[j].strip()
                    if tok:
                        images.append(int(tok) - 1)
                    j += 1
                perms.append(_checked_perm(path, j, images, degree))
                i = j
            else:
                raise _diag(path, i + 1, "unrecognized permutation header")
    if not perms:
        raise _diag(path, 1, "no permutations in file")
    return perms


def _checked_perm(path, lineno, images, degree):
    seen = [False] * degree
    for img in images:
        if not 0 <= img < degree:
            raise _diag(path, lineno, f"image {img + 1} outside 1..{degree}")
        if seen[img]:
            raise _diag(path, lineno, f"repeated image {img + 1}: not a bijection")
        seen[img] = True
    return Perm(images, _validate=False)


# ---------------------------------------------------------------------------
# words
# ---------------------------------------------------------------------------

def parse_word_file(path):
    words = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if line == "id":
                words.append(())
                continue
            letters = []
            for tok in line.split():
                v = int(tok)
                if v == 0:
                    raise _diag(path, lineno, "word letters are signed 1-based; 0 is invalid")
                letters.append(v - 1 if v > 0 else v)
            words.append(tuple(letters))
    if not words:
        raise _diag(path, 1, "no words in file")
    return words


def write_word_file(path, words):
    with open(path, "w") as fh:
        for w in words:
            if not w:
                fh.write("id\n")
                continue
            fh.write(" ".join(str(l + 1) if l >= 0 else str(l) for l in w) + "\n")


# ---------------------------------------------------------------------------
# manifests
# ---------------------------------------------------------------------------

@dataclass
class Manifest:
    path: str
    field: FieldSpec
    group_source: str
    subgroups: dict = dcfield(default_factory=dict)   # name -> ("words"|"perms", source)
    modules: dict = dcfield(default_factory=dict)     # name -> expression string
    seed: int = 0
    cap: int | None = None
    options: dict = dcfield(default_factory=dict)

    @property
    def base_dir(self):
        return os.path.dirname(os.path.abspath(self.path))


def parse_manifest(path) -> Manifest:
    field = None
    group_source = None
    subgroups = {}
    modules = {}
    seed = 0
    cap = None
    options = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise _diag(path, lineno, "expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            if key == "field":
                m = re.fullmatch(r"(\d+)(?:\^(\d+))?", value)
                if not m:
                    raise _diag(path, lineno, "field must look like 3 or 3^2")
                field = GF(int(m.group(1)), int(m.group(2) or 1))
            elif key == "group":
                group_source = value
            elif key.startswith("subgroup "):
                name = key.split(None, 1)[1]
                parts = value.split(None, 1)
                if len(parts) != 2 or parts[0] not in ("words", "perms"):
                    raise _diag(path, lineno, "subgroup value must be 'words <src>' or 'perms <src>'")
                subgroups[name] = (parts[0], parts[1])
            elif key.startswith("module "):
                name = key.split(None, 1)[1]
                modules[name] = value
            elif key == "seed":
                seed = int(value)
            elif key == "cap":
                cap = int(value)
            else:
                options[key] = value
    if field is None:
        raise _diag(path, 0, "manifest is missing the field")
    if group_source is None:
        raise _diag(path, 0, "manifest is missing the group")
    return Manifest(path=str(path), field=field, group_source=group_source,
                    subgroups=subgroups, modules=modules, seed=seed, cap=cap,
                    options=options)
