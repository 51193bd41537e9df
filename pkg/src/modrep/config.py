"""Process-wide configuration knobs.

Kernel and storage choices are toggled here, never by input data: all kernels
are output-equivalent and only differ in throughput.
"""

from __future__ import annotations

from dataclasses import dataclass, field


def default_grease_depth(q: int) -> int:
    if q == 2:
        return 8
    if q == 3:
        return 4
    return 1


@dataclass
class Config:
    # "blas": multiply via exact float64 BLAS (extension fields are blown up to
    # the prime field first).  "grease": classical greased row-combination
    # kernel.  Both produce identical entries.
    mul_kernel: str = "blas"
    # Grease depth per field size; None means default_grease_depth(q).
    grease_depth: int | None = None
    # Store matrix payloads radix-packed (several elements per byte) for
    # q in {2, 3, 4}.  Semantics are identical to byte-per-element storage.
    packed_storage: bool = False
    # Brute-force caps (see perm / green / blocks).
    enumeration_cap: int = 10**6
    normalizer_cap: int = 10**5
    transversal_cap: int = 10**5
    # chop / decomposition iteration caps.
    chop_attempt_cap: int = 200
    decompose_attempt_cap: int = 500
    # iso_indec: enumerate the hom space exhaustively while q**dim <= this.
    iso_enumeration_bound: int = 2**20
    iso_sample_count: int = 128

    def effective_grease_depth(self, q: int) -> int:
        return self.grease_depth if self.grease_depth is not None else default_grease_depth(q)


CONFIG = Config()
