"""Deterministic pseudo-random stream (xorshift64* with fixed constants).

Every randomized operation in the package draws from this generator so that a
seed fully determines the run on every platform.  The update is

    s ^= s >> 12;  s ^= s << 25;  s ^= s >> 27;  output = (s * 2685821657736338717) >> 32

on 64-bit unsigned state, seeded with ``seed + 0x9E3779B97F4A7C15`` (zero state
is remapped so the stream never degenerates).
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_MULT = 2685821657736338717
_SEED_OFFSET = 0x9E3779B97F4A7C15


class Prng:
    __slots__ = ("seed", "_state")

    def __init__(self, seed: int = 0):
        self.seed = seed & _MASK
        self._state = (self.seed + _SEED_OFFSET) & _MASK or _SEED_OFFSET

    def next_u32(self) -> int:
        s = self._state
        s ^= (s >> 12)
        s ^= (s << 25) & _MASK
        s ^= (s >> 27)
        self._state = s
        return ((s * _MULT) & _MASK) >> 32

    def below(self, n: int) -> int:
        """Uniform integer in [0, n); n must be positive."""
        if n <= 0:
            raise ValueError("below() needs a positive bound")
        # Rejection sampling keeps the distribution exactly uniform.
        limit = (1 << 32) - ((1 << 32) % n)
        while True:
            v = self.next_u32()
            if v < limit:
                return v % n

    def spawn(self) -> "Prng":
        """Independent child stream (used to keep sub-computations decoupled)."""
        return Prng(self.next_u32() ^ (self.next_u32() << 32))
