"""Seeded 64-bit linear congruential generator.

The stream is fully specified here so that sampled checks are reproducible
byte for byte on any platform: ``s <- (6364136223846793005 s + 1442695040888963407) mod 2^64``
and draws use the high bits ``s >> 33``.
"""

from __future__ import annotations

_A = 6364136223846793005
_C = 1442695040888963407
_MASK = (1 << 64) - 1


class Lcg:
    def __init__(self, seed: int = 0):
        self.state = int(seed) & _MASK

    def next(self) -> int:
        self.state = (_A * self.state + _C) & _MASK
        return self.state >> 33

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("below() needs a positive bound")
        return self.next() % n

    def coefficient(self) -> int:
        """A small integer in -3..3."""
        return self.next() % 7 - 3

    def fork(self, tag: int) -> "Lcg":
        """Independent stream derived from the current state and a tag."""
        return Lcg((self.state ^ (tag * 0x9E3779B97F4A7C15)) & _MASK)
