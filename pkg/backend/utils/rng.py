"""Platform-independent pseudo-random numbers.

Splits and MDL visiting orders depend on the seed alone. The generator:

  * state initialisation: one SplitMix64 step on the 64-bit seed
    (so seed 0 is valid; a zero state is replaced by the SplitMix64 constant)
  * generator: xorshift64* (shifts 12, 25, 27; multiplier 0x2545F4914F6CDD1D)
  * bounded integers: rejection sampling, no modulo bias
  * shuffle: Fisher-Yates from the last position down
  * sampling k of n: partial Fisher-Yates over positions 0..k-1
"""
from typing import MutableSequence, TypeVar

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MULTIPLIER = 0x2545F4914F6CDD1D

T = TypeVar("T")


def splitmix64(value: int) -> int:
    z = (value + _GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class XorShift64Star:
    def __init__(self, seed: int):
        if not 0 <= seed <= MASK64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.state = splitmix64(seed) or _GOLDEN

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * _MULTIPLIER) & MASK64

    def below(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def shuffle(self, items: MutableSequence[T]) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample_indices(self, n: int, k: int) -> list[int]:
        """k distinct positions out of range(n), in draw order."""
        if not 0 <= k <= n:
            raise ValueError(f"cannot draw {k} of {n}")
        pool = list(range(n))
        for i in range(k):
            j = i + self.below(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]
