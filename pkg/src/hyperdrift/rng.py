"""Counter-based pseudo-random numbers for replayable experiments.

Every stochastic routine in the package draws from a SplitMix64 stream:
output i is the SplitMix64 finalizer applied to ``seed + (i+1) * GOLDEN``
mod 2**64.  The generator is stateless up to a counter, so a (seed, index)
pair pins down a draw exactly; any implementation of the same five-line
mixer reproduces our runs bit for bit.

Bounded draws use plain modulo.  The bias is below ``bound / 2**64`` and
irrelevant at the bounds used here (< 10**7).
"""

from __future__ import annotations

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN = 0x9E3779B97F4A7C15
_SPAWN_SALT = 0xD6E8FEB86659FD93


def mix64(z: int) -> int:
    """SplitMix64 finalizer: a bijective scramble of a 64-bit word."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def spawn(seed: int, index: int) -> int:
    """Derive the seed of child stream `index` from `seed`.

    Children are salted so that their streams do not overlap the parent's
    counter sequence.
    """
    return mix64((seed ^ _SPAWN_SALT) + (index + 1) * GOLDEN)


class SplitMix64:
    """A cheap deterministic stream of 64-bit words."""

    __slots__ = ("seed", "counter")

    def __init__(self, seed: int) -> None:
        self.seed = seed & MASK64
        self.counter = 0

    def next_u64(self) -> int:
        self.counter += 1
        return mix64(self.seed + self.counter * GOLDEN)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        return self.next_u64() % bound

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (2.0**-53)

    def bits(self, n: int) -> int:
        """Uniform n-bit integer (mask of n fair coin flips)."""
        out = 0
        for shift in range(0, n, 64):
            out |= self.next_u64() << shift
        return out & ((1 << n) - 1)

    def sample_indices(self, n: int, k: int) -> list[int]:
        """k distinct indices from range(n), sorted (partial Fisher-Yates)."""
        if not 0 <= k <= n:
            raise ValueError("need 0 <= k <= n")
        pool = list(range(n))
        for i in range(k):
            j = i + self.below(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return sorted(pool[:k])
