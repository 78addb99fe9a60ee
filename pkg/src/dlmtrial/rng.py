"""Counter-based random streams for reproducible parallel Monte Carlo.

Every draw is a pure function of (key, counter), so replications can run
on any number of workers, in any order, and a service restart needs no
RNG state beyond the trial seed.  The generator is splitmix64 used in
counter mode: state = key + counter * GOLDEN, output = finalizer(state).
Normal variates come from the inverse CDF, which keeps sequences
identical across platforms.
"""

from __future__ import annotations

from scipy.special import ndtri

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

# Stream tags used by the trial engine and service.
COVARIATE_STREAM = 1
ASSIGNMENT_STREAM = 2
OUTCOME_STREAM = 3


def mix64(z: int) -> int:
    """splitmix64 finalizer: a 64-bit avalanche permutation."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def derive_key(seed: int, *ids: int) -> int:
    """Derive an independent 64-bit stream key from a seed and indices."""
    key = mix64(seed)
    for i in ids:
        key = mix64(key ^ mix64((i + 1) * _GOLDEN))
    return key


class CounterStream:
    """Stateless uniform/normal stream addressed by an integer counter."""

    def __init__(self, seed: int, *ids: int):
        self.key = derive_key(seed, *ids)

    def raw(self, counter: int) -> int:
        return mix64((self.key + counter * _GOLDEN) & _MASK)

    def uniform(self, counter: int) -> float:
        """Uniform on [0, 1) from the top 53 bits of the raw output."""
        return (self.raw(counter) >> 11) * (1.0 / (1 << 53))

    def normal(self, counter: int) -> float:
        """Standard normal via the inverse CDF; never returns +-inf."""
        # Offset by half an ulp of the 53-bit grid so u is never exactly 0.
        u = self.uniform(counter) + 2.0 ** -54
        return float(ndtri(u))
