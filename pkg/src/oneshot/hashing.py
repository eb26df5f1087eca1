"""Two-universal hashing by multiplication in GF(2^k).

h_a(x) = top ``out_bits`` bits of a * x, with a a nonzero field element.
For x != x' the difference d = x ^ x' is nonzero, so a * d is uniform over
the nonzero elements as a varies and

    Pr_a[h_a(x) = h_a(x')] = (2^(k - l) - 1) / (2^k - 1) <= 2^-l.

Multiplication by a nonzero element is a bijection, so inputs that are
uniform over the whole field hash to exactly uniform outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Primitive polynomials, with the leading term included.
PRIMITIVE_POLY = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10000011,
    8: 0x11D,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
}


def gf_mul(a, b, k: int):
    """Elementwise product in GF(2^k); works on ints or integer arrays."""
    poly = PRIMITIVE_POLY[k]
    a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
    a = a.copy()
    res = np.zeros_like(a)
    top = 1 << k
    for bit in range(k):
        res ^= np.where((b >> bit) & 1, a, 0)
        a <<= 1
        a = np.where(a & top, a ^ poly, a)
    return res


@dataclass(frozen=True)
class HashFunction:
    """The family {h_a : a = 1 .. 2^k - 1} on inputs 0 .. input_size-1."""

    input_size: int
    out_bits: int

    def __post_init__(self):
        if self.input_size < 1 or self.out_bits < 0:
            raise ValueError("need input_size >= 1 and out_bits >= 0")
        if self.field_bits not in PRIMITIVE_POLY:
            raise ValueError(f"field GF(2^{self.field_bits}) not supported")

    @property
    def field_bits(self) -> int:
        return max(self.out_bits, math.ceil(math.log2(self.input_size)), 1)

    @property
    def n_seeds(self) -> int:
        return 2**self.field_bits - 1

    def multiplier(self, seed: int) -> int:
        """Seed-deterministic nonzero multiplier."""
        rng = np.random.default_rng(int(seed))
        return int(rng.integers(1, 2**self.field_bits))

    def all_multipliers(self) -> np.ndarray:
        return np.arange(1, 2**self.field_bits, dtype=np.int64)

    def table(self, a: int) -> np.ndarray:
        """h_a(x) for every input x."""
        k = self.field_bits
        prod = gf_mul(a, np.arange(self.input_size), k)
        return (prod >> (k - self.out_bits)).astype(np.int64)

    def tables(self, multipliers) -> np.ndarray:
        """Stacked ``table`` rows for several multipliers."""
        k = self.field_bits
        a = np.asarray(multipliers, dtype=np.int64)[:, None]
        prod = gf_mul(a, np.arange(self.input_size)[None, :], k)
        return (prod >> (k - self.out_bits)).astype(np.int64)

    def describe(self, multiplier: int | None = None) -> dict:
        out = {
            "family": "gf2k-multiply-shift",
            "field_bits": self.field_bits,
            "polynomial": hex(PRIMITIVE_POLY[self.field_bits]),
            "input_size": self.input_size,
            "out_bits": self.out_bits,
        }
        if multiplier is not None:
            out["multiplier"] = int(multiplier)
        return out


def collision_counts(h: HashFunction) -> np.ndarray:
    """Exhaustive count, over every multiplier, of h(x) == h(x') for each input pair."""
    tabs = h.tables(h.all_multipliers())
    n = h.input_size
    counts = np.zeros((n, n), dtype=np.int64)
    for row in tabs:
        counts += row[:, None] == row[None, :]
    return counts


def max_collision_probability(h: HashFunction) -> float:
    counts = collision_counts(h)
    np.fill_diagonal(counts, 0)
    return float(counts.max()) / h.n_seeds if h.input_size > 1 else 0.0
