"""Replayable entropy streams.

Every random choice in a run is read from an :class:`Entropy` stream. A stream
is SHA-256 in counter mode over ``master || 0x00 || tag || counter``; tags are
``/``-joined purpose paths such as ``"color/ordering"``. Distinct tags never
share output, and the same (master, tag) always replays the same bits.
"""

from __future__ import annotations

import hashlib

import numpy as np

from .errors import ParameterError


def parse_seed(seed: str | bytes | int) -> bytes:
    """Master seed from a hex string, raw bytes or a non-negative int."""
    if isinstance(seed, bytes):
        return seed
    if isinstance(seed, int):
        if seed < 0:
            raise ParameterError("seed must be non-negative")
        return seed.to_bytes(max(1, (seed.bit_length() + 7) // 8), "big")
    text = seed.strip().lower().removeprefix("0x")
    if not text:
        raise ParameterError("empty seed")
    if len(text) % 2:
        text = "0" + text
    try:
        return bytes.fromhex(text)
    except ValueError as exc:
        raise ParameterError(f"seed is not hex: {seed!r}") from exc


class Entropy:
    """Unbounded bit stream derived from a master seed and a purpose tag."""

    def __init__(self, master: str | bytes | int, tag: str = ""):
        self.master = parse_seed(master)
        self.tag = tag
        self._prefix = self.master + b"\x00" + tag.encode()
        self._counter = 0
        self._buf = 0
        self._buf_bits = 0

    def child(self, tag: str) -> "Entropy":
        """Independent stream for a sub-purpose (does not consume from self)."""
        return Entropy(self.master, f"{self.tag}/{tag}" if self.tag else tag)

    def _refill(self) -> None:
        block = hashlib.sha256(self._prefix + self._counter.to_bytes(8, "big")).digest()
        self._counter += 1
        self._buf = (self._buf << 256) | int.from_bytes(block, "big")
        self._buf_bits += 256

    def take(self, nbits: int) -> int:
        """Next ``nbits`` bits as an integer, most significant bit first."""
        if nbits < 0:
            raise ParameterError("nbits must be non-negative")
        while self._buf_bits < nbits:
            self._refill()
        self._buf_bits -= nbits
        out = self._buf >> self._buf_bits
        self._buf &= (1 << self._buf_bits) - 1
        return out

    def elements(self, count: int, bits: int) -> list[int]:
        return [self.take(bits) for _ in range(count)]

    def rng(self) -> np.random.Generator:
        """A numpy generator seeded from the next 128 bits (for bulk Monte-Carlo)."""
        return np.random.Generator(np.random.PCG64(self.take(128)))


class FiniteEntropy:
    """A fixed bit string; running out is a parameter error."""

    def __init__(self, value: int, nbits: int):
        if value < 0 or value >> nbits:
            raise ParameterError("value does not fit in nbits")
        self._value = value
        self._left = nbits

    @classmethod
    def from_bits(cls, bits: str) -> "FiniteEntropy":
        return cls(int(bits, 2) if bits else 0, len(bits))

    @property
    def remaining(self) -> int:
        return self._left

    def take(self, nbits: int) -> int:
        if nbits > self._left:
            raise ParameterError(f"insufficient entropy: need {nbits} bits, have {self._left}")
        self._left -= nbits
        out = self._value >> self._left
        self._value &= (1 << self._left) - 1
        return out

    def elements(self, count: int, bits: int) -> list[int]:
        return [self.take(bits) for _ in range(count)]
