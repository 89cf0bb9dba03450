"""Stable 64-bit content hashing.

Everything that needs a cross-run-stable identity (names, structural-mode
allocation, tree heights) goes through these functions rather than Python's
salted ``hash``.  The mixer is the splitmix64 finalizer with a fixed seed, so
hashes are identical across processes and platforms.
"""

from __future__ import annotations

import struct

MASK64 = (1 << 64) - 1

# Fixed domain-separation tags.  Changing any of these changes every derived
# name, so they are part of the on-disk/benchmark-reproducibility contract.
SEED = 0x9E3779B97F4A7C15
_TAG_NONE = 0xA0
_TAG_BOOL = 0xA1
_TAG_INT = 0xA2
_TAG_STR = 0xA3
_TAG_BYTES = 0xA4
_TAG_FLOAT = 0xA5
_TAG_TUPLE = 0xA6
_TAG_FROZENSET = 0xA7


def mix64(x: int) -> int:
    """splitmix64 finalizer; a fixed bijective mixer on 64-bit words."""
    x &= MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & MASK64
    x ^= x >> 31
    return x


def combine(h: int, x: int) -> int:
    return mix64(h ^ ((x + 0x9E3779B97F4A7C15) & MASK64))


def content_hash(value) -> int:
    """Deterministic 64-bit hash of a value's structure.

    Supports the plain data the engine stores (ints, strings, tuples, ...)
    plus any object exposing ``__content_hash__``.  Equal values hash equal;
    the reverse holds up to 64-bit collisions.
    """
    if value is None:
        return mix64(SEED ^ _TAG_NONE)
    t = type(value)
    if t is bool:
        return mix64(SEED ^ _TAG_BOOL ^ int(value))
    if t is int:
        h = mix64(SEED ^ _TAG_INT ^ (1 if value < 0 else 0))
        v = -value if value < 0 else value
        while True:
            h = combine(h, v & MASK64)
            v >>= 64
            if v == 0:
                return h
    if t is str:
        return _hash_bytes(mix64(SEED ^ _TAG_STR), value.encode("utf-8"))
    if t is bytes:
        return _hash_bytes(mix64(SEED ^ _TAG_BYTES), value)
    if t is float:
        (bits,) = struct.unpack("<Q", struct.pack("<d", value))
        return mix64(SEED ^ _TAG_FLOAT ^ bits)
    if t is tuple or t is list:
        h = combine(mix64(SEED ^ _TAG_TUPLE), len(value))
        for item in value:
            h = combine(h, content_hash(item))
        return h
    if t is frozenset:
        h = combine(mix64(SEED ^ _TAG_FROZENSET), len(value))
        acc = 0
        for item in value:
            acc ^= content_hash(item)
        return combine(h, acc)
    ch = getattr(value, "__content_hash__", None)
    if ch is not None:
        return ch() & MASK64
    raise TypeError(f"no stable content hash for {t.__name__!r}")


def _hash_bytes(h: int, data: bytes) -> int:
    h = combine(h, len(data))
    for i in range(0, len(data), 8):
        h = combine(h, int.from_bytes(data[i : i + 8], "little"))
    return h


def trailing_zeros(h: int) -> int:
    """Number of trailing zero bits of a 64-bit word (64 for zero)."""
    if h == 0:
        return 64
    return (h & -h).bit_length() - 1
