"""Stable hashing that drives every random-looking choice in the pipeline.

Nothing in this package consumes platform RNG state. All sampling keys off
SHA-256 over length-prefixed parts, so identical inputs reproduce identical
outputs across runs, processes, and library versions.
"""

from __future__ import annotations

import hashlib


def stable_hash(*parts: object) -> int:
    """Hash a tuple of values to a 64-bit non-negative integer.

    Each part is rendered with ``str()`` and length-prefixed before hashing,
    so no part can collide with the concatenation of two adjacent ones.
    """
    h = hashlib.sha256()
    for part in parts:
        b = str(part).encode("utf-8")
        h.update(str(len(b)).encode("ascii"))
        h.update(b":")
        h.update(b)
    return int.from_bytes(h.digest()[:8], "big")


def derive_seed(global_seed: int, pair_id: str, role: str, sample_index: int) -> int:
    """Fan one global seed out to a per-(pair, role, sample) seed.

    ``role`` names which text the seed masks or decodes ("article",
    "summary", "decode", ...). Distinct sample indices give each generated
    sample its own mask placement.
    """
    return stable_hash(global_seed, pair_id, role, sample_index)
