"""Stable seed derivation.

Python's built-in hash() is salted per process, so anything that must reproduce
across runs or worker pools derives its seeds here instead.
"""

from __future__ import annotations

import hashlib
from random import Random


def derive_seed(*parts: object) -> int:
    """Map a tuple of components to a stable 64-bit seed.

    Components are joined by their repr, so ints, strings and tuples of either
    are all fine. Same parts, same seed, on any platform.
    """
    text = "\x1f".join(repr(p) for p in parts)
    digest = hashlib.sha256(text.encode("utf8")).digest()
    return int.from_bytes(digest[:8], "big")


def make_rng(*parts: object) -> Random:
    return Random(derive_seed(*parts))
