"""Stable seed derivation.

Per-draw seeds are sha256 digests of the master seed plus a path of string/int
parts, so results never depend on draw order or worker scheduling.
"""
from __future__ import annotations

import hashlib
import random

DEFAULT_SEED = 1729


def derive_seed(master: int, *parts: object) -> int:
    text = ":".join([str(int(master)), *(str(p) for p in parts)])
    digest = hashlib.sha256(text.encode("ascii")).digest()
    return int.from_bytes(digest[:8], "big")


def rng_for(master: int, *parts: object) -> random.Random:
    return random.Random(derive_seed(master, *parts))
