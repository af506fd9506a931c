"""Deterministic seed splitting.

Every random choice in the library (flags, displacement vectors, limit
directions, sampled divisors) flows from one run seed through derive_seed,
so identical seeds give byte-identical outputs.
"""

import hashlib
import random


def derive_seed(seed, *tags):
    h = hashlib.sha256(repr((seed,) + tags).encode()).digest()
    return int.from_bytes(h[:8], "big")


def rng(seed, *tags):
    return random.Random(derive_seed(seed, *tags))
