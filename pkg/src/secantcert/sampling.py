"""Seeded randomness and (prime, seed) bookkeeping for genericity checks."""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from .exactalg import PrimeField, check_prime, default_primes

DEFAULT_SEEDS = (0,)
DEFAULT_RETRY_CAP = 10


def make_rng(prime: int, seed: int, salt: str = "") -> random.Random:
    # string seeds hash deterministically across interpreter runs
    return random.Random(f"{prime}:{seed}:{salt}")


@lru_cache(maxsize=None)
def prime_field(p: int) -> PrimeField:
    check_prime(p)
    return PrimeField(p, check=False)


def run_pairs(primes: Sequence[int] | None = None, seeds: Sequence[int] | None = None) -> list[tuple[int, int]]:
    """All (prime, seed) combinations in sorted order."""
    primes = tuple(primes) if primes else default_primes()
    seeds = tuple(seeds) if seeds is not None and len(seeds) else DEFAULT_SEEDS
    return sorted(set(product(primes, seeds)))


def random_vector(field, n: int, rng, nonzero_entries: bool = True) -> list:
    """Random vector; by default every coordinate is nonzero."""
    return [field.random(rng, nonzero=nonzero_entries) for _ in range(n)]


def all_equal(values: Iterable) -> bool:
    values = list(values)
    return all(v == values[0] for v in values)
