"""Oracles and random generators shared by the tests."""

from __future__ import annotations

import random
from fractions import Fraction

from freemagma.measure import from_entries
from freemagma.sets import (Complement, FiniteSet, Gens, Intersection, Level, Product, T, Union,
                            Z)


def naive_Z(t) -> bool:
    """Membership in Z straight from the mutual recursion, no memo."""
    if t.is_leaf:
        return False
    return naive_T(t.right, t.left.size)


def naive_T(t, p: int) -> bool:
    if p == 0:
        return True
    if t.is_leaf:
        return False
    return not naive_Z(t.left) and naive_T(t.right, p - 1)


def random_term(store, rng: random.Random, level: int):
    if level == 1:
        return store.leaf(rng.randrange(len(store.generators)))
    a = rng.randint(1, level - 1)
    return random_term(store, rng, a) * random_term(store, rng, level - a)


def random_mean(store, rng: random.Random, max_support: int = 8, max_level: int = 5):
    """A finitely supported mean with random positive rational weights."""
    k = rng.randint(1, max_support)
    terms = {random_term(store, rng, rng.randint(1, max_level)) for _ in range(k)}
    raw = [rng.randint(1, 9) for _ in terms]
    total = sum(raw)
    return from_entries((t, Fraction(w, total)) for t, w in zip(terms, raw))


def random_set(store, rng: random.Random, depth: int = 2, max_level: int = 5):
    """A random set expression built from the whole algebra."""
    if depth == 0 or rng.random() < 0.35:
        choice = rng.randrange(5)
        if choice == 0:
            return Level(rng.randint(1, max_level))
        if choice == 1:
            return T(rng.randint(0, 4))
        if choice == 2:
            return Z()
        if choice == 3:
            return Gens()
        return FiniteSet(random_term(store, rng, rng.randint(1, 3)) for _ in range(rng.randint(1, 3)))
    choice = rng.randrange(4)
    if choice == 0:
        return Complement(random_set(store, rng, depth - 1, max_level))
    if choice == 1:
        return Union(*(random_set(store, rng, depth - 1, max_level) for _ in range(2)))
    if choice == 2:
        return Intersection(*(random_set(store, rng, depth - 1, max_level) for _ in range(2)))
    return Product(random_set(store, rng, depth - 1, max_level),
                   random_set(store, rng, depth - 1, max_level))


def all_terms(store, top: int):
    for n in range(1, top + 1):
        yield from store.enumerate_level(n)
