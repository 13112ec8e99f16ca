"""Shared helpers: random words, rational sample points, small type lists."""

from __future__ import annotations

import random
from fractions import Fraction

from braidseed import braid, rootdata

SMALL_TYPES = ("A1", "A2", "A3", "B2", "C2")


def small_data():
    return [rootdata.parse_type(name) for name in SMALL_TYPES]


def random_word(rng: random.Random, datum, max_len: int = 10, min_len: int = 1):
    length = rng.randint(min_len, max_len)
    return tuple(rng.randint(1, datum.rank) for _ in range(length))


def random_reduced_word(rng: random.Random, datum, tries: int = 200):
    """A uniformly sloppy reduced word: random letters, skipping descents."""
    w = rootdata.identity(datum)
    word: list[int] = []
    for _ in range(tries):
        i = rng.randint(1, datum.rank)
        if rootdata.right_ascent(datum, w, i):
            w = w * rootdata.simple_reflection(datum, i)
            word.append(i)
        if rng.random() < 0.2:
            break
    return tuple(word)


def random_point(rng: random.Random, n: int, nonzero: bool = False):
    out = []
    for _ in range(n):
        num = rng.randint(-9, 9)
        if nonzero:
            while num == 0:
                num = rng.randint(-9, 9)
        out.append(Fraction(num, rng.randint(1, 7)))
    return tuple(out)


def longest_word_instances(rng: random.Random, count: int, types=("A2", "A3", "B2")):
    """Random words whose Demazure product is the longest element."""
    out = []
    guard = 0
    while len(out) < count and guard < 50 * count:
        guard += 1
        datum = rootdata.parse_type(rng.choice(types))
        word = random_word(rng, datum, max_len=10, min_len=4)
        if braid.is_woven_to_longest(datum, word):
            out.append((datum, word))
    return out
