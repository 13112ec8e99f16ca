"""
braid: positive braid words, Demazure products, and double strings.

A positive braid word is a tuple of node numbers of a Cartan datum.  The
Demazure product δ(β) multiplies the letters in the 0-Hecke monoid: a letter
that would shorten the product is absorbed instead.  Words here are plain
data; the geometry lives in the weave and seed modules.

A double string is a braid word together with a growth recipe: each entry
(i, side) prepends (side L) or appends (side R) the letter i.  Replaying the
entries reconstructs the word, and each entry is marked plus when it grows
the running Demazure product on its side.  Transposing adjacent entries on
opposite sides is the elementary re-ordering of the recipe; its effect on
the associated seed is classified by effect_of_transposition.
"""

from __future__ import annotations

import dataclasses
from typing import Iterable, Literal

from . import rootdata
from .rootdata import CartanDatum, Word

Side = Literal["L", "R"]


def parse_word(text: str) -> Word:
    """Parse "1,1,2" or "1 1 2" into a word tuple."""
    parts = text.replace(",", " ").split()
    if not parts:
        raise ValueError("empty braid word")
    return tuple(int(p) for p in parts)


def validate_word(datum: CartanDatum, word: Iterable[int]) -> Word:
    word = tuple(word)
    for i in word:
        if not 1 <= i <= datum.rank:
            raise ValueError(f"letter {i} out of range for {datum.name}")
    return word


def demazure_product(datum: CartanDatum, word: Iterable[int]) -> Word:
    """Canonical reduced word of the Demazure product δ(β)."""
    w = rootdata.identity(datum)
    for i in word:
        w, _ = rootdata.demazure_step(datum, w, i)
    return rootdata.canonical_word(datum, w)


def demazure_element(datum: CartanDatum, word: Iterable[int]) -> rootdata.WeylElement:
    w = rootdata.identity(datum)
    for i in word:
        w, _ = rootdata.demazure_step(datum, w, i)
    return w


def is_woven_to_longest(datum: CartanDatum, word: Word) -> bool:
    """Whether δ(β) is the longest element."""
    w0, _ = rootdata.longest_element(datum)
    return demazure_element(datum, word) == w0


def rotate_word(datum: CartanDatum, word: Word) -> Word:
    """Move the first letter to the back, starred: σ_i β' -> β' σ_{i*}.

    Only meaningful when δ(β) = w_0, which makes the two braid varieties
    canonically isomorphic; we require it.
    """
    if not word:
        raise ValueError("cannot rotate the empty word")
    if not is_woven_to_longest(datum, word):
        raise ValueError("rotation requires the Demazure product to be w_0")
    return word[1:] + (rootdata.star(datum, word[0]),)


def richardson_word(datum: CartanDatum, v_word: Word, w_word: Word) -> Word:
    """The braid word β(w) β(v^-1 w_0) presenting an open Richardson variety.

    Both inputs must be reduced.  Raises ValueError("empty Richardson
    variety") unless v <= w in Bruhat order.
    """
    for name, part in (("v", v_word), ("w", w_word)):
        if not rootdata.is_reduced(datum, part):
            raise ValueError(f"{name} word is not reduced")
    v = rootdata.weyl_from_word(datum, v_word)
    w = rootdata.weyl_from_word(datum, w_word)
    if not rootdata.bruhat_leq(datum, v, w):
        raise ValueError("empty Richardson variety")
    w0, _ = rootdata.longest_element(datum)
    tail = rootdata.canonical_word(datum, v.inv() * w0)
    return tuple(w_word) + tail


@dataclasses.dataclass(frozen=True)
class DoubleString:
    """A braid word presented as a sequence of left/right growth entries."""

    datum: CartanDatum
    entries: tuple[tuple[int, Side], ...]

    def __post_init__(self):
        for i, side in self.entries:
            if not 1 <= i <= self.datum.rank:
                raise ValueError(f"letter {i} out of range for {self.datum.name}")
            if side not in ("L", "R"):
                raise ValueError(f"bad side {side!r}")

    def word(self) -> Word:
        out: list[int] = []
        for i, side in self.entries:
            if side == "L":
                out.insert(0, i)
            else:
                out.append(i)
        return tuple(out)

    def plus_flags(self) -> tuple[bool, ...]:
        """Whether each entry grows the Demazure product on its side.

        The first entry always grows; its side is immaterial.
        """
        flags = []
        u = rootdata.identity(self.datum)
        for i, side in self.entries:
            u, grew = rootdata.demazure_step(
                self.datum, u, i, side="left" if side == "L" else "right")
            flags.append(grew)
        return tuple(flags)


def double_string_from(datum: CartanDatum, word: Word,
                       policy: str = "all-left",
                       entries: Iterable[tuple[int, Side]] | None = None) -> DoubleString:
    """Present a word as a double string.

    all-left reads the word from its last letter, so every entry prepends;
    all-right appends in reading order; explicit takes entries as given and
    checks they reproduce the word.
    """
    word = validate_word(datum, word)
    if policy == "all-left":
        ds = DoubleString(datum, tuple((i, "L") for i in reversed(word)))
    elif policy == "all-right":
        ds = DoubleString(datum, tuple((i, "R") for i in word))
    elif policy == "explicit":
        if entries is None:
            raise ValueError("explicit policy needs entries")
        ds = DoubleString(datum, tuple(entries))
    else:
        raise ValueError(f"unknown policy {policy!r}")
    if ds.word() != word:
        raise ValueError("entries do not reproduce the word")
    return ds


def effect_of_transposition(ds: DoubleString, k: int) -> str:
    """Classify the seed effect of transposing entries k and k+1 (0-based).

    The entries must lie on opposite sides; as a special case the side of
    the very first entry may be flipped to oppose its neighbour, which
    changes nothing.  Writing u for the Demazure element of the entries
    before the pair, i for the L letter and j for the R letter:

      - both grow jointly:                            none
      - each grows alone but not jointly:             relabel
      - exactly one grows:                            none
      - neither grows, l(s_i u s_j) = l(u) - 2:       none
      - neither grows, l(s_i u s_j) = l(u):           mutation
    """
    if not 0 <= k < len(ds.entries) - 1:
        raise ValueError(f"no adjacent pair at {k}")
    (a, sa), (b, sb) = ds.entries[k], ds.entries[k + 1]
    if sa == sb:
        if k != 0:
            raise ValueError("entries are on the same side")
        sa = "R" if sa == "L" else "L"
    i, j = (a, b) if sa == "L" else (b, a)

    datum = ds.datum
    u = rootdata.identity(datum)
    for letter, side in ds.entries[:k]:
        u, _ = rootdata.demazure_step(datum, u, letter,
                                      side="left" if side == "L" else "right")
    si = rootdata.simple_reflection(datum, i)
    sj = rootdata.simple_reflection(datum, j)
    left_grows = rootdata.left_ascent(datum, u, i)
    right_grows = rootdata.right_ascent(datum, u, j)
    joint = (si * u * sj).length()

    if left_grows and right_grows:
        return "none" if joint == u.length() + 2 else "relabel"
    if left_grows != right_grows:
        return "none"
    return "mutation" if joint == u.length() else "none"


def transpose_entries(ds: DoubleString, k: int) -> DoubleString:
    """Swap entries k and k+1 (with the k = 0 side-flip convention)."""
    if not 0 <= k < len(ds.entries) - 1:
        raise ValueError(f"no adjacent pair at {k}")
    (a, sa), (b, sb) = ds.entries[k], ds.entries[k + 1]
    if sa == sb:
        if k != 0:
            raise ValueError("entries are on the same side")
        sa = "R" if sa == "L" else "L"
    entries = list(ds.entries)
    entries[k], entries[k + 1] = (b, sb), (a, sa)
    return DoubleString(ds.datum, tuple(entries))
