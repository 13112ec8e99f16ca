"""
weave: Demazure weaves as move scripts on braid words.

A weave is stored as its top word together with a list of rows, each row
rewriting the current word one step further down:

  - Trivalent(pos): merge the equal letters at pos, pos+1 into one, a
    trivalent vertex of that color;
  - BraidShift(pos): replace the alternating block of length m_ij starting
    at pos by the opposite block, a (2 m_ij)-valent vertex.

Slices (the words between rows) are derived data, so a weave is valid
exactly when every row applies legally.  Every constructor normalizes the
bottom to the canonical reduced word of the Demazure product by appending
vertexless rewrite rows; this makes weaves for the same word comparable and
gives boundary computations a fixed frame.

The builders implement the inductive constructions: scanning the word from
one end, a letter that grows the Demazure product becomes a passive strand
and a letter that stalls is pulled through the bottom and capped with a
trivalent vertex.  Double strings interleave the two scans.
"""

from __future__ import annotations

import dataclasses
import functools
from typing import Iterable, Sequence

from . import braid, rootdata
from .braid import DoubleString
from .rootdata import CartanDatum, Word


@dataclasses.dataclass(frozen=True)
class Trivalent:
    pos: int


@dataclasses.dataclass(frozen=True)
class BraidShift:
    pos: int


Row = Trivalent | BraidShift


@dataclasses.dataclass(frozen=True)
class Vertex:
    """A trivalent vertex: its row, position in the slice above, and color."""

    index: int
    row: int
    pos: int
    color: int


@dataclasses.dataclass(frozen=True)
class Weave:
    datum: CartanDatum
    top: Word
    rows: tuple[Row, ...]

    def __post_init__(self):
        braid.validate_word(self.datum, self.top)


def apply_row(datum: CartanDatum, word: Word, row: Row) -> Word:
    if isinstance(row, Trivalent):
        k = row.pos
        if not 0 <= k < len(word) - 1 or word[k] != word[k + 1]:
            raise ValueError(f"illegal merge at position {k}")
        return word[:k + 1] + word[k + 2:]
    return rootdata.apply_braid_move(datum, word, row.pos)


@functools.cache
def slices(weave: Weave) -> tuple[Word, ...]:
    """All words from top to bottom; entry r is the slice above row r."""
    out = [weave.top]
    for r, row in enumerate(weave.rows):
        try:
            out.append(apply_row(weave.datum, out[-1], row))
        except ValueError as exc:
            raise ValueError(f"illegal merge at row {r}") from exc
    return tuple(out)


@functools.cache
def vertices(weave: Weave) -> tuple[Vertex, ...]:
    """Trivalent vertices in top-to-bottom order."""
    out = []
    cuts = slices(weave)
    for r, row in enumerate(weave.rows):
        if isinstance(row, Trivalent):
            out.append(Vertex(len(out), r, row.pos, cuts[r][row.pos]))
    return tuple(out)


def bottom(weave: Weave) -> Word:
    return slices(weave)[-1]


def validate(weave: Weave) -> list[str]:
    """Diagnostics; an empty list means the weave is well formed."""
    diagnostics: list[str] = []
    word = weave.top
    for r, row in enumerate(weave.rows):
        try:
            word = apply_row(weave.datum, word, row)
        except ValueError:
            diagnostics.append(f"illegal merge at row {r}")
            return diagnostics
    canonical = braid.demazure_product(weave.datum, weave.top)
    if word != canonical:
        diagnostics.append(
            f"bottom {word} is not the canonical reduced word {canonical}")
    return diagnostics


# ---------------------------------------------------------------------------
# Rewrite scripts between reduced words.


def rewrite_script(datum: CartanDatum, source: Word, target: Word) -> tuple[int, ...]:
    """Braid-move positions transforming one reduced word into another.

    Both must be reduced words of the same element.  Works by pulling the
    target letters to the front one at a time.
    """
    if rootdata.weyl_from_word(datum, source) != rootdata.weyl_from_word(datum, target):
        raise ValueError("words are not braid equivalent")
    script: list[int] = []
    current = source
    for idx, t in enumerate(target):
        tail = current[idx:]
        if tail[0] != t:
            for pos in rootdata.bring_to_front(datum, tail, t):
                script.append(idx + pos)
                tail = rootdata.apply_braid_move(datum, tail, pos)
        current = current[:idx] + tail
        assert current[idx] == t
    return tuple(script)


def normalize_bottom(weave: Weave) -> Weave:
    """Append vertexless rewrite rows to reach the canonical bottom word."""
    datum = weave.datum
    current = bottom(weave)
    target = braid.demazure_product(datum, weave.top)
    if current == target:
        return weave
    extra = tuple(BraidShift(pos) for pos in rewrite_script(datum, current, target))
    return Weave(datum, weave.top, weave.rows + extra)


# ---------------------------------------------------------------------------
# Builders.


def build_inductive(datum: CartanDatum, word: Iterable[int],
                    side: str = "right") -> Weave:
    """The inductive weave of a word, scanned from the given side.

    side="right" reads letters left to right: a letter growing the Demazure
    product joins the reduced bottom block, and a stalling letter is met by
    pulling its color to the back of the block and merging.  side="left" is
    the mirror image, scanning right to left.
    """
    word = braid.validate_word(datum, word)
    rows: list[Row] = []
    reduced: Word = ()

    if side == "right":
        for a in word:
            w = rootdata.weyl_from_word(datum, reduced)
            if rootdata.right_ascent(datum, w, a):
                reduced = reduced + (a,)
                continue
            for pos in rootdata.bring_to_back(datum, reduced, a):
                rows.append(BraidShift(pos))
                reduced = rootdata.apply_braid_move(datum, reduced, pos)
            rows.append(Trivalent(len(reduced) - 1))
    elif side == "left":
        for k in reversed(range(len(word))):
            a = word[k]
            w = rootdata.weyl_from_word(datum, reduced)
            if rootdata.left_ascent(datum, w, a):
                reduced = (a,) + reduced
                continue
            for pos in rootdata.bring_to_front(datum, reduced, a):
                rows.append(BraidShift(pos + k + 1))
                reduced = rootdata.apply_braid_move(datum, reduced, pos)
            rows.append(Trivalent(k))
    else:
        raise ValueError("side must be 'left' or 'right'")

    return normalize_bottom(Weave(datum, word, tuple(rows)))


def build_double_inductive(ds: DoubleString) -> Weave:
    """The weave of a double string, growing from the first entry outwards.

    The reduced block floats in the middle of the top word: unprocessed L
    letters hang to its left, unprocessed R letters to its right, and each
    stalled entry caps a strand with a trivalent vertex on its own side.
    """
    datum = ds.datum
    word = ds.word()
    rows: list[Row] = []
    reduced: Word = ()
    offset = sum(1 for _, side in ds.entries if side == "L")

    for i, side in ds.entries:
        if side == "L":
            offset -= 1
            w = rootdata.weyl_from_word(datum, reduced)
            if rootdata.left_ascent(datum, w, i):
                reduced = (i,) + reduced
                continue
            for pos in rootdata.bring_to_front(datum, reduced, i):
                rows.append(BraidShift(pos + offset + 1))
                reduced = rootdata.apply_braid_move(datum, reduced, pos)
            rows.append(Trivalent(offset))
        else:
            w = rootdata.weyl_from_word(datum, reduced)
            if rootdata.right_ascent(datum, w, i):
                reduced = reduced + (i,)
                continue
            for pos in rootdata.bring_to_back(datum, reduced, i):
                rows.append(BraidShift(pos + offset))
                reduced = rootdata.apply_braid_move(datum, reduced, pos)
            rows.append(Trivalent(offset + len(reduced) - 1))

    return normalize_bottom(Weave(datum, word, tuple(rows)))


def double_string_transpose(ds: DoubleString, k: int) -> tuple[DoubleString, dict]:
    """Transpose entries k, k+1 of a double string and classify the effect.

    Returns the new double string and an effect record: kind "none",
    "relabel" (the unique variable of the pair re-attaches to the other
    entry) or "mutation" (the vertex of the L entry mutates); vertex indices
    refer to build_double_inductive order.
    """
    kind = braid.effect_of_transposition(ds, k)
    flags = ds.plus_flags()
    vertex_of_entry = {}
    count = 0
    for t, grew in enumerate(flags):
        if not grew:
            vertex_of_entry[t] = count
            count += 1
    effect: dict = {"kind": kind}
    if kind == "relabel":
        stalled = k if not flags[k] else k + 1
        other = k + 1 if stalled == k else k
        effect |= {"from_entry": stalled, "to_entry": other,
                   "vertex": vertex_of_entry[stalled]}
    elif kind == "mutation":
        (_, sa), (_, sb) = ds.entries[k], ds.entries[k + 1]
        if sa == sb and k == 0:
            sa = "R" if sa == "L" else "L"
        left_entry = k if sa == "L" else k + 1
        effect |= {"entry": left_entry, "vertex": vertex_of_entry[left_entry]}
    return braid.transpose_entries(ds, k), effect


# ---------------------------------------------------------------------------
# Weave mutation.


def mutate_weave(weave: Weave, vertex_index: int) -> Weave:
    """Flip the association of the triple-merge pattern at a vertex.

    The vertex must be the upper one of two consecutive trivalent rows
    merging three equal letters: [T(k), T(k)] <-> [T(k+1), T(k)].  Any
    other configuration raises ValueError("apply equivalences first").
    """
    verts = vertices(weave)
    if not 0 <= vertex_index < len(verts):
        raise ValueError(f"no vertex {vertex_index}")
    v = verts[vertex_index]
    r, p = v.row, v.pos
    rows = weave.rows
    if r + 1 >= len(rows) or not isinstance(rows[r + 1], Trivalent):
        raise ValueError("apply equivalences first")
    q = rows[r + 1].pos
    word = slices(weave)[r]
    if q == p and p + 2 < len(word) and word[p] == word[p + 1] == word[p + 2]:
        new_row: Row = Trivalent(p + 1)
    elif q == p - 1 and p - 1 >= 0 and word[p - 1] == word[p] == word[p + 1]:
        new_row = Trivalent(p - 1)
    else:
        raise ValueError("apply equivalences first")
    return Weave(weave.datum, weave.top,
                 rows[:r] + (new_row,) + rows[r + 1:])


# ---------------------------------------------------------------------------
# Equivalence moves.


@dataclasses.dataclass(frozen=True)
class EquivalenceMove:
    """Replace rows [row, row+count) by an equivalent script.

    kind is one of "vertexless-rewrite" (no vertices on either side),
    "pentagon" (one trivalent rerouted through the other side of a braid
    block), or "strand-through-trivalent" (a passive strand crossing a
    trivalent vertex before rather than after the merge).
    """

    kind: str
    row: int
    count: int
    replacement: tuple[Row, ...]


def _trivalent_count(rows: Iterable[Row]) -> int:
    return sum(1 for row in rows if isinstance(row, Trivalent))


def apply_equivalence(weave: Weave, move: EquivalenceMove) -> Weave:
    if move.kind not in ("vertexless-rewrite", "pentagon",
                         "strand-through-trivalent"):
        raise ValueError(f"unknown equivalence kind {move.kind!r}")
    if not 0 <= move.row <= move.row + move.count <= len(weave.rows):
        raise ValueError("move block out of range")
    block = weave.rows[move.row:move.row + move.count]
    expected = {"vertexless-rewrite": 0, "pentagon": 1,
                "strand-through-trivalent": 1}[move.kind]
    if _trivalent_count(block) != expected or _trivalent_count(move.replacement) != expected:
        raise ValueError(f"{move.kind} must carry {expected} trivalent vertices")

    datum = weave.datum
    cuts = slices(weave)
    word = cuts[move.row]
    for row in move.replacement:
        word = apply_row(datum, word, row)
    if word != cuts[move.row + move.count]:
        raise ValueError("replacement does not reach the same slice")
    return Weave(datum, weave.top,
                 weave.rows[:move.row] + move.replacement
                 + weave.rows[move.row + move.count:])


def pentagon_routes(datum: CartanDatum, word: Word, k: int) -> tuple[tuple[Row, ...], tuple[Row, ...]] | None:
    """The two scripts consuming an alternating block of length m+1 at k.

    On i j i ... of length m_ij + 1 one can braid the first m letters and
    merge the two trailing equal letters, or merge after braiding the last
    m letters and braid again.  Returns (short route, long route).
    """
    if not 0 <= k < len(word) - 1:
        return None
    i, j = word[k], word[k + 1]
    if i == j:
        return None
    m = datum.braid_order(i, j)
    if k + m + 1 > len(word):
        return None
    block = word[k:k + m + 1]
    if block != tuple(i if t % 2 == 0 else j for t in range(m + 1)):
        return None
    route_a = (BraidShift(k), Trivalent(k + m - 1))
    route_b = (BraidShift(k + 1), Trivalent(k), BraidShift(k))
    return route_a, route_b


def strand_routes(datum: CartanDatum, word: Word, k: int) -> list[tuple[tuple[Row, ...], tuple[Row, ...]]]:
    """Scripts moving a passive strand through a trivalent vertex at k.

    Covers a commuting strand on either side of an equal pair, and an
    adjacent (braid order 3) strand crossing before or after the merge.
    Each pair is (cross-after-merge, cross-before-merge).
    """
    out = []
    n = len(word)
    # commuting strand on the right: (i, i, j)
    if k + 2 < n and word[k] == word[k + 1] != word[k + 2] \
            and datum.braid_order(word[k], word[k + 2]) == 2:
        out.append(((Trivalent(k), BraidShift(k)),
                    (BraidShift(k + 1), BraidShift(k), Trivalent(k + 1))))
    # commuting strand on the left: (j, i, i)
    if k + 2 < n and word[k + 1] == word[k + 2] != word[k] \
            and datum.braid_order(word[k], word[k + 1]) == 2:
        out.append(((Trivalent(k + 1), BraidShift(k)),
                    (BraidShift(k), BraidShift(k + 1), Trivalent(k))))
    # adjacent strand crossing rightwards: (i, j, i, i), m_ij = 3
    if k + 3 < n and word[k] == word[k + 2] == word[k + 3] != word[k + 1] \
            and datum.braid_order(word[k], word[k + 1]) == 3:
        out.append(((Trivalent(k + 2), BraidShift(k)),
                    (BraidShift(k), BraidShift(k + 1), Trivalent(k))))
    # adjacent strand crossing leftwards: (i, i, j, i), m_ij = 3
    if k + 3 < n and word[k] == word[k + 1] == word[k + 3] != word[k + 2] \
            and datum.braid_order(word[k], word[k + 2]) == 3:
        out.append(((Trivalent(k), BraidShift(k)),
                    (BraidShift(k + 1), BraidShift(k), Trivalent(k + 2))))
    return out


def find_equivalences(weave: Weave) -> list[EquivalenceMove]:
    """All pentagon and strand moves matching consecutive rows, plus the
    commutations of adjacent independent rows as vertexless rewrites when
    neither row is trivalent."""
    moves: list[EquivalenceMove] = []
    cuts = slices(weave)
    rows = weave.rows
    for r in range(len(rows)):
        word = cuts[r]
        for k in range(len(word)):
            candidates = [("strand-through-trivalent", a, b)
                          for a, b in strand_routes(weave.datum, word, k)]
            routes = pentagon_routes(weave.datum, word, k)
            if routes is not None:
                candidates.append(("pentagon", *routes))
            for kind, route_a, route_b in candidates:
                if rows[r:r + len(route_a)] == route_a:
                    moves.append(EquivalenceMove(kind, r, len(route_a), route_b))
                if rows[r:r + len(route_b)] == route_b:
                    moves.append(EquivalenceMove(kind, r, len(route_b), route_a))
    return moves


# ---------------------------------------------------------------------------
# Passive strand helpers (used by the quasi-cluster comparison).


def shift_rows(rows: Iterable[Row], offset: int) -> tuple[Row, ...]:
    return tuple(type(row)(row.pos + offset) for row in rows)


def prepend_strand(weave: Weave, color: int) -> Weave:
    """Run an untouched strand down the left edge of the weave."""
    return Weave(weave.datum, (color,) + weave.top, shift_rows(weave.rows, 1))


def append_strand(weave: Weave, color: int) -> Weave:
    """Run an untouched strand down the right edge of the weave."""
    return Weave(weave.datum, weave.top + (color,), weave.rows)


def append_rows(weave: Weave, rows: Iterable[Row]) -> Weave:
    return Weave(weave.datum, weave.top, weave.rows + tuple(rows))


# ---------------------------------------------------------------------------
# Unfolding a weave to its simply laced cover.


@dataclasses.dataclass(frozen=True)
class UnfoldedWeave:
    """A folded weave opened up over its cover, with the vertex fibers."""

    weave: Weave
    vertex_fibers: tuple[tuple[int, ...], ...]
    letter_blocks: tuple[tuple[int, ...], ...]


def _block_starts(datum: CartanDatum, word: Word) -> list[int]:
    starts = [0]
    for i in word:
        starts.append(starts[-1] + len(datum.unfolding.fibers[i - 1]))
    return starts


@functools.cache
def _cover_braid_script(datum: CartanDatum, i: int, j: int) -> tuple[int, ...]:
    """Cover braid-move script for the folded block (i j i ...) -> (j i j ...).

    Found by breadth-first search through the cover words; memoized since
    the same two colors recur in every weave of the type.
    """
    unfolding = datum.unfolding
    m = datum.braid_order(i, j)
    source = unfolding.unfold_word(tuple(i if t % 2 == 0 else j for t in range(m)))
    target = unfolding.unfold_word(tuple(j if t % 2 == 0 else i for t in range(m)))
    cover = unfolding.datum
    frontier = {source: ()}
    seen = {source}
    while frontier:
        next_frontier: dict[Word, tuple[int, ...]] = {}
        for word, path in frontier.items():
            if word == target:
                return path
            for pos in range(len(word) - 1):
                try:
                    moved = rootdata.apply_braid_move(cover, word, pos)
                except ValueError:
                    continue
                if moved not in seen:
                    seen.add(moved)
                    next_frontier[moved] = path + (pos,)
        frontier = next_frontier
    raise AssertionError("cover words are not braid equivalent")


def unfold_weave(weave: Weave) -> UnfoldedWeave:
    """Open a folded weave over its simply laced cover.

    Each folded letter becomes its fiber block; a trivalent vertex of a
    doubled color unfolds to one trivalent per fiber letter (interleaved
    with commutations), and a braid row unfolds to the memoized cover
    script.  Simply laced weaves unfold to themselves.
    """
    datum = weave.datum
    if datum.simply_laced():
        fibers = tuple((v.index,) for v in vertices(weave))
        blocks = tuple((k,) for k in range(len(weave.top)))
        return UnfoldedWeave(weave, fibers, blocks)

    unfolding = datum.unfolding
    cover = unfolding.datum
    cover_rows: list[Row] = []
    vertex_fibers: list[tuple[int, ...]] = []
    cover_vertex_count = 0
    word = weave.top

    for row in weave.rows:
        starts = _block_starts(datum, word)
        if isinstance(row, Trivalent):
            fiber = unfolding.fibers[word[row.pos] - 1]
            base = starts[row.pos]
            f = len(fiber)
            # Layout s_1..s_f s_1..s_f; fiber letters commute pairwise, so
            # walk each left copy's partner across and merge.
            created = []
            letters = list(fiber) + list(fiber)
            for t in range(f):
                # the partner of position t sits at t + (f - t) + t = f + t,
                # but earlier merges have shortened the tail; recompute.
                partner = letters.index(fiber[t], t + 1)
                for p in range(partner - 1, t, -1):
                    cover_rows.append(BraidShift(base + p))
                    letters[p], letters[p + 1] = letters[p + 1], letters[p]
                cover_rows.append(Trivalent(base + t))
                letters.pop(t + 1)
                created.append(cover_vertex_count)
                cover_vertex_count += 1
            vertex_fibers.append(tuple(created))
        else:
            i, j = word[row.pos], word[row.pos + 1]
            base = starts[row.pos]
            for pos in _cover_braid_script(datum, i, j):
                cover_rows.append(BraidShift(base + pos))
        word = apply_row(datum, word, row)

    cover_weave = Weave(cover, unfolding.unfold_word(weave.top), tuple(cover_rows))
    starts = _block_starts(datum, weave.top)
    blocks = tuple(tuple(range(starts[k], starts[k + 1]))
                   for k in range(len(weave.top)))
    return UnfoldedWeave(cover_weave, tuple(vertex_fibers), blocks)


# ---------------------------------------------------------------------------
# Serialization.


def weave_to_dict(weave: Weave) -> dict:
    cuts = slices(weave)
    rows = []
    for r, row in enumerate(weave.rows):
        kind = "trivalent" if isinstance(row, Trivalent) else "braid"
        rows.append({"kind": kind, "position": row.pos,
                     "color": cuts[r][row.pos]})
    return {
        "cartan": {"letter": weave.datum.letter, "rank": weave.datum.rank},
        "top": list(weave.top),
        "rows": rows,
    }


def weave_from_dict(data: dict) -> Weave:
    datum = rootdata.make_cartan(data["cartan"]["letter"], data["cartan"]["rank"])
    rows: list[Row] = []
    for entry in data["rows"]:
        if entry["kind"] == "trivalent":
            rows.append(Trivalent(entry["position"]))
        elif entry["kind"] == "braid":
            rows.append(BraidShift(entry["position"]))
        else:
            raise ValueError(f"unknown row kind {entry['kind']!r}")
    weave = Weave(datum, tuple(data["top"]), tuple(rows))
    cuts = slices(weave)
    for r, entry in enumerate(data["rows"]):
        if cuts[r][entry["position"]] != entry["color"]:
            raise ValueError(f"row {r} color does not match its slice")
    return weave
