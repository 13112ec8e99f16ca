"""
rootdata: Cartan data, Weyl group elements, and reduced-word algorithms.

A Cartan datum is a (possibly non-symmetric) generalized Cartan matrix of
finite type together with the symmetrizers d_i, satisfying d_i a_ij = d_j a_ji.
Weyl group elements act on the root lattice in the simple-root basis, so an
element is stored as an integer matrix whose j-th column is the image of α_j.
This keeps every computation exact and makes hashing and equality trivial.

Non-simply-laced types are constructed by folding a simply laced cover along
a diagram automorphism: each node of the folded diagram corresponds to a
fiber of nodes in the cover, and its symmetrizer d_i is the fiber size.  The
cover and the fibers are retained on the datum since several downstream
computations (weights through high-valence vertices, matrix realizations)
are performed upstairs and then restricted.

Conventions, fixed once and used everywhere:
  - nodes are numbered 1..rank; words are tuples of node numbers;
  - s_i(α_j) = α_j - a_ij α_i, so the reflection matrix is S_kj = δ_kj - δ_ki a_ij;
  - coroots live in the coroot lattice with s_i(α_j^) = α_j^ - a_ji α_i^;
  - the pairing is (α_k, α_l^) = a_lk, hence (α_i, α_i^) = 2.
"""

from __future__ import annotations

import dataclasses
import functools
from fractions import Fraction
from typing import Iterable, Iterator

Matrix = tuple[tuple[int, ...], ...]
Coords = tuple[int, ...]
Word = tuple[int, ...]

# Braid order m_ij as a function of a_ij * a_ji.
_BRAID_ORDER = {0: 2, 1: 3, 2: 4, 3: 6}


@dataclasses.dataclass(frozen=True)
class Unfolding:
    """A simply laced cover together with the node fibers of the folding.

    fibers[i-1] lists the cover nodes lying over folded node i.  Fibers are
    pairwise non-adjacent in the cover, so the letters inside one fiber
    commute and a folded letter unfolds to the fiber in ascending order.
    """

    datum: "CartanDatum"
    fibers: tuple[tuple[int, ...], ...]

    def unfold_letter(self, i: int) -> tuple[int, ...]:
        return self.fibers[i - 1]

    def unfold_word(self, word: Iterable[int]) -> Word:
        out: list[int] = []
        for i in word:
            out.extend(self.fibers[i - 1])
        return tuple(out)


@dataclasses.dataclass(frozen=True)
class CartanDatum:
    """A finite-type Cartan matrix with symmetrizers and optional cover."""

    letter: str
    rank: int
    cartan: Matrix
    multiplier: tuple[int, ...]
    unfolding: Unfolding | None = None

    def a(self, i: int, j: int) -> int:
        return self.cartan[i - 1][j - 1]

    def d(self, i: int) -> int:
        return self.multiplier[i - 1]

    def braid_order(self, i: int, j: int) -> int:
        """Order m_ij of s_i s_j, one of 2, 3, 4, 6 for i != j."""
        if i == j:
            raise ValueError("braid order is only defined for distinct nodes")
        return _BRAID_ORDER[self.a(i, j) * self.a(j, i)]

    def nodes(self) -> range:
        return range(1, self.rank + 1)

    def simply_laced(self) -> bool:
        return all(m == 1 for m in self.multiplier)

    @property
    def name(self) -> str:
        return f"{self.letter}{self.rank}"


def _chain_cartan(rank: int, edges: Iterable[tuple[int, int]]) -> Matrix:
    """Symmetric Cartan matrix of a simply laced diagram given by its edges."""
    a = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
    for i, j in edges:
        a[i - 1][j - 1] = a[j - 1][i - 1] = -1
    return tuple(tuple(row) for row in a)


def _simply_laced(letter: str, rank: int, edges: list[tuple[int, int]]) -> CartanDatum:
    return CartanDatum(letter, rank, _chain_cartan(rank, edges), (1,) * rank)


def _folded(letter: str, rank: int, cover: CartanDatum,
            fibers: list[tuple[int, ...]]) -> CartanDatum:
    # Folded Cartan entry: fix any node s over i and sum the cover row over
    # the fiber of j.  All choices of s agree because the automorphism group
    # acts transitively on each fiber.
    a = []
    for fi in fibers:
        s = fi[0]
        a.append(tuple(sum(cover.a(s, t) for t in fj) for fj in fibers))
    mult = tuple(len(fi) for fi in fibers)
    return CartanDatum(letter, rank, tuple(a), mult,
                       Unfolding(cover, tuple(fibers)))


@functools.cache
def make_cartan(letter: str, rank: int) -> CartanDatum:
    """Construct the Cartan datum of a simple type, e.g. make_cartan("A", 3).

    Folded types carry their simply laced cover:
      C_n (and B_2 = C_2) folds A_{2n-1} along i <-> 2n-i,
      B_n (n >= 3) folds D_{n+1} with the doubled node over the fork tips,
      G_2 folds D_4 along triality, F_4 folds E_6.
    In types B and C the doubled nodes sit at the start of the numbering, so
    the multipliers read (2,...,2,1) for C_n and (2,1,...,1) for B_n.
    """
    letter = letter.upper()
    if rank < 1:
        raise ValueError("rank must be positive")

    if letter == "A":
        return _simply_laced("A", rank, [(i, i + 1) for i in range(1, rank)])

    if letter == "D":
        if rank < 3:
            raise ValueError("type D needs rank >= 3")
        # Chain 1..rank-2 with fork tips rank-1 and rank on node rank-2.
        edges = [(i, i + 1) for i in range(1, rank - 2)]
        edges += [(rank - 2, rank - 1), (rank - 2, rank)]
        return _simply_laced("D", rank, edges)

    if letter == "E":
        if rank not in (6, 7, 8):
            raise ValueError("type E needs rank 6, 7 or 8")
        edges = [(1, 3), (3, 4), (4, 5), (2, 4)]
        edges += [(i, i + 1) for i in range(5, rank)]
        return _simply_laced("E", rank, edges)

    if letter in ("B", "C"):
        if rank < 2:
            raise ValueError("types B and C need rank >= 2")
        if letter == "C" or rank == 2:
            cover = make_cartan("A", 2 * rank - 1)
            fibers = [(k, 2 * rank - k) for k in range(1, rank)] + [(rank,)]
            return _folded(letter, rank, cover, fibers)
        cover = make_cartan("D", rank + 1)
        fibers = [(rank, rank + 1)] + [(rank + 1 - k,) for k in range(2, rank + 1)]
        return _folded("B", rank, cover, fibers)

    if letter == "G":
        if rank != 2:
            raise ValueError("type G needs rank 2")
        return _folded("G", 2, make_cartan("D", 4), [(1, 3, 4), (2,)])

    if letter == "F":
        if rank != 4:
            raise ValueError("type F needs rank 4")
        return _folded("F", 4, make_cartan("E", 6), [(1, 6), (3, 5), (4,), (2,)])

    raise ValueError(f"unknown type {letter}{rank}")


def parse_type(name: str) -> CartanDatum:
    """Parse a type string such as "A3" or "b2" (case-insensitive)."""
    name = name.strip()
    if len(name) < 2 or not name[1:].isdigit():
        raise ValueError(f"malformed type string {name!r}")
    return make_cartan(name[0].upper(), int(name[1:]))


# ---------------------------------------------------------------------------
# Weyl group elements.


@dataclasses.dataclass(frozen=True)
class WeylElement:
    """A Weyl group element as its action matrix on the root lattice."""

    datum: CartanDatum
    mat: Matrix

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        assert self.datum is other.datum
        return WeylElement(self.datum, _mat_mul(self.mat, other.mat))

    def inv(self) -> "WeylElement":
        return WeylElement(self.datum, _mat_inv(self.mat))

    def root(self, coords: Coords) -> Coords:
        """Image of a root written in simple-root coordinates."""
        return _mat_apply(self.mat, coords)

    def coroot(self, coords: Coords) -> Coords:
        """Image of a coroot; the coroot action matrix is D M D^-1."""
        d = self.datum.multiplier
        n = self.datum.rank
        out = []
        for k in range(n):
            # d_k M_kl / d_l is integral on coroot images as a whole sum,
            # though not term by term, hence the Fraction detour.
            num = sum(d[k] * self.mat[k][l] * Fraction(coords[l], d[l]) for l in range(n))
            assert num.denominator == 1
            out.append(int(num))
        return tuple(out)

    def is_identity(self) -> bool:
        return self.mat == _identity(self.datum.rank)

    def length(self) -> int:
        return _length(self.datum, self.mat)


def _identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def _mat_apply(a: Matrix, v: Coords) -> Coords:
    n = len(a)
    return tuple(sum(a[i][k] * v[k] for k in range(n)) for i in range(n))


def _mat_inv(a: Matrix) -> Matrix:
    """Inverse of a unimodular integer matrix, via exact elimination."""
    n = len(a)
    m = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    out = tuple(tuple(int(m[i][n + j]) for j in range(n)) for i in range(n))
    return out


@functools.cache
def identity(datum: CartanDatum) -> WeylElement:
    return WeylElement(datum, _identity(datum.rank))


@functools.cache
def simple_reflection(datum: CartanDatum, i: int) -> WeylElement:
    n = datum.rank
    mat = tuple(
        tuple((1 if k == j else 0) - (datum.a(i, j) if k == i else 0)
              for j in range(1, n + 1))
        for k in range(1, n + 1)
    )
    return WeylElement(datum, mat)


@functools.cache
def positive_roots(datum: CartanDatum) -> tuple[Coords, ...]:
    """All positive roots in simple-root coordinates, simple roots first."""
    simples = [tuple(int(k == i) for k in range(datum.rank)) for i in range(datum.rank)]
    seen = set(simples)
    queue = list(simples)
    while queue:
        root = queue.pop()
        for i in datum.nodes():
            image = simple_reflection(datum, i).root(root)
            if all(c >= 0 for c in image) and image not in seen:
                seen.add(image)
                queue.append(image)
    return tuple(sorted(seen, key=lambda r: (sum(r), r)))


def _is_negative(coords: Coords) -> bool:
    return all(c <= 0 for c in coords) and any(c < 0 for c in coords)


@functools.cache
def _length(datum: CartanDatum, mat: Matrix) -> int:
    w = WeylElement(datum, mat)
    return sum(1 for root in positive_roots(datum) if _is_negative(w.root(root)))


def simple_root(datum: CartanDatum, i: int) -> Coords:
    return tuple(int(k == i) for k in range(1, datum.rank + 1))


def weyl_from_word(datum: CartanDatum, word: Iterable[int]) -> WeylElement:
    w = identity(datum)
    for i in word:
        w = w * simple_reflection(datum, i)
    return w


def is_reduced(datum: CartanDatum, word: Word) -> bool:
    return weyl_from_word(datum, word).length() == len(word)


def right_ascent(datum: CartanDatum, w: WeylElement, i: int) -> bool:
    """Whether l(w s_i) = l(w) + 1, i.e. w(α_i) is positive."""
    return not _is_negative(w.root(simple_root(datum, i)))


def left_ascent(datum: CartanDatum, w: WeylElement, i: int) -> bool:
    """Whether l(s_i w) = l(w) + 1, i.e. w^-1(α_i) is positive."""
    return not _is_negative(w.inv().root(simple_root(datum, i)))


def demazure_step(datum: CartanDatum, w: WeylElement, i: int,
                  side: str = "right") -> tuple[WeylElement, bool]:
    """One step of the Demazure product: w * s_i if that grows, else w.

    Returns the new element and whether the length grew.  side="left"
    multiplies by s_i on the left instead.
    """
    s = simple_reflection(datum, i)
    if side == "right":
        if right_ascent(datum, w, i):
            return w * s, True
        return w, False
    if side == "left":
        if left_ascent(datum, w, i):
            return s * w, True
        return w, False
    raise ValueError("side must be 'left' or 'right'")


def root_sequence(datum: CartanDatum, word: Word) -> tuple[tuple[Coords, Coords], ...]:
    """The roots ρ_k = s_{i_1}...s_{i_{k-1}}(α_{i_k}) with their coroots.

    For a reduced word these are the inversions of the product, each listed
    exactly once.  The coroot coordinates are returned alongside since the
    intersection pairings need both.
    """
    out = []
    w = identity(datum)
    for i in word:
        root = w.root(simple_root(datum, i))
        coroot = w.coroot(simple_root(datum, i))
        out.append((root, coroot))
        w = w * simple_reflection(datum, i)
    return tuple(out)


def root_sequence_opposite(datum: CartanDatum, word: Word) -> tuple[tuple[Coords, Coords], ...]:
    """The right-to-left variant ρ'_k = s_{i_l}...s_{i_{k+1}}(α_{i_k})."""
    out: list[tuple[Coords, Coords]] = []
    w = identity(datum)
    for i in reversed(word):
        root = w.root(simple_root(datum, i))
        coroot = w.coroot(simple_root(datum, i))
        out.append((root, coroot))
        w = w * simple_reflection(datum, i)
    return tuple(reversed(out))


def pairing(datum: CartanDatum, root: Coords, coroot: Coords) -> int:
    """(ρ, ρ'^) expanded bilinearly over (α_k, α_l^) = a_lk."""
    n = datum.rank
    return sum(root[k] * coroot[l] * datum.cartan[l][k]
               for k in range(n) for l in range(n))


@functools.cache
def longest_element(datum: CartanDatum) -> tuple[WeylElement, Word]:
    """The longest element w_0 with a reduced word built by greedy ascent.

    At each step the smallest node whose reflection still increases the
    length is appended, which makes the word canonical.
    """
    w = identity(datum)
    word: list[int] = []
    grew = True
    while grew:
        grew = False
        for i in datum.nodes():
            if right_ascent(datum, w, i):
                w = w * simple_reflection(datum, i)
                word.append(i)
                grew = True
                break
    return w, tuple(word)


@functools.cache
def star(datum: CartanDatum, i: int) -> int:
    """The involution i* defined by w_0(α_i) = -α_{i*}."""
    w0, _ = longest_element(datum)
    image = w0.root(simple_root(datum, i))
    negated = tuple(-c for c in image)
    for j in datum.nodes():
        if negated == simple_root(datum, j):
            return j
    raise AssertionError("w_0 does not permute the simple roots")


def canonical_word(datum: CartanDatum, w: WeylElement) -> Word:
    """Lexicographically smallest reduced word of w, by greedy left descent."""
    word: list[int] = []
    while not w.is_identity():
        for i in datum.nodes():
            if not left_ascent(datum, w, i):
                word.append(i)
                w = simple_reflection(datum, i) * w
                break
        else:
            raise AssertionError("non-identity element with no descent")
    return tuple(word)


def bruhat_leq(datum: CartanDatum, v: WeylElement, w: WeylElement) -> bool:
    """Bruhat order test via greedy subword extraction from any reduced word."""
    u = v
    for j in reversed(canonical_word(datum, w)):
        if not right_ascent(datum, u, j):
            u = u * simple_reflection(datum, j)
    return u.is_identity()


# ---------------------------------------------------------------------------
# Positional braid moves on words.


def apply_braid_move(datum: CartanDatum, word: Word, pos: int) -> Word:
    """Replace the alternating block of length m_ij starting at pos.

    The block (i, j, i, ...) of length m = m_ij becomes (j, i, j, ...).
    Raises if the block is absent, too short, or not alternating.
    """
    if not 0 <= pos < len(word) - 1:
        raise ValueError(f"no braid move at position {pos}")
    i, j = word[pos], word[pos + 1]
    if i == j:
        raise ValueError(f"equal letters at position {pos}, not a braid move")
    m = datum.braid_order(i, j)
    if pos + m > len(word):
        raise ValueError(f"block at position {pos} does not fit")
    block = word[pos:pos + m]
    expected = tuple(i if k % 2 == 0 else j for k in range(m))
    if block != expected:
        raise ValueError(f"block at position {pos} is not alternating")
    replacement = tuple(j if k % 2 == 0 else i for k in range(m))
    return word[:pos] + replacement + word[pos + m:]


def apply_braid_moves(datum: CartanDatum, word: Word, moves: Iterable[int]) -> Word:
    for pos in moves:
        word = apply_braid_move(datum, word, pos)
    return word


def _inversion_position(datum: CartanDatum, word: Word, root: Coords) -> int | None:
    for k, (rho, _) in enumerate(root_sequence(datum, word)):
        if rho == root:
            return k
    return None


def bring_to_front(datum: CartanDatum, word: Word, i: int) -> tuple[int, ...]:
    """Braid moves turning a reduced word into one that starts with i.

    The strand whose inversion root is α_i is pulled leftwards: a commuting
    neighbour is crossed by a length-2 move, and a non-commuting neighbour
    is always reachable through a full alternating block, whose move throws
    the strand further left.  Raises ValueError("letter not removable on the
    left") when l(s_i w) > l(w), i.e. no reduced word of w starts with i.
    """
    if not is_reduced(datum, word):
        raise ValueError("word is not reduced")
    w = weyl_from_word(datum, word)
    if left_ascent(datum, w, i):
        raise ValueError("letter not removable on the left")

    alpha = simple_root(datum, i)
    moves: list[int] = []
    for _ in range((len(word) + 2) ** 3):
        t = _inversion_position(datum, word, alpha)
        assert t is not None
        if t == 0:
            return tuple(moves)
        a, j = word[t], word[t - 1]
        m = datum.braid_order(a, j)
        if m == 2:
            pos = t - 1
        else:
            # The strand crosses through a full alternating block ending at
            # its position.  If the block is not yet spelled out, rearrange
            # the prefix first: the needed letters are always removable on
            # the right (a simple root is never a sum of two positive ones).
            pattern = tuple(a if (t - q) % 2 == 0 else j
                            for q in range(t - m + 1, t + 1))
            if t - m + 1 >= 0 and word[t - m + 1:t + 1] == pattern:
                pos = t - m + 1
            else:
                for p in _ensure_suffix(datum, word[:t - 1], pattern[:-2]):
                    word = apply_braid_move(datum, word, p)
                    moves.append(p)
                continue
        word = apply_braid_move(datum, word, pos)
        moves.append(pos)
        assert _inversion_position(datum, word, alpha) < t
    raise AssertionError("strand pulling failed to terminate")


def _ensure_suffix(datum: CartanDatum, word: Word, pattern: Word) -> tuple[int, ...]:
    """Braid moves making a reduced word end with the given letters."""
    if not pattern or word[len(word) - len(pattern):] == pattern:
        return ()
    moves = list(bring_to_back(datum, word, pattern[-1]))
    for pos in moves:
        word = apply_braid_move(datum, word, pos)
    moves.extend(_ensure_suffix(datum, word[:-1], pattern[:-1]))
    return tuple(moves)


def bring_to_back(datum: CartanDatum, word: Word, i: int) -> tuple[int, ...]:
    """Mirror of bring_to_front: make the reduced word end with i.

    Implemented on the reversed word, with each move position mirrored back.
    Raises ValueError("letter not removable on the right") when
    l(w s_i) > l(w).
    """
    w = weyl_from_word(datum, word)
    if right_ascent(datum, w, i):
        raise ValueError("letter not removable on the right")
    reversed_word = tuple(reversed(word))
    moves = bring_to_front(datum, reversed_word, i)
    out: list[int] = []
    current = reversed_word
    for pos in moves:
        a, b = current[pos], current[pos + 1]
        m = datum.braid_order(a, b)
        out.append(len(word) - pos - m)
        current = apply_braid_move(datum, current, pos)
    return tuple(out)
