"""
seed: intersection forms and the cluster seed of a weave.

The exchange matrix pairs the dual cycle of one trivalent vertex with the
cycle of another: a sum of local intersection numbers at every vertex of
the weave plus a boundary term along the southern edge.  Local numbers are
small determinants at trivalent and 6-valent vertices; at 8- and 12-valent
vertices they are differences of boundary intersections restricted to the
vertex legs.  The resulting matrix is skew-symmetrizable by the vertex
multipliers d, integral outside frozen pairs, and exact (fractions with
denominator dividing 2).

The same module holds the seed-level operations: mutation, the Poisson
p-matrix (whose rows are the X-variable exponents), Langlands duality, the
GSV coefficient matrix, the triangulation quiver of a word, and deletion of
the extra frozen vertex when a word loses its first letter.
"""

from __future__ import annotations

import dataclasses
from fractions import Fraction
from typing import Sequence

from . import braid, cycles, rootdata, weave as weave_mod
from .rootdata import CartanDatum, Word
from .weave import BraidShift, Trivalent, Weave

RootVector = tuple[Fraction, ...]
Matrix = tuple[tuple[Fraction, ...], ...]


@dataclasses.dataclass(frozen=True)
class SeedVertex:
    index: int
    color: int
    frozen: bool
    d: int


@dataclasses.dataclass(frozen=True)
class Seed:
    """An exchange matrix with its vertex data; variables are optional."""

    datum: CartanDatum
    vertices: tuple[SeedVertex, ...]
    epsilon: Matrix
    theta: tuple[RootVector | None, ...]
    theta_dual: tuple[RootVector | None, ...]
    variables: tuple | None = None

    def d(self) -> tuple[int, ...]:
        return tuple(v.d for v in self.vertices)

    def mutable_indices(self) -> tuple[int, ...]:
        return tuple(v.index for v in self.vertices if not v.frozen)

    def frozen_indices(self) -> tuple[int, ...]:
        return tuple(v.index for v in self.vertices if v.frozen)


def _pairing(datum: CartanDatum, root: Sequence, coroot: Sequence) -> Fraction:
    """(rho, rho_check) with both written over the simple (co)roots."""
    total = Fraction(0)
    for k in range(datum.rank):
        if not root[k]:
            continue
        for l in range(datum.rank):
            if coroot[l]:
                total += Fraction(root[k]) * Fraction(coroot[l]) * datum.a(l + 1, k + 1)
    return total


def _det3(row_a, row_b) -> Fraction:
    a1, a2, a3 = row_a
    b1, b2, b3 = row_b
    return (Fraction(a2) * b3 - Fraction(a3) * b2) \
        - (Fraction(a1) * b3 - Fraction(a3) * b1) \
        + (Fraction(a1) * b2 - Fraction(a2) * b1)


def _legs(v) -> tuple[int, int]:
    if hasattr(v, "row"):
        return v.row, v.pos
    return v


def local_intersection_3(cA_dual, cB, vertex) -> Fraction:
    """Intersection at a trivalent vertex; the dual cycle rides the middle
    row of the determinant with its outgoing weight in the middle slot."""
    r, k = _legs(vertex)
    row_a = (cA_dual[r][k], cA_dual[r + 1][k], cA_dual[r][k + 1])
    row_b = (cB[r][k], cB[r + 1][k], cB[r][k + 1])
    return _det3(row_a, row_b)


def local_intersection_6(cA_dual, cB, vertex) -> Fraction:
    """Intersection at a 6-valent vertex: half the difference of the top
    and bottom leg determinants."""
    r, k = _legs(vertex)
    top = _det3(cA_dual[r][k:k + 3], cB[r][k:k + 3])
    bot = _det3(cA_dual[r + 1][k:k + 3], cB[r + 1][k:k + 3])
    return (top - bot) / 2


def boundary_intersection(datum: CartanDatum, word: Word,
                          cA_dual_weights: Sequence, cB_weights: Sequence) -> Fraction:
    """Half the signed sum of weight products against the root sequence.

    The dual side contributes its coroot and the plain side its root, so
    each term is c_i c'_j (rho_j, rho_i_check); for a symmetric Cartan
    matrix the slot order is invisible.
    """
    if len(cA_dual_weights) != len(word) or len(cB_weights) != len(word):
        raise ValueError("weight lists do not match the word")
    seq = rootdata.root_sequence(datum, word)
    total = Fraction(0)
    for i, ci in enumerate(cA_dual_weights):
        if not ci:
            continue
        for j, cj in enumerate(cB_weights):
            if not cj or i == j:
                continue
            sign = 1 if j > i else -1
            total += sign * Fraction(ci) * Fraction(cj) * _pairing(datum, seq[j][0], seq[i][1])
    return total / 2


def local_intersection_poly(weave: Weave, vertex, cA_dual, cB) -> Fraction:
    """Intersection at a (2m)-valent vertex: the boundary intersection of
    the top legs minus that of the bottom legs, each as a standalone word."""
    r, k = _legs(vertex)
    cuts = weave_mod.slices(weave)
    i, j = cuts[r][k], cuts[r][k + 1]
    m = weave.datum.braid_order(i, j)
    top_word, bot_word = cuts[r][k:k + m], cuts[r + 1][k:k + m]
    top = boundary_intersection(weave.datum, top_word,
                                cA_dual[r][k:k + m], cB[r][k:k + m])
    bot = boundary_intersection(weave.datum, bot_word,
                                cA_dual[r + 1][k:k + m], cB[r + 1][k:k + m])
    return top - bot


def exchange_matrix(weave: Weave) -> Seed:
    """The seed of a weave: local cycle intersections plus the boundary term."""
    datum = weave.datum
    verts = weave_mod.vertices(weave)
    n = len(verts)
    plain = [cycles.vertex_cycle(weave, k) for k in range(n)]
    dual = [cycles.dual_cycle(weave, k) for k in range(n)]
    cuts = weave_mod.slices(weave)
    bottom = cuts[-1]

    eps = [[Fraction(0)] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            total = Fraction(0)
            for r, row in enumerate(weave.rows):
                if isinstance(row, Trivalent):
                    total += local_intersection_3(dual[a], plain[b], (r, row.pos))
                else:
                    i, j = cuts[r][row.pos], cuts[r][row.pos + 1]
                    if datum.braid_order(i, j) == 2:
                        continue
                    total += local_intersection_poly(weave, (r, row.pos),
                                                     dual[a], plain[b])
            total += boundary_intersection(datum, bottom,
                                           dual[a][-1], plain[b][-1])
            eps[a][b] = total

    vertices = []
    theta = []
    theta_dual = []
    for k, v in enumerate(verts):
        frozen = cycles.is_frozen(weave, k)
        vertices.append(SeedVertex(k, v.color, frozen, datum.d(v.color)))
        th, thd = cycles.theta_vectors(weave, k)
        theta.append(th)
        theta_dual.append(thd)
    return Seed(datum, tuple(vertices), tuple(tuple(r) for r in eps),
                tuple(theta), tuple(theta_dual))


# ---------------------------------------------------------------------------
# Mutation.


def _pos(x):
    return x if x > 0 else 0


def mutate_seed(seed: Seed, k: int) -> Seed:
    """Mutate at a mutable vertex: matrix by the [x]_+ rule, variable by the
    two-term exchange binomial."""
    if not 0 <= k < len(seed.vertices):
        raise ValueError(f"no vertex {k}")
    if seed.vertices[k].frozen:
        raise ValueError("vertex is frozen")
    n = len(seed.vertices)
    eps = seed.epsilon
    new_eps = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == k or j == k:
                new_eps[i][j] = -eps[i][j]
            else:
                new_eps[i][j] = eps[i][j] + _pos(eps[i][k]) * _pos(eps[k][j]) \
                    - _pos(-eps[i][k]) * _pos(-eps[k][j])

    variables = seed.variables
    if variables is not None:
        from . import symbolic
        plus = symbolic.RationalFunction.constant(1)
        minus = symbolic.RationalFunction.constant(1)
        for j in range(n):
            e = eps[k][j]
            if e > 0:
                plus = plus * variables[j] ** int(e)
            elif e < 0:
                minus = minus * variables[j] ** int(-e)
        new_var = (plus + minus) * variables[k].inv()
        variables = variables[:k] + (new_var,) + variables[k + 1:]

    return Seed(seed.datum, seed.vertices, tuple(tuple(r) for r in new_eps),
                seed.theta, seed.theta_dual, variables)


# ---------------------------------------------------------------------------
# Exact linear algebra over fractions.


def fraction_det(rows: Sequence[Sequence]) -> Fraction:
    n = len(rows)
    m = [[Fraction(x) for x in row] for row in rows]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                factor = m[r][col] * inv
                for c in range(col, n):
                    m[r][c] -= factor * m[col][c]
    return det


def fraction_rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    m = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    cols = len(m[0])
    for col in range(cols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = 1 / m[rank][col]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                factor = m[r][col] * inv
                for c in range(col, cols):
                    m[r][c] -= factor * m[rank][c]
        rank += 1
        if rank == len(m):
            break
    return rank


# ---------------------------------------------------------------------------
# Poisson structure.


def p_matrix(seed: Seed) -> tuple[tuple[tuple[int, ...], ...], int]:
    """p_ij = eps_ij - (theta_j_check, theta_i)/2; integral with det ±1.

    Row k lists the A-exponents of the Poisson coordinate X_k.
    """
    n = len(seed.vertices)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            value = seed.epsilon[i][j]
            if seed.theta[i] is None or seed.theta_dual[j] is None:
                raise ValueError("seed lacks boundary vectors")
            value -= _pairing(seed.datum, seed.theta_dual[j], seed.theta[i]) / 2
            if value.denominator != 1:
                raise ValueError(f"p-matrix entry ({i},{j}) = {value} is not integral")
            row.append(int(value))
        rows.append(tuple(row))
    det = fraction_det(rows)
    if det not in (1, -1):
        raise ValueError(f"p-matrix determinant {det}, expected +1 or -1")
    return tuple(rows), int(det)


def mutate_p_matrix(p, k: int):
    """The p-matrix of the mutated seed, by the one-sided tropical rule."""
    n = len(p)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == k or j == k:
                out[i][j] = -p[i][j]
            else:
                out[i][j] = p[i][j] + _pos(p[i][k]) * p[k][j] \
                    + p[i][k] * _pos(-p[k][j])
    return tuple(tuple(r) for r in out)


# ---------------------------------------------------------------------------
# Langlands duality and the GSV form.


_DUAL_LETTER = {"A": "A", "B": "C", "C": "B", "D": "D", "E": "E",
                "F": "F", "G": "G"}


def langlands_dual(seed: Seed) -> Seed:
    """Transpose-negate the matrix and invert the multipliers."""
    datum = seed.datum
    dual_datum = rootdata.make_cartan(_DUAL_LETTER[datum.letter], datum.rank)
    c = max(datum.d(i) for i in datum.nodes())
    n = len(seed.vertices)
    eps = tuple(tuple(-seed.epsilon[j][i] for j in range(n)) for i in range(n))
    vertices = tuple(
        dataclasses.replace(v, d=c // v.d) for v in seed.vertices)
    return Seed(dual_datum, vertices, eps, seed.theta_dual, seed.theta,
                seed.variables)


def gsv_matrix(seed: Seed) -> Matrix:
    """Coefficients of the Poisson 2-form in log coordinates: d_i eps_ij."""
    n = len(seed.vertices)
    return tuple(
        tuple(seed.vertices[i].d * seed.epsilon[i][j] for j in range(n))
        for i in range(n))


# ---------------------------------------------------------------------------
# The triangulation quiver of a word.


def _sw_quiver_simply_laced(datum: CartanDatum, word: Word) -> list[list[Fraction]]:
    n = len(word)
    eps = [[Fraction(0)] * n for _ in range(n)]
    for a in range(n):
        i = word[a]
        m = next((b for b in range(a + 1, n) if word[b] == i), None)
        if m is None:
            continue
        eps[a][m] += 1
        eps[m][a] -= 1
        # A letter repeated at m unfreezes a; the arrows it picks up come
        # from the last letter of each adjacent color sitting between the
        # two appearances.
        seen = set()
        for b in range(m - 1, a, -1):
            j = word[b]
            if j != i and j not in seen and datum.a(i, j) != 0:
                eps[b][a] += 1
                eps[a][b] -= 1
            seen.add(j)
    last = {}
    for a, i in enumerate(word):
        last[i] = a
    for i, a in last.items():
        for j, b in last.items():
            if i != j and datum.a(i, j) != 0 and a > b:
                eps[a][b] += Fraction(1, 2)
                eps[b][a] -= Fraction(1, 2)
    return eps


def sw_quiver(datum: CartanDatum, word: Word) -> Seed:
    """The quiver on the letters of a word: consecutive same-color arrows
    point right, each repeated letter receives arrows from the last letter
    of every adjacent color between its two appearances, the rightmost
    letter of each color is frozen, and frozen neighbours get half arrows
    by last appearance.  Folded types average the unfolded quiver."""
    word = braid.validate_word(datum, word)
    n = len(word)
    if datum.simply_laced():
        eps = _sw_quiver_simply_laced(datum, word)
    else:
        unfolding = datum.unfolding
        cover_word = unfolding.unfold_word(word)
        cover_eps = _sw_quiver_simply_laced(unfolding.datum, cover_word)
        blocks = []
        at = 0
        for i in word:
            f = len(unfolding.fibers[i - 1])
            blocks.append(range(at, at + f))
            at += f
        eps = [[Fraction(0)] * n for _ in range(n)]
        for a in range(n):
            k = len(unfolding.fibers[word[a] - 1])
            for b in range(n):
                total = sum(cover_eps[x][y] for x in blocks[a] for y in blocks[b])
                eps[a][b] = Fraction(total, k)

    last = {}
    for a, i in enumerate(word):
        last[i] = a
    vertices = tuple(
        SeedVertex(a, word[a], last[word[a]] == a, datum.d(word[a]))
        for a in range(n))
    none = tuple(None for _ in range(n))
    return Seed(datum, vertices, tuple(tuple(r) for r in eps), none, none)


# ---------------------------------------------------------------------------
# Frozen vertex deletion.


def frozen_delete(seed: Seed) -> Seed:
    """Remove the final vertex of a seed built from a left-inductive weave
    whose word starts with a letter already inside the Demazure product.

    That vertex is frozen and, apart from half arrows shared with other
    frozen vertices, a source; its neighbours freeze and arrows among frozen
    vertices are dropped, so the result matches the direct construction of
    the shorter word up to those dropped arrows.
    """
    if not seed.vertices:
        raise ValueError("empty seed")
    n = len(seed.vertices)
    k = n - 1
    v = seed.vertices[k]
    if not v.frozen:
        raise ValueError("last vertex is not frozen; the Demazure product grows")
    if any(seed.epsilon[x][k] > 0 and not seed.vertices[x].frozen
           for x in range(n)):
        raise ValueError("last frozen vertex is not a source")

    neighbours = {x for x in range(n)
                  if x != k and seed.epsilon[k][x] != 0
                  and not seed.vertices[x].frozen}
    keep = [x for x in range(n) if x != k]
    frozen = {x for x in keep if seed.vertices[x].frozen} | neighbours
    eps = [[seed.epsilon[x][y] if not (x in frozen and y in frozen) else Fraction(0)
            for y in keep] for x in keep]
    vertices = tuple(
        dataclasses.replace(seed.vertices[x], index=t, frozen=x in frozen)
        for t, x in enumerate(keep))
    theta = tuple(seed.theta[x] for x in keep)
    theta_dual = tuple(seed.theta_dual[x] for x in keep)
    variables = None
    if seed.variables is not None:
        variables = tuple(seed.variables[x] for x in keep)
    return Seed(seed.datum, vertices,
                tuple(tuple(r) for r in eps), theta, theta_dual, variables)
