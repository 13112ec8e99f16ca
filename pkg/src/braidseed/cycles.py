"""
cycles: tropical cycles on weave edges.

Every trivalent vertex of a weave carries a distinguished cycle: weights on
the edges, zero above the vertex, one on its outgoing edge, and transported
downwards through each row by a tropical rule.  A trivalent vertex takes the
minimum of its two incoming weights; a (2m)-valent vertex permutes weights by
the tropical braid rule of its order.  The order 3 rule is the Lusztig
coordinate change; the order 4 rules phi_b2 / phi_b2_star are its folded
forms, one for each orientation of the vertex; order 6 vertices and cross
checks run the move script of the simply laced cover with weights lifted
equally along the fibers.

A cycle is frozen when it reaches the southern boundary.  The dual cycle
rescales weights edge by edge so that they obey the transposed tropical
rules; pairing a dual cycle against a plain one restricts the intersection
form of the simply laced cover (sum of lifts against average of lifts).
The boundary values of a cycle and its dual give the root-space vectors
theta and theta-check.
"""

from __future__ import annotations

import functools
from fractions import Fraction
from typing import Sequence

from . import braid, rootdata, weave as weave_mod
from .rootdata import CartanDatum, Word
from .weave import BraidShift, Trivalent, Weave

Weights = tuple  # weights on one slice, ints or Fractions


def phi1(a, b):
    """Outgoing weight of a trivalent vertex."""
    return min(a, b)


def phi2(a, b):
    """4-valent vertex: the strands cross."""
    return (b, a)


def phi3(a1, a2, a3):
    """6-valent vertex: tropical Lusztig rule."""
    m = min(a1, a3)
    return (a2 + a3 - m, m, a1 + a2 - m)


def phi_b2(a, b, c, d):
    """8-valent vertex whose first strand has the doubled color."""
    p1 = min(a + b, a + d, c + d)
    p2 = min(2 * a + b, 2 * a + d, 2 * c + d)
    return (b + 2 * c + d - p2, p2 - p1, 2 * p1 - p2, a + b + c - p1)


def phi_b2_star(a, b, c, d):
    """8-valent vertex whose first strand has the undoubled color."""
    p1 = min(a + b, a + d, c + d)
    p2s = min(a + 2 * b, a + 2 * d, c + 2 * d)
    return (b + c + d - p1, 2 * p1 - p2s, p2s - p1, a + 2 * b + c - p2s)


@functools.cache
def _cover_transport(datum: CartanDatum, i: int, j: int):
    """Move script of the cover together with the per-position fold maps.

    Returns (cover words before/after each move, script positions, folded
    position of every cover position before and after).
    """
    unfolding = datum.unfolding
    m = datum.braid_order(i, j)
    block = tuple(i if t % 2 == 0 else j for t in range(m))
    target = tuple(j if t % 2 == 0 else i for t in range(m))
    script = weave_mod._cover_braid_script(datum, i, j)
    cover = unfolding.datum

    def fold_map(folded: Word) -> tuple[int, ...]:
        out = []
        for t, letter in enumerate(folded):
            out.extend([t] * len(unfolding.fibers[letter - 1]))
        return tuple(out)

    return (unfolding.unfold_word(block), unfolding.unfold_word(target),
            script, fold_map(block), fold_map(target), cover)


def _transport_block(datum: CartanDatum, i: int, j: int, weights: Sequence):
    """Push folded weights through a (2m)-valent vertex via the cover."""
    source, target, script, fold_in, fold_out, cover = _cover_transport(datum, i, j)
    lifted = [weights[t] for t in fold_in]
    word = source
    for pos in script:
        a, b = word[pos], word[pos + 1]
        order = cover.braid_order(a, b)
        if order == 2:
            lifted[pos], lifted[pos + 1] = lifted[pos + 1], lifted[pos]
        else:
            lifted[pos:pos + 3] = phi3(*lifted[pos:pos + 3])
        word = rootdata.apply_braid_move(cover, word, pos)
    assert word == target
    out = []
    m = datum.braid_order(i, j)
    for t in range(m):
        values = {lifted[p] for p, f in enumerate(fold_out) if f == t}
        if len(values) != 1:
            raise AssertionError("weights do not fold back equally")
        out.append(values.pop())
    return tuple(out)


def braid_rule(datum: CartanDatum, i: int, j: int, weights: Sequence) -> tuple:
    """Weights leaving a (2m)-valent vertex given the m incoming ones.

    The first incoming strand has color i.  Orders 2 and 3 use the closed
    rules; order 4 picks phi_b2 or its star by whether i is the doubled
    color; order 6 transports through the cover.
    """
    m = datum.braid_order(i, j)
    if len(weights) != m:
        raise ValueError(f"expected {m} weights, got {len(weights)}")
    if m == 2:
        return phi2(*weights)
    if m == 3:
        return phi3(*weights)
    if m == 4:
        rule = phi_b2 if datum.d(i) == 2 else phi_b2_star
        return rule(*weights)
    return _transport_block(datum, i, j, weights)


def _step(datum: CartanDatum, word: Word, row, weights: Sequence) -> tuple:
    if isinstance(row, Trivalent):
        k = row.pos
        return tuple(weights[:k]) + (phi1(weights[k], weights[k + 1]),) \
            + tuple(weights[k + 2:])
    k = row.pos
    i, j = word[k], word[k + 1]
    m = datum.braid_order(i, j)
    return tuple(weights[:k]) + braid_rule(datum, i, j, weights[k:k + m]) \
        + tuple(weights[k + m:])


def propagate(weave: Weave, top_weights: Sequence) -> tuple[Weights, ...]:
    """Push weights on the top slice down; entry r sits on slice r."""
    cuts = weave_mod.slices(weave)
    if len(top_weights) != len(cuts[0]):
        raise ValueError("weights do not match the top slice")
    out = [tuple(top_weights)]
    for r, row in enumerate(weave.rows):
        out.append(_step(weave.datum, cuts[r], row, out[-1]))
    return tuple(out)


@functools.cache
def vertex_cycle(weave: Weave, vertex_index: int) -> tuple[Weights, ...]:
    """The cycle of a trivalent vertex: zero above, one out, pushed down."""
    verts = weave_mod.vertices(weave)
    if not 0 <= vertex_index < len(verts):
        raise ValueError(f"no vertex {vertex_index}")
    v = verts[vertex_index]
    cuts = weave_mod.slices(weave)
    out = [tuple(0 for _ in cuts[r]) for r in range(v.row + 1)]
    seeded = [0] * len(cuts[v.row + 1])
    seeded[v.pos] = 1
    out.append(tuple(seeded))
    for r in range(v.row + 1, len(weave.rows)):
        out.append(_step(weave.datum, cuts[r], weave.rows[r], out[-1]))
    return tuple(out)


def dual_cycle(weave: Weave, vertex_index: int) -> tuple[Weights, ...]:
    """Rescale the vertex cycle by d(edge color) / d(vertex color).

    The rescaled weights satisfy the transposed braid rules, so this is the
    cycle of the same vertex for the dual root datum.  The factor also
    matches the unfolded picture: summing the cover cycles of the vertex
    fiber over the edges of one folded edge gives exactly these weights
    times d(vertex).  Simply laced types are untouched (all factors 1).
    """
    datum = weave.datum
    v = weave_mod.vertices(weave)[vertex_index]
    dv = datum.d(v.color)
    cuts = weave_mod.slices(weave)
    cycle = vertex_cycle(weave, vertex_index)
    return tuple(
        tuple(Fraction(w * datum.d(cuts[r][p]), dv)
              for p, w in enumerate(level))
        for r, level in enumerate(cycle))


def is_frozen(weave: Weave, vertex_index: int) -> bool:
    """Whether the cycle reaches the southern boundary."""
    return any(w != 0 for w in vertex_cycle(weave, vertex_index)[-1])


def is_demazure_frozen(weave: Weave, vertex_index: int) -> bool:
    """Combinatorial test: with the vertex at beta1 i i beta2, the letter
    still matters after the merge iff delta(beta1 beta2) < delta(beta1 i
    beta2)."""
    v = weave_mod.vertices(weave)[vertex_index]
    word = weave_mod.slices(weave)[v.row]
    beta1, beta2 = word[:v.pos], word[v.pos + 2:]
    datum = weave.datum
    shorter = braid.demazure_element(datum, beta1 + beta2)
    longer = braid.demazure_element(datum, beta1 + (v.color,) + beta2)
    return shorter.length() < longer.length()


def bifurcates(weave: Weave, vertex_index: int) -> bool:
    """Whether the cycle enters some braid vertex on a single strand and
    leaves on more than one."""
    cycle = vertex_cycle(weave, vertex_index)
    cuts = weave_mod.slices(weave)
    datum = weave.datum
    for r, row in enumerate(weave.rows):
        if not isinstance(row, BraidShift):
            continue
        k = row.pos
        m = datum.braid_order(cuts[r][k], cuts[r][k + 1])
        inputs = cycle[r][k:k + m]
        outputs = cycle[r + 1][k:k + m]
        if sum(1 for w in inputs if w != 0) == 1 \
                and sum(1 for w in outputs if w != 0) >= 2:
            return True
    return False


def theta_vectors(weave: Weave, vertex_index: int):
    """Boundary vectors (theta, theta_check) of a vertex.

    theta sums the dual cycle's southern weights against the boundary
    coroots, theta_check the cycle's weights against the roots; they pair
    the same way round as the boundary intersection.  Both vanish exactly
    when the vertex is mutable.
    """
    datum = weave.datum
    bottom = weave_mod.bottom(weave)
    seq = rootdata.root_sequence(datum, bottom)
    gamma = vertex_cycle(weave, vertex_index)[-1]
    gamma_dual = dual_cycle(weave, vertex_index)[-1]
    theta = [Fraction(0)] * datum.rank
    theta_check = [Fraction(0)] * datum.rank
    for e, (root, coroot) in enumerate(seq):
        for t in range(datum.rank):
            theta[t] += gamma_dual[e] * coroot[t]
            theta_check[t] += gamma[e] * root[t]
    return tuple(theta), tuple(theta_check)
