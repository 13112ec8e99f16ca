"""Cluster variables of a weave, and the chart maps between braid words.

The scan walks the weave top to bottom carrying, for every strand of the
current slice, a rational function (the argument of its braid-matrix letter)
and a monomial in the variables found so far (the framing of the flag to its
right).  Each trivalent vertex emits one variable; braid rows only reshuffle
the carried data.  Everything here works in the type A matrix realization,
with the doubled types reached through their simply laced cover.
"""

from __future__ import annotations

import dataclasses
from fractions import Fraction
from typing import Sequence

from . import braid, cycles, rootdata, symbolic
from . import seed as seed_module
from . import weave as weave_module
from .rootdata import CartanDatum, Word
from .symbolic import Mat, Polynomial, RationalFunction
from .weave import BraidShift, Trivalent, Weave


def _scan_size(datum: CartanDatum) -> int:
    if datum.letter != "A":
        raise ValueError("the framed scan needs a type A datum; fold first")
    return datum.rank + 1


@dataclasses.dataclass
class FramedSliceState:
    """Framing data carried along one slice of the scan.

    ztilde[k] is the braid-matrix argument of letter k; exponents[k] is the
    weight vector, over the weave's trivalent vertices, of the monomial
    twisting the flag right of letter k.  The top slice starts with
    ztilde[k] = z_{k+1} and zero exponents.  residual holds the unipotent
    still to be pushed off to the right, None between rows.
    """

    word: Word
    ztilde: list[RationalFunction]
    exponents: list[tuple[int, ...]]
    residual: Mat | None = None


@dataclasses.dataclass(frozen=True)
class ScanResult:
    weave: Weave
    variables: tuple[RationalFunction, ...]
    polynomial: tuple[bool, ...]
    bottom: FramedSliceState


def scan(weave: Weave) -> ScanResult:
    """Run the framed scan over a type A weave.

    A trivalent vertex merging letters (z1, u1) and (z2, u2) emits
    A_v = z2 * prod A^(gamma(e1) + gamma(e2) - gamma(e3)), turns into one
    letter z1 - 1/(u1^2 z2), and leaves behind a unipotent that is pushed
    through the rest of the slice and dropped at the right edge.  Braid rows
    follow the two matrix identities on B_i(z)chi_i(u) factors.
    """
    datum = weave.datum
    size = _scan_size(datum)
    nvars = max(len(weave.top), 1)
    verts = weave_module.vertices(weave)
    nv = len(verts)
    cyc = [cycles.vertex_cycle(weave, t) for t in range(nv)]
    one = RationalFunction.constant(1, nvars)

    state = FramedSliceState(
        weave.top,
        [RationalFunction.variable(k + 1, nvars) for k in range(len(weave.top))],
        [(0,) * nv for _ in weave.top])
    values: list[RationalFunction] = []
    flags: list[bool] = []

    def power(vec) -> RationalFunction:
        out = one
        for t, e in enumerate(vec):
            if e:
                out = out * values[t] ** int(e)
        return out

    for r, row in enumerate(weave.rows):
        k = row.pos
        word = state.word
        if isinstance(row, Trivalent):
            i = word[k]
            z1, z2 = state.ztilde[k], state.ztilde[k + 1]
            if z2.is_zero():
                raise ValueError("degenerate chart")
            vec1, vec2 = state.exponents[k], state.exponents[k + 1]
            out_vec = tuple(int(cyc[t][r + 1][k]) for t in range(nv))
            value = z2
            for t in range(len(values)):
                e = vec1[t] + vec2[t] - out_vec[t]
                if e:
                    value = value * values[t] ** e
            values.append(value)
            flags.append(value.is_polynomial())

            u1 = power(vec1)
            u2 = power(vec2)
            state.word = word[:k + 1] + word[k + 2:]
            state.ztilde[k:k + 2] = [z1 - (u1 * u1 * z2).inv()]
            state.exponents[k:k + 2] = [out_vec]
            state.residual = symbolic.phi_block(
                size, i,
                [[one, (z2 * u2 * u2).inv() * RationalFunction.constant(-1, nvars)],
                 [RationalFunction.zero(nvars), one]],
                nvars)
            for q in range(k + 1, len(state.word)):
                zq, pushed = symbolic.push_unipotent(
                    state.residual, state.word[q], state.ztilde[q])
                state.ztilde[q] = zq
                uq = power(state.exponents[q])
                state.residual = symbolic.chi_letter(size, state.word[q], uq.inv()) \
                    * pushed * symbolic.chi_letter(size, state.word[q], uq)
            state.residual = None
        else:
            i, j = word[k], word[k + 1]
            order = datum.braid_order(i, j)
            if order == 2:
                state.word = word[:k] + (j, i) + word[k + 2:]
                state.ztilde[k], state.ztilde[k + 1] = \
                    state.ztilde[k + 1], state.ztilde[k]
                state.exponents[k], state.exponents[k + 1] = \
                    state.exponents[k + 1], state.exponents[k]
            elif order == 3:
                z1, z2, z3 = state.ztilde[k:k + 3]
                old = state.exponents[k:k + 3]
                new = [tuple(int(cyc[t][r + 1][k + a]) for t in range(nv))
                       for a in range(3)]
                assert all(
                    old[0][t] + old[1][t] == new[1][t] + new[2][t]
                    and old[1][t] + old[2][t] == new[0][t] + new[1][t]
                    for t in range(nv)), "braid row breaks the framing"
                u1, u2, u3 = (power(v) for v in old)
                p1, p2, _ = (power(v) for v in new)
                state.word = word[:k] + (j, i, j) + word[k + 3:]
                state.ztilde[k:k + 3] = [
                    z3 * u1 / u2,
                    z1 * z3 * u1 * u3 / p2 - z2 * p1 / u1,
                    z1 * p2 / p1,
                ]
                state.exponents[k:k + 3] = new
            else:
                raise AssertionError("type A has no higher braid order")

    return ScanResult(weave, tuple(values), tuple(flags), state)


def cluster_variables(weave: Weave) -> tuple[RationalFunction, ...]:
    """One rational function per trivalent vertex, in top-to-bottom order.

    Type A weaves are scanned directly; weaves of a doubled type are opened
    over their type A cover, scanned there, and restricted to the fixed
    locus where the letters of each fiber block share one variable.
    """
    if weave.datum.letter == "A":
        return scan(weave).variables
    return folded_variables(weave).variables


def chart_point(weave: Weave, values: Sequence) -> tuple[Fraction, ...]:
    """Exact coordinates of the point with the given chart values.

    The scan maps a point of the braid variety to one nonzero number per
    trivalent vertex, with every bottom letter's argument equal to zero.
    Walking the rows bottom to top inverts that: the returned rationals are
    an honest point of the variety, and scanning the weave at them gives
    back exactly the supplied values.
    """
    n = max(len(weave.top), 1)
    vals = [RationalFunction.constant(Fraction(v), n) for v in values]
    if any(v.is_zero() for v in vals):
        raise ValueError("chart values must be nonzero")
    return tuple(entry.constant_value()
                 for entry in _reverse_scan(weave, vals, n))


def chart_map(weave: Weave) -> tuple[RationalFunction, ...]:
    """Every letter's coordinate as a rational function of the variables.

    Entry k expresses z_{k+1} through one symbol per trivalent vertex, in
    the vertices' top-to-bottom order: the symbolic form of chart_point.
    Substituting the scan's variables gives back z_{k+1} on the variety.
    """
    nv = len(weave_module.vertices(weave))
    vals = [RationalFunction.variable(t + 1, max(nv, 1)) for t in range(nv)]
    return _reverse_scan(weave, vals, max(nv, 1))


def _reverse_scan(weave: Weave, vals: list[RationalFunction], n: int
                  ) -> tuple[RationalFunction, ...]:
    """Bottom-up inversion of the scan with the given vertex values.

    All monomial data comes from the cycles, so only the z arguments need
    reconstruction; n is the variable count of the vals entries.
    """
    datum = weave.datum
    size = _scan_size(datum)
    nv = len(weave_module.vertices(weave))
    if len(vals) != nv:
        raise ValueError("one value per trivalent vertex")
    cyc = [cycles.vertex_cycle(weave, t) for t in range(nv)]
    one = RationalFunction.constant(1, n)
    slc = weave_module.slices(weave)

    def power(vec) -> RationalFunction:
        out = one
        for t, e in enumerate(vec):
            if e:
                out = out * vals[t] ** int(e)
        return out

    def vec_at(r: int, q: int) -> tuple[int, ...]:
        return tuple(int(cyc[t][r][q]) for t in range(nv))

    zt: list[RationalFunction] = [RationalFunction.zero(n) for _ in slc[-1]]
    t = nv
    for r in range(len(weave.rows) - 1, -1, -1):
        row = weave.rows[r]
        k = row.pos
        above = slc[r]
        if isinstance(row, Trivalent):
            t -= 1
            i = above[k]
            vec1, vec2 = vec_at(r, k), vec_at(r, k + 1)
            out_vec = vec_at(r + 1, k)
            z2 = power(tuple(o - a - b
                             for o, a, b in zip(out_vec, vec1, vec2)))
            u1, u2 = power(vec1), power(vec2)
            prior = zt
            zt = prior[:k]
            zt.append(prior[k] + (u1 * u1 * z2).inv())
            zt.append(z2)
            residual = symbolic.phi_block(
                size, i,
                [[one, (z2 * u2 * u2).inv() * RationalFunction.constant(-1, n)],
                 [RationalFunction.zero(n), one]],
                n)
            for q in range(k + 1, len(prior)):
                j = slc[r + 1][q]
                old = (prior[q] * residual[j, j] - residual[j - 1, j]) \
                    / residual[j - 1, j - 1]
                zt.append(old)
                _, pushed = symbolic.push_unipotent(residual, j, old)
                uq = power(vec_at(r + 1, q))
                residual = symbolic.chi_letter(size, j, uq.inv()) \
                    * pushed * symbolic.chi_letter(size, j, uq)
        else:
            order = datum.braid_order(above[k], above[k + 1])
            if order == 2:
                zt[k], zt[k + 1] = zt[k + 1], zt[k]
            elif order == 3:
                w1, w2, w3 = zt[k:k + 3]
                u1, u2, u3 = (power(vec_at(r, k + a)) for a in range(3))
                p1, p2, _ = (power(vec_at(r + 1, k + a)) for a in range(3))
                z1 = w3 * p1 / p2
                z3 = w1 * u2 / u1
                z2 = (z1 * z3 * u1 * u3 / p2 - w2) * u1 / p1
                zt[k:k + 3] = [z1, z2, z3]
            else:
                raise AssertionError("type A has no higher braid order")
    return tuple(zt)


@dataclasses.dataclass(frozen=True)
class FoldedVariables:
    cover: weave_module.UnfoldedWeave
    cover_variables: tuple[RationalFunction, ...]
    images: tuple[RationalFunction, ...]
    variables: tuple[RationalFunction, ...]


def folded_variables(weave: Weave) -> FoldedVariables:
    """Variables of a doubled-type weave through its simply laced cover.

    The cover weave is scanned in type A, each cover variable z_t is sent to
    the variable of the folded letter whose block contains t, and the
    members of every vertex fiber must collapse to a common restriction,
    which becomes the folded variable.
    """
    unfolding = weave.datum.unfolding
    if unfolding is None or unfolding.datum.letter != "A":
        raise ValueError("variables need a type A datum or a type A cover")
    uf = weave_module.unfold_weave(weave)
    cover_variables = scan(uf.weave).variables
    nfold = max(len(weave.top), 1)
    images: list[RationalFunction] = []
    for f, block in enumerate(uf.letter_blocks):
        images.extend(RationalFunction.variable(f + 1, nfold) for _ in block)
    folded: list[RationalFunction] = []
    for fiber in uf.vertex_fibers:
        restricted = [cover_variables[c].substitute(images) for c in fiber]
        for other in restricted[1:]:
            if other != restricted[0]:
                raise AssertionError("fiber variables disagree after restriction")
        folded.append(restricted[0])
    return FoldedVariables(uf, cover_variables, tuple(images), tuple(folded))


def weave_seed(weave: Weave) -> seed_module.Seed:
    """The exchange matrix of a weave with its variables attached."""
    base = seed_module.exchange_matrix(weave)
    return dataclasses.replace(base, variables=cluster_variables(weave))


@dataclasses.dataclass(frozen=True)
class FoldedSeed:
    seed: seed_module.Seed
    weave: Weave
    cover: weave_module.UnfoldedWeave
    cover_variables: tuple[RationalFunction, ...]
    images: tuple[RationalFunction, ...]


def fold_restrict(datum: CartanDatum, word: Sequence[int],
                  side: str = "right") -> FoldedSeed:
    """Build the seed of a doubled-type word by restriction from the cover.

    Returns the folded seed (form and symmetrizers from the folded weave,
    variables from the cover restriction) together with the cover data and
    the variable identification map.
    """
    if datum.simply_laced():
        raise ValueError("nothing to fold in a simply laced type")
    weave = weave_module.build_inductive(datum, tuple(word), side)
    fv = folded_variables(weave)
    base = seed_module.exchange_matrix(weave)
    out = dataclasses.replace(base, variables=fv.variables)
    return FoldedSeed(out, weave, fv.cover, fv.cover_variables, fv.images)


# ---------------------------------------------------------------------------
# Independent check of the scan on inductive weaves.


def minors_oracle(weave: Weave) -> tuple[Polynomial, ...]:
    """Variables of an inductive weave read off as matrix minors.

    Carries explicit letter factors B_i(z)chi_i(u) with the framings as
    field elements instead of weight vectors, and extracts each variable as
    the top-left minor of chi_i(u1) B_i(z2) chi_i(u2) across the vertex.
    One incoming edge of an inductive vertex is a passive strand, so the
    outgoing edge carries no older cycle and this minor is the variable.
    Rejects weaves that are not left or right inductive.
    """
    datum = weave.datum
    size = _scan_size(datum)
    for side in ("right", "left"):
        if weave == weave_module.build_inductive(datum, weave.top, side):
            break
    else:
        raise ValueError("weave is not inductive")

    nvars = max(len(weave.top), 1)
    verts = weave_module.vertices(weave)
    cyc = [cycles.vertex_cycle(weave, t) for t in range(len(verts))]
    one = RationalFunction.constant(1, nvars)
    word = weave.top
    ztilde = [RationalFunction.variable(k + 1, nvars) for k in range(len(word))]
    framing = [one for _ in word]
    values: list[RationalFunction] = []
    out: list[Polynomial] = []

    for r, row in enumerate(weave.rows):
        k = row.pos
        if isinstance(row, Trivalent):
            i = word[k]
            z1, z2 = ztilde[k], ztilde[k + 1]
            if z2.is_zero():
                raise ValueError("degenerate chart")
            u1, u2 = framing[k], framing[k + 1]
            flank = symbolic.chi_letter(size, i, u1) \
                * symbolic.b_letter(size, i, z2) * symbolic.chi_letter(size, i, u2)
            out.append(symbolic.principal_minor(flank, i).as_polynomial())
            values.append(symbolic.as_rational(out[-1]))
            word = word[:k + 1] + word[k + 2:]
            ztilde[k:k + 2] = [z1 - (u1 * u1 * z2).inv()]
            framing[k:k + 2] = [z2 * u1 * u2]
            resid = symbolic.phi_block(
                size, i,
                [[one, (z2 * u2 * u2).inv() * RationalFunction.constant(-1, nvars)],
                 [RationalFunction.zero(nvars), one]],
                nvars)
            for q in range(k + 1, len(word)):
                ztilde[q], resid = symbolic.push_unipotent(resid, word[q], ztilde[q])
                resid = symbolic.chi_letter(size, word[q], framing[q].inv()) \
                    * resid * symbolic.chi_letter(size, word[q], framing[q])
        else:
            i, j = word[k], word[k + 1]
            if datum.braid_order(i, j) == 2:
                word = word[:k] + (j, i) + word[k + 2:]
                ztilde[k], ztilde[k + 1] = ztilde[k + 1], ztilde[k]
                framing[k], framing[k + 1] = framing[k + 1], framing[k]
            else:
                z1, z2, z3 = ztilde[k:k + 3]
                u1, u2, u3 = framing[k:k + 3]
                p1, p2, p3 = [
                    _monomial(values, [cyc[t][r + 1][k + a]
                                       for t in range(len(values))], one)
                    for a in range(3)]
                word = word[:k] + (j, i, j) + word[k + 3:]
                ztilde[k:k + 3] = [
                    z3 * u1 / u2,
                    z1 * z3 * u1 * u3 / p2 - z2 * p1 / u1,
                    z1 * p2 / p1,
                ]
                framing[k:k + 3] = [p1, p2, p3]
    return tuple(out)


def _monomial(values: Sequence[RationalFunction], weights: Sequence,
              one: RationalFunction) -> RationalFunction:
    out = one
    for value, w in zip(values, weights):
        if w:
            out = out * value ** int(w)
    return out


# ---------------------------------------------------------------------------
# Exchange identities.


@dataclasses.dataclass(frozen=True)
class ExchangeReport:
    ok: bool
    residual: RationalFunction


def verify_exchange(seed: seed_module.Seed, k: int) -> ExchangeReport:
    """Check A_k A'_k = prod A^[eps_k]_+ + prod A^[-eps_k]_+ exactly."""
    if seed.variables is None:
        raise ValueError("seed carries no variables")
    if seed.vertices[k].frozen:
        raise ValueError("vertex is frozen")
    mutated = seed_module.mutate_seed(seed, k)
    nvars = seed.variables[k].nvars
    plus = RationalFunction.constant(1, nvars)
    minus = RationalFunction.constant(1, nvars)
    for t, e in enumerate(seed.epsilon[k]):
        if e > 0:
            plus = plus * seed.variables[t] ** int(e)
        elif e < 0:
            minus = minus * seed.variables[t] ** int(-e)
    residual = seed.variables[k] * mutated.variables[k] - (plus + minus)
    return ExchangeReport(residual.is_zero(), residual)


# ---------------------------------------------------------------------------
# Rotation, the letter involution, and their composite.


def rotate_word(datum: CartanDatum, word: Sequence[int]) -> Word:
    """Move the first letter to the back, starred."""
    word = tuple(word)
    if not word:
        raise ValueError("empty word")
    return word[1:] + (rootdata.star(datum, word[0]),)


def rotate_map(datum: CartanDatum, word: Sequence[int],
               values: Sequence[RationalFunction] | None = None
               ) -> tuple[RationalFunction, ...]:
    """Substitution pulling the rotated chart back to the original one.

    Entry k is the image of the rotated chart's k-th coordinate: the first
    l-1 are z_2 .. z_l, and the last solves the one linear condition that
    column i* of w_0^-1 B(z_2) ... B(z_l) B_{i*}(z') must satisfy below the
    diagonal.  The remaining triangularity conditions hold only on the
    variety, so the bottom-most usable row is taken.

    Passing values composes: they stand in for z_1 .. z_l, and the result
    is the rotated chart expressed through the same underlying variables.
    """
    word = tuple(word)
    if not word:
        raise ValueError("empty word")
    size = _scan_size(datum)
    w0, w0word = rootdata.longest_element(datum)
    if braid.demazure_element(datum, word) != w0:
        raise ValueError("rotation needs the full Demazure product")
    n = len(word)
    if values is None:
        values = tuple(RationalFunction.variable(k, n)
                       for k in range(1, n + 1))
    if len(values) != n:
        raise ValueError("one value per letter")
    nvars = values[0].nvars
    istar = rootdata.star(datum, word[0])
    m = symbolic.weyl_lift_inv(datum, w0word, nvars) * symbolic.braid_matrix(
        datum, word[1:], values=values[1:], nvars=nvars)
    for r in range(size - 1, istar - 1, -1):
        if not m[r, istar - 1].is_zero():
            last = -(m[r, istar] / m[r, istar - 1])
            break
    else:
        raise ValueError("no solution for the rotated coordinate")
    return tuple(values[1:]) + (last,)


def star_map(datum: CartanDatum, word: Sequence[int]
             ) -> tuple[Word, tuple[int, ...]]:
    """The starred word and the node relabeling i -> i*; z-values are kept."""
    relabel = tuple(rootdata.star(datum, i) for i in datum.nodes())
    return tuple(rootdata.star(datum, i) for i in word), relabel


def dt_map(datum: CartanDatum, word: Sequence[int]
           ) -> tuple[RationalFunction, ...]:
    """Full rotation followed by the letter involution, as one substitution.

    After l single rotations the word returns to its starred form, and the
    involution fixes all z-values, so the composite of the l rotation steps
    is the whole answer.  The steps are composed on the weave chart, where
    each one is exact, and the result is pushed back through the scan: a
    naive substitution chain in the ambient coordinates hits rows that
    degenerate off the variety.  The returned functions therefore satisfy
    the defining equations identically.
    """
    word = tuple(word)
    n = len(word)
    carrier = weave_module.build_inductive(datum, word, "right")
    images = chart_map(carrier)
    current = word
    for _ in range(n):
        images = rotate_map(datum, current, values=images)
        current = rotate_word(datum, current)
    assert current == star_map(datum, word)[0]
    back = scan(carrier).variables
    return tuple(entry.substitute(back) for entry in images)


# ---------------------------------------------------------------------------
# Rotation as a quasi-cluster transformation.


@dataclasses.dataclass(frozen=True)
class QuasiClusterReport:
    ok: bool
    mutable_quivers_equal: bool
    shared_variables_equal: bool
    product: RationalFunction
    product_in_frozens: bool
    yhat_equal: bool
    notes: tuple[str, ...]


def quasi_cluster_check(datum: CartanDatum, word: Sequence[int]
                        ) -> QuasiClusterReport:
    """Compare the seeds of a word and its rotation built over a shared core.

    Both weaves extend one inductive weave of the word without its first
    letter: one merges that letter into a rewritten bottom on the left, the
    other merges the starred letter on the right.  The interior variables
    must agree under the index shift, the two extra variables must multiply
    to a monomial in the frozen variables, and the exchange ratios
    prod A^eps must agree at every mutable vertex.

    The extra variable of the rotated weave is compared through its value on
    the variety, 1/(ztilde * u) read off the slice above the final vertex:
    the scan output itself depends on the rotated coordinate, which only the
    defining equations tie back to z_1..z_l.
    """
    word = tuple(word)
    w0, _ = rootdata.longest_element(datum)
    if braid.demazure_element(datum, word) != w0:
        raise ValueError("rotation comparison needs the full Demazure product")
    rest = word[1:]
    if braid.demazure_element(datum, rest) != w0:
        raise ValueError("first letter must be redundant")
    i1 = word[0]
    j = rootdata.star(datum, i1)

    base = weave_module.build_inductive(datum, rest, "right")
    floor = weave_module.bottom(base)
    w1 = weave_module.append_rows(base, (
        BraidShift(p) for p in rootdata.bring_to_front(datum, floor, i1)))
    w1 = weave_module.prepend_strand(w1, i1)
    w1 = weave_module.append_rows(w1, (Trivalent(0),))
    w2 = weave_module.append_rows(base, (
        BraidShift(p) for p in rootdata.bring_to_back(datum, floor, j)))
    w2 = weave_module.append_strand(w2, j)
    w2 = weave_module.append_rows(w2, (Trivalent(len(floor) - 1),))
    assert w1.top == word and w2.top == rotate_word(datum, word)

    s1 = weave_seed(w1)
    s2 = seed_module.exchange_matrix(w2)
    notes: list[str] = []
    n = len(word)
    nv = len(s1.vertices)
    if len(s2.vertices) != nv:
        raise AssertionError("the two extensions disagree on vertex count")

    mutable = s1.mutable_indices()
    quivers_equal = mutable == s2.mutable_indices() and all(
        s1.epsilon[a][b] == s2.epsilon[a][b] for a in mutable for b in mutable)
    if not quivers_equal:
        notes.append("mutable subquivers differ")

    interior, last2 = _slice_above_tail(w2)
    one = RationalFunction.constant(1, n)
    shift = [RationalFunction.variable(s, n) for s in range(2, n + 1)]
    shift.append(RationalFunction.zero(n))
    vars2 = [v.substitute(shift) for v in interior]
    vars2.append(last2.substitute(shift))

    shared = True
    for t in range(nv - 1):
        if vars2[t] != s1.variables[t]:
            shared = False
            notes.append(f"interior variable {t} differs")
    product = s1.variables[nv - 1] * vars2[nv - 1]
    frozen_vars = [s1.variables[t] for t in s1.frozen_indices()]
    in_frozens = _laurent_in(product, frozen_vars)
    if not in_frozens:
        notes.append("extra variables do not multiply to a frozen monomial")

    yhat = True
    for t in mutable:
        lhs = _monomial(list(s1.variables),
                        [s1.epsilon[t][s] for s in range(nv)], one)
        rhs = _monomial(vars2, [s2.epsilon[t][s] for s in range(nv)], one)
        if lhs != rhs:
            yhat = False
            notes.append(f"exchange ratio differs at vertex {t}")
    ok = quivers_equal and shared and in_frozens and yhat
    return QuasiClusterReport(ok, quivers_equal, shared, product,
                              in_frozens, yhat, tuple(notes))


def _slice_above_tail(w2: Weave) -> tuple[list[RationalFunction], RationalFunction]:
    """Variables of a weave without its final vertex, and that vertex's value.

    Scans the weave with the last row removed; the final variable is read
    off as 1/(ztilde * u) at the left leg of the removed merge, which on the
    variety equals the scan output while never touching the last letter.
    Doubled types go through the cover: the removed folded vertex opens to a
    block of commutations and fiber merges, and the value at the block's
    first merge restricts to the folded one.
    """
    datum = w2.datum
    core = dataclasses.replace(w2, rows=w2.rows[:-1])
    if datum.letter == "A":
        res = scan(core)
        pos = w2.rows[-1].pos
        one = RationalFunction.constant(1, len(w2.top))
        u = _monomial(list(res.variables), res.bottom.exponents[pos], one)
        return list(res.variables), (res.bottom.ztilde[pos] * u).inv()

    full = weave_module.unfold_weave(w2)
    opened = weave_module.unfold_weave(core)
    tail = full.weave.rows[len(opened.weave.rows):]
    first = next(t for t, row in enumerate(tail)
                 if isinstance(row, Trivalent))
    res = scan(weave_module.append_rows(opened.weave, tail[:first]))
    pos = tail[first].pos
    one = RationalFunction.constant(1, len(full.weave.top))
    u = _monomial(list(res.variables), res.bottom.exponents[pos], one)
    last_cover = (res.bottom.ztilde[pos] * u).inv()

    nfold = max(len(w2.top), 1)
    images: list[RationalFunction] = []
    for f, block in enumerate(full.letter_blocks):
        images.extend(RationalFunction.variable(f + 1, nfold) for _ in block)
    interior = [res.variables[fiber[0]].substitute(images)
                for fiber in opened.vertex_fibers]
    return interior, last_cover.substitute(images)


def _laurent_in(value: RationalFunction, basis: Sequence[RationalFunction]) -> bool:
    """Whether value is a constant times a Laurent monomial in the basis."""
    num = value.num
    den = value.den
    for entry in basis:
        if not entry.is_polynomial():
            return False
        factor = entry.as_polynomial()
        if factor.is_constant():
            continue
        while factor.divides(num):
            num = num.exact_div(factor)
        while factor.divides(den):
            den = den.exact_div(factor)
    return num.is_constant() and den.is_constant()
