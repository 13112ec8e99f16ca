"""Cluster variables, charts, rotation, and the folded restriction.

The worked examples pin exact output strings; the randomized tests compare
the scan against the matrix-minor oracle and drive the chart maps at exact
rational points of the varieties.
"""

import random
from fractions import Fraction

import pytest

from braidseed import braid, cluster, rootdata, symbolic, weave
from braidseed import seed as seed_module
from braidseed.rootdata import make_cartan
from braidseed.symbolic import RationalFunction

from conftest import random_point, random_word, small_data


def seed_of(datum, word, side):
    return cluster.weave_seed(weave.build_inductive(datum, tuple(word), side))


PENTAGON_WORD = (1, 1, 2, 2, 1, 1, 2, 2)


def test_pentagon_word_scan():
    a2 = make_cartan("A", 2)
    s = seed_of(a2, PENTAGON_WORD, "right")
    assert [str(v) for v in s.variables] == [
        "z2",
        "z4",
        "z6",
        "-z2*z5*z6 + z2*z4*z7 + z2 - z6",
        "-z2*z5*z6*z8 + z2*z4*z7*z8 - z2*z4 + z2*z8 - z6*z8",
    ]
    assert s.frozen_indices() == (1, 2, 4)
    assert all(v.is_polynomial() for v in s.variables)

    left = seed_of(a2, PENTAGON_WORD, "left")
    assert [str(v) for v in left.variables] == [
        "z8",
        "z6",
        "z4",
        "-z5*z6*z8 + z4*z7*z8 - z4 + z8",
        "-z2*z5*z6*z8 + z2*z4*z7*z8 - z2*z4 + z2*z8 - z6*z8",
    ]
    assert left.frozen_indices() == (1, 2, 4)


def test_pentagon_mutation_chain():
    # Alternating mutations at the two mutable vertices walk through five
    # distinct clusters; five steps swap the two variables and ten restore
    # the seed exactly.
    a2 = make_cartan("A", 2)
    s = seed_of(a2, PENTAGON_WORD, "right")
    produced = []
    cur = s
    for k in (0, 3, 0, 3, 0):
        cur = seed_module.mutate_seed(cur, k)
        produced.append(str(cur.variables[k]))
    assert produced == [
        "-z5*z6 + z4*z7 + 1",
        "-z5*z6*z8 + z4*z7*z8 - z4 + z8",
        "z8",
        "z2",
        "-z2*z5*z6 + z2*z4*z7 + z2 - z6",
    ]
    assert cur.variables[0] == s.variables[3]
    assert cur.variables[3] == s.variables[0]
    assert cur.variables[1:3] == s.variables[1:3]
    for k in (3, 0, 3, 0, 3):
        cur = seed_module.mutate_seed(cur, k)
    assert cur.epsilon == s.epsilon
    assert cur.variables == s.variables
    assert cur.theta == s.theta
    # Mutating the deep vertex of the original seed lands on a plain letter.
    assert str(seed_module.mutate_seed(s, 3).variables[3]) == "z8"


NINE_WORD = (1, 1, 2, 2, 1, 1, 1, 2, 1)
NINE_VARS = [
    "z2",
    "z4",
    "z6",
    "z6*z7 - 1",
    "-z2*z5*z6*z7 + z2*z4*z8 + z2*z5 + z2*z7 - z6*z7 + 1",
    "z4*z6*z7*z9 - z4*z6*z8 - z4*z9 - 1",
]


def test_nine_letter_word():
    a2 = make_cartan("A", 2)
    s = seed_of(a2, NINE_WORD, "right")
    assert [str(v) for v in s.variables] == NINE_VARS
    assert s.frozen_indices() == (4, 5)
    m = seed_module.mutate_seed(s, 3)
    assert str(m.variables[3]) == "-z2*z5*z6 + z2*z4*z9 + z2 - z6"
    report = cluster.verify_exchange(s, 3)
    assert report.ok


def test_nine_letter_counterpart():
    # The word differing by one braid move in the last three letters gives
    # the mutated seed: pulling its variables back through the coordinate
    # change of the move matches mutate_seed at the deep vertex, up to
    # swapping the two frozen vertices.
    a2 = make_cartan("A", 2)
    s = seed_of(a2, NINE_WORD, "right")
    other = seed_of(a2, (1, 1, 2, 2, 1, 1, 2, 1, 2), "right")
    m = seed_module.mutate_seed(s, 3)
    perm = (0, 1, 2, 3, 5, 4)
    zv = lambda k: RationalFunction.variable(k, 9)  # noqa: E731
    images = [zv(k) for k in range(1, 7)]
    images += [zv(9), zv(7) * zv(9) - zv(8), zv(7)]
    n = len(s.vertices)
    for t in range(n):
        assert other.variables[t].substitute(images) == m.variables[perm[t]]
        assert other.vertices[t].frozen == m.vertices[perm[t]].frozen
    for a in range(n):
        for b in range(n):
            assert other.epsilon[a][b] == m.epsilon[perm[a]][perm[b]]


TWELVE_WORD = (2, 1, 3, 2, 2, 3, 1, 2, 2, 1, 3, 2)
TWELVE_VARS = [
    "z5",
    "-z6*z7 + z5*z8",
    "-z6*z7*z9 + z5*z8*z9 - z5",
    "-z6*z9 + z5*z10",
    "-z7*z9 + z5*z11",
    "z6*z7*z10*z11 - z5*z8*z10*z11 - z6*z7*z9*z12 + z5*z8*z9*z12"
    " - z8*z9 + z7*z10 + z6*z11 - z5*z12 + 1",
]


def test_twelve_letter_word():
    a3 = make_cartan("A", 3)
    s = seed_of(a3, TWELVE_WORD, "right")
    assert [str(v) for v in s.variables] == TWELVE_VARS
    assert s.frozen_indices() == (3, 4, 5)
    half = Fraction(1, 2)
    assert [list(row) for row in s.epsilon] == [
        [0, 1, -2, 1, 1, 0],
        [-1, 0, 1, 0, 0, 0],
        [2, -1, 0, -1, -1, 1],
        [-1, 0, 1, 0, 0, -half],
        [-1, 0, 1, 0, 0, -half],
        [0, 0, -1, half, half, 0],
    ]
    assert str(seed_module.mutate_seed(s, 1).variables[1]) == "z9"
    assert str(seed_module.mutate_seed(s, 2).variables[2]) == \
        "z6*z7*z9 - z5*z7*z10 - z5*z6*z11 + z5^2*z12 - z5"
    assert str(seed_module.mutate_seed(s, 0).variables[0]) == (
        "-z6*z7*z8*z9^2 + z5*z8^2*z9^2 + z6*z7^2*z9*z10 - z5*z7*z8*z9*z10"
        " + z6^2*z7*z9*z11 - z5*z6*z8*z9*z11 - z5*z6*z7*z10*z11"
        " + z5^2*z8*z10*z11 + 2*z6*z7*z9 - 2*z5*z8*z9 + z5")
    for k in (0, 1, 2):
        assert cluster.verify_exchange(s, k).ok


def test_twelve_letter_rotation():
    # Rotating the twelve letter word twice forward equals shifting every
    # coordinate down by two, so the rotated seed's variables match the
    # original ones under z_i -> z_{i-2}.
    a3 = make_cartan("A", 3)
    back = (1, 2, 2, 1, 3, 2, 2, 3, 1, 2, 2, 1)
    assert cluster.rotate_word(a3, cluster.rotate_word(a3, back)) == TWELVE_WORD
    s = seed_of(a3, TWELVE_WORD, "right")
    rotated = seed_of(a3, back, "right")
    n = 12
    shift = [RationalFunction.variable(k - 2, n) if k > 2
             else RationalFunction.zero(n) for k in range(1, n + 1)]
    for v in rotated.variables:
        assert min(v.num.variables_used() + v.den.variables_used()) > 2
    b2 = seed_module.mutate_seed(rotated, 0).variables[0]
    assert rotated.variables[1].substitute(shift) == s.variables[0]
    assert b2.substitute(shift) == s.variables[1]
    assert rotated.variables[5].substitute(shift) == s.variables[3]


FOLDED_WORD = (1, 1, 2, 2, 1, 2, 2, 1, 2)


def test_folded_word():
    b2 = make_cartan("B", 2)
    fs = cluster.fold_restrict(b2, FOLDED_WORD, "right")
    s = fs.seed
    half = Fraction(1, 2)
    assert [list(row) for row in s.epsilon] == [
        [0, 0, -1, 1, 0],
        [0, 0, -1, 0, 1],
        [2, 1, 0, -2, 1],
        [-1, 0, 1, 0, -half],
        [0, -1, -1, 1, 0],
    ]
    assert [v.d for v in s.vertices] == [2, 1, 1, 2, 1]
    assert s.frozen_indices() == (3, 4)
    assert [str(v) for v in s.variables] == [
        "z2",
        "z4",
        "z7",
        "-z2*z5*z7 + z2*z4*z8 - z7",
        "-z4*z8^2 + z4*z7*z9 - z7",
    ]
    assert fs.cover.weave.top == (1, 3, 1, 3, 2, 2, 1, 3, 2, 2, 1, 3, 2)
    assert [str(i) for i in fs.images] == [
        "z1", "z1", "z2", "z2", "z3", "z4", "z5",
        "z5", "z6", "z7", "z8", "z8", "z9"]
    # Every member of a vertex fiber restricts to the folded variable.
    images = list(fs.images)
    for t, fiber in enumerate(fs.cover.vertex_fibers):
        for c in fiber:
            assert fs.cover_variables[c].substitute(images) == s.variables[t]
    m = seed_module.mutate_seed(s, 2)
    assert m.variables[2].is_polynomial()
    assert str(m.variables[2]) == (
        "z2^2*z5^2*z7 - 2*z2^2*z4*z5*z8 + z2^2*z4^2*z9 - z2^2*z4"
        " + 2*z2*z5*z7 - 2*z2*z4*z8 + z7")


def test_folding_guards():
    a2 = make_cartan("A", 2)
    with pytest.raises(ValueError):
        cluster.fold_restrict(a2, (1, 2, 1), "right")
    w = weave.build_inductive(a2, (1, 2, 1), "right")
    with pytest.raises(ValueError):
        cluster.folded_variables(w)


def test_minors_oracle_matches_scan():
    # The scan's variables, computed through framed weight vectors, agree
    # with the top-left minors of the explicit matrix product.
    rng = random.Random(91)
    checked = 0
    for letter, rank in (("A", 2), ("A", 3)):
        datum = make_cartan(letter, rank)
        for _ in range(10):
            word = random_word(rng, datum, max_len=7)
            for side in ("left", "right"):
                w = weave.build_inductive(datum, word, side)
                minors = cluster.minors_oracle(w)
                values = cluster.scan(w).variables
                assert len(minors) == len(values)
                for m, v in zip(minors, values):
                    assert symbolic.as_rational(m) == v
                checked += 1
    assert checked == 40


def test_minors_oracle_rejects_scrambled_weave():
    a2 = make_cartan("A", 2)
    scrambled = weave.Weave(a2, (1, 2, 1), (weave.BraidShift(0),))
    with pytest.raises(ValueError, match="inductive"):
        cluster.minors_oracle(scrambled)


def test_chart_point_round_trip():
    # chart_point gives an exact point of the variety whose scan values are
    # the requested ones, and chart_map is its symbolic form.
    rng = random.Random(57)
    hits = 0
    for letter, rank in (("A", 2), ("A", 3)):
        datum = make_cartan(letter, rank)
        for _ in range(10):
            word = random_word(rng, datum, max_len=6)
            side = rng.choice(("left", "right"))
            w = weave.build_inductive(datum, word, side)
            nv = len(weave.vertices(w))
            if nv == 0:
                continue
            values = random_point(rng, nv, nonzero=True)
            try:
                point = cluster.chart_point(w, values)
            except ValueError:
                continue
            hits += 1
            for eq in symbolic.variety_equations(datum, word):
                assert eq.eval_point(point) == 0
            scanned = cluster.scan(w).variables
            for v, expected in zip(scanned, values):
                assert v.eval_point(point) == expected
            for entry, coord in zip(cluster.chart_map(w), point):
                assert entry.eval_point(values) == coord
    assert hits >= 10


def test_chart_point_rejects_zero_values():
    a2 = make_cartan("A", 2)
    w = weave.build_inductive(a2, (1, 1, 2), "right")
    with pytest.raises(ValueError):
        cluster.chart_point(w, [Fraction(0)])


def test_rotate_map_lands_on_rotated_variety():
    rng = random.Random(23)
    hits = 0
    for letter, rank in (("A", 2), ("A", 3)):
        datum = make_cartan(letter, rank)
        _, w0word = rootdata.longest_element(datum)
        for _ in range(6):
            word = w0word + random_word(rng, datum, max_len=3)
            rotated = cluster.rotate_word(datum, word)
            images = cluster.rotate_map(datum, word)
            w = weave.build_inductive(datum, word, "right")
            nv = len(weave.vertices(w))
            values = random_point(rng, nv, nonzero=True)
            try:
                point = cluster.chart_point(w, values)
            except ValueError:
                continue
            try:
                target = tuple(img.eval_point(point) for img in images)
            except ZeroDivisionError:
                continue
            hits += 1
            for eq in symbolic.variety_equations(datum, rotated):
                assert eq.eval_point(target) == 0
    assert hits >= 8


def test_rotate_map_requires_full_product():
    a2 = make_cartan("A", 2)
    with pytest.raises(ValueError):
        cluster.rotate_map(a2, (1, 2))


def test_star_map():
    a3 = make_cartan("A", 3)
    word, relabel = cluster.star_map(a3, (1, 2, 3, 1))
    assert word == (3, 2, 1, 3)
    assert relabel == (3, 2, 1)
    a2 = make_cartan("A", 2)
    assert cluster.star_map(a2, (1, 2, 1))[0] == (2, 1, 2)


def test_dt_map_stays_on_variety():
    # The composite of all single rotations, written back through the scan,
    # satisfies the defining equations identically, not just at points.
    a2 = make_cartan("A", 2)
    for word in ((1, 2, 1, 2), (1, 1, 2, 1, 2)):
        images = cluster.dt_map(a2, word)
        assert len(images) == len(word)
        for eq in symbolic.variety_equations(a2, word):
            assert eq.substitute(list(images)).is_zero()
        plain = [RationalFunction.variable(k + 1, len(word))
                 for k in range(len(word))]
        assert list(images) != plain


def test_quasi_cluster_small_words():
    rng = random.Random(40)
    hits = 0
    for datum in small_data():
        if datum.rank > 2 and datum.letter != "A":
            continue
        _, w0word = rootdata.longest_element(datum)
        count = 2 if datum.rank > 2 else 5
        for _ in range(count):
            word = (rng.randint(1, datum.rank),) + w0word \
                + random_word(rng, datum, max_len=2)
            report = cluster.quasi_cluster_check(datum, word)
            assert report.ok, (datum.letter, word, report.notes)
            hits += 1
    assert hits >= 15


def test_quasi_cluster_guards():
    a2 = make_cartan("A", 2)
    with pytest.raises(ValueError):
        cluster.quasi_cluster_check(a2, (1, 2))
    with pytest.raises(ValueError, match="redundant"):
        cluster.quasi_cluster_check(a2, (1, 2, 1))


def test_equivalence_moves_preserve_variables():
    rng = random.Random(3)
    checked = 0
    for letter, rank in (("A", 2), ("A", 3)):
        datum = make_cartan(letter, rank)
        for _ in range(25):
            word = random_word(rng, datum, max_len=7, min_len=3)
            side = rng.choice(("left", "right"))
            w = weave.build_inductive(datum, word, side)
            moves = weave.find_equivalences(w)
            if not moves:
                continue
            other = weave.apply_equivalence(w, moves[rng.randrange(len(moves))])
            assert cluster.cluster_variables(other) == \
                cluster.cluster_variables(w)
            checked += 1
    assert checked >= 15


def test_exchange_identity_random():
    rng = random.Random(77)
    checked = 0
    for datum in small_data():
        for _ in range(4):
            word = random_word(rng, datum, max_len=6)
            side = rng.choice(("left", "right"))
            s = seed_of(datum, word, side)
            for k in s.mutable_indices():
                assert cluster.verify_exchange(s, k).ok
                checked += 1
    assert checked >= 10


def test_verify_exchange_guards():
    a2 = make_cartan("A", 2)
    s = seed_of(a2, PENTAGON_WORD, "right")
    with pytest.raises(ValueError, match="frozen"):
        cluster.verify_exchange(s, 1)
    bare = seed_module.exchange_matrix(
        weave.build_inductive(a2, PENTAGON_WORD, "right"))
    with pytest.raises(ValueError, match="variables"):
        cluster.verify_exchange(bare, 0)
