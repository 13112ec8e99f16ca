"""Weyl group layer checked against an independent permutation model of S_n."""

from __future__ import annotations

import itertools
import random

import pytest

from braidseed import rootdata
from braidseed.rootdata import make_cartan, parse_type

from conftest import random_reduced_word, random_word, small_data


# ---------------------------------------------------------------------------
# Permutation oracle for type A: S_{n+1} acting on {1, ..., n+1}, s_i = (i, i+1).


def perm_identity(n: int):
    return tuple(range(1, n + 2))


def perm_simple(n: int, i: int):
    p = list(range(1, n + 2))
    p[i - 1], p[i] = p[i], p[i - 1]
    return tuple(p)


def perm_mul(a, b):
    """(a * b)(x) = a(b(x)), matching s_{i1} ... s_{ik} read left to right."""
    return tuple(a[b[x] - 1] for x in range(len(a)))


def perm_from_word(n: int, word):
    p = perm_identity(n)
    for i in word:
        p = perm_mul(p, perm_simple(n, i))
    return p


def perm_inversions(p) -> int:
    return sum(1 for a, b in itertools.combinations(range(len(p)), 2) if p[a] > p[b])


def perm_root_image(p, i: int):
    """p(e_i - e_{i+1}) in simple root coordinates."""
    a, b = p[i - 1], p[i]
    coords = [0] * (len(p) - 1)
    lo, hi, sign = (a, b, 1) if a < b else (b, a, -1)
    for k in range(lo, hi):
        coords[k - 1] = sign
    return tuple(coords)


def test_weyl_matches_permutations_type_a():
    rng = random.Random(11)
    for rank in (2, 3):
        datum = make_cartan("A", rank)
        for _ in range(60):
            word = random_word(rng, datum, max_len=8)
            w = rootdata.weyl_from_word(datum, word)
            p = perm_from_word(rank, word)
            assert w.length() == perm_inversions(p)
            for i in datum.nodes():
                assert w.root(rootdata.simple_root(datum, i)) == perm_root_image(p, i)


def test_weyl_equality_follows_permutations():
    rng = random.Random(12)
    datum = make_cartan("A", 3)
    for _ in range(80):
        w1 = random_word(rng, datum, max_len=6)
        w2 = random_word(rng, datum, max_len=6)
        same = perm_from_word(3, w1) == perm_from_word(3, w2)
        assert (rootdata.weyl_from_word(datum, w1)
                == rootdata.weyl_from_word(datum, w2)) == same


def test_is_reduced_matches_inversion_count():
    rng = random.Random(13)
    datum = make_cartan("A", 3)
    for _ in range(100):
        word = random_word(rng, datum, max_len=7)
        expected = perm_inversions(perm_from_word(3, word)) == len(word)
        assert rootdata.is_reduced(datum, word) == expected


# ---------------------------------------------------------------------------
# Cartan data.


def test_cartan_shapes():
    for datum in small_data():
        n = datum.rank
        for i in datum.nodes():
            assert datum.a(i, i) == 2
            for j in datum.nodes():
                if i != j:
                    assert datum.a(i, j) <= 0
                    # d_i a_ij is symmetric in (i, j).
                    assert datum.d(i) * datum.a(i, j) == datum.d(j) * datum.a(j, i)


def test_folded_types_carry_covers():
    b2 = make_cartan("B", 2)
    assert b2.cartan == ((2, -1), (-2, 2))
    assert b2.multiplier == (2, 1)
    assert b2.unfolding.datum.name == "A3"
    assert b2.unfolding.fibers == ((1, 3), (2,))

    c3 = make_cartan("C", 3)
    assert c3.multiplier == (2, 2, 1)
    assert c3.unfolding.datum.name == "A5"

    b3 = make_cartan("B", 3)
    assert b3.multiplier == (2, 1, 1)
    assert b3.unfolding.datum.name == "D4"

    g2 = make_cartan("G", 2)
    assert g2.unfolding.datum.name == "D4"
    assert sorted(len(f) for f in g2.unfolding.fibers) == [1, 3]


def test_fibers_commute_in_cover():
    for name in ("B2", "C2", "C3", "B3", "G2", "F4"):
        datum = parse_type(name)
        cover = datum.unfolding.datum
        for fiber in datum.unfolding.fibers:
            for s, t in itertools.combinations(fiber, 2):
                assert cover.a(s, t) == 0


def test_parse_type_rejects_garbage():
    with pytest.raises(ValueError):
        parse_type("A")
    with pytest.raises(ValueError):
        parse_type("Z9")
    with pytest.raises(ValueError):
        parse_type("Axy")
    assert parse_type(" b2 ").name == "B2"


# ---------------------------------------------------------------------------
# Positive roots, longest element, star.


def test_positive_root_counts():
    expected = {"A1": 1, "A2": 3, "A3": 6, "B2": 4, "C2": 4, "G2": 6, "C3": 9, "D4": 12}
    for name, count in expected.items():
        datum = parse_type(name)
        roots = rootdata.positive_roots(datum)
        assert len(roots) == count
        assert len(set(roots)) == count
        for root in roots:
            assert all(c >= 0 for c in root)


def test_longest_element():
    for datum in small_data():
        w0, word = rootdata.longest_element(datum)
        assert rootdata.is_reduced(datum, word)
        assert w0.length() == len(word) == len(rootdata.positive_roots(datum))
        assert (w0 * w0).is_identity()
        # w0 negates the positive system, permuting simples by the star map.
        for i in datum.nodes():
            image = w0.root(rootdata.simple_root(datum, i))
            minus_star = tuple(-c for c in rootdata.simple_root(datum, rootdata.star(datum, i)))
            assert image == minus_star


def test_star_involution():
    a3 = make_cartan("A", 3)
    assert [rootdata.star(a3, i) for i in a3.nodes()] == [3, 2, 1]
    for name in ("A2", "B2", "C3", "D4"):
        datum = parse_type(name)
        for i in datum.nodes():
            assert rootdata.star(datum, rootdata.star(datum, i)) == i


# ---------------------------------------------------------------------------
# Canonical words and Bruhat order, brute-forced on small groups.


def all_elements(datum):
    """BFS over right multiplication; the full Weyl group for small ranks."""
    seen = {rootdata.identity(datum)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for w in frontier:
            for i in datum.nodes():
                u = w * rootdata.simple_reflection(datum, i)
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
    return seen


def all_reduced_words(datum, w):
    if w.is_identity():
        return {()}
    out = set()
    for i in datum.nodes():
        si = rootdata.simple_reflection(datum, i)
        if not rootdata.left_ascent(datum, w, i):
            for tail in all_reduced_words(datum, si * w):
                out.add((i,) + tail)
    return out


def test_canonical_word_is_lex_smallest():
    for name in ("A3", "B2"):
        datum = parse_type(name)
        for w in all_elements(datum):
            words = all_reduced_words(datum, w)
            assert rootdata.canonical_word(datum, w) == min(words)


def test_group_orders():
    assert len(all_elements(make_cartan("A", 3))) == 24
    assert len(all_elements(make_cartan("B", 2))) == 8
    assert len(all_elements(make_cartan("G", 2))) == 12


def bruhat_by_subwords(datum, v, w):
    word = rootdata.canonical_word(datum, w)
    targets = {v}
    found = set()
    for mask in range(1 << len(word)):
        sub = tuple(word[k] for k in range(len(word)) if mask >> k & 1)
        if len(sub) == v.length():
            found.add(rootdata.weyl_from_word(datum, sub))
    return bool(targets & found)


def test_bruhat_leq_matches_subword_property():
    datum = make_cartan("A", 3)
    elements = sorted(all_elements(datum), key=lambda w: w.length())[:14]
    for v in elements:
        for w in elements:
            assert rootdata.bruhat_leq(datum, v, w) == bruhat_by_subwords(datum, v, w)


# ---------------------------------------------------------------------------
# Demazure steps, root sequences, braid moves.


def test_demazure_step_absorbs_descents():
    rng = random.Random(14)
    for datum in small_data():
        for _ in range(40):
            word = random_word(rng, datum, max_len=8)
            w = rootdata.identity(datum)
            for i in word:
                before = w.length()
                w, grew = rootdata.demazure_step(datum, w, i)
                assert w.length() == before + (1 if grew else 0)
                assert not rootdata.right_ascent(datum, w, i)


def test_root_sequence_of_reduced_word_is_the_inversion_set():
    rng = random.Random(15)
    for datum in small_data():
        positives = set(rootdata.positive_roots(datum))
        for _ in range(25):
            word = random_reduced_word(rng, datum)
            seq = rootdata.root_sequence(datum, word)
            roots = [entry[0] for entry in seq]
            assert len(set(roots)) == len(word)
            assert set(roots) <= positives


def test_root_coroot_pairing_is_cartan_on_simples():
    for datum in small_data():
        for i in datum.nodes():
            for j in datum.nodes():
                seq_i = rootdata.root_sequence(datum, (i,))[0]
                seq_j = rootdata.root_sequence(datum, (j,))[0]
                assert rootdata.pairing(datum, seq_j[0], seq_i[1]) == datum.a(i, j)


def test_apply_braid_move_preserves_element():
    datum = make_cartan("A", 2)
    assert rootdata.apply_braid_move(datum, (1, 2, 1), 0) == (2, 1, 2)
    b2 = make_cartan("B", 2)
    assert rootdata.apply_braid_move(b2, (1, 2, 1, 2), 0) == (2, 1, 2, 1)
    rng = random.Random(16)
    for datum in small_data():
        if datum.rank == 1:
            continue
        for _ in range(30):
            word = random_reduced_word(rng, datum)
            element = rootdata.weyl_from_word(datum, word)
            for pos in range(len(word)):
                try:
                    moved = rootdata.apply_braid_move(datum, word, pos)
                except ValueError:
                    continue
                assert rootdata.weyl_from_word(datum, moved) == element
                assert rootdata.apply_braid_move(datum, moved, pos) == word


def test_bring_to_front_scripts():
    rng = random.Random(17)
    for datum in small_data():
        for _ in range(30):
            word = random_reduced_word(rng, datum)
            if not word:
                continue
            w = rootdata.weyl_from_word(datum, word)
            for i in datum.nodes():
                if rootdata.left_ascent(datum, w, i):
                    with pytest.raises(ValueError):
                        rootdata.bring_to_front(datum, word, i)
                else:
                    script = rootdata.bring_to_front(datum, word, i)
                    moved = rootdata.apply_braid_moves(datum, word, script)
                    assert moved[0] == i
                    assert rootdata.weyl_from_word(datum, moved) == w


def test_bring_to_back_scripts():
    rng = random.Random(18)
    for datum in small_data():
        for _ in range(30):
            word = random_reduced_word(rng, datum)
            if not word:
                continue
            w = rootdata.weyl_from_word(datum, word)
            for i in datum.nodes():
                if not rootdata.right_ascent(datum, w, i):
                    script = rootdata.bring_to_back(datum, word, i)
                    moved = rootdata.apply_braid_moves(datum, word, script)
                    assert moved[-1] == i
                    assert rootdata.weyl_from_word(datum, moved) == w
