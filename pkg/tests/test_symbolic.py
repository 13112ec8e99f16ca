"""Exact polynomial and matrix layer, checked by evaluation at rational points."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from braidseed import rootdata, symbolic
from braidseed.rootdata import make_cartan
from braidseed.symbolic import Mat, Polynomial, RationalFunction

from conftest import random_point, random_reduced_word


# ---------------------------------------------------------------------------
# Random expression trees, evaluated both through the library and in bare
# Fraction arithmetic.


def random_expression(rng: random.Random, nvars: int, depth: int):
    """Returns (RationalFunction, python evaluator)."""
    if depth == 0 or rng.random() < 0.3:
        if rng.random() < 0.5:
            k = rng.randint(1, nvars)
            return RationalFunction.variable(k, nvars), lambda pt, k=k: pt[k - 1]
        c = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        return RationalFunction.constant(c, nvars), lambda pt, c=c: c
    left, lf = random_expression(rng, nvars, depth - 1)
    right, rf = random_expression(rng, nvars, depth - 1)
    op = rng.choice("+-*")
    if op == "+":
        return left + right, lambda pt: lf(pt) + rf(pt)
    if op == "-":
        return left - right, lambda pt: lf(pt) - rf(pt)
    return left * right, lambda pt: lf(pt) * rf(pt)


def test_arithmetic_matches_fraction_evaluation():
    rng = random.Random(31)
    for _ in range(60):
        nvars = rng.randint(1, 4)
        expr, evaluator = random_expression(rng, nvars, 4)
        for _ in range(3):
            pt = random_point(rng, nvars)
            assert expr.eval_point(pt) == evaluator(pt)


def test_division_and_inverse():
    rng = random.Random(32)
    for _ in range(30):
        nvars = rng.randint(1, 3)
        a, fa = random_expression(rng, nvars, 3)
        b, fb = random_expression(rng, nvars, 3)
        if b.is_zero():
            with pytest.raises(ZeroDivisionError):
                a / b
            continue
        q = a / b
        for _ in range(5):
            pt = random_point(rng, nvars)
            try:
                expected = fa(pt) / fb(pt)
            except ZeroDivisionError:
                continue
            try:
                assert q.eval_point(pt) == expected
            except ZeroDivisionError:
                # The reduced denominator can only vanish where b did.
                assert fb(pt) == 0


def test_zero_division_raises():
    z = RationalFunction.zero(2)
    one = RationalFunction.constant(1, 2)
    with pytest.raises(ZeroDivisionError):
        one / z
    with pytest.raises(ZeroDivisionError):
        z.inv()


def test_polynomial_predicates():
    x = Polynomial.variable(1, 2)
    y = Polynomial.variable(2, 2)
    p = x * y - x
    assert not p.is_zero()
    assert not p.is_constant()
    assert (p - p).is_zero()
    assert Polynomial.constant(Fraction(3, 2), 2).constant_value() == Fraction(3, 2)
    assert p.variables_used() == (1, 2)
    assert p.total_degree() == 2
    with pytest.raises(ValueError):
        p.constant_value()


def test_string_form_graded_lex():
    x1 = Polynomial.variable(1, 3)
    x2 = Polynomial.variable(2, 3)
    x3 = Polynomial.variable(3, 3)
    p = x2 * x1 + x3 + x1 * x1 * x1 - Polynomial.constant(1, 3)
    assert str(p) == "z1^3 + z1*z2 + z3 - 1"
    assert str(Polynomial.constant(0, 3)) == "0"
    assert str(x3 - x2) == "-z2 + z3"
    q = RationalFunction(x1 + x2) / RationalFunction(x3 * x3)
    assert str(q) == "(z1 + z2)/(z3^2)"


def test_rational_normal_form_is_canonical():
    x = RationalFunction.variable(1, 2)
    y = RationalFunction.variable(2, 2)
    a = (x * x - y * y) / (x - y)
    assert a.is_polynomial()
    assert a == x + y
    assert hash(a) == hash(x + y)
    b = (x / y) / (x / y)
    assert b.is_constant() and b.constant_value() == 1


def test_gcd_and_exact_division():
    rng = random.Random(33)
    for _ in range(25):
        nvars = rng.randint(1, 3)
        a, _ = random_expression(rng, nvars, 3)
        b, _ = random_expression(rng, nvars, 3)
        pa, pb = a.as_polynomial(), b.as_polynomial()
        if pa.is_zero() or pb.is_zero():
            continue
        prod = pa * pb
        assert pa.divides(prod)
        assert prod.exact_div(pa) == pb
        g = pa.gcd(prod)
        assert g.divides(pa)
        with pytest.raises(ValueError):
            (pa * pa + Polynomial.constant(1, nvars)).exact_div(pa * pa) \
                if not pa.is_constant() else (_ for _ in ()).throw(ValueError)


def test_substitute_composes():
    rng = random.Random(34)
    for _ in range(20):
        outer, fo = random_expression(rng, 2, 3)
        imgs = []
        fis = []
        for _ in range(2):
            img, fi = random_expression(rng, 3, 2)
            imgs.append(img)
            fis.append(fi)
        composed = outer.substitute(imgs)
        for _ in range(4):
            pt = random_point(rng, 3)
            inner_vals = tuple(f(pt) for f in fis)
            try:
                expected = fo(inner_vals)
            except ZeroDivisionError:
                continue
            try:
                assert composed.eval_point(pt) == expected
            except ZeroDivisionError:
                continue


def test_lift_pads_variables():
    x = RationalFunction.variable(1, 1)
    lifted = x.lift(3)
    assert lifted.nvars == 3
    assert lifted.eval_point(random_point(random.Random(35), 3)) != None  # noqa: E711


# ---------------------------------------------------------------------------
# Matrices.


def brute_det(rows, pt):
    """Determinant by cofactor expansion on evaluated Fractions."""
    n = len(rows)
    vals = [[entry.eval_point(pt) for entry in row] for row in rows]

    def expand(mat):
        if len(mat) == 1:
            return mat[0][0]
        total = Fraction(0)
        for j in range(len(mat)):
            minor = [row[:j] + row[j + 1:] for row in mat[1:]]
            sign = -1 if j % 2 else 1
            total += sign * mat[0][j] * expand(minor)
        return total

    return expand(vals)


def random_matrix(rng: random.Random, size: int, nvars: int):
    rows = []
    for _ in range(size):
        row = []
        for _ in range(size):
            expr, _ = random_expression(rng, nvars, 1)
            row.append(expr)
        rows.append(row)
    return Mat(rows)


def test_matrix_det_and_product():
    rng = random.Random(36)
    for _ in range(15):
        size = rng.randint(2, 3)
        a = random_matrix(rng, size, 2)
        b = random_matrix(rng, size, 2)
        prod = a * b
        pt = random_point(rng, 2)
        try:
            det_a = a.det().eval_point(pt)
            det_b = b.det().eval_point(pt)
            det_ab = prod.det().eval_point(pt)
        except ZeroDivisionError:
            continue
        assert det_ab == det_a * det_b
        assert a.det().eval_point(pt) == brute_det(a.rows, pt)
        for r in range(size):
            for c in range(size):
                expected = sum((a[r, k].eval_point(pt) * b[k, c].eval_point(pt)
                                for k in range(size)), Fraction(0))
                assert prod[r, c].eval_point(pt) == expected


def test_matrix_identity_and_transpose():
    eye = Mat.identity(3, 2)
    m = random_matrix(random.Random(37), 3, 2)
    assert m * eye == m
    assert eye * m == m
    assert m.transpose().transpose() == m
    assert eye.is_unit_upper_triangular()


def test_principal_minors():
    one = RationalFunction.constant(1, 1)
    two = RationalFunction.constant(2, 1)
    zero = RationalFunction.zero(1)
    m = Mat([[one, two, zero], [zero, two, one], [one, zero, two]])
    assert symbolic.principal_minor(m, 1).constant_value() == 1
    assert symbolic.principal_minor(m, 2).constant_value() == 2
    assert symbolic.principal_minor(m, 3) == m.det()


# ---------------------------------------------------------------------------
# Braid letter matrices.


def test_b_letter_shape():
    z = RationalFunction.variable(1, 1)
    b = symbolic.b_letter(3, 1, z)
    assert b[0, 0] == z
    assert b[0, 1].constant_value() == -1
    assert b[1, 0].constant_value() == 1
    assert b[1, 1].is_zero()
    assert b[2, 2].constant_value() == 1
    assert b.det().constant_value() == 1
    inv = symbolic.b_letter_inv(3, 1, z)
    assert b * inv == Mat.identity(3, 1)


def test_chi_letter_torus():
    u = RationalFunction.variable(1, 1)
    chi = symbolic.chi_letter(3, 2, u)
    assert chi[1, 1] == u
    assert chi[2, 2] == u.inv()
    assert chi[0, 0].constant_value() == 1


def test_braid_matrix_factorization():
    a2 = make_cartan("A", 2)
    word = (1, 2, 1)
    m = symbolic.braid_matrix(a2, word)
    pieces = [symbolic.b_letter(3, word[k], RationalFunction.variable(k + 1, 3))
              for k in range(3)]
    assert m == pieces[0] * pieces[1] * pieces[2]
    with pytest.raises(ValueError):
        symbolic.braid_matrix(make_cartan("B", 2), (1, 2))


def test_weyl_lift_satisfies_braid_relations():
    rng = random.Random(38)
    for rank in (2, 3):
        datum = make_cartan("A", rank)
        for _ in range(20):
            word = random_reduced_word(rng, datum)
            if not word:
                continue
            w = rootdata.weyl_from_word(datum, word)
            canonical = rootdata.canonical_word(datum, w)
            assert symbolic.weyl_lift(datum, word) == symbolic.weyl_lift(datum, canonical)
            assert symbolic.weyl_lift_inv(datum, word) * symbolic.weyl_lift(datum, word) \
                == Mat.identity(rank + 1, 1)


def test_push_unipotent():
    rng = random.Random(39)
    size = 4
    for _ in range(20):
        nvars = 3
        entries = {}
        rows = []
        for r in range(size):
            row = []
            for c in range(size):
                if c < r:
                    row.append(RationalFunction.zero(nvars))
                elif c == r:
                    row.append(RationalFunction.constant(1, nvars))
                else:
                    expr, _ = random_expression(rng, nvars, 1)
                    row.append(expr)
                    entries[(r, c)] = expr
            rows.append(row)
        u = Mat(rows)
        i = rng.randint(1, size - 1)
        z, _ = random_expression(rng, nvars, 2)
        try:
            z_new, pushed = symbolic.push_unipotent(u, i, z)
        except ZeroDivisionError:
            continue
        assert pushed.is_unit_upper_triangular()
        left = u * symbolic.b_letter(size, i, z)
        right = symbolic.b_letter(size, i, z_new) * pushed
        assert left == right


def test_push_unipotent_degenerate():
    u = Mat.identity(2, 1)
    z = RationalFunction.variable(1, 1)
    # Plant a zero where the pushed matrix needs a unit.
    broken = Mat([[RationalFunction.constant(1, 1), RationalFunction.constant(1, 1)],
                  [RationalFunction.zero(1), RationalFunction.zero(1)]])
    with pytest.raises(ZeroDivisionError):
        symbolic.push_unipotent(broken, 1, z)
    z_new, pushed = symbolic.push_unipotent(u, 1, z)
    assert z_new == z
    assert pushed == u


# ---------------------------------------------------------------------------
# Defining equations of the matrix model.


def test_variety_equations_structure():
    a2 = make_cartan("A", 2)
    word = (1, 1, 2, 2, 1, 1, 2, 2)
    eqs = symbolic.variety_equations(a2, word)
    # Entries of B_word(z) * w0-lift-inverse below the antidiagonal must vanish
    # plus the unit conditions; all are polynomials in the letter variables.
    assert eqs
    for eq in eqs:
        assert eq.nvars == len(word)
    # A solution: walk to an actual point and check every equation vanishes.
    from braidseed import cluster, weave
    wv = weave.build_inductive(a2, word, "right")
    nv = sum(1 for row in wv.rows if isinstance(row, weave.Trivalent))
    values = [Fraction(k + 2) for k in range(nv)]
    pt = cluster.chart_point(wv, values)
    for eq in eqs:
        assert eq.eval_point(pt) == 0
