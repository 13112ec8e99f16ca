"""
symbolic: exact multivariate arithmetic and braid matrix realizations.

Polynomials live in QQ[z1, ..., zn] with graded reverse lexicographic term
order and z1 < z2 < ... < zn; this single convention fixes the printed form
of every cluster variable ("-z5*z6 + z4*z7 + 1" style, descending terms).
Rational functions are reduced fractions whose denominator is monic, so
string equality is semantic equality.

The heavy lifting is done by sympy's sparse polynomial rings; this module
owns the ring cache, the cross-ring lifting (a polynomial in fewer
variables embeds into a bigger ring on demand), the canonical printer, and
the small matrix layer used for flag computations: B_i(z) is the identity
with the block [[z, -1], [1, 0]] at rows i, i+1, and a braid word maps to
the product of its letter matrices.
"""

from __future__ import annotations

import functools
from fractions import Fraction
from typing import Iterable, Sequence

from sympy import QQ
from sympy.polys.orderings import grevlex
from sympy.polys.rings import PolyRing

from .rootdata import CartanDatum


@functools.lru_cache(maxsize=None)
def _ring(nvars: int) -> PolyRing:
    if nvars < 1:
        raise ValueError("rings need at least one variable")
    names = [f"z{k}" for k in range(1, nvars + 1)]
    return PolyRing(names, QQ, grevlex)


def _to_qq(c) -> object:
    if isinstance(c, Fraction):
        return QQ(c.numerator, c.denominator)
    if isinstance(c, int):
        return QQ(c)
    return c


class Polynomial:
    """A sparse exact polynomial in z1..zn, n recorded on the value."""

    __slots__ = ("nvars", "raw")

    def __init__(self, nvars: int, raw):
        self.nvars = nvars
        self.raw = raw

    # -- constructors -------------------------------------------------

    @staticmethod
    def constant(value, nvars: int = 1) -> "Polynomial":
        ring = _ring(nvars)
        return Polynomial(nvars, ring.ground_new(_to_qq(value)))

    @staticmethod
    def variable(k: int, nvars: int) -> "Polynomial":
        """The generator z_k inside QQ[z1..z_nvars]."""
        if not 1 <= k <= nvars:
            raise ValueError(f"z{k} is not a generator of a {nvars}-variable ring")
        return Polynomial(nvars, _ring(nvars).gens[k - 1])

    def lift(self, nvars: int) -> "Polynomial":
        if nvars == self.nvars:
            return self
        if nvars < self.nvars:
            used = self.variables_used()
            if used and max(used) > nvars:
                raise ValueError("cannot shrink a polynomial that uses high variables")
            ring = _ring(nvars)
            return Polynomial(nvars, ring.from_dict(
                {m[:nvars]: c for m, c in self.raw.to_dict().items()}))
        ring = _ring(nvars)
        pad = (0,) * (nvars - self.nvars)
        return Polynomial(nvars, ring.from_dict(
            {m + pad: c for m, c in self.raw.to_dict().items()}))

    # -- structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.raw

    def is_constant(self) -> bool:
        return self.raw.is_ground

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        terms = self.raw.to_dict()
        if not terms:
            return Fraction(0)
        c = next(iter(terms.values()))
        return Fraction(int(QQ.numer(c)), int(QQ.denom(c)))

    def variables_used(self) -> tuple[int, ...]:
        used = set()
        for monom in self.raw.monoms():
            for k, e in enumerate(monom):
                if e:
                    used.add(k + 1)
        return tuple(sorted(used))

    def total_degree(self) -> int:
        return max((sum(m) for m in self.raw.monoms()), default=0)

    # -- arithmetic ----------------------------------------------------

    @staticmethod
    def _pair(a: "Polynomial", b: "Polynomial"):
        n = max(a.nvars, b.nvars)
        return a.lift(n), b.lift(n), n

    def __add__(self, other) -> "Polynomial":
        other = as_polynomial(other, self.nvars)
        a, b, n = Polynomial._pair(self, other)
        return Polynomial(n, a.raw + b.raw)

    def __sub__(self, other) -> "Polynomial":
        other = as_polynomial(other, self.nvars)
        a, b, n = Polynomial._pair(self, other)
        return Polynomial(n, a.raw - b.raw)

    def __mul__(self, other) -> "Polynomial":
        other = as_polynomial(other, self.nvars)
        a, b, n = Polynomial._pair(self, other)
        return Polynomial(n, a.raw * b.raw)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.nvars, -self.raw)

    def __pow__(self, e: int) -> "Polynomial":
        if e < 0:
            raise ValueError("negative power of a polynomial")
        return Polynomial(self.nvars, self.raw ** e)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        a, b, _ = Polynomial._pair(self, other)
        return a.raw == b.raw

    def __hash__(self):
        # PolyElement caches its hash and sympy mutates elements in place
        # during division, so hash from a fresh snapshot of the terms.
        return hash((self.nvars, frozenset(self.raw.items())))

    def gcd(self, other: "Polynomial") -> "Polynomial":
        a, b, n = Polynomial._pair(self, other)
        return Polynomial(n, a.raw.gcd(b.raw))

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        a, b, n = Polynomial._pair(self, other)
        q, r = divmod(a.raw, b.raw)
        if r:
            raise ValueError("division is not exact")
        return Polynomial(n, q)

    def divides(self, other: "Polynomial") -> bool:
        a, b, _ = Polynomial._pair(self, other)
        return not (b.raw % a.raw)

    def eval_point(self, values: Sequence[Fraction]) -> Fraction:
        if len(values) < self.nvars:
            raise ValueError("not enough coordinates")
        total = Fraction(0)
        for monom, coeff in self.raw.to_dict().items():
            term = Fraction(int(QQ.numer(coeff)), int(QQ.denom(coeff)))
            for k, e in enumerate(monom):
                if e:
                    term *= values[k] ** e
            total += term
        return total

    def substitute(self, images: Sequence["RationalFunction"]) -> "RationalFunction":
        """Evaluate at rational-function images of z1..zn, exactly."""
        if len(images) < self.nvars:
            raise ValueError("not enough images")
        total = RationalFunction.zero(max((im.nvars for im in images), default=1))
        for monom, coeff in self.raw.to_dict().items():
            term = RationalFunction.constant(
                Fraction(int(QQ.numer(coeff)), int(QQ.denom(coeff))))
            for k, e in enumerate(monom):
                if e:
                    term = term * images[k] ** e
            total = total + term
        return total

    # -- printing -------------------------------------------------------

    def __str__(self) -> str:
        terms = sorted(self.raw.terms(), key=lambda t: grevlex(t[0]), reverse=True)
        if not terms:
            return "0"
        parts: list[str] = []
        for monom, coeff in terms:
            factors = [
                f"z{k + 1}" if e == 1 else f"z{k + 1}^{e}"
                for k, e in enumerate(monom) if e
            ]
            body = "*".join(factors)
            mag = abs(Fraction(int(QQ.numer(coeff)), int(QQ.denom(coeff))))
            if not factors:
                body = str(mag)
            elif mag != 1:
                body = f"{mag}*{body}"
            if not parts:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(f" + {body}" if coeff > 0 else f" - {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({self})"


def as_polynomial(value, nvars: int = 1) -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    if isinstance(value, (int, Fraction)):
        return Polynomial.constant(value, nvars)
    raise TypeError(f"cannot coerce {value!r} to a polynomial")


class RationalFunction:
    """A reduced fraction of polynomials with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial | None = None, *,
                 reduced: bool = False):
        if den is None:
            den = Polynomial.constant(1, num.nvars)
        n = max(num.nvars, den.nvars)
        num, den = num.lift(n), den.lift(n)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not reduced:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den

    @property
    def nvars(self) -> int:
        return self.num.nvars

    @staticmethod
    def zero(nvars: int = 1) -> "RationalFunction":
        return RationalFunction(Polynomial.constant(0, nvars), reduced=True)

    @staticmethod
    def constant(value, nvars: int = 1) -> "RationalFunction":
        return RationalFunction(Polynomial.constant(value, nvars), reduced=True)

    @staticmethod
    def variable(k: int, nvars: int) -> "RationalFunction":
        return RationalFunction(Polynomial.variable(k, nvars), reduced=True)

    def lift(self, nvars: int) -> "RationalFunction":
        if nvars == self.nvars:
            return self
        return RationalFunction(self.num.lift(nvars), self.den.lift(nvars),
                                reduced=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        return self.num.constant_value() / self.den.constant_value()

    def as_polynomial(self) -> Polynomial:
        if not self.is_polynomial():
            raise ValueError("denominator is not constant")
        c = self.den.constant_value()
        if c == 1:
            return self.num
        return self.num * Polynomial.constant(Fraction(1, 1) / c, self.nvars)

    @staticmethod
    def _pair(a: "RationalFunction", b: "RationalFunction"):
        n = max(a.nvars, b.nvars)
        return a.lift(n), b.lift(n)

    def __add__(self, other) -> "RationalFunction":
        other = as_rational(other, self.nvars)
        a, b = RationalFunction._pair(self, other)
        if a.den == b.den:
            return RationalFunction(a.num + b.num, a.den)
        return RationalFunction(a.num * b.den + b.num * a.den, a.den * b.den)

    def __sub__(self, other) -> "RationalFunction":
        other = as_rational(other, self.nvars)
        return self + (-other)

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den, reduced=True)

    def __mul__(self, other) -> "RationalFunction":
        other = as_rational(other, self.nvars)
        a, b = RationalFunction._pair(self, other)
        return RationalFunction(a.num * b.num, a.den * b.den)

    def __truediv__(self, other) -> "RationalFunction":
        other = as_rational(other, self.nvars)
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        a, b = RationalFunction._pair(self, other)
        return RationalFunction(a.num * b.den, a.den * b.num)

    def __pow__(self, e: int) -> "RationalFunction":
        if e == 0:
            return RationalFunction.constant(1, self.nvars)
        if e < 0:
            inv = RationalFunction(self.den, self.num)
            return inv ** (-e)
        return RationalFunction(self.num ** e, self.den ** e, reduced=True)

    def inv(self) -> "RationalFunction":
        return RationalFunction(self.den, self.num)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RationalFunction.constant(other, self.nvars)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        a, b = RationalFunction._pair(self, other)
        return a.num == b.num and a.den == b.den

    def __hash__(self):
        return hash((self.num, self.den))

    def eval_point(self, values: Sequence[Fraction]) -> Fraction:
        den = self.den.eval_point(values)
        if den == 0:
            raise ZeroDivisionError("denominator vanishes at the point")
        return self.num.eval_point(values) / den

    def substitute(self, images: Sequence["RationalFunction"]) -> "RationalFunction":
        num = self.num.substitute(images)
        den = self.den.substitute(images)
        return num / den

    def __str__(self) -> str:
        if self.den.is_constant() and self.den.constant_value() == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RationalFunction({self})"


def as_rational(value, nvars: int = 1) -> RationalFunction:
    if isinstance(value, RationalFunction):
        return value
    if isinstance(value, Polynomial):
        return RationalFunction(value, reduced=True)
    if isinstance(value, (int, Fraction)):
        return RationalFunction.constant(value, nvars)
    raise TypeError(f"cannot coerce {value!r} to a rational function")


def _reduce(num: Polynomial, den: Polynomial) -> tuple[Polynomial, Polynomial]:
    if num.is_zero():
        return num, Polynomial.constant(1, num.nvars)
    if not den.is_constant():
        g = num.gcd(den)
        if not g.is_constant():
            num, den = num.exact_div(g), den.exact_div(g)
    # Make the denominator monic; over QQ this fixes the representative.
    lc = den.raw.LC
    if lc != QQ(1):
        num = Polynomial(num.nvars, num.raw.quo_ground(lc))
        den = Polynomial(den.nvars, den.raw.quo_ground(lc))
    return num, den


# ---------------------------------------------------------------------------
# Matrices over the rational function field.


class Mat:
    """A dense matrix of RationalFunction entries."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable[RationalFunction]]):
        self.rows = tuple(tuple(row) for row in rows)

    @property
    def size(self) -> int:
        return len(self.rows)

    def __getitem__(self, key: tuple[int, int]) -> RationalFunction:
        return self.rows[key[0]][key[1]]

    @staticmethod
    def identity(size: int, nvars: int = 1) -> "Mat":
        one = RationalFunction.constant(1, nvars)
        zero = RationalFunction.zero(nvars)
        return Mat([[one if i == j else zero for j in range(size)]
                    for i in range(size)])

    def __mul__(self, other: "Mat") -> "Mat":
        n = self.size
        assert other.size == n
        return Mat([
            [sum((self.rows[i][k] * other.rows[k][j] for k in range(n)),
                 RationalFunction.zero()) for j in range(n)]
            for i in range(n)
        ])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self.rows == other.rows

    def transpose(self) -> "Mat":
        return Mat(zip(*self.rows))

    def det(self) -> RationalFunction:
        """Determinant by cofactor expansion; fine at flag-variety sizes."""
        n = self.size
        if n == 0:
            return RationalFunction.constant(1)
        if n == 1:
            return self.rows[0][0]
        total = RationalFunction.zero(self.rows[0][0].nvars)
        for j in range(n):
            entry = self.rows[0][j]
            if entry.is_zero():
                continue
            minor = Mat([row[:j] + row[j + 1:] for row in self.rows[1:]])
            term = entry * minor.det()
            total = total + term if j % 2 == 0 else total - term
        return total

    def is_upper_triangular(self) -> bool:
        return all(self.rows[i][j].is_zero()
                   for i in range(self.size) for j in range(i))

    def is_unit_upper_triangular(self) -> bool:
        if not self.is_upper_triangular():
            return False
        one = RationalFunction.constant(1)
        return all(self.rows[i][i] == one for i in range(self.size))

    def substitute(self, images: Sequence[RationalFunction]) -> "Mat":
        return Mat([[entry.substitute(images) for entry in row]
                    for row in self.rows])


def principal_minor(m: Mat, k: int) -> RationalFunction:
    """Determinant of the top-left k x k block."""
    if not 0 <= k <= m.size:
        raise ValueError("minor size out of range")
    return Mat([row[:k] for row in m.rows[:k]]).det()


def phi_block(size: int, i: int, block: Sequence[Sequence[RationalFunction]],
              nvars: int = 1) -> Mat:
    """Embed a 2x2 block at rows/columns i, i+1 (nodes are 1-based)."""
    m = [list(row) for row in Mat.identity(size, nvars).rows]
    m[i - 1][i - 1] = as_rational(block[0][0], nvars)
    m[i - 1][i] = as_rational(block[0][1], nvars)
    m[i][i - 1] = as_rational(block[1][0], nvars)
    m[i][i] = as_rational(block[1][1], nvars)
    return Mat(m)


def b_letter(size: int, i: int, z: RationalFunction) -> Mat:
    """The letter matrix B_i(z), identity outside the 2x2 pivot block."""
    one = RationalFunction.constant(1, z.nvars)
    return phi_block(size, i, [[z, -one], [one, RationalFunction.zero(z.nvars)]],
                     z.nvars)


def b_letter_inv(size: int, i: int, z: RationalFunction) -> Mat:
    one = RationalFunction.constant(1, z.nvars)
    return phi_block(size, i, [[RationalFunction.zero(z.nvars), one], [-one, z]],
                     z.nvars)


def chi_letter(size: int, i: int, u: RationalFunction) -> Mat:
    """The framing torus factor χ_i(u) = φ_i(diag(u, 1/u))."""
    zero = RationalFunction.zero(u.nvars)
    return phi_block(size, i, [[u, zero], [zero, u.inv()]], u.nvars)


def _check_type_a(datum: CartanDatum) -> int:
    if datum.letter != "A":
        raise ValueError("matrix realizations are available for type A only")
    return datum.rank + 1


def braid_matrix(datum: CartanDatum, word: Sequence[int],
                 shift: int = 0,
                 subscripts: Sequence[int] | None = None,
                 values: Sequence[RationalFunction] | None = None,
                 nvars: int | None = None) -> Mat:
    """Product of letter matrices B_{i_1}(z_{1+shift}) ... B_{i_l}(z_{l+shift}).

    subscripts overrides the variable index per letter (repeats allowed);
    values bypasses variables entirely, e.g. zeros for a Weyl lift.
    """
    size = _check_type_a(datum)
    if values is None:
        subs = list(subscripts) if subscripts is not None else [
            k + 1 + shift for k in range(len(word))]
        n = nvars if nvars is not None else max(subs, default=1)
        values = [RationalFunction.variable(k, n) for k in subs]
    n = max((v.nvars for v in values), default=nvars or 1)
    out = Mat.identity(size, n)
    for i, z in zip(word, values):
        out = out * b_letter(size, i, z.lift(n))
    return out


def weyl_lift(datum: CartanDatum, word: Sequence[int], nvars: int = 1) -> Mat:
    """The lift B_{i_1}(0)...B_{i_l}(0) of a Weyl group element."""
    size = _check_type_a(datum)
    zero = RationalFunction.zero(nvars)
    out = Mat.identity(size, nvars)
    for i in word:
        out = out * b_letter(size, i, zero)
    return out


def weyl_lift_inv(datum: CartanDatum, word: Sequence[int], nvars: int = 1) -> Mat:
    size = _check_type_a(datum)
    zero = RationalFunction.zero(nvars)
    out = Mat.identity(size, nvars)
    for i in reversed(word):
        out = out * b_letter_inv(size, i, zero)
    return out


def variety_equations(datum: CartanDatum, word: Sequence[int],
                      subscripts: Sequence[int] | None = None) -> list[Polynomial]:
    """Strictly lower entries of δ_lift^-1 B_β(z), the chart equations.

    The braid variety of β is their common zero locus; for a reduced word
    they force every coordinate to vanish.
    """
    from .braid import demazure_product

    delta = demazure_product(datum, tuple(word))
    n = max(subscripts) if subscripts else max(len(word), 1)
    m = weyl_lift_inv(datum, delta, n) * braid_matrix(
        datum, word, subscripts=subscripts, nvars=n)
    out: list[Polynomial] = []
    for r in range(m.size):
        for c in range(r):
            entry = m[r, c]
            if not entry.is_polynomial():
                raise AssertionError("chart equations must be polynomial")
            out.append(entry.as_polynomial())
    return out


def push_unipotent(u: Mat, i: int, z: RationalFunction) -> tuple[RationalFunction, Mat]:
    """Solve U B_i(z) = B_i(z') U' with U upper triangular; returns (z', U').

    z' = (z U_ii + U_{i,i+1}) / U_{i+1,i+1}, and U' stays upper triangular.
    """
    uii = u[i - 1, i - 1]
    uio = u[i - 1, i]
    uoo = u[i, i]
    if uoo.is_zero():
        raise ZeroDivisionError("cannot push through a degenerate framing")
    z_new = (z * uii + uio) / uoo
    u_new = b_letter_inv(u.size, i, z_new) * u * b_letter(u.size, i, z)
    return z_new, u_new
