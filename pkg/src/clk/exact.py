"""Exact arithmetic kernel: Gaussian rationals, dense polynomials, Laurent rings.

Everything here runs over arbitrary-precision rationals (``fractions.Fraction``)
or Gaussian rationals ℚ(i); no floating point enters any computation except the
explicit ``to_complex`` conversions that hand data to numeric root finders.

Contents:

* ``GaussianRational``  — a + bi with exact rational a, b.
* ``UniPoly``           — dense univariate polynomials over ℚ(i); Euclidean gcd,
                          Yun squarefree decomposition, exact division.
* ``BiPoly``            — dense bivariate polynomials over ℚ with a coefficient
                          grid indexed by (degree in x, degree in y); Sylvester
                          resultants via fraction-free (Bareiss) elimination,
                          discriminants, exact substitution.
* ``LaurentPoly2``      — polynomials in (s, s⁻¹, u); symmetric ones rewrite
                          into the trace coordinate x = s + s⁻¹.
* ``bipoly_gcd``        — gcd in ℚ[x, y] via content/primitive-part Euclid.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import DomainError, InternalError, LaurentSymmetryError, ParseError

Rat = Fraction


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    raise TypeError(f"expected an exact rational, got {type(v).__name__}")


# ---------------------------------------------------------------------------
# Gaussian rationals
# ---------------------------------------------------------------------------


class GaussianRational:
    """An exact complex number a + bi with rational a and b."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    # -- construction -------------------------------------------------------

    @staticmethod
    def coerce(v) -> "GaussianRational":
        if isinstance(v, GaussianRational):
            return v
        if isinstance(v, (int, Fraction)):
            return GaussianRational(v)
        raise TypeError(f"cannot coerce {type(v).__name__} to GaussianRational")

    @staticmethod
    def parse(text: str) -> "GaussianRational":
        """Parse 'a+bi' with rational a, b; accepts '1/2+3/4i', '-i', '2'."""
        t = text.replace(" ", "")
        if not t:
            raise ParseError("empty complex literal", 0)
        try:
            if t.endswith(("i", "I", "j", "J")):
                body = t[:-1]
                cut = max(body.rfind("+", 1), body.rfind("-", 1))
                if cut == -1:
                    re_text, im_text = "", body
                else:
                    re_text, im_text = body[:cut], body[cut:]
                if im_text in ("", "+"):
                    im = Fraction(1)
                elif im_text == "-":
                    im = Fraction(-1)
                else:
                    im = Fraction(im_text)
                re = Fraction(re_text) if re_text else Fraction(0)
                return GaussianRational(re, im)
            return GaussianRational(Fraction(t))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad complex literal {text!r}: {exc}", 0) from None

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational.coerce(other)
        n = o.abs2()
        if n == 0:
            raise ZeroDivisionError("division by zero GaussianRational")
        return GaussianRational(
            (self.re * o.re + self.im * o.im) / n,
            (self.im * o.re - self.re * o.im) / n,
        )

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pow__(self, n: int):
        if n < 0:
            return GaussianRational(1) / self ** (-n)
        out = GaussianRational(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    # -- predicates / conversions -------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def real_fraction(self) -> Fraction:
        if self.im != 0:
            raise InternalError("expected a real value, found nonzero imaginary part")
        return self.re

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return not self.is_zero

    def __repr__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


GR_ZERO = GaussianRational(0)
GR_ONE = GaussianRational(1)
GR_I = GaussianRational(0, 1)


def _gr(v) -> GaussianRational:
    return GaussianRational.coerce(v)


# ---------------------------------------------------------------------------
# Univariate polynomials over ℚ(i)
# ---------------------------------------------------------------------------


class UniPoly:
    """Dense univariate polynomial over ℚ(i); coefficients low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_gr(c) for c in coeffs]
        while cs and cs[-1].is_zero:
            cs.pop()
        self.coeffs = tuple(cs)

    @staticmethod
    def of(*coeffs) -> "UniPoly":
        return UniPoly(coeffs)

    @staticmethod
    def zero() -> "UniPoly":
        return UniPoly(())

    @staticmethod
    def one() -> "UniPoly":
        return UniPoly((GR_ONE,))

    @staticmethod
    def variable() -> "UniPoly":
        return UniPoly((GR_ZERO, GR_ONE))

    # -- shape ---------------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> GaussianRational:
        if self.is_zero:
            raise DomainError("the zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coefficient(self, k: int) -> GaussianRational:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return GR_ZERO

    # -- ring operations -----------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return UniPoly(
            [self.coefficient(k) + o.coefficient(k) for k in range(n)]
        )

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return UniPoly(
            [self.coefficient(k) - o.coefficient(k) for k in range(n)]
        )

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            g = _gr(other)
            return UniPoly([c * g for c in self.coeffs])
        if not isinstance(other, UniPoly):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return UniPoly.zero()
        out = [GR_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise DomainError("negative polynomial power")
        out = UniPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def _coerce(self, other):
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, (int, Fraction, GaussianRational)):
            return UniPoly((_gr(other),))
        return NotImplemented

    # -- Euclidean structure -------------------------------------------------

    def __divmod__(self, other: "UniPoly"):
        if not isinstance(other, UniPoly):
            other = self._coerce(other)
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        q = [GR_ZERO] * max(0, self.degree - other.degree + 1)
        rem = list(self.coeffs)
        d = other.degree
        lead = other.leading
        while len(rem) - 1 >= d and rem:
            k = len(rem) - 1 - d
            factor = rem[-1] / lead
            q[k] = factor
            for j, c in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - factor * c
            while rem and rem[-1].is_zero:
                rem.pop()
        return UniPoly(q), UniPoly(rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        q, r = divmod(self, other)
        if not r.is_zero:
            raise InternalError("exact polynomial division left a remainder")
        return q

    def monic(self) -> "UniPoly":
        if self.is_zero:
            return self
        return self * (GR_ONE / self.leading)

    def gcd(self, other: "UniPoly") -> "UniPoly":
        """Monic gcd via the Euclidean algorithm."""
        a, b = self, other
        if a.is_zero and b.is_zero:
            raise DomainError("gcd of two zero polynomials is undefined")
        while not b.is_zero:
            a, b = b, a % b
        return a.monic()

    def derivative(self) -> "UniPoly":
        return UniPoly(
            [self.coeffs[k] * k for k in range(1, len(self.coeffs))]
        )

    def squarefree(self) -> list[tuple["UniPoly", int]]:
        """Yun's squarefree decomposition.

        Returns monic factors with multiplicities, ascending multiplicity;
        the input equals its leading coefficient times the product of
        ``factor**multiplicity``.
        """
        if self.is_zero:
            raise DomainError("squarefree decomposition of the zero polynomial")
        f = self.monic()
        if f.degree < 1:
            return []
        df = f.derivative()
        g = f.gcd(df)
        if g.degree == 0:
            return [(f, 1)]
        w = f.exact_div(g)
        y = df.exact_div(g)
        z = y - w.derivative()
        out: list[tuple[UniPoly, int]] = []
        i = 1
        while w.degree > 0:
            h = w.gcd(z) if not z.is_zero else w.monic()
            if h.degree > 0:
                out.append((h, i))
            w = w.exact_div(h)
            if z.is_zero:
                y = UniPoly.zero()
            else:
                y = z.exact_div(h)
            z = y - w.derivative()
            i += 1
        return out

    def squarefree_part(self) -> "UniPoly":
        out = UniPoly.one()
        for factor, _ in self.squarefree():
            out = out * factor
        return out

    # -- evaluation ----------------------------------------------------------

    def evaluate(self, v) -> GaussianRational:
        g = _gr(v)
        acc = GR_ZERO
        for c in reversed(self.coeffs):
            acc = acc * g + c
        return acc

    def eval_complex(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + c.to_complex()
        return acc

    def to_complex_coeffs(self) -> list[complex]:
        return [c.to_complex() for c in self.coeffs]

    def real_fraction_coeffs(self) -> list[Fraction]:
        return [c.real_fraction() for c in self.coeffs]

    def integer_normalize(self) -> "UniPoly":
        """Scale to coprime integer coefficients with positive leading one."""
        if self.is_zero:
            return self
        fracs = self.real_fraction_coeffs()
        denom = 1
        for f in fracs:
            denom = denom * f.denominator // _int_gcd(denom, f.denominator)
        ints = [int(f * denom) for f in fracs]
        g = 0
        for v in ints:
            g = _int_gcd(g, abs(v))
        ints = [v // g for v in ints]
        if ints[-1] < 0:
            ints = [-v for v in ints]
        return UniPoly(ints)

    # -- misc ----------------------------------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def format(self, var: str = "y") -> str:
        if self.is_zero:
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coefficient(k)
            if c.is_zero:
                continue
            if k == 0:
                term = f"{c}"
            else:
                mono = var if k == 1 else f"{var}^{k}"
                if c == GR_ONE:
                    term = mono
                elif c == -GR_ONE:
                    term = f"-{mono}"
                else:
                    term = f"{c}*{mono}"
            parts.append(term)
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    def __repr__(self):
        return f"UniPoly({self.format()})"


def _int_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------
# Bivariate polynomials over ℚ
# ---------------------------------------------------------------------------


class BiPoly:
    """Dense bivariate polynomial over ℚ.

    ``rows[i][j]`` is the coefficient of x^i y^j; the grid is rectangular and
    trimmed so that the last row and last column are not identically zero.
    """

    __slots__ = ("rows",)

    def __init__(self, rows=()):
        grid = [[_frac(c) for c in row] for row in rows]
        width = max((len(r) for r in grid), default=0)
        for r in grid:
            r.extend([Fraction(0)] * (width - len(r)))
        while grid and all(c == 0 for c in grid[-1]):
            grid.pop()
        if grid:
            while width > 0 and all(r[width - 1] == 0 for r in grid):
                width -= 1
            grid = [r[:width] for r in grid]
            if width == 0:
                grid = []
        self.rows = tuple(tuple(r) for r in grid)

    # -- constructors --------------------------------------------------------

    @staticmethod
    def from_terms(terms: dict) -> "BiPoly":
        if not terms:
            return BiPoly(())
        dx = max(i for i, _ in terms)
        dy = max(j for _, j in terms)
        grid = [[Fraction(0)] * (dy + 1) for _ in range(dx + 1)]
        for (i, j), c in terms.items():
            grid[i][j] = grid[i][j] + _frac(c)
        return BiPoly(grid)

    @staticmethod
    def zero() -> "BiPoly":
        return BiPoly(())

    @staticmethod
    def one() -> "BiPoly":
        return BiPoly(((1,),))

    @staticmethod
    def x_var() -> "BiPoly":
        return BiPoly.from_terms({(1, 0): 1})

    @staticmethod
    def y_var() -> "BiPoly":
        return BiPoly.from_terms({(0, 1): 1})

    @staticmethod
    def from_x_poly(p: UniPoly) -> "BiPoly":
        return BiPoly.from_terms(
            {(i, 0): c.real_fraction() for i, c in enumerate(p.coeffs)}
        )

    @staticmethod
    def from_y_polys(cols: list[UniPoly]) -> "BiPoly":
        terms = {}
        for j, p in enumerate(cols):
            for i, c in enumerate(p.coeffs):
                terms[(i, j)] = c.real_fraction()
        return BiPoly.from_terms(terms)

    # -- shape ---------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.rows

    @property
    def degree_x(self) -> int:
        return len(self.rows) - 1

    @property
    def degree_y(self) -> int:
        if not self.rows:
            return -1
        dy = -1
        for row in self.rows:
            for j in range(len(row) - 1, -1, -1):
                if row[j] != 0:
                    dy = max(dy, j)
                    break
        return dy

    def coefficient(self, i: int, j: int) -> Fraction:
        if 0 <= i < len(self.rows) and 0 <= j < len(self.rows[i]):
            return self.rows[i][j]
        return Fraction(0)

    def y_coefficient(self, j: int) -> UniPoly:
        """The coefficient of y^j, as a polynomial in x."""
        return UniPoly([self.coefficient(i, j) for i in range(len(self.rows))])

    def leading_y(self) -> UniPoly:
        return self.y_coefficient(self.degree_y)

    def as_y_polys(self) -> list[UniPoly]:
        return [self.y_coefficient(j) for j in range(self.degree_y + 1)]

    def terms(self) -> dict:
        out = {}
        for i, row in enumerate(self.rows):
            for j, c in enumerate(row):
                if c != 0:
                    out[(i, j)] = c
        return out

    # -- ring operations -----------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        terms = self.terms()
        for k, c in o.terms().items():
            terms[k] = terms.get(k, Fraction(0)) + c
        return BiPoly.from_terms(terms)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return BiPoly([[-c for c in row] for row in self.rows])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = _frac(other)
            return BiPoly([[c * f for c in row] for row in self.rows])
        if not isinstance(other, BiPoly):
            return NotImplemented
        out: dict = {}
        for (i1, j1), c1 in self.terms().items():
            for (i2, j2), c2 in other.terms().items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, Fraction(0)) + c1 * c2
        return BiPoly.from_terms(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise DomainError("negative polynomial power")
        out = BiPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def _coerce(self, other):
        if isinstance(other, BiPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return BiPoly(((_frac(other),),))
        return NotImplemented

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.rows == o.rows

    def __hash__(self):
        return hash(self.rows)

    # -- substitution and evaluation ----------------------------------------

    def substitute_x(self, tau) -> UniPoly:
        """Evaluate x = tau exactly, returning a polynomial in y."""
        t = _gr(tau)
        dy = self.degree_y
        cols = []
        for j in range(dy + 1):
            acc = GR_ZERO
            for i in range(len(self.rows) - 1, -1, -1):
                acc = acc * t + _gr(self.coefficient(i, j))
            cols.append(acc)
        return UniPoly(cols)

    def substitute_y(self, q: "BiPoly") -> "BiPoly":
        """Substitute y := q(x, y) via Horner in y."""
        dy = self.degree_y
        if dy < 0:
            return BiPoly.zero()
        acc = BiPoly.from_x_poly(self.y_coefficient(dy))
        for j in range(dy - 1, -1, -1):
            acc = acc * q + BiPoly.from_x_poly(self.y_coefficient(j))
        return acc

    def evaluate(self, x0, y0) -> GaussianRational:
        gx, gy = _gr(x0), _gr(y0)
        acc = GR_ZERO
        for j in range(self.degree_y, -1, -1):
            col = self.y_coefficient(j)
            acc = acc * gy + col.evaluate(gx)
        return acc

    def eval_complex(self, x0: complex, y0: complex) -> complex:
        acc = 0j
        for j in range(self.degree_y, -1, -1):
            acc = acc * y0 + self.y_coefficient(j).eval_complex(x0)
        return acc

    def slice_complex_coeffs(self, tau: complex) -> list[complex]:
        """Float coefficients of the y-polynomial at x = tau."""
        return [
            self.y_coefficient(j).eval_complex(tau)
            for j in range(self.degree_y + 1)
        ]

    def derivative_y(self) -> "BiPoly":
        terms = {}
        for (i, j), c in self.terms().items():
            if j > 0:
                terms[(i, j - 1)] = c * j
        return BiPoly.from_terms(terms)

    def shift_down_x(self, k: int) -> "BiPoly":
        """Exact division by x^k (requires the low rows to vanish)."""
        if k == 0:
            return self
        for i in range(min(k, len(self.rows))):
            if any(c != 0 for c in self.rows[i]):
                raise InternalError("division by x^k with nonzero low rows")
        return BiPoly(self.rows[k:])

    def min_x_degree(self) -> int:
        for i, row in enumerate(self.rows):
            if any(c != 0 for c in row):
                return i
        return 0

    # -- division ------------------------------------------------------------

    def divmod_y_monic(self, d: "BiPoly") -> tuple["BiPoly", "BiPoly"]:
        """Divide by a divisor monic in y (leading y-coefficient 1)."""
        lead = d.leading_y()
        if lead != UniPoly.one():
            raise DomainError("divisor must be monic in y")
        dd = d.degree_y
        q = BiPoly.zero()
        r = self
        while not r.is_zero and r.degree_y >= dd:
            j = r.degree_y
            c = BiPoly.from_x_poly(r.y_coefficient(j)) * BiPoly.from_terms(
                {(0, j - dd): 1}
            )
            q = q + c
            r = r - c * d
        return q, r

    # -- resultants ----------------------------------------------------------

    def resultant_y(self, other: "BiPoly") -> UniPoly:
        """Resultant eliminating y, as a polynomial in x."""
        m, n = self.degree_y, other.degree_y
        if m < 0 or n < 0:
            raise DomainError("resultant with the zero polynomial")
        if m == 0 and n == 0:
            return UniPoly.one()
        if m == 0:
            return self.y_coefficient(0) ** n
        if n == 0:
            return other.y_coefficient(0) ** m
        a = [self.y_coefficient(j) for j in range(m, -1, -1)]
        b = [other.y_coefficient(j) for j in range(n, -1, -1)]
        size = m + n
        zero = UniPoly.zero()
        mat = []
        for k in range(n):
            mat.append([zero] * k + a + [zero] * (size - m - 1 - k))
        for k in range(m):
            mat.append([zero] * k + b + [zero] * (size - n - 1 - k))
        return _bareiss_det(mat)

    def discriminant_y(self) -> UniPoly:
        """Discriminant in y: (-1)^{n(n-1)/2} Res_y(p, ∂p/∂y) / lead_y(p)."""
        n = self.degree_y
        if n <= 0:
            raise DomainError("discriminant requires positive y-degree")
        if n == 1:
            return UniPoly.one()
        res = self.resultant_y(self.derivative_y())
        sign = -1 if (n * (n - 1) // 2) % 2 else 1
        return (res * sign).exact_div(self.leading_y())

    # -- normalization -------------------------------------------------------

    def integer_normalize(self) -> "BiPoly":
        """Coprime integer coefficients; the lex-leading (y-major) one positive."""
        if self.is_zero:
            return self
        denom = 1
        for c in (v for row in self.rows for v in row):
            denom = denom * c.denominator // _int_gcd(denom, c.denominator)
        grid = [[int(c * denom) for c in row] for row in self.rows]
        g = 0
        for row in grid:
            for v in row:
                g = _int_gcd(g, abs(v))
        grid = [[v // g for v in row] for row in grid]
        dy = self.degree_y
        lead_sign = 0
        for i in range(len(grid) - 1, -1, -1):
            if len(grid[i]) > dy and grid[i][dy] != 0:
                lead_sign = grid[i][dy]
                break
        if lead_sign < 0:
            grid = [[-v for v in row] for row in grid]
        return BiPoly(grid)

    def format(self, xvar: str = "x", yvar: str = "y") -> str:
        if self.is_zero:
            return "0"
        parts = []
        for j in range(self.degree_y, -1, -1):
            for i in range(self.degree_x, -1, -1):
                c = self.coefficient(i, j)
                if c == 0:
                    continue
                mono = ""
                if i:
                    mono += xvar if i == 1 else f"{xvar}^{i}"
                if j:
                    mono += ("*" if mono else "") + (yvar if j == 1 else f"{yvar}^{j}")
                if not mono:
                    parts.append(f"{c}")
                elif c == 1:
                    parts.append(mono)
                elif c == -1:
                    parts.append(f"-{mono}")
                else:
                    parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"BiPoly({self.format()})"


def _bareiss_det(mat: list[list[UniPoly]]) -> UniPoly:
    """Fraction-free (Bareiss) determinant over the polynomial ring ℚ[x]."""
    n = len(mat)
    if n == 0:
        return UniPoly.one()
    mat = [row[:] for row in mat]
    sign = 1
    prev = UniPoly.one()
    for k in range(n - 1):
        if mat[k][k].is_zero:
            for r in range(k + 1, n):
                if not mat[r][k].is_zero:
                    mat[k], mat[r] = mat[r], mat[k]
                    sign = -sign
                    break
            else:
                return UniPoly.zero()
        piv = mat[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = mat[i][j] * piv - mat[i][k] * mat[k][j]
                mat[i][j] = num.exact_div(prev)
            mat[i][k] = UniPoly.zero()
        prev = piv
    det = mat[n - 1][n - 1]
    return det if sign > 0 else -det


# ---------------------------------------------------------------------------
# Bivariate gcd over ℚ[x, y]
# ---------------------------------------------------------------------------


def bipoly_content_y(p: BiPoly) -> UniPoly:
    """Monic gcd in ℚ[x] of the y-coefficients of p."""
    if p.is_zero:
        raise DomainError("content of the zero polynomial")
    cont = UniPoly.zero()
    for q in p.as_y_polys():
        if q.is_zero:
            continue
        cont = q.monic() if cont.is_zero else cont.gcd(q)
        if cont.degree == 0:
            return UniPoly.one()
    return cont


def bipoly_primitive_y(p: BiPoly) -> BiPoly:
    cont = bipoly_content_y(p)
    if cont.degree == 0:
        return p
    cols = [q.exact_div(cont) for q in p.as_y_polys()]
    return BiPoly.from_y_polys(cols)


def _bipoly_pseudo_rem_y(a: BiPoly, b: BiPoly) -> BiPoly:
    """Pseudo-remainder of a by b in the main variable y."""
    db = b.degree_y
    lead_b = BiPoly.from_x_poly(b.leading_y())
    r = a
    while not r.is_zero and r.degree_y >= db:
        dr = r.degree_y
        lead_r = BiPoly.from_x_poly(r.leading_y())
        r = r * lead_b - b * lead_r * BiPoly.from_terms({(0, dr - db): 1})
    return r


def bipoly_gcd(a: BiPoly, b: BiPoly) -> BiPoly:
    """Gcd in ℚ[x, y], integer-normalized (primitive-PRS Euclid in y)."""
    if a.is_zero and b.is_zero:
        raise DomainError("gcd of two zero polynomials is undefined")
    if a.is_zero:
        return b.integer_normalize()
    if b.is_zero:
        return a.integer_normalize()
    cont = bipoly_content_y(a).gcd(bipoly_content_y(b))
    pa, pb = bipoly_primitive_y(a), bipoly_primitive_y(b)
    if pa.degree_y < pb.degree_y:
        pa, pb = pb, pa
    while True:
        if pb.is_zero:
            core = pa
            break
        if pb.degree_y == 0:
            core = BiPoly.one()
            break
        r = _bipoly_pseudo_rem_y(pa, pb)
        pa, pb = pb, (r if r.is_zero else bipoly_primitive_y(r))
    out = core * BiPoly.from_x_poly(cont)
    return out.integer_normalize()


# ---------------------------------------------------------------------------
# Two-variable Laurent polynomials in (s, u), Laurent only in s
# ---------------------------------------------------------------------------


class LaurentPoly2:
    """Polynomials in s, s⁻¹ and u over ℚ (u-exponents nonnegative)."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        clean = {}
        for (es, eu), c in (terms or {}).items():
            f = _frac(c)
            if eu < 0:
                raise DomainError("negative u-exponent in Laurent polynomial")
            if f != 0:
                key = (int(es), int(eu))
                clean[key] = clean.get(key, Fraction(0)) + f
        self.terms = {k: v for k, v in clean.items() if v != 0}

    # -- constructors --------------------------------------------------------

    @staticmethod
    def const(c) -> "LaurentPoly2":
        return LaurentPoly2({(0, 0): c})

    @staticmethod
    def s_power(k: int) -> "LaurentPoly2":
        return LaurentPoly2({(k, 0): 1})

    @staticmethod
    def u_var() -> "LaurentPoly2":
        return LaurentPoly2({(0, 1): 1})

    @staticmethod
    def zero() -> "LaurentPoly2":
        return LaurentPoly2({})

    @staticmethod
    def one() -> "LaurentPoly2":
        return LaurentPoly2({(0, 0): 1})

    # -- ring operations -----------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for k, c in o.terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return LaurentPoly2(out)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return LaurentPoly2({k: -c for k, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = _frac(other)
            return LaurentPoly2({k: c * f for k, c in self.terms.items()})
        if not isinstance(other, LaurentPoly2):
            return NotImplemented
        out: dict = {}
        for (e1, u1), c1 in self.terms.items():
            for (e2, u2), c2 in other.terms.items():
                k = (e1 + e2, u1 + u2)
                out[k] = out.get(k, Fraction(0)) + c1 * c2
        return LaurentPoly2(out)

    __rmul__ = __mul__

    def _coerce(self, other):
        if isinstance(other, LaurentPoly2):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly2.const(other)
        return NotImplemented

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    # -- structure -----------------------------------------------------------

    def min_s(self) -> int:
        return min(es for es, _ in self.terms)

    def max_s(self) -> int:
        return max(es for es, _ in self.terms)

    def mirror_s(self) -> "LaurentPoly2":
        """The image under s ↦ s⁻¹."""
        return LaurentPoly2({(-es, eu): c for (es, eu), c in self.terms.items()})

    def strip_s(self) -> tuple["LaurentPoly2", int]:
        """Divide by the lowest s-power; returns (polynomial part, shift)."""
        if self.is_zero:
            return self, 0
        k = self.min_s()
        return LaurentPoly2(
            {(es - k, eu): c for (es, eu), c in self.terms.items()}
        ), k

    def to_bipoly_su(self) -> BiPoly:
        """View as a BiPoly with x-axis = s-exponent (requires min_s ≥ 0)."""
        if self.is_zero:
            return BiPoly.zero()
        if self.min_s() < 0:
            raise DomainError("negative s-exponent; strip s-units first")
        return BiPoly.from_terms({(es, eu): c for (es, eu), c in self.terms.items()})

    @staticmethod
    def from_bipoly_su(p: BiPoly) -> "LaurentPoly2":
        return LaurentPoly2({k: c for k, c in p.terms().items()})

    # -- trace-coordinate rewriting -----------------------------------------

    def laurent_normalize(self) -> BiPoly:
        """Rewrite in x = s + s⁻¹ after clearing a central s-power.

        Returns a BiPoly whose axes are (x, u).  Raises
        ``LaurentSymmetryError`` (carrying the antisymmetric residue) if the
        input is not invariant under s ↦ s⁻¹ about any central power.
        """
        if self.is_zero:
            return BiPoly.zero()
        lo, hi = self.min_s(), self.max_s()
        total = lo + hi
        mirrored = LaurentPoly2(
            {(es + total, eu): c for (es, eu), c in self.mirror_s().terms.items()}
        )
        residue = self - mirrored
        if total % 2 != 0 or not residue.is_zero:
            raise LaurentSymmetryError(
                "not expressible in trace coordinates", residue=residue
            )
        c = total // 2
        centered = {(es - c, eu): v for (es, eu), v in self.terms.items()}
        # s^k + s^-k as polynomials in x, by the recursion C_{k+1} = x*C_k - C_{k-1}
        kmax = max(abs(es) for es, _ in centered)
        chebys: list[list[Fraction]] = [[Fraction(2)], [Fraction(0), Fraction(1)]]
        while len(chebys) <= kmax:
            prev, cur = chebys[-2], chebys[-1]
            nxt = [Fraction(0)] + cur
            for i, v in enumerate(prev):
                nxt[i] -= v
            chebys.append(nxt)
        out: dict = {}
        for (es, eu), v in centered.items():
            if es < 0:
                continue
            expansion = chebys[es] if es > 0 else [Fraction(1)]
            for i, cc in enumerate(expansion):
                if cc != 0:
                    key = (i, eu)
                    out[key] = out.get(key, Fraction(0)) + v * cc
        return BiPoly.from_terms(out)

    def __repr__(self):
        if not self.terms:
            return "LaurentPoly2(0)"
        bits = []
        for (es, eu), c in sorted(self.terms.items()):
            mono = ""
            if es:
                mono += f"s^{es}"
            if eu:
                mono += ("*" if mono else "") + (f"u^{eu}" if eu > 1 else "u")
            bits.append(f"{c}{'*' + mono if mono else ''}")
        return "LaurentPoly2(" + " + ".join(bits) + ")"
