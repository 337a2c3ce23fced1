"""Exact arithmetic kernel: Gaussian rationals, dense polynomials, Laurent forms."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from clk.errors import DomainError, InternalError, LaurentSymmetryError, ParseError
from clk.exact import (
    BiPoly,
    GaussianRational,
    LaurentPoly2,
    UniPoly,
    bipoly_gcd,
)


# ---------------------------------------------------------------------------
# Gaussian rationals
# ---------------------------------------------------------------------------


def test_parse_real_and_imaginary_parts():
    g = GaussianRational.parse("1/2+3/4i")
    assert g.re == Fraction(1, 2)
    assert g.im == Fraction(3, 4)


def test_parse_accepts_all_imaginary_suffixes():
    for suffix in "iIjJ":
        g = GaussianRational.parse(f"2-5{suffix}")
        assert g.re == Fraction(2)
        assert g.im == Fraction(-5)


def test_parse_decimal_literals_are_exact():
    g = GaussianRational.parse("1.6")
    assert g.re == Fraction(8, 5)
    assert g.im == 0


def test_parse_pure_imaginary_and_unit():
    assert GaussianRational.parse("i") == GaussianRational(0, 1)
    assert GaussianRational.parse("-i") == GaussianRational(0, -1)
    assert GaussianRational.parse("3i").im == Fraction(3)


def test_parse_rejects_garbage_with_position():
    with pytest.raises(ParseError):
        GaussianRational.parse("1/2+!")


def test_field_arithmetic_round_trip():
    rng = random.Random(7)
    for _ in range(25):
        a = GaussianRational(
            Fraction(rng.randint(-9, 9), rng.randint(1, 7)),
            Fraction(rng.randint(-9, 9), rng.randint(1, 7)),
        )
        if a.is_zero:
            continue
        assert a * (GaussianRational(1) / a) == GaussianRational(1)
        assert a + (-a) == GaussianRational(0)


def test_division_by_zero_raises():
    with pytest.raises(ZeroDivisionError):
        GaussianRational(1) / GaussianRational(0)


def test_real_fraction_rejects_nonreal():
    with pytest.raises(InternalError):
        GaussianRational(1, 1).real_fraction()
    assert GaussianRational(Fraction(3, 2)).real_fraction() == Fraction(3, 2)


def test_to_complex_matches_parts():
    g = GaussianRational(Fraction(1, 4), Fraction(-2, 3))
    z = g.to_complex()
    assert z == complex(0.25, -2 / 3)


# ---------------------------------------------------------------------------
# Univariate polynomials
# ---------------------------------------------------------------------------


def _upoly(*coeffs) -> UniPoly:
    return UniPoly.of(*coeffs)


def test_unipoly_basic_shape():
    p = _upoly(1, 0, 2)  # 2y^2 + 1
    assert p.degree == 2
    assert p.coefficient(0) == GaussianRational(1)
    assert p.coefficient(2) == GaussianRational(2)
    assert p.coefficient(5) == GaussianRational(0)


def test_unipoly_divmod_reconstructs():
    rng = random.Random(11)
    for _ in range(20):
        a = UniPoly([rng.randint(-5, 5) for _ in range(rng.randint(1, 6))])
        b = UniPoly([rng.randint(-5, 5) for _ in range(rng.randint(1, 4))])
        if b.is_zero:
            continue
        q, r = divmod(a, b)
        assert q * b + r == a
        assert r.is_zero or r.degree < b.degree


def test_monic_gcd_of_coprime_pair_is_one():
    a = _upoly(-1, 1, 1)  # y^2 + y - 1
    b = _upoly(1, 2)  # 2y + 1
    assert a.gcd(b) == UniPoly.one()


def test_gcd_of_nested_powers():
    y = UniPoly.variable()
    f = (y - 2) ** 2
    g = (y - 2) ** 3
    assert f.gcd(g) == (y - 2) ** 2


def test_gcd_divides_both_operands_exactly():
    rng = random.Random(3)
    y = UniPoly.variable()
    for _ in range(15):
        common = UniPoly([rng.randint(-3, 3) for _ in range(3)]) + y ** 2
        a = common * UniPoly([rng.randint(-3, 3), 1])
        b = common * UniPoly([rng.randint(-3, 3), 1])
        g = a.gcd(b)
        assert g.degree >= common.degree
        assert (a % g).is_zero and (b % g).is_zero


def test_gcd_of_two_zeros_is_rejected():
    with pytest.raises(DomainError):
        UniPoly.zero().gcd(UniPoly.zero())


def test_squarefree_decomposition_of_known_product():
    y = UniPoly.variable()
    poly = (y + 2) * (y - 1) ** 2
    factors = poly.squarefree()
    assert factors == [(y + 2, 1), (y - 1, 2)]


def test_squarefree_reassembly_matches_monic_input():
    rng = random.Random(23)
    y = UniPoly.variable()
    for _ in range(10):
        f = UniPoly.one()
        for _ in range(rng.randint(1, 3)):
            root = rng.randint(-4, 4)
            f = f * (y - root) ** rng.randint(1, 3)
        rebuilt = UniPoly.one()
        for factor, mult in f.squarefree():
            rebuilt = rebuilt * factor ** mult
        assert rebuilt == f.monic()


def test_squarefree_part_strips_multiplicity():
    y = UniPoly.variable()
    assert ((y - 3) ** 4).squarefree_part() == (y - 3)


def test_integer_normalize_clears_denominators_and_sign():
    p = UniPoly([Fraction(-1, 6), Fraction(0), Fraction(-1, 2)])
    n = p.integer_normalize()
    assert n == _upoly(1, 0, 3)
    assert n.leading.real_fraction() > 0


def test_unipoly_format_is_stable():
    p = _upoly(-1, -1, 1)
    assert p.format("y") == "y^2 - y - 1"
    assert UniPoly.zero().format("y") == "0"


def test_eval_complex_agrees_with_exact_evaluate():
    p = _upoly(Fraction(1, 2), -3, 0, 1)
    exact = p.evaluate(GaussianRational(2)).to_complex()
    assert abs(p.eval_complex(2 + 0j) - exact) < 1e-12


# ---------------------------------------------------------------------------
# Bivariate polynomials, resultants, discriminants
# ---------------------------------------------------------------------------


def test_bipoly_term_access():
    p = BiPoly.from_terms({(2, 1): 3, (0, 0): -1})  # 3x^2 y - 1
    assert p.degree_x == 2
    assert p.degree_y == 1
    assert p.coefficient(2, 1) == 3
    assert p.coefficient(1, 1) == 0


def test_resultant_of_linear_pair():
    x = BiPoly.x_var()
    y = BiPoly.y_var()
    res = (y - x).resultant_y(y + x)
    assert res == UniPoly.of(0, 2)  # 2x


def test_resultant_against_shifted_quadratic():
    # Res_t(t^2 - 3t + 1, t^2 - (w-2)t + 1) = (w - 5)^2.
    a = BiPoly.from_terms({(0, 2): 1, (0, 1): -3, (0, 0): 1})
    b = BiPoly.from_terms({(0, 2): 1, (1, 1): -1, (0, 1): 2, (0, 0): 1})
    res = a.resultant_y(b)
    assert res == UniPoly.of(25, -10, 1)


def test_resultant_vanishes_iff_common_root():
    rng = random.Random(5)
    y = BiPoly.y_var()
    for _ in range(12):
        r1, r2, r3 = (rng.randint(-4, 4) for _ in range(3))
        a = (y - r1) * (y - r2)
        b = (y - r2) * (y - r3)
        assert a.resultant_y(b).is_zero  # shared root r2
        if r1 != r3:
            assert not (y - r1).resultant_y(y - r3).is_zero


def test_discriminant_of_golden_quadratic():
    p = BiPoly.from_terms({(0, 2): 1, (0, 1): 1, (0, 0): -1})  # y^2 + y - 1
    assert p.discriminant_y() == UniPoly.of(5)


def test_discriminant_of_fat_point_vanishes():
    p = BiPoly.from_terms({(0, 2): 1})  # y^2
    assert p.discriminant_y() == UniPoly.zero()


def test_discriminant_needs_positive_y_degree():
    with pytest.raises(DomainError):
        BiPoly.from_terms({(1, 0): 1}).discriminant_y()


def test_bivariate_gcd_recovers_common_factor():
    x = BiPoly.x_var()
    y = BiPoly.y_var()
    common = y ** 2 - x
    a = common * (y + 1)
    b = common * (y - x)
    g = bipoly_gcd(a, b)
    assert g.degree_y == common.degree_y
    # g divides both inputs, so it shares a root with each at every x.
    assert a.resultant_y(g).is_zero
    assert b.resultant_y(g).is_zero


def test_substitute_y_with_affine_change():
    # (y)^2 under y := x^2 - y gives (x^2 - y)^2.
    p = BiPoly.from_terms({(0, 2): 1})
    q = BiPoly.from_terms({(2, 0): 1, (0, 1): -1})
    assert p.substitute_y(q) == q * q


def test_substitute_x_produces_the_slice():
    p = BiPoly.from_terms({(0, 2): 1, (2, 1): -1, (0, 1): -1, (2, 0): 2, (0, 0): -1})
    sliced = p.substitute_x(GaussianRational(0))
    assert sliced == UniPoly.of(-1, -1, 1)  # y^2 - y - 1


def test_bipoly_integer_normalize_sign_convention():
    p = BiPoly.from_terms({(0, 1): Fraction(-1, 2), (1, 0): Fraction(1, 4)})
    n = p.integer_normalize()
    assert n == BiPoly.from_terms({(0, 1): 2, (1, 0): -1})


def test_bipoly_format_smoke():
    p = BiPoly.from_terms({(0, 2): 1, (2, 1): -1, (0, 1): -1, (2, 0): 2, (0, 0): -1})
    assert p.format() == "y^2 - x^2*y - y + 2*x^2 - 1"


# ---------------------------------------------------------------------------
# Two-variable Laurent polynomials in (s, u)
# ---------------------------------------------------------------------------


def test_laurent_symmetric_power_sum_rewrites_in_trace():
    f = LaurentPoly2.s_power(2) + LaurentPoly2.s_power(-2)
    b = f.laurent_normalize()
    # s^2 + s^-2 = x^2 - 2 with x = s + 1/s.
    assert b == BiPoly.from_terms({(2, 0): 1, (0, 0): -2})


def test_laurent_mixed_term_keeps_u():
    f = LaurentPoly2.s_power(1) + LaurentPoly2.s_power(-1) + LaurentPoly2.u_var()
    b = f.laurent_normalize()
    assert b == BiPoly.from_terms({(1, 0): 1, (0, 1): 1})


def test_laurent_antisymmetric_input_is_rejected():
    f = LaurentPoly2.s_power(1) - LaurentPoly2.s_power(-1)
    with pytest.raises(LaurentSymmetryError) as info:
        f.laurent_normalize()
    assert not info.value.residue.is_zero


def test_laurent_ring_ops_and_mirror():
    f = LaurentPoly2.s_power(3) * LaurentPoly2.const(Fraction(1, 2))
    g = f.mirror_s()
    assert g == LaurentPoly2.s_power(-3) * LaurentPoly2.const(Fraction(1, 2))
    assert (f - f).is_zero
