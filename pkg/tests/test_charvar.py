"""Character-variety polynomials and numeric representation lifts."""

from __future__ import annotations

import random

import pytest

from clk.charvar import (
    character_polynomial,
    lift_character,
    riley_condition,
    slice_roots,
)
from clk.errors import DomainError
from clk.exact import BiPoly, LaurentPoly2
from clk.knots import two_bridge_word


# ---------------------------------------------------------------------------
# Exact character polynomials
# ---------------------------------------------------------------------------


def test_trefoil_polynomial():
    cp = character_polynomial(3, 1)
    assert cp.poly == BiPoly.from_terms({(0, 1): 1, (0, 0): -1})  # y - 1
    assert cp.poly.format() == "y - 1"


def test_figure_eight_polynomial():
    cp = character_polynomial(5, 3)
    expected = BiPoly.from_terms(
        {(0, 2): 1, (2, 1): -1, (0, 1): -1, (2, 0): 2, (0, 0): -1}
    )
    assert cp.poly == expected
    assert cp.poly.format() == "y^2 - x^2*y - y + 2*x^2 - 1"


def test_even_parameter_reduces_to_the_mirror_presentation():
    # An even q is presented through p - q, so the polynomials agree exactly.
    assert character_polynomial(5, 2).poly == character_polynomial(5, 3).poly
    assert character_polynomial(7, 4).poly == character_polynomial(7, 3).poly


def test_inverse_parameter_same_knot_different_chart():
    # b(7,5) is the same knot as b(7,3) (3·5 ≡ 1 mod 14), but the normal
    # forms choose different second generators, so the y-coordinate differs;
    # the meridian-trace data must still coincide.
    from clk.invariant import atom_data, bad_set_to_list
    from clk.knots import TwoBridge

    pa = character_polynomial(7, 3)
    pb = character_polynomial(7, 5)
    assert pa.poly != pb.poly
    _, da, bad_a = atom_data(TwoBridge(7, 3))
    _, db, bad_b = atom_data(TwoBridge(7, 5))
    assert da == db
    assert bad_set_to_list(bad_a) == bad_set_to_list(bad_b)


def test_y_degree_matches_half_bridge_index():
    for p, q in [(3, 1), (5, 3), (5, 1), (7, 3), (7, 1), (9, 7)]:
        cp = character_polynomial(p, q)
        assert cp.poly.degree_y == (p - 1) // 2
        assert cp.generic_y_degree == (p - 1) // 2


def test_leading_y_coefficient_is_constant_for_small_knots():
    for p, q in [(3, 1), (5, 3), (5, 1), (7, 3)]:
        lead = character_polynomial(p, q).poly.leading_y()
        assert lead.degree == 0


def test_integer_coefficients_and_positive_lead():
    for p, q in [(5, 3), (7, 3), (9, 7)]:
        cp = character_polynomial(p, q)
        for c in cp.poly.terms().values():
            assert c.denominator == 1
        lead = cp.poly.leading_y()
        assert lead.coefficient(lead.degree).real_fraction() > 0


def test_abelian_locus_does_not_divide_the_result():
    # After dividing out y - (x^2 - 2) factors, no abelian component remains.
    abelian = BiPoly.from_terms({(0, 1): 1, (2, 0): -1, (0, 0): 2})
    for p, q in [(3, 1), (5, 3), (7, 3), (5, 1)]:
        cp = character_polynomial(p, q)
        assert not cp.poly.resultant_y(abelian).is_zero


def test_label_defaults_and_overrides():
    assert character_polynomial(5, 3).knot == "4_1"
    assert character_polynomial(5, 3, label="custom").knot == "custom"


# ---------------------------------------------------------------------------
# Matrix-entry conditions in (s, u)
# ---------------------------------------------------------------------------


def test_trefoil_entry_structure():
    entries = riley_condition(two_bridge_word(3, 1))
    assert len(entries) == 4
    zeros = [e for e in entries if e.is_zero]
    nonzero = [e for e in entries if not e.is_zero]
    assert len(zeros) == 2 and len(nonzero) == 2
    # One nonzero entry is -u times the other: they share the same vanishing set.
    e1, e2 = nonzero
    u = LaurentPoly2.u_var()
    assert e2 == -(u * e1) or e1 == -(u * e2)


def test_trefoil_condition_value():
    entries = riley_condition(two_bridge_word(3, 1))
    # The degree-one-in-u entry carries the defining condition.
    core = next(
        e
        for e in entries
        if not e.is_zero and max(eu for _, eu in e.terms) == 1
    )
    expected = (
        LaurentPoly2.u_var()
        + LaurentPoly2.s_power(2)
        + LaurentPoly2.s_power(-2)
        - LaurentPoly2.one()
    )
    assert core in (expected, -expected)


def test_entries_are_trace_symmetric():
    # Every entry rewrites in (x, u) without symmetry failure.
    for p, q in [(3, 1), (5, 3), (7, 3)]:
        for e in riley_condition(two_bridge_word(p, q)):
            e.laurent_normalize()  # must not raise


# ---------------------------------------------------------------------------
# Numeric lifts
# ---------------------------------------------------------------------------


def test_lifted_representation_satisfies_the_relator():
    import numpy as np

    cp = character_polynomial(5, 3)
    tau = 0.31 + 0.17j
    for y0 in slice_roots(cp, tau):
        rep = lift_character(cp, tau, y0)
        assert abs(rep.s + 1 / rep.s - tau) < 1e-9
        for m in (rep.A, rep.B):
            assert abs(np.linalg.det(m) - 1) < 1e-9
        relator = rep.word_image(cp.presentation().relator)
        assert float(np.max(np.abs(relator - np.eye(2)))) < 1e-8


def test_lift_reproduces_the_slice_value():
    cp = character_polynomial(7, 3)
    tau = 0.45
    roots = slice_roots(cp, tau)
    assert len(roots) == cp.generic_y_degree
    for y0 in roots:
        rep = lift_character(cp, tau, y0)
        assert abs(rep.y - y0) < 1e-8


def test_lift_rejects_points_off_the_variety():
    cp = character_polynomial(5, 3)
    with pytest.raises(DomainError):
        lift_character(cp, 0.3, 100.0)


def test_lift_rejects_parabolic_meridian():
    cp = character_polynomial(5, 3)
    with pytest.raises(DomainError):
        lift_character(cp, 2.0, 1.0)


def test_lifted_characters_are_irreducible_off_the_bad_set():
    cp = character_polynomial(5, 3)
    rng = random.Random(9)
    for _ in range(6):
        tau = rng.uniform(0.1, 0.8) + 1j * rng.uniform(0.05, 0.4)
        for y0 in slice_roots(cp, tau):
            rep = lift_character(cp, tau, y0)
            assert rep.irreducible


def test_commutator_trace_follows_the_two_generator_identity():
    # tr[A,B] - 2 = (y - 2)(y - (tau^2 - 2)) for the artifact's coordinates.
    cp = character_polynomial(5, 3)
    rng = random.Random(4)
    for _ in range(6):
        tau = rng.uniform(0.1, 0.9) + 1j * rng.uniform(0.0, 0.3)
        for y0 in slice_roots(cp, tau):
            rep = lift_character(cp, tau, y0)
            lhs = rep.commutator_trace - 2
            rhs = (y0 - 2) * (y0 - (tau * tau - 2))
            assert abs(lhs - rhs) < 1e-7


def test_slice_roots_at_zero_trace_are_golden():
    # At x = 0 the figure-eight slice is y^2 - y - 1 with roots (1 ± √5)/2.
    cp = character_polynomial(5, 3)
    roots = sorted(z.real for z in slice_roots(cp, 0.0))
    golden = (1 + 5 ** 0.5) / 2
    assert abs(roots[0] - (1 - golden)) < 1e-9
    assert abs(roots[1] - golden) < 1e-9
