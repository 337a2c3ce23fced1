"""Stratified Euler characteristics, constructible functions, Behrend weights."""

from __future__ import annotations

import random

import pytest

from clk.errors import DomainError
from clk.euler import (
    ConstructibleFunction,
    Points,
    Product,
    PuncturedSurface,
    SchemePoint,
    ZeroDimScheme,
    behrend_zero_dim,
    chi,
    chi_compact_support,
    chi_weighted,
    cstar,
    milnor_oracle,
    scheme_from_poly,
)
from clk.exact import GaussianRational, UniPoly


# ---------------------------------------------------------------------------
# Strata and the two chi routes
# ---------------------------------------------------------------------------


def test_chi_of_basic_strata():
    assert chi(Points(7)) == 7
    assert chi(PuncturedSurface(0, 1)) == 1  # the affine line
    assert chi(cstar()) == 0
    assert chi(PuncturedSurface(0, 0)) == 2  # the sphere
    assert chi(PuncturedSurface(2, 0)) == -2
    assert chi(PuncturedSurface(1, 3)) == -3


def test_chi_is_multiplicative_on_products():
    p = Product((Points(3), PuncturedSurface(1, 1)))
    assert chi(p) == 3 * (2 - 2 - 1)
    q = Product((cstar(), Points(100)))
    assert chi(q) == 0


def test_compact_support_route_agrees_everywhere():
    rng = random.Random(17)
    for _ in range(50):
        stratum = _random_stratum(rng, depth=2)
        assert chi(stratum) == chi_compact_support(stratum)


def _random_stratum(rng: random.Random, depth: int):
    kind = rng.randrange(4 if depth > 0 else 3)
    if kind == 0:
        return Points(rng.randint(0, 9))
    if kind == 1:
        return PuncturedSurface(rng.randint(0, 3), rng.randint(0, 4))
    if kind == 2:
        return cstar()
    return Product(
        tuple(_random_stratum(rng, depth - 1) for _ in range(rng.randint(1, 3)))
    )


def test_empty_point_set_has_zero_chi():
    assert chi(Points(0)) == 0
    assert chi_compact_support(Points(0)) == 0


def test_negative_point_count_is_rejected():
    with pytest.raises(DomainError):
        Points(-1)


def test_negative_genus_or_punctures_rejected():
    with pytest.raises(DomainError):
        PuncturedSurface(-1, 0)
    with pytest.raises(DomainError):
        PuncturedSurface(0, -2)


# ---------------------------------------------------------------------------
# Constructible functions
# ---------------------------------------------------------------------------


def test_weighted_chi_of_a_two_part_function():
    f = ConstructibleFunction(((Points(2), 3), (cstar(), -1)))
    assert chi_weighted(f) == 6


def test_weighted_chi_with_coinciding_values():
    f = ConstructibleFunction(
        ((Points(1), 5), (Points(4), 5), (PuncturedSurface(0, 1), -2))
    )
    assert chi_weighted(f) == 5 * 5 - 2


def test_weighted_chi_of_empty_function():
    assert chi_weighted(ConstructibleFunction(())) == 0


def test_weighted_chi_kills_torus_factors():
    # Any product with a cstar factor contributes nothing.
    f = ConstructibleFunction(
        ((Product((Points(12), cstar(), cstar())), 9), (Points(1), 4))
    )
    assert chi_weighted(f) == 4


# ---------------------------------------------------------------------------
# Zero-dimensional schemes and Behrend weights
# ---------------------------------------------------------------------------


def test_fat_point_weight_equals_multiplicity():
    for k in range(1, 6):
        scheme = scheme_from_poly(UniPoly.variable() ** k)
        total, weighted = behrend_zero_dim(scheme)
        assert total == k
        assert len(weighted) == 1
        assert weighted[0].multiplicity == k
        assert weighted[0].weight == k
        assert not weighted[0].excluded


def test_scheme_from_poly_splits_multiplicities():
    y = UniPoly.variable()
    poly = (y - 1) ** 2 * (y + 3)
    scheme = scheme_from_poly(poly)
    mults = sorted(pt.multiplicity for pt in scheme.points)
    assert mults == [1, 2]
    total, _ = behrend_zero_dim(scheme)
    assert total == 3


def test_exclusion_drops_a_point_from_the_count():
    y = UniPoly.variable()
    scheme = scheme_from_poly((y - 1) * (y + 1))
    total, weighted = behrend_zero_dim(scheme, excluded=(1 + 0j,))
    assert total == 1
    flags = {round(_loc(w).real): w.excluded for w in weighted}
    assert flags[1] is True and flags[-1] is False


def test_exact_exclusion_matches_exactly():
    y = UniPoly.variable()
    scheme = ZeroDimScheme(
        points=(
            SchemePoint(GaussianRational(1), 1),
            SchemePoint(GaussianRational(2), 1),
        )
    )
    total, weighted = behrend_zero_dim(scheme, excluded=(GaussianRational(2),))
    assert total == 1
    assert [w.excluded for w in weighted] == [False, True]


def test_collision_at_tolerance_is_a_domain_error():
    scheme = ZeroDimScheme(
        points=(
            SchemePoint(0.0 + 0j, 1),
            SchemePoint(1e-12 + 0j, 1),
        )
    )
    with pytest.raises(DomainError):
        behrend_zero_dim(scheme, excluded=(0.0 + 0j,))


def test_zero_polynomial_cuts_no_finite_scheme():
    with pytest.raises(DomainError):
        scheme_from_poly(UniPoly.zero())


def _loc(w):
    loc = w.location
    if isinstance(loc, GaussianRational):
        return loc.to_complex()
    return complex(loc)


# ---------------------------------------------------------------------------
# The vanishing-cycle cross-check
# ---------------------------------------------------------------------------


def test_milnor_oracle_counts_match_multiplicity():
    for k in range(1, 9):
        assert milnor_oracle(k) == k
        scheme = scheme_from_poly(UniPoly.variable() ** k)
        total, _ = behrend_zero_dim(scheme)
        assert milnor_oracle(k) == total


def test_milnor_oracle_rejects_bad_inputs():
    with pytest.raises(DomainError):
        milnor_oracle(0)
    with pytest.raises(DomainError):
        milnor_oracle(9)
    with pytest.raises(DomainError):
        milnor_oracle(3, epsilon=0.5)
    with pytest.raises(DomainError):
        milnor_oracle(3, epsilon=1e-9)
