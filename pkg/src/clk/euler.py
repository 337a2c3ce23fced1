"""Euler characteristics of strata, weighted counts, and Behrend weights.

Strata are finite disjoint unions of points, punctured Riemann surfaces, and
finite products of those; all have even real dimension.  Two independent
routes to χ are kept side by side — the closed formula and the alternating
sum of compactly-supported Betti numbers — and every weighted computation
asserts that they agree.

For zero-dimensional slice schemes the Behrend weight of a multiplicity-k
fat point is k; ``milnor_oracle`` certifies that convention independently by
counting points in nearby Milnor fibers of y^{k+1}/(k+1) and applying
ν = (−1)^{dim}(1 − χ(fiber)).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence, Union

from .errors import DomainError, InternalError
from .exact import GaussianRational, UniPoly
from . import tracking


# ---------------------------------------------------------------------------
# Strata
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Points:
    """A finite set of points."""

    count: int

    def __post_init__(self):
        if self.count < 0:
            raise DomainError("point count must be nonnegative")


@dataclass(frozen=True)
class PuncturedSurface:
    """A closed orientable genus-g surface with k punctures."""

    genus: int
    punctures: int

    def __post_init__(self):
        if self.genus < 0 or self.punctures < 0:
            raise DomainError("genus and puncture count must be nonnegative")


@dataclass(frozen=True)
class Product:
    """A finite product of strata."""

    factors: tuple["Stratum", ...]


Stratum = Union[Points, PuncturedSurface, Product]


def cstar() -> PuncturedSurface:
    """The multiplicative group ℂ*, a twice-punctured sphere."""
    return PuncturedSurface(genus=0, punctures=2)


def chi(stratum: Stratum) -> int:
    """Euler characteristic by the closed formula."""
    if isinstance(stratum, Points):
        return stratum.count
    if isinstance(stratum, PuncturedSurface):
        return 2 - 2 * stratum.genus - stratum.punctures
    if isinstance(stratum, Product):
        out = 1
        for f in stratum.factors:
            out *= chi(f)
        return out
    raise DomainError(f"unknown stratum {stratum!r}")


def _betti_compact(stratum: Stratum) -> list[int]:
    """Compactly-supported Betti numbers, low degree first."""
    if isinstance(stratum, Points):
        return [stratum.count]
    if isinstance(stratum, PuncturedSurface):
        g, k = stratum.genus, stratum.punctures
        if k == 0:
            return [1, 2 * g, 1]
        return [0, 2 * g + k - 1, 1]
    if isinstance(stratum, Product):
        table = [1]
        for f in stratum.factors:
            other = _betti_compact(f)
            table = [
                sum(
                    table[i] * other[d - i]
                    for i in range(len(table))
                    if 0 <= d - i < len(other)
                )
                for d in range(len(table) + len(other) - 1)
            ]
        return table
    raise DomainError(f"unknown stratum {stratum!r}")


def chi_compact_support(stratum: Stratum) -> int:
    """Euler characteristic with compact supports, via Betti numbers."""
    return sum(
        (-1) ** d * b for d, b in enumerate(_betti_compact(stratum))
    )


def _check_chi_agreement(stratum: Stratum) -> int:
    a = chi(stratum)
    b = chi_compact_support(stratum)
    if a != b:
        raise InternalError(
            f"χ and compactly-supported χ disagree on {stratum!r}: {a} vs {b}"
        )
    return a


# ---------------------------------------------------------------------------
# Constructible functions and weighted characteristics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstructibleFunction:
    """An integer-valued function, constant on each listed stratum."""

    parts: tuple[tuple[Stratum, int], ...]


def chi_weighted(f: ConstructibleFunction) -> int:
    """Weighted Euler characteristic Σ n·χ(f⁻¹(n)).

    Computed twice — term by term over the strata, and by regrouping the
    strata into level sets — and asserted equal; the per-stratum χ values
    themselves are asserted against the compact-support route.
    """
    termwise = 0
    by_value: dict[int, int] = {}
    for stratum, value in f.parts:
        c = _check_chi_agreement(stratum)
        termwise += value * c
        by_value[value] = by_value.get(value, 0) + c
    level_sets = sum(value * total for value, total in by_value.items())
    if termwise != level_sets:
        raise InternalError(
            f"weighted χ mismatch between routes: {termwise} vs {level_sets}"
        )
    return termwise


# ---------------------------------------------------------------------------
# Zero-dimensional schemes and Behrend weights
# ---------------------------------------------------------------------------

Location = Union[GaussianRational, complex]
MATCH_TOL = 1e-9


@dataclass(frozen=True)
class SchemePoint:
    """One point of a zero-dimensional scheme with its multiplicity."""

    location: Location
    multiplicity: int


@dataclass(frozen=True)
class ZeroDimScheme:
    """A finite scheme: points with multiplicities, plus its source."""

    points: tuple[SchemePoint, ...]
    source: UniPoly | None = None


@dataclass(frozen=True)
class WeightedPoint:
    location: Location
    multiplicity: int
    weight: int
    excluded: bool


def _loc_complex(loc: Location) -> complex:
    if isinstance(loc, GaussianRational):
        return loc.to_complex()
    return complex(loc)


def _matches(loc: Location, excl: Location) -> bool:
    if isinstance(loc, GaussianRational) and isinstance(excl, GaussianRational):
        return loc == excl
    return abs(_loc_complex(loc) - _loc_complex(excl)) < MATCH_TOL


def behrend_zero_dim(
    scheme: ZeroDimScheme, excluded: Sequence[Location] = ()
) -> tuple[int, tuple[WeightedPoint, ...]]:
    """Behrend-weighted count of a zero-dimensional scheme.

    The weight of a multiplicity-k fat point is k; excluded locations are
    matched exactly when both sides are exact, else to within ``1e-9``.
    An excluded location matching more than one point is a tolerance
    collision and raises a domain error.
    """
    flags = [False] * len(scheme.points)
    for excl in excluded:
        hits = [
            i for i, pt in enumerate(scheme.points) if _matches(pt.location, excl)
        ]
        if len(hits) > 1:
            raise DomainError(
                "excluded location matches several scheme points: "
                "collision at tolerance"
            )
        for i in hits:
            flags[i] = True
    weighted = tuple(
        WeightedPoint(
            location=pt.location,
            multiplicity=pt.multiplicity,
            weight=pt.multiplicity,
            excluded=flag,
        )
        for pt, flag in zip(scheme.points, flags)
    )
    total = sum(w.weight for w in weighted if not w.excluded)
    return total, weighted


def scheme_from_poly(poly: UniPoly) -> ZeroDimScheme:
    """The zero-dimensional scheme cut out by a univariate polynomial."""
    if poly.is_zero:
        raise DomainError("the zero polynomial does not cut out a finite scheme")
    points: list[SchemePoint] = []
    for factor, mult in poly.squarefree():
        for root in tracking.all_roots(factor.to_complex_coeffs()):
            points.append(SchemePoint(location=root, multiplicity=mult))
    points.sort(key=lambda p: (_loc_complex(p.location).real, _loc_complex(p.location).imag))
    return ZeroDimScheme(points=tuple(points), source=poly)


# ---------------------------------------------------------------------------
# Milnor-fiber oracle
# ---------------------------------------------------------------------------


def milnor_oracle(k: int, epsilon: float = 1e-3, trials: int = 8) -> int:
    """Behrend weight of the multiplicity-k fat point by fiber counting.

    Counts the points of the Milnor fiber of f(y) = y^{k+1}/(k+1) at radius
    ``epsilon`` for several fiber angles and returns ν = count − 1 (the
    one-dimensional case of ν = (−1)^{dim}(1 − χ)).  Inconsistent counts
    across trials are an error.
    """
    if not (1 <= k <= 8):
        raise DomainError("milnor_oracle supports multiplicities 1..8")
    if not (1e-6 <= epsilon <= 1e-2):
        raise DomainError("epsilon must lie in [1e-6, 1e-2]")
    if trials < 1:
        raise DomainError("need at least one trial angle")
    counts = []
    for t in range(trials):
        theta = 2.0 * math.pi * t / trials
        target = (k + 1) * epsilon * cmath.exp(1j * theta)
        coeffs = [-target] + [0j] * k + [1 + 0j]
        roots = tracking.all_roots(coeffs)
        distinct = 0
        seen: list[complex] = []
        for r in roots:
            if all(abs(r - q) > 1e-9 for q in seen):
                seen.append(r)
                distinct += 1
        counts.append(distinct)
    if len(set(counts)) != 1:
        raise DomainError(
            f"Milnor fiber point count unstable across angles: {counts}"
        )
    return counts[0] - 1
