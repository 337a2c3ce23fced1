"""clk — Casson-Lin invariants of two-bridge knots and their connected sums.

Exact character-variety polynomials in trace coordinates, Behrend-weighted
Euler characteristics of trace slices, exceptional-set detection, torus
actions on glued pairs, and numeric monodromy tracking; served over HTTP by
``clk.service`` and driven by the ``clk`` command-line client.
"""
from __future__ import annotations

__version__ = "0.1.0"

from .charvar import CharacterPolynomial, character_polynomial, lift_character
from .errors import ClkError, DomainError, InternalError, ParseError
from .exact import BiPoly, GaussianRational, LaurentPoly2, UniPoly
from .invariant import (
    BadSet,
    InvariantReport,
    SliceReport,
    bad_set,
    chi_b_slice,
    compute,
    connected_sum_invariant,
    sweep,
)
from .knots import (
    NAMED_KNOTS,
    TwoBridge,
    TwoBridgePresentation,
    fox_alexander,
    parse_descriptor,
    two_bridge_word,
)

__all__ = [
    "BadSet",
    "BiPoly",
    "CharacterPolynomial",
    "ClkError",
    "DomainError",
    "GaussianRational",
    "InternalError",
    "InvariantReport",
    "LaurentPoly2",
    "NAMED_KNOTS",
    "ParseError",
    "SliceReport",
    "TwoBridge",
    "TwoBridgePresentation",
    "UniPoly",
    "bad_set",
    "character_polynomial",
    "chi_b_slice",
    "compute",
    "connected_sum_invariant",
    "fox_alexander",
    "lift_character",
    "parse_descriptor",
    "sweep",
    "two_bridge_word",
    "__version__",
]
