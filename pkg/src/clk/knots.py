"""Two-bridge knot descriptors, group presentations, Alexander polynomials.

A descriptor is a '#'-separated list of atoms; an atom is either a named
knot from the built-in table or an explicit two-bridge pair ``2b(p,q)``
with p odd, p ≥ 3, 0 < q < p, gcd(p, q) = 1.  Each atom carries the
standard 2-generator presentation ⟨a, b | a·w·b⁻¹·w⁻¹⟩ with
w = b^{ε₁} a^{ε₂} b^{ε₃} ⋯ a^{ε_{p−1}} and ε_i = (−1)^{⌊i·q/p⌋}.

The Alexander polynomial is computed by Fox calculus on that presentation;
its roots determine the meridian traces where irreducible characters can
collide with abelian ones, via the correspondence t + t⁻¹ + 2 = τ².
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import InternalError, ParseError
from .exact import BiPoly, UniPoly
from . import tracking

NAMED_KNOTS: dict[str, tuple[int, int]] = {
    "3_1": (3, 1),
    "4_1": (5, 3),
    "5_1": (5, 1),
    "5_2": (7, 3),
    "6_1": (9, 7),
    "7_1": (7, 1),
}

Letter = tuple[str, int]


@dataclass(frozen=True)
class TwoBridge:
    """A two-bridge pair (p, q) naming the knot b(p, q) in S³."""

    p: int
    q: int

    def label(self) -> str:
        for name, pq in NAMED_KNOTS.items():
            if pq == (self.p, self.q):
                return name
        return f"2b({self.p},{self.q})"


@dataclass(frozen=True)
class TwoBridgePresentation:
    """⟨a, b | a·w·b⁻¹·w⁻¹⟩ with the alternating word w for b(p, q)."""

    p: int
    q: int
    epsilons: tuple[int, ...]
    word: tuple[Letter, ...]
    relator: tuple[Letter, ...]


# ---------------------------------------------------------------------------
# Descriptor parsing
# ---------------------------------------------------------------------------

_NAME_RE = re.compile(r"[0-9]+_[0-9]+")
_INT_RE = re.compile(r"[+-]?[0-9]+")


def parse_descriptor(text: str) -> list[TwoBridge]:
    """Parse a knot descriptor into its list of two-bridge atoms."""
    parser = _DescriptorParser(text)
    atoms = [parser.atom()]
    while True:
        parser.skip_space()
        if parser.done():
            return atoms
        if parser.peek() == "#":
            parser.pos += 1
            atoms.append(parser.atom())
        else:
            raise ParseError(
                f"expected '#' or end of descriptor, found {parser.peek()!r}",
                parser.pos,
            )


class _DescriptorParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def done(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos]

    def skip_space(self):
        while not self.done() and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, ch: str):
        self.skip_space()
        if self.done() or self.text[self.pos] != ch:
            found = "end of input" if self.done() else repr(self.text[self.pos])
            raise ParseError(f"expected {ch!r}, found {found}", self.pos)
        self.pos += 1

    def integer(self) -> int:
        self.skip_space()
        m = _INT_RE.match(self.text, self.pos)
        if not m:
            raise ParseError("expected an integer", self.pos)
        self.pos = m.end()
        return int(m.group())

    def atom(self) -> TwoBridge:
        self.skip_space()
        if self.done():
            raise ParseError("expected a knot atom", self.pos)
        start = self.pos
        if self.text.startswith("2b", self.pos):
            self.pos += 2
            self.expect("(")
            p = self.integer()
            self.expect(",")
            q = self.integer()
            self.expect(")")
            return self._validate(p, q, start)
        m = _NAME_RE.match(self.text, self.pos)
        if m:
            name = m.group()
            self.pos = m.end()
            if name not in NAMED_KNOTS:
                raise ParseError(f"unknown knot name {name!r}", start)
            p, q = NAMED_KNOTS[name]
            return TwoBridge(p, q)
        raise ParseError(
            f"expected a knot atom, found {self.text[self.pos]!r}", self.pos
        )

    def _validate(self, p: int, q: int, start: int) -> TwoBridge:
        if p < 3 or p % 2 == 0:
            raise ParseError(f"2b({p},{q}): p must be odd and at least 3", start)
        if not (0 < q < p):
            raise ParseError(f"2b({p},{q}): q must satisfy 0 < q < p", start)
        if math.gcd(p, q) != 1:
            raise ParseError(f"2b({p},{q}): p and q must be coprime", start)
        return TwoBridge(p, q)


# ---------------------------------------------------------------------------
# Presentations
# ---------------------------------------------------------------------------


def two_bridge_word(p: int, q: int) -> TwoBridgePresentation:
    """The alternating word and relator for b(p, q).

    The exponent formula ε_i = (−1)^{⌊i·q̃/p⌋} presents the knot group only
    for odd q̃; an even q is replaced by the mirror parameter p − q (odd,
    since p is odd), which has the same group and the same trace
    coordinates.
    """
    if p < 3 or p % 2 == 0 or not (0 < q < p) or math.gcd(p, q) != 1:
        raise ParseError(f"({p},{q}) is not a valid two-bridge pair")
    q_odd = q if q % 2 == 1 else p - q
    epsilons = tuple((-1) ** ((i * q_odd) // p) for i in range(1, p))
    word: list[Letter] = []
    for i, eps in enumerate(epsilons, start=1):
        gen = "b" if i % 2 == 1 else "a"
        word.append((gen, eps))
    relator = (("a", 1), *word, ("b", -1), *_invert_word(word))
    return TwoBridgePresentation(
        p=p, q=q, epsilons=epsilons, word=tuple(word), relator=relator
    )


def _invert_word(word: list[Letter]) -> list[Letter]:
    return [(g, -e) for g, e in reversed(word)]


def word_exponent_sum(word: tuple[Letter, ...], gen: str | None = None) -> int:
    return sum(e for g, e in word if gen is None or g == gen)


# ---------------------------------------------------------------------------
# Fox calculus and the Alexander polynomial
# ---------------------------------------------------------------------------


def _fox_derivative_abelianized(word: tuple[Letter, ...], gen: str) -> dict[int, int]:
    """φ(∂word/∂gen) in ℤ[t, t⁻¹], as exponent → coefficient."""
    out: dict[int, int] = {}
    prefix = 0
    for g, e in word:
        if g == gen:
            if e == 1:
                out[prefix] = out.get(prefix, 0) + 1
            else:
                out[prefix - 1] = out.get(prefix - 1, 0) - 1
        prefix += e
    return {k: v for k, v in out.items() if v != 0}


def _laurent_normal_form(coeffs: dict[int, int]) -> UniPoly:
    """Strip t-units and fix the sign so the leading coefficient is positive."""
    if not coeffs:
        return UniPoly.zero()
    lo = min(coeffs)
    hi = max(coeffs)
    vals = [coeffs.get(k, 0) for k in range(lo, hi + 1)]
    if vals[-1] < 0:
        vals = [-v for v in vals]
    return UniPoly(vals)


def fox_alexander(pres: TwoBridgePresentation) -> UniPoly:
    """The Alexander polynomial from the Fox derivatives of the relator.

    Both partial derivatives give the polynomial up to a unit ±t^k; they are
    cross-checked against each other, and the result is normalized to have
    nonnegative exponents, nonzero constant term, and positive leading
    coefficient.
    """
    da = _laurent_normal_form(_fox_derivative_abelianized(pres.relator, "a"))
    db = _laurent_normal_form(_fox_derivative_abelianized(pres.relator, "b"))
    if da != db:
        raise InternalError(
            f"Fox derivative mismatch for ({pres.p},{pres.q}): "
            f"{da.format('t')} vs {db.format('t')}"
        )
    delta = db.integer_normalize()
    at_one = delta.evaluate(1)
    if at_one.real_fraction() not in (Fraction(1), Fraction(-1)):
        raise InternalError(
            f"Alexander polynomial fails Δ(1) = ±1 for ({pres.p},{pres.q})"
        )
    return delta


@dataclass(frozen=True)
class GoodTraceWitness:
    """Meridian traces excluded by the Alexander polynomial.

    ``defining_poly`` is an exact polynomial in τ whose roots are the traces
    where t + t⁻¹ + 2 = τ² for some Alexander root t; ``roots`` are numeric
    approximations of its distinct roots.
    """

    defining_poly: UniPoly
    roots: tuple[complex, ...]


def alexander_bad_traces(delta: UniPoly) -> GoodTraceWitness:
    """Res_t(Δ(t), t² − (τ²−2)t + 1), with numeric root approximations."""
    delta_b = BiPoly.from_terms(
        {(0, j): c.real_fraction() for j, c in enumerate(delta.coeffs)}
    )
    pairing = BiPoly.from_terms({(0, 2): 1, (2, 1): -1, (0, 1): 2, (0, 0): 1})
    defining = delta_b.resultant_y(pairing).integer_normalize()
    roots: tuple[complex, ...] = ()
    if defining.degree >= 1:
        sf = defining.squarefree_part()
        roots = tuple(
            sorted(
                tracking.all_roots(sf.to_complex_coeffs()),
                key=lambda z: (z.real, z.imag),
            )
        )
    return GoodTraceWitness(defining_poly=defining, roots=roots)
