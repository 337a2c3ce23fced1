"""Character varieties of two-bridge knots in trace coordinates.

The meridian generators are represented in the standard upper/lower
triangular normal form

    A = [[s, 1], [0, 1/s]],      B = [[s, 0], [u, 1/s]],

so the representation condition for ⟨a, b | a·w·b⁻¹·w⁻¹⟩ is A·W = W·B with
W the word matrix of w.  The gcd of the four entries of A·W − W·B cuts out
the nonabelian representations; rewriting it in the trace coordinates

    x = s + s⁻¹ = tr ρ(a),      y = tr ρ(ab) = u + x² − 2,

gives the character polynomial stored by the artifact.  The abelian locus
is the parabola y = x² − 2 (that is, u = 0); if it divides the rewritten
gcd it is removed.  All of this is exact; numeric representations are only
produced on demand by ``lift_character``.
"""
from __future__ import annotations

import cmath
import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, InternalError, LaurentSymmetryError
from .exact import BiPoly, GaussianRational, LaurentPoly2, UniPoly, bipoly_gcd
from .knots import TwoBridge, TwoBridgePresentation, two_bridge_word

log = logging.getLogger(__name__)

Mat2 = tuple[tuple[LaurentPoly2, LaurentPoly2], tuple[LaurentPoly2, LaurentPoly2]]


def _sym_matrices() -> dict[str, Mat2]:
    s = LaurentPoly2.s_power(1)
    si = LaurentPoly2.s_power(-1)
    u = LaurentPoly2.u_var()
    one = LaurentPoly2.one()
    zero = LaurentPoly2.zero()
    a = ((s, one), (zero, si))
    a_inv = ((si, -one), (zero, s))
    b = ((s, zero), (u, si))
    b_inv = ((si, zero), (-u, s))
    return {"a+": a, "a-": a_inv, "b+": b, "b-": b_inv}


def _mat_mul(m1: Mat2, m2: Mat2) -> Mat2:
    return tuple(
        tuple(
            m1[i][0] * m2[0][j] + m1[i][1] * m2[1][j]
            for j in range(2)
        )
        for i in range(2)
    )


def _word_matrix(word, table) -> Mat2:
    out = ((LaurentPoly2.one(), LaurentPoly2.zero()),
           (LaurentPoly2.zero(), LaurentPoly2.one()))
    for gen, exp in word:
        out = _mat_mul(out, table[f"{gen}{'+' if exp == 1 else '-'}"])
    return out


def riley_condition(pres: TwoBridgePresentation) -> tuple[LaurentPoly2, ...]:
    """The four entries of A·W − W·B as exact Laurent polynomials in (s, u)."""
    table = _sym_matrices()
    w = _word_matrix(pres.word, table)
    a, b = table["a+"], table["b+"]
    aw = _mat_mul(a, w)
    wb = _mat_mul(w, b)
    return tuple(aw[i][j] - wb[i][j] for i in range(2) for j in range(2))


@dataclass(frozen=True)
class CharacterPolynomial:
    """The exact character polynomial of one two-bridge atom.

    ``poly`` lives in the trace coordinates (x, y) = (tr ρ(a), tr ρ(ab)),
    has coprime integer coefficients with positive lex-leading (y-major)
    coefficient, and carries no abelian-locus factor y − (x² − 2).
    """

    knot: str
    p: int
    q: int
    poly: BiPoly
    abelian_factors_removed: int

    @property
    def generic_y_degree(self) -> int:
        return (self.p - 1) // 2

    def presentation(self) -> TwoBridgePresentation:
        return two_bridge_word(self.p, self.q)


def _abelian_locus() -> BiPoly:
    # y - (x^2 - 2)
    return BiPoly.from_terms({(0, 1): 1, (2, 0): -1, (0, 0): 2})


@lru_cache(maxsize=None)
def character_polynomial(p: int, q: int, label: str | None = None) -> CharacterPolynomial:
    """Derive (and cache) the character polynomial of b(p, q)."""
    pres = two_bridge_word(p, q)
    entries = [e for e in riley_condition(pres) if not e.is_zero]
    if not entries:
        raise InternalError(f"all Riley entries vanish identically for ({p},{q})")
    gcd_su: BiPoly | None = None
    for entry in entries:
        stripped, _ = entry.strip_s()
        as_bipoly = stripped.to_bipoly_su()
        gcd_su = as_bipoly if gcd_su is None else bipoly_gcd(gcd_su, as_bipoly)
    gcd_su = gcd_su.shift_down_x(gcd_su.min_x_degree())
    try:
        in_xu = LaurentPoly2.from_bipoly_su(gcd_su).laurent_normalize()
    except LaurentSymmetryError as exc:
        raise InternalError(
            f"Riley gcd for ({p},{q}) is not symmetric in s ↔ 1/s; "
            "word generation is broken"
        ) from exc
    # substitute u = y - x^2 + 2 to land in (x, y)
    u_image = BiPoly.from_terms({(0, 1): 1, (2, 0): -1, (0, 0): 2})
    in_xy = in_xu.substitute_y(u_image)
    removed = 0
    locus = _abelian_locus()
    while True:
        quot, rem = in_xy.divmod_y_monic(locus)
        if rem.is_zero and not quot.is_zero:
            in_xy = quot
            removed += 1
        else:
            break
    if removed:
        log.info("removed %d abelian-locus factor(s) for (%d,%d)", removed, p, q)
    poly = in_xy.integer_normalize()
    cp = CharacterPolynomial(
        knot=label or TwoBridge(p, q).label(),
        p=p,
        q=q,
        poly=poly,
        abelian_factors_removed=removed,
    )
    if poly.degree_y != cp.generic_y_degree:
        raise InternalError(
            f"character polynomial for ({p},{q}) has y-degree "
            f"{poly.degree_y}, expected {(p - 1) // 2}"
        )
    return cp


# ---------------------------------------------------------------------------
# Numeric lifts
# ---------------------------------------------------------------------------

DET_TOL = 1e-10
TRACE_TOL = 1e-10
RELATOR_TOL = 1e-8
ON_VARIETY_TOL = 1e-8
PARABOLIC_TOL = 1e-12
IRREDUCIBLE_TOL = 1e-6


@dataclass(frozen=True)
class NumericRep:
    """A numeric SL(2, ℂ) representation in Riley normal form."""

    tau: complex
    s: complex
    u: complex
    y: complex
    A: np.ndarray
    B: np.ndarray

    def matrices(self) -> dict[str, np.ndarray]:
        a_inv = np.array([[1 / self.s, -1], [0, self.s]], dtype=complex)
        b_inv = np.array([[1 / self.s, 0], [-self.u, self.s]], dtype=complex)
        return {"a+": self.A, "a-": a_inv, "b+": self.B, "b-": b_inv}

    def word_image(self, word) -> np.ndarray:
        table = self.matrices()
        out = np.eye(2, dtype=complex)
        for gen, exp in word:
            out = out @ table[f"{gen}{'+' if exp == 1 else '-'}"]
        return out

    @property
    def commutator_trace(self) -> complex:
        comm = (
            self.A
            @ self.B
            @ np.linalg.inv(self.A)
            @ np.linalg.inv(self.B)
        )
        return complex(np.trace(comm))

    @property
    def irreducible(self) -> bool:
        return abs(self.commutator_trace - 2.0) > IRREDUCIBLE_TOL


def lift_character(
    cp: CharacterPolynomial, tau: complex, y0: complex
) -> NumericRep:
    """Lift a point (τ, y₀) of the character polynomial to matrices.

    Rejects parabolic meridian traces τ = ±2 and points that do not lie on
    the variety within ``1e-8``.  The returned representation satisfies
    det = 1 and equal meridian traces to ``1e-10`` and kills the relator
    to ``1e-8``; those invariants are verified before returning.
    """
    tau = complex(tau)
    y0 = complex(y0)
    if abs(tau - 2.0) < PARABOLIC_TOL or abs(tau + 2.0) < PARABOLIC_TOL:
        raise DomainError("parabolic meridian trace excluded")
    value = cp.poly.eval_complex(tau, y0)
    if abs(value) > ON_VARIETY_TOL * _poly_scale(cp.poly, tau, y0):
        raise DomainError(
            f"({tau}, {y0}) does not lie on the character variety "
            f"(residual {abs(value):.3e})"
        )
    s = (tau + cmath.sqrt(tau * tau - 4.0)) / 2.0
    u = y0 - tau * tau + 2.0
    A = np.array([[s, 1], [0, 1 / s]], dtype=complex)
    B = np.array([[s, 0], [u, 1 / s]], dtype=complex)
    rep = NumericRep(tau=tau, s=s, u=u, y=y0, A=A, B=B)
    _validate_rep(cp, rep)
    return rep


def _poly_scale(poly: BiPoly, x0: complex, y0: complex) -> float:
    ax, ay = abs(x0), abs(y0)
    total = 0.0
    for (i, j), c in poly.terms().items():
        total += abs(float(c)) * ax**i * ay**j
    return max(1.0, total)


def _validate_rep(cp: CharacterPolynomial, rep: NumericRep) -> None:
    for name, m in (("A", rep.A), ("B", rep.B)):
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if abs(det - 1.0) > DET_TOL:
            raise InternalError(f"det {name} deviates from 1 by {abs(det - 1.0):.3e}")
    if abs(np.trace(rep.A) - np.trace(rep.B)) > TRACE_TOL:
        raise InternalError("meridian traces of A and B disagree")
    relator = rep.word_image(cp.presentation().relator)
    residual = float(np.max(np.abs(relator - np.eye(2))))
    if residual > RELATOR_TOL:
        raise DomainError(
            f"lifted matrices violate the relator (residual {residual:.3e})"
        )


def slice_roots(cp: CharacterPolynomial, tau: complex) -> list[complex]:
    """Numeric roots of the y-slice at a float τ (possibly with collisions)."""
    from . import tracking

    return tracking.all_roots(cp.poly.slice_complex_coeffs(tau))
