"""Torus actions on glued representation pairs.

A glued pair is a pair of irreducible numeric representations with the same
meridian image M.  The torus that re-glues them is generated by the
trace-free projection F(M) = M − ½tr(M)·Id: conjugating the left factor by
exp(t·F(M)) preserves the meridian (F(M) commutes with M) and moves only
the relative gluing.  With ζ = det F(M) = 1 − τ²/4, the one-parameter
subgroup satisfies

    exp(t·F(M)) = cos(t√ζ)·Id + (sin(t√ζ)/√ζ)·F(M),

so exp(t·F(M)) = ±Id exactly when t is a multiple of π/√ζ — the stabilizer
lattice.  A scalar λ ∈ ℂ* acts through t = log(λ)/(2i√ζ); the branch
ambiguity of the logarithm shifts t by π/√ζ, which lies in the stabilizer
lattice, so the action is branch-independent (both branches are evaluated
and compared on every call).

Freeness of the induced ℤ/n action is certified numerically: the orbit of a
pair is fingerprinted by traces of mixed words in both factors, and the
verdict is free when all fingerprints stay separated.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DomainError, InternalError
from .euler import ConstructibleFunction, Points, Product, chi_weighted, cstar

DET_TOL = 1e-9
PARABOLIC_TOL = 1e-12
MERIDIAN_DRIFT_TOL = 1e-7
BRANCH_TOL = 1e-8
SEPARATION_TOL = 1e-6
IRREDUCIBLE_TOL = 1e-6

Mat = np.ndarray


def _det(m: Mat) -> complex:
    return complex(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def _sup(m: Mat) -> float:
    return float(np.max(np.abs(m)))


def trace_free(m: Mat) -> Mat:
    """The trace-free projection F(M) = M − ½·tr(M)·Id."""
    m = np.asarray(m, dtype=complex)
    return m - (np.trace(m) / 2.0) * np.eye(2)


def zeta_of(m: Mat) -> complex:
    """ζ = det F(M) for M ∈ SL(2, ℂ); equals 1 − τ²/4 for τ = tr M.

    Parabolic meridians (|ζ| < 1e−12, i.e. τ = ±2) are rejected.
    """
    m = np.asarray(m, dtype=complex)
    if abs(_det(m) - 1.0) > DET_TOL:
        raise DomainError("zeta_of expects a matrix of determinant 1")
    tau = complex(np.trace(m))
    z = _det(trace_free(m))
    closed = 1.0 - tau * tau / 4.0
    if abs(z - closed) > 1e-9 * max(1.0, abs(closed)):
        raise InternalError("det F(M) deviates from 1 − τ²/4")
    if abs(z) < PARABOLIC_TOL:
        raise DomainError("parabolic meridian trace: the torus degenerates")
    return z


def exp_sl2(t: complex, m: Mat) -> Mat:
    """exp(t·M) for trace-free M, via M² = −det(M)·Id.

    exp(t·M) = cos(t√d)·Id + (sin(t√d)/√d)·M with d = det M; the √d branch
    cancels between the two terms.  d = 0 degenerates to Id + t·M.
    """
    m = np.asarray(m, dtype=complex)
    if abs(complex(np.trace(m))) > 1e-9 * max(1.0, _sup(m)):
        raise DomainError("exp_sl2 expects a trace-free matrix")
    d = _det(m)
    sq = cmath.sqrt(d)
    if sq == 0:
        return np.eye(2, dtype=complex) + t * m
    return cmath.cos(t * sq) * np.eye(2, dtype=complex) + (
        cmath.sin(t * sq) / sq
    ) * m


def stabilizer_step(zeta: complex) -> complex:
    """The generator π/√ζ of the stabilizer lattice."""
    return math.pi / cmath.sqrt(zeta)


def is_stabilizer_multiple(t: complex, zeta: complex, tol: float = 1e-8) -> bool:
    """Whether t lies on the lattice (π/√ζ)·ℤ, to the given tolerance."""
    ratio = t * cmath.sqrt(zeta) / math.pi
    return abs(ratio - round(ratio.real)) < tol


# ---------------------------------------------------------------------------
# Glued pairs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GluedPair:
    """Two irreducible representations sharing one meridian image."""

    meridian: Mat
    b_left: Mat
    b_right: Mat
    tau: complex


def _commutator_trace(a: Mat, b: Mat) -> complex:
    return complex(np.trace(a @ b @ np.linalg.inv(a) @ np.linalg.inv(b)))


def glue_pair(left, right, twist: complex = 0.0) -> GluedPair:
    """Glue two numeric representations along their meridians.

    Both representations must present the same meridian matrix (same trace
    and the same eigenvalue branch); ``twist`` moves the right factor along
    the gluing torus before the pair is assembled.  Both factors must be
    irreducible and the meridian traces must agree to ``1e-9``.
    """
    a1, b1 = np.asarray(left.A, dtype=complex), np.asarray(left.B, dtype=complex)
    a2, b2 = np.asarray(right.A, dtype=complex), np.asarray(right.B, dtype=complex)
    if abs(complex(np.trace(a1)) - complex(np.trace(a2))) > 1e-9:
        raise DomainError("meridian traces of the two factors disagree")
    if _sup(a1 - a2) > 1e-9:
        raise DomainError(
            "meridian images are not identified; lift both factors at the "
            "same trace with the same eigenvalue branch"
        )
    for name, a, b in (("left", a1, b1), ("right", a2, b2)):
        if abs(_commutator_trace(a, b) - 2.0) <= IRREDUCIBLE_TOL:
            raise DomainError(f"the {name} factor is reducible")
    if twist != 0.0:
        g = exp_sl2(twist, trace_free(a1))
        b2 = g @ b2 @ np.linalg.inv(g)
    return GluedPair(
        meridian=a1, b_left=b1, b_right=b2, tau=complex(np.trace(a1))
    )


FINGERPRINT_WORDS: tuple[tuple[str, ...], ...] = (
    ("m",),
    ("b1",),
    ("b2",),
    ("m", "b1"),
    ("m", "b2"),
    ("b1", "b2"),
    ("b1", "m", "b2"),
)


def fingerprint(pair: GluedPair, words: Sequence[tuple[str, ...]] = FINGERPRINT_WORDS) -> np.ndarray:
    """Trace fingerprint of a glued pair over a fixed word list.

    The default words include both generators, their pairwise products and
    the meridian; the mixed products see the relative gluing, which is what
    the torus action moves.
    """
    table = {"m": pair.meridian, "b1": pair.b_left, "b2": pair.b_right}
    out = []
    for word in words:
        acc = np.eye(2, dtype=complex)
        for letter in word:
            acc = acc @ table[letter]
        out.append(complex(np.trace(acc)))
    return np.array(out, dtype=complex)


def fingerprint_distance(f1: np.ndarray, f2: np.ndarray) -> float:
    return float(np.max(np.abs(f1 - f2)))


# ---------------------------------------------------------------------------
# The additive and multiplicative actions
# ---------------------------------------------------------------------------


def additive_action(t: complex, pair: GluedPair) -> GluedPair:
    """Conjugate the left factor by exp(t·F(meridian)).

    The meridian image is preserved (F(M) commutes with M); the float drift
    of the conjugated meridian is checked against ``1e-7`` and the exact
    meridian is kept.
    """
    g = exp_sl2(t, trace_free(pair.meridian))
    g_inv = np.linalg.inv(g)
    drift = _sup(g @ pair.meridian @ g_inv - pair.meridian)
    if drift > MERIDIAN_DRIFT_TOL * max(1.0, _sup(pair.meridian)):
        raise InternalError(f"meridian image drifted by {drift:.3e} under the action")
    b_left = g @ pair.b_left @ g_inv
    return GluedPair(
        meridian=pair.meridian,
        b_left=b_left,
        b_right=pair.b_right,
        tau=pair.tau,
    )


def cstar_action(lam: complex, pair: GluedPair) -> GluedPair:
    """The action of λ ∈ ℂ* through t = log(λ)/(2i√ζ).

    Both branches of the logarithm are evaluated; their fingerprints must
    agree to ``1e-8`` (the branch shift π/√ζ lies in the stabilizer
    lattice), and the principal-branch result is returned.
    """
    lam = complex(lam)
    if lam == 0:
        raise DomainError("0 is not in ℂ*")
    z = zeta_of(pair.meridian)
    sq = cmath.sqrt(z)
    log_principal = cmath.log(lam)
    t1 = log_principal / (2j * sq)
    t2 = (log_principal + 2j * math.pi) / (2j * sq)
    out1 = additive_action(t1, pair)
    out2 = additive_action(t2, pair)
    f1, f2 = fingerprint(out1), fingerprint(out2)
    scale = max(1.0, float(np.max(np.abs(f1))))
    if fingerprint_distance(f1, f2) > BRANCH_TOL * scale:
        raise InternalError(
            "the ℂ* action depends on the logarithm branch; stabilizer "
            "lattice violated"
        )
    return out1


# ---------------------------------------------------------------------------
# Freeness certificates and the Type II contribution
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FreenessVerdict:
    """Outcome of the numeric ℤ/n freeness check on one orbit."""

    n: int
    free: bool
    min_separation: float
    colliding: tuple[int, int] | None
    closure_error: float


def verify_free_zn(
    pair: GluedPair,
    n: int,
    words: Sequence[tuple[str, ...]] = FINGERPRINT_WORDS,
) -> FreenessVerdict:
    """Certify that the ℤ/n ⊂ ℂ* orbit of a pair is free.

    Applies λ = e^{2πi/n} repeatedly, fingerprints each orbit point, and
    declares the orbit free when all pairwise fingerprint distances exceed
    ``1e-6``.  The orbit must close up after n steps (fingerprint distance
    relative to the fingerprint magnitude — traces of short words grow like
    a power of τ, so an absolute bound would reject honest roundoff at
    large traces); both factors must be irreducible (checked during
    gluing).
    """
    if n < 2:
        raise DomainError("freeness check needs n ≥ 2")
    lam = cmath.exp(2j * math.pi / n)
    orbit = [pair]
    for _ in range(n - 1):
        orbit.append(cstar_action(lam, orbit[-1]))
    closing = cstar_action(lam, orbit[-1])
    prints = [fingerprint(p, words) for p in orbit]
    closing_print = fingerprint(closing, words)
    scale = max(
        1.0,
        float(np.max(np.abs(prints[0]))),
        float(np.max(np.abs(closing_print))),
    )
    closure_error = fingerprint_distance(closing_print, prints[0]) / scale
    if closure_error > SEPARATION_TOL:
        raise InternalError(
            f"ℤ/{n} orbit fails to close (relative fingerprint error "
            f"{closure_error:.3e})"
        )
    best = math.inf
    colliding = None
    for i in range(n):
        for j in range(i + 1, n):
            d = fingerprint_distance(prints[i], prints[j])
            if d < best:
                best = d
                colliding = (i, j)
    free = best > SEPARATION_TOL
    return FreenessVerdict(
        n=n,
        free=free,
        min_separation=best if best is not math.inf else math.inf,
        colliding=None if free else colliding,
        closure_error=closure_error,
    )


def type_ii_chi(
    atom_reports: Sequence,
    pair_sampler: Callable[[], Iterable[GluedPair]] | None = None,
    n: int = 5,
) -> int:
    """Euler characteristic of the Type II stratum of a connected sum.

    The stratum is the product of the atoms' slice point sets with the
    gluing tori, Product[Points(χ₁), …, Points(χ_k), (k−1)×ℂ*]; its χ
    vanishes because every ℂ* factor does.  When a pair sampler is given,
    each sampled glued pair must additionally carry a free ℤ/n orbit.
    """
    if len(atom_reports) < 2:
        raise DomainError("a connected sum needs at least two atoms")
    chis = [int(r.chi_cl) for r in atom_reports]
    factors: list = [Points(c) for c in chis]
    factors.extend(cstar() for _ in range(len(chis) - 1))
    total = chi_weighted(ConstructibleFunction(((Product(tuple(factors)), 1),)))
    if total != 0:
        raise DomainError(f"Type II stratum has nonzero χ = {total}")
    if pair_sampler is not None:
        for sampled in pair_sampler():
            verdict = verify_free_zn(sampled, n)
            if not verdict.free:
                raise DomainError(
                    f"sampled glued pair carries a non-free ℤ/{n} orbit "
                    f"(separation {verdict.min_separation:.3e})"
                )
    return total


# ---------------------------------------------------------------------------
# Random matrices for stabilizer experiments
# ---------------------------------------------------------------------------


def random_sl2_with_trace(tau: complex, rng) -> Mat:
    """A random SL(2, ℂ) matrix of the given trace (rng-driven, conjugated)."""
    companion = np.array([[tau, -1], [1, 0]], dtype=complex)
    while True:
        g = np.array(
            [
                [rng.gauss(0, 1) + 1j * rng.gauss(0, 1) for _ in range(2)]
                for _ in range(2)
            ],
            dtype=complex,
        )
        d = _det(g)
        if abs(d) > 0.1:
            break
    g = g / cmath.sqrt(d)
    return g @ companion @ np.linalg.inv(g)
