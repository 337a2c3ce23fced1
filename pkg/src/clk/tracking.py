"""Numeric root finding and monodromy of trace slices.

``all_roots`` is a simultaneous Aberth–Ehrlich iteration with per-root Newton
polish; it is fully deterministic (fixed starting circle, fixed iteration
order), so identical inputs give bit-identical root lists.

``continue_roots`` drags the root set of the y-slice polynomial around a
circle in the τ-plane by predictor–corrector continuation with adaptive step
halving, then matches the final fiber against the base fiber to produce the
monodromy permutation.  Loops are validated against the exceptional set and
refuse to pass too close to it.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .errors import DomainError

if TYPE_CHECKING:  # pragma: no cover - typing only
    from .charvar import CharacterPolynomial

LEAD_TOL = 1e-12
NEWTON_TOL = 1e-12
NEWTON_MAX_STEPS = 20
COLLISION_TOL = 1e-8
APPROACH_TOL = 10 * COLLISION_TOL
STEP_FLOOR_DENOM = 2**14
LOOP_CLEARANCE = 1e-6
MATCH_MARGIN = 10.0
RESIDUAL_TOL = 1e-10


def _residual_scale(coeffs: Sequence[complex], z: complex) -> float:
    az = abs(z)
    s = 0.0
    power = 1.0
    for c in coeffs:
        s += abs(c) * power
        power *= az
    return max(1.0, s)


def _horner(coeffs: Sequence[complex], z: complex) -> tuple[complex, complex]:
    p = 0j
    dp = 0j
    for c in reversed(coeffs):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def all_roots(coeffs: Sequence[complex]) -> list[complex]:
    """All complex roots of a polynomial given low-degree-first coefficients.

    Deterministic Aberth–Ehrlich iteration refined by Newton steps to a
    residual below ``1e-12`` relative to the coefficient scale.  The caller
    is responsible for passing a squarefree polynomial; clustered multiple
    roots will fail to converge.
    """
    cs = [complex(c) for c in coeffs]
    if not cs or all(c == 0 for c in cs):
        raise DomainError("root finding on the zero polynomial")
    if abs(cs[-1]) < LEAD_TOL * max(abs(c) for c in cs):
        raise DomainError("leading coefficient vanishes numerically")
    n = len(cs) - 1
    if n == 0:
        return []
    if n == 1:
        return [-cs[0] / cs[1]]
    lead = cs[-1]
    monic = [c / lead for c in cs]
    radius = 1.0 + max(abs(c) for c in monic[:-1])
    z = [
        radius * cmath.exp(1j * (2.0 * math.pi * k / n + 0.4))
        for k in range(n)
    ]
    for _ in range(500):
        max_step = 0.0
        for k in range(n):
            p, dp = _horner(monic, z[k])
            if abs(p) <= NEWTON_TOL * _residual_scale(monic, z[k]):
                # At the evaluation roundoff floor; further steps only jitter.
                continue
            if dp == 0:
                z[k] += 1e-6 + 1e-6j
                max_step = math.inf
                continue
            newton = p / dp
            s = 0j
            for j in range(n):
                if j != k:
                    diff = z[k] - z[j]
                    if diff == 0:
                        diff = 1e-12 + 1e-12j
                    s += 1.0 / diff
            denom = 1.0 - newton * s
            w = newton if abs(denom) < 1e-12 else newton / denom
            z[k] -= w
            step = abs(w) / (1.0 + abs(z[k]))
            if step > max_step:
                max_step = step
        if max_step <= 1e-14:
            break
    else:
        raise DomainError("simultaneous root iteration did not converge")
    roots = [_newton_polish(cs, r) for r in z]
    if all(c.imag == 0.0 for c in cs):
        roots = [_snap_axes(r) for r in roots]
    return sorted(roots, key=lambda r: (r.real, r.imag))


def _snap_axes(z: complex, tol: float = 1e-12) -> complex:
    """Zero float dust on the axes (real-coefficient input only).

    Roots of real polynomials come in conjugate pairs; an imaginary part
    many orders below the root scale is iteration dust, not geometry.
    """
    scale = tol * (1.0 + abs(z))
    re = 0.0 if abs(z.real) <= scale else z.real
    im = 0.0 if abs(z.imag) <= scale else z.imag
    return complex(re, im)


def _newton_polish(coeffs: Sequence[complex], z: complex, max_steps: int = 60) -> complex:
    for _ in range(max_steps):
        p, dp = _horner(coeffs, z)
        if abs(p) <= NEWTON_TOL * _residual_scale(coeffs, z):
            return z
        if dp == 0:
            break
        z = z - p / dp
    p, _ = _horner(coeffs, z)
    if abs(p) <= NEWTON_TOL * _residual_scale(coeffs, z):
        return z
    raise DomainError("Newton refinement stalled")


# ---------------------------------------------------------------------------
# Loops and continuation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Loop:
    """A circle in the τ-plane, traversed counterclockwise by default."""

    center: complex
    radius: float
    steps: int = 256
    orientation: int = 1  # +1 counterclockwise, -1 clockwise

    def __post_init__(self):
        if self.radius <= 0:
            raise DomainError("loop radius must be positive")
        if self.steps < 16:
            raise DomainError("loop needs at least 16 steps")
        if self.orientation not in (1, -1):
            raise DomainError("orientation must be +1 (ccw) or -1 (cw)")

    def point(self, theta: float) -> complex:
        return self.center + self.radius * cmath.exp(1j * self.orientation * theta)

    def reversed(self) -> "Loop":
        return Loop(self.center, self.radius, self.steps, -self.orientation)


@dataclass
class MonodromyResult:
    """Permutation data for one loop, plus the tracked paths."""

    loop: Loop
    base_roots: tuple[complex, ...]
    sigma: tuple[int, ...]  # path starting at base i ends at base sigma[i]
    permutation: tuple[tuple[int, ...], ...]
    eigenvalues: tuple[complex, ...]
    thetas: tuple[float, ...]
    paths: tuple[tuple[complex, ...], ...]  # paths[i][k] at thetas[k]
    min_separation: float


def _slice_coeffs(poly_like, tau: complex) -> list[complex]:
    poly = getattr(poly_like, "poly", poly_like)
    return poly.slice_complex_coeffs(tau)


def validate_loop(loop: Loop, bad_roots: Sequence[complex]) -> None:
    """Reject circles passing within ``1e-6`` of an exceptional point."""
    for r in bad_roots:
        if abs(abs(r - loop.center) - loop.radius) <= LOOP_CLEARANCE:
            raise DomainError(
                f"loop (center {loop.center}, radius {loop.radius}) passes "
                f"within {LOOP_CLEARANCE} of the exceptional point {r}"
            )


def _advance_roots(
    coeffs: Sequence[complex], roots: list[complex]
) -> list[complex] | None:
    """One corrector pass: Newton each root on the new slice, or fail."""
    out = []
    for z in roots:
        ok = False
        for _ in range(NEWTON_MAX_STEPS):
            p, dp = _horner(coeffs, z)
            if abs(p) <= NEWTON_TOL * _residual_scale(coeffs, z):
                ok = True
                break
            if dp == 0:
                return None
            z = z - p / dp
        if not ok:
            return None
        out.append(z)
    return out


def _min_pairwise(roots: Sequence[complex]) -> float:
    best = math.inf
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            d = abs(roots[i] - roots[j])
            if d < best:
                best = d
    return best


def continue_roots(
    cp: "CharacterPolynomial | object",
    loop: Loop,
    bad_roots: Sequence[complex] = (),
) -> MonodromyResult:
    """Track the slice fiber around a loop and return its monodromy.

    The fiber at the base point θ = 0 must be squarefree (simple roots);
    paths are continued with adaptive step halving down to a floor of
    2π/2¹⁴, refuse to let two paths approach within 10× the collision
    threshold, and the closed-up fiber is matched to the base fiber by
    nearest neighbor with a 10× safety margin.
    """
    if bad_roots:
        validate_loop(loop, bad_roots)
    base_coeffs = _slice_coeffs(cp, loop.point(0.0))
    base = all_roots(base_coeffs)
    if len(base) < 1:
        raise DomainError("slice polynomial has no roots to track")
    min_sep = _min_pairwise(base) if len(base) > 1 else math.inf
    if min_sep <= APPROACH_TOL:
        raise DomainError("slice at the loop base point is not numerically squarefree")

    two_pi = 2.0 * math.pi
    base_step = two_pi / loop.steps
    floor = two_pi / STEP_FLOOR_DENOM
    theta = 0.0
    step = base_step
    streak = 0
    current = list(base)
    thetas = [0.0]
    paths = [[r] for r in base]
    overall_min = min_sep

    while theta < two_pi - 1e-12:
        target = min(theta + step, two_pi)
        coeffs = _slice_coeffs(cp, loop.point(target))
        advanced = _advance_roots(coeffs, current)
        sep = _min_pairwise(advanced) if advanced and len(advanced) > 1 else math.inf
        if advanced is None or sep <= APPROACH_TOL:
            step *= 0.5
            streak = 0
            if step < floor:
                raise DomainError(
                    "continuation requires steps below the floor; the loop "
                    "passes too close to a branch point"
                )
            continue
        for z in advanced:
            if abs(_horner(coeffs, z)[0]) > RESIDUAL_TOL * _residual_scale(coeffs, z):
                raise DomainError("tracked root lost contact with the slice")
        current = advanced
        theta = target
        thetas.append(theta)
        for path, z in zip(paths, advanced):
            path.append(z)
        if sep < overall_min:
            overall_min = sep
        streak += 1
        if streak >= 4 and step < base_step:
            step = min(step * 2.0, base_step)
            streak = 0

    sigma = _match_fibers(current, base)
    n = len(base)
    perm = [[0] * n for _ in range(n)]
    for i, j in enumerate(sigma):
        perm[j][i] = 1
    eigs = np.linalg.eigvals(np.array(perm, dtype=float))
    eig_sorted = tuple(
        sorted((complex(e) for e in eigs), key=lambda z: (round(z.real, 9), round(z.imag, 9)))
    )
    return MonodromyResult(
        loop=loop,
        base_roots=tuple(base),
        sigma=tuple(sigma),
        permutation=tuple(tuple(row) for row in perm),
        eigenvalues=eig_sorted,
        thetas=tuple(thetas),
        paths=tuple(tuple(p) for p in paths),
        min_separation=overall_min,
    )


def _match_fibers(final: Sequence[complex], base: Sequence[complex]) -> list[int]:
    sigma = []
    for z in final:
        dists = sorted(range(len(base)), key=lambda j: abs(z - base[j]))
        best = abs(z - base[dists[0]])
        if len(base) > 1:
            second = abs(z - base[dists[1]])
            if second < MATCH_MARGIN * best:
                raise DomainError(
                    "fiber matching is ambiguous; the loop is too coarse"
                )
        sigma.append(dists[0])
    if len(set(sigma)) != len(sigma):
        raise DomainError("fiber matching is not a bijection; the loop is too coarse")
    return sigma


# ---------------------------------------------------------------------------
# Local system reports
# ---------------------------------------------------------------------------


@dataclass
class LocalSystemReport:
    """Monodromy around every finite exceptional point of one knot."""

    knot: str
    rank: int
    centers: tuple[complex, ...]
    results: tuple[MonodromyResult, ...]


def _dedupe_points(points: Sequence[complex], tol: float = 1e-8) -> list[complex]:
    out: list[complex] = []
    for p in sorted(points, key=lambda z: (z.real, z.imag)):
        if all(abs(p - q) > tol for q in out):
            out.append(p)
    return out


def local_system_report(
    cp,
    delta,
    loops: Sequence[Loop] | None = None,
    auto_radius: float = 0.1,
    steps: int = 256,
) -> LocalSystemReport:
    """Track loops around the exceptional set of a character polynomial.

    With no explicit loops, one counterclockwise loop is generated around
    each non-parabolic exceptional point with |τ| < 10, with a radius small
    enough to separate it from the rest of the exceptional set.
    """
    from .invariant import bad_set  # local import; invariant builds on tracking

    bs = bad_set(cp, delta)
    all_bad = _dedupe_points([r for e in bs.entries for r in e.roots])
    non_parabolic = _dedupe_points(
        [r for e in bs.entries if e.provenance != "parabolic" for r in e.roots]
    )
    if loops is None:
        centers = [c for c in non_parabolic if abs(c) < 10.0]
        loops = []
        for c in centers:
            others = [r for r in all_bad if abs(r - c) > 1e-8]
            gap = min((abs(r - c) for r in others), default=math.inf)
            radius = min(auto_radius, 0.45 * gap)
            loops.append(Loop(center=c, radius=radius, steps=steps))
    else:
        centers = [lp.center for lp in loops]
    results = tuple(continue_roots(cp, lp, bad_roots=all_bad) for lp in loops)
    rank = len(results[0].base_roots) if results else 0
    label = getattr(cp, "knot", "")
    return LocalSystemReport(
        knot=label, rank=rank, centers=tuple(centers), results=results
    )


def paths_csv(results: Sequence[MonodromyResult]) -> str:
    """CSV dump of the tracked paths: one row per step per root."""
    lines = ["loop,root,theta,re,im"]
    for li, res in enumerate(results):
        for ri, path in enumerate(res.paths):
            for theta, z in zip(res.thetas, path):
                lines.append(f"{li},{ri},{theta!r},{z.real!r},{z.imag!r}")
    return "\n".join(lines) + "\n"
