"""The invariant pipeline: exceptional sets, trace slices, sweeps, sums.

For one two-bridge atom the pipeline is:

1. derive the exact character polynomial P(x, y);
2. assemble the exceptional set of meridian traces — discriminant roots,
   leading-coefficient roots, collisions with the abelian parabola,
   Alexander-derived traces, and the parabolic traces ±2 — all as exact
   defining polynomials in τ with numeric root approximations;
3. slice at exact Gaussian-rational τ off the exceptional set, decompose
   the slice squarefree, excise the abelian point exactly, and take the
   Behrend-weighted count (a multiplicity-k point counts k);
4. sweep many sampled τ; the weighted count is constant on the generic
   locus, and that constant is the invariant χ_CL.

Connected sums decompose: the invariant adds over atoms, and the extra
(Type II) stratum of glued pairs contributes χ = 0 because every gluing
torus is a copy of ℂ*; the freeness of the induced ℤ/n action on it is
certified numerically on sampled pairs.
"""
from __future__ import annotations

import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import torus, tracking
from .charvar import CharacterPolynomial, character_polynomial, lift_character
from .errors import DomainError, InternalError
from .euler import (
    SchemePoint,
    WeightedPoint,
    ZeroDimScheme,
    behrend_zero_dim,
)
from .exact import BiPoly, GR_ONE, GaussianRational, UniPoly
from .knots import (
    TwoBridge,
    alexander_bad_traces,
    fox_alexander,
    parse_descriptor,
)

PROVENANCES = (
    "discriminant",
    "leading_coeff",
    "abelian_resultant",
    "alexander",
    "parabolic",
)

ALEXANDER_CONTAINMENT_TOL = 1e-8


# ---------------------------------------------------------------------------
# Exceptional sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BadSetEntry:
    """One exact defining polynomial in τ with its numeric roots."""

    provenance: str
    poly: UniPoly
    roots: tuple[complex, ...]


@dataclass(frozen=True)
class BadSet:
    """The exceptional meridian traces of one or more atoms."""

    entries: tuple[BadSetEntry, ...]

    def is_generic(self, tau: GaussianRational) -> bool:
        """Exact avoidance of every defining polynomial."""
        tau = GaussianRational.coerce(tau)
        return all(not e.poly.evaluate(tau).is_zero for e in self.entries)

    def all_roots(self, tol: float = 1e-8) -> list[complex]:
        """The distinct exceptional traces, merged across provenances."""
        out: list[complex] = []
        for e in self.entries:
            for r in e.roots:
                if all(abs(r - seen) > tol for seen in out):
                    out.append(r)
        return sorted(out, key=lambda z: (z.real, z.imag))

    def merge(self, other: "BadSet") -> "BadSet":
        entries = list(self.entries)
        seen = {(e.provenance, e.poly) for e in entries}
        for e in other.entries:
            if (e.provenance, e.poly) not in seen:
                entries.append(e)
                seen.add((e.provenance, e.poly))
        return BadSet(entries=tuple(entries))


def _entry(provenance: str, poly: UniPoly) -> BadSetEntry | None:
    poly = poly.integer_normalize()
    if poly.is_zero:
        raise InternalError(f"{provenance} defining polynomial vanished")
    if poly.degree < 1:
        return None
    roots = tuple(
        sorted(
            tracking.all_roots(poly.squarefree_part().to_complex_coeffs()),
            key=lambda z: (z.real, z.imag),
        )
    )
    return BadSetEntry(provenance=provenance, poly=poly, roots=roots)


def _abelian_locus() -> BiPoly:
    return BiPoly.from_terms({(0, 1): 1, (2, 0): -1, (0, 0): 2})


def bad_set(cp: CharacterPolynomial, delta: UniPoly) -> BadSet:
    """All exceptional meridian traces of one atom, with provenance."""
    entries: list[BadSetEntry] = []
    disc = _entry("discriminant", cp.poly.discriminant_y())
    if disc:
        entries.append(disc)
    lead = _entry("leading_coeff", cp.poly.leading_y())
    if lead:
        entries.append(lead)
    abelian = _entry(
        "abelian_resultant", cp.poly.resultant_y(_abelian_locus())
    )
    if abelian:
        entries.append(abelian)
    witness = alexander_bad_traces(delta)
    alex = None
    if witness.defining_poly.degree >= 1:
        alex = BadSetEntry(
            provenance="alexander",
            poly=witness.defining_poly,
            roots=witness.roots,
        )
        entries.append(alex)
    entries.append(
        BadSetEntry(
            provenance="parabolic",
            poly=UniPoly.of(-4, 0, 1),
            roots=(complex(-2.0), complex(2.0)),
        )
    )
    if alex and abelian:
        for r in alex.roots:
            if all(
                abs(r - a) > ALEXANDER_CONTAINMENT_TOL for a in abelian.roots
            ):
                raise InternalError(
                    f"Alexander trace {r} is not among the abelian-collision "
                    "traces; the exceptional set is inconsistent"
                )
    return BadSet(entries=tuple(entries))


@lru_cache(maxsize=None)
def _atom_data(p: int, q: int, label: str):
    cp = character_polynomial(p, q, label)
    delta = fox_alexander(cp.presentation())
    return cp, delta, bad_set(cp, delta)


def atom_data(atom: TwoBridge):
    """Cached (character polynomial, Alexander polynomial, exceptional set)."""
    return _atom_data(atom.p, atom.q, atom.label())


# ---------------------------------------------------------------------------
# Slices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SliceReport:
    """A single exact trace slice with its Behrend-weighted count."""

    tau: GaussianRational
    slice_poly: UniPoly
    points: tuple[WeightedPoint, ...]
    chi_b: int
    generic: bool


@lru_cache(maxsize=8192)
def _slice_points(
    cp: CharacterPolynomial, tau: GaussianRational
) -> tuple[UniPoly, tuple[SchemePoint, ...], GaussianRational]:
    slice_poly = cp.poly.substitute_x(tau)
    if slice_poly.is_zero:
        raise InternalError(f"slice polynomial vanishes identically at τ = {tau}")
    y_abelian = tau * tau - 2
    points: list[SchemePoint] = []
    for factor, mult in slice_poly.squarefree():
        deflated = factor
        if factor.evaluate(y_abelian).is_zero:
            points.append(SchemePoint(location=y_abelian, multiplicity=mult))
            deflated = factor.exact_div(UniPoly((-y_abelian, GR_ONE)))
        for root in tracking.all_roots(deflated.to_complex_coeffs()):
            points.append(SchemePoint(location=root, multiplicity=mult))
    return slice_poly, tuple(points), y_abelian


def chi_b_slice(
    cp: CharacterPolynomial,
    tau,
    bad: BadSet | None = None,
) -> SliceReport:
    """Behrend-weighted count of the irreducible slice at exact τ.

    τ must be an exact Gaussian rational and not ±2.  Points on the abelian
    parabola y = τ² − 2 are detected by exact division and excluded; the
    rest contribute their multiplicities.
    """
    tau = GaussianRational.coerce(tau)
    if tau == 2 or tau == -2:
        raise DomainError("parabolic meridian trace excluded")
    if bad is None:
        bad = atom_data(TwoBridge(cp.p, cp.q))[2]
    slice_poly, points, y_abelian = _slice_points(cp, tau)
    scheme = ZeroDimScheme(points=points, source=slice_poly)
    chi_b, weighted = behrend_zero_dim(scheme, excluded=[y_abelian])
    return SliceReport(
        tau=tau,
        slice_poly=slice_poly,
        points=weighted,
        chi_b=chi_b,
        generic=bad.is_generic(tau),
    )


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Decomposition:
    """Connected-sum bookkeeping: per-atom values and the Type II term."""

    atoms: tuple[int, ...]
    type_ii_chi: int


@dataclass(frozen=True)
class InvariantReport:
    """The full output of an invariant computation."""

    knot: str
    chi_cl: int
    bad: BadSet
    slices: tuple[SliceReport, ...]
    decomposition: Decomposition | None


def _sample_tau(rng: random.Random) -> GaussianRational:
    """A Gaussian-rational trace sample of bounded height, real or complex."""
    re = Fraction(rng.randint(-40, 40), rng.randint(1, 12))
    if rng.random() < 0.5:
        return GaussianRational(re, 0)
    num = rng.randint(-12, 12)
    if num == 0:
        num = 7
    return GaussianRational(re, Fraction(num, rng.randint(1, 12)))


def _draw_generic(
    rng: random.Random, bads: list[BadSet], samples: int
) -> list[GaussianRational]:
    out: list[GaussianRational] = []
    attempts = 0
    limit = 50 * samples + 100
    while len(out) < samples:
        attempts += 1
        if attempts > limit:
            raise DomainError(
                "bad set too dense: could not draw enough generic trace samples"
            )
        tau = _sample_tau(rng)
        if all(b.is_generic(tau) for b in bads):
            out.append(tau)
    return out


def sweep(
    cp: CharacterPolynomial,
    delta: UniPoly | None = None,
    samples: int = 50,
    seed: int = 0,
) -> InvariantReport:
    """Sample generic exact traces and certify the constant weighted count.

    Samples are drawn deterministically from the seed, exact hits on the
    exceptional set are discarded, and all surviving slices must agree; the
    common value is χ_CL.  Fewer than two surviving samples is an error.
    """
    if delta is None:
        delta = fox_alexander(cp.presentation())
    bad = bad_set(cp, delta)
    rng = random.Random(seed)
    taus = _draw_generic(rng, [bad], samples)
    slices = tuple(chi_b_slice(cp, t, bad) for t in taus)
    generic = [s for s in slices if s.generic]
    if len(generic) < 2:
        raise DomainError("bad set too dense: fewer than two generic samples")
    values = {s.chi_b for s in generic}
    if len(values) != 1:
        raise InternalError(
            f"generic weighted count is not constant across the sweep: {values}"
        )
    return InvariantReport(
        knot=cp.knot,
        chi_cl=values.pop(),
        bad=bad,
        slices=slices,
        decomposition=None,
    )


# ---------------------------------------------------------------------------
# Connected sums
# ---------------------------------------------------------------------------


def _merge_slices(
    taus: list[GaussianRational], per_atom: list[list[SliceReport]]
) -> tuple[SliceReport, ...]:
    merged = []
    for k, tau in enumerate(taus):
        points: list[WeightedPoint] = []
        chi_total = 0
        slice_prod = UniPoly.one()
        for atom_slices in per_atom:
            s = atom_slices[k]
            points.extend(s.points)
            chi_total += s.chi_b
            slice_prod = slice_prod * s.slice_poly
        merged.append(
            SliceReport(
                tau=tau,
                slice_poly=slice_prod,
                points=tuple(points),
                chi_b=chi_total,
                generic=True,
            )
        )
    return tuple(merged)


def _pair_sampler(cps, taus, slices_by_atom, rng, count: int, max_retries: int = 50):
    """Deterministic sampler of glued pairs from adjacent atoms."""

    def sample():
        produced = 0
        adjacent = [(i, i + 1) for i in range(len(cps) - 1)]
        while produced < count:
            i, j = adjacent[produced % len(adjacent)]
            for _ in range(max_retries):
                k = rng.randrange(len(taus))
                tau_c = taus[k].to_complex()
                left_pts = [p for p in slices_by_atom[i][k].points if not p.excluded]
                right_pts = [p for p in slices_by_atom[j][k].points if not p.excluded]
                if not left_pts or not right_pts:
                    continue
                yl = _loc_to_complex(rng.choice(left_pts).location)
                yr = _loc_to_complex(rng.choice(right_pts).location)
                twist = complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0))
                try:
                    left = lift_character(cps[i], tau_c, yl)
                    right = lift_character(cps[j], tau_c, yr)
                    yield_pair = torus.glue_pair(left, right, twist=twist)
                except DomainError:
                    continue
                produced += 1
                yield yield_pair
                break
            else:
                raise DomainError(
                    "could not assemble glued pairs from the sampled slices"
                )

    return sample


def _loc_to_complex(loc) -> complex:
    if isinstance(loc, GaussianRational):
        return loc.to_complex()
    return complex(loc)


def connected_sum_invariant(
    atoms: Sequence[TwoBridge],
    label: str | None = None,
    samples: int = 50,
    seed: int = 0,
    freeness_pairs: int = 100,
    zn: int = 5,
) -> InvariantReport:
    """χ_CL of a connected sum via the additive decomposition.

    Trace samples are restricted to the intersection of the atoms' generic
    loci; each atom's weighted count is certified constant there, the
    Type II stratum contributes 0 (with ℤ/n freeness certified on sampled
    glued pairs), and the invariant is the sum of the atom values.
    """
    if label is None:
        label = " # ".join(a.label() for a in atoms)
    data = [atom_data(a) for a in atoms]
    cps = [d[0] for d in data]
    bads = [d[2] for d in data]
    rng = random.Random(seed)
    taus = _draw_generic(rng, bads, samples)
    per_atom = [
        [chi_b_slice(cp, t, b) for t in taus] for cp, b in zip(cps, bads)
    ]
    atom_chis = []
    for cp, atom_slices in zip(cps, per_atom):
        values = {s.chi_b for s in atom_slices}
        if len(values) != 1:
            raise InternalError(
                f"weighted count of {cp.knot} varies over shared generic "
                f"samples: {values}"
            )
        atom_chis.append(values.pop())
    atom_reports = [
        InvariantReport(
            knot=cp.knot,
            chi_cl=chi,
            bad=b,
            slices=tuple(atom_slices),
            decomposition=None,
        )
        for cp, chi, b, atom_slices in zip(cps, atom_chis, bads, per_atom)
    ]
    sampler = (
        _pair_sampler(cps, taus, per_atom, rng, freeness_pairs)
        if freeness_pairs > 0
        else None
    )
    type_ii = torus.type_ii_chi(atom_reports, pair_sampler=sampler, n=zn)
    merged_bad = atom_reports[0].bad
    for rep in atom_reports[1:]:
        merged_bad = merged_bad.merge(rep.bad)
    return InvariantReport(
        knot=label,
        chi_cl=sum(atom_chis) + type_ii,
        bad=merged_bad,
        slices=_merge_slices(taus, per_atom),
        decomposition=Decomposition(
            atoms=tuple(atom_chis), type_ii_chi=type_ii
        ),
    )


def compute(
    descriptor: str,
    samples: int = 50,
    seed: int = 0,
    freeness_pairs: int = 100,
    zn: int = 5,
) -> InvariantReport:
    """Invariant of any descriptor: one atom sweeps, sums decompose."""
    atoms = parse_descriptor(descriptor)
    label = " # ".join(a.label() for a in atoms)
    if len(atoms) == 1:
        cp, delta, _ = atom_data(atoms[0])
        rep = sweep(cp, delta, samples=samples, seed=seed)
        return InvariantReport(
            knot=label,
            chi_cl=rep.chi_cl,
            bad=rep.bad,
            slices=rep.slices,
            decomposition=None,
        )
    return connected_sum_invariant(
        atoms,
        label,
        samples=samples,
        seed=seed,
        freeness_pairs=freeness_pairs,
        zn=zn,
    )


# ---------------------------------------------------------------------------
# JSON serialization (stable schema)
# ---------------------------------------------------------------------------


def quad(g: GaussianRational) -> list[int]:
    """[re_num, re_den, im_num, im_den] exact encoding of a Gaussian rational."""
    g = GaussianRational.coerce(g)
    return [
        g.re.numerator,
        g.re.denominator,
        g.im.numerator,
        g.im.denominator,
    ]


def _poly_coeffs(p: UniPoly) -> list[list[int]]:
    return [quad(c) for c in p.coeffs]


def _point_dict(p: WeightedPoint) -> dict:
    z = _loc_to_complex(p.location)
    return {
        "y": [z.real, z.imag],
        "mult": p.multiplicity,
        "excluded": p.excluded,
    }


def bad_set_to_list(bad: BadSet) -> list[dict]:
    return [
        {
            "poly": _poly_coeffs(e.poly),
            "provenance": e.provenance,
            "roots": [[r.real, r.imag] for r in e.roots],
        }
        for e in bad.entries
    ]


def slice_to_dict(s: SliceReport) -> dict:
    points = sorted(
        (_point_dict(p) for p in s.points),
        key=lambda d: (d["y"][0], d["y"][1]),
    )
    return {
        "tau": quad(s.tau),
        "chi_b": s.chi_b,
        "generic": s.generic,
        "points": points,
    }


def report_to_dict(rep: InvariantReport) -> dict:
    decomposition = None
    if rep.decomposition is not None:
        decomposition = {
            "atoms": list(rep.decomposition.atoms),
            "type_ii_chi": rep.decomposition.type_ii_chi,
        }
    return {
        "knot": rep.knot,
        "chi_cl": rep.chi_cl,
        "bad_set": bad_set_to_list(rep.bad),
        "slices": [slice_to_dict(s) for s in rep.slices],
        "decomposition": decomposition,
    }


# ---------------------------------------------------------------------------
# Corpus runner
# ---------------------------------------------------------------------------

CORPUS_ATOMS = ("3_1", "4_1", "5_1", "5_2")


def corpus_entries() -> list[str]:
    atoms = list(CORPUS_ATOMS)
    sums = [
        f"{atoms[i]} # {atoms[j]}"
        for i in range(len(atoms))
        for j in range(i, len(atoms))
    ]
    return atoms + sums


def worker_count() -> int:
    """Worker bound from CLK_THREADS (default 1)."""
    raw = os.environ.get("CLK_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise DomainError(f"CLK_THREADS must be an integer, got {raw!r}")
    return max(1, n)


def run_corpus(
    entries: list[str] | None = None,
    samples: int = 50,
    seed: int = 0,
    freeness_pairs: int = 100,
) -> dict:
    """Compute invariant reports for a corpus and check sum additivity."""
    entries = list(entries) if entries else corpus_entries()
    threads = worker_count()

    def run_one(descriptor: str) -> InvariantReport:
        return compute(
            descriptor,
            samples=samples,
            seed=seed,
            freeness_pairs=freeness_pairs,
        )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(run_one, entries))
    else:
        reports = [run_one(d) for d in entries]
    atom_values = {
        rep.knot: rep.chi_cl for rep in reports if rep.decomposition is None
    }
    additivity = []
    for rep in reports:
        if rep.decomposition is None:
            continue
        parts = [a.label() for a in parse_descriptor(rep.knot)]
        expected = (
            sum(atom_values[p] for p in parts)
            if all(p in atom_values for p in parts)
            else sum(rep.decomposition.atoms)
        )
        additivity.append(
            {
                "knot": rep.knot,
                "parts": list(rep.decomposition.atoms),
                "type_ii_chi": rep.decomposition.type_ii_chi,
                "chi_cl": rep.chi_cl,
                "ok": rep.chi_cl == expected
                and rep.decomposition.type_ii_chi == 0,
            }
        )
    return {
        "entries": [report_to_dict(rep) for rep in reports],
        "additivity": additivity,
    }


# ---------------------------------------------------------------------------
# Report builders for the service endpoints
# ---------------------------------------------------------------------------


def single_atom(descriptor: str) -> TwoBridge:
    atoms = parse_descriptor(descriptor)
    if len(atoms) != 1:
        raise DomainError(
            "this operation works on a single two-bridge atom; "
            "use 'invariant' or 'corpus' for connected sums"
        )
    return atoms[0]


def charpoly_report(descriptor: str) -> dict:
    atom = single_atom(descriptor)
    cp, _, _ = atom_data(atom)
    terms = sorted(
        (i, j, c.numerator, c.denominator) for (i, j), c in cp.poly.terms().items()
    )
    return {
        "knot": atom.label(),
        "p": atom.p,
        "q": atom.q,
        "x_degree": cp.poly.degree_x,
        "y_degree": cp.poly.degree_y,
        "generic_y_degree": cp.generic_y_degree,
        "terms": [list(t) for t in terms],
        "abelian_factors_removed": cp.abelian_factors_removed,
        "pretty": cp.poly.format(),
    }


def alexander_report(descriptor: str) -> dict:
    atom = single_atom(descriptor)
    _, delta, _ = atom_data(atom)
    witness = alexander_bad_traces(delta)
    return {
        "knot": atom.label(),
        "p": atom.p,
        "q": atom.q,
        "delta": [int(c.real_fraction()) for c in delta.coeffs],
        "pretty": delta.format("t"),
        "bad_traces": {
            "poly": _poly_coeffs(witness.defining_poly),
            "provenance": "alexander",
            "roots": [[r.real, r.imag] for r in witness.roots],
        },
    }


def bad_set_report(descriptor: str) -> dict:
    atom = single_atom(descriptor)
    _, _, bad = atom_data(atom)
    return {"knot": atom.label(), "bad_set": bad_set_to_list(bad)}


def monodromy_report(
    descriptor: str,
    center: complex | None = None,
    radius: float | None = None,
    steps: int = 256,
    orientation: int = 1,
    include_paths: bool = True,
) -> dict:
    atom = single_atom(descriptor)
    cp, delta, bad = atom_data(atom)
    if (center is None) != (radius is None):
        raise DomainError("give both --center and --radius, or neither")
    if center is not None:
        loop = tracking.Loop(
            center=complex(center),
            radius=float(radius),
            steps=steps,
            orientation=orientation,
        )
        results = [
            tracking.continue_roots(cp, loop, bad_roots=bad.all_roots())
        ]
    else:
        report = tracking.local_system_report(cp, delta, steps=steps)
        results = list(report.results)
    loops_out = []
    for res in results:
        item = {
            "center": [res.loop.center.real, res.loop.center.imag],
            "radius": res.loop.radius,
            "steps": res.loop.steps,
            "orientation": "ccw" if res.loop.orientation == 1 else "cw",
            "base_roots": [[r.real, r.imag] for r in res.base_roots],
            "sigma": list(res.sigma),
            "permutation": [list(row) for row in res.permutation],
            "eigenvalues": [[e.real, e.imag] for e in res.eigenvalues],
            "min_separation": res.min_separation,
        }
        if include_paths:
            item["thetas"] = list(res.thetas)
            item["paths"] = [
                [[z.real, z.imag] for z in path] for path in res.paths
            ]
        loops_out.append(item)
    return {
        "knot": atom.label(),
        "rank": cp.generic_y_degree,
        "loops": loops_out,
    }


def verify_cstar_report(
    descriptor: str,
    tau_text: str | None = None,
    n: int = 5,
    pairs: int = 20,
    seed: int = 0,
) -> dict:
    atoms = parse_descriptor(descriptor)
    if len(atoms) != 2:
        raise DomainError(
            "the ℂ* verification takes a connected sum of exactly two atoms"
        )
    data = [atom_data(a) for a in atoms]
    cps = [d[0] for d in data]
    bads = [d[2] for d in data]
    rng = random.Random(seed)
    if tau_text is not None:
        tau = GaussianRational.parse(tau_text)
        if not all(b.is_generic(tau) for b in bads):
            raise DomainError(
                f"τ = {tau} lies on the exceptional set of one of the atoms"
            )
    else:
        tau = _draw_generic(rng, bads, 1)[0]
    slices = [chi_b_slice(cp, tau, b) for cp, b in zip(cps, bads)]
    sampler = _pair_sampler(cps, [tau], [[s] for s in slices], rng, pairs)
    verdicts = []
    zeta = None
    for pair in sampler():
        if zeta is None:
            zeta = torus.zeta_of(pair.meridian)
        verdicts.append(torus.verify_free_zn(pair, n))
    min_sep = min(v.min_separation for v in verdicts)
    max_closure = max(v.closure_error for v in verdicts)
    step = torus.stabilizer_step(zeta)
    return {
        "knot": " # ".join(a.label() for a in atoms),
        "tau": quad(tau),
        "zeta": [zeta.real, zeta.imag],
        "lattice_step": [step.real, step.imag],
        "n": n,
        "pairs": len(verdicts),
        "free": all(v.free for v in verdicts),
        "min_separation": min_sep,
        "max_closure_error": max_closure,
    }
