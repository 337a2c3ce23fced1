"""Gluing-torus actions: stabilizer lattice, ℂ* branches, freeness certificates."""

from __future__ import annotations

import cmath
import math
import random

import numpy as np
import pytest

from clk.charvar import character_polynomial, lift_character, slice_roots
from clk.errors import DomainError
from clk.torus import (
    FINGERPRINT_WORDS,
    additive_action,
    cstar_action,
    exp_sl2,
    fingerprint,
    fingerprint_distance,
    glue_pair,
    is_stabilizer_multiple,
    random_sl2_with_trace,
    stabilizer_step,
    trace_free,
    type_ii_chi,
    verify_free_zn,
    zeta_of,
)


def _rep(p, q, tau, index=0):
    cp = character_polynomial(p, q)
    roots = slice_roots(cp, tau)
    return lift_character(cp, tau, roots[index])


def _pair(tau=0.5, twist=0.0):
    return glue_pair(_rep(3, 1, tau), _rep(5, 3, tau), twist=twist)


# ---------------------------------------------------------------------------
# Trace-free projection and zeta
# ---------------------------------------------------------------------------


def test_trace_free_removes_the_trace():
    m = np.array([[2.0, 1.0], [0.5, -0.5]], dtype=complex)
    f = trace_free(m)
    assert abs(np.trace(f)) < 1e-14


def test_zeta_closed_form():
    rng = random.Random(1)
    for _ in range(10):
        tau = rng.uniform(-1.8, 1.8)
        m = random_sl2_with_trace(tau, rng)
        z = zeta_of(m)
        assert abs(z - (1 - tau * tau / 4)) < 1e-8


def test_zeta_is_conjugation_invariant():
    rng = random.Random(2)
    m = random_sl2_with_trace(0.6 + 0.2j, rng)
    g = random_sl2_with_trace(1.1, rng)
    conj = g @ m @ np.linalg.inv(g)
    assert abs(zeta_of(m) - zeta_of(conj)) < 1e-10


def test_zeta_rejects_parabolic_and_non_unimodular():
    rng = random.Random(3)
    with pytest.raises(DomainError):
        zeta_of(random_sl2_with_trace(2.0, rng))
    with pytest.raises(DomainError):
        zeta_of(np.diag([2.0, 1.0]).astype(complex))


# ---------------------------------------------------------------------------
# The exponential and the stabilizer lattice
# ---------------------------------------------------------------------------


def test_exp_is_a_one_parameter_subgroup():
    rng = random.Random(4)
    m = trace_free(random_sl2_with_trace(0.7, rng))
    t1, t2 = 0.31 - 0.12j, -0.58 + 0.44j
    lhs = exp_sl2(t1 + t2, m)
    rhs = exp_sl2(t1, m) @ exp_sl2(t2, m)
    assert float(np.max(np.abs(lhs - rhs))) < 1e-9


def test_exp_at_zero_is_identity():
    rng = random.Random(5)
    m = trace_free(random_sl2_with_trace(0.3, rng))
    assert float(np.max(np.abs(exp_sl2(0.0, m) - np.eye(2)))) < 1e-14


def test_exp_rejects_matrices_with_trace():
    with pytest.raises(DomainError):
        exp_sl2(1.0, np.eye(2, dtype=complex))


def test_stabilizer_step_gives_plus_minus_identity():
    rng = random.Random(6)
    for tau in (0.5, 1.3, 0.2 + 0.4j):
        m = random_sl2_with_trace(tau, rng)
        z = zeta_of(m)
        step = stabilizer_step(z)
        f = trace_free(m)
        for mult in (1, 2, 3):
            e = exp_sl2(mult * step, f)
            dev = min(
                float(np.max(np.abs(e - np.eye(2)))),
                float(np.max(np.abs(e + np.eye(2)))),
            )
            assert dev < 1e-8, (tau, mult, dev)


def test_off_lattice_points_move_the_matrix():
    rng = random.Random(7)
    m = random_sl2_with_trace(0.9, rng)
    z = zeta_of(m)
    step = stabilizer_step(z)
    f = trace_free(m)
    for frac in (0.1, 0.35, 0.5, 0.82):
        e = exp_sl2(frac * step, f)
        dev = min(
            float(np.max(np.abs(e - np.eye(2)))),
            float(np.max(np.abs(e + np.eye(2)))),
        )
        assert dev > 1e-3


def test_lattice_membership_predicate():
    z = 0.84 + 0.0j
    step = stabilizer_step(z)
    assert is_stabilizer_multiple(2 * step, z)
    assert is_stabilizer_multiple(0.0, z)
    assert not is_stabilizer_multiple(0.4 * step, z)


# ---------------------------------------------------------------------------
# Gluing
# ---------------------------------------------------------------------------


def test_glue_pair_shares_the_meridian():
    pair = _pair(0.5)
    assert abs(pair.tau - 0.5) < 1e-12
    assert pair.meridian.shape == (2, 2)


def test_glue_rejects_mismatched_traces():
    with pytest.raises(DomainError):
        glue_pair(_rep(3, 1, 0.5), _rep(5, 3, 0.7))


def test_twist_changes_the_fingerprint():
    base = _pair(0.5)
    twisted = _pair(0.5, twist=0.37)
    assert fingerprint_distance(fingerprint(base), fingerprint(twisted)) > 1e-6


def test_fingerprint_has_one_value_per_word():
    pair = _pair(0.4)
    f = fingerprint(pair)
    assert f.shape == (len(FINGERPRINT_WORDS),)


# ---------------------------------------------------------------------------
# The actions
# ---------------------------------------------------------------------------


def test_additive_action_preserves_the_meridian():
    pair = _pair(0.5)
    moved = additive_action(0.21 - 0.13j, pair)
    assert float(np.max(np.abs(moved.meridian - pair.meridian))) < 1e-12
    assert float(np.max(np.abs(moved.b_right - pair.b_right))) < 1e-12


def test_additive_action_is_a_group_action():
    pair = _pair(0.5)
    one_shot = additive_action(0.3 + 0.1j, pair)
    two_step = additive_action(0.1j, additive_action(0.3, pair))
    d = fingerprint_distance(fingerprint(one_shot), fingerprint(two_step))
    assert d < 1e-9


def test_cstar_identity_acts_trivially():
    pair = _pair(0.5)
    moved = cstar_action(1.0, pair)
    assert fingerprint_distance(fingerprint(moved), fingerprint(pair)) < 1e-10


def test_cstar_minus_one_squares_to_identity():
    pair = _pair(0.5)
    twice = cstar_action(-1.0, cstar_action(-1.0, pair))
    assert fingerprint_distance(fingerprint(twice), fingerprint(pair)) < 1e-8


def test_cstar_action_composes_multiplicatively():
    pair = _pair(0.6)
    lam1 = cmath.exp(0.4j)
    lam2 = cmath.exp(1.1j)
    a = cstar_action(lam1 * lam2, pair)
    b = cstar_action(lam2, cstar_action(lam1, pair))
    assert fingerprint_distance(fingerprint(a), fingerprint(b)) < 1e-8


def test_cstar_rejects_zero():
    with pytest.raises(DomainError):
        cstar_action(0.0, _pair(0.5))


# ---------------------------------------------------------------------------
# Freeness and the Type II stratum
# ---------------------------------------------------------------------------


def test_zn_orbit_is_free_for_generic_pairs():
    for n in (2, 3, 5):
        verdict = verify_free_zn(_pair(0.5), n)
        assert verdict.free
        assert verdict.n == n
        assert verdict.min_separation > 1e-6
        assert verdict.colliding is None
        assert verdict.closure_error < 1e-6


def test_freeness_needs_at_least_two():
    with pytest.raises(DomainError):
        verify_free_zn(_pair(0.5), 1)


class _AtomStub:
    def __init__(self, chi_cl):
        self.chi_cl = chi_cl


def test_type_ii_stratum_has_zero_chi():
    assert type_ii_chi([_AtomStub(1), _AtomStub(2)]) == 0
    assert type_ii_chi([_AtomStub(3), _AtomStub(2), _AtomStub(1)]) == 0


def test_type_ii_needs_two_atoms():
    with pytest.raises(DomainError):
        type_ii_chi([_AtomStub(1)])


def test_type_ii_runs_the_sampler():
    seen = []

    def sampler():
        for twist in (0.0, 0.25):
            pair = _pair(0.5, twist=twist)
            seen.append(twist)
            yield pair

    assert type_ii_chi([_AtomStub(1), _AtomStub(2)], pair_sampler=sampler, n=5) == 0
    assert seen == [0.0, 0.25]


def test_random_sl2_has_requested_trace():
    rng = random.Random(8)
    for tau in (0.3, -1.2, 0.5 + 0.5j):
        m = random_sl2_with_trace(tau, rng)
        assert abs(complex(np.trace(m)) - tau) < 1e-10
        assert abs(np.linalg.det(m) - 1) < 1e-10
