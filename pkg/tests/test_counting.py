"""Tests for count aggregation, weighted RHS, sweeps, splitting, inversion."""

import math

import numpy as np
import pytest

from hardylab.counting import (
    CountReport,
    coupling_sweep,
    ell_cutoff,
    fit_sweep_slope,
    inversion_check,
    kvw_check,
    sector_count,
    total_count,
    weighted_rhs,
)
from hardylab.radial import (
    BALL,
    COMPLEMENT,
    FULL,
    Annulus,
    CriticalLog,
    GaussianBump,
    SectorProblem,
    UnsupportedPotentialError,
    assemble_sector,
    kelvin_potential,
    make_grid,
    sector_constant,
)

ZERO_W = Annulus(1.0, 2.0, 0.0)


# ----------------------------------------------------------------- sectors

def test_zero_potential_sectors_count_zero():
    for domain, n in [(BALL, 99), (COMPLEMENT, 99), (FULL, 99)]:
        g = make_grid(domain, 14.0, n)
        for ell in [0, 1, 3]:
            cnt, _ = sector_count(SectorProblem(3, ell, domain, g, ZERO_W, lam=5.0))
            assert cnt == 0


def test_cutoff_sector_counts_zero():
    W = Annulus(1.0, 2.0, 1.0)
    lam = 3.0
    ell = ell_cutoff(3, W, lam)
    assert sector_constant(3, ell) >= lam * W.sup_r2w()
    g = make_grid(FULL, 14.0, 499)
    cnt, _ = sector_count(SectorProblem(3, ell, FULL, g, W, lam))
    assert cnt == 0


def test_ell_cutoff_values():
    W = Annulus(1.0, 2.0, 1.0)        # sup r^2 W = 4
    assert ell_cutoff(3, W, 1.0) == 2  # c_1 = 2 < 4 <= c_2 = 6
    assert ell_cutoff(3, W, 0.0) == 0
    assert ell_cutoff(3, ZERO_W, 7.0) == 0
    with pytest.raises(UnsupportedPotentialError):
        ell_cutoff(3, CriticalLog(1.0), 1.0)


# ------------------------------------------------------------- total count

def test_total_count_zero_coupling():
    rep = total_count(3, Annulus(1.0, 2.0, 1.0), 0.0, n=99)
    assert rep.total == 0
    assert rep.sectors == []
    assert rep.rhs_weighted == 0.0


def test_total_count_small_coupling_at_most_one():
    rep = total_count(3, Annulus(1.0, 2.0, 1.0), 0.1)
    assert rep.total <= 1
    assert rep.ell_max == 1


def test_total_count_multiplicity_sum():
    rep = total_count(3, Annulus(1.0, 2.0, 1.0), 30.0, n=599)
    assert rep.total == sum(s.mult * s.count for s in rep.sectors)
    assert rep.total > 0
    assert isinstance(rep, CountReport)
    assert rep.total_upper >= rep.total


def test_total_count_worker_invariance():
    a = total_count(3, Annulus(1.0, 2.0, 1.0), 40.0, n=399, workers=1)
    b = total_count(3, Annulus(1.0, 2.0, 1.0), 40.0, n=399, workers=4)
    assert a.total == b.total
    assert [(s.ell, s.count) for s in a.sectors] == [(s.ell, s.count) for s in b.sectors]
    assert a.rhs_weighted == b.rhs_weighted


def test_count_monotone_in_coupling_and_refinement():
    W = GaussianBump(1.5, 0.2, 1.0)
    n1 = total_count(3, W, 10.0, n=299).total
    n2 = total_count(3, W, 30.0, n=299).total
    assert n1 <= n2
    fine = total_count(3, W, 30.0, n=599).total   # bisected grid
    assert n2 <= fine


# ------------------------------------------------------------ weighted rhs

def test_rhs_unit_ball_anchor():
    # W = 1 on the unit ball, d = 3, p = 2: 4*pi * int_0^1 r^2 (1-ln r)^2 dr
    W = Annulus(1e-30, 1.0, 1.0)
    want = 4.0 * math.pi * 17.0 / 27.0
    got, ok = weighted_rhs(W, 3, 1.0, 2, BALL)
    assert ok
    assert abs(got - want) < 1e-9 * want


def test_rhs_coupling_homogeneity_exact():
    W = Annulus(0.5, 2.0, 1.0)
    r1, _ = weighted_rhs(W, 3, 1.0, 2, FULL)
    r4, _ = weighted_rhs(W, 3, 4.0, 2, FULL)
    assert r4 == 8.0 * r1            # lambda^{3/2} factors out exactly


def test_rhs_inversion_invariance():
    W = GaussianBump(2.0, 0.1, 1.5)
    a, ok_a = weighted_rhs(W, 3, 1.0, 2, COMPLEMENT)
    b, ok_b = weighted_rhs(kelvin_potential(W), 3, 1.0, 2, BALL)
    assert ok_a and ok_b
    assert abs(a - b) < 1e-9 * max(a, b)


def test_rhs_divergence_flagged():
    got, ok = weighted_rhs(CriticalLog(4.0), 3, 1.0, 2, BALL)
    assert not ok
    assert math.isfinite(got)


def test_rhs_disjoint_support_is_zero():
    W = Annulus(2.0, 3.0, 1.0)       # lives in the complement
    got, ok = weighted_rhs(W, 3, 1.0, 2, BALL)
    assert ok
    assert got == 0.0


# ----------------------------------------------------------------- sweeps

def test_sweep_monotone_counts_and_exact_rhs_scaling():
    W = Annulus(1.0, 2.0, 1.0)
    lambdas = [25.0, 50.0, 100.0, 200.0]
    tab = coupling_sweep(3, W, lambdas, n=599)
    assert all(b >= a for a, b in zip(tab.counts, tab.counts[1:]))
    assert tab.counts[-1] > 0
    for lam, r in zip(tab.lambdas, tab.rhs):
        expect = tab.rhs[0] * (lam / tab.lambdas[0]) ** 1.5
        assert abs(r - expect) < 1e-13 * expect


def test_sweep_slope_near_weyl_exponent():
    W = Annulus(1.0, 2.0, 1.0)
    tab = coupling_sweep(3, W, [25.0, 50.0, 100.0, 200.0], n=599)
    assert tab.slope is not None
    assert 1.2 <= tab.slope <= 1.8


def test_sweep_worker_determinism():
    W = Annulus(1.0, 2.0, 1.0)
    lams = [10.0, 20.0, 40.0]
    a = coupling_sweep(3, W, lams, n=299, workers=1)
    b = coupling_sweep(3, W, lams, n=299, workers=8)
    assert a.counts == b.counts
    assert a.rhs == b.rhs
    assert a.slope == b.slope


def test_sweep_rejects_disordered_couplings():
    with pytest.raises(ValueError):
        coupling_sweep(3, Annulus(1.0, 2.0, 1.0), [10.0, 5.0], n=99)


def test_fit_slope_ignores_small_couplings_and_zero_counts():
    lams = [1.0, 200.0, 400.0, 800.0, 1600.0]
    counts = [0, 4, 11, 32, 90]
    slope = fit_sweep_slope(lams, counts)
    assert slope is not None
    assert 1.0 < slope < 2.0
    assert fit_sweep_slope([1.0, 2.0], [0, 0]) is None


# -------------------------------------------------------------- splitting

def test_kvw_zero_potential():
    rep = kvw_check(3, ZERO_W, 5.0, T=14.0, n=999)
    assert (rep.n_full, rep.n_ball, rep.n_comp) == (0, 0, 0)
    assert rep.upper_ok and rep.lower_ok


def test_kvw_sandwich_holds():
    for lam in [5.0, 30.0, 120.0]:
        rep = kvw_check(3, Annulus(1.0, 2.0, 1.0), lam, T=14.0, n=1999)
        assert rep.upper_ok and rep.lower_ok


def test_kvw_ball_supported_potential():
    rep = kvw_check(3, Annulus(0.2, 0.5, 1.0), 200.0, T=14.0, n=1999)
    assert rep.n_comp == 0
    assert rep.n_full in (rep.n_ball, rep.n_ball + 1)
    assert rep.n_ball > 0


def test_kvw_blocks_match_standalone_assembly_bitwise():
    # the extracted ball block must equal a standalone ball assembly on
    # the half grid: same spacing, same nodes, bit for bit
    W = Annulus(0.4, 2.5, 1.0)
    T, n_full = 14.0, 1999
    g_full = make_grid(FULL, T, n_full)
    m_full = assemble_sector(SectorProblem(3, 0, FULL, g_full, W, lam=7.0))
    F = m_full.form_matrix()
    split = g_full.zero_index()

    n_half = split - 1
    g_ball = make_grid(BALL, T, n_half)
    assert g_ball.h == g_full.h
    m_ball = assemble_sector(SectorProblem(3, 0, BALL, g_ball, W, lam=7.0))
    Fb = m_ball.form_matrix()
    blk = F.principal(0, split)
    assert np.array_equal(blk.diag, Fb.diag)
    assert np.array_equal(blk.off, Fb.off)


# -------------------------------------------------------------- inversion

def test_inversion_zero_potential():
    rep = inversion_check(3, ZERO_W, 1.0, n=499)
    assert rep.potential_residual == 0.0
    assert rep.kinetic_residual < 1e-9
    assert (rep.count_ball, rep.count_comp) == (0, 0)


def test_inversion_residual_and_counts():
    W = GaussianBump(0.5, 0.04, 2.0)
    rep = inversion_check(3, W, 60.0, n=999)
    assert rep.max_residual <= 1e-6
    assert rep.count_ball == rep.count_comp
    assert rep.count_ball > 0
    assert abs(rep.rhs_ball - rep.rhs_comp) < 1e-9 * max(rep.rhs_ball, 1e-300)


def test_inversion_rhs_invariance_annulus():
    W = Annulus(0.1, 0.6, 1.3)
    rep = inversion_check(3, W, 10.0, n=499)
    assert rep.rhs_ball > 0.0
    assert abs(rep.rhs_ball - rep.rhs_comp) < 1e-9 * rep.rhs_ball
