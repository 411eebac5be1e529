"""Tests for the Bessel-mode density profiles."""

import math

import numpy as np
import pytest

from hardylab.specfun import bessel_zero
from hardylab.strauss import (
    HARDY,
    LAPLACIAN,
    DensityProfile,
    hardy_density,
    laplacian_density,
    log_divergence_fit,
    log_radii,
)


def test_log_radii_spacing():
    r = log_radii(1e-4, 1e-1)
    assert r.size == 121
    assert abs(r[0] - 1e-4) < 1e-18
    assert abs(r[-1] - 0.1) < 1e-16
    with pytest.raises(ValueError):
        log_radii(0.5, 0.2)


def test_first_eigenvalue_scale():
    z1 = bessel_zero(0, 1)
    assert abs(z1 * z1 - 5.7832) < 1e-3


def test_density_vanishes_toward_boundary():
    prof = hardy_density(3, K=500, radii=np.array([0.5, 0.999]))
    assert prof.rho[1] < 0.01 * prof.rho[0]


def test_density_tail_stability():
    r = np.array([0.1])
    a = hardy_density(3, K=2000, radii=r).rho[0]
    b = hardy_density(3, K=4000, radii=r).rho[0]
    assert abs(a - b) / b <= 0.02


def test_density_nonnegative_and_monotone_in_modes():
    r = log_radii(1e-3, 0.9, per_decade=10)
    lo = hardy_density(3, K=300, radii=r)
    hi = hardy_density(3, K=600, radii=r)
    assert np.all(lo.rho >= 0.0)
    assert np.all(hi.rho >= lo.rho)


def test_half_order_zeros_are_multiples_of_pi():
    for k in range(1, 21):
        assert abs(bessel_zero(0.5, k) - k * math.pi) < 1e-9


def test_laplacian_profile_matches_closed_form():
    # d=3: the full mode sum telescopes to |S| rho r = 1 - r
    r = np.array([0.05, 0.3, 0.6, 0.85])
    prof = laplacian_density(3, K=2000, radii=r)
    assert np.max(np.abs(prof.ratio - (1.0 - r))) < 2e-3


def test_laplacian_ratio_band():
    # bounded above: no log factor; near r=1 the ratio legitimately dips
    prof = laplacian_density(3, K=800, radii=log_radii(1e-3, 0.9, per_decade=20))
    med = float(np.median(prof.ratio))
    assert np.max(prof.ratio) <= 3.0 * med


def test_hardy_slope_positive_laplacian_flat():
    r = log_radii(1e-4, 1e-1, per_decade=20)
    sh = log_divergence_fit(hardy_density(3, K=1500, radii=r))
    assert 0.5 <= sh <= 2.0
    sl = log_divergence_fit(laplacian_density(3, K=1500, radii=r))
    assert -0.1 <= sl <= 0.1


def test_divergence_fit_needs_three_decades():
    prof = hardy_density(3, K=50, radii=log_radii(1e-2, 0.5, per_decade=10))
    with pytest.raises(ValueError, match="decade"):
        log_divergence_fit(prof)


def test_constant_profile_fits_zero_slope():
    r = log_radii(1e-4, 0.5, per_decade=10)
    prof = DensityProfile(variant=LAPLACIAN, d=3, K=1, radii=r,
                          rho=np.ones_like(r), ratio=np.ones_like(r))
    assert log_divergence_fit(prof) == 0.0


def test_profile_metadata():
    prof = hardy_density(4, K=10, radii=np.array([0.2]))
    assert prof.variant == HARDY
    assert prof.d == 4 and prof.K == 10
    with pytest.raises(ValueError):
        hardy_density(3, K=0, radii=np.array([0.5]))
    with pytest.raises(ValueError):
        hardy_density(3, K=5, radii=np.array([1.5]))


def test_discrete_eigenfunctions_match_bessel_profiles():
    # pencil (K, Mw) on the ball reproduces the normalized Bessel modes:
    # w_k(ln r)^2 vs J_0(z_k r)^2 / N_k at interior radii
    from hardylab.radial import BALL, Annulus, SectorProblem, assemble_sector, make_grid
    from hardylab.spectra import generalized_eigenpairs
    from hardylab.specfun import bessel_j_array, dirichlet_norm

    g = make_grid(BALL, 14.0, 1500)
    m = assemble_sector(SectorProblem(3, 0, BALL, g, Annulus(1.0, 2.0, 0.0)))
    vals, vecs = generalized_eigenpairs(m.K, m.Mw, 3)
    nodes = g.nodes()[m.i0:m.i1]
    radii = np.geomspace(0.05, 0.9, 20)
    for k in range(1, 4):
        z = bessel_zero(0, k)
        assert abs(vals[k - 1] - z * z) < 0.01 * z * z
        want = bessel_j_array(0.0, z * radii) ** 2 / dirichlet_norm(0, k)
        got = np.interp(np.log(radii), nodes, vecs[:, k - 1]) ** 2
        assert np.max(np.abs(got - want) / np.max(want)) < 0.02
