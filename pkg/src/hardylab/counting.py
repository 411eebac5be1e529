"""Negative-eigenvalue counting for the radial operator family.

Aggregates per-sector inertia counts into the total count N for the
log-weighted bound, computes the weighted right-hand-side integrals,
runs coupling sweeps for the semiclassical exponent, and performs the
two structural cross-checks: the rank-one splitting of the full-space
problem into ball and complement, and the inversion symmetry that swaps
the ball problem with the complement problem.

All counts are certified lower bounds of the continuum counts
(conforming subspaces; see radial module docstring), so monotonicity
under refinement is an exact integer statement, not a tolerance one.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .quadrature import adaptive_quad_pieces
from .radial import (
    BALL,
    COMPLEMENT,
    FULL,
    LogGrid,
    RadialPotential,
    SectorProblem,
    UnsupportedPotentialError,
    assemble_sector,
    default_truncation,
    kelvin_potential,
    make_grid,
    multiplicity,
    sector_constant,
)
from .spectra import Tridiagonal, tridiag_inertia
from .specfun import sphere_area

# window in t beyond which right-hand-side integrands are dropped; the
# e^{dt} Jacobian makes the discarded tails ~ e^{-d*40} relative
RHS_WINDOW = 40.0


@dataclass
class SectorEntry:
    ell: int
    mult: int
    count: int
    zero_flag: int


@dataclass
class CountReport:
    d: int
    lam: float
    domain: str
    T: float
    n: int
    ell_max: int
    sectors: list[SectorEntry]
    total: int
    total_upper: int
    rhs_weighted: float
    rhs_converged: bool

    def flagged(self) -> bool:
        return any(s.zero_flag for s in self.sectors)


@dataclass
class SweepTable:
    d: int
    domain: str
    T: float
    n: int
    lambdas: list[float]
    counts: list[int]
    rhs: list[float]
    slope: float | None
    flagged: list[bool] = field(default_factory=list)


@dataclass
class KvwReport:
    n_full: int
    n_ball: int
    n_comp: int
    upper_ok: bool      # n_full <= 1 + n_ball + n_comp
    lower_ok: bool      # n_ball + n_comp <= n_full
    zero_flags: tuple[int, int, int] = (0, 0, 0)


@dataclass
class InversionReport:
    max_residual: float
    kinetic_residual: float
    potential_residual: float
    count_ball: int
    count_comp: int
    rhs_ball: float
    rhs_comp: float


def sector_count(problem: SectorProblem) -> tuple[int, int]:
    """(negative count, zero-pivot flag) for one sector's form matrix."""
    m = assemble_sector(problem)
    inertia = tridiag_inertia(m.form_matrix())
    return (inertia.neg, inertia.zero)


def ell_cutoff(d: int, W: RadialPotential, lam: float) -> int:
    """Smallest ell with c_ell >= lam * sup r^2 W(r).  All sectors at or
    beyond it have pointwise-positive forms and contribute zero."""
    sup = W.sup_r2w()
    if math.isinf(sup):
        raise UnsupportedPotentialError(
            "potential has unbounded r^2 W(r); no sector cutoff exists")
    bound = lam * sup
    if bound <= 0.0:
        return 0
    ell = 0
    while sector_constant(d, ell) < bound:
        ell += 1
    return ell


def _resolve_grid(domain: str, W: RadialPotential, T: float | None,
                  n: int | None) -> tuple[LogGrid, float]:
    if T is None:
        T = default_truncation(W)
    return make_grid(domain, T, n), T


def total_count(d: int, W: RadialPotential, lam: float,
                domain: str = FULL, T: float | None = None,
                n: int | None = None, workers: int = 1) -> CountReport:
    """Multiplicity-weighted sum of sector counts up to the cutoff."""
    grid, T = _resolve_grid(domain, W, T, n)
    ell_max = ell_cutoff(d, W, lam)

    def job(ell: int) -> SectorEntry:
        cnt, flag = sector_count(SectorProblem(d, ell, domain, grid, W, lam))
        return SectorEntry(ell, multiplicity(d, ell), cnt, flag)

    ells = list(range(ell_max))
    if workers > 1 and len(ells) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            sectors = list(pool.map(job, ells))
    else:
        sectors = [job(ell) for ell in ells]

    total = sum(s.mult * s.count for s in sectors)
    upper = sum(s.mult * (s.count + s.zero_flag) for s in sectors)
    rhs, ok = weighted_rhs(W, d, lam, d - 1, domain)
    return CountReport(d=d, lam=lam, domain=domain, T=T, n=grid.n,
                       ell_max=ell_max, sectors=sectors, total=total,
                       total_upper=upper, rhs_weighted=rhs, rhs_converged=ok)


# ----------------------------------------------------------- weighted rhs

def _domain_window(domain: str) -> tuple[float, float]:
    if domain == BALL:
        return (-RHS_WINDOW, 0.0)
    if domain == COMPLEMENT:
        return (0.0, RHS_WINDOW)
    return (-RHS_WINDOW, RHS_WINDOW)


def weighted_rhs(W: RadialPotential, d: int, lam: float,
                 weight_exponent: float, domain: str = FULL
                 ) -> tuple[float, bool]:
    """Integral of (lam W)^{d/2} (1 + |ln r|)^p over the domain.

    Returns (value, converged).  converged=False marks an integrand the
    adaptive rule could not settle (a nonintegrable profile); the value
    is then the partial quadrature.
    """
    return _weighted_rhs(W, d, lam, 0.5 * d, weight_exponent, domain)


def _weighted_rhs(W: RadialPotential, d: int, lam: float, w_power: float,
                  weight_exponent: float, domain: str) -> tuple[float, bool]:
    if lam < 0.0:
        raise ValueError("coupling must be nonnegative")
    if lam == 0.0:
        return (0.0, True)
    t_lo, t_hi = _domain_window(domain)
    lo_r, hi_r = W.support()
    if lo_r > 0.0 and math.isfinite(lo_r):
        t_lo = max(t_lo, math.log(lo_r))
    if hi_r > 0.0 and math.isfinite(hi_r):
        t_hi = min(t_hi, math.log(hi_r))
    if not t_lo < t_hi:
        return (0.0, True)

    p = weight_exponent

    def integrand(t):
        t = np.asarray(t, dtype=np.float64)
        w = np.asarray(W(np.exp(t)), dtype=np.float64)
        return np.power(w, w_power) * np.power(1.0 + np.abs(t), p) * np.exp(d * t)

    breaks = sorted({t_lo, t_hi, 0.0, *W.log_breakpoints()})
    breaks = [t_lo] + [b for b in breaks if t_lo < b < t_hi] + [t_hi]
    value, converged = adaptive_quad_pieces(integrand, breaks, rel_tol=1e-9)
    # the coupling factors out of the integrand exactly
    return (lam ** w_power * sphere_area(d) * value, converged)


# ----------------------------------------------------------------- sweeps

def fit_sweep_slope(lambdas, counts) -> float | None:
    """Least-squares slope of log N against log lambda over the largest
    decade of the sweep (points with N > 0 only)."""
    lam_max = max(lambdas)
    xs, ys = [], []
    for lam, n in zip(lambdas, counts):
        if lam >= lam_max / 10.0 and n > 0:
            xs.append(math.log(lam))
            ys.append(math.log(n))
    if len(xs) < 2:
        return None
    x = np.array(xs)
    y = np.array(ys)
    x -= x.mean()
    return float((x @ (y - y.mean())) / (x @ x))


def coupling_sweep(d: int, W: RadialPotential, lambdas,
                   domain: str = FULL, T: float | None = None,
                   n: int | None = None, workers: int = 1) -> SweepTable:
    """Counts and weighted RHS across increasing couplings.

    Sector matrices are assembled once per ell at unit coupling; the
    potential term scales linearly, so each (lambda, ell) count reuses
    them.  Worker parallelism is over coupling values with a
    deterministic merge, so outputs match the serial order bitwise.
    """
    lambdas = [float(x) for x in lambdas]
    if len(lambdas) < 1 or any(b <= a for a, b in zip(lambdas, lambdas[1:])):
        raise ValueError("couplings must be strictly increasing")
    if lambdas[0] < 0.0:
        raise ValueError("couplings must be nonnegative")
    grid, T = _resolve_grid(domain, W, T, n)
    ell_top = ell_cutoff(d, W, max(lambdas))

    assemblies = {}
    for ell in range(ell_top):
        m = assemble_sector(SectorProblem(d, ell, domain, grid, W, lam=1.0))
        base = Tridiagonal(m.K.diag + m.C.diag, m.K.off + m.C.off)
        assemblies[ell] = (base, m.MV)

    def job(lam: float) -> tuple[int, bool]:
        total = 0
        flagged = False
        for ell in range(ell_cutoff(d, W, lam)):
            base, mv1 = assemblies[ell]
            F = Tridiagonal(base.diag - lam * mv1.diag,
                            base.off - lam * mv1.off)
            inertia = tridiag_inertia(F)
            total += multiplicity(d, ell) * inertia.neg
            flagged = flagged or inertia.zero > 0
        return total, flagged

    if workers > 1 and len(lambdas) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, lambdas))
    else:
        results = [job(lam) for lam in lambdas]

    counts = [r[0] for r in results]
    flags = [r[1] for r in results]
    rhs = [weighted_rhs(W, d, lam, d - 1, domain)[0] for lam in lambdas]
    slope = fit_sweep_slope(lambdas, counts)
    return SweepTable(d=d, domain=domain, T=T, n=grid.n, lambdas=lambdas,
                      counts=counts, rhs=rhs, slope=slope, flagged=flags)


# --------------------------------------------------------------- splitting

def kvw_check(d: int, W: RadialPotential, lam: float,
              T: float | None = None, n: int | None = None) -> KvwReport:
    """Rank-one splitting of the full-space ell=0 count at the sphere.

    The full form matrix is assembled once; deleting the single node at
    t = 0 decouples it into the ball and complement blocks exactly (the
    tridiagonal coupling entries live in the deleted row/column), so the
    integer sandwich N_b + N_c <= N_full <= 1 + N_b + N_c is a matrix
    identity, not a tolerance statement.
    """
    grid, T = _resolve_grid(FULL, W, T, n)
    m = assemble_sector(SectorProblem(d, 0, FULL, grid, W, lam))
    F = m.form_matrix()
    split = grid.zero_index()      # node index == dof index (both ends free)
    full = tridiag_inertia(F)
    ball = tridiag_inertia(F.principal(0, split))
    comp = tridiag_inertia(F.principal(split + 1, F.n))
    return KvwReport(
        n_full=full.neg,
        n_ball=ball.neg,
        n_comp=comp.neg,
        upper_ok=full.neg <= 1 + ball.neg + comp.neg,
        lower_ok=ball.neg + comp.neg <= full.neg,
        zero_flags=(full.zero, ball.zero, comp.zero),
    )


# --------------------------------------------------------------- inversion

def _bump_family(i: int):
    """Deterministic smooth bumps on (0, 1): u(s) = ((s-a)(b-s))^3."""
    a = 0.04 + 0.06 * i
    b = a + 0.18 + 0.02 * i

    def u(s):
        s = np.asarray(s, dtype=np.float64)
        core = (s - a) * (b - s)
        return np.where((s > a) & (s < b), core ** 3, 0.0)

    def du(s):
        s = np.asarray(s, dtype=np.float64)
        core = (s - a) * (b - s)
        return np.where((s > a) & (s < b),
                        3.0 * core ** 2 * (a + b - 2.0 * s), 0.0)

    return a, b, u, du


def inversion_check(d: int, W_tilde: RadialPotential, lam: float,
                    T: float | None = None, n: int | None = None
                    ) -> InversionReport:
    """Inversion symmetry between the ball problem with W-tilde and the
    complement problem with its Kelvin transform.

    (a) For ten deterministic bumps u-tilde on the ball, the
    Hardy-subtracted kinetic form and the potential form are each
    integrated on both sides of the inversion map
    u(r) = r^{2-d} u-tilde(1/r); residuals are relative.
    (b) The two sector counts are computed on mirrored grids.
    """
    if T is None:
        T = default_truncation(W_tilde)
    W_out = kelvin_potential(W_tilde)
    hardy = (d - 2) ** 2 / 4.0

    kin_res = 0.0
    pot_res = 0.0
    for i in range(10):
        a, b, u, du = _bump_family(i)

        def kin_ball(s):
            s = np.asarray(s, dtype=np.float64)
            return (du(s) ** 2 - hardy * u(s) ** 2 / s ** 2) * s ** (d - 1)

        def kin_comp(r):
            r = np.asarray(r, dtype=np.float64)
            ui = u(1.0 / r)
            dui = du(1.0 / r)
            big_u = r ** (2 - d) * ui
            big_du = (2 - d) * r ** (1 - d) * ui - r ** -d * dui
            return (big_du ** 2 - hardy * big_u ** 2 / r ** 2) * r ** (d - 1)

        def pot_ball(s):
            s = np.asarray(s, dtype=np.float64)
            return np.asarray(W_tilde(s), dtype=np.float64) * u(s) ** 2 * s ** (d - 1)

        def pot_comp(r):
            r = np.asarray(r, dtype=np.float64)
            big_u = r ** (2 - d) * u(1.0 / r)
            return np.asarray(W_out(r), dtype=np.float64) * big_u ** 2 * r ** (d - 1)

        lhs_k = adaptive_quad_pieces(kin_ball, [a, 0.5 * (a + b), b])[0]
        rhs_k = adaptive_quad_pieces(kin_comp, [1.0 / b, 2.0 / (a + b), 1.0 / a])[0]
        scale_k = max(abs(lhs_k), abs(rhs_k), 1e-300)
        kin_res = max(kin_res, abs(lhs_k - rhs_k) / scale_k)

        breaks_b = sorted({a, b, *[math.exp(t) for t in W_tilde.log_breakpoints()
                                   if a < math.exp(t) < b]})
        lhs_p = adaptive_quad_pieces(pot_ball, breaks_b)[0]
        breaks_c = sorted({1.0 / b, 1.0 / a,
                           *[math.exp(t) for t in W_out.log_breakpoints()
                             if 1.0 / b < math.exp(t) < 1.0 / a]})
        rhs_p = adaptive_quad_pieces(pot_comp, breaks_c)[0]
        scale_p = max(abs(lhs_p), abs(rhs_p), 1e-300)
        if scale_p > 1e-280:
            pot_res = max(pot_res, abs(lhs_p - rhs_p) / scale_p)

    g_ball = make_grid(BALL, T, n)
    g_comp = make_grid(COMPLEMENT, T, n)
    cnt_ball, _ = sector_count(SectorProblem(d, 0, BALL, g_ball, W_tilde, lam))
    cnt_comp, _ = sector_count(SectorProblem(d, 0, COMPLEMENT, g_comp, W_out, lam))
    rhs_ball = weighted_rhs(W_tilde, d, lam, d - 1, BALL)[0]
    rhs_comp = weighted_rhs(W_out, d, lam, d - 1, COMPLEMENT)[0]
    return InversionReport(
        max_residual=max(kin_res, pot_res),
        kinetic_residual=kin_res,
        potential_residual=pot_res,
        count_ball=cnt_ball,
        count_comp=cnt_comp,
        rhs_ball=rhs_ball,
        rhs_comp=rhs_comp,
    )
