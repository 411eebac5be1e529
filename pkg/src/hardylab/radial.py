"""Radial potentials and the log-variable reduction to 1-D sector forms.

A radial Schrodinger-type quadratic form in dimension d splits over
spherical-harmonic degrees ell.  Substituting r = e^t and
w(t) = r^{(d-2)/2} u(r) turns the sector-ell radial form, with the
critical inverse-square term already subtracted, into the flat 1-D form

    integral w'(t)^2 + c_ell w(t)^2 - lam e^{2t} W(e^t) w(t)^2 dt,

with c_ell = ell (ell + d - 2).  This module represents potentials W,
builds uniform grids in t, and assembles conforming piecewise-linear
Galerkin matrices for that form.  Conformity is the point: restricting a
quadratic form to a subspace can only lose negative directions, so every
count downstream is a certified lower bound.

Endpoint policy.  The interface boundary t = 0 (sphere |x| = 1) always
carries a Dirichlet condition.  Artificial truncation endpoints keep the
endpoint node as an unknown (a free, natural end) in the ell = 0 sector
only: there the constant-extension argument preserves lower-bound
certification, while for ell >= 1 the positive sector constant would
break it, so those sectors are Dirichlet on all ends.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .quadrature import gauss_rule
from .spectra import Tridiagonal

BALL = "ball"
COMPLEMENT = "complement"
FULL = "full"
DOMAINS = (BALL, COMPLEMENT, FULL)

CELL_QUAD_ORDER = 8
# support edge of a Gaussian profile, in widths; exp(-144) is below any
# double-precision contribution
_GAUSS_SUPPORT_WIDTHS = 12.0


class AssemblyError(RuntimeError):
    """Matrix assembly failed (typically a potential evaluated non-finite)."""


class UnsupportedPotentialError(ValueError):
    """The requested operation needs a property this potential lacks."""


# ------------------------------------------------------------------ grids

@dataclass(frozen=True)
class LogGrid:
    """Uniform grid in the log variable t with n interior nodes.

    Nodes are t_min + j*h for j = 0..n+1 with h = (t_max - t_min)/(n+1);
    the two endpoint nodes may or may not be unknowns depending on the
    sector (see module docstring).
    """

    t_min: float
    t_max: float
    n: int

    def __post_init__(self) -> None:
        if not self.t_min < self.t_max:
            raise ValueError("grid needs t_min < t_max")
        if self.n < 1:
            raise ValueError("grid needs at least one interior node")

    @property
    def h(self) -> float:
        return (self.t_max - self.t_min) / (self.n + 1)

    def nodes(self) -> np.ndarray:
        """All n+2 nodes including endpoints."""
        return self.t_min + np.arange(self.n + 2) * self.h

    def bisect(self) -> "LogGrid":
        """Halve every cell.  The new node set contains the old one
        bitwise (h/2 is exact in binary floating point)."""
        return LogGrid(self.t_min, self.t_max, 2 * self.n + 1)

    def zero_index(self) -> int:
        """Index j with node_j == 0 up to roundoff; error if absent."""
        j = int(round(-self.t_min / self.h))
        if j < 0 or j > self.n + 1:
            raise ValueError("t = 0 lies outside the grid")
        if abs(self.t_min + j * self.h) > 1e-9 * (self.t_max - self.t_min):
            raise ValueError("t = 0 is not a grid node")
        return j


# ------------------------------------------------------------- potentials

class RadialPotential:
    """Base for nonnegative radial potentials W(r), r > 0.

    Subclasses implement vectorized evaluation, a support interval
    (0.0 and inf are legal edges), the supremum of r^2 W(r), and the
    log-variable breakpoints where the profile is nonsmooth.
    """

    def __call__(self, r: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def support(self) -> tuple[float, float]:
        raise NotImplementedError

    def sup_r2w(self) -> float:
        """sup over the support of r^2 W(r); may be inf."""
        raise NotImplementedError

    def log_breakpoints(self) -> list[float]:
        return []

    def describe(self) -> str:
        raise NotImplementedError


class Annulus(RadialPotential):
    """Indicator potential: height on r1 <= r <= r2, zero elsewhere."""

    def __init__(self, r1: float, r2: float, height: float):
        if not 0.0 < r1 < r2:
            raise ValueError("annulus needs 0 < r1 < r2")
        if height < 0.0:
            raise ValueError("potentials are nonnegative")
        self.r1 = float(r1)
        self.r2 = float(r2)
        self.height = float(height)

    def __call__(self, r):
        r = np.asarray(r, dtype=np.float64)
        return np.where((r >= self.r1) & (r <= self.r2), self.height, 0.0)

    def support(self):
        return (self.r1, self.r2)

    def sup_r2w(self):
        return self.height * self.r2 ** 2

    def log_breakpoints(self):
        return [math.log(self.r1), math.log(self.r2)]

    def describe(self):
        return f"annulus:{self.r1:g},{self.r2:g},{self.height:g}"


class GaussianBump(RadialPotential):
    """Smooth bump height*exp(-((r-center)/width)^2)."""

    def __init__(self, center: float, width: float, height: float):
        if center <= 0.0 or width <= 0.0:
            raise ValueError("bump needs positive center and width")
        if height < 0.0:
            raise ValueError("potentials are nonnegative")
        self.center = float(center)
        self.width = float(width)
        self.height = float(height)

    def __call__(self, r):
        r = np.asarray(r, dtype=np.float64)
        z = (r - self.center) / self.width
        return self.height * np.exp(-np.minimum(z * z, 745.0))

    def support(self):
        lo = max(self.center - _GAUSS_SUPPORT_WIDTHS * self.width, 0.0)
        hi = self.center + _GAUSS_SUPPORT_WIDTHS * self.width
        return (lo, hi)

    def sup_r2w(self):
        # stationarity of r^2 exp(-((r-c)/w)^2): w^2 = r(r - c)
        c, w = self.center, self.width
        r_star = 0.5 * (c + math.sqrt(c * c + 4.0 * w * w))
        return float(r_star ** 2 * self(np.asarray(r_star)))

    def describe(self):
        return f"gauss:{self.center:g},{self.width:g},{self.height:g}"


class CriticalLog(RadialPotential):
    """The critically scaling profile beta/(4 r^2 (ln r)^2) inside the
    unit ball.  In the log variable this is beta/(4 t^2); its r^2-scaled
    supremum is infinite, so operations needing a sector cutoff reject it.
    """

    def __init__(self, beta: float):
        if beta < 0.0:
            raise ValueError("potentials are nonnegative")
        self.beta = float(beta)

    def __call__(self, r):
        r = np.asarray(r, dtype=np.float64)
        out = np.zeros_like(r)
        inside = (r > 0.0) & (r < 1.0)
        ri = r[inside]
        lg = np.log(ri)
        out[inside] = self.beta / (4.0 * ri * ri * lg * lg)
        return out

    def support(self):
        return (0.0, 1.0)

    def sup_r2w(self):
        return math.inf if self.beta > 0.0 else 0.0

    def log_breakpoints(self):
        return [0.0]

    def describe(self):
        return f"critlog:{self.beta:g}"


class Tabulated(RadialPotential):
    """Piecewise-linear interpolation of sampled (r, W) pairs in ln r;
    zero outside the sampled range (keeps W >= 0)."""

    def __init__(self, radii, values):
        radii = np.asarray(radii, dtype=np.float64)
        values = np.asarray(values, dtype=np.float64)
        if radii.ndim != 1 or radii.shape != values.shape or radii.size < 2:
            raise ValueError("need matching 1-D arrays with at least 2 samples")
        if not np.all(radii > 0.0):
            raise ValueError("radii must be positive")
        if not np.all(np.diff(radii) > 0.0):
            raise ValueError("radii must be strictly increasing")
        if not np.all(values >= 0.0):
            raise ValueError("potentials are nonnegative")
        self.radii = radii
        self.values = values
        self._t = np.log(radii)

    def __call__(self, r):
        r = np.asarray(r, dtype=np.float64)
        t = np.log(np.maximum(r, 1e-300))
        out = np.interp(t, self._t, self.values, left=0.0, right=0.0)
        return np.where((r >= self.radii[0]) & (r <= self.radii[-1]), out, 0.0)

    def support(self):
        return (float(self.radii[0]), float(self.radii[-1]))

    def sup_r2w(self):
        # on each segment W(t) = a + b (t - t0) is linear in t, so
        # e^{2t} W has an elementary interior stationary point
        best = 0.0
        for i in range(self._t.size - 1):
            t0, t1 = self._t[i], self._t[i + 1]
            w0, w1 = self.values[i], self.values[i + 1]
            b = (w1 - w0) / (t1 - t0)
            for t in self._segment_candidates(t0, t1, w0, b):
                w = w0 + b * (t - t0)
                best = max(best, math.exp(2.0 * t) * w)
        return best

    @staticmethod
    def _segment_candidates(t0, t1, w0, b):
        cands = [t0, t1]
        if b != 0.0:
            # d/dt e^{2t}(w0 + b(t-t0)) = 0 at t = t0 - w0/b - 1/2
            ts = t0 - w0 / b - 0.5
            if t0 < ts < t1:
                cands.append(ts)
        return cands

    def log_breakpoints(self):
        return [float(t) for t in self._t]

    def describe(self):
        return f"table:<{self.radii.size} samples>"


class KelvinOf(RadialPotential):
    """Kelvin transform of another potential: W(r) = r^{-4} inner(1/r).

    In the log variable the transform is reflection composed with the
    sector weight: e^{2t} W(e^t) = [e^{2tau} inner(e^{tau})] at tau = -t,
    which is why it leaves r^2-scaled suprema unchanged.
    """

    def __init__(self, inner: RadialPotential):
        self.inner = inner

    def __call__(self, r):
        r = np.asarray(r, dtype=np.float64)
        rr = np.maximum(r, 1e-300)
        return self.inner(1.0 / rr) / rr ** 4

    def support(self):
        lo, hi = self.inner.support()
        new_lo = 0.0 if math.isinf(hi) else 1.0 / hi
        new_hi = math.inf if lo == 0.0 else 1.0 / lo
        return (new_lo, new_hi)

    def sup_r2w(self):
        return self.inner.sup_r2w()

    def log_breakpoints(self):
        return sorted(-t for t in self.inner.log_breakpoints())

    def describe(self):
        return f"kelvin:{self.inner.describe()}"


def kelvin_potential(W: RadialPotential) -> RadialPotential:
    """Kelvin transform; unwrapping a wrapped potential makes the
    involution kelvin(kelvin(W)) = W exact, not just numerical."""
    if isinstance(W, KelvinOf):
        return W.inner
    return KelvinOf(W)


def load_tabulated(path: str) -> Tabulated:
    """Read a two-column (r, W) text file; '#' starts a comment."""
    radii, values = [], []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected two columns, got {len(parts)}")
            try:
                r, w = float(parts[0]), float(parts[1])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-numeric entry") from None
            if not (math.isfinite(r) and math.isfinite(w)):
                raise ValueError(f"{path}:{lineno}: non-finite entry")
            if r <= 0.0:
                raise ValueError(f"{path}:{lineno}: radius must be positive")
            if w < 0.0:
                raise ValueError(f"{path}:{lineno}: potential values must be nonnegative")
            if radii and r <= radii[-1]:
                raise ValueError(f"{path}:{lineno}: radii must be strictly increasing")
            radii.append(r)
            values.append(w)
    if len(radii) < 2:
        raise ValueError(f"{path}: need at least two samples")
    return Tabulated(np.array(radii), np.array(values))


# ---------------------------------------------------------------- sectors

def sector_constant(d: int, ell: int) -> float:
    """c_ell = ell (ell + d - 2), the angular eigenvalue of degree ell."""
    if d < 3:
        raise ValueError("local theory needs d >= 3")
    if ell < 0:
        raise ValueError("angular degree must be nonnegative")
    return float(ell * (ell + d - 2))


def multiplicity(d: int, ell: int) -> int:
    """Dimension of the degree-ell spherical harmonics on S^{d-1}."""
    if d < 3 or ell < 0:
        raise ValueError("need d >= 3 and ell >= 0")
    a = math.comb(ell + d - 1, d - 1)
    b = math.comb(ell + d - 3, d - 1) if ell + d - 3 >= d - 1 else 0
    return a - b


def default_truncation(W: RadialPotential) -> float:
    """Truncation half-width in t: cover the support with 10 units of
    slack, floored at 14.  Unbounded support edges fall back to the floor
    (the profile is then cut by the grid itself)."""
    T = 14.0
    lo, hi = W.support()
    for edge in (lo, hi):
        if edge > 0.0 and math.isfinite(edge):
            T = max(T, abs(math.log(edge)) + 10.0)
    return T


DEFAULT_N = {BALL: 4000, COMPLEMENT: 4000, FULL: 3999}


def make_grid(domain: str, T: float, n: int | None = None) -> LogGrid:
    """Standard grid for a domain: ball [-T, 0], complement [0, T],
    full space [-T, T] with an odd interior count so that 0 is a node."""
    if domain not in DOMAINS:
        raise ValueError(f"unknown domain {domain!r}")
    if T <= 0.0:
        raise ValueError("truncation must be positive")
    if n is None:
        n = DEFAULT_N[domain]
    if domain == BALL:
        return LogGrid(-T, 0.0, n)
    if domain == COMPLEMENT:
        return LogGrid(0.0, T, n)
    if n % 2 == 0:
        raise ValueError("full-space grids need an odd interior count")
    return LogGrid(-T, T, n)


@dataclass
class SectorProblem:
    """One angular sector of the radial problem, ready for assembly."""

    d: int
    ell: int
    domain: str
    grid: LogGrid
    potential: RadialPotential
    lam: float = 1.0

    def __post_init__(self) -> None:
        if self.domain not in DOMAINS:
            raise ValueError(f"unknown domain {self.domain!r}")
        if self.lam < 0.0:
            raise ValueError("coupling must be nonnegative")
        sector_constant(self.d, self.ell)   # validates d, ell
        g = self.grid
        if self.domain == BALL and g.t_max != 0.0:
            raise ValueError("ball domain requires t_max = 0")
        if self.domain == COMPLEMENT and g.t_min != 0.0:
            raise ValueError("complement domain requires t_min = 0")
        if self.domain == FULL:
            if not (g.t_min < 0.0 < g.t_max):
                raise ValueError("full-space domain must contain t = 0")
            g.zero_index()                  # raises if 0 is not a node

    def free_ends(self) -> tuple[bool, bool]:
        """(left, right): which endpoint nodes are unknowns."""
        if self.ell != 0:
            return (False, False)
        left = self.domain in (BALL, FULL)
        right = self.domain in (COMPLEMENT, FULL)
        return (left, right)

    def dof_range(self) -> tuple[int, int]:
        """Node index range [i0, i1) that carries unknowns."""
        left, right = self.free_ends()
        i0 = 0 if left else 1
        i1 = self.grid.n + 2 if right else self.grid.n + 1
        return (i0, i1)


@dataclass
class SectorMatrices:
    """Assembled sector matrices on the unknown nodes.

    K: stiffness int w' phi_i' phi_j'.  C: sector constant term
    c_ell int phi_i phi_j.  MV: potential term int e^{2t} lam W(e^t)
    phi_i phi_j.  Mw: weight int e^{2t} phi_i phi_j (eigenvalue scale
    only; not mirror-symmetric under Kelvin reflection, unlike the rest).
    i0 is the first unknown's node index, for mapping back to the grid.
    """

    K: Tridiagonal
    C: Tridiagonal
    MV: Tridiagonal
    Mw: Tridiagonal
    i0: int
    i1: int

    def form_matrix(self) -> Tridiagonal:
        """K + C - MV, the matrix whose inertia counts bound states."""
        return Tridiagonal(self.K.diag + self.C.diag - self.MV.diag,
                           self.K.off + self.C.off - self.MV.off)


def _weighted_mass_full(grid: LogGrid, values_fn) -> tuple[np.ndarray, np.ndarray]:
    """Per-cell Gauss quadrature of int f(t) phi_i phi_j over all n+1
    cells, returned as full (n+2)-node diagonal and (n+1) off arrays.
    values_fn maps an array of t samples to integrand weights f(t)."""
    h = grid.h
    nodes = grid.nodes()
    x, w = gauss_rule(CELL_QUAD_ORDER)
    # unit-cell coordinates in [0, 1]
    xi = 0.5 * (x + 1.0)
    wq = 0.5 * w
    tq = nodes[:-1, None] + (h * xi)[None, :]
    fv = values_fn(tq)
    if not np.all(np.isfinite(fv)):
        bad = int(np.argwhere(~np.all(np.isfinite(fv), axis=1))[0, 0])
        raise AssemblyError(
            f"potential evaluated non-finite in cell {bad} "
            f"(t in [{nodes[bad]:.6g}, {nodes[bad + 1]:.6g}])")
    phi_l = 1.0 - xi
    phi_r = xi
    cell_ll = h * (fv * (phi_l * phi_l * wq)[None, :]).sum(axis=1)
    cell_rr = h * (fv * (phi_r * phi_r * wq)[None, :]).sum(axis=1)
    cell_lr = h * (fv * (phi_l * phi_r * wq)[None, :]).sum(axis=1)
    diag = np.zeros(grid.n + 2)
    diag[:-1] += cell_ll
    diag[1:] += cell_rr
    return diag, cell_lr


def assemble_sector(problem: SectorProblem) -> SectorMatrices:
    """Galerkin matrices for one sector.

    K and C use exact closed-form entries of piecewise-linear elements on
    a uniform grid; MV and Mw use per-cell Gauss quadrature.  Assembly
    runs over all nodes first and then slices to the unknown range, so
    subgrids of a common grid produce bitwise-identical submatrices.
    """
    grid = problem.grid
    n, h = grid.n, grid.h
    i0, i1 = problem.dof_range()

    k_diag = np.full(n + 2, 2.0 / h)
    k_diag[0] = k_diag[-1] = 1.0 / h
    k_off = np.full(n + 1, -1.0 / h)

    m_diag = np.full(n + 2, 2.0 * h / 3.0)
    m_diag[0] = m_diag[-1] = h / 3.0
    m_off = np.full(n + 1, h / 6.0)

    c = sector_constant(problem.d, problem.ell)
    lam = problem.lam
    W = problem.potential

    mw_diag, mw_off = _weighted_mass_full(grid, lambda t: np.exp(2.0 * t))
    if lam == 0.0:
        mv_diag = np.zeros(n + 2)
        mv_off = np.zeros(n + 1)
    else:
        def lam_w(t):
            return lam * np.exp(2.0 * t) * W(np.exp(t))
        mv_diag, mv_off = _weighted_mass_full(grid, lam_w)

    def cut(diag, off):
        return Tridiagonal(diag[i0:i1].copy(), off[i0:i1 - 1].copy())

    return SectorMatrices(
        K=cut(k_diag, k_off),
        C=cut(c * m_diag, c * m_off),
        MV=cut(mv_diag, mv_off),
        Mw=cut(mw_diag, mw_off),
        i0=i0,
        i1=i1,
    )
