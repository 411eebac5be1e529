"""Special functions built from scratch: Gamma, Bessel J_nu, its zeros,
and the ball normalization integrals.

Everything here is plain double precision at the interface; the Bessel
ascending series accumulates in extended precision internally because the
alternating sum loses ~6 digits near the branch switchover otherwise.

Accuracy posts (enforced by the test suite):
  gamma      rel err <= 1e-12 on [0.05, 50], poles rejected
  bessel_j   abs err <= 1e-12 for 0 <= x <= 500, 0 <= nu <= 10 (scalar path)
  bessel_zero    abs err <= 1e-11, bracket always verified
"""

import math
import threading

import numpy as np

from .quadrature import fixed_quad

# Branch switchover for J_nu: ascending series below, Hankel asymptotic
# expansion above.  At 16 the extended-precision series still carries
# ~3e-13 cancellation noise and the asymptotic tail bottoms out below
# 1e-13 for nu <= 12, so both branches meet the 1e-12 post there.
BESSEL_SWITCH_X = 16.0

_SERIES_MAX_TERMS = 200
_ASYMPTOTIC_MAX_TERMS = 44

# Lanczos approximation, g = 607/128, 15 coefficients (Godfrey's set).
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_C = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)


class PoleError(ValueError):
    """Gamma evaluated at 0 or a negative integer."""


class BracketError(RuntimeError):
    """Internal failure to bracket a Bessel zero; never silent."""


def gamma(x):
    """Gamma function for real non-pole arguments.

    Lanczos for x >= 0.5, reflection below.  Negative non-integer
    arguments are allowed (the fractional constants need Gamma(-s)).
    """
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("gamma: argument must be finite")
    if x <= 0.0 and x == math.floor(x):
        raise PoleError("gamma: pole at non-positive integer x = %g" % x)
    if x < 0.5:
        # reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))
    series = _LANCZOS_C[0]
    for i in range(1, len(_LANCZOS_C)):
        series += _LANCZOS_C[i] / (x - 1.0 + i)
    t = x - 0.5 + _LANCZOS_G
    return math.sqrt(2.0 * math.pi) * (t ** (x - 0.5)) * math.exp(-t) * series


def sphere_area(d):
    """Surface measure of the unit sphere in R^d: 2 pi^{d/2} / Gamma(d/2)."""
    if d < 1:
        raise ValueError("sphere_area: d >= 1 required")
    return 2.0 * math.pi ** (0.5 * d) / gamma(0.5 * d)


def _check_order(nu):
    nu = float(nu)
    if not math.isfinite(nu) or nu < 0.0:
        raise ValueError("Bessel order must be finite and >= 0, got %r" % nu)
    return nu


def _series_extended(nu, x):
    """Ascending series for J_nu(x), accumulated in long double.

    t_0 = (x/2)^nu / Gamma(nu+1), t_k = -t_{k-1} (x/2)^2 / (k (k+nu)).
    """
    xl = np.longdouble(x)
    half = xl / np.longdouble(2)
    q = half * half
    term = half ** np.longdouble(nu) / np.longdouble(gamma(nu + 1.0))
    total = term
    for k in range(1, _SERIES_MAX_TERMS):
        term = -term * q / (np.longdouble(k) * np.longdouble(k + nu))
        total = total + term
        if abs(term) <= np.longdouble(1e-19) * abs(total) + np.longdouble(1e-320):
            break
    return float(total)


def _asymptotic_pq(nu, x):
    """Hankel expansion modulus/phase sums P, Q at double precision.

    Terms are added while they keep shrinking; the expansion is
    divergent, so the floor of the smallest term is the accuracy limit
    (below 1e-13 for nu <= 12 once x >= 16).
    """
    mu = 4.0 * nu * nu
    p = 1.0
    q = 0.0
    c = 1.0
    last = None
    descending = False
    for k in range(1, _ASYMPTOTIC_MAX_TERMS):
        c = c * (mu - (2.0 * k - 1.0) ** 2) / (k * 8.0 * x)
        mag = abs(c)
        # terms of the divergent expansion may hump upward first (large nu);
        # truncate at the smallest term, i.e. on the first rise after a descent
        if last is not None:
            if mag >= last:
                if descending:
                    break
            else:
                descending = True
        last = mag
        if k % 2 == 1:
            q += c if (k % 4 == 1) else -c
        else:
            p += -c if (k % 4 == 2) else c
        if mag < 1e-18:
            break
    return p, q


def _asymptotic_extended(nu, x):
    """Large-argument branch with the phase carried in long double."""
    p, q = _asymptotic_pq(nu, x)
    chi = np.longdouble(x) - (np.longdouble(nu) / 2 + np.longdouble(0.25)) * np.longdouble(np.pi)
    amp = math.sqrt(2.0 / (math.pi * x))
    return float(amp * (p * float(np.cos(chi)) - q * float(np.sin(chi))))


def bessel_j(nu, x):
    """Bessel function of the first kind, scalar, high accuracy."""
    nu = _check_order(nu)
    x = float(x)
    if x < 0.0:
        raise ValueError("bessel_j: x >= 0 required, got %g" % x)
    if x == 0.0:
        return 1.0 if nu == 0.0 else 0.0
    if x < BESSEL_SWITCH_X:
        return _series_extended(nu, x)
    return _asymptotic_extended(nu, x)


def _fast_j(nu, x):
    """Double-precision J_nu for the zero search (x >= switchover hot path)."""
    if x < BESSEL_SWITCH_X:
        return _series_extended(nu, x)
    p, q = _asymptotic_pq(nu, x)
    chi = x - (0.5 * nu + 0.25) * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(chi) - q * math.sin(chi))


def _fast_dj(nu, x):
    """d/dx J_nu(x) = (nu/x) J_nu(x) - J_{nu+1}(x)."""
    v = _fast_j(nu, x)
    return (nu / x) * v - _fast_j(nu + 1.0, x), v


def bessel_j_array(nu, x):
    """Vectorized double-precision J_nu over a numpy array.

    Worst-case absolute error ~1e-8 right below the switchover (the
    plain-double series cancellation); callers needing 1e-12 use the
    scalar bessel_j.  Intended for the bulk mode sums in the density
    module, where the tolerances are percent-level.
    """
    nu = _check_order(nu)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0):
        raise ValueError("bessel_j_array: x >= 0 required")
    out = np.empty_like(x)

    small = x < BESSEL_SWITCH_X
    if np.any(small):
        xs = x[small]
        half = 0.5 * xs
        qfac = half * half
        with np.errstate(divide="ignore"):
            term = np.where(xs > 0.0, half, 1.0) ** nu / gamma(nu + 1.0)
        total = term.copy()
        for k in range(1, 64):
            term = -term * qfac / (k * (k + nu))
            total += term
            if np.all(np.abs(term) <= 1e-17 * np.abs(total) + 1e-300):
                break
        if nu == 0.0:
            total[xs == 0.0] = 1.0
        else:
            total[xs == 0.0] = 0.0
        out[small] = total

    large = ~small
    if np.any(large):
        xl = x[large]
        mu = 4.0 * nu * nu
        p = np.ones_like(xl)
        q = np.zeros_like(xl)
        c = np.ones_like(xl)
        active = np.ones_like(xl, dtype=bool)
        descending = np.zeros_like(xl, dtype=bool)
        last = np.full_like(xl, np.inf)
        for k in range(1, _ASYMPTOTIC_MAX_TERMS):
            c = c * (mu - (2.0 * k - 1.0) ** 2) / (k * 8.0 * xl)
            mag = np.abs(c)
            rising = mag >= last
            active &= ~(rising & descending)
            descending |= ~rising & np.isfinite(last)
            last = mag
            contrib = np.where(active, c, 0.0)
            if k % 2 == 1:
                if k % 4 == 1:
                    q += contrib
                else:
                    q -= contrib
            else:
                if k % 4 == 2:
                    p -= contrib
                else:
                    p += contrib
            active &= mag >= 1e-18
            if not np.any(active):
                break
        chi = xl - (0.5 * nu + 0.25) * np.pi
        out[large] = np.sqrt(2.0 / (np.pi * xl)) * (p * np.cos(chi) - q * np.sin(chi))
    return out


# ---------------------------------------------------------------------------
# zeros

_SCAN_STEP = 1.5  # below the minimum gap (~3.11) between consecutive zeros
_zero_cache = {}
_zero_lock = threading.Lock()


def _mcmahon_guess(nu, k):
    beta = (k + 0.5 * nu - 0.25) * math.pi
    mu = 4.0 * nu * nu
    b8 = 8.0 * beta
    z = beta - (mu - 1.0) / b8
    z -= 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8 ** 3)
    z -= 32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) / (15.0 * b8 ** 5)
    z -= 64.0 * (mu - 1.0) * (
        6949.0 * mu ** 3 - 153855.0 * mu * mu + 1585743.0 * mu - 6277237.0
    ) / (105.0 * b8 ** 7)
    return z


def _refine_zero(nu, lo, hi, f_lo, f_hi, guess):
    """Safeguarded Newton inside a verified sign-change bracket."""
    if f_lo * f_hi > 0.0:
        raise BracketError(
            "no sign change on [%g, %g] for nu=%g (f: %g, %g)" % (lo, hi, nu, f_lo, f_hi)
        )
    x = guess if lo < guess < hi else 0.5 * (lo + hi)
    for _ in range(50):
        df, f = _fast_dj(nu, x)
        if f == 0.0:
            return x
        if (f > 0.0) == (f_lo > 0.0):
            lo = x
        else:
            hi = x
        if df != 0.0:
            step = f / df
            xn = x - step
        else:
            xn = lo - 1.0  # force bisection
        if not (lo < xn < hi):
            xn = 0.5 * (lo + hi)
        if abs(xn - x) <= 2e-15 * x:
            return xn
        x = xn
    # Newton cap hit; finish by bisection on the maintained bracket
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= 4e-16 * mid:
            return mid
        fm = _fast_j(nu, mid)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (f_lo > 0.0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bessel_zero(nu, k):
    """k-th positive zero of J_nu, by sign scan plus safeguarded Newton.

    Zeros per order are found sequentially and cached, so asking for the
    k-th costs O(k) work once and O(1) afterwards.
    """
    nu = _check_order(nu)
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise ValueError("bessel_zero: k must be a positive integer")
    k = int(k)
    with _zero_lock:
        state = _zero_cache.get(nu)
        if state is None:
            x0 = max(0.5, nu)  # J_nu > 0 on (0, first zero); first zero > nu
            state = {"zeros": [], "x": x0, "f": _fast_j(nu, x0)}
            if state["f"] <= 0.0:
                raise BracketError("scan start not below the first zero (nu=%g)" % nu)
            _zero_cache[nu] = state
        zeros = state["zeros"]
        guard = 0
        while len(zeros) < k:
            x_prev, f_prev = state["x"], state["f"]
            x_next = x_prev + _SCAN_STEP
            f_next = _fast_j(nu, x_next)
            if f_prev * f_next < 0.0 or f_next == 0.0:
                idx = len(zeros) + 1
                z = _refine_zero(nu, x_prev, x_next, f_prev, f_next, _mcmahon_guess(nu, idx))
                if zeros and z <= zeros[-1]:
                    raise BracketError("zeros out of order at nu=%g, k=%d" % (nu, idx))
                zeros.append(z)
            state["x"], state["f"] = x_next, f_next
            guard += 1
            if guard > 100 * (k + 8):
                raise BracketError(
                    "failed to bracket zero %d of J_%g after %d scan steps" % (k, nu, guard)
                )
        return zeros[k - 1]


def dirichlet_norm(nu, k):
    """Normalization integral int_0^1 r J_nu(z_{nu,k} r)^2 dr.

    Closed form J_{nu+1}(z)^2 / 2, valid exactly at zeros of J_nu.
    """
    z = bessel_zero(nu, k)
    j1 = bessel_j(float(nu) + 1.0, z)
    return 0.5 * j1 * j1


def dirichlet_norm_quadrature(nu, k, order=64):
    """Cross-check route for dirichlet_norm: one Gauss-Legendre panel."""
    z = bessel_zero(nu, k)
    return fixed_quad(lambda r: r * bessel_j_array(nu, z * r) ** 2, 0.0, 1.0, order=order)
