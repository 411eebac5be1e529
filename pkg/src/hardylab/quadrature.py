"""Gauss-Legendre quadrature helpers.

Fixed-order panel rules for matrix assembly and an adaptive
subdivision scheme for the weighted integrals in the count reports.
"""

import numpy as np

_RULE_CACHE = {}


def gauss_rule(order):
    """Nodes and weights of the order-point Gauss-Legendre rule on [-1, 1]."""
    rule = _RULE_CACHE.get(order)
    if rule is None:
        x, w = np.polynomial.legendre.leggauss(order)
        rule = (x, w)
        _RULE_CACHE[order] = rule
    return rule


def panel_nodes(a, b, order):
    """Map the reference rule to [a, b]; returns (nodes, weights)."""
    x, w = gauss_rule(order)
    half = 0.5 * (b - a)
    return 0.5 * (a + b) + half * x, half * w


def fixed_quad(f, a, b, order=8):
    """Single-panel Gauss-Legendre integral of a vectorized callable."""
    x, w = panel_nodes(a, b, order)
    return float(np.dot(w, f(x)))


def adaptive_quad(f, a, b, rel_tol=1e-9, max_depth=48):
    """Adaptive Gauss-Legendre integration of f over [a, b].

    Each segment is accepted when the 8-point and 16-point values agree to
    rel_tol (relative to the running estimate of the whole integral);
    otherwise it is bisected.  Returns (value, converged).  converged is
    False when some segment hit max_depth, which is how nonintegrable
    samples surface: the value returned is then only a partial sum.
    """
    if not (a < b):
        if a == b:
            return 0.0, True
        raise ValueError("adaptive_quad: interval endpoints out of order")

    # first sweep to get a magnitude scale for the relative test
    scale = abs(fixed_quad(f, a, b, 16))

    total = 0.0
    converged = True
    stack = [(a, b, 0)]
    while stack:
        lo, hi, depth = stack.pop()
        coarse = fixed_quad(f, lo, hi, 8)
        fine = fixed_quad(f, lo, hi, 16)
        err = abs(fine - coarse)
        tol_here = rel_tol * max(scale, abs(total), 1e-300)
        if err <= tol_here * 0.5 or (hi - lo) <= abs(hi + lo) * 1e-15:
            total += fine
            scale = max(scale, abs(total))
            continue
        if depth >= max_depth:
            total += fine
            converged = False
            continue
        mid = 0.5 * (lo + hi)
        stack.append((lo, mid, depth + 1))
        stack.append((mid, hi, depth + 1))
    return total, converged


def adaptive_quad_pieces(f, breakpoints, rel_tol=1e-9, max_depth=48):
    """Adaptive integration over consecutive [b_i, b_i+1] segments.

    breakpoints must be sorted; duplicates are skipped.  Returns
    (value, converged) with converged the AND over all pieces.
    """
    total = 0.0
    converged = True
    for lo, hi in zip(breakpoints[:-1], breakpoints[1:]):
        if hi <= lo:
            continue
        v, ok = adaptive_quad(f, lo, hi, rel_tol=rel_tol, max_depth=max_depth)
        total += v
        converged = converged and ok
    return total, converged
