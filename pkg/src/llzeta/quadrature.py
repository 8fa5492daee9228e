"""Gauss-Legendre panels and the periodic trapezoidal rule.

Integrators here take a *panel sum* ``ps(x, w) -> complex`` that returns
``sum(w * f(x))`` for node and weight arrays, so compiled kernels can fuse
the integrand evaluation with the reduction.
"""

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def gauss_legendre(n):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _panel(ps, lo, hi, order):
    x, w = gauss_legendre(order)
    half = 0.5 * (hi - lo)
    return ps(lo + half * (x + 1.0), half * w)


def adaptive_panels(ps, breakpoints, tol, order=20, max_panels=20000, rel=0.0):
    """Integrate over consecutive panels, bisecting until two levels agree.

    ``tol`` is an absolute budget split across the initial panels in
    proportion to their length; a panel is also accepted once the two levels
    agree to ``rel`` relative to the panel value. Returns ``(value, err_estimate)``.
    """
    bp = [float(b) for b in breakpoints]
    total_len = bp[-1] - bp[0]
    value = 0j
    err = 0.0
    used = 0
    for lo0, hi0 in zip(bp[:-1], bp[1:]):
        stack = [(lo0, hi0, _panel(ps, lo0, hi0, order))]
        while stack:
            lo, hi, coarse = stack.pop()
            mid = 0.5 * (lo + hi)
            left = _panel(ps, lo, mid, order)
            right = _panel(ps, mid, hi, order)
            fine = left + right
            d = abs(fine - coarse)
            used += 1
            budget = tol * (hi - lo) / total_len
            if d <= budget or d <= rel * abs(fine) or used > max_panels or (hi - lo) < 1e-12 * max(1.0, abs(lo)):
                value += fine
                err += d
            else:
                stack.append((mid, hi, right))
                stack.append((lo, mid, left))
    return value, err


def geometric_breakpoints(start, stop, first=0.5, growth=2.0):
    """Breakpoints start, start+first, ... with lengths growing by ``growth``."""
    pts = [start]
    h = first
    while pts[-1] + h < stop:
        pts.append(pts[-1] + h)
        h *= growth
    pts.append(stop)
    return pts


def trapezoid_circle(f, center, radius, n):
    """(1/(2 pi i)) * contour integral of f over |s - center| = radius, counterclockwise.

    ``f`` is called once per node (it need not be vectorised).
    """
    theta = 2.0 * np.pi * np.arange(n) / n
    e = np.exp(1j * theta)
    vals = np.array([f(center + radius * ei) for ei in e], dtype=np.complex128)
    # ds = i r e^{i theta} d theta; the 1/(2 pi i) cancels i and 2 pi
    return complex(radius * np.mean(vals * e))
