"""Quadrature, root bracketing and shared constants."""

from dataclasses import dataclass
import math
import sys

import numpy as np


EULER_GAMMA = 0.5772156649015329


@dataclass(frozen=True)
class Constants:
    euler_gamma: float = EULER_GAMMA
    exp_gamma: float = math.exp(EULER_GAMMA)
    exp_neg_gamma: float = math.exp(-EULER_GAMMA)


CONSTANTS = Constants()
EXP_GAMMA = CONSTANTS.exp_gamma
EXP_NEG_GAMMA = CONSTANTS.exp_neg_gamma


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-10
    max_depth: int = 60

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")


class QuadratureError(ArithmeticError):
    """Raised when adaptive refinement cannot meet the tolerance.

    The best available estimate is kept in ``estimate``.
    """

    def __init__(self, msg, estimate=float("nan")):
        super().__init__(msg)
        self.estimate = estimate


class NoBracketError(ValueError):
    pass


def _eval(f, x):
    y = float(f(x))
    if not math.isfinite(y):
        raise QuadratureError("singular integrand at t=%r" % x)
    return y


def integrate(f, a, b, cfg=None):
    """Adaptive Simpson quadrature of ``f`` over ``[a, b]``.

    Non-finite values strictly inside the interval raise ``QuadratureError``.
    A non-finite value at an endpoint is replaced by the value a tiny step
    inside, which is enough for the integrable endpoint behaviour met here
    (logarithmic zeros, removable 0/0).
    """
    cfg = cfg or QuadratureConfig()
    if b < a:
        raise ValueError("integrate requires a <= b")
    if b == a:
        return 0.0

    def end_value(x, inward):
        y = float(f(x))
        if math.isfinite(y):
            return y
        return _eval(f, x + inward * (b - a) * 1e-12)

    fa = end_value(a, 1.0)
    fb = end_value(b, -1.0)
    m = 0.5 * (a + b)
    fm = _eval(f, m)
    whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0

    # per-panel tolerances are halved on refinement but never below rounding level
    floor = 64.0 * sys.float_info.epsilon * max(abs(whole), 1e-300)
    total = 0.0
    failed = False
    # explicit stack keeps deep refinement off the Python recursion limit
    stack = [(a, b, fa, fm, fb, whole, cfg.abs_tol, 0)]
    while stack:
        lo, hi, flo, fmid, fhi, s, tol, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        lm = 0.5 * (lo + mid)
        rm = 0.5 * (mid + hi)
        flm = _eval(f, lm)
        frm = _eval(f, rm)
        left = (mid - lo) * (flo + 4.0 * flm + fmid) / 6.0
        right = (hi - mid) * (fmid + 4.0 * frm + fhi) / 6.0
        delta = left + right - s
        if abs(delta) <= 15.0 * tol or depth >= cfg.max_depth or hi - lo < 1e-15 * max(1.0, abs(lo)):
            if abs(delta) > 15.0 * tol:
                failed = True
            total += left + right + delta / 15.0
        else:
            sub = max(0.5 * tol, floor)
            stack.append((mid, hi, fmid, frm, fhi, right, sub, depth + 1))
            stack.append((lo, mid, flo, flm, fmid, left, sub, depth + 1))
    if failed:
        raise QuadratureError("maximum depth reached", total)
    return total


def find_root(f, lo, hi, tol=1e-12):
    """Bisection on a sign change of ``f`` in ``[lo, hi]``."""
    flo = f(lo)
    fhi = f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if flo * fhi > 0:
        raise NoBracketError("no bracket on [%r, %r]" % (lo, hi))
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def incomplete_pole_integral(x, alpha):
    """Integral of t**(alpha-1)/(1-t) over [0, x] for 0 <= x < 1.

    Uses the series sum_j x**(alpha+j)/(alpha+j) for small x and the
    closed forms for integer alpha, which cover every case in use.
    """
    x = np.asarray(x, dtype=float)
    if np.any((x < 0) | (x >= 1)):
        raise ValueError("x must lie in [0, 1)")
    a = float(alpha)
    if a == round(a) and a >= 1:
        # -ln(1-x) minus the first (alpha-1) terms of its series
        out = -np.log1p(-x)
        for j in range(1, int(a)):
            out = out - x**j / j
        return out
    from scipy.special import hyp2f1
    return x**a / a * hyp2f1(1.0, a, a + 1.0, x)


def cumulative_trapezoid_from_right(y, x):
    """Return G[i] = integral of y over [x[i], x[-1]] by the trapezoid rule."""
    seg = 0.5 * (y[1:] + y[:-1]) * np.diff(x)
    out = np.zeros_like(y, dtype=float)
    out[:-1] = np.cumsum(seg[::-1])[::-1]
    return out
