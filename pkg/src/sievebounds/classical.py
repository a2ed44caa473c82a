"""Buchstab-type functions h, w, the Jurkat-Richert pair F, f and the
Selberg-derived upper bound F~ on [2, 4].

Every delay equation is rewritten as G(u) = G(seam) + int D(t) dt, where D
only looks one unit back.  The grid step divides 1, so each unit panel
integrates history that is already sampled on the same grid.  Values
between samples come from cubic Hermite interpolation of G using the
known derivative D, which keeps the interpolation error at the 1e-14
level for the default step.
"""

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np
from scipy.integrate import cumulative_simpson

from .numerics import EXP_GAMMA

DEFAULT_STEP = 1.0 / 4096
DEFAULT_UMAX = 24.0


@dataclass(frozen=True)
class DelayOdeTable:
    """Samples of G on u_min + i*step together with G' at the same points."""

    u_min: float
    u_max: float
    step: float
    values: np.ndarray
    derivs: np.ndarray

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("step must be positive")
        n = int(math.floor((self.u_max - self.u_min) / self.step + 1e-9)) + 1
        if len(self.values) != n or len(self.derivs) != n:
            raise ValueError("table length does not match its range")
        if not (np.all(np.isfinite(self.values)) and np.all(np.isfinite(self.derivs))):
            raise ValueError("non-finite table entry")

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        if np.any(u < self.u_min - 1e-12) or np.any(u > self.u_max + 1e-12):
            raise ValueError("u outside tabulated range [%g, %g]" % (self.u_min, self.u_max))
        x = (u - self.u_min) / self.step
        i = np.clip(np.floor(x).astype(int), 0, len(self.values) - 2)
        s = x - i
        h = self.step
        y0, y1 = self.values[i], self.values[i + 1]
        d0, d1 = self.derivs[i] * h, self.derivs[i + 1] * h
        s2 = s * s
        s3 = s2 * s
        return ((2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * d0
                + (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * d1)


def _grid(step, u_max):
    per_unit = int(round(1.0 / step))
    if abs(per_unit * step - 1.0) > 1e-12:
        raise ValueError("step must divide 1")
    n = int(round(u_max * per_unit))
    return np.arange(n + 1) / per_unit, per_unit


def _march(u, per_unit, G, D, start_unit, delayed):
    """Fill G on [start_unit, end] panel by panel.

    ``delayed(j)`` returns the derivative at grid index j, computed from
    already-filled samples at index j - per_unit.
    """
    last = len(u) - 1
    m = start_unit * per_unit
    while m < last:
        hi = min(m + per_unit, last)
        idx = np.arange(m, hi + 1)
        D[idx] = delayed(idx)
        G[idx] = G[m] + cumulative_simpson(D[idx], x=u[idx], initial=0.0)
        m = hi


@lru_cache(maxsize=None)
def _h_table(step=DEFAULT_STEP, u_max=DEFAULT_UMAX):
    # G = h(u)/u for u >= 1, with G' = -h(u-1)/u^2
    u, pu = _grid(step, u_max)
    G = np.zeros_like(u)
    D = np.zeros_like(u)
    lo = u <= 1
    G[lo] = 1.0
    mid = (u > 1) & (u <= 2)
    G[mid] = 2.0 - np.log(u[mid]) - 1.0 / u[mid]
    seg = u[(u >= 1) & (u <= 2)]
    D[(u >= 1) & (u <= 2)] = -(seg - 1.0) / seg**2

    def delayed(j):
        t1 = u[j - pu]
        return -(t1 * G[j - pu]) / u[j] ** 2

    _march(u, pu, G, D, 2, delayed)
    # h on [0,1] is u itself; the table stores h/u = 1 there with zero slope
    return DelayOdeTable(0.0, u[-1], step, G, D)


@lru_cache(maxsize=None)
def _w_table(step=DEFAULT_STEP, u_max=DEFAULT_UMAX):
    # G = u w(u), G' = w(u-1), starting from G = 1 on [1, 2]
    u, pu = _grid(step, u_max)
    u = u[pu:]
    G = np.ones_like(u)
    D = np.zeros_like(u)

    def delayed(j):
        return G[j - pu] / u[j - pu]

    _march(u, pu, G, D, 1, delayed)
    return DelayOdeTable(1.0, u[-1], step, G, D)


@lru_cache(maxsize=None)
def _jr_tables(step=DEFAULT_STEP, u_max=DEFAULT_UMAX):
    # GF = u F(u), GF' = f(u-1); Gf = u f(u), Gf' = F(u-1); both on u >= 1
    u, pu = _grid(step, u_max)
    u = u[pu:]
    c = 2.0 * EXP_GAMMA
    GF = np.full_like(u, c)
    DF = np.zeros_like(u)
    Gf = np.zeros_like(u)
    Df = np.zeros_like(u)
    i2, i3, i4 = pu, 2 * pu, 3 * pu
    sl = slice(i2, min(i4, len(u) - 1) + 1)
    Gf[sl] = c * np.log(u[sl] - 1.0)
    Df[sl] = c / (u[sl] - 1.0)
    # derivative of uF on [1,3] is f(u-1) = 0 since u-1 <= 2
    last = len(u) - 1
    m_F, m_f = i3, i4
    while m_F < last or m_f < last:
        if m_F < last:
            hi = min(m_F + pu, last)
            idx = np.arange(m_F, hi + 1)
            DF[idx] = Gf[idx - pu] / u[idx - pu]
            GF[idx] = GF[m_F] + cumulative_simpson(DF[idx], x=u[idx], initial=0.0)
            m_F = hi
        if m_f < last:
            hi = min(m_f + pu, last)
            idx = np.arange(m_f, hi + 1)
            Df[idx] = GF[idx - pu] / u[idx - pu]
            Gf[idx] = Gf[m_f] + cumulative_simpson(Df[idx], x=u[idx], initial=0.0)
            m_f = hi
    return (DelayOdeTable(1.0, u[-1], step, GF, DF),
            DelayOdeTable(1.0, u[-1], step, Gf, Df))


def _scalar_or_array(x, like):
    return float(x[0]) if np.ndim(like) == 0 else x.reshape(np.shape(like))


def buchstab_h(u, step=DEFAULT_STEP):
    """h(u): u on [0,1], 2u - u ln u - 1 on (1,2], then (h/u)' = -h(u-1)/u^2."""
    ua = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any(ua < 0):
        raise ValueError("h(u) needs u >= 0")
    out = np.empty_like(ua)
    lo = ua <= 1
    mid = (ua > 1) & (ua <= 2)
    hi = ua > 2
    out[lo] = ua[lo]
    out[mid] = 2 * ua[mid] - ua[mid] * np.log(ua[mid]) - 1
    if np.any(hi):
        out[hi] = ua[hi] * _h_table(step)(ua[hi])
    return _scalar_or_array(out, u)


def buchstab_w(u, step=DEFAULT_STEP):
    """w(u): 1/u on [1,2], then (u w(u))' = w(u-1)."""
    ua = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any(ua < 1):
        raise ValueError("w(u) needs u >= 1")
    out = np.empty_like(ua)
    lo = ua <= 2
    out[lo] = 1.0 / ua[lo]
    if np.any(~lo):
        out[~lo] = _w_table(step)(ua[~lo]) / ua[~lo]
    return _scalar_or_array(out, u)


def jr_F(u, step=DEFAULT_STEP):
    """Jurkat-Richert upper function; 2e^gamma/u on (0, 3]."""
    ua = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any(ua <= 0):
        raise ValueError("F(u) needs u > 0")
    out = 2.0 * EXP_GAMMA / ua
    hi = ua > 3
    if np.any(hi):
        out[hi] = _jr_tables(step)[0](ua[hi]) / ua[hi]
    return _scalar_or_array(out, u)


def jr_f(u, step=DEFAULT_STEP):
    """Jurkat-Richert lower function; 0 on (0, 2], 2e^gamma ln(u-1)/u on [2, 4]."""
    ua = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any(ua <= 0):
        raise ValueError("f(u) needs u > 0")
    out = np.zeros_like(ua)
    mid = (ua > 2) & (ua <= 4)
    out[mid] = 2.0 * EXP_GAMMA * np.log(ua[mid] - 1.0) / ua[mid]
    hi = ua > 4
    if np.any(hi):
        out[hi] = _jr_tables(step)[1](ua[hi]) / ua[hi]
    return _scalar_or_array(out, u)


def tilde_F(u):
    """Selberg-type upper bound on [2, 4] built from h(u/2)."""
    ua = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any((ua < 2 - 1e-12) | (ua > 4 + 1e-12)):
        raise ValueError("tilde_F is defined on [2, 4]")
    x = 1.0 - 2.0 / ua
    poly = x - 0.5 * x**2 - x**3 / 6.0
    out = EXP_GAMMA * (4.0 * buchstab_h(ua / 2.0) / ua**2
                       + (2.0 + np.log(ua / 2.0)) * (2.0 / ua) * poly)
    return _scalar_or_array(out, u)
