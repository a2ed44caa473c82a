"""Initial tables, the lower/upper iteration operators and the schedule runner.

All operators work on weighted values.  A candidate for row l is the
weighted bound at (k_l, u); the runner keeps the better of the old value
and every candidate.  Candidates are evaluated for a whole array of u at
once: integrals with a moving lower limit u and fixed upper limit v are
cumulative integrals on one refined t-grid.

Candidates that an operator cannot produce at some u (outside its range,
or a weight leaving the admissible band) come back as -inf for lower
bounds and +inf for upper bounds, so a max/min simply ignores them.
"""

from dataclasses import dataclass, field, asdict
import logging
import math

import numpy as np
from scipy.integrate import trapezoid

from .classical import jr_F, jr_f, tilde_F
from .numerics import EXP_NEG_GAMMA, find_root, incomplete_pole_integral, cumulative_trapezoid_from_right
from .table import BoundTable, breve_weighted, build_kgrid, row_lookup, u_grid, weight

log = logging.getLogger(__name__)

REFINE = 4          # t-grid points per u sample step
LOWER_OPS = ("f1", "f2", "f3", "f4", "f_high")
UPPER_OPS = ("F1", "F2", "F3", "F4", "F5")
GAP_TOL = 1e-7


class InvariantViolation(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# initial tables

def init_tables(grid, u_step=0.01, u_max=10.0):
    """Starting rows built from the Jurkat-Richert pair and F~."""
    u = u_grid(u_step, 0.2, u_max)
    a = grid.alpha
    n = grid.n
    k = grid.levels
    k_n = k[n]
    E = EXP_NEG_GAMMA

    wF = np.zeros((grid.n_F, len(u)))
    wf = np.zeros((grid.n_f, len(u)))

    big = u >= 1
    row0 = np.full(len(u), 2.0)
    row0[big] = E * u[big] * jr_F(u[big])

    rown = np.zeros(len(u))
    mid = (u >= 2) & (u <= 4)
    rown[mid] = E * u[mid] * tilde_F(u[mid])
    hi = u > 4
    uh = u[hi]
    rown[hi] = E * (uh * jr_F(uh) + k_n * jr_F(uh - 1) / (a * uh ** (a - 1)))

    ge2 = u >= 2
    i2 = int(np.argmin(np.abs(u - 2.0)))
    for l in range(n + 1):
        c = k[l] / k_n
        row = np.empty(len(u))
        row[ge2] = (1 - c) * row0[ge2] + c * rown[ge2]
        if l == 0:
            row[~ge2] = row0[~ge2]
        else:
            # flat continuation below 2, then the k/u^alpha scaling below k^(1/alpha)
            flat = row[i2]
            lo = ~ge2
            row[lo] = flat * np.maximum(1.0, k[l] / u[lo] ** a)
        wF[l] = row

    f0 = E * u * jr_f(u)
    k1 = k[n + 1]
    f1 = np.zeros(len(u))
    uh = u[ge2]
    f1[ge2] = E * (uh * jr_f(uh) + k1 * jr_f(np.maximum(uh - 1, 1e-9)) / (a * uh ** (a - 1)))
    for l in range(n + 1):
        c = k[l] / k1
        wf[l] = np.where(big, (1 - c) * f0 + c * f1, 0.0)
    for l in range(n + 1, grid.n_f):
        wf[l] = f1
    return BoundTable(grid, u, wF, wf, 0)


def transfer_from_alpha2(table2, alpha, n=None):
    """Seed a table at exponent alpha from a converged alpha=2 table.

    The k=0 rows carry over unchanged (the weight at k=0 does not depend on
    alpha).  The top upper row uses S_{k,alpha} <= ln^(alpha-2)(xi^2) S_{kappa,2}
    with kappa = k/u^(alpha-2), which is admissible for u >= 2.
    """
    grid = build_kgrid(alpha, table2.grid.n if n is None else n)
    t = init_tables(grid, table2.step, float(table2.u[-1]))
    if not np.allclose(t.u, table2.u):
        raise ValueError("u samples differ between tables")
    u = t.u
    k = grid.levels
    nn = grid.n
    t.wF[0] = np.minimum(t.wF[0], table2.wF[0])
    t.wf[0] = np.maximum(t.wf[0], table2.wf[0])
    ge2 = u >= 2
    kappa = k[nn] / u[ge2] ** (alpha - 2)
    moved = breve_weighted(table2, "F", kappa, u[ge2])
    t.wF[nn, ge2] = np.minimum(t.wF[nn, ge2], moved)
    # interior rows from the refreshed end rows, same construction as the start
    i2 = int(np.argmin(np.abs(u - 2.0)))
    for l in range(1, nn):
        c = k[l] / k[nn]
        row = t.wF[l].copy()
        row[ge2] = np.minimum(row[ge2], (1 - c) * t.wF[0, ge2] + c * t.wF[nn, ge2])
        row[~ge2] = row[i2] * np.maximum(1.0, k[l] / u[~ge2] ** alpha)
        t.wF[l] = row
    k1 = k[nn + 1]
    for l in range(1, nn + 1):
        c = k[l] / k1
        t.wf[l] = np.maximum(t.wf[l], np.where(u >= 1, (1 - c) * t.wf[0] + c * t.wf[nn + 1], 0.0))
    return t


# ---------------------------------------------------------------------------
# helpers

def _arr(u):
    return np.atleast_1d(np.asarray(u, dtype=float))


def _out(vals, u):
    return float(vals[0]) if np.ndim(u) == 0 else vals.reshape(np.shape(u))


def _tgrid(table, lo, v, extra=()):
    hs = table.step / REFINE
    i0 = math.ceil(lo / hs - 1e-9)
    i1 = math.floor(v / hs + 1e-9)
    pts = [np.arange(i0, i1 + 1) * hs, np.asarray(extra, dtype=float), [lo, v]]
    t = np.unique(np.round(np.concatenate(pts), 11))
    return t[(t >= lo - 1e-12) & (t <= v + 1e-12)]


def _tail(t, y, q):
    """Integral of samples y(t) over [q, t[-1]] for each q (q must be nodes)."""
    G = cumulative_trapezoid_from_right(y, t)
    idx = np.searchsorted(t, np.round(q, 11))
    idx = np.clip(idx, 0, len(t) - 1)
    return G[idx]


def _lookup(table, kind, level, s):
    rows = table.wF if kind == "F" else table.wf
    direction = 1.0 if kind == "F" else -1.0
    return row_lookup(table, rows, level, np.asarray(s, dtype=float), direction,
                      None if kind == "F" else 0.0)


def k_shift(k_l, t, alpha):
    """k_l(t) = k_l (t-1)^alpha / (t^alpha - k_l)."""
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        d = t**alpha - k_l
        out = np.where(d > 0, k_l * (t - 1) ** alpha / np.where(d > 0, d, 1.0), np.inf)
    return out


def u_l_root(k_l, k_n, alpha):
    """First t > k_l^(1/alpha) with k_l(t) = k_n; 1 when k_l = 0; inf if none."""
    if k_l <= 0:
        return 1.0
    t0 = k_l ** (1.0 / alpha)
    ts = t0 * (1 + np.geomspace(1e-9, 60.0, 4000))
    g = k_shift(k_l, ts, alpha) - k_n
    below = np.nonzero(g <= 0)[0]
    if len(below) == 0:
        return math.inf
    j = below[0]
    if j == 0:
        return float(ts[0])
    return find_root(lambda x: float(k_shift(k_l, x, alpha)) - k_n, float(ts[j - 1]), float(ts[j]), 1e-10)


def u0_of(k_l, k_n, alpha):
    return max(min(3.0, u_l_root(k_l, k_n, alpha)), 2.0)


# ---------------------------------------------------------------------------
# lower-bound operators

def op_f1(table, level, u, v=10.0):
    """Buchstab step from v down to u with the shifted weight k_l(t)."""
    g = table.grid
    a = g.alpha
    if level > g.n + 1:
        raise ValueError("f1 applies to levels up to n+1")
    k = g.levels[level]
    k_n = g.k_n
    uq = _arr(u)
    out = np.full(uq.shape, -np.inf)
    u0 = u0_of(k, k_n, a)
    out[(uq >= 1) & (uq <= u0)] = 0.0
    sel = (uq > u0) & (uq < v)
    if np.any(sel):
        lo = float(uq[sel].min())
        t = _tgrid(table, lo, v, uq[sel])
        kt = k_shift(k, t, a)
        # the shifted weight must stay inside the upper-bound rows on [u, v]
        bad = np.maximum.accumulate((kt > k_n * (1 + 1e-12))[::-1])[::-1]
        with np.errstate(invalid="ignore"):
            y = (1 - k / t**a) / (t - 1) * breve_weighted(table, "F", np.minimum(kt, k_n), t - 1)
        y = np.where(bad, np.nan, y)
        top = float(_lookup(table, "f", level, v))
        val = top - _tail(t, y, uq[sel])
        out[sel] = np.where(np.isfinite(val), val, -np.inf)
    return _out(out, u)


def op_f2(table, level, u, v):
    """Lower bound splitting the primes in [w, z) by k_l ln^alpha p >= ln^alpha xi^2 / 2."""
    g = table.grid
    a = g.alpha
    k = g.levels[level]
    k_n = g.k_n
    uq = _arr(u)
    out = np.full(uq.shape, -np.inf)
    # 2k(1-1/t)^alpha grows with t; past k_n there is no upper row to use
    if 2 * k * (1 - 1 / v) ** a > k_n * (1 + 1e-12):
        return _out(out, u)
    sel = (uq > 1) & (uq < v)
    if np.any(sel):
        lo = float(uq[sel].min())
        c = (2 * k) ** (1.0 / a)
        t = _tgrid(table, lo, v, list(uq[sel]) + ([c] if lo < c < v else []))
        s = v - v / t
        kt = np.clip(2 * k * (1 - 1 / t) ** a, 0.0, k_n)
        with np.errstate(divide="ignore", invalid="ignore"):
            y1 = breve_weighted(table, "F", kt, s) / (t - 1)
        d1 = _tail(t, y1, uq[sel])
        with np.errstate(divide="ignore", invalid="ignore"):
            y2 = np.where(t >= c, (0.5 - k / t**a) / (t - 1), 0.0)
        d2 = _lookup(table, "F", 0, uq[sel]) * _tail(t, y2, np.maximum(uq[sel], min(c, v)))
        top = float(_lookup(table, "f", level, v))
        val = top - 0.5 * d1 - d2
        out[sel] = np.where(np.isfinite(val), val, -np.inf)
    return _out(out, u)


def op_f3(table, level, u):
    """Best chord between a lower and a higher row (S_k is linear in k)."""
    g = table.grid
    uq = _arr(u)
    out = np.full(uq.shape, -np.inf)
    top = g.n + 1
    if level <= 0 or level >= top:
        return _out(out, u)
    k = g.levels
    for h in range(level):
        lo_row = _lookup(table, "f", h, uq)
        for m in range(level + 1, top + 1):
            beta = (k[m] - k[level]) / (k[m] - k[h])
            cand = beta * lo_row + (1 - beta) * _lookup(table, "f", m, uq)
            out = np.maximum(out, cand)
    return _out(out, u)


def pole_integral(u, alpha):
    """Integral of t^(alpha-1)/(1-t) over [0, 1/u] for u > 1."""
    return incomplete_pole_integral(1.0 / np.asarray(u, dtype=float), alpha)


def op_f4(table, level, u):
    """Lower row from a higher row minus the extra prime weight it carries."""
    g = table.grid
    a = g.alpha
    uq = _arr(u)
    out = np.full(uq.shape, -np.inf)
    if g.levels[level] >= g.k_n:
        return _out(out, u)
    sel = uq > 1
    if np.any(sel):
        us = uq[sel]
        corr = _lookup(table, "F", 0, us) * pole_integral(us, a)
        best = np.full(us.shape, -np.inf)
        for h in range(level + 1, g.n_f):
            cand = _lookup(table, "f", h, us) - (g.levels[h] - g.levels[level]) * corr
            best = np.maximum(best, cand)
        out[sel] = best
    return _out(out, u)


def op_f_high(table, level, u, v_list=(4.0, 4.5, 5.0)):
    """High rows: every prime in [w, z) carries weight >= ln^alpha xi^2 / 2."""
    g = table.grid
    a = g.alpha
    if not g.n + 2 <= level <= g.n + 5:
        raise ValueError("f_high applies to levels n+2..n+5")
    k = g.levels[level]
    uq = _arr(u)
    out = _lookup(table, "f", level - 1, uq)
    v = (2 * k) ** (1.0 / a)
    if any(abs(v - x) < 1e-9 for x in v_list):
        sel = (uq > 1) & (uq < v)
        if np.any(sel):
            out[sel] = np.maximum(out[sel], _half_buchstab(table, uq[sel], v))
    return _out(out, u)


def _half_buchstab(table, us, v):
    """wf(0, v) - 1/2 int_u^v wF(0, v - v/t) / (t - 1) dt."""
    t = _tgrid(table, float(us.min()), v, us)
    with np.errstate(divide="ignore", invalid="ignore"):
        y = _lookup(table, "F", 0, v - v / t) / (t - 1)
    val = float(_lookup(table, "f", 0, v)) - 0.5 * _tail(t, y, us)
    return np.where(np.isfinite(val), val, -np.inf)


# ---------------------------------------------------------------------------
# upper-bound operators

def op_F1(table, level, u, v=10.0):
    """Upper Buchstab step; flat continuation below u0."""
    g = table.grid
    a = g.alpha
    if level > g.n:
        raise ValueError("F1 applies to levels up to n")
    k = g.levels[level]
    k_n = g.k_n
    uq = _arr(u)
    out = np.full(uq.shape, np.inf)
    u0 = u0_of(k, k_n, a)
    flat = (uq >= k ** (1.0 / a) - 1e-12) & (uq < u0)
    if np.any(flat):
        out[flat] = float(_lookup(table, "F", level, u0))
    sel = (uq >= u0) & (uq < v)
    if np.any(sel):
        lo = float(uq[sel].min())
        t = _tgrid(table, lo, v, uq[sel])
        kt = k_shift(k, t, a)
        bad = np.maximum.accumulate((kt > k_n * (1 + 1e-12))[::-1])[::-1]
        with np.errstate(invalid="ignore"):
            y = (1 - k / t**a) / (t - 1) * breve_weighted(table, "f", np.minimum(kt, k_n), t - 1, top=g.n)
        y = np.where(bad, np.nan, y)
        top = float(_lookup(table, "F", level, v))
        val = top - _tail(t, y, uq[sel])
        out[sel] = np.where(np.isfinite(val), val, np.inf)
    return _out(out, u)


def lower_mass(table, u, m=400):
    """int_0^{min(1,1/u)} t^(alpha-1) wf(0, u(1-t)) / (1-t) dt for each u."""
    a = table.grid.alpha
    uq = _arr(u)
    top = np.minimum(1.0, 1.0 / uq)
    x = np.linspace(0.0, 1.0, m + 1)
    tt = top[:, None] * x[None, :]
    s = uq[:, None] * (1 - tt)
    with np.errstate(divide="ignore", invalid="ignore"):
        y = tt ** (a - 1) * _lookup(table, "f", 0, s) / (1 - tt)
    y = np.where(np.isfinite(y), y, 0.0)
    return trapezoid(y, x, axis=1) * top


def op_F2(table, level, u, mass=None):
    """Upper row from a higher row minus a lower bound for the extra weight."""
    g = table.grid
    uq = _arr(u)
    out = np.full(uq.shape, np.inf)
    if level >= g.n:
        return _out(out, u)
    c = lower_mass(table, uq) if mass is None else mass
    for h in range(level + 1, g.n + 1):
        cand = _lookup(table, "F", h, uq) - (g.levels[h] - g.levels[level]) * c
        out = np.minimum(out, cand)
    return _out(out, u)


def k_profile(a_par, t, v, alpha, k_cap, form):
    """The two weight profiles k(a, t) used by F3, capped at k_{n+1}."""
    if form == "reciprocal_min":
        k = (t - 1) ** alpha / a_par
    elif form == "shifted_ratio":
        k = a_par / ((1 - 1 / t) ** alpha + a_par / v**alpha)
    else:
        raise ValueError("unknown k(a,t) form %r" % form)
    return np.minimum(k, k_cap)


def op_F3(table, level, u, v, a_par, form):
    """Upper bound that moves part of the k-weight onto primes in [w, z)."""
    g = table.grid
    al = g.alpha
    if level > g.n:
        raise ValueError("F3 applies to levels up to n")
    kh = g.levels[level]
    uq = _arr(u)
    out = np.full(uq.shape, np.inf)
    tmin = v / (v - 1)
    sel = (uq > tmin) & (uq < v)
    if not np.any(sel):
        return _out(out, u)
    lo = float(uq[sel].min())
    t = _tgrid(table, lo, v, uq[sel])
    kat = k_profile(a_par, t, v, al, g.levels[g.n + 1], form)
    kt = np.minimum.accumulate(kat[::-1])[::-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        num = 1 - kat / t**al
        R = num / (1 - 1 / t) ** al
        kappa = kt / R
        bad = (num <= 0) | ~np.isfinite(kappa)
        wlow = breve_weighted(table, "f", np.where(bad, 0.0, kappa), t - 1)
        y1 = np.where(bad, np.nan, num / (t - 1) * wlow)
        x = t / (v * (t - 1))
        H = (1 - 1 / t) ** (al - 1) * incomplete_pole_integral(np.clip(x, 0, 1 - 1e-15), al)
        y2 = (kt - kh) / t * _lookup(table, "F", 0, t - 1) * H
    us = uq[sel]
    ok = kt[np.searchsorted(t, np.round(us, 11))] >= kh - 1e-12
    top = float(_lookup(table, "F", level, v))
    val = top - _tail(t, y1, us) + _tail(t, y2, us)
    val = np.where(ok & np.isfinite(val), val, np.inf)
    out[sel] = val
    return _out(out, u)


def op_F4(table, level, u):
    """Best chord of upper rows around k_l."""
    g = table.grid
    uq = _arr(u)
    out = np.full(uq.shape, np.inf)
    if level <= 0 or level >= g.n:
        return _out(out, u)
    k = g.levels
    for h in range(level):
        lo_row = _lookup(table, "F", h, uq)
        for m in range(level + 1, g.n + 1):
            beta = (k[m] - k[level]) / (k[m] - k[h])
            out = np.minimum(out, beta * lo_row + (1 - beta) * _lookup(table, "F", m, uq))
    return _out(out, u)


def op_F5(table, level, u):
    """Below u1 = k_l^(1/alpha) scale the value at u1 by k_l/u^alpha."""
    g = table.grid
    a = g.alpha
    k = g.levels[level]
    uq = _arr(u)
    out = np.full(uq.shape, np.inf)
    if k <= 0:
        return _out(out, u)
    u1 = k ** (1.0 / a)
    sel = uq < u1
    if np.any(sel):
        out[sel] = k / uq[sel] ** a * float(_lookup(table, "F", level, u1))
    return _out(out, u)


# ---------------------------------------------------------------------------
# schedule

@dataclass
class ScheduleStep:
    operator_id: str
    v_list: tuple = ()
    cycles_per_level: int = 4
    sweep_cycles: int = 8
    sweep_direction: str = "descending"

    def __post_init__(self):
        if self.operator_id not in LOWER_OPS + UPPER_OPS + ("f5", "f6", "f7", "f8"):
            raise ValueError("unknown operator %r" % self.operator_id)
        if self.operator_id in ("f1", "f2", "f_high", "F1", "F3", "f5", "f6", "f7") and not self.v_list:
            raise ValueError("operator %s needs a v_list" % self.operator_id)
        if self.cycles_per_level < 1 or self.sweep_cycles < 0:
            raise ValueError("cycle counts must be positive")
        if self.sweep_direction not in ("descending", "ascending"):
            raise ValueError("sweep_direction must be descending or ascending")
        self.v_list = tuple(float(x) for x in self.v_list)


def default_schedule(sweeps=8, cycles=4, direction="descending"):
    spec = [("f1", (10,)), ("f2", (3, 3.5, 4, 4.5, 5)), ("f3", ()), ("f4", ()),
            ("f_high", (4, 4.5, 5)), ("F1", (10,)), ("F2", ()),
            ("F3", (3, 2.75, 2.5, 2.25)), ("F4", ()), ("F5", ())]
    return [ScheduleStep(op, v, cycles, sweeps, direction) for op, v in spec]


@dataclass
class BootstrapSpec:
    alpha_sequence: tuple = (2.0, 3.5, 4.0, 2.0)
    transfer_rule: str = "kappa=k_n/u^(alpha-2)"
    sweeps: tuple = (8, 4, 4, 8)
    directions: tuple = ("descending", "ascending", "ascending", "descending")
    a_step: float = 0.5
    u_envelope: bool = True
    k_monotone: bool = True
    order: str = "f_then_F"

    def __post_init__(self):
        seq = tuple(float(x) for x in self.alpha_sequence)
        if not seq or seq[0] != 2 or seq[-1] != 2:
            raise ValueError("alpha sequence must start and end at 2")
        if len(self.sweeps) != len(seq) or len(self.directions) != len(seq):
            raise ValueError("one sweep count and direction per alpha phase")
        if self.order not in ("f_then_F", "F_then_f"):
            raise ValueError("order must be f_then_F or F_then_f")
        self.alpha_sequence = seq


@dataclass
class IterationContext:
    """Knobs shared by the level updates of one phase."""

    steps: list
    a_step: float = 0.5
    u_envelope: bool = True
    k_monotone: bool = True
    order: str = "f_then_F"
    extra_lower: dict = field(default_factory=dict)

    def v_list(self, op):
        for s in self.steps:
            if s.operator_id == op:
                return s.v_list
        return None

    def has(self, op):
        return any(s.operator_id == op for s in self.steps)


def _a_grid(k_n, step):
    return np.arange(1.0, k_n + 1e-9, step)


def lower_candidates(table, level, ctx):
    g = table.grid
    u = table.u
    best = table.wf[level].copy()
    n = g.n
    if level <= n + 1:
        if ctx.has("f1"):
            for v in ctx.v_list("f1"):
                best = np.maximum(best, op_f1(table, level, u, v))
        if ctx.has("f2"):
            for v in ctx.v_list("f2"):
                best = np.maximum(best, op_f2(table, level, u, v))
        if ctx.has("f3"):
            best = np.maximum(best, op_f3(table, level, u))
        if ctx.has("f4"):
            best = np.maximum(best, op_f4(table, level, u))
    elif ctx.has("f_high"):
        best = np.maximum(best, op_f_high(table, level, u, ctx.v_list("f_high")))
    for op, fn in ctx.extra_lower.items():
        if ctx.has(op):
            best = np.maximum(best, fn(table, level, ctx))
    return best


def upper_candidates(table, level, ctx):
    g = table.grid
    a = g.alpha
    u = table.u
    k = g.levels[level]
    best = table.wF[level].copy()
    above = u >= k ** (1.0 / a) - 1e-12
    cand = np.full(len(u), np.inf)
    if ctx.has("F1"):
        for v in ctx.v_list("F1"):
            cand = np.minimum(cand, op_F1(table, level, u, v))
    if ctx.has("F2"):
        cand = np.minimum(cand, op_F2(table, level, u))
    if ctx.has("F3"):
        for v in ctx.v_list("F3"):
            for ap in _a_grid(g.k_n, ctx.a_step):
                for form in ("reciprocal_min", "shifted_ratio"):
                    cand = np.minimum(cand, op_F3(table, level, u, v, ap, form))
    if ctx.has("F4"):
        cand = np.minimum(cand, op_F4(table, level, u))
    best = np.where(above, np.minimum(best, cand), best)
    return best


def _finish_upper_row(table, level, row, ctx):
    g = table.grid
    a = g.alpha
    u = table.u
    k = g.levels[level]
    u1 = k ** (1.0 / a)
    above = u >= u1 - 1e-12
    if ctx.u_envelope:
        # S_k(z) <= S_k(z1) for z1 < z once u >= k^(1/alpha): wF non-decreasing in u there
        seg = row[above]
        row[above] = np.minimum.accumulate(seg[::-1])[::-1]
    if ctx.has("F5") and k > 0:
        tmp = table.copy()
        tmp.wF[level] = row
        f5 = op_F5(tmp, level, u)
        row = np.where(~above, np.minimum(row, f5), row)
    return row


def _finish_lower_row(table, level, row, ctx):
    g = table.grid
    a = g.alpha
    u = table.u
    if ctx.u_envelope:
        above = u >= g.levels[level] ** (1.0 / a) - 1e-12
        seg = row[above]
        row[above] = np.maximum.accumulate(seg)
    if ctx.k_monotone and level > 0:
        row = np.maximum(row, table.wf[level - 1])
    return np.maximum(row, 0.0)


def update_level(table, level, ctx):
    """One cycle at one level: new lower row, then new upper row (or reversed)."""
    g = table.grid
    new = table.copy()

    def do_lower(src):
        row = lower_candidates(src, level, ctx)
        return _finish_lower_row(src, level, np.maximum(row, src.wf[level]), ctx)

    def do_upper(src):
        row = upper_candidates(src, level, ctx)
        row = _finish_upper_row(src, level, np.minimum(row, src.wF[level]), ctx)
        if ctx.k_monotone and level < g.n:
            row = np.minimum(row, src.wF[level + 1])
        return row

    steps = ["f", "F"] if ctx.order == "f_then_F" else ["F", "f"]
    for s in steps:
        if s == "f":
            new.wf[level] = do_lower(new)
        elif level <= g.n:
            new.wF[level] = do_upper(new)
    if level <= g.n:
        # rounding-level crossings where both bounds meet at large u
        new.wf[level] = np.minimum(new.wf[level], np.maximum(new.wF[level], new.wf[level] - GAP_TOL))
    check_table(new, level)
    return new


def check_table(table, level=None):
    g = table.grid
    rows = range(g.n_F) if level is None else ([level] if level <= g.n else [])
    for l in rows:
        F = table.wF[l]
        f = table.wf[l]
        if not (np.all(np.isfinite(F)) and np.all(np.isfinite(f))):
            raise InvariantViolation("non-finite entry at k=%g" % g.levels[l])
        gap = f - F
        if np.any(gap > GAP_TOL * np.maximum(1.0, np.abs(F))):
            i = int(np.argmax(gap))
            raise InvariantViolation("wf > wF at k=%g u=%g (%.6f > %.6f)"
                                     % (g.levels[l], table.u[i], f[i], F[i]))


def run_phase(table, steps, ctx=None, sweeps=None, direction=None, cycles=None, progress=None):
    g = table.grid
    ctx = ctx or IterationContext(list(steps))
    sweeps = max(s.sweep_cycles for s in steps) if sweeps is None else sweeps
    cycles = max(s.cycles_per_level for s in steps) if cycles is None else cycles
    direction = steps[0].sweep_direction if direction is None else direction
    levels = list(range(g.n_f))
    if direction == "descending":
        levels = levels[::-1]
    for sweep in range(sweeps):
        before = (table.wF.copy(), table.wf.copy())
        for l in levels:
            for _ in range(cycles):
                table = update_level(table, l, ctx)
                table.iteration_index += 1
        change = max(np.max(np.abs(table.wF - before[0])), np.max(np.abs(table.wf - before[1])))
        table.meta.setdefault("sweep_change", []).append(float(change))
        log.info("alpha=%g sweep %d: max change %.3e", g.alpha, sweep + 1, change)
        if progress:
            progress(table, sweep)
    return table


def run_schedule(table, schedule, bootstrap=None, on_phase=None):
    """Run the schedule through the alpha sequence; returns the final alpha=2 table.

    ``on_phase(index, alpha, table)`` is called after every phase.
    """
    bootstrap = bootstrap or BootstrapSpec()
    if table.grid.alpha != 2:
        raise ValueError("the schedule starts from an alpha=2 table")
    base = table
    for i, alpha in enumerate(bootstrap.alpha_sequence):
        ctx = IterationContext(list(schedule), bootstrap.a_step, bootstrap.u_envelope,
                               bootstrap.k_monotone, bootstrap.order)
        sweeps = bootstrap.sweeps[i]
        direction = bootstrap.directions[i]
        if alpha == 2:
            base = run_phase(base, schedule, ctx, sweeps, direction)
            out = base
        else:
            t = transfer_from_alpha2(base, alpha)
            t = run_phase(t, schedule, ctx, sweeps, direction)
            base = base.copy()
            base.wF[0] = np.minimum(base.wF[0], t.wF[0])
            base.wf[0] = np.maximum(base.wf[0], t.wf[0])
            out = t
        if on_phase:
            on_phase(i, alpha, out)
    return base


def schedule_to_dict(steps, bootstrap):
    return {"steps": [asdict(s) for s in steps], "bootstrap": asdict(bootstrap)}


def schedule_from_dict(doc):
    allowed = {"steps", "bootstrap"}
    extra = set(doc) - allowed
    if extra:
        raise ValueError("unknown schedule keys: %s" % sorted(extra))
    steps = [ScheduleStep(**s) for s in doc.get("steps", [])] or default_schedule()
    boot = BootstrapSpec(**doc.get("bootstrap", {}))
    return steps, boot
