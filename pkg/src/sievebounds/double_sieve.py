"""Double-sieve lower operators for alpha = 2.

The double sieve bounds S_0(A_pq; P(q), p) by the constant
4 F(0, 2) taken from the finished single-sieve table.  In weighted units
that constant is

    C4 = e^-gamma * 4 F(0, 2) = 2 * wF(0, 2)

and it is frozen when the context is built.  Each operator below returns a
weighted lower-bound candidate for one row (-inf where it does not apply);
the run reuses the single-sieve level updates with these as extra lower
candidates.
"""

from dataclasses import dataclass, replace
import logging
import math

import numpy as np

from . import part1
from .numerics import EXP_GAMMA
from .part1 import IterationContext, ScheduleStep, _arr, _lookup, _out, _tail, _tgrid, k_shift
from .table import BoundTable, breve_weighted

log = logging.getLogger(__name__)

F6_V = (3.0, 4.0, 4.5, 5.0, 5.5)
F5_V = (10.0, 5.0, 4.0, 3.0)
F7_V = (3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0)
REFERENCE_WF_0_2 = 1.876697


@dataclass
class DoubleSieveContext:
    part1_table: BoundTable
    F2_0_2: float
    working_table: BoundTable

    def __post_init__(self):
        if self.part1_table.grid.alpha != 2:
            raise ValueError("the double sieve is set up for alpha=2 only")
        if not self.F2_0_2 > 0:
            raise ValueError("F(0,2) must be positive")

    @classmethod
    def from_part1(cls, table):
        if table.grid.alpha != 2:
            raise ValueError("the double sieve is set up for alpha=2 only")
        wF02 = table.cell(0.0, 2.0, "F")
        return cls(table.copy(), wF02 * EXP_GAMMA / 2.0, table.copy())

    @property
    def c4(self):
        """e^-gamma 4 F(0, 2): the weighted double-sieve constant."""
        return 4.0 * self.F2_0_2 / EXP_GAMMA

    @property
    def seed_weighted(self):
        """e^-gamma 2 F(0, 2), the weighted k=0 value at u=2 of the seed table."""
        return self.c4 / 2.0

    def with_table(self, table):
        return replace(self, working_table=table)


def _j_integral(x):
    """Integral of t/(1-t) over [0, x]: -x - ln(1-x)."""
    return -x - np.log1p(-x)


# ---------------------------------------------------------------------------

def op_f5_ds(ctx, level, u, v):
    """Buchstab step where a shifted weight past k_n falls back on C4."""
    table = ctx.working_table
    g = table.grid
    k = float(g.levels[level])
    k_n = g.k_n
    c4 = ctx.c4
    uq = _arr(u)
    out = np.full(uq.shape, -np.inf)
    # t - 1 has to stay on the table for the row-n lookup
    lo_ok = max(math.sqrt(k), 1.0 + float(table.u[0]))
    sel = (uq > lo_ok * (1 + 1e-12)) & (uq < v)
    if not np.any(sel):
        return _out(out, u)
    lo = float(uq[sel].min())
    # the integrand climbs steeply just above sqrt(k); resolve that stretch finely
    steep = np.linspace(lo_ok, lo_ok + 0.1, 801) if k > 0 else ()
    t = _tgrid(table, lo, v, np.concatenate([uq[sel], steep]))
    s = t - 1
    kt = k_shift(k, t, 2.0)
    inside = kt <= k_n
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        f_in = breve_weighted(table, "F", np.minimum(kt, k_n), s)
        f21 = _lookup(table, "F", g.n, s)
        f22 = (s + kt / (2 * s)) * c4
        f23 = (kt - k_n) / (2 * t**2) * s * c4
        fb = np.where(inside, f_in, np.minimum(f21, f22) + f23)
        y = (1 - k / t**2) / s * fb
    top = float(_lookup(table, "f", level, v))
    val = top - _tail(t, y, uq[sel])
    out[sel] = np.where(np.isfinite(val), val, -np.inf)
    return _out(out, u)


def op_f6_ds(ctx, level, u, v):
    """High row k = v^2/2: half weight below w^sqrt2, full weight above it."""
    table = ctx.working_table
    g = table.grid
    k = float(g.levels[level])
    if not any(abs(v - x) < 1e-9 for x in F6_V):
        raise ValueError("v=%g is not one of %s" % (v, F6_V))
    if level <= g.n or abs(k - v * v / 2) > 1e-9:
        raise ValueError("row %d (k=%g) does not match v=%g" % (level, k, v))
    c4 = ctx.c4
    u1 = v / math.sqrt(2.0)
    uq = _arr(u)
    out = np.full(uq.shape, -np.inf)
    sel = (uq > 1) & (uq <= v)
    if not np.any(sel):
        return _out(out, u)
    us = uq[sel]
    q = np.maximum(us, u1)
    t = _tgrid(table, float(q.min()), v, q)
    with np.errstate(divide="ignore", invalid="ignore"):
        y = _lookup(table, "F", 0, v - v / t) / (2 * (t - 1))
    upper = _tail(t, y, q)
    # primes between z and w^sqrt2 carry the C4 majorant
    ua = np.minimum(us, u1)
    cap = c4 * (0.5 * math.log(v / u1) * (u1 - ua) + (u1 - ua) - ua * np.log(u1 / ua))
    val = float(_lookup(table, "f", 0, v)) - upper - cap
    out[sel] = np.where(np.isfinite(val), val, -np.inf)
    return _out(out, u)


def op_f7_ds(ctx, u, v):
    """k = 0 row: half-Buchstab step plus the C4 term for the primes in [w, z)."""
    table = ctx.working_table
    c4 = ctx.c4
    uq = _arr(u)
    out = np.full(uq.shape, -np.inf)
    if v < 3:
        raise ValueError("v must be at least 3")
    sel = (uq > 1) & (uq <= v)
    if not np.any(sel):
        return _out(out, u)
    us = uq[sel]
    t = _tgrid(table, float(us.min()), v, us)
    with np.errstate(divide="ignore", invalid="ignore"):
        y = _lookup(table, "F", 0, v - v / t) / (2 * (t - 1))
    val = (float(_lookup(table, "f", 0, v)) - _tail(t, y, us)
           - us * 0.5 * np.log(v / us) * c4)
    out[sel] = np.where(np.isfinite(val), val, -np.inf)
    return _out(out, u)


def op_f8_ds(ctx, u, donor):
    """k = 0 row from row ``donor`` minus its prime-square weight.

    Small q use the row-0 upper bound, q past z1 use C4; the split 1/u1
    is where the two integrands cross, clipped to [0, 1/u].
    """
    table = ctx.working_table
    g = table.grid
    k = float(g.levels[donor])
    if not 0 < k <= g.k_n * (1 + 1e-12):
        raise ValueError("donor row must have 0 < k <= k_n")
    c4 = ctx.c4
    uq = _arr(u)
    out = np.full(uq.shape, -np.inf)
    sel = uq > 0
    us = uq[sel]
    wF0 = _lookup(table, "F", 0, us)
    r = wF0 / us / c4
    x = np.clip(1.0 - r, 0.0, np.minimum(1.0 / us, 1.0 - 1e-12))
    val = (_lookup(table, "f", donor, us) - wF0 * k * _j_integral(x)
           - us * c4 * k * (1.0 / us**2 - x**2) / 2)
    out[sel] = np.where(np.isfinite(val), val, -np.inf)
    return _out(out, u)


# ---------------------------------------------------------------------------

def _extra_ops(ds):
    g = ds.working_table.grid

    def f5(table, level, ictx):
        c = ds.with_table(table)
        best = np.full(len(table.u), -np.inf)
        for v in ictx.v_list("f5"):
            best = np.maximum(best, op_f5_ds(c, level, table.u, v))
        return best

    def f6(table, level, ictx):
        best = np.full(len(table.u), -np.inf)
        if level <= g.n:
            return best
        v = math.sqrt(2 * g.levels[level])
        if any(abs(v - x) < 1e-9 for x in ictx.v_list("f6")):
            best = op_f6_ds(ds.with_table(table), level, table.u, v)
        return best

    def f7(table, level, ictx):
        best = np.full(len(table.u), -np.inf)
        if level != 0:
            return best
        c = ds.with_table(table)
        for v in ictx.v_list("f7"):
            best = np.maximum(best, op_f7_ds(c, table.u, v))
        return best

    def f8(table, level, ictx):
        best = np.full(len(table.u), -np.inf)
        if level != 0:
            return best
        c = ds.with_table(table)
        for d in range(1, g.n + 1):
            best = np.maximum(best, op_f8_ds(c, table.u, d))
        return best

    return {"f5": f5, "f6": f6, "f7": f7, "f8": f8}


def default_double_schedule(sweeps=4, cycles=4):
    steps = part1.default_schedule(sweeps, cycles, "ascending")
    extra = [("f5", F5_V), ("f6", F6_V), ("f7", F7_V), ("f8", ())]
    return steps + [ScheduleStep(op, v, cycles, sweeps, "ascending") for op, v in extra]


def run_double_sieve(ctx, schedule=None, sweeps=None, cycles=None, a_step=0.5, progress=None):
    """Iterate the level updates with the double-sieve candidates added.

    Starts from ``ctx.working_table`` (normally the single-sieve result)
    and sweeps k from 0 up to the top row.
    """
    table = ctx.working_table
    if table.grid.alpha != 2:
        raise ValueError("the double sieve is set up for alpha=2 only")
    schedule = schedule if schedule is not None else default_double_schedule()
    sweeps = max(s.sweep_cycles for s in schedule) if sweeps is None else sweeps
    cycles = max(s.cycles_per_level for s in schedule) if cycles is None else cycles
    if sweeps == 0 or cycles == 0:
        return table.copy()
    ictx = IterationContext(list(schedule), a_step, extra_lower=_extra_ops(ctx))
    out = part1.run_phase(table.copy(), schedule, ictx, sweeps, "ascending", cycles, progress)
    out.meta["double_sieve"] = {"F2_0_2": ctx.F2_0_2, "c4": ctx.c4, "sweeps": sweeps,
                                "cycles": cycles}
    ctx.working_table = out
    return out
