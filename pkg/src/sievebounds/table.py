"""k-grid, sampled bound tables and beta interpolation between k levels.

Tables hold weighted values

    wF(k, u) = e^-gamma (u + k / (alpha u^(alpha-1))) F(k, u)

and the same for f.  Rows 0..n carry both bounds, rows n+1..n+5 only the
lower bound.  Lookups between u samples are linear with a one-sided
correction (up for wF, down for wf) sized by the local second difference.
"""

from dataclasses import dataclass, field, replace
import io
import json

import numpy as np


@dataclass(frozen=True)
class KGrid:
    alpha: float
    n: int
    levels: np.ndarray

    @property
    def k_n(self):
        return float(self.levels[self.n])

    @property
    def n_F(self):
        return self.n + 1

    @property
    def n_f(self):
        return self.n + 6

    def weight(self, k, u):
        return weight(self.alpha, k, u)


def weight(alpha, k, u):
    u = np.asarray(u, dtype=float)
    return u + np.asarray(k, dtype=float) / (alpha * u ** (alpha - 1.0))


def build_kgrid(alpha, n=16):
    if alpha < 2:
        raise ValueError("alpha must be >= 2")
    if n < 2:
        raise ValueError("n must be >= 2")
    a = float(alpha)
    k_n = 2.0**a
    inner = k_n * np.arange(n + 1) / n
    k_n1 = min(3.0**a / 2, k_n / (k_n / 10.0**a + 0.9**a))
    high = [k_n1] + [x**a / 2 for x in (4.0, 4.5, 5.0, 5.5)]
    levels = np.concatenate([inner, high])
    if np.any(np.diff(levels) <= 0):
        raise ValueError("k levels are not strictly increasing for alpha=%g" % a)
    return KGrid(a, int(n), levels)


@dataclass(frozen=True)
class BetaSplit:
    k_lo: float
    k_hi: float
    beta: float


def beta_split(grid, k_target, top=None):
    """Neighbouring levels around ``k_target`` with beta*k_hi + (1-beta)*k_lo = k."""
    top = grid.n if top is None else top
    k = float(k_target)
    if k < 0 or k > grid.levels[top] * (1 + 1e-12):
        raise ValueError("k=%g outside [0, %g]" % (k, grid.levels[top]))
    lv = grid.levels[: top + 1]
    j = int(np.searchsorted(lv, k, side="left"))
    if j <= top and abs(lv[j] - k) <= 1e-12 * max(1.0, k):
        if j == 0:
            return BetaSplit(0.0, 0.0, 0.0)
        return BetaSplit(float(lv[j]), float(lv[j]), 1.0)
    lo, hi = float(lv[j - 1]), float(lv[j])
    return BetaSplit(lo, hi, (k - lo) / (hi - lo))


def u_grid(step=0.01, u_lo=0.2, u_hi=10.0):
    i0 = int(round(u_lo / step)) + 1
    i1 = int(round(u_hi / step))
    return np.round(np.arange(i0, i1 + 1) * step, 12)


@dataclass
class BoundTable:
    grid: KGrid
    u: np.ndarray
    wF: np.ndarray
    wf: np.ndarray
    iteration_index: int = 0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=float)
        self.wF = np.asarray(self.wF, dtype=float)
        self.wf = np.asarray(self.wf, dtype=float)
        if self.wF.shape != (self.grid.n_F, len(self.u)):
            raise ValueError("wF has shape %s" % (self.wF.shape,))
        if self.wf.shape != (self.grid.n_f, len(self.u)):
            raise ValueError("wf has shape %s" % (self.wf.shape,))
        d = np.diff(self.u)
        if len(d) and (np.any(d <= 0) or np.ptp(d) > 1e-9):
            raise ValueError("u samples must be uniform and increasing")

    @property
    def step(self):
        return float(self.u[1] - self.u[0])

    def copy(self):
        return replace(self, wF=self.wF.copy(), wf=self.wf.copy(), meta=dict(self.meta))

    def index(self, u):
        """Index of an on-sample u (raises if u is not a sample)."""
        i = int(round((float(u) - self.u[0]) / self.step))
        if i < 0 or i >= len(self.u) or abs(self.u[i] - u) > 1e-9:
            raise KeyError("u=%r is not a table sample" % u)
        return i

    def level(self, k):
        j = int(np.argmin(np.abs(self.grid.levels - k)))
        if abs(self.grid.levels[j] - k) > 1e-9:
            raise KeyError("k=%r is not a grid level" % k)
        return j

    def cell(self, k, u, kind="F"):
        rows = self.wF if kind == "F" else self.wf
        return float(rows[self.level(k), self.index(u)])


# directed row lookups ------------------------------------------------------

def row_lookup(table, rows, j, s, direction, below=None):
    """Evaluate rows[j] at points s (arrays broadcast together).

    direction=+1 rounds up (upper bounds), -1 rounds down.  Points below
    the first sample take ``below`` if given, else the first sample value.
    """
    u0 = table.u[0]
    h = table.step
    m = len(table.u)
    s = np.asarray(s, dtype=float)
    j = np.broadcast_to(np.asarray(j), s.shape)
    if np.any(s > table.u[-1] + 1e-9):
        raise ValueError("u=%g beyond table range" % float(np.max(s)))
    x = (s - u0) / h
    i = np.clip(np.floor(x).astype(int), 0, m - 2)
    th = np.clip(x - i, 0.0, 1.0)
    y0 = rows[j, i]
    y1 = rows[j, i + 1]
    val = y0 + th * (y1 - y0)
    # second differences at both nodes of the cell, zero at the ends
    im = np.clip(i - 1, 0, m - 1)
    ip = np.clip(i + 2, 0, m - 1)
    d0 = np.abs(rows[j, im] - 2 * y0 + y1)
    d1 = np.abs(y0 - 2 * y1 + rows[j, ip])
    d0 = np.where(i - 1 < 0, 0.0, d0)
    d1 = np.where(i + 2 > m - 1, 0.0, d1)
    corr = 0.5 * th * (1 - th) * np.maximum(d0, d1)
    val = val + direction * np.where(np.isfinite(corr), corr, 0.0)
    lo = x < 0
    if np.any(lo):
        fill = rows[j, 0] if below is None else below
        val = np.where(lo, fill, val)
    return val


def breve_weighted(table, kind, kappa, s, top=None):
    """Beta mix of the two weighted rows around kappa, evaluated at s.

    Returns the weighted quantity (weight(kappa, s) times the breve
    function).  kappa beyond the top level gives nan.
    """
    g = table.grid
    if kind == "F":
        rows, direction, top = table.wF, 1.0, g.n if top is None else top
        below = None
    else:
        rows, direction, top = table.wf, -1.0, (g.n_f - 1) if top is None else top
        below = 0.0
    kappa = np.asarray(kappa, dtype=float)
    s = np.asarray(s, dtype=float)
    kappa, s = np.broadcast_arrays(kappa, s)
    lv = g.levels[: top + 1]
    bad = (kappa < -1e-12) | (kappa > lv[-1] * (1 + 1e-12)) | ~np.isfinite(kappa)
    kc = np.clip(np.where(bad, 0.0, kappa), 0.0, lv[-1])
    j = np.clip(np.searchsorted(lv, kc, side="right") - 1, 0, top - 1)
    lo = lv[j]
    hi = lv[j + 1]
    beta = np.clip((kc - lo) / (hi - lo), 0.0, 1.0)
    v_lo = row_lookup(table, rows, j, s, direction, below)
    v_hi = row_lookup(table, rows, j + 1, s, direction, below)
    out = beta * v_hi + (1 - beta) * v_lo
    return np.where(bad, np.nan, out)


def breve_F(table, k, u):
    """F-breve at (k, u): the beta mix of weighted rows divided by the weight."""
    w = breve_weighted(table, "F", k, u)
    return w / weight(table.grid.alpha, k, u)


def breve_f(table, k, u):
    w = breve_weighted(table, "f", k, u, top=table.grid.n)
    return w / weight(table.grid.alpha, k, u)


# serialisation ---------------------------------------------------------------

def emit_csv(table):
    """CSV text with header u,k,wF,wf; decreasing u then decreasing k."""
    out = io.StringIO()
    out.write("u,k,wF,wf\n")
    g = table.grid
    for i in range(len(table.u) - 1, -1, -1):
        for j in range(g.n_f - 1, -1, -1):
            wF = "%.6f" % table.wF[j, i] if j < g.n_F else ""
            out.write("%.6f,%.6f,%s,%.6f\n" % (table.u[i], g.levels[j], wF, table.wf[j, i]))
    return out.getvalue()


def emit_rows_csv(rows):
    """CSV for explicit (u, k, wF, wf) tuples in the same layout."""
    out = io.StringIO()
    out.write("u,k,wF,wf\n")
    for u, k, wF, wf in sorted(rows, key=lambda r: (-r[0], -r[1])):
        out.write("%.6f,%.6f,%s,%.6f\n" % (u, k, "" if wF is None else "%.6f" % wF, wf))
    return out.getvalue()


def parse_csv(text):
    """Inverse of emit_csv/emit_rows_csv: list of (u, k, wF or None, wf)."""
    lines = text.strip("\n").split("\n")
    if lines[0] != "u,k,wF,wf":
        raise ValueError("unexpected header %r" % lines[0])
    rows = []
    for line in lines[1:]:
        u, k, wF, wf = line.split(",")
        rows.append((float(u), float(k), float(wF) if wF else None, float(wf)))
    return rows


def table_from_csv(text, grid):
    rows = parse_csv(text)
    us = np.array(sorted({r[0] for r in rows}))
    wF = np.zeros((grid.n_F, len(us)))
    wf = np.zeros((grid.n_f, len(us)))
    for u, k, a, b in rows:
        i = int(np.argmin(np.abs(us - u)))
        j = int(np.argmin(np.abs(grid.levels - k)))
        if a is not None:
            wF[j, i] = a
        wf[j, i] = b
    return BoundTable(grid, us, wF, wf)


def to_json(table):
    g = table.grid
    doc = {
        "alpha": g.alpha,
        "n": g.n,
        "levels": g.levels.tolist(),
        "u_samples": table.u.tolist(),
        "wF": table.wF.tolist(),
        "wf": table.wf.tolist(),
        "iteration_index": table.iteration_index,
    }
    if table.meta:
        doc["meta"] = table.meta
    return json.dumps(doc)


def from_json(text):
    try:
        doc = json.loads(text)
        grid = KGrid(float(doc["alpha"]), int(doc["n"]), np.array(doc["levels"], dtype=float))
        return BoundTable(grid, np.array(doc["u_samples"]), np.array(doc["wF"]),
                          np.array(doc["wf"]), int(doc["iteration_index"]),
                          doc.get("meta", {}))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError("malformed table document: %s" % exc) from exc
