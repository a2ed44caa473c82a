"""Headline constants read off a finished double-sieve table."""

from dataclasses import dataclass, field, asdict
import hashlib
import json
import math

import numpy as np

from .numerics import NoBracketError, find_root, integrate
from .table import row_lookup

PRINTED_C = 1.876677    # value used in the D12 composition
TABLE_C = 1.876697      # k = 0, u = 2 upper value of the single-sieve table
D12_K = 2.25
D12_U = 1.5


@dataclass
class ConstantsReport:
    goldbach_upper: float
    d12_lower: float
    exception_exponent: float
    chen_integral: float
    inputs: dict = field(default_factory=dict)

    def problems(self):
        """Violated report invariants (empty when all hold)."""
        out = []
        vals = (self.goldbach_upper, self.d12_lower, self.exception_exponent, self.chen_integral)
        if not all(math.isfinite(x) for x in vals):
            out.append("non-finite constant")
        if not self.goldbach_upper > self.d12_lower > 0:
            out.append("expected goldbach_upper > d12_lower > 0")
        if not 0.5 < self.exception_exponent < 1:
            out.append("exception exponent outside (0.5, 1)")
        return out

    def to_json(self):
        return json.dumps(asdict(self), indent=2, sort_keys=True)


def goldbach_upper_constant(table, check_flat=True):
    """4 wF(0, 1): the coefficient of N C(N) / ln^2 N in the bound for D(N)."""
    w1 = table.cell(0.0, 1.0, "F")
    if check_flat:
        w2 = table.cell(0.0, 2.0, "F")
        if abs(w1 - w2) >= 1e-6:
            raise ValueError("wF(0,u) is not flat between u=1 and u=2 (%.8f vs %.8f)" % (w1, w2))
    return 4.0 * w1


def _chen_integrand(t):
    return t * math.log(2 - 3 * t) / (1 - t) if t < 1 / 3 else 0.0


def chen_integral():
    """Integral of t ln(2 - 3t) / (1 - t) over [0, 1/3]."""
    return integrate(_chen_integrand, 0.0, 1.0 / 3.0)


def d12_lower_constant(table, f2_0_2_constant, integral=None):
    """4 (wf(2.25, 1.5) - 2.25 * 4 * c * I) with c = e^-gamma 2 F(0, 2)."""
    a = table.cell(D12_K, D12_U, "f")
    return d12_from(a, f2_0_2_constant, chen_integral() if integral is None else integral)


def d12_from(a, c, integral):
    # ln xi^2 = ln N / 2 turns both terms into multiples of N C(N) / ln^2 N
    return 4.0 * (a - D12_K * 4.0 * c * integral)


def _wf0(table, u):
    return float(row_lookup(table, table.wf, 0, np.asarray(u, dtype=float), -1.0, 0.0))


def exception_exponent(table, lo=1.6, hi=2.0):
    """u* - 1 where u* is the left end of the support of wf(0, u) in [lo, hi]."""
    try:
        ustar = find_root(lambda x: _wf0(table, x) - 1e-12, lo, hi, 1e-10)
    except NoBracketError:
        raise NoBracketError("lower bound vanishes on range [%g, %g]" % (lo, hi)) from None
    return ustar - 1.0, ustar


def table_digest(table):
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(table.wF).tobytes())
    h.update(np.ascontiguousarray(table.wf).tobytes())
    return h.hexdigest()


def compute_constants(table, seed_c=None):
    """All constants for a finished table.

    ``seed_c`` is e^-gamma 2 F(0, 2) of the single-sieve table that seeded
    the double sieve; it defaults to the value stored in the table meta.
    The d12 result is also given for the two printed variants of that
    constant.
    """
    if seed_c is None:
        ds = table.meta.get("double_sieve", {})
        seed_c = ds.get("c4", float("nan")) / 2.0
        if not math.isfinite(seed_c):
            seed_c = table.cell(0.0, 2.0, "F")
    integral = chen_integral()
    a = table.cell(D12_K, D12_U, "f")
    gold = goldbach_upper_constant(table, check_flat=False)
    flat_gap = abs(table.cell(0.0, 1.0, "F") - table.cell(0.0, 2.0, "F"))
    try:
        expo, ustar = exception_exponent(table)
    except NoBracketError as exc:
        expo, ustar, note = float("nan"), float("nan"), str(exc)
    else:
        note = ""
    inputs = {
        "wF(0,1)": table.cell(0.0, 1.0, "F"),
        "wF(0,2)": table.cell(0.0, 2.0, "F"),
        "flat_gap": flat_gap,
        "wf(2.25,1.5)": a,
        "seed_c": seed_c,
        "u_star": ustar,
        "d12_with_%s" % PRINTED_C: d12_from(a, PRINTED_C, integral),
        "d12_with_%s" % TABLE_C: d12_from(a, TABLE_C, integral),
        "table_sha256": table_digest(table),
    }
    if note:
        inputs["exponent_error"] = note
    return ConstantsReport(gold, d12_from(a, seed_c, integral), expo, integral, inputs)
