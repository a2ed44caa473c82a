"""Command line: tables | double-sieve | constants | verify.

JSON goes to stdout, diagnostics to stderr.  Exit codes: 1 for config,
input or resource errors, 2 for a table invariant violation, 3 when a
headline check of ``constants`` fails.
"""

import argparse
from dataclasses import dataclass, fields, replace
import json
import logging
import os
import sys

from . import part1, reference
from .constants import compute_constants
from .double_sieve import DoubleSieveContext, default_double_schedule, run_double_sieve
from .empirical import MIN_COMPARE_N, ResourceError, compare_bounds, count_representations, exception_scan
from .table import build_kgrid, emit_csv, emit_rows_csv, from_json, to_json

log = logging.getLogger("sievebounds")

GOLDBACH_MAX = 6.916 + 1e-3
D12_MIN = 2.25
EXPONENT_MAX = 0.705


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    out: str = "out"
    u_step: float = 0.01
    n: int = 16
    sweeps: int = None          # overrides every phase's sweep count
    ds_sweeps: int = 4
    a_step: float = 0.5
    threads: int = 1
    part1_only: bool = False
    part1_checkpoint: str = None
    table_checkpoint: str = None
    N: list = None
    exceptions: int = None

    def validate(self):
        if not 0 < self.u_step <= 0.1:
            raise ConfigError("u_step must lie in (0, 0.1]")
        if abs(round(1 / self.u_step) * self.u_step - 1) > 1e-9:
            raise ConfigError("u_step must divide 1")
        if self.n < 2:
            raise ConfigError("n must be at least 2")
        if self.sweeps is not None and self.sweeps < 0:
            raise ConfigError("sweeps must be >= 0")
        if self.ds_sweeps < 0:
            raise ConfigError("ds_sweeps must be >= 0")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if self.a_step <= 0:
            raise ConfigError("a_step must be positive")
        return self


def load_config(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError("cannot read config %s: %s" % (path, exc)) from exc
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    known = {f.name for f in fields(RunConfig)}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError("unknown config keys: %s" % ", ".join(sorted(unknown)))
    return RunConfig(**doc)


# ---------------------------------------------------------------------------
# pipeline pieces (also used by the tests)

def bootstrap_for(cfg):
    boot = part1.BootstrapSpec(a_step=cfg.a_step)
    if cfg.sweeps is not None:
        boot = replace(boot, sweeps=tuple(cfg.sweeps for _ in boot.alpha_sequence))
    return boot


def run_part1(cfg):
    """Returns (first alpha=2 phase table, final table)."""
    grid = build_kgrid(2, cfg.n)
    start = part1.init_tables(grid, cfg.u_step)
    boot = bootstrap_for(cfg)
    phases = {}

    def keep(i, alpha, table):
        phases[i] = table.copy()
        log.info("phase %d (alpha=%g) done", i, alpha)

    sched = part1.default_schedule()
    final = part1.run_schedule(start, sched, boot, on_phase=keep)
    first = phases.get(0, start)
    return first, final


def run_double(part1_table, cfg):
    ctx = DoubleSieveContext.from_part1(part1_table)
    return run_double_sieve(ctx, default_double_schedule(cfg.ds_sweeps), a_step=cfg.a_step)


def grid_rows(table, ks=None):
    """(u, k, wF, wf) at the reference u points for every k up to k_{n+1}."""
    g = table.grid
    ks = g.levels[: g.n + 2] if ks is None else ks
    rows = []
    for u in reference.REF_U:
        for k in ks:
            j = table.level(k)
            wF = table.cell(k, u, "F") if j <= g.n else None
            rows.append((u, float(k), wF, table.cell(k, u, "f")))
    return rows


def row0_rows(table, number):
    return [(u, 0.0, reference.table_value(table, 0.0, u, "F"),
             reference.table_value(table, 0.0, u, "f"))
            for u in reference.ROW0_TABLES[number]]


def _write(path, text):
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def _deviations(table, numbers, path):
    parts = []
    fracs = {}
    for num in numbers:
        rows, frac = reference.deviation_report(table, num)
        parts.append(reference.report_text(rows, frac))
        fracs[num] = frac
    _write(path, "".join(parts))
    return fracs


def _load_table(path):
    try:
        with open(path) as fh:
            return from_json(fh.read())
    except OSError as exc:
        raise ConfigError("cannot read checkpoint %s: %s" % (path, exc)) from exc
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _part1_table(cfg):
    path = cfg.part1_checkpoint or os.path.join(cfg.out, "part1.json")
    if os.path.exists(path):
        return _load_table(path)
    if cfg.part1_checkpoint:
        raise ConfigError("checkpoint %s not found" % path)
    return cmd_tables(cfg)[0]


# ---------------------------------------------------------------------------
# commands

def cmd_tables(cfg):
    os.makedirs(cfg.out, exist_ok=True)
    first, final = run_part1(cfg)
    _write(os.path.join(cfg.out, "table1.csv"), emit_rows_csv(grid_rows(first)))
    _write(os.path.join(cfg.out, "table2.csv"), emit_rows_csv(grid_rows(final)))
    _write(os.path.join(cfg.out, "table3.csv"), emit_rows_csv(row0_rows(final, 3)))
    _write(os.path.join(cfg.out, "part1_full.csv"), emit_csv(final))
    _write(os.path.join(cfg.out, "part1.json"), to_json(final))
    d1 = _deviations(first, [1], os.path.join(cfg.out, "deviations_table1.csv"))
    d23 = _deviations(final, [2, 3], os.path.join(cfg.out, "deviations_tables23.csv"))
    summary = {"command": "tables", "out": cfg.out,
               "within_tolerance": {str(k): v for k, v in {**d1, **d23}.items()}}
    log.info("tables written: %s", summary)
    return final, summary


def cmd_double_sieve(cfg):
    p1 = _part1_table(cfg)
    os.makedirs(cfg.out, exist_ok=True)
    ds = run_double(p1, cfg)
    _write(os.path.join(cfg.out, "table4.csv"), emit_rows_csv(grid_rows(ds)))
    _write(os.path.join(cfg.out, "table5.csv"), emit_rows_csv(row0_rows(ds, 5)))
    _write(os.path.join(cfg.out, "double_sieve_full.csv"), emit_csv(ds))
    _write(os.path.join(cfg.out, "double_sieve.json"), to_json(ds))
    d = _deviations(ds, [4, 5], os.path.join(cfg.out, "deviations_tables45.csv"))
    summary = {"command": "double-sieve", "out": cfg.out,
               "within_tolerance": {str(k): v for k, v in d.items()}}
    log.info("tables written: %s", summary)
    return ds, summary


def _final_table(cfg):
    if cfg.table_checkpoint:
        return _load_table(cfg.table_checkpoint)
    if cfg.part1_only:
        return _part1_table(cfg)
    path = os.path.join(cfg.out, "double_sieve.json")
    if os.path.exists(path):
        return _load_table(path)
    return cmd_double_sieve(cfg)[0]


def headline_failures(rep):
    bad = []
    if not rep.goldbach_upper <= GOLDBACH_MAX:
        bad.append("goldbach_upper %.6f > %.6f" % (rep.goldbach_upper, GOLDBACH_MAX))
    if not rep.d12_lower >= D12_MIN:
        bad.append("d12_lower %.6f < %.2f" % (rep.d12_lower, D12_MIN))
    if not rep.exception_exponent <= EXPONENT_MAX:
        bad.append("exception_exponent %s > %.3f" % (rep.exception_exponent, EXPONENT_MAX))
    return bad


def cmd_constants(cfg):
    table = _final_table(cfg)
    seed = None
    if cfg.part1_only:
        seed = table.cell(0.0, 2.0, "F")
    rep = compute_constants(table, seed)
    print(rep.to_json())
    bad = headline_failures(rep)
    for b in bad:
        print("headline check failed: " + b, file=sys.stderr)
    return 3 if bad else 0


def _verify_constants(cfg):
    path = cfg.table_checkpoint or os.path.join(cfg.out, "double_sieve.json")
    if os.path.exists(path):
        return compute_constants(_load_table(path)), path
    return None, None


def cmd_verify(cfg):
    if not cfg.N and cfg.exceptions is None:
        raise ConfigError("verify needs --N or --exceptions")
    consts, src = _verify_constants(cfg) if cfg.N else (None, None)
    for N in cfg.N or []:
        try:
            rep = count_representations(N)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        doc = json.loads(rep.to_json())
        if N < MIN_COMPARE_N:
            doc["comparison"] = "N=%d excluded by precondition (N >= %d)" % (N, MIN_COMPARE_N)
        elif consts is None:
            doc["comparison"] = "no constants available (run double-sieve first)"
        else:
            try:
                doc["comparison"] = compare_bounds(rep, consts)
                doc["constants_from"] = src
            except ValueError as exc:
                doc["comparison"] = str(exc)
        print(json.dumps(doc, sort_keys=True))
    if cfg.exceptions is not None:
        exc_list = exception_scan(cfg.exceptions)
        print(json.dumps({"X": cfg.exceptions, "exceptions": exc_list, "excluded_below": 4}))
    return 0


# ---------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="sievebounds", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with RunConfig fields")
    common.add_argument("--out", help="output directory (default: out)")
    common.add_argument("--threads", type=int, help="thread count (work is vectorised; kept at 1)")
    common.add_argument("--u-step", type=float, dest="u_step", help="u sample step")
    common.add_argument("--sweeps", type=int, help="sweeps per phase")
    common.add_argument("-v", "--verbose", action="store_true")
    sub.add_parser("tables", parents=[common], help="single-sieve iteration, tables 1-3")
    sub.add_parser("double-sieve", parents=[common], help="double sieve, tables 4-5")
    c = sub.add_parser("constants", parents=[common], help="headline constants as JSON")
    c.add_argument("--part1-only", action="store_true", dest="part1_only")
    v = sub.add_parser("verify", parents=[common], help="exact counts for small N")
    v.add_argument("--N", type=int, action="append", help="even N (repeatable)")
    v.add_argument("--exceptions", type=int, metavar="X", help="scan even n <= X")
    return p


def config_from_args(args):
    cfg = load_config(args.config) if args.config else RunConfig()
    for name in ("out", "threads", "u_step", "sweeps"):
        val = getattr(args, name, None)
        if val is not None:
            setattr(cfg, name, val)
    if getattr(args, "part1_only", False):
        cfg.part1_only = True
    if getattr(args, "N", None):
        cfg.N = args.N
    if getattr(args, "exceptions", None) is not None:
        cfg.exceptions = args.exceptions
    return cfg.validate()


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = config_from_args(args)
        if args.command in ("tables", "double-sieve"):
            run = cmd_tables if args.command == "tables" else cmd_double_sieve
            print(json.dumps(run(cfg)[1], sort_keys=True))
            return 0
        if args.command == "constants":
            return cmd_constants(cfg)
        return cmd_verify(cfg)
    except part1.InvariantViolation as exc:
        print("invariant violation: %s" % exc, file=sys.stderr)
        return 2
    except (ValueError, ResourceError, MemoryError, OSError, TypeError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
