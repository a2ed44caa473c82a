"""Numerical weighted-sieve bound tables, a double-sieve refinement and
empirical Goldbach checks."""

from .table import BoundTable, KGrid, build_kgrid
from .part1 import init_tables, run_schedule, default_schedule
from .double_sieve import DoubleSieveContext, run_double_sieve
from .constants import ConstantsReport, compute_constants

__all__ = ["BoundTable", "KGrid", "build_kgrid", "init_tables", "run_schedule",
           "default_schedule", "DoubleSieveContext", "run_double_sieve",
           "ConstantsReport", "compute_constants"]
__version__ = "0.1.0"
