"""Prime tables, the singular series and exact representation counts."""

from dataclasses import dataclass, field, asdict
import json
import math
import struct

import numpy as np
from scipy.special import exp1

MAGIC = b"SVKP1"
SEGMENT = 1 << 20
MAX_BITSET_BYTES = 1 << 30
MIN_COMPARE_N = 10**4


class ResourceError(RuntimeError):
    pass


def _small_sieve(limit):
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, int(math.isqrt(limit)) + 1):
        if flags[p]:
            flags[p * p::p] = False
    return flags


@dataclass
class PrimeTable:
    limit: int
    bits: np.ndarray            # packed little-endian bitset, bit n set iff n prime
    primes: np.ndarray
    _omega: np.ndarray = field(default=None, repr=False)

    @property
    def is_prime(self):
        return np.unpackbits(self.bits, count=self.limit + 1, bitorder="little").astype(bool)

    def __contains__(self, n):
        n = int(n)
        if n < 0 or n > self.limit:
            raise ValueError("n=%d outside the table" % n)
        return bool((self.bits[n >> 3] >> (n & 7)) & 1)

    def pi(self, x):
        return int(np.searchsorted(self.primes, x, side="right"))

    def big_omega(self):
        """Omega(m) for 0 <= m <= limit, with multiplicity (Omega(0)=Omega(1)=0)."""
        if self._omega is None:
            om = np.zeros(self.limit + 1, dtype=np.int8)
            for p in self.primes:
                q = int(p)
                while q <= self.limit:
                    om[q::q] += 1
                    if q > self.limit // int(p):
                        break
                    q *= int(p)
            om[0] = 0
            self._omega = om
        return self._omega

    def save(self, path):
        with open(path, "wb") as fh:
            fh.write(MAGIC)
            fh.write(struct.pack("<Q", self.limit))
            fh.write(self.bits.tobytes())

    @classmethod
    def load(cls, path):
        with open(path, "rb") as fh:
            data = fh.read()
        if data[:5] != MAGIC or len(data) < 13:
            raise ValueError("not a prime table file")
        (limit,) = struct.unpack("<Q", data[5:13])
        nbytes = (limit + 1 + 7) // 8
        bits = np.frombuffer(data[13:], dtype=np.uint8)
        if len(bits) != nbytes:
            raise ValueError("prime table file is truncated")
        flags = np.unpackbits(bits, count=limit + 1, bitorder="little")
        return cls(int(limit), bits.copy(), np.flatnonzero(flags).astype(np.int64))


def sieve_primes(limit):
    """Segmented sieve of Eratosthenes up to ``limit`` inclusive."""
    limit = int(limit)
    if limit < 2:
        raise ValueError("limit must be at least 2")
    if limit > 2**34:
        raise ResourceError("limit above 2^34")
    if (limit + 8) // 8 > MAX_BITSET_BYTES:
        raise ResourceError("bitset for limit %d exceeds the memory budget" % limit)
    root = math.isqrt(limit)
    base = np.flatnonzero(_small_sieve(root)).astype(np.int64)
    chunks = []
    for lo in range(0, limit + 1, SEGMENT):
        hi = min(lo + SEGMENT, limit + 1)
        seg = np.ones(hi - lo, dtype=bool)
        if lo == 0:
            seg[: min(2, hi)] = False
        for p in base:
            p = int(p)
            if p * p >= hi:
                break
            start = max(p * p, (lo + p - 1) // p * p)
            seg[start - lo::p] = False
        chunks.append(np.flatnonzero(seg) + lo)
    primes = np.concatenate(chunks).astype(np.int64)
    flags = np.zeros(limit + 1, dtype=bool)
    flags[primes] = True
    bits = np.packbits(flags, bitorder="little")
    return PrimeTable(limit, bits, primes)


_cache = {}


def prime_table(limit):
    """Shared table covering at least ``limit``."""
    for lim, tab in _cache.items():
        if lim >= limit:
            return tab
    tab = sieve_primes(limit)
    _cache.clear()
    _cache[limit] = tab
    return tab


# ---------------------------------------------------------------------------

def twin_constant(prime_cutoff=10**6):
    """prod_{p>2} (1 - 1/(p-1)^2) and the half-width of its tail correction.

    Primes past the cutoff are accounted for by the density estimate
    sum_{p>x} 1/p^2 ~ E1(ln x); half of it is carried as uncertainty.
    """
    if prime_cutoff < 10**3:
        raise ValueError("prime_cutoff must be at least 1000")
    ps = prime_table(prime_cutoff).primes
    ps = ps[(ps > 2) & (ps <= prime_cutoff)].astype(float)
    log_prod = np.sum(np.log1p(-1.0 / (ps - 1.0) ** 2))
    tail = float(exp1(math.log(prime_cutoff)))
    return math.exp(log_prod - tail), 0.5 * tail


def singular_series(N, prime_cutoff=10**6):
    N = int(N)
    if N <= 0 or N % 2:
        raise ValueError("singular series needs a positive even N")
    c2, _ = twin_constant(prime_cutoff)
    m = N
    while m % 2 == 0:
        m //= 2
    factor = 1.0
    p = 3
    while p * p <= m:
        if m % p == 0:
            factor *= (p - 1) / (p - 2)
            while m % p == 0:
                m //= p
        p += 2
    if m > 1:
        factor *= (m - 1) / (m - 2)
    return factor * c2


@dataclass
class CountReport:
    N: int
    D: int
    D12: int
    C_N: float
    ratio_upper: float
    ratio_lower: float

    def to_json(self):
        return json.dumps(asdict(self), sort_keys=True)


def count_representations(N, primes=None):
    """D(N) and D12(N) over A = {N - p : p < N}."""
    N = int(N)
    if N < 4 or N % 2:
        raise ValueError("N must be even and at least 4")
    primes = prime_table(N) if primes is None else primes
    if primes.limit < N:
        raise ValueError("prime table limit %d below N=%d" % (primes.limit, N))
    ps = primes.primes[: primes.pi(N - 1)]
    m = N - ps
    flags = primes.is_prime
    D = int(np.count_nonzero(flags[m]))
    om = primes.big_omega()
    D12 = int(np.count_nonzero((m > 1) & (om[m] <= 2)))
    c = singular_series(N)
    scale = math.log(N) ** 2 / (c * N)
    return CountReport(N, D, D12, c, D * scale, D12 * scale)


def exception_scan(X, primes=None, exclude_small=True):
    """Even n <= X with no representation n = p + p'.

    With ``exclude_small`` the even numbers below 4 are skipped; otherwise
    2 is reported, since it has no such representation.
    """
    X = int(X)
    primes = prime_table(max(X, 2)) if primes is None else primes
    if primes.limit < X:
        raise ValueError("prime table limit %d below X=%d" % (primes.limit, X))
    flags = primes.is_prime
    start = 4 if exclude_small else 2
    todo = np.arange(start, X + 1, 2, dtype=np.int64)
    for p in primes.primes:
        if len(todo) == 0 or p > todo[-1] - 2:
            break
        keep = todo - p < 2
        rest = ~keep
        hit = np.zeros(len(todo), dtype=bool)
        hit[rest] = flags[todo[rest] - p]
        todo = todo[~hit]
    return [int(n) for n in todo]


def compare_bounds(report, constants):
    """Finite-N ratios against the asymptotic constants (not a proof check)."""
    if report.N < MIN_COMPARE_N:
        raise ValueError("N=%d excluded by precondition (N >= %d)" % (report.N, MIN_COMPARE_N))
    up = constants.goldbach_upper
    lo = constants.d12_lower
    return {
        "N": report.N,
        "ratio_upper": report.ratio_upper,
        "goldbach_upper": up,
        "upper_ok": report.ratio_upper < up,
        "upper_margin": up - report.ratio_upper,
        "ratio_lower": report.ratio_lower,
        "d12_lower": lo,
        "lower_ok": report.ratio_lower > lo,
        "lower_margin": report.ratio_lower - lo,
    }
