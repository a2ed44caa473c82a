import math

import numpy as np
import pytest

from sievebounds import empirical as emp
from sievebounds.constants import ConstantsReport


def _is_prime(n):
    return n > 1 and all(n % d for d in range(2, math.isqrt(n) + 1))


def _omega(n):
    c, d = 0, 2
    while d * d <= n:
        while n % d == 0:
            n //= d
            c += 1
        d += 1
    return c + (n > 1)


def test_prime_counts():
    t = emp.sieve_primes(10**6)
    assert t.pi(10**6) == 78498
    assert t.pi(100) == 25
    assert 999983 in t and 999981 not in t


def test_segmented_sieve_matches_trial_division():
    t = emp.sieve_primes(5000)
    assert list(t.primes) == [n for n in range(5001) if _is_prime(n)]
    big = emp.sieve_primes(emp.SEGMENT + 5000)
    assert big.pi(emp.SEGMENT + 5000) - big.pi(emp.SEGMENT - 1) == sum(
        _is_prime(n) for n in range(emp.SEGMENT, emp.SEGMENT + 5001))


def test_big_omega():
    t = emp.sieve_primes(3000)
    om = t.big_omega()
    assert all(om[n] == _omega(n) for n in range(2, 3001))


def test_limits():
    with pytest.raises(ValueError):
        emp.sieve_primes(1)
    with pytest.raises(emp.ResourceError):
        emp.sieve_primes(2**35)
    with pytest.raises(ValueError):
        emp.sieve_primes(100).__contains__(101)


def test_save_load_roundtrip(tmp_path):
    t = emp.sieve_primes(10**4)
    p = tmp_path / "p.bin"
    t.save(p)
    r = emp.PrimeTable.load(p)
    assert r.limit == t.limit and np.array_equal(r.primes, t.primes)
    p.write_bytes(p.read_bytes()[:-3])
    with pytest.raises(ValueError):
        emp.PrimeTable.load(p)
    p.write_bytes(b"junk")
    with pytest.raises(ValueError):
        emp.PrimeTable.load(p)


def test_count_representations_brute_force():
    primes = emp.prime_table(2000)
    for N in range(4, 2001, 2):
        rep = emp.count_representations(N, primes)
        ps = [p for p in range(2, N) if _is_prime(p)]
        assert rep.D == sum(_is_prime(N - p) for p in ps)
        assert rep.D12 == sum(1 for p in ps if N - p > 1 and _omega(N - p) <= 2)


def test_count_representations_rejects_odd():
    with pytest.raises(ValueError):
        emp.count_representations(101)
    with pytest.raises(ValueError):
        emp.count_representations(2)


def test_exception_scan():
    assert emp.exception_scan(10**6) == []
    assert emp.exception_scan(100, exclude_small=False) == [2]


def test_twin_constant():
    c2, err = emp.twin_constant()
    assert c2 == pytest.approx(0.6601618158468696, abs=1e-9)
    assert err < 1e-6


def test_singular_series():
    c2 = emp.singular_series(2)
    assert emp.singular_series(6) == pytest.approx(2 * c2, abs=1e-9)
    assert emp.singular_series(2**10) == pytest.approx(c2, abs=1e-15)
    assert emp.singular_series(30) == pytest.approx(c2 * 2 * 4 / 3, abs=1e-12)
    with pytest.raises(ValueError):
        emp.singular_series(7)


def test_compare_bounds_precondition():
    rep = emp.count_representations(100)
    consts = ConstantsReport(6.916, 2.27, 0.702, 0.01846)
    with pytest.raises(ValueError, match="excluded by precondition"):
        emp.compare_bounds(rep, consts)
    out = emp.compare_bounds(emp.count_representations(10**5), consts)
    assert out["upper_ok"] and out["upper_margin"] > 0
