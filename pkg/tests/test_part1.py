import numpy as np
import pytest

from sievebounds import part1
from sievebounds.classical import jr_F, jr_f
from sievebounds.numerics import EXP_NEG_GAMMA as E
from sievebounds.table import build_kgrid


@pytest.fixture(scope="module")
def start():
    return part1.init_tables(build_kgrid(2, 16), 0.01)


def test_init_row0_is_jurkat_richert(start):
    u = start.u
    big = u >= 1
    assert np.allclose(start.wF[0][big], E * u[big] * jr_F(u[big]), atol=1e-12)
    assert np.allclose(start.wf[0][big], E * u[big] * jr_f(u[big]), atol=1e-12)
    assert start.cell(0, 2.0, "F") == pytest.approx(2.0, abs=1e-9)


def test_init_top_row_seeded_by_tilde_F(start):
    # at u = 2 the k_n row starts from e^-gamma 2 F~(2) = 2
    assert start.cell(4.0, 2.0, "F") == pytest.approx(2.0, abs=1e-9)


def test_init_satisfies_invariants(start):
    part1.check_table(start)
    assert np.all(start.wf >= 0)


def test_f1_reduces_to_classical_lower(start):
    u = start.u
    m = (u >= 2) & (u < 9.5)
    val = part1.op_f1(start, 0, u, 10.0)
    assert np.max(np.abs(val[m] - E * u[m] * jr_f(u[m]))) < 1e-4


def test_F1_reduces_to_classical_upper(start):
    u = start.u
    m = (u >= 1) & (u < 9.5)
    val = part1.op_F1(start, 0, u, 10.0)
    assert np.max(np.abs(val[m] - E * u[m] * jr_F(u[m]))) < 1e-4


def test_candidate_sentinels(start):
    assert part1.op_f1(start, 0, 10.5, 10.0) == -np.inf
    assert part1.op_F1(start, 0, 10.5, 10.0) == np.inf
    assert np.all(part1.op_f3(start, 0, start.u) == -np.inf)
    assert np.all(part1.op_F4(start, 16, start.u) == np.inf)
    assert np.all(part1.op_F5(start, 0, start.u) == np.inf)


def test_operator_level_checks(start):
    with pytest.raises(ValueError):
        part1.op_f1(start, 20, 2.0)
    with pytest.raises(ValueError):
        part1.op_F1(start, 17, 2.0)
    with pytest.raises(ValueError):
        part1.op_f_high(start, 3, 2.0)
    with pytest.raises(ValueError):
        part1.k_profile(1.0, np.array([2.0]), 3.0, 2.0, 4.5, "other")


def test_chords_are_interpolations(start):
    # both chord operators are convex combinations of stored rows
    u = np.array([2.5, 4.0])
    k = start.grid.levels
    f3 = part1.op_f3(start, 4, u)
    cand = 0.5 * part1._lookup(start, "f", 3, u) + 0.5 * part1._lookup(start, "f", 5, u)
    assert np.all(f3 >= cand - 1e-12)
    assert k[4] == 1.0


def test_F5_scaling(start):
    u1 = 2.0
    val = part1.op_F5(start, 16, 1.5)
    assert val == pytest.approx(4.0 / 1.5**2 * start.cell(4.0, u1, "F"))


def test_k_shift_and_roots():
    assert part1.k_shift(0.0, np.array([2.0]), 2.0)[0] == pytest.approx(0.0)
    r = part1.u_l_root(1.0, 4.0, 2.0)
    assert np.isfinite(r)


def test_invariant_violation_is_raised(start):
    bad = start.copy()
    bad.wf[3, 100] = bad.wF[3, 100] + 0.1
    with pytest.raises(part1.InvariantViolation):
        part1.check_table(bad)
    bad = start.copy()
    bad.wF[2, 5] = np.nan
    with pytest.raises(part1.InvariantViolation):
        part1.check_table(bad)


def test_schedule_validation_and_roundtrip():
    with pytest.raises(ValueError):
        part1.ScheduleStep("f9")
    with pytest.raises(ValueError):
        part1.ScheduleStep("f1")
    with pytest.raises(ValueError):
        part1.ScheduleStep("f3", sweep_direction="sideways")
    with pytest.raises(ValueError):
        part1.BootstrapSpec(alpha_sequence=(3.0, 2.0), sweeps=(1, 1), directions=("ascending",) * 2)
    steps = part1.default_schedule(2, 1)
    boot = part1.BootstrapSpec()
    doc = part1.schedule_to_dict(steps, boot)
    s2, b2 = part1.schedule_from_dict(doc)
    assert [s.operator_id for s in s2] == [s.operator_id for s in steps]
    assert b2.alpha_sequence == boot.alpha_sequence
    with pytest.raises(ValueError):
        part1.schedule_from_dict({"steps": [], "extra": 1})


def test_transfer_to_alpha3(start):
    t3 = part1.transfer_from_alpha2(start, 3.0)
    assert t3.grid.alpha == 3.0
    assert np.array_equal(t3.wF[0], start.wF[0])
    part1.check_table(t3)


def test_run_schedule_rejects_non_alpha2(start):
    t3 = part1.transfer_from_alpha2(start, 3.0)
    with pytest.raises(ValueError):
        part1.run_schedule(t3, part1.default_schedule(1, 1))
