import numpy as np
import pytest

from sievebounds.table import (BoundTable, build_kgrid, emit_csv, emit_rows_csv, from_json,
                               parse_csv, table_from_csv, to_json, u_grid, weight)


def test_kgrid_alpha2():
    g = build_kgrid(2, 16)
    assert list(g.levels[:17]) == [0.25 * i for i in range(17)]
    assert list(g.levels[17:]) == [4.5, 8.0, 10.125, 12.5, 15.125]
    assert (g.n_F, g.n_f, g.k_n) == (17, 22, 4.0)


def test_kgrid_alpha3():
    g = build_kgrid(3, 16)
    assert g.k_n == 8.0
    assert round(g.levels[17], 5) == 10.85482
    assert list(g.levels[18:]) == [32.0, 45.5625, 62.5, 83.1875]


def test_kgrid_rejects_bad_arguments():
    with pytest.raises(ValueError):
        build_kgrid(1.5)
    with pytest.raises(ValueError):
        build_kgrid(2, 1)


def test_weight():
    assert weight(2, 0, 3.0) == 3.0
    assert weight(2, 4, 2.0) == pytest.approx(3.0)
    assert weight(3, 8, 2.0) == pytest.approx(2.0 + 8 / 12)


def _small():
    g = build_kgrid(2, 4)
    u = u_grid(0.5, 0.5, 3.0)
    rng = np.random.default_rng(1)
    wF = rng.uniform(1, 2, (g.n_F, len(u)))
    wf = rng.uniform(0, 1, (g.n_f, len(u)))
    return BoundTable(g, u, wF, wf, 7, {"note": "x"})


def test_table_access():
    t = _small()
    assert t.step == pytest.approx(0.5)
    assert t.cell(1.0, 1.5, "F") == t.wF[1, 1]
    assert t.cell(1.0, 1.5, "f") == t.wf[1, 1]
    with pytest.raises(KeyError):
        t.index(1.25)
    with pytest.raises(KeyError):
        t.level(0.3)


def test_table_shape_checks():
    t = _small()
    with pytest.raises(ValueError):
        BoundTable(t.grid, t.u, t.wF[:-1], t.wf)
    with pytest.raises(ValueError):
        BoundTable(t.grid, t.u[::-1], t.wF, t.wf)


def test_copy_is_independent():
    t = _small()
    c = t.copy()
    c.wF[0, 0] = -1
    assert t.wF[0, 0] != -1


def test_json_roundtrip():
    t = _small()
    r = from_json(to_json(t))
    assert np.array_equal(r.wF, t.wF) and np.array_equal(r.wf, t.wf)
    assert r.iteration_index == 7 and r.meta == {"note": "x"}
    with pytest.raises(ValueError):
        from_json('{"alpha": 2}')


def test_csv_layout_and_roundtrip():
    t = _small()
    text = emit_csv(t)
    lines = text.splitlines()
    assert lines[0] == "u,k,wF,wf"
    first = lines[1].split(",")
    assert float(first[0]) == 3.0 and float(first[1]) == t.grid.levels[-1] and first[2] == ""
    back = table_from_csv(text, t.grid)
    assert np.allclose(back.wF, t.wF, atol=5e-7)
    assert np.allclose(back.wf, t.wf, atol=5e-7)
    assert emit_csv(t) == text


def test_rows_csv():
    text = emit_rows_csv([(1.0, 0.0, 2.0, 0.5), (2.0, 4.5, None, 1.0)])
    assert parse_csv(text) == [(2.0, 4.5, None, 1.0), (1.0, 0.0, 2.0, 0.5)]
    with pytest.raises(ValueError):
        parse_csv("a,b\n")
