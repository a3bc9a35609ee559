import csv
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torusdipole import sweep
from torusdipole.operators import BasisSpec, Geometry, assemble_hamiltonian
from torusdipole.spectral import eigendecompose
from torusdipole.sweep import (
    ConfigError,
    PeriodError,
    SweepConfig,
    SweepResult,
    detect_period,
    dump_config,
    export_csv,
    fit_linear_segments,
    parse_config,
    parse_config_text,
    run_sweep,
)

REPRODUCTION = """\
# three aspect ratios, three azimuthal numbers
a = 1.2, 2, 3
m = 0, 1, 2
i = 0:20:2000
n_max = 60
levels = 11
out = sweep_out
"""


def exact_period(a):
    return 2 * a * (a + math.sqrt(a * a - 1))


@pytest.fixture(scope="module")
def small():
    config = SweepConfig(a_list=(2.0,), m_list=(0, 1), i_grid=(0.0, 40.0, 161), n_max=30, levels=5)
    return run_sweep(config)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


# configuration

def test_minimal_config_defaults():
    c = parse_config_text("a = 2\n")
    assert c.a_list == (2.0,)
    assert c.m_list == (0,)
    assert c.i_grid == (0.0, 10.0, 1000)
    assert (c.n_max, c.levels, c.L_over_R) == (60, 11, 8.0)
    assert parse_config_text("") == SweepConfig()


def test_reversed_range_names_constraint():
    with pytest.raises(ConfigError, match="hi > lo") as info:
        parse_config_text("a = 2\ni = 5:1:10\n")
    assert info.value.line == 2


@pytest.mark.parametrize("text,line", [
    ("a = 2\ncolour = red\n", 2),
    ("a = 2\na = 3\n", 2),
    ("just words\n", 1),
    ("a = 2\n\nn_max = many\n", 3),
    ("i = 0:10\n", 1),
    ("i = 0:10:1\n", 1),
    ("m =\n", 1),
])
def test_config_errors_carry_line(text, line):
    with pytest.raises(ConfigError) as info:
        parse_config_text(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}:")


@pytest.mark.parametrize("kwargs", [{"a_list": (1.0,)}, {"levels": 200, "n_max": 10}, {"m_list": ()},
                                    {"n_max": 0}, {"L_over_R": -1.0}, {"i_grid": (0.0, 1.0, 2.5)}])
def test_config_validation(kwargs):
    with pytest.raises(ConfigError):
        SweepConfig(**kwargs)


def test_reproduction_config_round_trip(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(REPRODUCTION)
    c = parse_config(path)
    assert c.a_list == (1.2, 2.0, 3.0) and c.m_list == (0, 1, 2)
    assert c.i_grid == (0.0, 20.0, 2000)
    text = dump_config(c)
    assert parse_config_text(text) == c
    assert dump_config(parse_config_text(text)) == text


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        parse_config(tmp_path / "absent.cfg")


def test_grid_and_step():
    c = SweepConfig(i_grid=(0.0, 20.0, 2001))
    assert c.step == pytest.approx(0.01)
    assert len(c.grid()) == 2001 and c.grid()[-1] == 20.0


# period detection

def sawtooth(x, period, phase=0.0):
    return 0.5 - ((x / period + phase) % 1.0)


def test_sawtooth_period():
    x = np.linspace(0, 20, 2001)
    assert detect_period(x, sawtooth(x, 4.47)) == pytest.approx(4.47, abs=0.01)


@given(st.floats(1.0, 6.0), st.floats(0.0, 1.0))
@settings(max_examples=30, deadline=None)
def test_sawtooth_period_random(period, phase):
    x = np.linspace(0, 3 * period, 601)
    step = x[1] - x[0]
    assert abs(detect_period(x, sawtooth(x, period, phase)) - period) <= step


def test_sine_with_trend_free_period():
    x = np.linspace(0, 30, 1501)
    assert detect_period(x, np.sin(2 * np.pi * x / 7.0)) == pytest.approx(7.0, abs=0.02)


@pytest.mark.parametrize("values", [np.ones(500), np.linspace(0, 1, 500), np.linspace(0, 1, 500) ** 2])
def test_period_errors_on_flat_or_monotone(values):
    with pytest.raises(PeriodError):
        detect_period(np.linspace(0, 10, 500), values)


def test_period_rejects_nonuniform_grid():
    x = np.sort(np.random.default_rng(1).uniform(0, 10, 300))
    with pytest.raises(PeriodError, match="uniform"):
        detect_period(x, np.sin(x))


def test_period_rejects_weak_correlation():
    x = np.linspace(0, 10, 800)
    with pytest.raises(PeriodError):
        detect_period(x, np.random.default_rng(3).normal(size=800))


# segments

def test_segments_recover_universal_drop():
    half = 2.0
    x = np.linspace(0, 10, 2001)
    y = 1.25 * sawtooth(x, half)  # falls by 5/4 over each half-period, then jumps back
    fit = fit_linear_segments(x, y)
    assert fit.ok
    assert np.allclose(fit.breakpoints, [2.0, 4.0, 6.0, 8.0, 10.0], atol=0.01)
    for slope in fit.slopes():
        assert abs(slope) * half == pytest.approx(1.25, rel=0.02)
    assert all(w <= 0.01 for w in fit.crossover_widths)
    assert np.all(np.diff(fit.midpoints()) > 0)


def test_segments_flag_non_sawtooth():
    x = np.linspace(0, 10, 500)
    fit = fit_linear_segments(x, np.sin(x))
    assert not fit.ok and "sign change" in fit.message
    assert not fit_linear_segments(x[:5], np.sin(x[:5])).ok
    assert not fit_linear_segments(x, np.zeros_like(x)).ok


# sweeps

def test_small_sweep_periods(small):
    for (a, m), cell in small.cells.items():
        assert cell.error is None
        assert cell.period == pytest.approx(exact_period(a), abs=2 * cell.step)
        periods = np.concatenate([cell.periods_energy, cell.periods_t3])
        periods = periods[np.isfinite(periods)]
        assert len(periods) >= 8
        assert np.ptp(periods) <= 2 * cell.step
        assert np.all(np.diff(cell.i) > 0)


def test_small_sweep_guard_raises_cutoff(small):
    for cell in small.cells.values():
        assert cell.n_max > 30
        assert any("n_max raised" in d for d in cell.diagnostics)
        assert sweep.truncation_drift(Geometry(2.0), cell.m, cell.n_max, float(cell.i[-1]), 5) <= sweep.TRUNCATION_TOL


def test_zero_current_row(small):
    for (a, m), cell in small.cells.items():
        assert cell.i[0] == 0
        assert np.max(np.abs(cell.t3[0])) <= 1e-8
        free = eigendecompose(assemble_hamiltonian(Geometry(a), BasisSpec(m, cell.n_max, "parity"), 0.0))
        assert np.allclose(cell.energies[0], free.eigenvalues[:5], atol=1e-10)


def test_energy_continuous_where_dipole_jumps(small):
    # at i = l I_s the dipole changes sign abruptly while the energy stays
    # continuous and its slope flips
    cell = small.cells[(2.0, 0)]
    for level in (3, 4):
        fit = fit_linear_segments(cell.i, cell.t3[:, level])
        assert fit.ok
        assert np.allclose(fit.breakpoints, np.arange(1, 6) * 0.5 * exact_period(2.0), atol=cell.step)
        e, t = cell.energies[:, level], cell.t3[:, level]
        de = np.diff(e)
        for b in fit.breakpoints:
            j = int(np.argmin(np.abs(cell.i - b)))
            before, after = slice(j - 6, j - 2), slice(j + 2, j + 6)
            assert abs(e[j + 1] - e[j - 1]) <= 10 * np.median(np.abs(de[j - 8:j + 8]))
            assert np.sign(np.mean(de[before])) == -np.sign(np.mean(de[after]))
            assert np.sign(np.mean(t[before])) == -np.sign(np.mean(t[after]))


def test_symmetric_grid():
    config = SweepConfig(a_list=(1.2,), m_list=(1,), i_grid=(-6.0, 6.0, 121), n_max=30, levels=6)
    cell = run_sweep(config).cells[(1.2, 1)]
    assert cell.error is None and len(cell.i) == 121
    assert np.allclose(cell.i, -cell.i[::-1], atol=1e-12)
    assert np.allclose(cell.energies, cell.energies[::-1], atol=1e-9)
    assert np.allclose(cell.t3, -cell.t3[::-1], atol=1e-8)


def test_grid_extended_until_enough_periods():
    config = SweepConfig(a_list=(1.2,), m_list=(0,), i_grid=(0.0, 4.0, 41), n_max=20, levels=4)
    cell = run_sweep(config).cells[(1.2, 0)]
    assert cell.i[-1] >= sweep.MIN_PERIODS * exact_period(1.2) - cell.step
    assert cell.step == pytest.approx(0.1)
    assert any("grid extended" in d for d in cell.diagnostics)
    assert cell.period == pytest.approx(exact_period(1.2), abs=2 * cell.step)


def test_parallel_matches_serial():
    config = SweepConfig(a_list=(3.0,), m_list=(2,), i_grid=(0.0, 3.0, 200), n_max=15, levels=4)
    geometry = Geometry(3.0)
    solver = sweep._CellSolver(geometry, 2, 15, 4)
    xs = config.grid()
    e1, t1 = solver.run(xs, jobs=1)
    e2, t2 = solver.run(xs, jobs=3)
    assert np.array_equal(e1, e2) and np.array_equal(t1, t2)


def test_cell_error_is_recorded(monkeypatch):
    real = sweep._run_cell

    def flaky(config, a, m, jobs):
        if m == 1:
            raise ArithmeticError("synthetic failure")
        return real(config, a, m, jobs)

    monkeypatch.setattr(sweep, "_run_cell", flaky)
    config = SweepConfig(a_list=(1.2,), m_list=(0, 1), i_grid=(0.0, 12.0, 121), n_max=20, levels=3)
    result = run_sweep(config)
    assert result.cells[(1.2, 0)].error is None
    assert "synthetic failure" in result.cells[(1.2, 1)].error
    assert any("ERROR" in d for d in result.diagnostics)


# export

def test_export_layout_and_determinism(small, tmp_path):
    first = export_csv(small, tmp_path / "one")
    second = export_csv(small, tmp_path / "two")
    names = sorted(p.name for p in first)
    assert names == ["diagnostics.txt", "summary.csv", "sweep_a2_m0.csv", "sweep_a2_m1.csv"]
    for p, q in zip(first, second):
        assert p.read_bytes() == q.read_bytes()
    rows = read_csv(tmp_path / "one" / "sweep_a2_m0.csv")
    assert rows[0] == ["i", "E_0", "E_1", "E_2", "E_3", "E_4", "t3_0", "t3_1", "t3_2", "t3_3", "t3_4"]
    assert len(rows) == 1 + 161
    assert rows[2][1] == f"{small.cells[(2.0, 0)].energies[1, 0]:.12g}"


def test_rerun_is_byte_identical(tmp_path):
    config = SweepConfig(a_list=(1.2,), m_list=(2,), i_grid=(0.0, 12.0, 121), n_max=20, levels=3)
    a = export_csv(run_sweep(config), tmp_path / "a")
    b = export_csv(run_sweep(config), tmp_path / "b")
    assert [p.read_bytes() for p in a] == [p.read_bytes() for p in b]


def test_summary_cross_foots(small, tmp_path):
    export_csv(small, tmp_path)
    summary = read_csv(tmp_path / "summary.csv")
    assert summary[0] == sweep.SUMMARY_HEADER
    body = [dict(zip(summary[0], row)) for row in summary[1:]]
    for m in (0, 1):
        table = np.array(read_csv(tmp_path / f"sweep_a2_m{m}.csv")[1:], dtype=float)
        x, t3 = table[:, 0], table[:, 6:]
        rows = [r for r in body if r["m"] == str(m) and r["series"] == "t3"]
        assert len(rows) == 5
        for r in rows:
            level = int(r["level"])
            assert int(r["points"]) == len(x)
            assert float(r["i_max"]) == x[-1]
            try:
                expected = detect_period(x, t3[:, level])
            except PeriodError:
                assert r["period"] == "nan"
                continue
            assert float(r["period"]) == pytest.approx(expected, rel=1e-9)


def test_empty_result_header_only(tmp_path):
    paths = export_csv(SweepResult(SweepConfig()), tmp_path)
    assert [p.name for p in paths] == ["summary.csv"]
    assert read_csv(paths[0]) == [sweep.SUMMARY_HEADER]


def test_errored_cell_exports_header_only(tmp_path):
    config = SweepConfig(a_list=(2.0,), levels=2)
    empty = np.zeros((0, 2))
    result = SweepResult(config, {(2.0, 0): sweep.CellResult(2.0, 0, 60, np.zeros(0), empty, empty, error="boom")})
    export_csv(result, tmp_path)
    assert read_csv(tmp_path / "sweep_a2_m0.csv") == [["i", "E_0", "E_1", "t3_0", "t3_1"]]
    assert read_csv(tmp_path / "summary.csv")[1][-1] == "error"
    assert "boom" in (tmp_path / "diagnostics.txt").read_text()


def test_export_io_error_names_path(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError, match="file"):
        export_csv(SweepResult(SweepConfig()), blocker / "sub")
