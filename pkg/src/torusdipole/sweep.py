"""Current sweeps over (a, m) cells, periodicity and linear-segment extraction.

For each cell the Hamiltonian H(i) = free + i h_lin + i^2 h_quad is
diagonalized on a uniform current grid and the lowest ``levels`` energies
and dipole expectations are recorded.  The half-period I_s is measured from
the data (autocorrelation peak), never assumed.
"""

from __future__ import annotations

import csv
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from torusdipole.operators import Geometry, _parity_free, lambda_terms, parity_transform
from torusdipole.spectral import eigh_blocks

log = logging.getLogger(__name__)

EXTEND_LIMIT = 100.0
MIN_PERIODS = 2.5
EXTEND_TARGET = 2.6
TRUNCATION_TOL = 1e-6
N_MAX_STEP = 20
N_MAX_CAP = 400
CHUNK = 64


class ConfigError(ValueError):
    """Invalid sweep configuration; ``line`` is the offending line number if known."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class PeriodError(ValueError):
    """No significant periodicity in a series."""


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepConfig:
    """Sweep parameters.  Keys of the text format are given in brackets.

    a_list [a]        aspect ratios, default 1.2, 2, 3
    m_list [m]        azimuthal quantum numbers, default 0
    i_grid [i]        lo:hi:steps in units of I_0, default 0:10:1000 (steps = points)
    n_max  [n_max]    Lambda-basis cutoff, default 60
    levels [levels]   lowest levels recorded, default 11
    out    [out]      output directory, default sweep_out
    L_over_R [L_over_R]  wire half-length over major radius, default 8
    """

    a_list: tuple[float, ...] = (1.2, 2.0, 3.0)
    m_list: tuple[int, ...] = (0,)
    i_grid: tuple[float, float, int] = (0.0, 10.0, 1000)
    n_max: int = 60
    levels: int = 11
    out: str = "sweep_out"
    L_over_R: float = 8.0

    def __post_init__(self):
        lo, hi, steps = self.i_grid
        if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
            raise ConfigError(f"current range needs hi > lo (got lo={lo}, hi={hi})")
        if int(steps) != steps or steps < 2:
            raise ConfigError(f"current range needs an integer steps >= 2 (got {steps})")
        if not self.a_list:
            raise ConfigError("at least one aspect ratio is required")
        if any(not a > 1 for a in self.a_list):
            raise ConfigError(f"aspect ratios must exceed 1 (got {list(self.a_list)})")
        if not self.m_list:
            raise ConfigError("at least one m is required")
        if self.n_max < 1:
            raise ConfigError(f"n_max must be positive (got {self.n_max})")
        if not 1 <= self.levels <= 2 * self.n_max + 1:
            raise ConfigError(f"levels must lie in 1..{2 * self.n_max + 1} (got {self.levels})")
        if not self.L_over_R > 0:
            raise ConfigError(f"L_over_R must be positive (got {self.L_over_R})")

    def grid(self) -> np.ndarray:
        lo, hi, steps = self.i_grid
        return np.linspace(lo, hi, int(steps))

    @property
    def step(self) -> float:
        lo, hi, steps = self.i_grid
        return (hi - lo) / (steps - 1)


def _fmt_float(x: float) -> str:
    return f"{x:.15g}"


_KEYS = {"a", "m", "i", "n_max", "levels", "out", "L_over_R"}


def parse_config_text(text: str) -> SweepConfig:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values: dict = {}
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"unknown key {key!r} (known: {', '.join(sorted(_KEYS))})", lineno)
        if key in seen:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        seen.add(key)
        if not value:
            raise ConfigError(f"empty value for {key!r}", lineno)
        try:
            if key == "a":
                values["a_list"] = tuple(float(v) for v in value.split(","))
            elif key == "m":
                values["m_list"] = tuple(int(v) for v in value.split(","))
            elif key == "i":
                parts = value.split(":")
                if len(parts) != 3:
                    raise ConfigError(f"range must be lo:hi:steps, got {value!r}", lineno)
                lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
                if hi <= lo:
                    raise ConfigError(f"range {value!r} violates hi > lo", lineno)
                if steps < 2:
                    raise ConfigError(f"range {value!r} violates steps >= 2", lineno)
                values["i_grid"] = (lo, hi, steps)
            elif key in ("n_max", "levels"):
                values[key] = int(value)
            elif key == "L_over_R":
                values[key] = float(value)
            else:
                values[key] = value
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}", lineno) from None
    try:
        return SweepConfig(**values)
    except ConfigError as exc:
        raise ConfigError(str(exc)) from None


def parse_config(path: str | os.PathLike) -> SweepConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    return parse_config_text(path.read_text())


def dump_config(config: SweepConfig) -> str:
    lo, hi, steps = config.i_grid
    lines = [
        "a = " + ", ".join(_fmt_float(a) for a in config.a_list),
        "m = " + ", ".join(str(m) for m in config.m_list),
        f"i = {_fmt_float(lo)}:{_fmt_float(hi)}:{steps}",
        f"n_max = {config.n_max}",
        f"levels = {config.levels}",
        f"out = {config.out}",
        f"L_over_R = {_fmt_float(config.L_over_R)}",
    ]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# period and segment extraction
# ---------------------------------------------------------------------------

def _lag_correlation(y: np.ndarray, max_lag: int) -> np.ndarray:
    """Pearson correlation of y[:N-k] with y[k:] for k = 0..max_lag."""
    n = len(y)
    size = 1 << int(math.ceil(math.log2(2 * n)))
    fy = np.fft.rfft(y, size)
    cross = np.fft.irfft(fy * np.conj(fy), size)[: max_lag + 1]
    c1 = np.concatenate([[0.0], np.cumsum(y)])
    c2 = np.concatenate([[0.0], np.cumsum(y * y)])
    k = np.arange(max_lag + 1)
    count = n - k
    # head window y[0:n-k], tail window y[k:n]
    s_head, s_tail = c1[n - k], c1[n] - c1[k]
    q_head, q_tail = c2[n - k], c2[n] - c2[k]
    cov = cross - s_head * s_tail / count
    var_head = q_head - s_head**2 / count
    var_tail = q_tail - s_tail**2 / count
    denom = np.sqrt(np.clip(var_head, 0, None) * np.clip(var_tail, 0, None))
    with np.errstate(invalid="ignore", divide="ignore"):
        r = np.where(denom > 0, cov / denom, 0.0)
    return r


def detect_period(i: np.ndarray, values: np.ndarray, min_corr: float = 0.9,
                  max_fraction: float = 0.5) -> float:
    """Period of a uniformly sampled series from its autocorrelation peak.

    Lags up to ``max_fraction`` of the span are searched.  Local maxima of the
    lag correlation after its first dip below zero are candidates; the
    shortest one within 0.05 of the best is refined by a parabola through
    three points.  Raises PeriodError for flat, monotone or aperiodic input.
    """
    i = np.asarray(i, dtype=float)
    y = np.asarray(values, dtype=float)
    if i.shape != y.shape or i.ndim != 1 or len(i) < 8:
        raise PeriodError("need a 1-d series of at least 8 points")
    h = np.diff(i)
    if not np.all(h > 0) or np.ptp(h) > 1e-6 * h.mean():
        raise PeriodError("grid must be uniform and increasing")
    step = float(h.mean())
    y = y - y.mean()
    scale = float(np.max(np.abs(y)))
    if scale == 0 or not np.isfinite(scale) or np.std(y) < 1e-12 * max(1.0, float(np.max(np.abs(values)))):
        raise PeriodError("series is flat")
    max_lag = int(max_fraction * (len(y) - 1))
    if max_lag < 4:
        raise PeriodError("series too short for the lag search")
    r = _lag_correlation(y / scale, max_lag)
    below = np.nonzero(r < 0)[0]
    if len(below) == 0:
        raise PeriodError("lag correlation never turns negative (monotone or too short)")
    start = int(below[0])
    inner = np.arange(max(start, 1), max_lag)
    peaks = inner[(r[inner] >= r[inner - 1]) & (r[inner] > r[inner + 1])]
    if len(peaks) == 0:
        raise PeriodError("no correlation peak within the searched lags")
    best = float(np.max(r[peaks]))
    if best < min_corr:
        raise PeriodError(f"weak periodicity (peak correlation {best:.3f} < {min_corr})")
    k = int(peaks[r[peaks] >= best - 0.05][0])
    left, mid, right = r[k - 1], r[k], r[k + 1]
    curv = left - 2 * mid + right
    shift = 0.5 * (left - right) / curv if curv < 0 else 0.0
    return (k + shift) * step


@dataclass(frozen=True)
class LinearSegment:
    i_start: float
    i_end: float
    slope: float
    intercept: float
    points: int


@dataclass
class SegmentFit:
    """Piecewise-linear description of a sawtooth-like series."""

    segments: list[LinearSegment]
    breakpoints: list[float]
    crossover_widths: list[float]
    ok: bool = True
    message: str = ""

    def slopes(self) -> np.ndarray:
        return np.array([s.slope for s in self.segments])

    def midpoints(self) -> np.ndarray:
        return np.array([0.5 * (s.i_start + s.i_end) for s in self.segments])


def fit_linear_segments(i: np.ndarray, values: np.ndarray, jump_factor: float = 20.0,
                        margin: float = 0.1, min_points: int = 8) -> SegmentFit:
    """Split a series at abrupt sign changes and fit a line to each piece.

    A breakpoint is a run of steps whose increment exceeds ``jump_factor``
    times the median increment and across which the series changes sign;
    its extent is reported as the crossover width.  A fraction ``margin``
    of each piece is dropped at both ends before the least-squares fit.
    Non-sawtooth input gives ``ok=False`` with a message instead of raising.
    """
    i = np.asarray(i, dtype=float)
    y = np.asarray(values, dtype=float)
    dy = np.abs(np.diff(y))
    typical = float(np.median(dy)) if len(dy) else 0.0
    if len(y) < 2 * min_points or typical == 0:
        return SegmentFit([], [], [], False, "series too short or flat for segmentation")
    steep = dy > jump_factor * typical
    runs = []
    j = 0
    while j < len(steep):
        if steep[j]:
            k = j
            while k + 1 < len(steep) and steep[k + 1]:
                k += 1
            runs.append((j, k + 1))  # points j..k+1 span the crossover
            j = k + 1
        else:
            j += 1
    # first and last grid points of the series act as edges when no crossover sits there
    crossings = []
    for lo, hi in runs:
        lo_ext, hi_ext = max(lo - 1, 0), min(hi + 1, len(y) - 1)
        if y[lo_ext] * y[hi_ext] < 0 or (y[lo] == 0 and lo == 0):
            crossings.append((lo, hi))
    if not crossings:
        return SegmentFit([], [], [], False, "no abrupt sign change found (not sawtooth-like)")
    breakpoints = [0.5 * (i[lo] + i[hi]) for lo, hi in crossings]
    widths = [float(i[hi] - i[lo]) for lo, hi in crossings]
    bounds = [(-1, 0)] + crossings + [(len(y) - 1, len(y))]
    segments = []
    for (_, prev_hi), (next_lo, _) in zip(bounds[:-1], bounds[1:]):
        a, b = prev_hi + (prev_hi >= 0), next_lo - (next_lo < len(y) - 1)
        if b - a + 1 < min_points:
            continue
        cut = int(margin * (b - a + 1))
        a, b = a + cut, b - cut
        if b - a + 1 < min_points:
            continue
        slope, intercept = np.polyfit(i[a:b + 1], y[a:b + 1], 1)
        segments.append(LinearSegment(float(i[a]), float(i[b]), float(slope), float(intercept), b - a + 1))
    if not segments:
        return SegmentFit([], breakpoints, widths, False, "no segment long enough to fit")
    return SegmentFit(segments, breakpoints, widths)


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

@dataclass
class CellResult:
    a: float
    m: int
    n_max: int
    i: np.ndarray
    energies: np.ndarray
    t3: np.ndarray
    periods_energy: np.ndarray = field(default_factory=lambda: np.zeros(0))
    periods_t3: np.ndarray = field(default_factory=lambda: np.zeros(0))
    period: float = math.nan
    half_period_drops: np.ndarray = field(default_factory=lambda: np.zeros(0))
    crossover_widths: np.ndarray = field(default_factory=lambda: np.zeros(0))
    diagnostics: list[str] = field(default_factory=list)
    error: str | None = None

    @property
    def levels(self) -> int:
        return self.energies.shape[1]

    @property
    def I_s(self) -> float:
        return 0.5 * self.period

    @property
    def step(self) -> float:
        return float(self.i[1] - self.i[0]) if len(self.i) > 1 else math.nan


@dataclass
class SweepResult:
    config: SweepConfig
    cells: dict[tuple[float, int], CellResult] = field(default_factory=dict)

    @property
    def diagnostics(self) -> list[str]:
        out = []
        for (a, m), cell in self.cells.items():
            out.extend(f"a={a:g} m={m}: {msg}" for msg in cell.diagnostics)
            if cell.error:
                out.append(f"a={a:g} m={m}: ERROR {cell.error}")
        return out


class _CellSolver:
    """Dense solves of one (a, m) cell at a fixed cutoff."""

    def __init__(self, geometry: Geometry, m: int, n_max: int, levels: int):
        self.terms = lambda_terms(geometry, m, n_max)
        self.geometry, self.m, self.n_max, self.levels = geometry, m, n_max, levels
        t3 = self.terms.t3_free
        self.t3_free_h = 0.5 * (t3 + t3.T)
        self.t3_lin_h = 0.5 * (self.terms.t3_lin + self.terms.t3_lin.T)

    def eigenvalues(self, x: float) -> np.ndarray:
        t = self.terms
        return np.linalg.eigvalsh(t.free + x * t.h_lin + (x * x) * t.h_quad)[: self.levels]

    def point(self, x: float) -> tuple[np.ndarray, np.ndarray]:
        t = self.terms
        k = self.levels
        if x == 0.0:
            # parity blocks keep the near-degenerate (+n, -n) pairs unmixed
            free_p = _parity_free(self.geometry.a, self.m, self.n_max)
            w, v = eigh_blocks(free_p, self.n_max + 1)
            w, v = w[:k], parity_transform(self.n_max).T @ v[:, :k]
        else:
            w, v = np.linalg.eigh(t.free + x * t.h_lin + (x * x) * t.h_quad)
            w, v = w[:k], v[:, :k]
        th = self.t3_free_h + x * self.t3_lin_h
        return w, np.einsum("ij,ij->j", v, th @ v)

    def run(self, xs: np.ndarray, jobs: int = 1) -> tuple[np.ndarray, np.ndarray]:
        chunks = [xs[s:s + CHUNK] for s in range(0, len(xs), CHUNK)]

        def work(chunk):
            out = [self.point(float(x)) for x in chunk]
            return np.array([o[0] for o in out]), np.array([o[1] for o in out])

        if jobs > 1 and len(chunks) > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                parts = list(pool.map(work, chunks))
        else:
            parts = [work(c) for c in chunks]
        k = self.levels
        if not parts:
            return np.zeros((0, k)), np.zeros((0, k))
        return np.vstack([p[0] for p in parts]), np.vstack([p[1] for p in parts])


def truncation_drift(geometry: Geometry, m: int, n_max: int, i: float, levels: int) -> float:
    """Largest change of the lowest ``levels`` eigenvalues when n_max doubles."""
    lo = _CellSolver(geometry, m, n_max, levels).eigenvalues(i)
    hi = _CellSolver(geometry, m, 2 * n_max, levels).eigenvalues(i)
    return float(np.max(np.abs(lo - hi)))


def _series_periods(xs: np.ndarray, table: np.ndarray) -> np.ndarray:
    out = np.full(table.shape[1], math.nan)
    for k in range(table.shape[1]):
        try:
            out[k] = detect_period(xs, table[:, k])
        except PeriodError:
            pass
    return out


def _consensus(*period_sets: np.ndarray) -> float:
    vals = np.concatenate(period_sets)
    vals = vals[np.isfinite(vals)]
    return float(np.median(vals)) if len(vals) else math.nan


def _run_cell(config: SweepConfig, a: float, m: int, jobs: int) -> CellResult:
    geometry = Geometry(a, L_over_R=config.L_over_R)
    lo, hi, steps = config.i_grid
    step = config.step
    xs = config.grid()
    n_max = config.n_max
    diagnostics: list[str] = []
    solver = _CellSolver(geometry, m, n_max, config.levels)
    energies, t3 = solver.run(xs, jobs)

    def converged_cutoff(current: int, i_top: float) -> int:
        # truncation guard: raise n_max until doubling moves no eigenvalue by more than the tolerance
        raised = current
        while truncation_drift(geometry, m, raised, i_top, config.levels) > TRUNCATION_TOL:
            if raised + N_MAX_STEP > N_MAX_CAP:
                raise ArithmeticError(f"truncation not converged at i={i_top:.6g} even with n_max={raised}")
            raised += N_MAX_STEP
        return raised

    # the cutoff is certified before every period estimate, since an
    # under-resolved spectrum hides the periodicity; the grid is extended
    # until >= MIN_PERIODS periods are covered or the limit is reached
    while True:
        i_top = float(np.max(np.abs(xs)))
        raised = converged_cutoff(n_max, i_top)
        if raised != n_max:
            diagnostics.append(
                f"n_max raised from {n_max} to {raised}: eigenvalue drift under doubling exceeded "
                f"{TRUNCATION_TOL:g} at i={i_top:.6g}"
            )
            n_max = raised
            solver = _CellSolver(geometry, m, n_max, config.levels)
            energies, t3 = solver.run(xs, jobs)
        period = _consensus(_series_periods(xs, energies), _series_periods(xs, t3))
        span = xs[-1] - lo
        if math.isfinite(period) and span >= MIN_PERIODS * period:
            break
        if xs[-1] >= EXTEND_LIMIT - 0.5 * step:
            diagnostics.append(f"fewer than {MIN_PERIODS} periods even at the extension limit i={EXTEND_LIMIT:g}")
            break
        target = lo + (EXTEND_TARGET * period if math.isfinite(period) else 2 * span)
        target = min(EXTEND_LIMIT, max(target, xs[-1] + step))
        extra = int(math.floor((target - xs[-1]) / step + 1e-9))
        if extra < 1:
            break
        new_x = xs[-1] + step * np.arange(1, extra + 1)
        diagnostics.append(
            f"grid extended from i={xs[-1]:.6g} to i={new_x[-1]:.6g} "
            f"({'period estimate ' + format(period, '.6g') if math.isfinite(period) else 'no period yet'})"
        )
        e_new, t_new = solver.run(new_x, jobs)
        xs = np.concatenate([xs, new_x])
        energies, t3 = np.vstack([energies, e_new]), np.vstack([t3, t_new])

    cell = CellResult(a, m, n_max, xs, energies, t3, diagnostics=diagnostics)
    cell.periods_energy = _series_periods(xs, energies)
    cell.periods_t3 = _series_periods(xs, t3)
    cell.period = _consensus(cell.periods_energy, cell.periods_t3)
    drops, widths = [], []
    for k in range(config.levels):
        fit = fit_linear_segments(xs, t3[:, k])
        if fit.ok and math.isfinite(cell.period):
            interior = [s for s in fit.segments if s.i_start > xs[0] and s.i_end < xs[-1]] or fit.segments
            drops.append(float(np.median([abs(s.slope) for s in interior])) * cell.I_s)
        else:
            drops.append(math.nan)
        widths.append(float(np.max(fit.crossover_widths)) if fit.crossover_widths else math.nan)
    cell.half_period_drops = np.array(drops)
    cell.crossover_widths = np.array(widths)
    return cell


def run_sweep(config: SweepConfig, jobs: int = 1) -> SweepResult:
    """Sweep every (a, m) cell; a failing cell records its error and the rest continue."""
    result = SweepResult(config)
    for a in config.a_list:
        for m in config.m_list:
            try:
                result.cells[(a, m)] = _run_cell(config, a, m, max(1, int(jobs)))
            except Exception as exc:  # noqa: BLE001 - recorded per cell
                log.warning("cell a=%g m=%d failed: %s", a, m, exc)
                empty = np.zeros((0, config.levels))
                result.cells[(a, m)] = CellResult(a, m, config.n_max, np.zeros(0), empty, empty.copy(),
                                                  error=f"{type(exc).__name__}: {exc}")
    return result


# ---------------------------------------------------------------------------
# CSV export
# ---------------------------------------------------------------------------

def _g(x: float) -> str:
    return "nan" if not math.isfinite(x) else f"{x:.12g}"


def cell_filename(a: float, m: int) -> str:
    return f"sweep_a{a:g}_m{m}.csv"


SUMMARY_HEADER = ["a", "m", "n_max", "i_max", "points", "series", "level", "period", "half_period_drop",
                  "crossover_width", "status"]


def export_csv(result: SweepResult, directory: str | os.PathLike) -> list[Path]:
    """Write one table per cell plus ``summary.csv``; returns the written paths."""
    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {directory}: {exc}") from exc
    written = []
    k = result.config.levels
    header = ["i"] + [f"E_{j}" for j in range(k)] + [f"t3_{j}" for j in range(k)]
    summary_rows = []
    for (a, m), cell in result.cells.items():
        path = directory / cell_filename(a, m)
        rows = [[_g(x)] + [_g(v) for v in e] + [_g(v) for v in t]
                for x, e, t in zip(cell.i, cell.energies, cell.t3)]
        _write(path, header, rows)
        written.append(path)
        i_max = _g(float(cell.i[-1])) if len(cell.i) else "nan"
        base = [_g(a), str(m), str(cell.n_max), i_max, str(len(cell.i))]
        if cell.error:
            summary_rows.append(base + ["cell", "", "nan", "nan", "nan", "error"])
            continue
        summary_rows.append(base + ["cell", "", _g(cell.period), "nan", "nan", "ok"])
        for j in range(cell.levels):
            summary_rows.append(base + ["E", str(j), _g(cell.periods_energy[j]), "nan", "nan", "ok"])
            summary_rows.append(base + ["t3", str(j), _g(cell.periods_t3[j]), _g(cell.half_period_drops[j]),
                                        _g(cell.crossover_widths[j]), "ok"])
    path = directory / "summary.csv"
    _write(path, SUMMARY_HEADER, summary_rows)
    written.append(path)
    diag = result.diagnostics
    if diag:
        path = directory / "diagnostics.txt"
        _write_text(path, "\n".join(diag) + "\n")
        written.append(path)
    return written


def _write(path: Path, header: list[str], rows: list[list[str]]) -> None:
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def _write_text(path: Path, text: str) -> None:
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def with_grid(config: SweepConfig, lo: float, hi: float, steps: int) -> SweepConfig:
    return replace(config, i_grid=(float(lo), float(hi), int(steps)))


__all__ = [
    "CellResult", "ConfigError", "LinearSegment", "PeriodError", "SegmentFit", "SweepConfig", "SweepResult",
    "detect_period", "dump_config", "export_csv", "fit_linear_segments", "parse_config", "parse_config_text",
    "run_sweep", "truncation_drift",
]
