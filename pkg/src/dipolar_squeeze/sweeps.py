"""Sweep configuration, orchestration and deterministic tabular output."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .bogoliubov import effective_params, optimal_time, xi2_qfi_approx
from .checks import DEFAULT_C_GRID, run_all
from .dynamics import (
    CHUNK,
    DEFAULT_SAMPLES,
    DEFAULT_WINDOW,
    DEFAULT_WINDOW_SAMPLES,
    evolve,
    state_kind_name,
    steady_average,
)
from .errors import DomainError, NumericalError
from .fock import ORACLE_CAP, ModelParams, check_cap
from .ground import global_ground
from .observables import moments_fixed_m, qfi_max, squeezing_xi_x

MODES = ("ground_scan", "dynamics", "steady_scan", "bogoliubov_compare", "oracle_check")
INITIAL_KINDS = ("polar", "twin_fock")
DEFAULT_T_MAX = 10.0
UNITS = {"energy": "|c2'|", "time": "hbar/|c2'| (hbar=1)"}

COLUMNS = {
    "ground_scan": ("N", "c", "m_star", "energy", "xi2", "xi2_db", "phi_opt", "f_max",
                    "f_max_over_4N2", "q_plus_mean", "q_plus_var", "n0_frac"),
    "dynamics": ("t", "xi2_db", "f_max", "n0_frac", "dq_plus_sq"),
    "steady_scan": ("c", "initial_kind", "avg_xi2_db", "avg_n0_frac", "undefined_sample_count"),
    "bogoliubov_compare": ("c", "regime_valid", "t", "xi2_exact", "xi2_approx", "f_exact_over_4N",
                           "f_approx_over_4N", "abs_rel_err"),
    "oracle_check": ("suite", "N", "max_deviation", "tolerance", "passed"),
}


@dataclass(frozen=True)
class SweepConfig:
    mode: str
    n_atoms: Tuple[int, ...] = (100,)
    c_values: Tuple[float, ...] = (0.0,)
    initial_kinds: Tuple[str, ...] = INITIAL_KINDS
    t_max: Optional[float] = None
    samples: int = DEFAULT_SAMPLES
    average_window: Tuple[float, float] = DEFAULT_WINDOW
    window_samples: int = DEFAULT_WINDOW_SAMPLES
    output_path: Optional[str] = None
    output_format: str = "csv"
    parallelism: int = 1

    def __post_init__(self):
        if self.mode not in MODES:
            raise DomainError(f"unknown mode {self.mode!r}")
        if not self.n_atoms or any(n < 1 for n in self.n_atoms):
            raise DomainError("n_atoms must be positive")
        if not self.c_values:
            raise DomainError("c grid is empty")
        if any(b <= a for a, b in zip(self.c_values, self.c_values[1:])):
            raise DomainError("c grid must be strictly increasing")
        if self.t_max is not None and not self.t_max > 0:
            raise DomainError("t_max must be positive")
        if self.samples < 1 or self.window_samples < 1 or self.parallelism < 1:
            raise DomainError("sample counts and parallelism must be >= 1")
        lo, hi = self.average_window
        if not lo < hi:
            raise DomainError(f"empty averaging window {self.average_window}")
        if self.output_format not in ("csv", "json"):
            raise DomainError(f"output_format must be csv or json, got {self.output_format!r}")
        bad = [k for k in self.initial_kinds if k not in INITIAL_KINDS]
        if bad:
            raise DomainError(f"unknown initial kinds {bad}")

    def echo(self) -> Dict[str, Any]:
        """Config fields that determine the output (excludes destination and worker count)."""
        d = asdict(self)
        d.pop("output_path")
        d.pop("parallelism")
        return d


# ---------------------------------------------------------------------------
# config parsing


def parse_config_text(text: str) -> Dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    values: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        sep = "=" if "=" in line else ":" if ":" in line else None
        if sep is None:
            raise DomainError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split(sep, 1))
        values[key.replace("-", "_")] = value
    return values


def load_config_file(path: str) -> Dict[str, str]:
    with open(path, encoding="utf-8") as fh:
        return parse_config_text(fh.read())


def _split(value) -> List[str]:
    if isinstance(value, (list, tuple)):
        return [str(v) for v in value]
    return [v for v in (p.strip() for p in str(value).split(",")) if v]


def build_config(mode: str, values: Dict[str, Any]) -> SweepConfig:
    """Combine raw key/value settings (config file merged with flags) into a SweepConfig."""
    v = {k: val for k, val in values.items() if val is not None}
    kw: Dict[str, Any] = {"mode": mode}
    if "n_atoms" in v:
        kw["n_atoms"] = tuple(int(x) for x in _split(v["n_atoms"]))
    if "c_list" in v:
        kw["c_values"] = tuple(float(x) for x in _split(v["c_list"]))
    elif "c_start" in v or "c_stop" in v or "c_count" in v:
        start = float(v.get("c_start", 0.0))
        stop = float(v.get("c_stop", start))
        count = int(v.get("c_count", 1))
        if count < 1:
            raise DomainError("c_count must be >= 1")
        if count == 1 and stop != start:
            raise DomainError("c_count=1 requires c_start == c_stop")
        kw["c_values"] = tuple(float(x) for x in np.linspace(start, stop, count))
    if "initial_kind" in v:
        kw["initial_kinds"] = tuple(state_kind_name(x) for x in _split(v["initial_kind"]))
    if "t_max" in v:
        kw["t_max"] = float(v["t_max"])
    for key in ("samples", "window_samples", "parallelism"):
        if key in v:
            kw[key] = int(v[key])
    if "window_lo" in v or "window_hi" in v:
        kw["average_window"] = (float(v.get("window_lo", DEFAULT_WINDOW[0])),
                                float(v.get("window_hi", DEFAULT_WINDOW[1])))
    if "output_path" in v:
        kw["output_path"] = str(v["output_path"])
    if "output_format" in v:
        kw["output_format"] = str(v["output_format"])
    return SweepConfig(**kw)


# ---------------------------------------------------------------------------
# tables


@dataclass
class Table:
    columns: Tuple[str, ...]
    rows: List[Tuple[Any, ...]] = field(default_factory=list)


def _fmt_csv(value) -> str:
    if value is None:
        return "NA"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        if math.isnan(value):
            return "NA"
        return format(float(value), ".17g")
    return str(value)


def _json_value(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return None if math.isnan(value) else float(value)
    return value


def render(table: Table, fmt: str, config: SweepConfig) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([_fmt_csv(x) for x in row])
        return buf.getvalue()
    payload = {
        "metadata": {"config": config.echo(), "version": __version__, "units": UNITS},
        "rows": [{c: _json_value(x) for c, x in zip(table.columns, row)} for row in table.rows],
    }
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def write_table(table: Table, config: SweepConfig) -> str:
    text = render(table, config.output_format, config)
    if config.output_path:
        with open(config.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


# ---------------------------------------------------------------------------
# workers (module level so they pickle)


def _pmap(fn: Callable, items: Sequence, jobs: int) -> List:
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _ground_row(point: Tuple[int, float]) -> Tuple:
    n, c = point
    try:
        g = global_ground(ModelParams(n, c))
        mom = moments_fixed_m(g.state)
    except NumericalError as exc:
        raise NumericalError(f"ground state failed at N={n}, c={c!r}: {exc}") from exc
    sq = squeezing_xi_x(mom)
    f = qfi_max(mom).f_max
    return (n, c, g.m_star, g.energy, sq.value, sq.db, sq.phi_opt, f, f / (4 * n * n),
            mom.q_plus_mean, mom.q_plus_var, mom.populations[1] / n)


def run_ground_scan(config: SweepConfig) -> Table:
    points = [(n, c) for n in config.n_atoms for c in config.c_values]
    return Table(COLUMNS["ground_scan"], _pmap(_ground_row, points, config.parallelism))


def _single(values: Tuple, name: str):
    if len(values) != 1:
        raise DomainError(f"dynamics needs exactly one {name}, got {len(values)}")
    return values[0]


def _dynamics_rows(job) -> List[Tuple]:
    n, c, kind, times = job
    params = ModelParams(n, c)
    obs = evolve(params, kind, times, keep_states=False).observables
    return [(float(t), float(d), float(f), float(n0), float(q))
            for t, d, f, n0, q in zip(times, obs.xi2_db, obs.f_max, obs.n0_frac, obs.dq_plus_sq)]


def run_dynamics(config: SweepConfig) -> Table:
    n = _single(config.n_atoms, "N")
    c = _single(config.c_values, "c")
    kind = _single(config.initial_kinds, "initial state")
    t_max = DEFAULT_T_MAX if config.t_max is None else config.t_max
    times = np.linspace(0.0, t_max, config.samples)
    if config.parallelism <= 1:
        rows = _dynamics_rows((n, c, kind, times))
    else:
        # chunk edges align with the propagator's internal chunks
        jobs = [(n, c, kind, times[i:i + CHUNK]) for i in range(0, times.size, CHUNK)]
        rows = [r for part in _pmap(_dynamics_rows, jobs, config.parallelism) for r in part]
    return Table(COLUMNS["dynamics"], rows)


def _steady_row(job) -> Tuple:
    n, c, kind, window, samples = job
    avg = steady_average(ModelParams(n, c), kind, window, samples)
    return (c, kind, avg.xi2_db, avg.n0_frac, avg.undefined_count)


def run_steady_scan(config: SweepConfig) -> Table:
    n = _single(config.n_atoms, "N")
    jobs = [(n, c, kind, config.average_window, config.window_samples)
            for kind in config.initial_kinds for c in config.c_values]
    return Table(COLUMNS["steady_scan"], _pmap(_steady_row, jobs, config.parallelism))


def _bogoliubov_rows(job) -> List[Tuple]:
    n, c, t_max, samples = job
    params = ModelParams(n, c)
    bp = effective_params(params)
    if t_max is None:
        if not bp.regime_valid:
            return [(c, False, 0.0, math.nan, math.nan, math.nan, math.nan, math.nan)]
        t_max = optimal_time(bp)
    times = np.linspace(0.0, t_max, samples)
    obs = evolve(params, "polar", times, keep_states=False).observables
    f_exact = obs.f_max / (4 * n)
    if bp.regime_valid:
        xi_a, f_a = xi2_qfi_approx(bp, n, times)
        f_a = f_a / (4 * n)
        err = np.abs(obs.xi2 - xi_a) / xi_a
    else:
        xi_a = f_a = err = np.full(times.size, math.nan)
    return [(c, bool(bp.regime_valid), float(t), float(xe), float(xa), float(fe), float(fa), float(e))
            for t, xe, xa, fe, fa, e in zip(times, obs.xi2, xi_a, f_exact, f_a, err)]


def run_bogoliubov_compare(config: SweepConfig) -> Table:
    n = _single(config.n_atoms, "N")
    jobs = [(n, c, config.t_max, config.samples) for c in config.c_values]
    parts = _pmap(_bogoliubov_rows, jobs, config.parallelism)
    return Table(COLUMNS["bogoliubov_compare"], [r for part in parts for r in part])


def _oracle_rows(job) -> List[Tuple]:
    n, c_grid = job
    return [(r.suite, r.n_atoms, r.max_deviation, r.tolerance, r.passed) for r in run_all([n], c_grid)]


def run_oracle_check(config: SweepConfig, c_grid: Iterable[float] = DEFAULT_C_GRID) -> Tuple[Table, bool]:
    """Returns the report table and whether every suite passed."""
    for n in config.n_atoms:
        check_cap(n, ORACLE_CAP)
    jobs = [(n, tuple(c_grid)) for n in config.n_atoms]
    rows = [r for part in _pmap(_oracle_rows, jobs, config.parallelism) for r in part]
    return Table(COLUMNS["oracle_check"], rows), all(r[-1] for r in rows)


RUNNERS = {
    "ground_scan": run_ground_scan,
    "dynamics": run_dynamics,
    "steady_scan": run_steady_scan,
    "bogoliubov_compare": run_bogoliubov_compare,
}

