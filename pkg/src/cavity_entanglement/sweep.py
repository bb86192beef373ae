"""Parameter sweeps over (a, kappa): configuration, execution and CSV output."""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
import csv
import io
import logging
import math
import os
import time
import warnings

from .entanglement import (DEFAULT_MAX_N, DEFAULT_TRUNC_TOL, TruncationNotConverged,
                           assemble, entropy_closed, truncation_scan)
from .interaction import (BOUND_MARGIN, DEFAULT_EPS, DEFAULT_QUAD_TOL, AmplitudeBuilder,
                          AtomParams)

log = logging.getLogger(__name__)

CSV_HEADER = ("a", "kappa", "v", "Delta", "N_trunc", "p_vacuum", "sum_FA_sq", "sum_FR_sq",
              "entropy_bits", "converged", "wall_time_ms")
DEFAULT_DELTA = math.sqrt(2.0 * math.pi ** 2)
GRID_KEYS = ("accel", "mass")
SCALAR_KEYS = ("v", "Delta", "L", "eps", "trunc_tol", "quad_tol", "threads", "output")
KEYS = SCALAR_KEYS[:4] + GRID_KEYS + SCALAR_KEYS[4:]


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending line/flag and key."""


@dataclass(frozen=True)
class SweepConfig:
    v: float = 0.5
    Delta: float = DEFAULT_DELTA
    L: float = 1.0
    eps: float = DEFAULT_EPS
    accel_grid: tuple = ()
    mass_grid: tuple = ()
    trunc_tol: float = DEFAULT_TRUNC_TOL
    quad_tol: float = DEFAULT_QUAD_TOL
    threads: int = 1
    output_path: str = "-"
    # written as 0 in single-thread mode unless forced on (keeps output bit-reproducible)
    record_timing: bool = False
    max_N: int = DEFAULT_MAX_N

    def atom(self):
        return AtomParams(self.Delta, self.v, self.eps)

    def points(self):
        """Grid points in output order: acceleration-major, mass-minor."""
        return [(a, k) for a in self.accel_grid for k in self.mass_grid]

    def worker_count(self):
        return self.threads if self.threads > 0 else (os.cpu_count() or 1)


@dataclass(frozen=True)
class SweepRow:
    a: float
    kappa: float
    v: float
    Delta: float
    N_trunc: int
    p_vacuum: float
    sum_FA_sq: float
    sum_FR_sq: float
    entropy_bits: float
    converged: bool
    wall_time_ms: float
    error: str = field(default="", compare=False)

    def csv_fields(self):
        def num(x):
            return repr(float(x))
        return [num(self.a), num(self.kappa), num(self.v), num(self.Delta), str(self.N_trunc),
                num(self.p_vacuum), num(self.sum_FA_sq), num(self.sum_FR_sq),
                num(self.entropy_bits), "true" if self.converged else "false",
                num(self.wall_time_ms)]


# ---------------------------------------------------------------- parsing

def _where(origin):
    return origin if origin else "configuration"


def _number(text, key, origin):
    try:
        x = float(text)
    except ValueError:
        raise ConfigError(f"{_where(origin)}: key '{key}': malformed number {text!r}") from None
    if not math.isfinite(x):
        raise ConfigError(f"{_where(origin)}: key '{key}': value must be finite, got {text!r}")
    return x


def parse_grid(text, key="grid", origin=""):
    """Parse ``start:stop:step`` ranges and single values, comma separated.

    Ranges never go past ``stop``; ``stop`` itself is included when the
    step count lands on it up to rounding (0:0.9:0.1 has ten points). Values
    are rounded to 12 decimals so that e.g. 0.1 * 3 prints as 0.3.
    """
    values = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            raise ConfigError(f"{_where(origin)}: key '{key}': empty grid entry in {text!r}")
        bits = part.split(":")
        if len(bits) == 1:
            values.append(_number(bits[0], key, origin))
            continue
        if len(bits) != 3:
            raise ConfigError(
                f"{_where(origin)}: key '{key}': expected start:stop:step, got {part!r}")
        start, stop, step = (_number(b, key, origin) for b in bits)
        if step <= 0 or stop < start:
            raise ConfigError(
                f"{_where(origin)}: key '{key}': range {part!r} needs step > 0 and stop >= start")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        if count > 100000:
            raise ConfigError(f"{_where(origin)}: key '{key}': range {part!r} is too long")
        values.extend(round(start + k * step, 12) for k in range(count))
    return tuple(values)


def _convert(key, text, origin):
    if key in GRID_KEYS:
        return parse_grid(text, key, origin)
    if key == "output":
        if not text:
            raise ConfigError(f"{_where(origin)}: key 'output': empty path")
        return text
    if key == "threads":
        try:
            n = int(text)
        except ValueError:
            raise ConfigError(
                f"{_where(origin)}: key 'threads': expected an integer, got {text!r}") from None
        if n < 0:
            raise ConfigError(f"{_where(origin)}: key 'threads': must be >= 0, got {n}")
        return n
    return _number(text, key, origin)


def read_config_text(text, source="<config>"):
    """Parse ``key = value`` lines into {key: (value, origin)} without validation."""
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        origin = f"{source}:{lineno}"
        if "=" not in line:
            raise ConfigError(f"{origin}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"{origin}: unknown key '{key}' (known: {', '.join(KEYS)})")
        entries[key] = (_convert(key, value, origin), origin)
    return entries


_FIELD = {"accel": "accel_grid", "mass": "mass_grid", "output": "output_path"}


def build_config(entries, require_grids=True, **extra):
    """Apply defaults and validate merged entries {key: (value, origin)}."""
    kwargs = {_FIELD.get(k, k): val for k, (val, _) in entries.items()}
    kwargs.update(extra)
    cfg = SweepConfig(**kwargs)

    def origin(key):
        return _where(entries.get(key, (None, ""))[1])

    if not 0.0 < cfg.v < 1.0:
        raise ConfigError(f"{origin('v')}: key 'v': velocity must satisfy 0 < v < 1, got {cfg.v}")
    if not cfg.L > 0:
        raise ConfigError(f"{origin('L')}: key 'L': length must be positive, got {cfg.L}")
    if cfg.eps == 0:
        raise ConfigError(f"{origin('eps')}: key 'eps': coupling must be nonzero")
    for key in ("trunc_tol", "quad_tol"):
        if not getattr(cfg, key) > 0:
            raise ConfigError(f"{origin(key)}: key '{key}': tolerance must be positive")
    if require_grids:
        for key, name in (("accel", "acceleration"), ("mass", "mass")):
            if not getattr(cfg, _FIELD[key]):
                raise ConfigError(
                    f"{origin(key)}: key '{key}': no {name} grid given "
                    f"(set '{key} = ...' in the file or pass --{key})")
    bound = 2.0 * cfg.v
    cap = bound * (1.0 - BOUND_MARGIN)
    for a in cfg.accel_grid:
        if a < 0 or a >= bound:
            raise ConfigError(
                f"{origin('accel')}: key 'accel': a = {a!r} violates the kinematic bound "
                f"0 <= a < 2v = {bound!r}")
        if a > cap * (1.0 + 1e-15):
            raise ConfigError(
                f"{origin('accel')}: key 'accel': a = {a!r} exceeds the numerical cap "
                f"2v(1 - {BOUND_MARGIN:g}) = {cap!r}")
        if a * cfg.L >= 2.0:
            raise ConfigError(
                f"{origin('accel')}: key 'accel': a = {a!r} puts the cavity across the "
                f"horizon (a*L = {a * cfg.L!r} >= 2)")
    for k in cfg.mass_grid:
        if k < 0:
            raise ConfigError(f"{origin('mass')}: key 'mass': bare mass must be >= 0, got {k!r}")
    return cfg


def parse_config(text, source="<config>", require_grids=True):
    """Parse and validate configuration text."""
    return build_config(read_config_text(text, source), require_grids=require_grids)


# ---------------------------------------------------------------- execution

def compute_point(cfg, a, kappa):
    """Run the full pipeline at one grid point; failures become a non-converged row."""
    t0 = time.perf_counter()
    atom = cfg.atom()
    error = ""
    amps = None
    converged = False
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            builder = AmplitudeBuilder(atom, a, kappa, L=cfg.L, quad_tol=cfg.quad_tol)
            try:
                amps = truncation_scan(builder, cfg.trunc_tol, max_N=cfg.max_N)
                converged = True
            except TruncationNotConverged as exc:
                amps = exc.amplitudes
                error = str(exc)
    except Exception as exc:  # isolate the point, keep the sweep going
        error = f"{type(exc).__name__}: {exc}"
    elapsed = (time.perf_counter() - t0) * 1e3

    if amps is None:
        nan = math.nan
        row = SweepRow(a, kappa, cfg.v, cfg.Delta, 0, nan, nan, nan, nan, False, elapsed, error)
    else:
        state = assemble(amps)
        fr = state.trace_raw - state.p0_raw
        row = SweepRow(a, kappa, cfg.v, cfg.Delta, amps.N, state.p, state.p0_raw, fr,
                       entropy_closed(state), converged, elapsed, error)
    total = 0.0 if amps is None else amps.total_weight()
    if total > 1e-2:
        log.warning("a=%r kappa=%r: total excitation weight %.3g is not perturbative",
                    a, kappa, total)
    return row


def _task(args):
    return compute_point(*args)


def run_sweep(cfg, progress=None):
    """Yield one SweepRow per grid point in grid order.

    With more than one worker the points run in separate processes; rows are
    still yielded in grid order. Timing is zeroed unless ``record_timing`` is
    set or several workers are used.
    """
    tasks = [(cfg, a, k) for a, k in cfg.points()]
    workers = min(cfg.worker_count(), max(len(tasks), 1))
    keep_time = cfg.record_timing or workers > 1

    def finish(row):
        if row.error:
            log.warning("a=%r kappa=%r not converged: %s", row.a, row.kappa, row.error)
        log.info("a=%r kappa=%r N=%d S=%r (%.0f ms)", row.a, row.kappa, row.N_trunc,
                 row.entropy_bits, row.wall_time_ms)
        if progress is not None:
            progress(row)
        return row if keep_time else replace(row, wall_time_ms=0.0)

    if workers <= 1:
        for t in tasks:
            yield finish(_task(t))
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for row in pool.map(_task, tasks):
            yield finish(row)


def format_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in rows:
        w.writerow(row.csv_fields())
    return buf.getvalue()


def emit_csv(rows, path):
    """Write rows to ``path`` ('-' for stdout). Raises OSError naming the path."""
    text = format_csv(rows)
    if path == "-":
        import sys
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path!r}: {exc.strerror or exc}") from exc
