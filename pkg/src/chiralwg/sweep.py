"""Parameter sweeps and CSV output."""

from __future__ import annotations

import csv
import io
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .config import apply_parameter
from .dynamics import assemble_liouvillian, solve_steady
from .errors import ChiralWGError
from .observables import compute_stats

logger = logging.getLogger(__name__)

WORKERS_ENV = "CHIRALWG_WORKERS"

STAT_COLUMNS = (
    "direction", "p", "t_re", "t_im", "r_re", "r_im", "T", "R",
    "I_c_T", "I_inc_T", "I_c_R", "I_inc_R", "g2_T", "g2_R", "purity", "leakage", "method",
)


@dataclass(frozen=True)
class PointResult:
    stats: object = None
    method: str = ""
    error: str = ""

    def row(self):
        if self.stats is None:
            return {c: None for c in STAT_COLUMNS} | {"diagnostics": self.error}
        s = self.stats
        t = s.t if s.t is not None else None
        r = s.r if s.r is not None else None
        return {
            "direction": s.direction, "p": s.p,
            "t_re": None if t is None else t.real, "t_im": None if t is None else t.imag,
            "r_re": None if r is None else r.real, "r_im": None if r is None else r.imag,
            "T": s.T, "R": s.R,
            "I_c_T": s.I_c_T, "I_inc_T": s.I_inc_T, "I_c_R": s.I_c_R, "I_inc_R": s.I_inc_R,
            "g2_T": s.g2_T, "g2_R": s.g2_R, "purity": s.purity, "leakage": s.leakage,
            "method": self.method, "diagnostics": "",
        }


def solve_point(config):
    """Full pipeline for one scenario; failures come back as diagnostics."""
    try:
        chain = config.chain()
        rho = solve_steady(assemble_liouvillian(chain, config.drive), chain, config.drive)
        return PointResult(compute_stats(chain, config.drive, rho), rho.method)
    except (ChiralWGError, ArithmeticError, np.linalg.LinAlgError) as exc:
        logger.warning("point failed: %s", exc)
        return PointResult(error=f"{type(exc).__name__}: {exc}")


def default_workers():
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            logger.warning("ignoring non-integer %s=%r", WORKERS_ENV, env)
    return os.cpu_count() or 1


def map_points(configs, workers=None):
    """Solve scenarios in grid order, optionally in a process pool."""
    workers = default_workers() if workers is None else workers
    configs = list(configs)
    if workers <= 1 or len(configs) < 2:
        return [solve_point(c) for c in configs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(solve_point, configs, chunksize=max(1, len(configs) // (4 * workers))))


def orient_drive(config, direction):
    """Move the config's active drive amplitude onto the requested port."""
    from .model import Drive

    d = config.drive
    amp = d.forward if d.forward != 0 else d.backward
    return config.with_drive(Drive(forward=amp) if direction == "forward" else Drive(backward=amp))


def run_sweep(config, spec, direction=None, workers=None):
    """One row dict per grid point, keyed by index, the swept value and every stat."""
    if direction is not None:
        config = orient_drive(config, direction)
    if direction is None:
        direction = "backward" if config.drive.backward != 0 else "forward"
    grid = spec.grid()
    configs = [apply_parameter(config, spec.parameter, float(x), direction) for x in grid]
    results = map_points(configs, workers)
    rows = []
    for i, (x, res) in enumerate(zip(grid, results)):
        rows.append({"index": i, spec.parameter: float(x)} | res.row())
    return rows


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def format_table(rows, columns=None, comments=()):
    if columns is None:
        columns = list(rows[0]) if rows else []
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def write_table(path, rows, columns=None, comments=()):
    text = format_table(rows, columns, comments)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


def sweep_comments(config, spec, direction):
    return [
        "chiralwg sweep",
        f"parameter: {spec.parameter} from {spec.start!r} to {spec.stop!r} steps {spec.steps} scale {spec.scale}",
        f"drive: {direction or 'as configured'}",
        f"unit: {config.unit}",
        "config: " + json.dumps(config.to_dict(), separators=(",", ":")),
    ]


def read_table(path):
    """Parse a table written by ``write_table``: (comments, rows as dicts of str)."""
    comments, lines = [], []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("#"):
                comments.append(line[1:].strip())
            else:
                lines.append(line)
    return comments, list(csv.DictReader(lines))
