"""
Trace directory layout:

    positions.csv   t, end-effector coordinates per agent, centroid
    errors.csv      t, edge errors (e1..e|E|, or e<k>_<axis> for displacements)
    joints.csv      t, q, xi, sigma_min(J) per agent
    estimates.csv   t, a_hat per agent (only t when the law keeps no estimate)
    controls.csv    t, u and eta per agent
    lyapunov.csv    t, U1, U2, U3, V_eta
    summary.json    meta, final metrics, diagnostics

Each header cell reads "name [unit]". Numbers are written with %.17g so a
rerun with the same inputs produces byte-identical files.
"""

import json
import logging
import os
from typing import Any, Callable, Optional

import numpy as np

from backend.sim.trace import LYAPUNOV, SimulationTrace
from utils.error import TraceIOError, UsageError

logger = logging.getLogger(__name__)

AXES = "xyz"
NUMBER_FORMAT = "%.17g"
SUMMARY = "summary.json"


class Column:
    "One signal laid out over a block of columns; labels follow C order of the per-sample shape."

    def __init__(self, signal: str, shape: Callable[[dict], tuple], label: Callable[..., str], unit: Any) -> None:
        self.signal = signal
        self.shape = shape
        self.label = label
        self.unit = unit

    def labels(self, meta: dict) -> list[str]:
        unit = self.unit(meta) if callable(self.unit) else self.unit
        return ["%s [%s]" % (self.label(*index), unit) for index in np.ndindex(*self.shape(meta))]

    def width(self, meta: dict) -> int:
        return int(np.prod(self.shape(meta), dtype=int))


def _agents(meta: dict) -> int:
    return int(meta.get("agents", 0))


def _edge_shape(meta: dict) -> tuple:
    if meta.get("flavor") == "displacement":
        return (int(meta.get("edges", 0)), int(meta.get("dimension", 2)))
    return (int(meta.get("edges", 0)),)


def _edge_label(k: int, axis: Optional[int] = None) -> str:
    return "e%d" % (k + 1) if axis is None else "e%d_%s" % (k + 1, AXES[axis])


def _edge_unit(meta: dict) -> str:
    return "m" if meta.get("flavor") == "displacement" else "m^2"


def _per_joint(name: str) -> Callable[..., str]:
    return lambda i, j: "%s%d_%d" % (name, i + 1, j + 1)


TABLES: dict[str, list[Column]] = {
    "positions": [
        Column("x", lambda m: (_agents(m), int(m.get("dimension", 2))), lambda i, j: "%s%d" % (AXES[j], i + 1), "m"),
        Column("centroid", lambda m: (int(m.get("dimension", 2)),), lambda j: "c%s" % AXES[j], "m"),
    ],
    "errors": [Column("e", _edge_shape, _edge_label, _edge_unit)],
    "joints": [
        Column("q", lambda m: (_agents(m), int(m.get("dof", 0))), _per_joint("q"), "rad"),
        Column("xi", lambda m: (_agents(m), int(m.get("dof", 0))), _per_joint("xi"), "rad/s"),
        Column("sigma", lambda m: (_agents(m),), lambda i: "sigma%d" % (i + 1), "m"),
    ],
    "estimates": [
        Column("a_hat", lambda m: (_agents(m), int(m.get("params", 0))), _per_joint("a"), "m"),
    ],
    "controls": [
        Column("u", lambda m: (_agents(m), int(m.get("dof", 0))), _per_joint("u"), "N m"),
        Column("eta", lambda m: (_agents(m), int(m.get("dof", 0))), _per_joint("eta"), "N m"),
    ],
    "lyapunov": [Column(name, lambda m: (), lambda name=name: name, "J") for name in LYAPUNOV],
}


def _header(columns: list[Column], meta: dict) -> list[str]:
    cells = ["t [s]"]
    for column in columns:
        cells.extend(column.labels(meta))
    return cells


def _present(trace: SimulationTrace, columns: list[Column]) -> list[Column]:
    # an empty trace keeps every column the layout allows
    if len(trace) == 0:
        return columns
    return [column for column in columns if getattr(trace, column.signal) is not None]


def _jsonable(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError("%s is not serializable" % type(value).__name__)


def _write_table(path: str, header: list[str], rows: np.ndarray) -> None:
    try:
        np.savetxt(path, rows, fmt=NUMBER_FORMAT, delimiter=",", header=",".join(header), comments="")
    except OSError as e:
        raise TraceIOError(path, e.strerror or str(e))


def write_trace(trace: SimulationTrace, directory: str, diagnostics: Optional[dict] = None) -> list[str]:
    "Writes the six signal tables and the run summary into `directory`; returns the written paths."
    try:
        os.makedirs(directory, exist_ok=True)
    except OSError as e:
        raise TraceIOError(directory, e.strerror or str(e))

    meta = trace.meta
    written = []
    for table, columns in TABLES.items():
        columns = _present(trace, columns)
        blocks = [trace.t.reshape(-1, 1)]
        for column in columns:
            if len(trace):
                blocks.append(getattr(trace, column.signal).reshape(len(trace), -1))
            else:
                blocks.append(np.zeros((0, column.width(meta))))
        path = os.path.join(directory, table + ".csv")
        _write_table(path, _header(columns, meta), np.hstack(blocks))
        written.append(path)

    summary = {
        "meta": meta,
        "metrics": trace.metrics,
        "singularity_warnings": trace.singularity_warnings,
        "diagnostics": diagnostics,
    }
    path = os.path.join(directory, SUMMARY)
    try:
        with open(path, "w") as f:
            json.dump(summary, f, indent=2, sort_keys=True, default=_jsonable)
            f.write("\n")
    except OSError as e:
        raise TraceIOError(path, e.strerror or str(e))
    written.append(path)
    logger.info("wrote %d samples to %s", len(trace), directory)
    return written


def _read_table(path: str) -> tuple[list[str], np.ndarray]:
    try:
        with open(path, "r") as f:
            lines = f.read().splitlines()
    except OSError as e:
        raise TraceIOError(path, e.strerror or str(e))
    if not lines:
        raise TraceIOError(path, "missing header row")
    header = lines[0].split(",")
    body = [line for line in lines[1:] if line]
    if not body:
        return header, np.zeros((0, len(header)))
    try:
        return header, np.loadtxt(body, delimiter=",", ndmin=2)
    except ValueError as e:
        raise TraceIOError(path, str(e))


def read_trace(directory: str) -> SimulationTrace:
    "Rebuilds a trace from a directory written by `write_trace`."
    path = os.path.join(directory, SUMMARY)
    try:
        with open(path, "r") as f:
            summary = json.load(f)
    except OSError as e:
        raise TraceIOError(path, e.strerror or str(e))
    except json.JSONDecodeError as e:
        raise TraceIOError(path, str(e))

    meta = summary.get("meta") or {}
    signals: dict[str, np.ndarray] = {}
    t = None
    for table, columns in TABLES.items():
        table_path = os.path.join(directory, table + ".csv")
        header, rows = _read_table(table_path)
        if t is None:
            t = rows[:, 0]
        elif rows.shape[0] != t.size:
            raise TraceIOError(table_path, "%d rows, expected %d" % (rows.shape[0], t.size))
        offset = 1
        for column in columns:
            labels = _header([column], meta)[1:]
            if not labels or labels[0] not in header[offset:offset + 1]:
                continue
            width = column.width(meta)
            block = rows[:, offset:offset + width]
            signals[column.signal] = block.reshape((rows.shape[0],) + tuple(column.shape(meta)))
            offset += width
        if offset != len(header):
            raise TraceIOError(table_path, "unexpected columns %s" % ", ".join(header[offset:]))

    trace = SimulationTrace(meta, t=t, **signals)
    trace.metrics = summary.get("metrics") or {}
    trace.singularity_warnings = int(summary.get("singularity_warnings") or 0)
    return trace


def require_samples(trace: SimulationTrace) -> SimulationTrace:
    if len(trace) == 0:
        raise UsageError("the trace is empty")
    return trace
