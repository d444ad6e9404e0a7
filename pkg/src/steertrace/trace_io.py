"""Plain-text persistence for traces, workload reports, and heat maps.

Trace files are UTF-8 with LF newlines, one JSON object per line.  Line 1 is
the header::

    {"format_version": 1, "created": "...", "meta": {...}}

and every following line is one reconfiguration event::

    {"t": ..., "theta_r": ..., "phi_r": ..., "updates": [[col, row, state], ...]}

``meta`` snapshots the surface, gateway, incidence, and scenario in full, so
a trace header alone suffices to regenerate the trace.  Floats are rendered
with full round-trip precision and no locale dependence.  ``created``
defaults to the epoch of SOURCE_DATE_EPOCH (or 0 when unset) so identical
scenarios always produce identical bytes.

Heat maps export either as header-less CSV (one line per row) or as plain
PGM (P2, maxval 255, pixels scaled by the matrix maximum).
"""

from __future__ import annotations

import json
import math
import os
from datetime import datetime, timezone
from typing import BinaryIO

import numpy as np

from .coding import SurfaceConfig
from .errors import TraceParseError, TraceWriteError, ValidationError
from .gateway import CellUpdate, GatewayConfig, ReconfigEvent, TraceMeta, TrafficTrace
from .geometry import Angles, Case, CaseParams, Trajectory
from .metrics import WorkloadReport

FORMAT_VERSION = 1

_PGM_MAX_LINE = 70  # plain-PGM line length limit


def format_number(value: float) -> str:
    """Shortest decimal form that round-trips; integral floats drop the '.0'."""
    s = repr(float(value))
    return s[:-2] if s.endswith(".0") else s


def default_created() -> str:
    """Deterministic creation stamp honoring SOURCE_DATE_EPOCH."""
    try:
        epoch = int(os.environ.get("SOURCE_DATE_EPOCH", "0"))
    except ValueError:
        epoch = 0
    return datetime.fromtimestamp(epoch, timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


class _CountingSink:
    """Tracks bytes written so failures can report the offending offset."""

    def __init__(self, dest: BinaryIO):
        self._dest = dest
        self.offset = 0

    def write_line(self, text: str):
        data = text.encode("utf-8") + b"\n"
        try:
            self._dest.write(data)
        except OSError as exc:
            raise TraceWriteError(
                f"write failed at byte offset {self.offset}: {exc}", byte_offset=self.offset
            ) from exc
        self.offset += len(data)


def meta_to_dict(meta: TraceMeta) -> dict:
    p = meta.trajectory.params
    return {
        "surface": {
            "n_cols": meta.surface.n_cols,
            "n_rows": meta.surface.n_rows,
            "d_u": meta.surface.d_u,
            "n_states": meta.surface.n_states,
        },
        "wave": {
            "lambda_i": meta.surface.lambda_i,
            "lambda_r": meta.surface.lambda_r,
        },
        "incidence": {"theta": meta.incident.theta, "phi": meta.incident.phi},
        "gateway": {
            "angular_step": meta.gateway.angular_step,
            "sample_dt": meta.gateway.sample_dt,
        },
        "scenario": {
            "case": meta.trajectory.case_id.value,
            "standoff_distance": p.standoff_distance,
            "speed": p.speed,
            "start_theta": p.start_theta,
            "launch_angle": p.launch_angle,
            "leap_interval": p.leap_interval,
            "rng_seed": p.rng_seed,
            "duration": meta.trajectory.duration,
        },
    }


def meta_from_dict(d: dict) -> TraceMeta:
    surface = SurfaceConfig(
        n_cols=int(d["surface"]["n_cols"]),
        n_rows=int(d["surface"]["n_rows"]),
        d_u=float(d["surface"]["d_u"]),
        n_states=int(d["surface"]["n_states"]),
        lambda_i=float(d["wave"]["lambda_i"]),
        lambda_r=float(d["wave"]["lambda_r"]),
    )
    gateway = GatewayConfig(
        angular_step=float(d["gateway"]["angular_step"]),
        sample_dt=float(d["gateway"]["sample_dt"]),
    )
    incident = Angles(float(d["incidence"]["theta"]), float(d["incidence"]["phi"]))
    sc = d["scenario"]
    params = CaseParams(
        standoff_distance=float(sc["standoff_distance"]),
        speed=float(sc["speed"]),
        start_theta=float(sc["start_theta"]),
        launch_angle=float(sc["launch_angle"]),
        leap_interval=float(sc["leap_interval"]),
        rng_seed=int(sc["rng_seed"]),
    )
    trajectory = Trajectory(Case(sc["case"]), params, float(sc["duration"]))
    return TraceMeta(surface, gateway, incident, trajectory)


def write_trace(trace: TrafficTrace, dest: BinaryIO, created: str | None = None):
    """Serialize a trace; see the module docstring for the format."""
    sink = _CountingSink(dest)
    header = {
        "format_version": FORMAT_VERSION,
        "created": created if created is not None else default_created(),
        "meta": meta_to_dict(trace.meta),
    }
    sink.write_line(json.dumps(header, separators=(",", ":")))
    for ev in trace.events:
        record = {
            "t": ev.t,
            "theta_r": ev.reflected.theta,
            "phi_r": ev.reflected.phi,
            "updates": [[u.col, u.row, u.new_state] for u in ev.updates],
        }
        sink.write_line(json.dumps(record, separators=(",", ":")))


def _parse_line(text: str, line_number: int) -> dict:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TraceParseError(f"invalid JSON: {exc.msg}", line_number) from exc
    if not isinstance(obj, dict):
        raise TraceParseError("expected a JSON object", line_number)
    return obj


def read_trace(source: BinaryIO) -> TrafficTrace:
    """Inverse of :func:`write_trace`; validates structure on load."""
    try:
        text = source.read().decode("utf-8")
    except UnicodeDecodeError as exc:
        raise TraceParseError(f"not valid UTF-8: {exc}", 1) from exc
    lines = text.splitlines()
    if not lines:
        raise TraceParseError("empty file, header missing", 1)

    header = _parse_line(lines[0], 1)
    version = header.get("format_version")
    if version != FORMAT_VERSION:
        raise ValidationError(
            f"unsupported format_version {version!r} (expected {FORMAT_VERSION})",
            key="format_version",
        )
    try:
        meta = meta_from_dict(header["meta"])
    except (KeyError, TypeError) as exc:
        raise TraceParseError(f"bad header meta: {exc!r}", 1) from exc

    surface = meta.surface
    events = []
    last_t = None
    for line_number, line in enumerate(lines[1:], start=2):
        obj = _parse_line(line, line_number)
        try:
            t = float(obj["t"])
            reflected = Angles(float(obj["theta_r"]), float(obj["phi_r"]))
            raw_updates = obj["updates"]
            updates = tuple(
                CellUpdate(col=int(c), row=int(r), new_state=int(s))
                for c, r, s in raw_updates
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise TraceParseError(f"bad event record: {exc!r}", line_number) from exc
        if not math.isfinite(t):
            raise ValidationError(f"line {line_number}: event time must be finite")
        if last_t is not None and t <= last_t:
            raise ValidationError(
                f"line {line_number}: event times must be strictly increasing "
                f"({t!r} after {last_t!r})"
            )
        last_t = t
        seen = set()
        for u in updates:
            if not (0 <= u.col < surface.n_cols and 0 <= u.row < surface.n_rows):
                raise ValidationError(
                    f"line {line_number}: cell ({u.col}, {u.row}) outside the "
                    f"{surface.n_cols}x{surface.n_rows} grid"
                )
            if not 0 <= u.new_state < surface.n_states:
                raise ValidationError(
                    f"line {line_number}: state {u.new_state} outside "
                    f"[0, {surface.n_states})"
                )
            if (u.col, u.row) in seen:
                raise ValidationError(
                    f"line {line_number}: duplicate update for cell ({u.col}, {u.row})"
                )
            seen.add((u.col, u.row))
        events.append(ReconfigEvent(t, reflected, updates))
    return TrafficTrace(meta, tuple(events))


def write_report(report: WorkloadReport, dest: BinaryIO, created: str | None = None):
    """Write a workload report in the same line-delimited object format."""
    sink = _CountingSink(dest)
    header = {
        "format_version": FORMAT_VERSION,
        "created": created if created is not None else default_created(),
        "kind": "workload_report",
    }
    sink.write_line(json.dumps(header, separators=(",", ":")))
    body = {
        "total_packets": report.total_packets,
        "spatial_cv": report.spatial_cv,
        "per_event_changed_fraction": list(report.per_event_changed_fraction),
        "burst_sizes": list(report.burst_sizes),
        "inter_event_times": list(report.inter_event_times),
    }
    sink.write_line(json.dumps(body, separators=(",", ":")))


def read_report(source: BinaryIO) -> WorkloadReport:
    lines = source.read().decode("utf-8").splitlines()
    if len(lines) < 2:
        raise TraceParseError("report needs a header line and a body line", max(1, len(lines)))
    header = _parse_line(lines[0], 1)
    if header.get("format_version") != FORMAT_VERSION:
        raise ValidationError(
            f"unsupported format_version {header.get('format_version')!r}",
            key="format_version",
        )
    body = _parse_line(lines[1], 2)
    try:
        return WorkloadReport(
            per_event_changed_fraction=tuple(float(x) for x in body["per_event_changed_fraction"]),
            total_packets=int(body["total_packets"]),
            burst_sizes=tuple(int(x) for x in body["burst_sizes"]),
            inter_event_times=tuple(float(x) for x in body["inter_event_times"]),
            spatial_cv=float(body["spatial_cv"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise TraceParseError(f"bad report body: {exc!r}", 2) from exc


def export_heatmap(matrix: np.ndarray, fmt: str, dest: BinaryIO):
    """Write a destination matrix as header-less CSV or plain PGM (P2).

    CSV holds one matrix row per line.  PGM pixels are
    round(255 * entry / max entry); an all-zero matrix maps to all-zero
    pixels.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2:
        raise ValidationError("heat-map matrix must be 2-D", key="matrix")
    if not np.all(np.isfinite(m)) or np.any(m < 0):
        raise ValidationError("heat-map entries must be finite and >= 0", key="matrix")
    sink = _CountingSink(dest)
    if fmt == "csv":
        for row in m:
            sink.write_line(",".join(format_number(v) for v in row))
    elif fmt == "pgm":
        peak = m.max()
        if peak > 0:
            pixels = np.rint(255.0 * m / peak).astype(int)
        else:
            pixels = np.zeros(m.shape, dtype=int)
        n_rows, n_cols = m.shape
        sink.write_line("P2")
        sink.write_line(f"{n_cols} {n_rows}")
        sink.write_line("255")
        for row in pixels:
            for chunk in _wrap_tokens([str(v) for v in row], _PGM_MAX_LINE):
                sink.write_line(chunk)
    else:
        raise ValidationError(f"unknown heat-map format {fmt!r}", key="format")


def _wrap_tokens(tokens: list[str], width: int):
    """Join tokens with spaces into lines no longer than ``width`` characters."""
    line = ""
    for tok in tokens:
        if line and len(line) + 1 + len(tok) > width:
            yield line
            line = tok
        else:
            line = tok if not line else f"{line} {tok}"
    if line:
        yield line
