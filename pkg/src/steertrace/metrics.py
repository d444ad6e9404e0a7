"""Workload metrics computed from traffic traces."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .coding import SurfaceConfig, state_matrix
from .errors import ValidationError
from .gateway import NORMAL_INCIDENCE, TrafficTrace
from .geometry import Angles


@dataclass(frozen=True)
class WorkloadReport:
    """Aggregate burst statistics for one trace."""

    per_event_changed_fraction: tuple[float, ...]
    total_packets: int
    burst_sizes: tuple[int, ...]
    inter_event_times: tuple[float, ...]
    spatial_cv: float


def percent_changed(trace: TrafficTrace) -> list[float]:
    """Fraction of cells updated by each event."""
    n_cells = trace.meta.surface.n_cells
    return [len(ev.updates) / n_cells for ev in trace.events]


def destination_matrix(trace: TrafficTrace) -> np.ndarray:
    """Per-cell share of all packets, shape (n_rows, n_cols); zero if no packets."""
    surface = trace.meta.surface
    counts = np.zeros((surface.n_rows, surface.n_cols), dtype=float)
    for ev in trace.events:
        for u in ev.updates:
            counts[u.row, u.col] += 1
    total = counts.sum()
    return counts / total if total > 0 else counts


def injection_rate(
    trace: TrafficTrace,
    mode: Literal["per_burst", "binned"] = "per_burst",
    bin_width: float | None = None,
) -> list[tuple[float, float]]:
    """Packet injection rate over time, as (t, packets/s) points.

    ``per_burst`` rates each event after the first against the gap to its
    predecessor; ``binned`` counts packets per fixed bin across the scenario
    duration (partial final bin still divided by the full width) and reports
    bin midpoints.
    """
    if mode == "per_burst":
        return [
            (ev.t, len(ev.updates) / (ev.t - prev.t))
            for prev, ev in zip(trace.events, trace.events[1:])
        ]
    if mode != "binned":
        raise ValidationError("mode must be 'per_burst' or 'binned'", key="mode")
    if bin_width is None or not bin_width > 0:
        raise ValidationError("bin_width must be > 0 for binned mode", key="bin_width")
    duration = trace.meta.trajectory.duration
    n_bins = max(1, math.ceil(duration / bin_width))
    counts = [0] * n_bins
    for ev in trace.events:
        counts[min(int(ev.t / bin_width), n_bins - 1)] += len(ev.updates)
    return [((k + 0.5) * bin_width, c / bin_width) for k, c in enumerate(counts)]


def sweep_diff(
    start: Angles,
    end: Angles,
    surface: SurfaceConfig,
    incident: Angles = NORMAL_INCIDENCE,
) -> float:
    """Fraction of cells whose state differs between two steering directions."""
    before = state_matrix(incident, start, surface)
    after = state_matrix(incident, end, surface)
    return float(np.count_nonzero(before != after)) / before.size


def spatial_cv(ratios: np.ndarray) -> float:
    """Population coefficient of variation of a destination matrix; 0 when empty."""
    ratios = np.asarray(ratios, dtype=float)
    mean = ratios.mean()
    if mean == 0:
        return 0.0
    return float(ratios.std() / mean)


def burst_stats(trace: TrafficTrace) -> WorkloadReport:
    """Per-event sizes and fractions, inter-event gaps, totals, spatial CV."""
    sizes = [len(ev.updates) for ev in trace.events]
    gaps = [ev.t - prev.t for prev, ev in zip(trace.events, trace.events[1:])]
    return WorkloadReport(
        per_event_changed_fraction=tuple(percent_changed(trace)),
        total_packets=sum(sizes),
        burst_sizes=tuple(sizes),
        inter_event_times=tuple(gaps),
        spatial_cv=spatial_cv(destination_matrix(trace)),
    )
