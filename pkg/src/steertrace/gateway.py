"""Gateway emulation: drift detection, state-matrix diffs, trace assembly.

The gateway watches the sampled reflection angles and reconfigures the
surface whenever either angle has drifted by the angular step.  Each
reconfiguration sends one packet per state-changing cell; the resulting
burst sequence is the traffic trace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coding import SurfaceConfig, state_matrix
from .errors import ValidationError
from .geometry import Angles, Trajectory, angle_stream, signed_circular_delta_deg

# Absorbs float round-off when a sample lands exactly on a threshold.
ANGLE_EPS_DEG = 1e-9

NORMAL_INCIDENCE = Angles(0.0, 0.0)


@dataclass(frozen=True)
class GatewayConfig:
    angular_step: float = 5.0  # degrees of drift that trigger a reconfiguration
    sample_dt: float = 1e-3  # s, angle sampling period

    def __post_init__(self):
        if not self.angular_step > 0:
            raise ValidationError("angular_step must be > 0", key="angular_step")
        if not self.sample_dt > 0:
            raise ValidationError("sample_dt must be > 0", key="sample_dt")


@dataclass(frozen=True, slots=True)
class CellUpdate:
    """One packet: the cell at (col, row) switches to ``new_state``."""

    col: int
    row: int
    new_state: int


@dataclass(frozen=True)
class ReconfigEvent:
    """One gateway burst: trigger time, target direction, per-cell updates."""

    t: float
    reflected: Angles
    updates: tuple[CellUpdate, ...]


@dataclass(frozen=True)
class TraceMeta:
    """Everything needed to re-run the scenario that produced a trace."""

    surface: SurfaceConfig
    gateway: GatewayConfig
    incident: Angles
    trajectory: Trajectory


@dataclass(frozen=True)
class TrafficTrace:
    meta: TraceMeta
    events: tuple[ReconfigEvent, ...]

    @property
    def total_packets(self) -> int:
        return sum(len(ev.updates) for ev in self.events)


def detect_events(
    stream: list[tuple[float, Angles]], angular_step: float
) -> list[tuple[float, Angles]]:
    """Pick the samples at which the gateway reconfigures.

    The first sample is always picked (initial configuration).  After that a
    sample is picked whenever its theta, or its phi measured circularly, sits
    at least ``angular_step`` away from the running reference of that angle.
    At each pick the crossed angle's reference advances by a whole number of
    steps, so a motion entering on a step multiple keeps firing on the
    nominal grid instead of accumulating per-sample slack, while the other
    angle re-anchors to the picked sample; the picked angles themselves are
    always the raw samples at each crossing.
    """
    if not angular_step > 0:
        raise ValidationError("angular_step must be > 0", key="angular_step")
    if len(stream) == 0:
        raise ValidationError("stream must not be empty", key="stream")
    a = angular_step
    t_prev, first = stream[0]
    picked = [stream[0]]
    theta_ref = first.theta
    phi_ref = first.phi
    for t, ang in stream[1:]:
        if t <= t_prev:
            raise ValidationError("stream times must be strictly increasing", key="stream")
        t_prev = t
        d_theta = abs(ang.theta - theta_ref)
        d_phi = signed_circular_delta_deg(ang.phi, phi_ref)
        hit_theta = d_theta >= a - ANGLE_EPS_DEG
        hit_phi = abs(d_phi) >= a - ANGLE_EPS_DEG
        if not (hit_theta or hit_phi):
            continue
        picked.append((t, ang))
        if hit_theta:
            steps = math.floor((d_theta + ANGLE_EPS_DEG) / a)
            theta_ref += math.copysign(steps * a, ang.theta - theta_ref)
        else:
            theta_ref = ang.theta
        if hit_phi:
            steps = math.floor((abs(d_phi) + ANGLE_EPS_DEG) / a)
            phi_ref = (phi_ref + math.copysign(steps * a, d_phi)) % 360.0
        else:
            phi_ref = ang.phi
    return picked


def diff_states(old: np.ndarray, new: np.ndarray) -> list[CellUpdate]:
    """Updates turning ``old`` into ``new``, row-major (row outer, column inner)."""
    old = np.asarray(old)
    new = np.asarray(new)
    if old.shape != new.shape:
        raise ValidationError(f"matrix shapes differ: {old.shape} vs {new.shape}")
    return [
        CellUpdate(col=int(i), row=int(j), new_state=int(new[j, i]))
        for j, i in np.argwhere(old != new)
    ]


def run_simulation(
    trajectory: Trajectory,
    surface: SurfaceConfig,
    gateway: GatewayConfig,
    incident: Angles = NORMAL_INCIDENCE,
) -> TrafficTrace:
    """Simulate one scenario end to end and return its traffic trace.

    The surface starts in the all-zero state.  Every detected event is
    recorded, including those whose diff is empty.
    """
    stream = angle_stream(trajectory, gateway.sample_dt)
    current = np.zeros((surface.n_rows, surface.n_cols), dtype=np.int64)
    events = []
    for t, ang in detect_events(stream, gateway.angular_step):
        target = state_matrix(incident, ang, surface)
        events.append(ReconfigEvent(t, ang, tuple(diff_states(current, target))))
        current = target
    meta = TraceMeta(surface, gateway, incident, trajectory)
    return TrafficTrace(meta, tuple(events))


def replay_states(trace: TrafficTrace):
    """Yield (event, matrix) pairs, applying updates cumulatively from zero."""
    m = np.zeros((trace.meta.surface.n_rows, trace.meta.surface.n_cols), dtype=np.int64)
    for ev in trace.events:
        for u in ev.updates:
            m[u.row, u.col] = u.new_state
        yield ev, m.copy()
