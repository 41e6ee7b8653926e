"""Continuous-time averaging flow.

The state obeys, between weight discontinuities,

    dx_i/dt = sum over in-arcs (j, i) of w_ji(t) * (x_j(t) - x_i(t)).

Integration uses an explicit two-stage (trapezoidal) step.  Steps never cross
a weight-family discontinuity, and the step size is capped at half the
reciprocal of the largest total inflow, which keeps the one-step map a convex
combination of the previous state: values stay in the initial hull and the
max/min envelopes are monotone, not just approximately so.  Within a
breakpoint-free stretch every supported family is non-increasing, so the
inflow at the step's left end is also its supremum over the step.

The second stage evaluates weights as left limits at the step end; on-off
families jump there, and the value that governed the interval is the left
one.

Raises ``StepSizeUnderflow`` if the cap drives a step below 1e-12 while real
time still remains.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .weights import Mode, TimeVaryingNetwork

MIN_STEP = 1e-12


class StepSizeUnderflow(RuntimeError):
    def __init__(self, t: float, h: float):
        super().__init__(f"step size underflow at t={t!r}: h={h!r} < {MIN_STEP}")
        self.t = t
        self.h = h


@dataclass(frozen=True)
class ContinuousTrajectory:
    """Sampled solution: one row of ``states`` per accepted step boundary.

    ``step_sizes[k]`` and ``step_max_inflow[k]`` record the step from
    ``times[k]`` to ``times[k+1]`` and the largest per-node inflow used to
    cap it.
    """

    times: np.ndarray
    states: np.ndarray
    step_sizes: np.ndarray
    step_max_inflow: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        states = np.asarray(self.states, dtype=float)
        hs = np.asarray(self.step_sizes, dtype=float)
        xi = np.asarray(self.step_max_inflow, dtype=float)
        if states.ndim != 2 or len(times) != len(states):
            raise ValueError("need matching times and states")
        if len(times) < 1:
            raise ValueError("trajectory cannot be empty")
        if len(hs) != len(times) - 1 or len(xi) != len(hs):
            raise ValueError("need one step record per step")
        if np.any(np.diff(times) <= 0):
            raise ValueError("times must be strictly increasing")
        if not np.all(np.isfinite(states)):
            raise ValueError("states must be finite")
        scale = max(1.0, float(np.max(np.abs(states))))
        slack = 1e-9 * scale
        if np.any(np.diff(states.max(axis=1)) > slack):
            raise ValueError("running maximum increased beyond solver tolerance")
        if np.any(np.diff(states.min(axis=1)) < -slack):
            raise ValueError("running minimum decreased beyond solver tolerance")
        for name, arr in (("times", times), ("states", states),
                          ("step_sizes", hs), ("step_max_inflow", xi)):
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return len(self.times)

    @property
    def n(self) -> int:
        return self.states.shape[1]

    def minima(self) -> np.ndarray:
        return self.states.min(axis=1)

    def maxima(self) -> np.ndarray:
        return self.states.max(axis=1)

    def spreads(self) -> np.ndarray:
        return self.maxima() - self.minima()

    def index_at_or_before(self, t: float) -> int:
        """Index of the last sample time <= t."""
        return int(np.searchsorted(self.times, t, side="right") - 1)


def derivative(net: TimeVaryingNetwork, x: np.ndarray, t: float) -> np.ndarray:
    """Right-hand side of the flow at time ``t``."""
    if net.mode is not Mode.CONTINUOUS:
        raise ValueError("derivative() needs a continuous-mode network")
    x = np.asarray(x, dtype=float)
    dx = np.zeros_like(x)
    for arc in net.arcs():
        tail, head = arc
        w = float(net.weight(arc).eval(t))
        dx[head] += w * (x[tail] - x[head])
    return dx


def _stage(weights, tails, heads, n, x, values):
    """Derivative and per-node inflow from precomputed weight values."""
    dx = np.zeros(n)
    xi = np.zeros(n)
    if len(values):
        np.add.at(dx, heads, values * (x[tails] - x[heads]))
        np.add.at(xi, heads, values)
    return dx, xi


def integrate(
    net: TimeVaryingNetwork,
    x0: np.ndarray,
    t0: float,
    t_end: float,
    h_max: float | None = None,
) -> ContinuousTrajectory:
    """Integrate from ``t0`` to ``t_end``; samples at every step boundary.

    The step is the smallest of: ``h_max``, the distance to the next weight
    discontinuity, half the reciprocal of the largest current inflow, and the
    remaining span.
    """
    if net.mode is not Mode.CONTINUOUS:
        raise ValueError("integrate() needs a continuous-mode network")
    x = np.asarray(x0, dtype=float).copy()
    if x.ndim != 1 or x.size != net.n:
        raise ValueError(f"state must have {net.n} entries")
    if not np.all(np.isfinite(x)):
        raise ValueError("initial state must be finite")
    if not (t_end >= t0 >= 0.0):
        raise ValueError("need 0 <= t0 <= t_end")
    if h_max is not None and h_max <= 0:
        raise ValueError("h_max must be positive when given")

    arcs = net.arcs()
    tails = np.asarray([a[0] for a in arcs], dtype=int)
    heads = np.asarray([a[1] for a in arcs], dtype=int)
    wfs = [net.weight(a) for a in arcs]

    bps = (
        np.unique(np.concatenate([w.breakpoints_between(t0, t_end) for w in wfs]))
        if wfs
        else np.empty(0)
    )
    bp_pos = 0

    times = [t0]
    rows = [x.copy()]
    hs: list[float] = []
    xis: list[float] = []

    t = t0
    while t < t_end:
        w1 = np.asarray([wf.eval(t) for wf in wfs], dtype=float)
        dx1, xi1 = _stage(wfs, tails, heads, net.n, x, w1)
        max_xi = float(xi1.max()) if xi1.size else 0.0

        h = math.inf if h_max is None else h_max
        if max_xi > 0.0:
            h = min(h, 0.5 / max_xi)
        while bp_pos < len(bps) and bps[bp_pos] <= t:
            bp_pos += 1
        remaining = t_end - t
        snapped = False  # landings on known times may be arbitrarily short
        if bp_pos < len(bps) and bps[bp_pos] - t <= min(h, remaining):
            t_next = float(bps[bp_pos])  # land exactly on the discontinuity
            snapped = True
        elif h >= remaining:
            t_next = t_end  # final landing step, however small the remainder
            snapped = True
        else:
            t_next = t + h
        h = t_next - t
        if (h < MIN_STEP and not snapped) or t_next <= t:
            raise StepSizeUnderflow(t, h)  # also guards h vanishing in the ulp of a huge t

        w2 = np.asarray([wf.eval_left(t_next) for wf in wfs], dtype=float)
        x_star = x + h * dx1
        dx2, _ = _stage(wfs, tails, heads, net.n, x_star, w2)
        x = x + 0.5 * h * (dx1 + dx2)

        times.append(t_next)
        rows.append(x.copy())
        hs.append(h)
        xis.append(max_xi)
        t = t_next

    return ContinuousTrajectory(
        np.asarray(times), np.vstack(rows), np.asarray(hs), np.asarray(xis)
    )
