"""Contextuality gap, non-enhancement regions and parameter sweeps."""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError
from .noncontextual import nc_bound_theorem1, nc_bound_theorem2
from .quantum import (
    DEFAULT_SEARCH,
    mixed_quantum_success,
    quantum_success_closed,
    ud_failure_threshold,
)
from .qubit import DiscriminationInstance, NoisyInstance

GAP_GUARD = 1e-10
SCAN_STEP = 1e-3
SNAP_WINDOW = 2e-3
MAX_AXIS_POINTS = 2000


@dataclass(frozen=True)
class GapProfile:
    Q: float
    quantum: float
    nc_bound: float
    gap: float
    enhanced: bool
    quantum_regime: str = ""
    nc_regime: str = ""


@dataclass(frozen=True)
class RegionReport:
    """Failure-probability intervals where the quantum optimum falls strictly
    below the noncontextual bound."""

    intervals: list
    analytic_upper_hint: float = None

    @property
    def length(self):
        return sum(hi - lo for lo, hi in self.intervals)


@dataclass(frozen=True)
class SweepRow:
    q1: float
    c: float
    eps: float
    Q: float
    quantum: float
    nc_bound: float
    gap: float
    enhanced: bool


def _profile(Q, quantum, nc):
    g = quantum.success - nc.value
    return GapProfile(
        Q, quantum.success, nc.value, g, g >= -GAP_GUARD, quantum.regime.value, nc.regime.value
    )


def gap(inst, Q, search=DEFAULT_SEARCH):
    """Quantum optimum minus noncontextual bound at failure probability ``Q``.

    Pure instances use the two closed forms. Noisy instances (equal priors
    only) use the POVM oracle against the balanced-measurement bound; at
    ``eps = 1`` the states are pure and the pure-state bound applies instead.
    """
    if isinstance(inst, NoisyInstance):
        inst.require_equal_priors()
        quantum = mixed_quantum_success(inst, Q, search)
        if inst.eps == 1.0:
            nc = nc_bound_theorem1(inst.base, Q)
        else:
            nc = nc_bound_theorem2(inst, Q)
        return _profile(Q, quantum, nc)
    return _profile(Q, quantum_success_closed(inst, Q), nc_bound_theorem1(inst, Q))


def _find_intervals(strict_gap, q_grid, tol):
    """Intervals where ``strict_gap(Q) < -GAP_GUARD``, located by scanning
    ``q_grid`` and refining every sign change with Brent's method."""

    def h(Q):
        return strict_gap(Q) + GAP_GUARD

    values = np.array([h(Q) for Q in q_grid])
    negative = values < 0.0
    intervals = []
    start = q_grid[0] if negative[0] else None
    for i in range(1, len(q_grid)):
        if negative[i] == negative[i - 1]:
            continue
        a, b = q_grid[i - 1], q_grid[i]
        root = brentq(h, a, b, xtol=tol, rtol=4 * np.finfo(float).eps)
        if negative[i]:
            start = root
        else:
            intervals.append((start, root))
            start = None
    if start is not None:
        intervals.append((start, q_grid[-1]))
    return intervals


def _check_tol(tol):
    tol = float(tol)
    if not (1e-12 <= tol <= 1e-3):
        raise DomainError("tol", "tol must lie in [1e-12, 1e-3]")
    return tol


def _scan_grid(step):
    n = int(round(1.0 / step))
    return np.linspace(0.0, 1.0, n + 1)


def non_enhancement_interval(inst, tol=1e-8, step=SCAN_STEP):
    """Non-enhancement intervals for a pure instance.

    The upper end of the last interval is snapped to the unambiguous
    threshold ``2 sqrt(q1 q2 c)`` when it lies within 2e-3 of it (the gap
    vanishes quadratically there, so the guarded root sits slightly below).
    """
    tol = _check_tol(tol)
    if not (0.0 < inst.c < 1.0):
        raise DomainError("c", "c must lie in (0,1) for region finding")
    threshold = ud_failure_threshold(inst)

    def strict_gap(Q):
        return quantum_success_closed(inst, Q).success - nc_bound_theorem1(inst, Q).value

    intervals = _find_intervals(strict_gap, _scan_grid(step), tol)
    if intervals and abs(intervals[-1][1] - threshold) <= SNAP_WINDOW:
        intervals[-1] = (intervals[-1][0], threshold)
    return RegionReport(intervals, threshold)


def mixed_non_enhancement_interval(inst, tol=1e-8, step=SCAN_STEP, search=DEFAULT_SEARCH, q_grid=None):
    """Non-enhancement intervals for a noisy equal-prior instance (oracle based)."""
    tol = _check_tol(tol)
    inst.require_equal_priors()

    def strict_gap(Q):
        return gap(inst, float(Q), search).gap

    grid = _scan_grid(step) if q_grid is None else np.asarray(q_grid, dtype=float)
    intervals = _find_intervals(strict_gap, grid, tol)
    hint = ud_failure_threshold(inst.base) if inst.eps == 1.0 else None
    if hint is not None and intervals and abs(intervals[-1][1] - hint) <= SNAP_WINDOW:
        intervals[-1] = (intervals[-1][0], hint)
    return RegionReport(intervals, hint)


def linspace_range(lo, hi, count, name="range"):
    """Inclusive ``count``-point range; enforces the per-axis resolution cap."""
    count = int(count)
    if count < 1:
        raise DomainError(name, f"{name} needs at least one point")
    if count > MAX_AXIS_POINTS:
        raise DomainError(name, f"{name} resolution {count} exceeds the cap of {MAX_AXIS_POINTS} points")
    if count == 1:
        if lo != hi:
            raise DomainError(name, f"{name} with one point needs lo == hi")
        return np.array([float(lo)])
    return np.linspace(float(lo), float(hi), count)


def _check_axis(values, name):
    values = np.atleast_1d(np.asarray(values, dtype=float))
    if len(values) > MAX_AXIS_POINTS:
        raise DomainError(name, f"{name} resolution {len(values)} exceeds the cap of {MAX_AXIS_POINTS} points")
    return values


def sweep(q1_values, Q_values, c):
    """Pure-state gap table, one row per (q1, Q) cell, q1-major."""
    q1_values = _check_axis(q1_values, "q1")
    Q_values = _check_axis(Q_values, "Q")
    rows = []
    for q1 in q1_values:
        inst = DiscriminationInstance(float(q1), c)
        for Q in Q_values:
            p = gap(inst, float(Q))
            rows.append(SweepRow(inst.q1, inst.c, None, p.Q, p.quantum, p.nc_bound, p.gap, p.enhanced))
    return rows


def mixed_sweep(c, eps_values, Q_values, search=DEFAULT_SEARCH, tol=1e-8):
    """Noisy-state gap table (equal priors) plus a region report per ``eps``.

    Regions are located by scanning ``Q_values`` and refining sign changes.
    Returns ``(rows, reports)`` with ``reports`` keyed by ``eps``.
    """
    eps_values = _check_axis(eps_values, "eps")
    Q_values = _check_axis(Q_values, "Q")
    rows = []
    reports = {}
    for eps in eps_values:
        inst = NoisyInstance.equal_prior(c, float(eps))
        for Q in Q_values:
            p = gap(inst, float(Q), search)
            rows.append(SweepRow(0.5, inst.c, inst.eps, p.Q, p.quantum, p.nc_bound, p.gap, p.enhanced))
        if len(Q_values) >= 2:
            reports[inst.eps] = mixed_non_enhancement_interval(inst, tol, search=search, q_grid=Q_values)
    return rows, reports


__all__ = [
    "GapProfile",
    "RegionReport",
    "SweepRow",
    "gap",
    "linspace_range",
    "mixed_non_enhancement_interval",
    "mixed_sweep",
    "non_enhancement_interval",
    "sweep",
]
