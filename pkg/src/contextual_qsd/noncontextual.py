"""Noncontextual upper bounds on the success probability at fixed failure.

Closed forms:

* :func:`nc_bound_theorem1` for two pure states and arbitrary priors;
* :func:`nc_equal_prior_regional`, the same bound for equal priors written
  region by region;
* :func:`nc_bound_theorem2` for depolarized states, equal priors and a
  balanced measurement.

Brute-force counterparts (:func:`nc_bound_grid_oracle`,
:func:`nc_mixed_grid_oracle`) maximize the reduced objectives directly over
the ways of splitting the failure probability between the two preparations.
Hidden-variable distributions are never materialized.
"""

from dataclasses import dataclass
import enum
import math

import numpy as np

from .errors import DomainError, check_unit_interval

DENOMINATOR_GUARD = 1e-14

REGION_LINEAR = "linear"
REGION_RATIONAL = "rational"
REGION_TRIVIAL = "trivial"


class NcRegime(enum.Enum):
    CANDIDATE_MAX = "CandidateMax"
    BALANCED_PIECE = "BalancedPiece"
    TRIVIAL_ONE_MINUS_Q = "TrivialOneMinusQ"


@dataclass(frozen=True)
class NcBoundResult:
    """A bound value with the branch that produced it.

    ``argmax`` is ``(x, z)`` for the winning candidate of the pure-state
    bound; ``piece`` is 1, 2 or 3 for the noisy-state bound.
    """

    value: float
    regime: NcRegime
    argmax: tuple = None
    piece: int = None


@dataclass(frozen=True)
class FailureSplit:
    """Per-preparation failure rates with ``q1 * q1_fail + q2 * q2_fail = Q``."""

    q1_fail: float
    q2_fail: float


@dataclass(frozen=True)
class MixedSplit:
    """Failure rates on the pure component and on its orthogonal complement.

    ``Q = (1+eps)/2 * q_psi + (1-eps)/2 * q_psi_perp``.
    """

    q_psi: float
    q_psi_perp: float


def _check_step(grid_step):
    grid_step = float(grid_step)
    if not (1e-7 <= grid_step <= 1e-2):
        raise DomainError("grid_step", "grid_step must lie in [1e-7, 1e-2]")
    return grid_step


def _priors(inst):
    return (inst.q1, inst.q2)


def f_candidate(inst, Q, x, z):
    """Candidate value f_x(z) of the pure-state bound.

    ``x`` is 1 or 2; ``z`` is the failure rate assigned to preparation ``x``.
    """
    Q = check_unit_interval("Q", Q)
    if x not in (1, 2):
        raise DomainError("x", "x must be 1 or 2")
    q = _priors(inst)
    qx, qo = q[x - 1], q[2 - x]
    z_max = min(Q / qx, inst.c)
    if not (-1e-15 <= z <= z_max + 1e-12):
        raise DomainError("z", f"z must lie in [0, {z_max:.6g}]")
    den = qo - Q + qx * z
    if den <= DENOMINATOR_GUARD:
        raise DomainError("z", "candidate denominator vanishes")
    return (1.0 - Q) - qx * (1.0 - z) * (qo * inst.c - Q + qx * z) / den


def nc_bound_theorem1(inst, Q):
    """Noncontextual bound for two pure states at failure probability ``Q``.

    For ``Q <= q_min c`` the bound is the largest of f_x(z) over x in {1, 2}
    and z in {0, Q/q_x}; otherwise it is ``1 - Q``. Ties go to x=1, then z=0.
    """
    Q = check_unit_interval("Q", Q)
    q = _priors(inst)
    if Q > inst.q_min * inst.c:
        return NcBoundResult(1.0 - Q, NcRegime.TRIVIAL_ONE_MINUS_Q)
    best = None
    for x in (1, 2):
        for z in (0.0, Q / q[x - 1]):
            try:
                val = f_candidate(inst, Q, x, z)
            except DomainError:
                # only reachable at c -> 1, where another candidate gives 1 - Q
                continue
            if best is None or val > best[0] + 1e-15:
                best = (val, x, z)
    return NcBoundResult(best[0], NcRegime.CANDIDATE_MAX, argmax=(best[1], best[2]))


def _split_segment(inst, Q, grid_step):
    q1, q2 = _priors(inst)
    lo = max(0.0, (Q - q2) / q1)
    hi = min(1.0, Q / q1)
    n = max(2, int(math.ceil((hi - lo) / grid_step)) + 1)
    q1_fail = np.linspace(lo, hi, n)
    q2_fail = np.clip((Q - q1 * q1_fail) / q2, 0.0, 1.0)
    return q1_fail, q2_fail


def _reduced(qx, qo, c, Q, zx):
    # f_x as a function of preparation x's failure rate zx (vectorized)
    return (1.0 - Q) - qx * (1.0 - zx) * (qo * c - Q + qx * zx) / (qo - Q + qx * zx)


def nc_bound_grid_oracle(inst, Q, grid_step=1e-5, *, full=False):
    """Brute-force maximum of the case-reduced objective over failure splits.

    The split segment ``q1 Q1 + q2 Q2 = Q`` is sampled at ``grid_step``.
    Where some ``Q_x >= c`` the case bound is ``1 - Q``. Where both rates
    stay below ``c`` the larger of the two reduced objectives f_1(Q1) and
    f_2(Q2) is taken. The exact ends of the both-below-``c`` sub-segment are
    always included as extra candidates.

    With ``full=True`` returns ``(value, FailureSplit)``.
    """
    Q = check_unit_interval("Q", Q)
    grid_step = _check_step(grid_step)
    q1, q2 = _priors(inst)
    c = inst.c
    Q1, Q2 = _split_segment(inst, Q, grid_step)

    # exact sub-segment ends, mapped onto (Q1, Q2)
    extra = []
    for x, (qx, qo) in ((1, (q1, q2)), (2, (q2, q1))):
        zmin = max(0.0, (Q - qo * c) / qx)
        zmax = min(Q / qx, c)
        if zmin <= zmax:
            for z in (zmin, zmax):
                other = (Q - qx * z) / qo
                extra.append((z, other) if x == 1 else (other, z))
    if extra:
        e = np.array(extra)
        Q1 = np.concatenate([Q1, np.clip(e[:, 0], 0.0, 1.0)])
        Q2 = np.concatenate([Q2, np.clip(e[:, 1], 0.0, 1.0)])

    tol = 1e-12
    both_below = (Q1 <= c + tol) & (Q2 <= c + tol)
    with np.errstate(divide="ignore", invalid="ignore"):
        f1 = _reduced(q1, q2, c, Q, Q1)
        f2 = _reduced(q2, q1, c, Q, Q2)
    f1 = np.where(np.isfinite(f1), f1, -np.inf)
    f2 = np.where(np.isfinite(f2), f2, -np.inf)
    vals = np.where(both_below, np.maximum(f1, f2), 1.0 - Q)
    # deterministic reduction: first (smallest-Q1 for ties) maximizer
    order = np.argsort(Q1, kind="stable")
    i = order[np.argmax(vals[order])]
    value = float(vals[i])
    if full:
        return value, FailureSplit(float(Q1[i]), float(Q2[i]))
    return value


def nc_objective_max(inst, Q, grid_step=1e-5):
    """Grid maximum of the unreduced objective

    ``1 - Q - min(q1(1-Q1), q2(1-Q2)) * max((c-Q1)/(1-Q1), (c-Q2)/(1-Q2), 0)``

    over the split segment. This is never larger than
    :func:`nc_bound_theorem1`; it is strictly smaller in parts of the
    parameter space because the closed form evaluates each reduced branch
    outside the sub-case it was derived for.
    """
    Q = check_unit_interval("Q", Q)
    grid_step = _check_step(grid_step)
    q1, q2 = _priors(inst)
    c = inst.c
    Q1, Q2 = _split_segment(inst, Q, grid_step)
    with np.errstate(divide="ignore", invalid="ignore"):
        r1 = np.where(Q1 < 1.0, (c - Q1) / (1.0 - Q1), 0.0)
        r2 = np.where(Q2 < 1.0, (c - Q2) / (1.0 - Q2), 0.0)
    penalty = np.minimum(q1 * (1.0 - Q1), q2 * (1.0 - Q2)) * np.maximum(np.maximum(r1, r2), 0.0)
    return float(np.max(1.0 - Q - penalty))


def equal_prior_switch_point(c):
    """Failure probability where the z = Q/q_x candidate stops beating z = 0
    (equal priors). Zero when ``c <= 1/2``."""
    return max(0.0, (2.0 * c - 1.0) / (2.0 * c))


def nc_equal_prior_regional(c, Q):
    """Equal-prior bound by region.

    Returns ``(value, tag)``: ``"linear"`` while the z = Q/q_x candidate wins
    (value ``1 - c/2 - (1-c) Q``), ``"rational"`` while z = 0 wins (value
    ``1 - Q - (c - 2Q) / (2 (1 - 2Q))``) and ``"trivial"`` above ``c/2``
    (value ``1 - Q``).
    """
    c = check_unit_interval("c", c, open_left=True, open_right=True)
    Q = check_unit_interval("Q", Q)
    if Q > 0.5 * c:
        return 1.0 - Q, REGION_TRIVIAL
    if Q <= equal_prior_switch_point(c):
        return 1.0 - 0.5 * c - (1.0 - c) * Q, REGION_LINEAR
    return 1.0 - Q - 0.5 * (c - 2.0 * Q) / (1.0 - 2.0 * Q), REGION_RATIONAL


def nc_minerr(inst):
    """Noncontextual minimum-error bound, ``1 - q_min c``."""
    return nc_bound_theorem1(inst, 0.0).value


def nc_ud_limit(inst):
    """``(success, failure)`` of the noncontextual unambiguous limit."""
    s = inst.q_max * inst.c
    return s, 1.0 - s


def theorem2_breakpoints(c, eps):
    return (1.0 - eps) / 2.0, (1.0 - eps + c * (1.0 + eps)) / 2.0


def nc_bound_theorem2(inst, Q):
    """Noncontextual bound for depolarized states under a balanced measurement."""
    inst.require_equal_priors()
    Q = check_unit_interval("Q", Q)
    c, eps = inst.c, inst.eps
    b1, b2 = theorem2_breakpoints(c, eps)
    if Q <= b1:
        return NcBoundResult((1.0 + (1.0 - c) * eps - c * Q) / 2.0, NcRegime.BALANCED_PIECE, piece=1)
    if Q <= b2:
        return NcBoundResult(
            (3.0 - c + (1.0 - c) * eps - 2.0 * Q) / 4.0, NcRegime.BALANCED_PIECE, piece=2
        )
    return NcBoundResult(1.0 - Q, NcRegime.TRIVIAL_ONE_MINUS_Q, piece=3)


def nc_mixed_grid_oracle(inst, Q, grid_step=1e-5, *, full=False):
    """Brute-force maximum of the noisy-state objective over failure splits.

    Maximizes ``w(1-Qp) - [w/2 (1-Qp) - v/2 (1-Qo)] * max((c-Qp)/(1-Qp), 0)``
    with ``w = (1+eps)/2``, ``v = (1-eps)/2`` and ``Q = w Qp + v Qo``.
    """
    inst.require_equal_priors()
    Q = check_unit_interval("Q", Q)
    grid_step = _check_step(grid_step)
    c, eps = inst.c, inst.eps
    w = (1.0 + eps) / 2.0
    v = (1.0 - eps) / 2.0
    lo = max(0.0, (Q - v) / w)
    hi = min(1.0, Q / w)
    n = max(2, int(math.ceil((hi - lo) / grid_step)) + 1)
    qp = np.linspace(lo, hi, n)
    if lo <= c <= hi:
        qp = np.append(qp, c)
    if v > 0.0:
        qo = np.clip((Q - w * qp) / v, 0.0, 1.0)
    else:
        qo = np.zeros_like(qp)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(qp < 1.0, np.maximum((c - qp) / (1.0 - qp), 0.0), 0.0)
    vals = w * (1.0 - qp) - (0.5 * w * (1.0 - qp) - 0.5 * v * (1.0 - qo)) * ratio
    order = np.argsort(qp, kind="stable")
    i = order[np.argmax(vals[order])]
    value = float(vals[i])
    if full:
        return value, MixedSplit(float(qp[i]), float(qo[i]))
    return value


def max_confidence_nc(inst):
    """Noncontextual success in the maximal-confidence limit,
    ``(1 - (1-eps)/2 - eps c) / 2``.

    This is not the same number as ``1 - Q`` at the upper breakpoint of
    :func:`nc_bound_theorem2`, which is ``(1+eps)(1-c)/2``; both are
    reported as published and not reconciled.
    """
    inst.require_equal_priors()
    return 0.5 * (1.0 - (1.0 - inst.eps) / 2.0 - inst.eps * inst.c)


__all__ = [
    "FailureSplit",
    "MixedSplit",
    "NcBoundResult",
    "NcRegime",
    "equal_prior_switch_point",
    "f_candidate",
    "max_confidence_nc",
    "nc_bound_grid_oracle",
    "nc_bound_theorem1",
    "nc_bound_theorem2",
    "nc_equal_prior_regional",
    "nc_minerr",
    "nc_mixed_grid_oracle",
    "nc_objective_max",
    "nc_ud_limit",
    "theorem2_breakpoints",
]
