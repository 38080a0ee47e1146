"""Optimal quantum success probability at a fixed failure probability.

Two independent routes are provided:

* :func:`quantum_success_closed`, the analytic optimum for two pure states;
* :func:`povm_oracle`, a brute-force search over three-outcome POVMs that
  works for any pair of real qubit density operators.

The oracle parameterizes the inconclusive element as
``M0 = R(theta) diag(a, b) R(theta)^T``. The failure constraint
``Tr(rho_bar M0) = Q`` is linear in ``(a, b)`` and leaves a feasible segment
for every ``theta``. For fixed ``M0`` the best split of ``N = I - M0`` into
``M1 + M2`` is exact: the success is ``q2 Tr(rho2 N) + Tr[(sqrt(N) L sqrt(N))_+]``
with ``L = q1 rho1 - q2 rho2``. The two remaining parameters are searched by
a coarse grid followed by coordinate descent.
"""

from dataclasses import dataclass
import enum
from functools import lru_cache
import math

import numpy as np

from .errors import DomainError, UnsupportedConfigurationError, check_unit_interval
from .qubit import (
    HermitianOp,
    IDENTITY,
    NoisyInstance,
    Povm3,
    eigh2,
)

ZERO_ERROR_TOL = 1e-8


class Regime(enum.Enum):
    INTERPOLATED_FORMULA = "InterpolatedFormula"
    WASTE_REGIME = "WasteRegime"


@dataclass(frozen=True)
class QuantumResult:
    success: float
    regime: Regime
    q_fail: float
    povm: Povm3 = None


@dataclass(frozen=True)
class SearchConfig:
    """Outer search settings for :func:`povm_oracle`.

    ``grid_theta`` x ``grid_t`` coarse grid over (rotation angle, position on
    the feasible segment); ``refine_iterations`` bounds the number of step
    halvings in the coordinate descent; refinement stops early once the step
    change in the objective falls below ``tol``.
    """

    grid_theta: int = 200
    grid_t: int = 200
    refine_iterations: int = 40
    tol: float = 1e-10

    def __post_init__(self):
        if self.grid_theta < 2 or self.grid_t < 2:
            raise DomainError("grid", "search grid needs at least 2 points per axis")
        if self.refine_iterations < 0:
            raise DomainError("refine_iterations", "refine_iterations must be >= 0")
        if not self.tol > 0.0:
            raise DomainError("tol", "tol must be positive")


DEFAULT_SEARCH = SearchConfig()


@dataclass(frozen=True)
class PovmOracleResult:
    success: float
    povm: Povm3
    achieved_q: float
    iterations: int
    error: float
    theta: float
    a: float
    b: float


def ud_failure_threshold(inst):
    """Minimum failure probability of unambiguous discrimination, 2 sqrt(q1 q2 c)."""
    return 2.0 * math.sqrt(inst.q1 * inst.q2 * inst.c)


def helstrom(inst):
    """Minimum-error success probability (1 + sqrt(1 - 4 q1 q2 c)) / 2."""
    return 0.5 * (1.0 + math.sqrt(max(0.0, 1.0 - 4.0 * inst.q1 * inst.q2 * inst.c)))


def quantum_success_closed(inst, Q):
    """Maximum success probability over POVMs whose failure probability is ``Q``.

    Below the unambiguous-discrimination threshold the optimum interpolates
    between the Helstrom value and zero error; above it every extra unit of
    failure is simply wasted and the optimum is ``1 - Q``.
    """
    Q = check_unit_interval("Q", Q)
    threshold = ud_failure_threshold(inst)
    qbar = 1.0 - Q
    if Q <= threshold:
        disc = qbar * qbar - (threshold - Q) ** 2
        # disc >= 0 analytically; clip rounding noise at the threshold
        value = 0.5 * (qbar + math.sqrt(max(0.0, disc)))
        return QuantumResult(value, Regime.INTERPOLATED_FORMULA, Q)
    return QuantumResult(qbar, Regime.WASTE_REGIME, Q)


def closed_form_attainable(inst):
    """True when ``c <= q1/q2 <= 1/c``.

    Outside this prior range the optimal measurement saturates one outcome
    before the interpolated formula's stationary point is reached, and the
    true optimum (see :func:`povm_oracle`) lies strictly below the formula.
    """
    ratio = inst.q1 / inst.q2
    return inst.c <= ratio <= 1.0 / inst.c if inst.c > 0.0 else True


def _real_symmetric(op, name):
    m = op.entries
    if np.max(np.abs(m.imag)) > 1e-12:
        raise UnsupportedConfigurationError(f"{name} must be real in the computational basis")
    return m.real


def _segment(u, Q, t):
    """Feasible ``(a, b)`` on ``a u + b (1-u) = Q`` inside [0,1]^2, at fraction ``t``.

    The coordinate with the larger coefficient is eliminated so the division
    is always by something >= 1/2.
    """
    v = 1.0 - u
    with np.errstate(divide="ignore", invalid="ignore"):
        # branch 1 (v >= u): free a, b = (Q - a u)/v
        a_lo = np.where(u > 0, np.maximum(0.0, (Q - v) / u), 0.0)
        a_hi = np.where(u > 0, np.minimum(1.0, Q / u), 1.0)
        # branch 2 (u > v): free b, a = (Q - b v)/u
        b_lo = np.where(v > 0, np.maximum(0.0, (Q - u) / v), 0.0)
        b_hi = np.where(v > 0, np.minimum(1.0, Q / v), 1.0)
    first = v >= u
    a1 = a_lo + t * (a_hi - a_lo)
    b2 = b_lo + t * (b_hi - b_lo)
    safe_v = np.where(first, v, 1.0)
    safe_u = np.where(first, 1.0, u)
    a = np.where(first, a1, (Q - b2 * v) / safe_u)
    b = np.where(first, (Q - a1 * u) / safe_v, b2)
    return np.clip(a, 0.0, 1.0), np.clip(b, 0.0, 1.0)


class _Objective:
    """Vectorized success probability as a function of ``(theta, t)``."""

    def __init__(self, rho1, rho2, q1, Q):
        q2 = 1.0 - q1
        self.q2 = q2
        self.Q = Q
        self.rho_bar = q1 * rho1 + q2 * rho2
        self.lam = q1 * rho1 - q2 * rho2
        self.rho2 = rho2

    @staticmethod
    def _quad(m, x, y):
        # x^T m y for column vectors given componentwise
        return m[0, 0] * x[0] * y[0] + m[0, 1] * (x[0] * y[1] + x[1] * y[0]) + m[1, 1] * x[1] * y[1]

    def terms(self, theta):
        """Angle-only quantities, reusable across many ``t`` values."""
        ct, st = np.cos(theta), np.sin(theta)
        e1 = (ct, st)
        e2 = (-st, ct)
        return (
            np.clip(self._quad(self.rho_bar, e1, e1), 0.0, 1.0),
            self._quad(self.rho2, e1, e1),
            self._quad(self.rho2, e2, e2),
            self._quad(self.lam, e1, e1),
            self._quad(self.lam, e2, e2),
            self._quad(self.lam, e1, e2),
        )

    def params(self, theta, t):
        return _segment(self.terms(theta)[0], self.Q, t)

    def value(self, terms, t):
        u, s1, s2, l11, l22, l12 = terms
        a, b = _segment(u, self.Q, t)
        na = 1.0 - a
        nb = 1.0 - b
        k11 = na * l11
        k22 = nb * l22
        k12 = np.sqrt(na * nb) * l12
        mean = 0.5 * (k11 + k22)
        r = np.hypot(0.5 * (k11 - k22), k12)
        pos = np.maximum(mean + r, 0.0) + np.maximum(mean - r, 0.0)
        return self.q2 * (1.0 - a * s1 - b * s2) + pos

    def __call__(self, theta, t):
        return self.value(self.terms(theta), t)


def _rotation(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def _sqrt_psd(op):
    w, v = eigh2(op.entries)
    w = np.sqrt(np.clip(w, 0.0, None))
    return HermitianOp((v * w) @ v.conj().T)


def inner_optimum(m0, rho1, rho2, q1):
    """Best completion of a fixed inconclusive element ``m0``.

    Works for arbitrary (complex) Hermitian inputs. Returns
    ``(success, povm)`` where ``m1 = sqrt(N) P sqrt(N)`` with ``P`` the
    projector onto the nonnegative eigenspace of ``sqrt(N) L sqrt(N)``.
    """
    q2 = 1.0 - q1
    n = HermitianOp(IDENTITY - m0.entries)
    root = _sqrt_psd(n)
    lam = q1 * rho1 - q2 * rho2
    k = root.entries @ lam.entries @ root.entries
    w, v = eigh2(0.5 * (k + k.conj().T))
    keep = w >= 0.0
    proj = v[:, keep] @ v[:, keep].conj().T
    m1 = HermitianOp(root.entries @ proj @ root.entries)
    m2 = n - m1
    povm = Povm3(m0, m1, m2)
    success = q1 * rho1.trace_with(m1) + q2 * rho2.trace_with(m2)
    return success, povm


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _max_over_t(obj, thetas, iterations=75):
    """Golden-section maximum over t in [0, 1] for each angle (vectorized).

    Relies on concavity in t. The endpoints are checked explicitly.
    Returns ``(values, t_values)``.
    """
    terms = obj.terms(thetas)
    lo = np.zeros_like(thetas)
    hi = np.ones_like(thetas)
    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1 = obj.value(terms, x1)
    f2 = obj.value(terms, x2)
    for _ in range(iterations):
        left = f1 >= f2
        # keep [lo, x2] when the left probe is higher, else [x1, hi]
        hi = np.where(left, x2, hi)
        lo = np.where(left, lo, x1)
        new_x1 = np.where(left, hi - _INV_PHI * (hi - lo), x2)
        new_x2 = np.where(left, x1, lo + _INV_PHI * (hi - lo))
        probe = np.where(left, new_x1, new_x2)
        fp = obj.value(terms, probe)
        f1, f2 = np.where(left, fp, f2), np.where(left, f1, fp)
        x1, x2 = new_x1, new_x2
    mid = 0.5 * (lo + hi)
    cands_t = np.stack([np.zeros_like(thetas), mid, np.ones_like(thetas)])
    cands_f = np.stack([obj.value(terms, cands_t[0]), obj.value(terms, mid), obj.value(terms, cands_t[2])])
    # prefer the interior point, then t = 0, on near-ties
    pick = np.argmax(cands_f + np.array([[0.0], [1e-15], [0.0]]), axis=0)
    idx = np.arange(len(thetas))
    return cands_f[pick, idx], cands_t[pick, idx]


def povm_oracle(states, q1, Q, search=DEFAULT_SEARCH):
    """Numerically maximize the success probability at failure probability ``Q``.

    ``states`` is a pair of real qubit density operators. The returned POVM
    reproduces ``success`` and ``achieved_q`` by direct trace evaluation.
    """
    Q = check_unit_interval("Q", Q)
    q1 = check_unit_interval("q1", q1, open_left=True, open_right=True)
    rho1_op, rho2_op = states
    rho1 = _real_symmetric(rho1_op, "rho1")
    rho2 = _real_symmetric(rho2_op, "rho2")
    obj = _Objective(rho1, rho2, q1, Q)

    thetas = np.arange(search.grid_theta) * (math.pi / search.grid_theta)
    ts = np.linspace(0.0, 1.0, search.grid_t)
    TH, TT = np.meshgrid(thetas, ts, indexing="ij")
    vals = obj(TH, TT)
    A, _ = obj.params(TH, TT)
    top = vals.max()
    # tie-break among near-maximal grid cells: smallest theta, then smallest a
    cand = np.flatnonzero(vals.ravel() >= top - 1e-12)
    order = np.lexsort((A.ravel()[cand], TH.ravel()[cand]))
    i = cand[order[0]]
    theta, t = float(TH.ravel()[i]), float(TT.ravel()[i])
    best = float(vals.ravel()[i])

    step_theta = math.pi / search.grid_theta
    step_t = 1.0 / (search.grid_t - 1)
    shrinks = 0
    rounds = 0
    last_shrink_value = best
    while shrinks < search.refine_iterations and rounds < 50 * max(1, search.refine_iterations):
        rounds += 1
        moved = False
        for dth, dt in ((step_theta, 0.0), (-step_theta, 0.0), (0.0, step_t), (0.0, -step_t)):
            nth = (theta + dth) % math.pi
            nt = min(1.0, max(0.0, t + dt))
            val = float(obj(np.array(nth), np.array(nt)))
            if val > best + 1e-15:
                theta, t, best = nth, nt, val
                moved = True
        if not moved:
            step_theta *= 0.5
            step_t *= 0.5
            shrinks += 1
            if shrinks > 8 and abs(best - last_shrink_value) < search.tol and step_t < 1e-9:
                break
            last_shrink_value = best

    # Tie-break over the optimal set: for fixed theta the objective is concave
    # in t (M0 is affine in t), so the per-angle maximum is found exactly and
    # the smallest grid angle reaching the best value wins.
    below = thetas[thetas <= theta]
    grid_best, grid_t = _max_over_t(obj, below)
    for k in range(len(below)):
        if grid_best[k] >= best - 1e-12:
            theta, t, best = float(below[k]), float(grid_t[k]), max(best, float(grid_best[k]))
            break
    # polish t at the chosen angle
    tb, tt = _max_over_t(obj, np.array([theta]))
    if tb[0] > best:
        t, best = float(tt[0]), float(tb[0])

    a, b = (float(x) for x in obj.params(np.array(theta), np.array(t)))
    rot = _rotation(theta)
    m0 = HermitianOp(rot @ np.diag([a, b]) @ rot.T)
    success, povm = inner_optimum(m0, rho1_op, rho2_op, q1)
    q2 = 1.0 - q1
    achieved = q1 * rho1_op.trace_with(povm.m0) + q2 * rho2_op.trace_with(povm.m0)
    error = q1 * rho1_op.trace_with(povm.m2) + q2 * rho2_op.trace_with(povm.m1)
    return PovmOracleResult(success, povm, achieved, rounds, error, theta, a, b)


@lru_cache(maxsize=65536)
def _mixed_oracle_cached(c, eps, Q, search):
    inst = NoisyInstance.equal_prior(c, eps)
    return povm_oracle(inst.density_operators(), 0.5, Q, search)


def mixed_quantum_success(inst, Q, search=DEFAULT_SEARCH):
    """Oracle optimum for two depolarized states with equal priors.

    Results are cached per ``(c, eps, Q, search)``.
    """
    inst.require_equal_priors()
    Q = check_unit_interval("Q", Q)
    res = _mixed_oracle_cached(inst.c, inst.eps, Q, search)
    regime = Regime.WASTE_REGIME if res.error < ZERO_ERROR_TOL else Regime.INTERPOLATED_FORMULA
    return QuantumResult(res.success, regime, Q, res.povm)


__all__ = [
    "DEFAULT_SEARCH",
    "PovmOracleResult",
    "QuantumResult",
    "Regime",
    "SearchConfig",
    "closed_form_attainable",
    "helstrom",
    "inner_optimum",
    "mixed_quantum_success",
    "povm_oracle",
    "quantum_success_closed",
    "ud_failure_threshold",
]
