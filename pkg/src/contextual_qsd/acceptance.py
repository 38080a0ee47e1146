"""Exit checks shared by ``qsd verify`` and the acceptance test module.

Each check returns a :class:`CheckResult`; tolerances are fixed here and
never adjusted at run time. Random draws use fixed seeds.
"""

from dataclasses import dataclass
import time

import numpy as np
from scipy.optimize import brentq

from .enhancement import mixed_non_enhancement_interval, non_enhancement_interval
from .noncontextual import (
    equal_prior_switch_point,
    f_candidate,
    nc_bound_grid_oracle,
    nc_bound_theorem1,
    nc_bound_theorem2,
    nc_equal_prior_regional,
    nc_minerr,
    nc_mixed_grid_oracle,
    theorem2_breakpoints,
)
from .quantum import (
    closed_form_attainable,
    helstrom,
    mixed_quantum_success,
    povm_oracle,
    quantum_success_closed,
    ud_failure_threshold,
)
from .qubit import DiscriminationInstance, NoisyInstance


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.name}: {self.detail} ({self.seconds:.2f}s)"


def _timed(fn):
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        result = fn(*args, **kwargs)
        result.seconds = time.perf_counter() - start
        return result

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _within(x, target, tol):
    return abs(x - target) <= tol


@_timed
def check_interval_equal_prior_c06():
    """One interval, lower end 0.245 +- 0.003, upper end in [0.7736, 0.7747], under 1 s."""
    start = time.perf_counter()
    rep = non_enhancement_interval(DiscriminationInstance(0.5, 0.6))
    elapsed = time.perf_counter() - start
    ok = (
        len(rep.intervals) == 1
        and _within(rep.intervals[0][0], 0.245, 0.003)
        and 0.7736 <= rep.intervals[0][1] <= 0.7747
        and elapsed < 1.0
    )
    return CheckResult("1 interval q1=0.5 c=0.6", ok, f"intervals={_fmt(rep.intervals)} runtime={elapsed:.3f}s")


@_timed
def check_interval_unequal_prior():
    """q1=0.8, c=0.6: [0.114 +- 0.004, 0.6197 +- 0.003]."""
    rep = non_enhancement_interval(DiscriminationInstance(0.8, 0.6))
    ok = (
        len(rep.intervals) == 1
        and _within(rep.intervals[0][0], 0.114, 0.004)
        and _within(rep.intervals[0][1], 0.6197, 0.003)
    )
    return CheckResult("2 interval q1=0.8 c=0.6", ok, f"intervals={_fmt(rep.intervals)}")


@_timed
def check_interval_confusability_scan():
    """c=0.4: [0.145, 0.6325]; c=0.8: [0.288, 0.8944]; all +- 0.003."""
    parts = []
    ok = True
    for c, lo, hi in ((0.4, 0.145, 0.6325), (0.8, 0.288, 0.8944)):
        rep = non_enhancement_interval(DiscriminationInstance(0.5, c))
        good = len(rep.intervals) == 1 and _within(rep.intervals[0][0], lo, 0.003) and _within(rep.intervals[0][1], hi, 0.003)
        ok &= good
        parts.append(f"c={c}: {_fmt(rep.intervals)}")
    return CheckResult("3 intervals c=0.4/0.8", ok, "; ".join(parts))


@_timed
def check_theorem1_oracle(n=1000, seed=20240601):
    """|nc_bound_theorem1 - grid oracle(step 1e-5)| <= 1e-4 on random triples, under 60 s."""
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(n):
        inst = DiscriminationInstance(rng.uniform(0.05, 0.95), rng.uniform(0.02, 0.98))
        Q = rng.uniform(0.0, 1.0)
        d = abs(nc_bound_theorem1(inst, Q).value - nc_bound_grid_oracle(inst, Q, 1e-5))
        worst = max(worst, d)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-4 and elapsed < 60.0
    return CheckResult("4 nc_bound_theorem1 vs grid oracle", ok, f"n={n} max|diff|={worst:.2e} runtime={elapsed:.1f}s")


def random_attainable_instance(rng):
    """Uniform draw restricted to priors where the closed form is the optimum."""
    while True:
        inst = DiscriminationInstance(rng.uniform(0.05, 0.95), rng.uniform(0.02, 0.98))
        if closed_form_attainable(inst):
            return inst


@_timed
def check_quantum_oracle(n=200, seed=20240602):
    """|closed form - POVM oracle| <= 1e-5 on random pure instances, under 120 s."""
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(n):
        inst = random_attainable_instance(rng)
        Q = rng.uniform(0.0, 1.0)
        pair = inst.states()
        res = povm_oracle((pair.rho1, pair.rho2), inst.q1, Q)
        worst = max(worst, abs(res.success - quantum_success_closed(inst, Q).success))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-5 and elapsed < 120.0
    return CheckResult("5 quantum closed form vs oracle", ok, f"n={n} max|diff|={worst:.2e} runtime={elapsed:.1f}s")


def candidate_switch_point(c):
    """Root of f(z=Q/q) - f(z=0) for equal priors, found numerically."""
    inst = DiscriminationInstance(0.5, c)

    def diff(Q):
        return f_candidate(inst, Q, 1, 2.0 * Q) - f_candidate(inst, Q, 1, 0.0)

    return brentq(diff, 1e-9, 0.5 * c - 1e-9, xtol=1e-14)


@_timed
def check_regional_formulas():
    """nc_bound_theorem1 equals the regional formulas within 1e-12 on a 1e-3 grid; switch at 0.166 +- 0.002 for c=0.6."""
    grid = np.linspace(0.0, 1.0, 1001)
    worst = 0.0
    for c in (0.4, 0.6, 0.8):
        inst = DiscriminationInstance(0.5, c)
        for Q in grid:
            worst = max(worst, abs(nc_bound_theorem1(inst, Q).value - nc_equal_prior_regional(c, Q)[0]))
    switch = candidate_switch_point(0.6)
    ok = worst <= 1e-12 and _within(switch, 0.166, 0.002) and _within(switch, equal_prior_switch_point(0.6), 1e-9)
    return CheckResult("6 equal-prior regional formulas", ok, f"max|diff|={worst:.2e} switch(c=0.6)={switch:.6f}")


@_timed
def check_theorem2_oracle(n=500, seed=20240603):
    """|nc_bound_theorem2 - mixed grid oracle(step 1e-5)| <= 1e-4; continuity at both breakpoints <= 1e-12."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    jump = 0.0
    for _ in range(n):
        inst = NoisyInstance.equal_prior(rng.uniform(0.02, 0.98), rng.uniform(0.0, 1.0))
        Q = rng.uniform(0.0, 1.0)
        worst = max(worst, abs(nc_bound_theorem2(inst, Q).value - nc_mixed_grid_oracle(inst, Q, 1e-5)))
        jump = max(jump, theorem2_breakpoint_jump(inst))
    ok = worst <= 1e-4 and jump <= 1e-12
    return CheckResult("7 nc_bound_theorem2 vs grid oracle", ok, f"n={n} max|diff|={worst:.2e} max breakpoint jump={jump:.1e}")


def theorem2_breakpoint_jump(inst):
    """Largest disagreement between adjacent pieces evaluated at each breakpoint."""
    c, eps = inst.c, inst.eps
    b1, b2 = theorem2_breakpoints(c, eps)
    p1 = (1.0 + (1.0 - c) * eps - c * b1) / 2.0
    p2a = (3.0 - c + (1.0 - c) * eps - 2.0 * b1) / 4.0
    p2b = (3.0 - c + (1.0 - c) * eps - 2.0 * b2) / 4.0
    p3 = 1.0 - b2
    return max(abs(p1 - p2a), abs(p2b - p3))


MIXED_EPS = (0.2, 0.35, 0.5, 0.65, 0.8, 0.95)


@_timed
def check_mixed_shrinking(c=0.4, step=2e-3):
    """Interval length nonincreasing over MIXED_EPS; eps=1 matches the c=0.4 pure interval within 0.005."""
    lengths = []
    for eps in MIXED_EPS:
        rep = mixed_non_enhancement_interval(NoisyInstance.equal_prior(c, eps), step=step)
        lengths.append(rep.length)
    monotone = all(b <= a + 1e-9 for a, b in zip(lengths, lengths[1:]))
    edge = mixed_non_enhancement_interval(NoisyInstance.equal_prior(c, 1.0), step=step)
    pure = non_enhancement_interval(DiscriminationInstance(0.5, c))
    match = (
        len(edge.intervals) == 1
        and _within(edge.intervals[0][0], pure.intervals[0][0], 0.005)
        and _within(edge.intervals[0][1], pure.intervals[0][1], 0.005)
    )
    detail = "lengths=" + ",".join(f"{x:.4f}" for x in lengths) + f" eps=1 interval={_fmt(edge.intervals)}"
    return CheckResult("8 noisy interval shrinks with eps", monotone and match, detail)


@_timed
def check_balanced_emergence(n=20, seed=20240604):
    """Oracle's optimal M0 satisfies |<psi1|M0|psi1> - <psi2|M0|psi2>| <= 1e-5."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        inst = NoisyInstance.equal_prior(rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95))
        Q = rng.uniform(0.05, 0.95)
        res = mixed_quantum_success(inst, Q)
        pair = inst.base.states()
        worst = max(worst, abs(res.povm.m0.expect(pair.ket1) - res.povm.m0.expect(pair.ket2)))
    return CheckResult("9 balanced measurement emerges", worst <= 1e-5, f"n={n} max imbalance={worst:.2e}")


@_timed
def check_structural_invariants(seed=20240605):
    """Helstrom and minimum-error consistency, monotonicity and continuity."""
    rng = np.random.default_rng(seed)
    grid = np.linspace(0.0, 1.0, 1001)
    helstrom_err = minerr_err = 0.0
    monotone = True
    jump = 0.0
    for _ in range(100):
        inst = DiscriminationInstance(rng.uniform(0.05, 0.95), rng.uniform(0.0, 1.0))
        helstrom_err = max(helstrom_err, abs(quantum_success_closed(inst, 0.0).success - helstrom(inst)))
        minerr_err = max(minerr_err, abs(nc_minerr(inst) - (1.0 - inst.q_min * inst.c)))
        vals = np.array([quantum_success_closed(inst, Q).success for Q in grid])
        monotone &= bool(np.all(np.diff(vals) <= 1e-15))
        noisy = NoisyInstance.equal_prior(inst.c, rng.uniform(0.0, 1.0))
        vals2 = np.array([nc_bound_theorem2(noisy, Q).value for Q in grid])
        monotone &= bool(np.all(np.diff(vals2) <= 1e-15))
        jump = max(jump, breakpoint_jumps(inst, noisy))
    ok = helstrom_err <= 1e-12 and minerr_err <= 1e-12 and monotone and jump <= 1e-9
    detail = (
        f"helstrom={helstrom_err:.1e} minerr={minerr_err:.1e} "
        f"monotone={monotone} max breakpoint jump={jump:.1e}"
    )
    return CheckResult("10 structural invariants", ok, detail)


def breakpoint_jumps(inst, noisy):
    """Disagreement of the closed forms across each breakpoint.

    Each form is evaluated at the breakpoint itself and at the adjacent
    floats on either side, so the one-sided pieces meet with no slope term.
    """

    def across(fn, b):
        lo, hi = np.nextafter(b, 0.0), np.nextafter(b, 1.0)
        mid = fn(b)
        return max(abs(fn(lo) - mid), abs(fn(hi) - mid))

    jumps = []
    t = ud_failure_threshold(inst)
    if 0.0 < t < 1.0:
        jumps.append(across(lambda Q: quantum_success_closed(inst, Q).success, t))
    b = inst.q_min * inst.c
    if 0.0 < b < 1.0:
        jumps.append(across(lambda Q: nc_bound_theorem1(inst, Q).value, b))
    for b in theorem2_breakpoints(noisy.c, noisy.eps):
        if 0.0 < b < 1.0:
            jumps.append(across(lambda Q: nc_bound_theorem2(noisy, Q).value, b))
    return max(jumps) if jumps else 0.0


def _fmt(intervals):
    return "[" + ", ".join(f"[{lo:.6f}, {hi:.6f}]" for lo, hi in intervals) + "]"


PURE_CHECKS = (
    check_interval_equal_prior_c06,
    check_interval_unequal_prior,
    check_interval_confusability_scan,
    check_theorem1_oracle,
    check_quantum_oracle,
    check_regional_formulas,
    check_structural_invariants,
)

MIXED_CHECKS = (
    check_theorem2_oracle,
    check_mixed_shrinking,
    check_balanced_emergence,
)


def run_all(fast=False, echo=print):
    checks = PURE_CHECKS if fast else PURE_CHECKS + MIXED_CHECKS
    results = []
    for check in checks:
        res = check()
        if echo is not None:
            echo(res.line())
        results.append(res)
    return results
