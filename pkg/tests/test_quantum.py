import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from contextual_qsd import (
    DiscriminationInstance,
    DomainError,
    HermitianOp,
    NoisyInstance,
    Regime,
    SearchConfig,
    closed_form_attainable,
    helstrom,
    inner_optimum,
    mixed_quantum_success,
    povm_oracle,
    quantum_success_closed,
    ud_failure_threshold,
    validate_povm,
)

priors = st.floats(0.05, 0.95)
confus = st.floats(0.0, 1.0)


def pure(q1, c):
    inst = DiscriminationInstance(q1, c)
    pair = inst.states()
    return inst, (pair.rho1, pair.rho2)


def test_threshold_examples():
    assert ud_failure_threshold(DiscriminationInstance(0.5, 0.6)) == pytest.approx(0.774597, abs=1e-6)
    assert ud_failure_threshold(DiscriminationInstance(0.8, 0.6)) == pytest.approx(0.619677, abs=1e-6)
    assert ud_failure_threshold(DiscriminationInstance(0.3, 0.0)) == 0.0


def test_closed_form_examples():
    inst = DiscriminationInstance(0.5, 0.6)
    assert quantum_success_closed(inst, 0.0).success == pytest.approx((1 + math.sqrt(0.4)) / 2, abs=1e-12)
    # hand evaluation: (0.8 + sqrt(0.64 - (sqrt(0.6) - 0.2)^2)) / 2
    assert quantum_success_closed(inst, 0.2).success == pytest.approx(0.678316, abs=1e-6)
    r = quantum_success_closed(inst, 0.9)
    assert r.success == pytest.approx(0.1) and r.regime is Regime.WASTE_REGIME
    assert quantum_success_closed(inst, 0.3).regime is Regime.INTERPOLATED_FORMULA


def test_closed_form_domain():
    with pytest.raises(DomainError, match="Q must lie"):
        quantum_success_closed(DiscriminationInstance(0.5, 0.6), 1.5)


@settings(max_examples=100, deadline=None)
@given(priors, confus)
def test_closed_form_monotone_and_bounded(q1, c):
    inst = DiscriminationInstance(q1, c)
    grid = np.linspace(0, 1, 1001)
    vals = np.array([quantum_success_closed(inst, Q).success for Q in grid])
    assert np.all(np.diff(vals) <= 1e-15)
    assert np.all(vals <= 1 - grid + 1e-15)
    t = ud_failure_threshold(inst)
    above = grid >= t
    assert np.allclose(vals[above], 1 - grid[above], atol=1e-15)
    # strictly below 1-Q before the threshold (away from rounding at the threshold)
    inner = grid < t - 1e-6
    assert np.all(vals[inner] < 1 - grid[inner])


@given(priors, confus)
def test_helstrom_consistency(q1, c):
    inst = DiscriminationInstance(q1, c)
    assert abs(quantum_success_closed(inst, 0.0).success - helstrom(inst)) <= 1e-12


def test_oracle_examples():
    _, states = pure(0.5, 0.6)
    assert povm_oracle(states, 0.5, 0.0).success == pytest.approx(0.816228, abs=1e-6)
    res = povm_oracle(states, 0.5, 0.774597)
    assert res.success == pytest.approx(0.225403, abs=1e-6)
    assert res.error <= 1e-6
    flat = NoisyInstance.equal_prior(0.4, 0.0).density_operators()
    for Q in (0.0, 0.3, 0.77, 1.0):
        assert povm_oracle(flat, 0.5, Q).success == pytest.approx((1 - Q) / 2, abs=1e-9)


def test_oracle_povm_reproduces_reported_values():
    for q1, c, Q in ((0.5, 0.6, 0.2), (0.7, 0.3, 0.1), (0.4, 0.9, 0.5)):
        _, (r1, r2) = pure(q1, c)
        res = povm_oracle((r1, r2), q1, Q)
        d = validate_povm(res.povm)
        assert d.passed
        success = q1 * r1.trace_with(res.povm.m1) + (1 - q1) * r2.trace_with(res.povm.m2)
        failure = q1 * r1.trace_with(res.povm.m0) + (1 - q1) * r2.trace_with(res.povm.m0)
        assert abs(success - res.success) <= 1e-10
        assert abs(failure - Q) <= 1e-10
        assert abs(res.achieved_q - Q) <= 1e-10


def test_oracle_outside_attainable_priors_stays_below_formula():
    # q1/q2 = 0.3 < c: the formula overshoots the true optimum
    inst, states = pure(0.231, 0.988)
    assert not closed_form_attainable(inst)
    Q = 0.758
    oracle = povm_oracle(states, inst.q1, Q).success
    closed = quantum_success_closed(inst, Q).success
    assert oracle < closed - 1e-3
    assert validate_povm(povm_oracle(states, inst.q1, Q).povm).passed


def test_oracle_deterministic():
    _, states = pure(0.6, 0.5)
    a = povm_oracle(states, 0.6, 0.3)
    b = povm_oracle(states, 0.6, 0.3)
    assert a.success == b.success and a.theta == b.theta and a.a == b.a and a.b == b.b
    assert np.array_equal(a.povm.m0.entries, b.povm.m0.entries)


def test_oracle_rejects_complex_states():
    ket = np.array([1, 1j]) / math.sqrt(2)
    rho = HermitianOp.projector(ket)
    with pytest.raises(ValueError):
        povm_oracle((rho, rho), 0.5, 0.1)


@pytest.mark.parametrize("q1,c,Q,eps", [(0.5, 0.6, 0.2, None), (0.7, 0.4, 0.1, None), (0.5, 0.4, 0.3, 0.6)])
def test_complex_phase_in_m0_never_helps(q1, c, Q, eps):
    inst, states = pure(q1, c)
    if eps is not None:
        states = NoisyInstance(inst, eps).density_operators()
    res = povm_oracle(states, q1, Q)
    m0 = res.povm.m0.entries
    rng = np.random.default_rng(7)
    for _ in range(50):
        delta = rng.uniform(-1, 1) * 0.2
        pert = m0 + np.array([[0, 1j * delta], [-1j * delta, 0]])
        w = np.linalg.eigvalsh(pert)
        if w[0] < 0 or w[1] > 1:
            continue
        perturbed = HermitianOp(pert)
        # the imaginary part is invisible to real states, so Q is unchanged
        q_new = q1 * states[0].trace_with(perturbed) + (1 - q1) * states[1].trace_with(perturbed)
        assert abs(q_new - Q) <= 1e-10
        success, povm = inner_optimum(perturbed, states[0], states[1], q1)
        assert validate_povm(povm).passed
        assert success <= res.success + 1e-9


def test_search_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(grid_theta=1)
    with pytest.raises(ValueError):
        SearchConfig(tol=-1.0)


def test_coarse_search_still_converges():
    _, states = pure(0.5, 0.6)
    res = povm_oracle(states, 0.5, 0.2, SearchConfig(grid_theta=20, grid_t=20))
    assert res.success == pytest.approx(0.678316, abs=1e-5)


def test_mixed_examples():
    assert mixed_quantum_success(NoisyInstance.equal_prior(0.6, 1.0), 0.0).success == pytest.approx(0.816228, abs=1e-6)
    assert mixed_quantum_success(NoisyInstance.equal_prior(0.4, 0.0), 0.3).success == pytest.approx(0.35, abs=1e-6)


def test_mixed_golden_value():
    # pinned oracle value; equals the mixed-state Helstrom value (1 + eps sqrt(1-c)) / 2
    val = mixed_quantum_success(NoisyInstance.equal_prior(0.4, 0.5), 0.0).success
    assert val == pytest.approx(0.6936491673, abs=1e-9)
    assert val == pytest.approx((1 + 0.5 * math.sqrt(0.6)) / 2, abs=1e-9)
    assert val > 0.65  # above the noisy noncontextual bound at Q = 0


def test_mixed_requires_equal_priors():
    with pytest.raises(ValueError):
        mixed_quantum_success(NoisyInstance(DiscriminationInstance(0.7, 0.4), 0.5), 0.1)


@settings(max_examples=15, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(0.05, 0.95), st.floats(0.05, 0.95))
def test_balanced_structure_emerges(c, eps, Q):
    inst = NoisyInstance.equal_prior(c, eps)
    res = mixed_quantum_success(inst, Q)
    pair = inst.base.states()
    assert abs(res.povm.m0.expect(pair.ket1) - res.povm.m0.expect(pair.ket2)) <= 1e-5
