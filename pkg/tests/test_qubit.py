import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from contextual_qsd import (
    DiscriminationInstance,
    DomainError,
    HermitianOp,
    NoisyInstance,
    Povm3,
    UnsupportedConfigurationError,
    depolarize,
    make_state_pair,
    validate_povm,
)
from contextual_qsd.qubit import IDENTITY, eigh2, positive_part

unit = st.floats(0.0, 1.0, allow_nan=False)


def test_hermitian_rejects_non_hermitian():
    with pytest.raises(ValueError):
        HermitianOp(np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError):
        HermitianOp(np.eye(3))


def test_hermitian_is_immutable():
    h = HermitianOp(np.eye(2))
    with pytest.raises(ValueError):
        h.entries[0, 0] = 5


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
def test_eigh2_matches_numpy(a, d, re, im):
    m = np.array([[a, re + 1j * im], [re - 1j * im, d]])
    w, v = eigh2(m)
    assert np.allclose(w, np.linalg.eigvalsh(m), atol=1e-12)
    assert np.allclose(m @ v, v * w, atol=1e-11)
    assert np.allclose(v.conj().T @ v, np.eye(2), atol=1e-12)


def test_state_pair_edges():
    p = make_state_pair(1.0)
    assert np.allclose(p.ket1, [1, 0]) and np.allclose(p.ket2, [1, 0])
    p = make_state_pair(0.0)
    s = math.sqrt(0.5)
    assert np.allclose(p.ket1, [s, s]) and np.allclose(p.ket2, [s, -s])
    assert make_state_pair(0.6).confusability() == pytest.approx(0.6, abs=1e-12)


def test_state_pair_grid():
    for c in np.linspace(0, 1, 101):
        p = make_state_pair(c)
        assert abs(p.confusability() - c) <= 1e-12
        assert abs(np.linalg.norm(p.ket1) - 1) <= 1e-12
        assert abs(np.linalg.norm(p.ket2) - 1) <= 1e-12


@pytest.mark.parametrize("c", [-0.1, 1.1, float("nan")])
def test_state_pair_domain(c):
    with pytest.raises(DomainError, match="c must lie in"):
        make_state_pair(c)


def test_depolarize_limits():
    pair = make_state_pair(0.3)
    r1, r2 = depolarize(pair, 1.0)
    assert np.allclose(r1.entries, pair.rho1.entries)
    r1, r2 = depolarize(pair, 0.0)
    assert np.allclose(r1.entries, IDENTITY / 2) and np.allclose(r2.entries, IDENTITY / 2)
    for rho in depolarize(pair, 0.5):
        assert np.allclose(np.linalg.eigvalsh(rho.entries), [0.25, 0.75], atol=1e-12)


@given(unit, unit)
def test_depolarize_preserves_trace(c, eps):
    for rho in depolarize(make_state_pair(c), eps):
        assert abs(rho.trace - 1.0) <= 1e-12


def test_positive_part_examples():
    pos, tr = positive_part(HermitianOp(np.diag([1.0, -1.0])))
    assert np.allclose(pos.entries, np.diag([1.0, 0.0])) and tr == 1.0
    pos, tr = positive_part(HermitianOp(np.zeros((2, 2))))
    assert np.allclose(pos.entries, 0) and tr == 0.0
    pair = make_state_pair(0.6)
    _, tr = positive_part(0.5 * (pair.rho1 - pair.rho2))
    assert tr == pytest.approx(math.sqrt(0.4) / 2, abs=1e-12)


@settings(max_examples=200)
@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2))
def test_positive_part_decomposition(a, d, re, im):
    h = HermitianOp(np.array([[a, re + 1j * im], [re - 1j * im, d]]))
    pos, tr = positive_part(h)
    neg = pos.entries - h.entries
    assert np.min(np.linalg.eigvalsh(pos.entries)) >= -1e-12
    assert np.min(np.linalg.eigvalsh(neg)) >= -1e-12
    assert np.allclose(pos.entries @ neg, 0, atol=1e-12)
    assert tr == pytest.approx(pos.trace, abs=1e-12)


def test_validate_povm():
    third = HermitianOp(IDENTITY / 3)
    d = validate_povm(Povm3(third, third, third))
    assert d.passed and d.completeness_residual <= 1e-15
    eye = HermitianOp(IDENTITY)
    d = validate_povm(Povm3(eye, eye, HermitianOp(-IDENTITY)))
    assert not d.passed and d.min_eigenvalues[2] == pytest.approx(-1.0)
    d = validate_povm(Povm3(third, third, HermitianOp(IDENTITY / 4)))
    assert not d.passed and d.completeness_residual == pytest.approx(1 / 12)


def test_instance_validation():
    with pytest.raises(DomainError, match=r"q1 must lie in \(0,1\)"):
        DiscriminationInstance(1.2, 0.6)
    with pytest.raises(DomainError):
        DiscriminationInstance(0.0, 0.6)
    inst = DiscriminationInstance(0.8, 0.6)
    assert inst.q2 == pytest.approx(0.2) and inst.q_min == pytest.approx(0.2)
    with pytest.raises(DomainError, match="eps"):
        NoisyInstance(inst, 1.5)
    with pytest.raises(UnsupportedConfigurationError):
        NoisyInstance(inst, 0.5).require_equal_priors()
