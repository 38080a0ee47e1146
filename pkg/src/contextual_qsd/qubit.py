"""Qubit states, 2x2 Hermitian operators and three-outcome POVMs.

Everything here is exact small-matrix algebra: the eigen-decomposition of a
2x2 Hermitian matrix is done in closed form from its trace and determinant,
so no iterative solver is involved anywhere in the hot loops.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import DomainError, UnsupportedConfigurationError, check_unit_interval

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
COMPLETENESS_TOL = 1e-10

IDENTITY = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class HermitianOp:
    """A 2x2 complex Hermitian operator."""

    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise ValueError("matrix is not Hermitian within 1e-12")
        # symmetrize so downstream closed forms see an exactly Hermitian matrix
        m = 0.5 * (m + m.conj().T)
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @classmethod
    def projector(cls, ket):
        ket = np.asarray(ket, dtype=complex)
        return cls(np.outer(ket, ket.conj()))

    @property
    def trace(self):
        return float(np.real(self.entries[0, 0] + self.entries[1, 1]))

    def expect(self, ket):
        """<ket|op|ket> for a (not necessarily normalized) ket."""
        ket = np.asarray(ket, dtype=complex)
        return float(np.real(ket.conj() @ self.entries @ ket))

    def trace_with(self, other):
        """Tr(self @ other), real for two Hermitian operators."""
        other = other.entries if isinstance(other, HermitianOp) else other
        return float(np.real(np.trace(self.entries @ other)))

    def eigh(self):
        return eigh2(self.entries)

    def __add__(self, other):
        return HermitianOp(self.entries + other.entries)

    def __sub__(self, other):
        return HermitianOp(self.entries - other.entries)

    def __mul__(self, scalar):
        return HermitianOp(self.entries * float(scalar))

    __rmul__ = __mul__

    def __repr__(self):
        return f"HermitianOp({np.array2string(self.entries, precision=6)})"


def eigh2(m):
    """Closed-form eigen-decomposition of a 2x2 Hermitian matrix.

    Returns ``(w, v)`` like :func:`numpy.linalg.eigh`: eigenvalues in ascending
    order and eigenvectors in the columns of ``v``.
    """
    m = np.asarray(m, dtype=complex)
    a = m[0, 0].real
    d = m[1, 1].real
    z = m[0, 1]
    mean = 0.5 * (a + d)
    half = 0.5 * (a - d)
    r = math.hypot(half, abs(z))
    w = np.array([mean - r, mean + r])
    if r == 0.0:
        return w, np.eye(2, dtype=complex)
    lam = mean + r
    # pick the row of (m - lam I) with the larger entries for stability
    if a >= d:
        vp = np.array([lam - d, np.conj(z)], dtype=complex)
    else:
        vp = np.array([z, lam - a], dtype=complex)
    # rescale first so the norm cannot underflow for tiny entries
    vp /= np.max(np.abs(vp))
    vp /= np.linalg.norm(vp)
    vm = np.array([-np.conj(vp[1]), np.conj(vp[0])])
    return w, np.column_stack([vm, vp])


def positive_part(h):
    """Projection of ``h`` onto its nonnegative eigenspace.

    Returns ``(pos, trace)`` where ``pos = sum_{w_i >= 0} w_i |v_i><v_i|``.
    ``pos - h`` is then the (PSD) negative part and ``pos @ (pos - h) = 0``.
    """
    w, v = eigh2(h.entries)
    keep = w >= 0.0
    pos = (v[:, keep] * w[keep]) @ v[:, keep].conj().T
    return HermitianOp(pos), float(np.sum(w[keep]))


@dataclass(frozen=True)
class PureStatePair:
    ket1: np.ndarray
    ket2: np.ndarray
    c: float

    @property
    def rho1(self):
        return HermitianOp.projector(self.ket1)

    @property
    def rho2(self):
        return HermitianOp.projector(self.ket2)

    def confusability(self):
        return float(abs(np.vdot(self.ket1, self.ket2)) ** 2)


def make_state_pair(c):
    """Two real kets symmetric about the first basis axis with |<1|2>|^2 = c.

    ``ket1 = (cos t, sin t)`` and ``ket2 = (cos t, -sin t)`` with
    ``cos 2t = sqrt(c)``.
    """
    c = check_unit_interval("c", c)
    # cos^2 t = (1 + sqrt c)/2 avoids an arccos round trip
    cos_t = math.sqrt(0.5 * (1.0 + math.sqrt(c)))
    sin_t = math.sqrt(0.5 * (1.0 - math.sqrt(c)))
    ket1 = np.array([cos_t, sin_t], dtype=complex)
    ket2 = np.array([cos_t, -sin_t], dtype=complex)
    ket1.setflags(write=False)
    ket2.setflags(write=False)
    return PureStatePair(ket1, ket2, c)


def depolarize(pair, eps):
    """Mix each state of ``pair`` with the maximally mixed state.

    ``rho_x = eps |psi_x><psi_x| + (1 - eps) I/2``.
    """
    eps = check_unit_interval("eps", eps)
    noise = (1.0 - eps) * 0.5 * IDENTITY
    return (
        HermitianOp(eps * pair.rho1.entries + noise),
        HermitianOp(eps * pair.rho2.entries + noise),
    )


@dataclass(frozen=True)
class Povm3:
    """Three-outcome measurement; ``m0`` is the inconclusive outcome."""

    m0: HermitianOp
    m1: HermitianOp
    m2: HermitianOp

    def elements(self):
        return (self.m0, self.m1, self.m2)

    @property
    def is_valid(self):
        return validate_povm(self).passed


@dataclass(frozen=True)
class PovmDiagnostics:
    min_eigenvalues: tuple
    completeness_residual: float
    passed: bool


def validate_povm(p):
    """Per-element minimum eigenvalues and the completeness residual.

    Never raises; ``passed`` is true iff every element is PSD within 1e-10
    and ``m0 + m1 + m2`` equals the identity within 1e-10 elementwise.
    """
    mins = tuple(float(eigh2(m.entries)[0][0]) for m in p.elements())
    total = p.m0.entries + p.m1.entries + p.m2.entries
    residual = float(np.max(np.abs(total - IDENTITY)))
    passed = min(mins) >= -PSD_TOL and residual <= COMPLETENESS_TOL
    return PovmDiagnostics(mins, residual, passed)


@dataclass(frozen=True)
class DiscriminationInstance:
    """Two pure states with prior ``q1`` (``q2 = 1 - q1``) and confusability ``c``."""

    q1: float
    c: float

    def __post_init__(self):
        object.__setattr__(self, "q1", check_unit_interval("q1", self.q1, open_left=True, open_right=True))
        object.__setattr__(self, "c", check_unit_interval("c", self.c))

    @property
    def q2(self):
        return 1.0 - self.q1

    @property
    def q_min(self):
        return min(self.q1, self.q2)

    @property
    def q_max(self):
        return max(self.q1, self.q2)

    def states(self):
        return make_state_pair(self.c)


@dataclass(frozen=True)
class NoisyInstance:
    """A pure instance whose states pass through depolarizing noise of
    strength ``eps`` (``eps = 1`` is noiseless)."""

    base: DiscriminationInstance
    eps: float

    def __post_init__(self):
        object.__setattr__(self, "eps", check_unit_interval("eps", self.eps))

    @classmethod
    def equal_prior(cls, c, eps):
        return cls(DiscriminationInstance(0.5, c), eps)

    @property
    def c(self):
        return self.base.c

    def require_equal_priors(self):
        if abs(self.base.q1 - 0.5) > 1e-15:
            raise UnsupportedConfigurationError(
                "noisy-state analysis is only defined for equal priors (q1 = 0.5)"
            )

    def density_operators(self):
        return depolarize(self.base.states(), self.eps)


__all__ = [
    "COMPLETENESS_TOL",
    "DiscriminationInstance",
    "DomainError",
    "HermitianOp",
    "NoisyInstance",
    "PSD_TOL",
    "Povm3",
    "PovmDiagnostics",
    "PureStatePair",
    "depolarize",
    "eigh2",
    "make_state_pair",
    "positive_part",
    "validate_povm",
]
