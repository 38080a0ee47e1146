"""
Depolarized states
==================

Mixing each state with white noise (visibility eps) lowers both the quantum
optimum and the noncontextual bound. The quantum side has no closed form,
so it comes from the POVM search; the optimal measurement turns out to be
balanced even though the search never asks for that.
"""

import numpy as np

from contextual_qsd import NoisyInstance, gap, mixed_non_enhancement_interval, mixed_quantum_success

c = 0.4
grid = np.linspace(0.0, 1.0, 51)

# %%
# Length of the non-enhancement set against visibility (coarse Q grid,
# endpoints refined by root finding).
for eps in (0.2, 0.5, 0.8, 0.95, 1.0):
    rep = mixed_non_enhancement_interval(NoisyInstance.equal_prior(c, eps), q_grid=grid)
    spans = ", ".join(f"[{a:.4f}, {b:.4f}]" for a, b in rep.intervals)
    print(f"eps={eps:4.2f}  length={rep.length:.4f}  {spans}")

# %%
# At Q = 0 the search reproduces the mixed-state Helstrom value.
inst = NoisyInstance.equal_prior(c, 0.5)
p = gap(inst, 0.0)
print(f"\nQ=0: quantum={p.quantum:.6f} (1+eps sqrt(1-c))/2={(1 + 0.5 * np.sqrt(1 - c)) / 2:.6f} nc={p.nc_bound:.6f}")

# %%
# Balance of the inconclusive element on the two pure components.
pair = inst.base.states()
for Q in (0.1, 0.3, 0.5, 0.7):
    m0 = mixed_quantum_success(inst, Q).povm.m0
    print(f"Q={Q:.1f}  <psi1|M0|psi1>={m0.expect(pair.ket1):.6f}  <psi2|M0|psi2>={m0.expect(pair.ket2):.6f}")
