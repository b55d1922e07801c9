#!/usr/bin/env python3
# The finite-difference oracle: every symbolic zero should survive a
# second-order stencil check, and residuals should shrink like h^2.

import numpy as np

from commsym import DalembertParams, GridSpec, convergence_order, fd_apply_residual
from commsym.gridcheck import fd_chain_values
from commsym.scenarios import (
    dalembert_engaging_operator,
    dalembert_weight,
    h1_generator,
    plane_wave,
    wave_operator,
)

p = DalembertParams(beta=0.3, n=(0.36, 0.48, 0.8))
box = wave_operator()
phi = plane_wave(p)
grid = GridSpec(h=1e-2, extent=9)

# the wave equation on shell: stencil residual is pure truncation error
print("FD residual of box phi:", fd_apply_residual(box, phi, grid))

# it converges at second order as h shrinks
order = convergence_order(box, phi, grid, [0.04, 0.02, 0.01])
print("convergence order:", round(order, 3))

# the boosted-frame identity, cross-checked numerically
A = dalembert_engaging_operator(p)
w = dalembert_weight(p) * phi
print("FD residual of boosted operator on weighted wave:", fd_apply_residual(A, w, grid))
print("convergence order:", round(convergence_order(A, w, grid, [0.04, 0.02, 0.01]), 3))

# even the nested-commutator identity can be checked without any symbolic
# derivative: chain the stencils and combine
wide = GridSpec(h=1e-2, extent=13)
H1 = h1_generator()
v1, _ = fd_chain_values((box, box, H1), phi, wide)
v2, _ = fd_chain_values((box, H1, box), phi, wide)
v3, _ = fd_chain_values((H1, box, box), phi, wide)
print("pure-stencil two-fold bracket residual:", float(np.max(np.abs(v1 - 2 * v2 + v3))))
