#!/usr/bin/env python3
# Linear differential operators with exponential-polynomial coefficients:
# composition by the Leibniz rule, commutators, and p-fold nested brackets.

from commsym import ExpPoly, LinDiffOp, ad_power, commutator, residual_vs_multiple
from commsym.scenarios import h1_generator, wave_operator

d0 = LinDiffOp.partial(0)
d1 = LinDiffOp.partial(1)
x0 = ExpPoly.coordinate(0)

# composition expands d0 . (x0 d1) = x0 d0 d1 + d1
shear = LinDiffOp([((0, 1, 0, 0), x0)])  # x0 d1
print("d0 . (x0 d1) =", d0.compose(shear))

# the commutator with the wave operator box = d0^2 - d1^2 - d2^2 - d3^2
box = wave_operator()
inner = commutator(box, shear)
print("[box, x0 d1] =", inner, " (constant coefficients)")

# one more bracket annihilates it: the shear is a second-order symmetry
print("[box, [box, x0 d1]] = 0 ?", ad_power(box, h1_generator(), 2).is_zero())

# first-order symmetries satisfy [L, Q] = zeta L; the dilation scales box
dilation = LinDiffOp(
    [(tuple(1 if i == a else 0 for i in range(4)), ExpPoly.coordinate(a)) for a in range(4)]
)
bracket = commutator(box, dilation)
residual, size = residual_vs_multiple(bracket, box, ExpPoly.constant(2))
print("[box, sum x^a d_a] - 2 box residual:", size)

# translations commute with any constant-coefficient operator (order p = 1)
for a in range(4):
    assert ad_power(box, LinDiffOp.partial(a), 1).is_zero()
print("[box, d_a] = 0 for all four translations")

# apply/compose coherence: (A.B) f == A (B f)
f = ExpPoly.exponential(1.0, (0.5j, -0.3j, 0, 0)) * ExpPoly.coordinate(1)
lhs = d0.compose(shear).apply(f)
rhs = d0.apply(shear.apply(f))
print("apply/compose gap:", (lhs - rhs).max_coeff())
