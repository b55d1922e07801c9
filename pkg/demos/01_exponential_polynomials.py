#!/usr/bin/env python3
# Walk through the function class everything else is built on: finite sums of
# coefficient * monomial * exponential on R^4, closed under +, *, and d/dx^a.

from commsym import ExpPoly

# the coordinate functions x0..x3 and constants are the starting points
x0 = ExpPoly.coordinate(0)
x1 = ExpPoly.coordinate(1)
one = ExpPoly.constant(1)

# a plane wave exp(-i(x0 - x1)) as a single exponential term
wave = ExpPoly.exponential(1.0, (-1j, 1j, 0, 0))
print("wave:", wave)

# products multiply coefficients and add monomial/exponential exponents
f = x1 * ExpPoly.exponential(1.0, (0, 2, 0, 0))  # x1 * e^{2 x1}
print("f = x1 e^{2x1}:", f)
print("f(0, 1, 0, 0) =", f.evaluate((0, 1, 0, 0)), "(= e^2)")

# differentiation is exact: product rule + chain rule per term
df = f.derive(1)
print("df/dx1:", df, "  -> (1 + 2 x1) e^{2 x1}")

# the algebra is closed, so identities reduce to coefficient bookkeeping:
# d/dx1 (f*g) - (df*g + f*dg) normalizes to the empty polynomial
g = x0 * x1 + one
residual = (f * g).derive(1) - (df * g + f * g.derive(1))
print("product-rule residual is zero:", residual.is_zero())

# cancellation happens structurally, not numerically
print("wave - wave:", (wave - wave), "-> zero:", (wave - wave).is_zero())

# the wave equation residual of an off-shell exponential stays visible,
# with the offending term as a witness
box_wave = (
    wave.derive(0).derive(0)
    - wave.derive(1).derive(1)
    - wave.derive(2).derive(2)
    - wave.derive(3).derive(3)
)
print("on-shell residual:", box_wave.is_zero())

bad = ExpPoly.exponential(1.0, (-2j, 1j, 0, 0))  # k0 = 2, |k| = 1
bad_residual = (
    bad.derive(0).derive(0)
    - bad.derive(1).derive(1)
    - bad.derive(2).derive(2)
    - bad.derive(3).derive(3)
)
print("off-shell residual zero?", bad_residual.is_zero())
print("  witness term:", bad_residual.witness())
