"""
Cohomology of the bracket pairing
=================================

The bracket pair is the 2-dimensional pairing/copairing with entries
(0, i*A, -i*A^-1, 0).  Its cochain complex is small enough to solve by
exact Gaussian elimination over the rational-function field, and the
kernel of the degree-2 differential is where the interesting deformations
live.
"""

from skeinlab.scalars import RATFUN, format_scalar
from skeinlab.switchback import (
    c2_to_coords,
    cohomology_dims,
    delta0,
    make_bracket_pair,
    solve_2cocycles,
    switchback_residuals,
    verify_switchback,
)

pair = make_bracket_pair(RATFUN)

# both zig-zag composites reduce to the identity
r1, r2 = switchback_residuals(pair)
print("switchback residuals zero:", r1.is_zero() and r2.is_zero())
print("loop value delta0 =", format_scalar(delta0(pair)))
print()

# dimensions of kernels, images, and quotients along the complex
dims = cohomology_dims(pair)
print(f"Z1 = {dims.z1}   B2 = {dims.b2}   H1 = {dims.h1}")
print(f"Z2 = {dims.z2}   B3 = {dims.b3}   H2 = {dims.h2}")
print(f"Z3 = {dims.z3}   B4 = {dims.b4}   H3 = {dims.h3}")
print()

# the four-dimensional 2-cocycle space, as coordinate rows
# (pairing slope xx,xy,yx,yy then copairing slope xx,xy,yx,yy)
print("2-cocycle basis:")
for k, (phi1, phi2) in enumerate(solve_2cocycles(pair), 1):
    coords = ", ".join(format_scalar(c) for c in c2_to_coords(phi1, phi2))
    print(f"  {k}: [{coords}]")
print()

# every basis vector ties its copairing slope to its pairing slope by the
# same four relations; eyeball them in the rows above:
#   g_yy = -b_xx    g_xx = -b_yy    g_yx = A^-2 b_xy    g_xy = A^2 b_yx
assert verify_switchback(pair)
