"""
Where z-modes propagate and where they decay
============================================

A mode labelled by (kx, ky, kt) moves along z with wavenumber lambda. Inside
the hyperboloid kt^2 = kx^2 + ky^2 + m^2 lambda is real; outside it is
imaginary and the mode grows or decays along z.
"""

import numpy as np

from zslice.dispersion import MassParam, MomentumTriple, lambda_grid, lambda_of

m = MassParam(1.0)

# a few hand-picked modes
for k in [(0, 0, 2), (1, 0, 1), (0, 0, 1), (5, 0, 1)]:
    v = lambda_of(MomentumTriple(*k), m)
    print(f"k' = {k}: lambda = {v.lam:.6g}  region {v.region.value}")

# the regulator pushes every lambda into the upper half plane
print("with eps = 0.01:", lambda_of(MomentumTriple(0, 0, 2), MassParam(1.0, 0.01)).lam)

# a coarse map of the (kx, kt) plane at ky = 0; '#' marks P1, '.' marks P2
kx = np.linspace(-3, 3, 41)
kt = np.linspace(3, -3, 21)
lam = lambda_grid(kx[None, :], 0.0, kt[:, None], m)
for row in lam:
    print("".join("#" if z.imag == 0 and z.real > 0 else "." for z in row))
