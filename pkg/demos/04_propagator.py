"""
The Feynman propagator from three mode sums
===========================================

The kz integral of the covariant propagator can be done by residues; the
result is the z-ordered bracket used by the z-sliced mode sum. First the
one-dimensional identity is checked numerically, then one transverse mode is
integrated both ways, and finally the full 3D/4D sums are compared at a
modest cutoff.
"""

from zslice import propagator as pr
from zslice.dispersion import MassParam

lam = 1 + 0.1j
for z in (0.5, -2.0):
    for cutoff in (200, 400, 800):
        num = pr.kz_contour_numeric(lam, z, pr.QuadratureSpec(cutoff, 1000 * cutoff))
        print(f"z = {z:+}, cutoff {cutoff}: |numeric - closed| = {abs(num - pr.bracket_closed(lam, z)):.2e}")

m = MassParam(1.0, 0.1)
p = pr.SpacetimePoint(0.5, 0.0, 0.5, 0.5)
for nodes in (24, 48):
    q3, q4 = pr.QuadratureSpec(6.0, nodes), pr.QuadratureSpec(6.0, max(16, 2 * nodes // 3))
    vals = [pr.propagator_zform(p, m, q3), pr.propagator_tform(p, m, q3), pr.propagator_4d(p, m, q4)]
    for v in vals:
        print(f"nodes {nodes:3d} {v.method:6s} {v.value:.5f}  (error estimate {v.error:.1e})")

# The three methods cut off different momentum boxes (kx,ky,kt), (kx,ky,kz) and
# all four components, so at cutoff 6 they converge to different numbers.
