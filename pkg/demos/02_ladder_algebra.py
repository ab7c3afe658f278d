"""
Ladder operators of the z-sliced expansion
==========================================

Real-lambda modes behave like ordinary oscillators. Imaginary-lambda modes
come in pairs (k, -k) whose operators are each other's adjoints, and whose
commutator is -i instead of 1. Both are realized here on truncated Fock
spaces; identities hold exactly away from the top levels.
"""

import numpy as np

from zslice import mode_algebra as ma
from zslice import zevolution as ze
from zslice.dispersion import MassParam, MomentumTriple
from zslice.operators import commutator, hermiticity_defect, off_corner_residual

m = MassParam(1.0)
k1 = MomentumTriple(0, 0, 2)  # lambda = sqrt(3)
k2 = MomentumTriple(1, 0, 1)  # lambda = i

# structure constants
print("[A, ABar] for P1:", ma.commutator_coeff(ma.A(k1), ma.ABar(k1), m))
print("[A, ABar] for P2:", ma.commutator_coeff(ma.A(k2), ma.ABar(k2), m))
print("A(k)^dag for P2 is", ma.conjugate_symbol(ma.A(k2), m))

# symbolic check that H' shifts A by lambda
h = ma.hprime_element([k2], m)
print("[H', A(k)] =", h.commutator_with(ma.A(k2), m))

# matrix realization of the P2 pair on 8 x 8 levels
r = ma.realize_p2_pair(k2, m, 8)
a, ab = r[ma.A(k2)], r[ma.ABar(k2)]
print("off-corner residual of [A, ABar] + i:", off_corner_residual(commutator(a, ab) + 1j * np.eye(r.dim), r.levels))
hp = ma.build_hprime_modes([k2, -k2], m, r)
print("H' hermiticity defect (full space):", hermiticity_defect(hp))
print("H' normality residual off corner:", ze.normality_check(hp, r.levels, depth=2))
print("H' normality residual full space:", ze.normality_check(hp))
