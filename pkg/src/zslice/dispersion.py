"""Frequencies and z-direction wavenumbers of free scalar modes.

In the usual picture a mode with spatial momentum ``k`` oscillates in time with
``omega = sqrt(k.k + m^2)``. When ``z`` plays the role of time, a mode is
labelled by ``(kx, ky, kt)`` and propagates along ``z`` with

    lambda = sqrt(kt^2 - kx^2 - ky^2 - m^2)

which is real inside the region ``P1`` (``kt^2 >= kx^2 + ky^2 + m^2``) and
imaginary in ``P2``. The branch is fixed so that a real ``lambda`` is positive
and an imaginary one sits at phase ``+pi/2``; with the ``m^2 -> m^2 - i eps``
regulator the same rule reads "principal root, imaginary part >= 0".
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

BOUNDARY_ATOL = 1e-12


class DomainError(ValueError):
    """Raised for non-finite momenta or unphysical mass parameters."""


class Region(str, Enum):
    P1 = "P1"
    P2 = "P2"
    BOUNDARY = "Boundary"


def _check_finite(*values):
    for v in values:
        if not math.isfinite(v):
            raise DomainError(f"non-finite component {v!r}")


@dataclass(frozen=True)
class SpatialMomentum:
    kx: float
    ky: float
    kz: float

    def __post_init__(self):
        _check_finite(self.kx, self.ky, self.kz)

    def __neg__(self):
        return SpatialMomentum(-self.kx, -self.ky, -self.kz)


@dataclass(frozen=True)
class MomentumTriple:
    """Mode label ``(kx, ky, kt)`` for the z-sliced expansion."""

    kx: float
    ky: float
    kt: float

    def __post_init__(self):
        _check_finite(self.kx, self.ky, self.kt)

    def __neg__(self):
        return MomentumTriple(-self.kx, -self.ky, -self.kt)

    def as_tuple(self):
        return (self.kx, self.ky, self.kt)


@dataclass(frozen=True)
class MassParam:
    m: float
    eps: float = 0.0

    def __post_init__(self):
        _check_finite(self.m, self.eps)
        if self.m <= 0:
            raise DomainError(f"mass must be positive, got {self.m}")
        if self.eps < 0:
            raise DomainError(f"regulator eps must be >= 0, got {self.eps}")


@dataclass(frozen=True)
class DispersionValue:
    lam: complex
    region: Region


def omega(k: SpatialMomentum, m: MassParam) -> float:
    return math.sqrt(k.kx**2 + k.ky**2 + k.kz**2 + m.m**2)


def _lambda_squared(kx, ky, kt, m: MassParam):
    return kt**2 - kx**2 - ky**2 - m.m**2 + 1j * m.eps


def branch_sqrt(arg):
    """Square root on the branch with non-negative imaginary part.

    Works on scalars and arrays. A negative real argument with a signed-zero
    imaginary part would land on ``-i`` under the principal branch, so the
    imaginary part is normalised to ``+0.0`` first.
    """
    arg = np.asarray(arg, dtype=complex)
    arg = arg.real + 1j * np.where(arg.imag == 0, 0.0, arg.imag)
    root = np.sqrt(arg)
    root = np.where(root.imag < 0, -root, root)
    return root if root.ndim else complex(root)


def classify_region(kp: MomentumTriple, m: MassParam) -> Region:
    gap = kp.kt**2 - (kp.kx**2 + kp.ky**2 + m.m**2)
    if abs(gap) <= BOUNDARY_ATOL:
        return Region.BOUNDARY
    return Region.P1 if gap > 0 else Region.P2


def lambda_of(kp: MomentumTriple, m: MassParam) -> DispersionValue:
    lam = branch_sqrt(_lambda_squared(kp.kx, kp.ky, kp.kt, m))
    region = classify_region(kp, m)
    if m.eps == 0.0:
        # exact real / exact imaginary values on each side of the hyperboloid
        if region is Region.P1:
            lam = complex(lam.real, 0.0)
        elif region is Region.P2:
            lam = complex(0.0, lam.imag)
        else:
            lam = 0j
    return DispersionValue(lam, region)


def lambda_grid(kx, ky, kt, m: MassParam) -> np.ndarray:
    """Vectorised ``lambda`` over broadcast arrays of ``kx, ky, kt``."""
    return branch_sqrt(_lambda_squared(np.asarray(kx), np.asarray(ky), np.asarray(kt), m))


def omega_grid(kx, ky, kz, m: MassParam) -> np.ndarray:
    """Vectorised frequency with the same ``m^2 - i eps`` substitution as ``lambda``.

    The root is taken with non-positive imaginary part, the Feynman side for a
    time-ordered product.
    """
    w = np.sqrt(np.asarray(kx**2 + ky**2 + kz**2 + m.m**2 - 1j * m.eps, dtype=complex))
    return np.where(w.imag > 0, -w, w)
