"""Feynman propagator of the free scalar field, computed three ways.

* ``propagator_zform``: modes labelled by ``(kx, ky, kt)`` with the ``kz``
  dependence already integrated in closed form, ``[e^{i lam z} th(z) + e^{-i lam z} th(-z)] / 2 lam``;
* ``propagator_tform``: the usual time-ordered mode sum over ``(kx, ky, kz)``;
* ``propagator_4d``: the covariant four-momentum integral.

All three use midpoint rules on offset tensor grids over ``[-cutoff, cutoff]``
per axis. Each value comes with an error estimate, the difference between
the ``nodes`` and ``nodes // 2`` evaluations. Sums are reduced in a fixed
order (per-slice partial sums combined with ``math.fsum``), so results are
bitwise reproducible whatever the thread count.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .dispersion import MassParam, lambda_grid, omega_grid

TWO_PI = 2 * np.pi


class PreconditionError(ValueError):
    pass


class PoleError(ZeroDivisionError):
    pass


@dataclass(frozen=True)
class SpacetimePoint:
    x: float
    y: float
    z: float
    t: float

    def __post_init__(self):
        for v in (self.x, self.y, self.z, self.t):
            if not math.isfinite(v):
                raise ValueError(f"non-finite coordinate {v!r}")

    def as_tuple(self):
        return (self.x, self.y, self.z, self.t)


@dataclass(frozen=True)
class QuadratureSpec:
    cutoff: float
    nodes: int
    offset: float = 0.5

    def __post_init__(self):
        if not self.cutoff > 0:
            raise ValueError(f"cutoff must be positive, got {self.cutoff}")
        if self.nodes < 16:
            raise ValueError(f"need at least 16 nodes per axis, got {self.nodes}")
        if not 0 < self.offset < 1:
            raise ValueError(f"offset must lie in (0, 1), got {self.offset}")

    def axis(self, nodes: int | None = None) -> tuple[np.ndarray, float]:
        n = self.nodes if nodes is None else nodes
        h = 2 * self.cutoff / n
        return -self.cutoff + (np.arange(n) + self.offset) * h, h


@dataclass(frozen=True)
class PropagatorValue:
    value: complex
    method: str
    error: float

    def __post_init__(self):
        if not np.isfinite(self.value):
            raise ValueError(f"non-finite propagator value from {self.method}")


def _threads() -> int:
    env = os.environ.get("ZSLICE_THREADS")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


def _sliced_sum(slice_sum: Callable[[int], complex], count: int) -> complex:
    """Sum ``slice_sum(i)`` for ``i < count`` in a fixed order."""
    threads = _threads()
    if threads > 1 and count > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(slice_sum, range(count)))
    else:
        parts = [slice_sum(i) for i in range(count)]
    return complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))


def _heaviside(x):
    return np.where(x > 0, 1.0, np.where(x < 0, 0.0, 0.5))


def bracket_closed(lam, z):
    """``[e^{i lam z} th(z) + e^{-i lam z} th(-z)] / (2 lam)`` with ``th(0) = 1/2``."""
    lam = np.asarray(lam, dtype=complex)
    if np.any(lam == 0):
        raise PoleError("bracket has a pole at lambda = 0")
    out = (np.exp(1j * lam * z) * _heaviside(z) + np.exp(-1j * lam * z) * _heaviside(-z)) / (2 * lam)
    return out if out.ndim else complex(out)


def kz_contour_numeric(lam: complex, z: float, q: QuadratureSpec) -> complex:
    """Midpoint value of ``-i int dkz/2pi e^{-i kz z} / (kz^2 - lam^2)`` on ``[-cutoff, cutoff]``."""
    lam = complex(lam)
    if lam.imag <= 0:
        raise PreconditionError(f"Im(lambda) must be positive (pole on the contour), got {lam}")
    k, h = q.axis()
    chunk = 1 << 16
    parts = []
    for start in range(0, k.size, chunk):
        kk = k[start:start + chunk]
        parts.append(np.sum(np.exp(-1j * kk * z) / (kk * kk - lam * lam)))
    total = complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))
    return -1j * total * h / TWO_PI


def _require_eps(m: MassParam):
    if not m.eps > 0:
        raise PreconditionError("the propagator needs a positive i-eps regulator (eps > 0)")


def _zform_sum(p: SpacetimePoint, m: MassParam, q: QuadratureSpec, nodes: int) -> complex:
    k, h = q.axis(nodes)
    ky, kt = np.meshgrid(k, k, indexing="ij")
    phase_yt = np.exp(-1j * (ky * p.y - kt * p.t))

    def slice_sum(i):
        kx = k[i]
        lam = lambda_grid(kx, ky, kt, m)
        return np.sum(np.exp(-1j * kx * p.x) * phase_yt * bracket_closed(lam, p.z))

    return -1j * _sliced_sum(slice_sum, nodes) * h**3 / TWO_PI**3


def _tform_sum(p: SpacetimePoint, m: MassParam, q: QuadratureSpec, nodes: int) -> complex:
    k, h = q.axis(nodes)
    ky, kz = np.meshgrid(k, k, indexing="ij")
    phase_yz = np.exp(1j * (ky * p.y + kz * p.z))

    def slice_sum(i):
        kx = k[i]
        w = omega_grid(kx, ky, kz, m)
        # e^{-i w t} th(t) + e^{i w t} th(-t), th(0) = 1/2
        time_part = np.exp(-1j * w * p.t) * _heaviside(p.t) + np.exp(1j * w * p.t) * _heaviside(-p.t)
        return np.sum(np.exp(1j * kx * p.x) * phase_yz * time_part / (2 * w))

    return -1j * _sliced_sum(slice_sum, nodes) * h**3 / TWO_PI**3


def _momentum_kernel(kx, ky, kz, kt, m: MassParam):
    return 1.0 / (kt * kt - kx * kx - ky * ky - kz * kz - m.m**2 + 1j * m.eps)


def fourd_weights(p: SpacetimePoint, m: MassParam, q: QuadratureSpec, index: int):
    """Momentum-space factor of the 4D integrand on the ``kx = k[index]`` slice (shape ``(n, n, n)``)."""
    k, _ = q.axis()
    ky, kz, kt = np.meshgrid(k, k, k, indexing="ij")
    return _momentum_kernel(k[index], ky, kz, kt, m)


def _fourd_sum(p: SpacetimePoint, m: MassParam, q: QuadratureSpec, nodes: int) -> complex:
    k, h = q.axis(nodes)
    ky, kz, kt = np.meshgrid(k, k, k, indexing="ij")
    phase = np.exp(-1j * (ky * p.y + kz * p.z - kt * p.t))
    transverse = ky * ky + kz * kz - kt * kt + m.m**2 - 1j * m.eps

    def slice_sum(i):
        kx = k[i]
        # 1/(kt^2 - k^2 - m^2 + i eps) = -1/(k^2 - kt^2 + m^2 - i eps)
        return np.sum(np.exp(-1j * kx * p.x) * phase / (-(kx * kx + transverse)))

    return _sliced_sum(slice_sum, nodes) * h**4 / TWO_PI**4


def _estimate(total: Callable[[int], complex], q: QuadratureSpec, method: str) -> PropagatorValue:
    fine = total(q.nodes)
    coarse = total(q.nodes // 2)
    return PropagatorValue(fine, method, abs(fine - coarse))


def propagator_zform(p: SpacetimePoint, m: MassParam, q: QuadratureSpec) -> PropagatorValue:
    _require_eps(m)
    return _estimate(lambda n: _zform_sum(p, m, q, n), q, "zform")


def propagator_tform(p: SpacetimePoint, m: MassParam, q: QuadratureSpec) -> PropagatorValue:
    _require_eps(m)
    return _estimate(lambda n: _tform_sum(p, m, q, n), q, "tform")


def propagator_4d(p: SpacetimePoint, m: MassParam, q: QuadratureSpec) -> PropagatorValue:
    _require_eps(m)
    return _estimate(lambda n: _fourd_sum(p, m, q, n), q, "fourd")


METHODS = {"zform": propagator_zform, "tform": propagator_tform, "fourd": propagator_4d}


def momentum_propagator(k, m: MassParam) -> complex:
    """``1 / (kt^2 - kx^2 - ky^2 - kz^2 - m^2 + i eps)`` for ``k = (kx, ky, kz, kt)``."""
    kx, ky, kz, kt = (float(c) for c in k)
    den = kt * kt - kx * kx - ky * ky - kz * kz - m.m**2 + 1j * m.eps
    if den == 0:
        raise PoleError(f"on-shell momentum {tuple(k)} with eps = 0")
    return 1.0 / den


def relative_deviation(a: complex, b: complex) -> float:
    """``|a - b| / max(|a|, |b|)``."""
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale else 0.0
