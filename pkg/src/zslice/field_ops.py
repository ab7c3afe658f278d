"""Finite matrix realizations of the field, its conjugate momentum and the evolution generators.

Two pictures are available:

* a periodic grid of field values (wavefunctional picture), where the field is
  diagonal and the momentum is ``-i d/dphi`` built by spectral differentiation;
* a truncated Fock space per mode, where ``phi`` and ``Pi`` are combinations of
  ladder matrices and identities hold exactly away from the top two levels.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import mode_algebra as ma
from .dispersion import MassParam, MomentumTriple, Region, SpatialMomentum, classify_region, omega
from .operators import OperatorMatrix, commutator, embed, off_corner_residual


@dataclass(frozen=True)
class SiteGrid:
    n_phi: int
    phi_max: float

    def __post_init__(self):
        n = self.n_phi
        if n < 8 or n & (n - 1):
            raise ValueError(f"n_phi must be a power of two >= 8, got {n}")
        if not self.phi_max > 0:
            raise ValueError(f"phi_max must be positive, got {self.phi_max}")

    @property
    def spacing(self) -> float:
        return 2 * self.phi_max / self.n_phi

    @property
    def points(self) -> np.ndarray:
        return -self.phi_max + self.spacing * np.arange(self.n_phi)

    @property
    def wavenumbers(self) -> np.ndarray:
        """Discrete Fourier wavenumbers in FFT order, Nyquist entry set to zero."""
        k = 2 * np.pi * np.fft.fftfreq(self.n_phi, d=self.spacing)
        k[self.n_phi // 2] = 0.0
        return k


def build_phi_grid(g: SiteGrid) -> OperatorMatrix:
    return OperatorMatrix(np.diag(g.points), "phi[grid]")


def spectral_derivative_matrix(g: SiteGrid) -> np.ndarray:
    """Real antisymmetric matrix of d/dphi on the periodic grid (Nyquist mode dropped)."""
    n = g.n_phi
    eye = np.eye(n)
    d = np.fft.ifft(1j * g.wavenumbers[:, None] * np.fft.fft(eye, axis=0), axis=0).real
    return (d - d.T) / 2


def build_pi_grid(g: SiteGrid) -> OperatorMatrix:
    return OperatorMatrix(-1j * spectral_derivative_matrix(g), "Pi[grid]")


def plane_wave(g: SiteGrid, wavenumber: float) -> np.ndarray:
    """Samples of ``exp(i Pi0 phi)`` on the grid."""
    return np.exp(1j * wavenumber * g.points)


def build_phi_pi_fock(mode_omega: float, dim: int) -> tuple[OperatorMatrix, OperatorMatrix]:
    """``phi = (a + a^dag)/sqrt(2w)``, ``Pi = -i sqrt(w/2) (a - a^dag)`` on ``dim`` levels.

    The same pair serves the z-sliced picture with ``w = |lambda|`` of a ``P1`` mode.
    """
    if not mode_omega > 0:
        raise ValueError(f"mode frequency must be positive, got {mode_omega}")
    if dim < 4:
        raise ValueError(f"dim must be >= 4, got {dim}")
    a = ma.lowering(dim)
    ad = a.conj().T
    phi = (a + ad) / np.sqrt(2 * mode_omega)
    pi = -1j * np.sqrt(mode_omega / 2) * (a - ad)
    return OperatorMatrix(phi, "phi[fock]"), OperatorMatrix(pi, "Pi[fock]")


def build_H_modes(modes: Sequence[SpatialMomentum], m: MassParam, dim: int) -> OperatorMatrix:
    """``H = sum_k omega_k (a_k^dag a_k + 1/2)`` on a product of ``dim``-level oscillators."""
    modes = list(modes)
    if not modes:
        raise ValueError("empty mode list")
    levels = (dim,) * len(modes)
    number = np.diag(np.arange(dim, dtype=complex))
    total = np.prod(levels)
    h = np.zeros((total, total), dtype=complex)
    for j, k in enumerate(modes):
        w = omega(k, m)
        h += w * (embed(number, j, levels) + 0.5 * np.eye(total))
    return OperatorMatrix(h, "H", levels)


def realizations_for(modes: Sequence[MomentumTriple], m: MassParam, dim: int) -> ma.TruncatedRealization:
    """One oscillator per ``P1`` mode and one two-oscillator block per ``P2`` pair ``{k, -k}``."""
    parts = []
    seen = set()
    for kp in modes:
        if kp in seen:
            continue
        region = classify_region(kp, m)
        if region is Region.BOUNDARY:
            raise ma.DegenerateModeError(f"boundary mode {kp} has lambda = 0")
        if region is Region.P1:
            parts.append(ma.realize_p1_mode(dim, kp))
            seen.add(kp)
        else:
            parts.append(ma.realize_p2_pair(kp, m, dim))
            seen.update({kp, -kp})
    return ma.combine(parts)


def build_Hprime_modes(modes: Sequence[MomentumTriple], m: MassParam, dim: int) -> OperatorMatrix:
    modes = list(modes)
    if not modes:
        raise ValueError("empty mode list")
    return ma.build_hprime_modes(modes, m, realizations_for(modes, m, dim))


@dataclass(frozen=True)
class EvolutionCommutatorReport:
    """Off-corner max-norm residuals; ``None`` where the generator was not supplied."""

    t_residual: float | None
    z_residual: float | None

    def passed(self, tol: float = 1e-10) -> bool:
        return all(r is None or r <= tol for r in (self.t_residual, self.z_residual))


def check_evolution_commutators(phi, pi, h=None, hprime=None, levels=None, depth: int = 2) -> EvolutionCommutatorReport:
    """Residuals of ``i[H, phi] - Pi`` and ``i[H', phi] + Pi`` off the truncation corner.

    The opposite signs are the point: ``phi`` moves forward in ``t`` with ``+Pi``
    and forward in ``z`` with ``-Pi``.
    """
    phi_a, pi_a = np.asarray(phi), np.asarray(pi)
    if phi_a.shape != pi_a.shape:
        raise ValueError(f"dimension mismatch: phi {phi_a.shape} vs Pi {pi_a.shape}")
    if levels is None:
        levels = getattr(phi, "levels", None) or (phi_a.shape[0],)

    def res(gen, sign):
        if gen is None:
            return None
        g = np.asarray(gen)
        if g.shape != phi_a.shape:
            raise ValueError(f"dimension mismatch: generator {g.shape} vs phi {phi_a.shape}")
        return off_corner_residual(1j * commutator(g, phi_a) - sign * pi_a, levels, depth)

    return EvolutionCommutatorReport(res(h, +1), res(hprime, -1))


def canonical_commutator_residual_fock(phi, pi, depth: int = 2) -> float:
    """Off-corner residual of ``[Pi, phi] + i``."""
    c = commutator(pi, phi) + 1j * np.eye(np.asarray(phi).shape[0])
    levels = getattr(phi, "levels", None) or (c.shape[0],)
    return off_corner_residual(c, levels, depth)


def band_limited_packets(g: SiteGrid, count: int, rng: np.random.Generator) -> np.ndarray:
    """Smooth packets whose Fourier support is the central half of the band.

    Gaussian envelopes are sized so that both the values at the grid edges and
    the Fourier content beyond half the Nyquist wavenumber are far below
    double-precision relevance, then projected exactly onto the central half.
    Columns are unit-normalized.
    """
    k_nyq = np.pi / g.spacing
    sigma = np.sqrt(2 * g.phi_max / k_nyq)
    carriers = rng.uniform(-k_nyq / 64, k_nyq / 64, size=count)
    centres = rng.uniform(-g.phi_max / 64, g.phi_max / 64, size=count)
    x = g.points[:, None]
    psi = np.exp(-((x - centres) ** 2) / (2 * sigma**2) + 1j * carriers * x)
    spec = np.fft.fft(psi, axis=0)
    spec[np.abs(g.wavenumbers) >= k_nyq / 2] = 0.0
    spec[g.n_phi // 2] = 0.0
    psi = np.fft.ifft(spec, axis=0)
    return psi / np.linalg.norm(psi, axis=0)


def canonical_commutator_residual_grid(g: SiteGrid, vectors: np.ndarray) -> float:
    """Max over columns of ``||([Pi, phi] + i) psi|| / ||psi||``."""
    phi = np.asarray(build_phi_grid(g))
    pi = np.asarray(build_pi_grid(g))
    out = commutator(pi, phi) @ vectors + 1j * vectors
    return float(np.max(np.linalg.norm(out, axis=0) / np.linalg.norm(vectors, axis=0)))
