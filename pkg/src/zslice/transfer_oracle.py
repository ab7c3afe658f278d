"""Discretized Gaussian path integral of the free field on a small 4D lattice.

The lattice has shape ``(n_t, n_x, n_y, n_z)``. Field values on the ``t`` faces
and the ``z`` faces are held fixed (boundary data); ``x`` and ``y`` are
periodic. The action uses forward differences,

    S = sum_sites a^4/2 [ (D_t phi/a)^2 - (D_x phi/a)^2 - (D_y phi/a)^2 - (D_z phi/a)^2 - (m^2 - i delta) phi^2 ]

so ``S = phi^T Q phi / 2`` with ``Q`` complex symmetric, and ``exp(iS)`` is
damped by ``delta > 0``.

The interior integral is done three ways: in one shot (Schur complement of
the whole interior block), slice by slice along ``t``, and slice by slice
along ``z``. Slice-by-slice elimination is composition of single-slice
transfer kernels acting on a Gaussian wavefunctional, once with constant-``t``
hyperplanes as states and once with constant-``z`` hyperplanes. All three must
give the same function of the boundary data.

Amplitudes are normalized by their value at zero boundary data, which removes
the determinant prefactor and its sign/phase ambiguity; the log-determinants
are available separately and are compared between methods as well.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg

MAX_SITES = 4096


class RegulatorError(ValueError):
    """The interior quadratic form is singular or the regulator is not positive."""


class SizeCapError(ValueError):
    pass


class Axis(str, Enum):
    T = "T"
    Z = "Z"


_AXIS_INDEX = {Axis.T: 0, Axis.Z: 3}


@dataclass(frozen=True)
class LatticeSpec4D:
    n_t: int
    n_x: int
    n_y: int
    n_z: int
    spacing: float = 1.0
    m: float = 1.0
    delta: float = 0.1

    def __post_init__(self):
        if min(self.shape) < 2:
            raise ValueError(f"every extent must be >= 2, got {self.shape}")
        if self.sites > MAX_SITES:
            raise SizeCapError(f"{self.sites} sites exceeds the cap of {MAX_SITES}")
        if not self.spacing > 0 or not self.m > 0:
            raise ValueError("spacing and mass must be positive")
        if not self.delta > 0:
            raise RegulatorError(f"regulator delta must be positive, got {self.delta}")

    @property
    def shape(self) -> tuple[int, int, int, int]:
        return (self.n_t, self.n_x, self.n_y, self.n_z)

    @property
    def sites(self) -> int:
        return self.n_t * self.n_x * self.n_y * self.n_z


def _boundary_mask(shape) -> np.ndarray:
    mask = np.zeros(shape, dtype=bool)
    mask[0] = mask[-1] = True
    mask[..., 0] = mask[..., -1] = True
    return mask


@dataclass(frozen=True)
class QuadraticLatticeForm:
    spec: LatticeSpec4D
    interior: np.ndarray  # Q_II
    coupling: np.ndarray  # Q_IB
    boundary: np.ndarray  # Q_BB
    interior_sites: np.ndarray  # flat site indices, C order over (t, x, y, z)
    boundary_sites: np.ndarray

    def site_coords(self, flat):
        return np.stack(np.unravel_index(flat, self.spec.shape), axis=-1)

    def full_matrix(self) -> np.ndarray:
        n = self.spec.sites
        q = np.zeros((n, n), dtype=complex)
        i, b = self.interior_sites, self.boundary_sites
        q[np.ix_(i, i)] = self.interior
        q[np.ix_(i, b)] = self.coupling
        q[np.ix_(b, i)] = self.coupling.T
        q[np.ix_(b, b)] = self.boundary
        return q


def _difference_laplacian(shape, axis: int, periodic: bool) -> np.ndarray:
    """``sum_edges (e_i - e_j)(e_i - e_j)^T`` over forward-difference edges along ``axis``."""
    n = int(np.prod(shape))
    idx = np.arange(n).reshape(shape)
    if periodic:
        a, b = idx, np.roll(idx, -1, axis=axis)
    else:
        sl = [slice(None)] * 4
        sl_next = [slice(None)] * 4
        sl[axis] = slice(0, shape[axis] - 1)
        sl_next[axis] = slice(1, shape[axis])
        a, b = idx[tuple(sl)], idx[tuple(sl_next)]
    a, b = a.ravel(), b.ravel()
    lap = np.zeros((n, n))
    np.add.at(lap, (a, a), 1.0)
    np.add.at(lap, (b, b), 1.0)
    np.add.at(lap, (a, b), -1.0)
    np.add.at(lap, (b, a), -1.0)
    return lap


def build_action(spec: LatticeSpec4D) -> QuadraticLatticeForm:
    shape = spec.shape
    a = spec.spacing
    lap = {ax: _difference_laplacian(shape, ax, periodic=ax in (1, 2)) for ax in range(4)}
    q = a**2 * (lap[0] - lap[1] - lap[2] - lap[3]) - a**4 * (spec.m**2 - 1j * spec.delta) * np.eye(spec.sites)
    mask = _boundary_mask(shape).ravel()
    i_sites = np.flatnonzero(~mask)
    b_sites = np.flatnonzero(mask)
    q_ii = q[np.ix_(i_sites, i_sites)]
    if i_sites.size:
        smallest = np.min(np.abs(np.linalg.eigvals(q_ii)))
        if smallest <= 1e-12 * max(1.0, np.max(np.abs(q_ii))):
            raise RegulatorError(f"interior form is singular (smallest |eigenvalue| {smallest:.3g}); increase delta")
    return QuadraticLatticeForm(
        spec=spec,
        interior=q_ii,
        coupling=q[np.ix_(i_sites, b_sites)],
        boundary=q[np.ix_(b_sites, b_sites)],
        interior_sites=i_sites,
        boundary_sites=b_sites,
    )


def _wall_index(shape, axis: Axis):
    nt, _, _, nz = shape
    if axis is Axis.T:
        return (slice(1, nt - 1), slice(None), slice(None), [0, nz - 1])
    return ([0, nt - 1], slice(None), slice(None), slice(1, nz - 1))


@dataclass(frozen=True)
class BoundaryData:
    """Fixed field values on the boundary, framed for slicing along ``axis``.

    ``initial`` and ``final`` are the first and last hyperplanes of ``axis``;
    ``walls`` holds the remaining fixed sites (the faces of the other sliced
    axis between those hyperplanes) and defaults to zero.
    """

    initial: np.ndarray
    final: np.ndarray
    axis: Axis
    walls: np.ndarray | None = None

    def to_lattice(self, shape) -> np.ndarray:
        field = np.full(shape, np.nan)
        ax = _AXIS_INDEX[self.axis]
        face_shape = tuple(n for j, n in enumerate(shape) if j != ax)
        for name, vals in (("initial", self.initial), ("final", self.final)):
            vals = np.asarray(vals, dtype=float)
            if vals.shape != face_shape:
                raise ValueError(f"{name} face has shape {vals.shape}, expected {face_shape}")
        field[(slice(None),) * ax + (0,)] = self.initial
        field[(slice(None),) * ax + (-1,)] = self.final
        wall_idx = _wall_index(shape, self.axis)
        wall_shape = field[wall_idx].shape
        walls = np.zeros(wall_shape) if self.walls is None else np.asarray(self.walls, dtype=float)
        if walls.shape != wall_shape:
            raise ValueError(f"walls have shape {walls.shape}, expected {wall_shape}")
        field[wall_idx] = walls
        return field

    @classmethod
    def from_lattice(cls, field: np.ndarray, axis: Axis) -> BoundaryData:
        ax = _AXIS_INDEX[axis]
        initial = np.array(field[(slice(None),) * ax + (0,)])
        final = np.array(field[(slice(None),) * ax + (-1,)])
        walls = np.array(field[_wall_index(field.shape, axis)])
        return cls(initial, final, axis, walls)

    def reframe(self, shape, axis: Axis) -> BoundaryData:
        """The same boundary configuration framed for slicing along ``axis``."""
        return BoundaryData.from_lattice(self.to_lattice(shape), axis)

    def vector(self, form: QuadraticLatticeForm) -> np.ndarray:
        return self.to_lattice(form.spec.shape).ravel()[form.boundary_sites]


def _check_axis(b: BoundaryData, axis: Axis):
    if b.axis is not axis:
        raise ValueError(f"boundary data is framed for {b.axis.value}, not {axis.value}")


# --- amplitudes -------------------------------------------------------------


def log_amplitude_direct(form: QuadraticLatticeForm, b: BoundaryData) -> complex:
    """Exponent of the normalized amplitude, integrating the whole interior at once."""
    bv = b.vector(form)
    quad = 0.5 * bv @ form.boundary @ bv
    if form.interior_sites.size:
        j = form.coupling @ bv
        quad -= 0.5 * j @ scipy.linalg.solve(form.interior, j)
    return 1j * quad


def _slices(form: QuadraticLatticeForm, axis: Axis) -> list[np.ndarray]:
    coord = form.site_coords(form.interior_sites)[:, _AXIS_INDEX[axis]]
    return [np.flatnonzero(coord == c) for c in np.unique(coord)]


def _sliced_elimination(form: QuadraticLatticeForm, bv: np.ndarray, axis: Axis):
    """Compose single-slice transfer kernels; returns (quadratic exponent, log det Q_II)."""
    quad = 0.5 * bv @ form.boundary @ bv
    logdet = 0j
    slices = _slices(form, axis)
    if not slices:
        return quad, logdet
    q, j_all = form.interior, form.coupling @ bv
    # wavefunctional exp(i [phi^T A phi / 2 + K^T phi]) on the current slice
    a_cur = q[np.ix_(slices[0], slices[0])]
    k_cur = j_all[slices[0]]
    for s in range(len(slices)):
        lu = scipy.linalg.lu_factor(a_cur)
        logdet += np.sum(np.log(np.diag(lu[0]).astype(complex)))
        logdet += 1j * np.pi * (np.count_nonzero(lu[1] != np.arange(lu[1].size)) % 2)
        ainv_k = scipy.linalg.lu_solve(lu, k_cur)
        quad -= 0.5 * k_cur @ ainv_k
        if s + 1 == len(slices):
            break
        nxt = slices[s + 1]
        c = q[np.ix_(slices[s], nxt)]
        ainv_c = scipy.linalg.lu_solve(lu, c)
        a_cur = q[np.ix_(nxt, nxt)] - c.T @ ainv_c
        k_cur = j_all[nxt] - c.T @ ainv_k
    return quad, logdet


def log_amplitude_sliced(form: QuadraticLatticeForm, b: BoundaryData, axis: Axis) -> complex:
    _check_axis(b, axis)
    quad, _ = _sliced_elimination(form, b.vector(form), axis)
    return 1j * quad


def amplitude_direct(form: QuadraticLatticeForm, b: BoundaryData) -> complex:
    return complex(np.exp(log_amplitude_direct(form, b)))


def amplitude_sliced(form: QuadraticLatticeForm, b: BoundaryData, axis: Axis) -> complex:
    return complex(np.exp(log_amplitude_sliced(form, b, axis)))


def interior_logdet(form: QuadraticLatticeForm, axis: Axis | None = None) -> complex:
    """``log det Q_II`` (mod ``2 pi i``), directly or as the product of slice pivots."""
    if not form.interior_sites.size:
        return 0j
    if axis is None:
        sign, logabs = np.linalg.slogdet(form.interior)
        return complex(logabs + np.log(sign))
    _, logdet = _sliced_elimination(form, np.zeros(form.boundary_sites.size), axis)
    return logdet


def wrap_phase(x: complex) -> complex:
    """Map the imaginary part into ``(-pi, pi]``."""
    im = math.remainder(x.imag, 2 * math.pi)
    return complex(x.real, im)


# --- seeded boundary configurations -----------------------------------------


GENERATOR_DOC = (
    "Philox4x64-10 with key=(seed, 0) and counter starting at 0; raw 64-bit outputs r are "
    "mapped to u = (r >> 11) * 2**-53 and field values are scale * (2u - 1), filled in C order "
    "over the full lattice (t, x, y, z) and then restricted to boundary sites; configuration j "
    "consumes the j-th block of n_sites outputs"
)


def random_boundaries(spec: LatticeSpec4D, seed: int, count: int, axis: Axis = Axis.T, scale: float = 0.5) -> list[BoundaryData]:
    bitgen = np.random.Philox(key=int(seed) & (2**64 - 1))
    raw = bitgen.random_raw(count * spec.sites)
    u = (raw >> np.uint64(11)).astype(np.float64) * 2.0**-53
    vals = scale * (2.0 * u - 1.0)
    mask = _boundary_mask(spec.shape)
    out = []
    for j in range(count):
        field = vals[j * spec.sites:(j + 1) * spec.sites].reshape(spec.shape).copy()
        field[~mask] = np.nan
        out.append(BoundaryData.from_lattice(field, axis))
    return out


@dataclass(frozen=True)
class OracleRow:
    index: int
    direct: complex
    t_sliced: complex
    z_sliced: complex

    @property
    def max_deviation(self) -> float:
        vals = (self.direct, self.t_sliced, self.z_sliced)
        dev = 0.0
        for i in range(3):
            for j in range(i + 1, 3):
                dev = max(dev, abs(vals[i] - vals[j]) / max(abs(vals[i]), abs(vals[j])))
        return dev


def compare_slicings(spec: LatticeSpec4D, seed: int, count: int = 20, scale: float = 0.5) -> list[OracleRow]:
    form = build_action(spec)
    rows = []
    for j, bt in enumerate(random_boundaries(spec, seed, count, Axis.T, scale)):
        bz = bt.reframe(spec.shape, Axis.Z)
        rows.append(
            OracleRow(j, amplitude_direct(form, bt), amplitude_sliced(form, bt, Axis.T), amplitude_sliced(form, bz, Axis.Z))
        )
    return rows
