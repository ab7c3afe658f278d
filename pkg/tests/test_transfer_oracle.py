import itertools

import numpy as np
import pytest

from zslice import transfer_oracle as to


def hand_action(field, spec):
    """Lattice action summed site by site, written independently of the matrix builder."""
    nt, nx, ny, nz = spec.shape
    a = spec.spacing
    msq = spec.m**2 - 1j * spec.delta
    s = 0j
    for t, x, y, z in itertools.product(range(nt), range(nx), range(ny), range(nz)):
        f = field[t, x, y, z]
        if t + 1 < nt:
            s += a**2 * (field[t + 1, x, y, z] - f) ** 2
        s -= a**2 * (field[t, (x + 1) % nx, y, z] - f) ** 2
        s -= a**2 * (field[t, x, (y + 1) % ny, z] - f) ** 2
        if z + 1 < nz:
            s -= a**2 * (field[t, x, y, z + 1] - f) ** 2
        s -= a**4 * msq * f**2
    return s / 2


@pytest.mark.parametrize("shape", [(2, 2, 2, 2), (3, 2, 3, 3)])
def test_stencil_matches_hand_assembly(shape):
    spec = to.LatticeSpec4D(*shape, spacing=0.8, m=1.3)
    q = to.build_action(spec).full_matrix()
    assert np.max(np.abs(q - q.T)) == 0
    n = spec.sites
    basis = np.eye(n).reshape((n, *shape))
    diag = np.array([hand_action(basis[i], spec) for i in range(n)])
    for i in range(n):
        assert q[i, i] / 2 == pytest.approx(diag[i], abs=1e-12)
    rng = np.random.Generator(np.random.Philox(0))
    for i, j in rng.integers(0, n, size=(25, 2)):
        if i == j:
            continue
        pair = hand_action(basis[i] + basis[j], spec) - diag[i] - diag[j]
        assert q[i, j] == pytest.approx(pair, abs=1e-12)


def test_large_mass_diagonally_dominant():
    form = to.build_action(to.LatticeSpec4D(5, 3, 3, 5, m=10.0))
    qi = form.interior
    off = np.sum(np.abs(qi), axis=1) - np.abs(np.diag(qi))
    assert np.all(np.abs(np.diag(qi)) > off)


def test_regulated_interior_nonsingular():
    form = to.build_action(to.LatticeSpec4D(4, 2, 2, 4, delta=0.05))
    assert np.min(np.abs(np.linalg.eigvals(form.interior))) > 1e-3


def test_regulator_and_size_cap():
    with pytest.raises(to.RegulatorError):
        to.LatticeSpec4D(3, 2, 2, 3, delta=0.0)
    with pytest.raises(to.SizeCapError):
        to.LatticeSpec4D(20, 20, 20, 20)
    with pytest.raises(ValueError):
        to.LatticeSpec4D(1, 2, 2, 3)


def test_zero_boundary_is_normalization_anchor():
    spec = to.LatticeSpec4D(4, 2, 2, 4)
    form = to.build_action(spec)
    zero = to.BoundaryData.from_lattice(np.zeros(spec.shape), to.Axis.T)
    assert to.amplitude_direct(form, zero) == 1
    assert to.amplitude_sliced(form, zero, to.Axis.T) == 1


def test_log_amplitude_is_quadratic_in_scale():
    spec = to.LatticeSpec4D(4, 2, 2, 4)
    form = to.build_action(spec)
    (b,) = to.random_boundaries(spec, 11, 1)
    scaled = to.BoundaryData(2 * b.initial, 2 * b.final, b.axis, 2 * b.walls)
    one = to.log_amplitude_direct(form, b)
    assert to.log_amplitude_direct(form, scaled) == pytest.approx(4 * one, rel=1e-12)


def test_time_reversal_of_boundary():
    spec = to.LatticeSpec4D(5, 2, 2, 4)
    form = to.build_action(spec)
    for b in to.random_boundaries(spec, 3, 5):
        field = b.to_lattice(spec.shape)
        flipped = to.BoundaryData.from_lattice(field[::-1].copy(), to.Axis.T)
        a1, a2 = to.amplitude_direct(form, b), to.amplitude_direct(form, flipped)
        assert abs(abs(a1) - abs(a2)) <= 1e-12 * abs(a1)


@pytest.mark.parametrize("shape", [(3, 2, 2, 3), (5, 2, 2, 4), (6, 3, 2, 5), (4, 4, 4, 4)])
def test_three_way_agreement(shape):
    rows = to.compare_slicings(to.LatticeSpec4D(*shape), seed=42, count=20)
    assert len(rows) == 20
    for r in rows:
        assert abs(r.t_sliced - r.direct) <= 1e-8 * abs(r.direct)
        assert abs(r.z_sliced - r.direct) <= 1e-8 * abs(r.direct)
        assert abs(r.t_sliced - r.z_sliced) <= 1e-8 * abs(r.direct)
        assert r.max_deviation <= 1e-8


@pytest.mark.parametrize("shape", [(3, 2, 2, 3), (6, 3, 2, 5)])
def test_logdet_agrees_between_slicings(shape):
    form = to.build_action(to.LatticeSpec4D(*shape))
    direct = to.interior_logdet(form)
    for axis in to.Axis:
        d = to.wrap_phase(to.interior_logdet(form, axis) - direct)
        assert abs(d) <= 1e-10


def test_wrong_frame_rejected():
    spec = to.LatticeSpec4D(3, 2, 2, 3)
    form = to.build_action(spec)
    (b,) = to.random_boundaries(spec, 0, 1, axis=to.Axis.T)
    with pytest.raises(ValueError):
        to.log_amplitude_sliced(form, b, to.Axis.Z)


def test_reframe_round_trip():
    spec = to.LatticeSpec4D(5, 2, 3, 4)
    (b,) = to.random_boundaries(spec, 8, 1)
    back = b.reframe(spec.shape, to.Axis.Z).reframe(spec.shape, to.Axis.T)
    np.testing.assert_array_equal(back.to_lattice(spec.shape), b.to_lattice(spec.shape))


def test_generator_follows_documented_recipe():
    spec = to.LatticeSpec4D(3, 2, 2, 3)
    seed, count = 42, 3
    raw = np.random.Philox(key=seed).random_raw(count * spec.sites)
    u = (raw >> np.uint64(11)).astype(np.float64) * 2.0**-53
    vals = 0.5 * (2 * u - 1)
    mask = to._boundary_mask(spec.shape)
    for j, b in enumerate(to.random_boundaries(spec, seed, count)):
        expect = vals[j * spec.sites:(j + 1) * spec.sites].reshape(spec.shape)
        got = b.to_lattice(spec.shape)
        np.testing.assert_array_equal(got[mask], expect[mask])
