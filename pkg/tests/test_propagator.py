import cmath
import itertools
import math

import numpy as np
import pytest

from zslice import propagator as pr
from zslice.dispersion import MassParam, lambda_grid, omega_grid

M = MassParam(1.0, 0.1)
Q48 = pr.QuadratureSpec(6.0, 48)
Q32 = pr.QuadratureSpec(6.0, 32)


def test_bracket_examples():
    assert pr.bracket_closed(1.0, 0.0) == pytest.approx(0.5, abs=1e-15)
    assert pr.bracket_closed(1j, 1.0) == pytest.approx(-0.1839397j, abs=1e-7)
    assert pr.bracket_closed(2.0, -3.0) == pytest.approx(cmath.exp(6j) / 4, abs=1e-15)
    with pytest.raises(pr.PoleError):
        pr.bracket_closed(0.0, 1.0)


@pytest.mark.parametrize("z", [1.0, -1.0])
def test_contour_identity_example(z):
    lam = 1 + 0.1j
    num = pr.kz_contour_numeric(lam, z, pr.QuadratureSpec(200.0, 200_000))
    assert abs(num - pr.bracket_closed(lam, z)) <= 1e-3


def test_contour_needs_upper_half_plane():
    with pytest.raises(pr.PreconditionError):
        pr.kz_contour_numeric(1.0 + 0j, 1.0, pr.QuadratureSpec(10.0, 1000))


def test_contour_error_shrinks_with_cutoff():
    lam, z = 2 + 0.05j, 0.5
    exact = pr.bracket_closed(lam, z)
    errs = [abs(pr.kz_contour_numeric(lam, z, pr.QuadratureSpec(c, int(1000 * c))) - exact) for c in (50, 100, 200, 400)]
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        pr.QuadratureSpec(0.0, 32)
    with pytest.raises(ValueError):
        pr.QuadratureSpec(6.0, 8)
    with pytest.raises(ValueError):
        pr.SpacetimePoint(math.nan, 0, 0, 0)


@pytest.mark.parametrize("f", [pr.propagator_zform, pr.propagator_tform, pr.propagator_4d])
def test_regulator_required(f):
    with pytest.raises(pr.PreconditionError):
        f(pr.SpacetimePoint(0, 0, 0, 0), MassParam(1.0), Q32)


def test_zform_symmetries():
    p = (0.3, 0.2, 0.5, 0.4)
    base = pr.propagator_zform(pr.SpacetimePoint(*p), M, Q48).value
    for q in [(-0.3, -0.2, 0.5, 0.4), (0.3, 0.2, -0.5, 0.4)]:
        assert abs(pr.propagator_zform(pr.SpacetimePoint(*q), M, Q48).value - base) <= 1e-12


def test_tform_symmetries():
    p = (0.3, 0.2, 0.5, 0.4)
    base = pr.propagator_tform(pr.SpacetimePoint(*p), M, Q48).value
    assert abs(pr.propagator_tform(pr.SpacetimePoint(0.3, 0.2, 0.5, -0.4), M, Q48).value - base) <= 1e-12
    a = pr.propagator_tform(pr.SpacetimePoint(1, 0, 0, 0), M, Q48).value
    b = pr.propagator_tform(pr.SpacetimePoint(0, 1, 0, 0), M, Q48).value
    assert abs(a - b) <= 1e-12


def test_fourd_permutation_symmetry():
    vals = [pr.propagator_4d(pr.SpacetimePoint(*p, 0.0), M, Q32).value for p in itertools.permutations((1.0, 0.5, 0.0))]
    assert max(abs(v - vals[0]) for v in vals) <= 1e-12


def test_fourd_origin_reference_and_self_convergence():
    p = pr.SpacetimePoint(0, 0, 0, 0)
    v48 = pr.propagator_4d(p, M, Q48)
    # frozen from the 24 -> 48 -> 96 node study below
    assert v48.value == pytest.approx(-0.4976104211035946 - 0.42182132074394657j, abs=1e-10)
    v24 = pr.propagator_4d(p, M, pr.QuadratureSpec(6.0, 24))
    v96 = pr.propagator_4d(p, M, pr.QuadratureSpec(6.0, 96))
    assert v96.error < v48.error < v24.error
    assert abs(v96.value - v48.value) <= 0.02 * abs(v96.value)


def test_error_estimate_grows_when_nodes_halved():
    p = pr.SpacetimePoint(0.5, 0, 0.5, 0.5)
    fine = pr.propagator_4d(p, M, pr.QuadratureSpec(6.0, 64))
    coarse = pr.propagator_4d(p, M, pr.QuadratureSpec(6.0, 32))
    assert coarse.error > fine.error


def test_momentum_propagator_examples():
    assert pr.momentum_propagator((0, 0, 0, 0), MassParam(1.0)) == -1
    k = (0.3, -0.4, 1.2, math.sqrt(0.09 + 0.16 + 1.44 + 1))
    assert pr.momentum_propagator(k, MassParam(1.0, 0.01)) == pytest.approx(-100j, rel=1e-9)
    with pytest.raises(pr.PoleError):
        pr.momentum_propagator((0, 0, 0, 1), MassParam(1.0))


def test_fourd_weights_share_the_kernel():
    p = pr.SpacetimePoint(0, 0, 0, 0)
    k, _ = Q32.axis()
    for i in (0, 7, 31):
        w = pr.fourd_weights(p, M, Q32, i)
        for j, l, n in [(0, 0, 0), (3, 17, 29), (31, 5, 12)]:
            assert w[j, l, n] == pytest.approx(pr.momentum_propagator((k[i], k[j], k[l], k[n]), M), rel=1e-14)


def test_thread_count_does_not_change_bits(monkeypatch):
    p = pr.SpacetimePoint(0.3, 0.3, 0.3, 0.8)
    out = []
    for threads in ("1", "4"):
        monkeypatch.setenv("ZSLICE_THREADS", threads)
        out.append([f(p, M, Q32).value for f in pr.METHODS.values()])
    assert out[0] == out[1]


def _zform_1d(kx, ky, z, t, cutoff, n):
    h = 2 * cutoff / n
    kt = -cutoff + (np.arange(n) + 0.5) * h
    return -1j * np.sum(np.exp(1j * kt * t) * pr.bracket_closed(lambda_grid(kx, ky, kt, M), z)) * h / (2 * np.pi)


def _tform_1d(kx, ky, z, t, cutoff, n):
    h = 2 * cutoff / n
    kz = -cutoff + (np.arange(n) + 0.5) * h
    w = omega_grid(kx, ky, kz, M)
    return -1j * np.sum(np.exp(1j * kz * z) * np.exp(-1j * w * abs(t)) / (2 * w)) * h / (2 * np.pi)


def test_mode_by_mode_equivalence_of_z_and_t_forms():
    # at fixed (kx, ky) both forms are the same 2D integral done in a different order;
    # they converge to each other as the 1D cutoff grows
    devs = []
    for c in (100, 400, 1600):
        a, b = _zform_1d(0.7, -0.4, 0.5, 1.3, c, 200 * c), _tform_1d(0.7, -0.4, 0.5, 1.3, c, 200 * c)
        devs.append(abs(a - b) / abs(b))
    assert devs[-1] <= 1e-3
    assert devs[0] > devs[1] > devs[2]


def test_relative_deviation():
    assert pr.relative_deviation(1, 1) == 0
    assert pr.relative_deviation(0, 0) == 0
    assert pr.relative_deviation(1, 0.98) == pytest.approx(0.02)
