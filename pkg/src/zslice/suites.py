"""Named invariant suites reported by ``zslice invariants``.

Each check measures a residual and compares it with a fixed threshold.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import field_ops as fo
from . import mode_algebra as ma
from . import zevolution as ze
from .dispersion import MassParam, MomentumTriple, lambda_of
from .operators import commutator, hermiticity_defect, off_corner_residual
from .transfer_oracle import LatticeSpec4D, compare_slicings


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    threshold: float
    passed: bool
    comparison: str = "<="

    def as_dict(self):
        return asdict(self)


def _le(name, value, threshold):
    value = float(value)
    return Check(name, value, threshold, bool(value <= threshold), "<=")


def _gt(name, value, threshold):
    value = float(value)
    return Check(name, value, threshold, bool(value > threshold), ">")


M0 = MassParam(1.0)
P1_MODE = MomentumTriple(0.0, 0.0, 2.0)
P2_MODE = MomentumTriple(1.0, 0.0, 1.0)


def algebra_suite(dim: int = 8) -> list[Check]:
    out = []
    k1, k2 = P1_MODE, P2_MODE
    syms = [ma.A(k1), ma.ABar(k1), ma.A(k2), ma.ABar(k2), ma.A(-k2), ma.ABar(-k2)]

    out.append(_le("conjugate A(P1) -> ABar(k)", float(ma.conjugate_symbol(ma.A(k1), M0) != ma.ABar(k1)), 0))
    out.append(_le("conjugate A(P2) -> A(-k)", float(ma.conjugate_symbol(ma.A(k2), M0) != ma.A(-k2)), 0))
    out.append(
        _le("conjugation is an involution", sum(ma.conjugate_symbol(ma.conjugate_symbol(s, M0), M0) != s for s in syms), 0)
    )
    anti = max(abs(ma.commutator_coeff(x, y, M0) + ma.commutator_coeff(y, x, M0)) for x in syms for y in syms)
    out.append(_le("commutator antisymmetry", anti, 1e-12))
    cons = max(ma.conjugation_consistency(x, y, M0) for x in syms for y in syms)
    out.append(_le("[x,y]^dag = [y^dag,x^dag] at structure-constant level", cons, 1e-12))
    out.append(_le("[A,ABar] = |lam|/lam, P1", abs(ma.commutator_coeff(ma.A(k1), ma.ABar(k1), M0) - 1), 1e-12))
    out.append(_le("[A,ABar] = |lam|/lam, P2", abs(ma.commutator_coeff(ma.A(k2), ma.ABar(k2), M0) + 1j), 1e-12))
    for k in (k1, k2):
        lam = lambda_of(k, M0).lam
        h = ma.hprime_element([k], M0)
        da = h.commutator_with(ma.A(k), M0) - lam * ma.AlgebraElement.of(ma.A(k))
        db = h.commutator_with(ma.ABar(k), M0) + lam * ma.AlgebraElement.of(ma.ABar(k))
        worst = max([abs(v) for v in da.terms.values()] + [abs(v) for v in db.terms.values()] + [0.0])
        out.append(_le(f"symbolic [H',A]=lam A, [H',ABar]=-lam ABar at {k.as_tuple()}", worst, 1e-12))

    r1 = ma.realize_p1_mode(dim, k1)
    h1 = np.asarray(ma.build_hprime_modes([k1], M0, r1))
    lam1 = lambda_of(k1, M0).lam
    out.append(_le("P1 matrix [H',A]-lam A off corner", off_corner_residual(commutator(h1, r1[ma.A(k1)]) - lam1 * r1[ma.A(k1)], r1.levels), 1e-10))
    out.append(
        _le("P1 matrix [H',ABar]+lam ABar off corner", off_corner_residual(commutator(h1, r1[ma.ABar(k1)]) + lam1 * r1[ma.ABar(k1)], r1.levels), 1e-10)
    )

    r2 = ma.realize_p2_pair(k2, M0, dim)
    eye = np.eye(r2.dim)
    out.append(_le("P2 [A,ABar]+i off corner", off_corner_residual(commutator(r2[ma.A(k2)], r2[ma.ABar(k2)]) + 1j * eye, r2.levels), 1e-10))
    out.append(_le("P2 A(k)^dag = A(-k) exactly", np.max(np.abs(r2[ma.A(k2)].conj().T - r2[ma.A(-k2)])), 0))
    out.append(_le("P2 ABar(k)^dag = ABar(-k) exactly", np.max(np.abs(r2[ma.ABar(k2)].conj().T - r2[ma.ABar(-k2)])), 0))
    out.append(_le("P2 [A(k),A(-k)] off corner", off_corner_residual(commutator(r2[ma.A(k2)], r2[ma.A(-k2)]), r2.levels), 1e-10))
    h2 = ma.build_hprime_modes([k2, -k2], M0, r2)
    lam2 = lambda_of(k2, M0).lam
    out.append(_le("P2 matrix [H',A]-lam A off corner", off_corner_residual(commutator(h2, r2[ma.A(k2)]) - lam2 * r2[ma.A(k2)], r2.levels), 1e-10))
    out.append(_le("P2 H' normality residual off corner", ze.normality_check(h2, r2.levels, depth=2), 1e-8))
    out.append(_gt("P2 H' non-hermitian on the full truncated space", hermiticity_defect(h2), 0))
    return out


def fieldops_suite(dim: int = 16, n_phi: int = 64, seed: int = 0) -> list[Check]:
    out = []
    lam = lambda_of(P1_MODE, M0).lam.real
    phi, pi = fo.build_phi_pi_fock(lam, dim)
    out.append(_le("Fock [Pi,phi]+i off corner", fo.canonical_commutator_residual_fock(phi, pi), 1e-12))
    out.append(_le("Fock phi, Pi hermitian", max(hermiticity_defect(phi), hermiticity_defect(pi)), 1e-12))
    g = fo.SiteGrid(n_phi, 4.0)
    vecs = fo.band_limited_packets(g, 32, np.random.Generator(np.random.Philox(seed)))
    out.append(_le("grid [Pi,phi]+i on band-limited vectors", fo.canonical_commutator_residual_grid(g, vecs), 1e-8))
    out.append(_le("grid phi, Pi hermitian", max(hermiticity_defect(fo.build_phi_grid(g)), hermiticity_defect(fo.build_pi_grid(g))), 1e-12))
    h = np.diag(lam * (np.arange(dim) + 0.5))
    hp = fo.build_Hprime_modes([P1_MODE], M0, dim)
    rep = fo.check_evolution_commutators(phi, pi, h=h, hprime=hp)
    out.append(_le("i[H,phi] - Pi off corner", rep.t_residual, 1e-10))
    out.append(_le("i[H',phi] + Pi off corner", rep.z_residual, 1e-10))
    flipped = fo.check_evolution_commutators(phi, pi, h=hp)
    out.append(_gt("i[H',phi] - Pi is not small (opposite sign)", flipped.t_residual, 1.0))
    return out


def _evolution_checks(tag: str, hprime: np.ndarray, op_diag: np.ndarray, herm_op: np.ndarray, seed: int, z: float = 1.0):
    ctx = ze.EvolutionContext(hprime)
    n = ctx.dim
    out = []
    moved = np.asarray(ze.heisenberg_transport(op_diag, z, ctx))
    ev = np.linalg.eigvals(moved)
    out.append(_le(f"{tag}: transported phi spectrum real", np.max(np.abs(ev.imag)), 1e-8))
    out.append(_le(f"{tag}: transported phi spectrum drift", np.max(np.abs(np.sort(ev.real) - np.sort(np.diag(op_diag).real))), 1e-8))
    rng = np.random.Generator(np.random.Philox(seed))
    worst = 0.0
    for _ in range(50):
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        v /= np.linalg.norm(v)
        pair = ze.evolve_pair(ze.StatePair.at_origin(v), z, ctx)
        heis = np.vdot(v, np.asarray(ze.heisenberg_transport(herm_op, z, ctx)) @ v)
        worst = max(worst, abs(ze.expectation(pair, herm_op) - heis))
    out.append(_le(f"{tag}: Schrodinger vs Heisenberg expectation (50 states)", worst, 1e-10))
    v = np.zeros(n, dtype=complex)
    v[0] = 1
    p0 = ze.StatePair.at_origin(v)
    two = ze.evolve_pair(ze.evolve_pair(p0, 0.4, ctx), 0.6, ctx)
    one = ze.evolve_pair(p0, 1.0, ctx)
    out.append(_le(f"{tag}: group law", max(np.max(np.abs(two.right - one.right)), np.max(np.abs(two.left - one.left))), 1e-10))
    rep = ze.left_right_eigen_check(op_diag, z, ctx)
    out.append(_le(f"{tag}: right eigenvector residual", rep.right_residual, 1e-9))
    out.append(_le(f"{tag}: left eigenvector residual", rep.left_residual, 1e-9))
    if ctx.hermitian:
        out.append(_le(f"{tag}: overlap defect vanishes", rep.overlap_defect, 1e-10))
        out.append(_le(f"{tag}: norm of right vector conserved", abs(np.linalg.norm(one.right) - 1), 1e-12))
        out.append(_le(f"{tag}: left = right", np.max(np.abs(one.left - one.right)), 1e-10))
    else:
        out.append(_gt(f"{tag}: overlap defect nonzero", rep.overlap_defect, 1e-3))
    return out


def evolution_suite(seed: int = 0) -> list[Check]:
    out = []
    modes = [P1_MODE, MomentumTriple(0.0, 0.0, 3.0)]
    herm = np.asarray(fo.build_Hprime_modes(modes, M0, 4))
    n = herm.shape[0]
    op = np.diag(np.linspace(-1.5, 1.5, n))
    rng = np.random.Generator(np.random.Philox(seed + 1))
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    out += _evolution_checks("hermitian all-P1 H'", herm, op, g + g.conj().T, seed)
    for label, spectrum in [("2x2", ze.FIXTURE_2X2), ("4x4", ze.FIXTURE_4X4), ("32x32", ze.random_spectrum(32, seed))]:
        h = ze.similarity_fixture(spectrum, seed=seed)
        k = h.shape[0]
        g = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
        out += _evolution_checks(f"non-hermitian {label}", h, np.diag(np.arange(k) - (k - 1) / 2), g + g.conj().T, seed)
    return out


def oracle_suite(lattice=(3, 2, 2, 3), delta: float = 0.1, seed: int = 42, count: int = 20) -> list[Check]:
    spec = LatticeSpec4D(*lattice, delta=delta)
    rows = compare_slicings(spec, seed, count)
    return [_le(f"config {r.index}: direct / T-sliced / Z-sliced agreement", r.max_deviation, 1e-8) for r in rows]


SUITES = {
    "algebra": algebra_suite,
    "fieldops": fieldops_suite,
    "evolution": evolution_suite,
    "oracle": oracle_suite,
}
