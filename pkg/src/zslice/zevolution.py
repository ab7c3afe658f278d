"""Evolution along z under a non-hermitian generator ``H'``.

Operators move in the Heisenberg picture by the similarity transform
``exp(iH'z) O exp(-iH'z)``, which keeps their spectrum but not their
hermiticity. In the Schrodinger picture a state is a pair of vectors that
agree at ``z = 0``; the right vector evolves with ``exp(-iH'z)`` and the left
one with ``exp(-iH'^dag z)``. The bilinear ``<left|O|right>`` then matches the
Heisenberg matrix element for every ``z``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg

from .operators import OperatorMatrix, hermiticity_defect, off_corner_residual

CONDITION_LIMIT = 1e12


class ConditioningError(np.linalg.LinAlgError):
    """Eigenvector matrix of ``H'`` too ill-conditioned to trust its exponential."""


@dataclass(frozen=True)
class StatePair:
    left: np.ndarray
    right: np.ndarray
    z: float = 0.0

    @classmethod
    def at_origin(cls, vec) -> StatePair:
        v = np.array(vec, dtype=complex)
        return cls(v.copy(), v.copy(), 0.0)

    def __post_init__(self):
        left = np.array(self.left, dtype=complex)
        right = np.array(self.right, dtype=complex)
        if left.shape != right.shape or left.ndim != 1:
            raise ValueError(f"left/right shapes differ: {left.shape} vs {right.shape}")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)


@dataclass(frozen=True)
class EvolutionContext:
    """``H'`` with a cached eigendecomposition ``H' = R diag(w) R^-1``."""

    hprime: np.ndarray
    eigenvalues: np.ndarray = field(init=False, repr=False)
    right_vectors: np.ndarray = field(init=False, repr=False)
    left_vectors: np.ndarray = field(init=False, repr=False)
    condition: float = field(init=False)
    hermitian: bool = field(init=False)

    def __post_init__(self):
        h = np.array(self.hprime, dtype=complex)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise ValueError(f"H' must be square, got {h.shape}")
        herm = hermiticity_defect(h) == 0.0
        if herm:
            w, r = np.linalg.eigh(h)
            w = w.astype(complex)
            rinv = r.conj().T
            cond = 1.0
        else:
            w, r = scipy.linalg.eig(h)
            cond = float(np.linalg.cond(r))
            if not np.isfinite(cond) or cond > CONDITION_LIMIT:
                raise ConditioningError(f"eigenvector condition number {cond:.3g} exceeds {CONDITION_LIMIT:.0e}")
            rinv = np.linalg.inv(r)
        for name, val in [("hprime", h), ("eigenvalues", w), ("right_vectors", r), ("left_vectors", rinv)]:
            val.setflags(write=False)
            object.__setattr__(self, name, val)
        object.__setattr__(self, "condition", cond)
        object.__setattr__(self, "hermitian", herm)

    @property
    def dim(self) -> int:
        return self.hprime.shape[0]

    def propagator(self, z: float) -> np.ndarray:
        """``exp(-i H' z)``."""
        return (self.right_vectors * np.exp(-1j * self.eigenvalues * z)) @ self.left_vectors

    def adjoint_propagator(self, z: float) -> np.ndarray:
        """``exp(-i H'^dag z)``, the conjugate transpose of ``exp(i H' z)``."""
        return self.propagator(-z).conj().T


def _check_dim(ctx: EvolutionContext, n: int):
    if n != ctx.dim:
        raise ValueError(f"dimension mismatch: {n} vs H' of size {ctx.dim}")


def evolve_pair(p: StatePair, dz: float, ctx: EvolutionContext) -> StatePair:
    _check_dim(ctx, p.right.shape[0])
    right = ctx.propagator(dz) @ p.right
    left = ctx.adjoint_propagator(dz) @ p.left
    return replace(p, left=left, right=right, z=p.z + dz)


def heisenberg_transport(op, z: float, ctx: EvolutionContext) -> OperatorMatrix:
    a = np.asarray(op)
    _check_dim(ctx, a.shape[0])
    out = ctx.propagator(-z) @ a @ ctx.propagator(z)
    label = getattr(op, "label", "O")
    return OperatorMatrix(out, f"{label}(z={z:g})", getattr(op, "levels", ()))


def expectation(p: StatePair, op) -> complex:
    """Raw bilinear ``<left|op|right>``; no normalization is applied."""
    a = np.asarray(op)
    if a.shape != (p.right.shape[0],) * 2:
        raise ValueError(f"dimension mismatch: op {a.shape} vs state {p.right.shape}")
    return complex(np.vdot(p.left, a @ p.right))


@dataclass(frozen=True)
class EigenPairReport:
    right_residual: float
    left_residual: float
    overlap_defect: float


def left_right_eigen_check(op, z: float, ctx: EvolutionContext) -> EigenPairReport:
    """Check that ``exp(iH'z)|phi>`` and ``<phi|exp(-iH'z)`` are right/left eigenvectors of ``phi(z)``.

    ``op`` must be diagonal at ``z = 0`` so its eigenbasis is the standard basis.
    Residuals are max over eigenvectors of vector 2-norms; the overlap defect is
    ``max ||right - left^dag||`` and vanishes exactly when ``H'`` is hermitian.
    """
    a = np.asarray(op)
    if np.any(a - np.diag(np.diag(a))):
        raise ValueError("operator must be diagonal at z = 0")
    vals = np.diag(a)
    transported = np.asarray(heisenberg_transport(a, z, ctx))
    rights = ctx.propagator(-z)  # columns: exp(iH'z) e_j
    lefts = ctx.propagator(z)  # rows: e_j^T exp(-iH'z)
    r_res = np.linalg.norm(transported @ rights - rights * vals, axis=0)
    l_res = np.linalg.norm(lefts @ transported - vals[:, None] * lefts, axis=1)
    defect = np.linalg.norm(rights - lefts.conj().T, axis=0)
    return EigenPairReport(float(r_res.max()), float(l_res.max()), float(defect.max()))


def normality_check(hprime, levels=None, depth: int | None = None) -> float:
    """Max-abs entry of ``H'H'^dag - H'^dag H'``, optionally restricted off the truncation corner."""
    h = np.asarray(hprime)
    c = h @ h.conj().T - h.conj().T @ h
    if depth is None:
        return float(np.max(np.abs(c))) if c.size else 0.0
    levels = levels or getattr(hprime, "levels", None) or (h.shape[0],)
    return off_corner_residual(c, levels, depth)


def similarity_fixture(eigenvalues, seed: int = 0, mixing: float = 0.5) -> np.ndarray:
    """Non-hermitian test generator ``S diag(eigenvalues) S^-1`` with a seeded, well-conditioned ``S``."""
    w = np.asarray(eigenvalues, dtype=complex)
    n = w.shape[0]
    rng = np.random.Generator(np.random.Philox(seed))
    g = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2 * n)
    s = np.eye(n) + mixing * g
    return s @ np.diag(w) @ np.linalg.inv(s)


FIXTURE_2X2 = (1 + 1j, 2 - 1j)
FIXTURE_4X4 = (0.5 + 0.3j, 1.0 - 0.4j, 1.5 + 0.1j, 2.0 - 0.2j)


def random_spectrum(n: int, seed: int, imag_scale: float = 0.5) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(seed))
    return np.sort(rng.uniform(0.0, 3.0, n)) + 1j * rng.uniform(-imag_scale, imag_scale, n)
