"""Ladder algebra of the z-sliced mode operators ``a'`` and ``abar'``.

Two levels are provided. The symbolic level works with exact structure
constants: hermitian conjugation (which differs between the ``P1`` and ``P2``
regions), the c-number commutator ``[a'(k), abar'(k)] = |lambda| / lambda`` and
the per-mode coefficient ``-lambda^2 / |lambda|`` of ``abar' a'`` in ``H'``.
The matrix level builds truncated realizations on Fock spaces; those satisfy
the algebra exactly except on the top Fock levels ("truncation corner").
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

import numpy as np

from .dispersion import MassParam, MomentumTriple, Region, classify_region, lambda_of
from .operators import OperatorMatrix, embed


class DegenerateModeError(ValueError):
    """The mode sits on the ``lambda = 0`` hyperboloid."""


class WrongRegionError(ValueError):
    pass


class Kind(str, Enum):
    A = "A"
    ABAR = "ABar"


@dataclass(frozen=True)
class ModeOpSymbol:
    kind: Kind
    mode: MomentumTriple

    def __repr__(self):
        return f"{self.kind.value}{self.mode.as_tuple()}"


def A(mode) -> ModeOpSymbol:
    return ModeOpSymbol(Kind.A, _as_mode(mode))


def ABar(mode) -> ModeOpSymbol:
    return ModeOpSymbol(Kind.ABAR, _as_mode(mode))


def _as_mode(mode) -> MomentumTriple:
    return mode if isinstance(mode, MomentumTriple) else MomentumTriple(*mode)


def _sort_key(sym: ModeOpSymbol):
    return (sym.kind.value, sym.mode.as_tuple())


def _region(mode: MomentumTriple, m: MassParam) -> Region:
    # the boundary belongs to P1 (the inclusive inequality)
    r = classify_region(mode, m)
    return Region.P1 if r is Region.BOUNDARY else r


def conjugate_symbol(op: ModeOpSymbol, m: MassParam) -> ModeOpSymbol:
    """Hermitian conjugate of a single ladder symbol."""
    if _region(op.mode, m) is Region.P1:
        return ModeOpSymbol(Kind.ABAR if op.kind is Kind.A else Kind.A, op.mode)
    return ModeOpSymbol(op.kind, -op.mode)


def commutator_coeff(op1: ModeOpSymbol, op2: ModeOpSymbol, m: MassParam) -> complex:
    """Coefficient of the (Kronecker) delta in ``[op1, op2]``."""
    if op1.mode != op2.mode or op1.kind is op2.kind:
        return 0j
    lam = lambda_of(op1.mode, m).lam
    if lam == 0:
        raise DegenerateModeError(f"lambda vanishes at {op1.mode}")
    c = abs(lam) / lam
    return c if op1.kind is Kind.A else -c


def hprime_coeff(kp: MomentumTriple, m: MassParam) -> complex:
    """Coefficient ``-lambda^2/|lambda|`` of ``abar' a'`` for one mode of ``H'``."""
    lam = lambda_of(kp, m).lam
    if lam == 0:
        raise DegenerateModeError(f"lambda vanishes at {kp}")
    return -(lam * lam) / abs(lam)


class AlgebraElement:
    """Finite linear combination of products (length <= 2) of ladder symbols.

    The empty product is the identity. Keys are tuples of symbols in the
    order they act; no reordering is applied, so ``A B`` and ``B A`` are
    different keys.
    """

    def __init__(self, terms: Mapping[tuple, complex] | None = None):
        acc = defaultdict(complex)
        for key, c in (terms or {}).items():
            key = tuple(key)
            if len(key) > 2:
                raise ValueError("products longer than two symbols are not supported")
            if not np.isfinite(c):
                raise ValueError(f"non-finite coefficient for {key}")
            acc[key] += complex(c)
        self.terms = {k: v for k, v in sorted(acc.items(), key=lambda kv: [_sort_key(s) for s in kv[0]]) if v != 0}

    @classmethod
    def of(cls, *symbols: ModeOpSymbol, coeff: complex = 1.0) -> AlgebraElement:
        return cls({tuple(symbols): coeff})

    @classmethod
    def scalar(cls, c: complex) -> AlgebraElement:
        return cls({(): c})

    def __add__(self, other):
        merged = dict(self.terms)
        for k, v in other.terms.items():
            merged[k] = merged.get(k, 0j) + v
        return AlgebraElement(merged)

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, c):
        return AlgebraElement({k: c * v for k, v in self.terms.items()})

    __mul__ = __rmul__

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({v:.6g})*{'·'.join(map(repr, k)) or '1'}" for k, v in self.terms.items())

    def close_to(self, other, atol: float = 1e-12) -> bool:
        diff = self - other
        return all(abs(v) <= atol for v in diff.terms.values())

    def commutator_with(self, sym: ModeOpSymbol, m: MassParam) -> AlgebraElement:
        """``[self, sym]`` using c-number commutators and the Leibniz rule."""
        out = {}
        for key, c in self.terms.items():
            if len(key) == 0:
                continue
            if len(key) == 1:
                out[()] = out.get((), 0j) + c * commutator_coeff(key[0], sym, m)
            else:
                x, y = key
                # [XY, Z] = X [Y, Z] + [X, Z] Y
                cyz = commutator_coeff(y, sym, m)
                cxz = commutator_coeff(x, sym, m)
                if cyz:
                    out[(x,)] = out.get((x,), 0j) + c * cyz
                if cxz:
                    out[(y,)] = out.get((y,), 0j) + c * cxz
        return AlgebraElement(out)

    def conjugate(self, m: MassParam) -> AlgebraElement:
        """Hermitian conjugate: reverse each product, conjugate symbols and coefficients."""
        return AlgebraElement(
            {tuple(conjugate_symbol(s, m) for s in reversed(k)): np.conj(v) for k, v in self.terms.items()}
        )


def hprime_element(modes: Iterable[MomentumTriple], m: MassParam) -> AlgebraElement:
    """Symbolic ``H' - E'_0`` as a sum of ``coeff * abar' a'`` over ``modes``."""
    out = AlgebraElement()
    for kp in modes:
        out = out + AlgebraElement.of(ABar(kp), A(kp), coeff=hprime_coeff(kp, m))
    return out


def conjugation_consistency(op1: ModeOpSymbol, op2: ModeOpSymbol, m: MassParam) -> float:
    """Defect of ``[op1, op2]^dag = [op2^dag, op1^dag]`` at the structure-constant level."""
    lhs = np.conj(commutator_coeff(op1, op2, m))
    rhs = commutator_coeff(conjugate_symbol(op2, m), conjugate_symbol(op1, m), m)
    return abs(lhs - rhs)


def zero_point_constant(modes: Iterable[MomentumTriple], m: MassParam) -> complex:
    """Finite analog ``E'_0`` of the zero-point energy for the given modes."""
    total = 0j
    for kp in modes:
        total += hprime_coeff(kp, m) * commutator_coeff(A(kp), ABar(kp), m) / 2
    return total


# --- truncated matrix realizations -------------------------------------------


def lowering(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim)), 1).astype(complex)


@dataclass(frozen=True)
class TruncatedRealization:
    """Matrices for a set of ladder symbols on a product of truncated oscillators."""

    levels: tuple[int, ...]
    matrices: Mapping[ModeOpSymbol, np.ndarray]

    @property
    def dim(self) -> int:
        return int(np.prod(self.levels))

    def __getitem__(self, sym: ModeOpSymbol) -> np.ndarray:
        return self.matrices[sym]

    def __contains__(self, sym):
        return sym in self.matrices

    def modes(self):
        return sorted({s.mode for s in self.matrices}, key=MomentumTriple.as_tuple)


def _freeze(mats):
    for a in mats.values():
        a.setflags(write=False)
    return mats


def realize_p1_mode(dim: int, mode: MomentumTriple | None = None) -> TruncatedRealization:
    """One truncated oscillator: ``A`` lowers, ``ABar`` is its adjoint."""
    if dim < 2:
        raise ValueError(f"dim must be >= 2, got {dim}")
    mode = mode if mode is not None else MomentumTriple(0.0, 0.0, 0.0)
    a = lowering(dim)
    return TruncatedRealization((dim,), _freeze({A(mode): a, ABar(mode): a.conj().T.copy()}))


P2_ALPHA = 1.0
P2_GAMMA = -0.5j


def realize_p2_pair(kp: MomentumTriple, m: MassParam, dim: int) -> TruncatedRealization:
    """Two-oscillator realization of the ``P2`` pair ``k, -k``.

    With lowering operators ``b+`` and ``b-``::

        A(k)     = alpha b+ + conj(alpha) b-^dag
        A(-k)    = alpha b- + conj(alpha) b+^dag
        ABar(k)  = gamma b+^dag + conj(gamma) b-
        ABar(-k) = gamma b-^dag + conj(gamma) b+

    so that ``A(k)^dag = A(-k)``, ``ABar(k)^dag = ABar(-k)`` hold exactly and
    ``[A(k), ABar(k)] = 2i Im(alpha gamma) = -i`` off the truncation corner,
    which is ``|lambda|/lambda`` for ``lambda = +i|lambda|``.
    """
    if dim < 2:
        raise ValueError(f"dim must be >= 2, got {dim}")
    if classify_region(kp, m) is not Region.P2:
        raise WrongRegionError(f"{kp} is not in P2 for m={m.m}")
    if m.eps != 0:
        # [A, ABar] = 2i Im(alpha gamma) is purely imaginary; |lambda|/lambda is not once eps > 0
        raise ValueError("P2 matrix realizations require eps = 0")
    levels = (dim, dim)
    b = lowering(dim)
    bp, bm = embed(b, 0, levels), embed(b, 1, levels)
    al, ga = P2_ALPHA, P2_GAMMA
    mats = {
        A(kp): al * bp + np.conj(al) * bm.conj().T,
        A(-kp): al * bm + np.conj(al) * bp.conj().T,
        ABar(kp): ga * bp.conj().T + np.conj(ga) * bm,
        ABar(-kp): ga * bm.conj().T + np.conj(ga) * bp,
    }
    return TruncatedRealization(levels, _freeze(mats))


def combine(realizations: Iterable[TruncatedRealization]) -> TruncatedRealization:
    """Tensor product of independent realizations."""
    realizations = list(realizations)
    if not realizations:
        raise ValueError("nothing to combine")
    levels = tuple(n for r in realizations for n in r.levels)
    mats = {}
    before = 1
    total = int(np.prod(levels))
    for r in realizations:
        after = total // (before * r.dim)
        for sym, mat in r.matrices.items():
            if sym in mats:
                raise ValueError(f"symbol {sym!r} realized twice")
            mats[sym] = np.kron(np.kron(np.eye(before), mat), np.eye(after))
        before *= r.dim
    return TruncatedRealization(levels, _freeze(mats))


def build_hprime_modes(modes, m: MassParam, realizations) -> OperatorMatrix:
    """``H' = sum_k (-lambda^2/|lambda|) ABar(k) A(k) + E'_0`` on a truncated space.

    ``realizations`` may be one realization or an iterable of independent ones
    (combined by tensor product). Every mode must be realized.
    """
    modes = [_as_mode(k) for k in modes]
    if not modes:
        raise ValueError("empty mode list")
    if isinstance(realizations, TruncatedRealization):
        real = realizations
    else:
        real = combine(realizations)
    for kp in modes:
        if classify_region(kp, m) is Region.BOUNDARY:
            raise DegenerateModeError(f"boundary mode {kp} has lambda = 0")
        if A(kp) not in real or ABar(kp) not in real:
            raise KeyError(f"mode {kp} is not covered by the realization")
    h = np.zeros((real.dim, real.dim), dtype=complex)
    for kp in modes:
        h += hprime_coeff(kp, m) * (real[ABar(kp)] @ real[A(kp)])
    h += zero_point_constant(modes, m) * np.eye(real.dim)
    return OperatorMatrix(h, "H'", real.levels)
