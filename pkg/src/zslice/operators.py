"""Dense operator carrier and truncation-corner helpers shared by the matrix modules."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

import numpy as np


@dataclass(frozen=True)
class OperatorMatrix:
    """A square complex matrix with a human-readable label.

    The entries are copied and frozen on construction, so an instance can be
    shared freely. ``np.asarray(op)`` gives the underlying array.
    """

    entries: np.ndarray
    label: str = ""
    levels: tuple[int, ...] = field(default=())

    def __post_init__(self):
        a = np.array(self.entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"operator {self.label!r} must be square, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError(f"operator {self.label!r} has non-finite entries")
        levels = tuple(int(n) for n in self.levels) or (a.shape[0],)
        if int(np.prod(levels)) != a.shape[0]:
            raise ValueError(f"levels {levels} do not multiply to dimension {a.shape[0]}")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)
        object.__setattr__(self, "levels", levels)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def H(self) -> OperatorMatrix:
        return OperatorMatrix(self.entries.conj().T, f"{self.label}^dag", self.levels)

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.entries.copy() if copy else self.entries
        return self.entries.astype(dtype)

    def is_hermitian(self, atol: float = 0.0) -> bool:
        return hermiticity_defect(self) <= atol


def hermiticity_defect(op) -> float:
    a = np.asarray(op)
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


def commutator(a, b) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    return a @ b - b @ a


def kron_all(mats) -> np.ndarray:
    return reduce(np.kron, mats)


def embed(op, position: int, levels) -> np.ndarray:
    """Place a single-oscillator matrix at ``position`` of a tensor product."""
    factors = [np.eye(n, dtype=complex) for n in levels]
    factors[position] = np.asarray(op, dtype=complex)
    return kron_all(factors)


def off_corner_mask(levels, depth: int = 2) -> np.ndarray:
    """Boolean mask of basis states whose every occupation avoids the top ``depth`` levels.

    Basis ordering follows ``np.kron``: the first oscillator is the slowest index.
    """
    grids = np.meshgrid(*[np.arange(n) for n in levels], indexing="ij")
    keep = np.ones(grids[0].shape, dtype=bool)
    for n, occ in zip(levels, grids):
        keep &= occ < n - depth
    return keep.ravel()


def off_corner_residual(mat, levels, depth: int = 2) -> float:
    """Max-abs entry of ``mat`` restricted to the off-corner block ``P mat P``."""
    a = np.asarray(mat)
    keep = off_corner_mask(levels, depth)
    if not keep.any():
        return 0.0
    return float(np.max(np.abs(a[np.ix_(keep, keep)])))
