"""Additivity and exclusivity constraints on outcome-value assignments."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, NonBooleanValue, NonOrthonormalBasis
from .quantum import StateVector

ORTHO_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class FrameAssignment:
    basis: tuple[np.ndarray, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        if any(v < 0 for v in self.values):
            raise ValueError(f"assignment values must be non-negative, got {self.values}")


def as_basis(basis: Sequence[Sequence[complex]] | np.ndarray) -> np.ndarray:
    """Basis vectors as the rows of a complex matrix."""
    b = np.array([np.asarray(v, dtype=complex) for v in basis])
    if b.ndim != 2:
        raise DimensionMismatch("basis vectors must all have the same length")
    return b


def check_orthonormal(basis, tol: float = ORTHO_TOL) -> np.ndarray:
    b = as_basis(basis)
    gram = b.conj() @ b.T
    dev = np.abs(gram - np.eye(len(b))).max()
    if dev > tol:
        raise NonOrthonormalBasis(f"basis deviates from orthonormal by {dev:.3g}")
    return b


def born_assignment(psi: StateVector, basis=None) -> FrameAssignment:
    """m_n = |<b_n|psi>|^2 for each basis vector; the outcome basis by default."""
    b = np.eye(psi.dim, dtype=complex) if basis is None else check_orthonormal(basis)
    if b.shape[1] != psi.dim:
        raise DimensionMismatch(f"basis vectors have length {b.shape[1]}, state has {psi.dim}")
    values = np.abs(b.conj() @ psi.amplitudes) ** 2
    return FrameAssignment(tuple(b), tuple(float(v) for v in values))


def _values(fa) -> np.ndarray:
    return np.asarray(fa.values if isinstance(fa, FrameAssignment) else fa, dtype=float)


def check_additivity(fa: FrameAssignment | Sequence[float], tol: float = 1e-9) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    return bool(abs(_values(fa).sum() - 1.0) <= tol)


def check_exclusivity(values: FrameAssignment | Sequence[float], tol: float = 1e-9) -> bool:
    """True iff no two of the {0,1} values are both 1 (every pairwise product is 0)."""
    v = _values(values)
    is_one = np.abs(v - 1.0) <= tol
    if not np.all(is_one | (np.abs(v) <= tol)):
        raise NonBooleanValue(f"values must be 0 or 1, got {v.tolist()}")
    return bool(is_one.sum() <= 1)


def check_record_values(values: Sequence[float], tol: float = 1e-9) -> bool:
    """A post-measurement valuation must be both additive and exclusive."""
    return check_exclusivity(values, tol) and check_additivity(values, tol)


def random_basis(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Orthonormal basis (rows) from QR of a complex Gaussian matrix."""
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return q.T
