"""Finite-dimensional states of the measured system and of system + apparatus.

Outcome indices are 1-based throughout, matching the outcome labels a_1..a_N.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicateLabel,
    EmptySampleSpace,
    IndexOutOfRange,
    NormViolation,
)

EPS_NORM = 1e-9
SCHMIDT_TOL = 1e-9


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def default_labels(n: int) -> tuple[str, ...]:
    return tuple(f"a{i}" for i in range(1, n + 1))


@dataclass(frozen=True)
class SampleSpace:
    """Ordered set of outcome labels."""

    outcomes: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        if not self.outcomes:
            raise EmptySampleSpace("sample space must contain at least one outcome")
        if len(set(self.outcomes)) != len(self.outcomes):
            raise DuplicateLabel(f"duplicate outcome labels in {self.outcomes}")

    @classmethod
    def of_size(cls, n: int) -> "SampleSpace":
        return cls(default_labels(n))

    def __len__(self) -> int:
        return len(self.outcomes)

    def __iter__(self):
        return iter(self.outcomes)


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized amplitudes over a labeled orthonormal basis.

    Construction validates; use :func:`new_state` for the list-based entry point.
    """

    amplitudes: np.ndarray
    labels: tuple[str, ...]

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        labels = tuple(self.labels)
        if amps.ndim != 1 or amps.size == 0:
            raise DimensionMismatch("amplitudes must be a non-empty 1-d sequence")
        if len(labels) != amps.size:
            raise DimensionMismatch(
                f"{amps.size} amplitudes but {len(labels)} basis labels"
            )
        if len(set(labels)) != len(labels):
            raise DuplicateLabel(f"duplicate basis labels in {labels}")
        norm2 = float(np.sum(np.abs(amps) ** 2))
        if abs(norm2 - 1.0) > EPS_NORM:
            raise NormViolation(f"sum of |c_n|^2 is {norm2!r}, expected 1")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def space(self) -> SampleSpace:
        return SampleSpace(self.labels)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def distance(self, other: "StateVector") -> float:
        return float(np.linalg.norm(self.amplitudes - other.amplitudes))

    def __repr__(self) -> str:
        terms = ", ".join(f"{l}: {c:.6g}" for l, c in zip(self.labels, self.amplitudes))
        return f"StateVector({terms})"


@dataclass(frozen=True, eq=False)
class CompositeState:
    """Amplitude matrix of S+M: rows index |a_n>, column k indexes |M_k>.

    Column 0 is the apparatus ready state |M_0>.
    """

    amplitudes: np.ndarray
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.ndim != 2 or amps.shape[1] != amps.shape[0] + 1:
            raise DimensionMismatch(f"expected an N x (N+1) matrix, got {amps.shape}")
        norm2 = float(np.sum(np.abs(amps) ** 2))
        if abs(norm2 - 1.0) > EPS_NORM:
            raise NormViolation(f"composite norm^2 is {norm2!r}, expected 1")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "labels", tuple(self.labels))


def new_state(amplitudes: Sequence[complex], labels: Sequence[str] | None = None) -> StateVector:
    if labels is None:
        labels = default_labels(len(amplitudes))
    return StateVector(np.asarray(amplitudes, dtype=complex), tuple(labels))


def _check_index(n: int, dim: int) -> int:
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= dim:
        raise IndexOutOfRange(f"outcome index {n!r} not in 1..{dim}")
    return int(n) - 1


def born_probability(s: StateVector, n: int) -> float:
    """|c_n|^2 for the 1-based outcome index n."""
    return float(abs(s.amplitudes[_check_index(n, s.dim)]) ** 2)


def swap_operator(phi1: float, phi2: float) -> np.ndarray:
    """Matrix of e^{i phi1}|a1><a2|e^{-i phi2} + e^{i phi2}|a2><a1|e^{-i phi1}."""
    return np.array(
        [[0.0, np.exp(1j * (phi1 - phi2))], [np.exp(1j * (phi2 - phi1)), 0.0]],
        dtype=complex,
    )


def apply_swap(s: StateVector, phi1: float = 0.0, phi2: float = 0.0) -> StateVector:
    if s.dim != 2:
        raise DimensionMismatch(f"swap is defined for two outcomes, state has {s.dim}")
    return StateVector(swap_operator(phi1, phi2) @ s.amplitudes, s.labels)


def pointer_map(amplitudes: np.ndarray) -> np.ndarray:
    """Linear map sum c_n |a_n>|M_0>  ->  sum c_n |a_n>|M_n>, on raw amplitudes."""
    c = np.asarray(amplitudes, dtype=complex)
    n = c.size
    out = np.zeros((n, n + 1), dtype=complex)
    out[np.arange(n), np.arange(1, n + 1)] = c
    return out


def ready_product(s: StateVector) -> np.ndarray:
    """The pre-interaction product state (sum c_n |a_n>) |M_0> as a matrix."""
    out = np.zeros((s.dim, s.dim + 1), dtype=complex)
    out[:, 0] = s.amplitudes
    return out


def premeasurement_evolve(s: StateVector) -> CompositeState:
    return CompositeState(pointer_map(s.amplitudes), s.labels)


def schmidt_coefficients(c: CompositeState | np.ndarray) -> np.ndarray:
    m = c.amplitudes if isinstance(c, CompositeState) else np.asarray(c)
    return np.linalg.svd(m, compute_uv=False)


def schmidt_rank(c: CompositeState | np.ndarray, tol: float = SCHMIDT_TOL) -> int:
    if tol <= 0:
        raise ValueError("tol must be positive")
    return int(np.count_nonzero(schmidt_coefficients(c) > tol))


def random_state(dim: int, rng: np.random.Generator, labels: Sequence[str] | None = None) -> StateVector:
    """Haar-distributed pure state drawn from ``rng``."""
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return new_state(v / np.linalg.norm(v), labels)
