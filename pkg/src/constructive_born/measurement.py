"""Definite-outcome propositions, the seeded replica sampler, and experiment stats.

Sampling goes through the replica pool: outcome ``a_n`` with weight ``w_n``
contributes ``w_n`` equally likely replica events, one replica is drawn
uniformly, and the record reports its parent outcome.

Every draw is a pure function of its 64-bit seed. The generator is SplitMix64
(Steele, Lea & Flood 2014): the seed is the initial state, and the k-th output
is ``mix(seed + k * 0x9E3779B97F4A7C15)``. Its period is 2**64.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np
from scipy import stats

from .errors import EmptySampleSpace, SpaceMismatch, WeightMismatch
from .kripke import KripkeModel
from .logic import Atom, Not, Proposition, conj, disj, evaluate, xor_chain
from .quantum import EPS_NORM, SampleSpace, StateVector
from .weights import DEFAULT_MAX_DENOMINATOR, WeightVector, to_weights

PRNG_ID = "splitmix64-v1 (state=seed; ints by top-block rejection; floats from top 53 bits)"

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def splitmix64(seed: int) -> Iterator[int]:
    """Infinite stream of 64-bit outputs for ``seed``."""
    state = seed & MASK64
    while True:
        state = (state + GOLDEN) & MASK64
        yield _mix(state)


def uniform_index(seed: int, bound: int) -> int:
    """Unbiased integer in ``[0, bound)``: reject outputs in the top partial block."""
    limit = (1 << 64) - (1 << 64) % bound
    for x in splitmix64(seed):
        if x < limit:
            return x % bound
    raise AssertionError("unreachable")


def uniform_float(seed: int) -> float:
    """Double in [0, 1) from the top 53 bits of the first output."""
    return (next(splitmix64(seed)) >> 11) * 2.0**-53


def _mix_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def uniform_indices(seeds: np.ndarray, bound: int) -> np.ndarray:
    """Vectorized :func:`uniform_index` over an array of seeds; identical results."""
    seeds = np.asarray(seeds).astype(np.uint64)
    limit = (1 << 64) - (1 << 64) % bound
    out = np.empty(seeds.shape, dtype=np.uint64)
    pending = np.arange(seeds.size)
    k = 1
    with np.errstate(over="ignore"):
        while pending.size:
            state = seeds[pending] + np.uint64(k * GOLDEN & MASK64)
            x = _mix_array(state)
            ok = x < np.uint64(limit) if limit < (1 << 64) else np.ones(x.shape, bool)
            out[pending[ok]] = x[ok] % np.uint64(bound)
            pending = pending[~ok]
            k += 1
    return out


def uniform_floats(seeds: np.ndarray) -> np.ndarray:
    seeds = np.asarray(seeds).astype(np.uint64)
    with np.errstate(over="ignore"):
        x = _mix_array(seeds + np.uint64(GOLDEN))
    return (x >> np.uint64(11)).astype(np.float64) * 2.0**-53


def seed_range(base_seed: int, trials: int) -> np.ndarray:
    return (np.arange(trials, dtype=np.uint64) + np.uint64(base_seed & MASK64))


# -- propositions -------------------------------------------------------------


def _space(space: SampleSpace | int | Sequence[str]) -> SampleSpace:
    if isinstance(space, SampleSpace):
        return space
    if isinstance(space, int):
        if space < 1:
            raise EmptySampleSpace("sample space must contain at least one outcome")
        return SampleSpace.of_size(space)
    return SampleSpace(tuple(space))


def at_least_three(labels: Sequence[str]) -> Proposition:
    """Disjunction over triples i > j > k of ``a_i & a_j & a_k``."""
    triples = itertools.combinations(reversed(range(len(labels))), 3)
    return disj(*(conj(Atom(labels[i]), Atom(labels[j]), Atom(labels[k])) for i, j, k in triples))


def exactly_one(space: SampleSpace | int | Sequence[str]) -> Proposition:
    """Proposition true exactly when one outcome atom is true.

    For two outcomes this is ``(a1 | a2) & (~a1 | ~a2)``. For more, the odd-parity
    chain ``a1 ^ ... ^ aN`` is conjoined with the negation of "some three atoms
    are true".
    """
    labels = _space(space).outcomes
    atoms_ = [Atom(l) for l in labels]
    if len(labels) == 1:
        return atoms_[0]
    if len(labels) == 2:
        a1, a2 = atoms_
        return conj(disj(a1, a2), disj(Not(a1), Not(a2)))
    return conj(xor_chain(*atoms_), Not(at_least_three(labels)))


# -- sampling -----------------------------------------------------------------


@dataclass(frozen=True)
class MeasurementRecord:
    outcome_index: int
    label: str
    replica: int
    valuation: dict[str, bool]
    seed: int
    timestamp: float | None = None

    def values(self) -> list[int]:
        return [int(v) for v in self.valuation.values()]


def support(s: StateVector, tol: float = EPS_NORM) -> list[int]:
    """1-based indices of outcomes with non-negligible probability."""
    return [i + 1 for i, p in enumerate(s.probabilities()) if p > tol]


def state_weights(s: StateVector, max_denominator: int = DEFAULT_MAX_DENOMINATOR) -> WeightVector:
    """Weights over the possible outcomes of ``s`` (impossible ones are dropped)."""
    probs = s.probabilities()[[i - 1 for i in support(s)]]
    return to_weights(probs / probs.sum(), max_denominator)


def _outcome_map(s: StateVector, w: WeightVector) -> list[int]:
    idx = support(s) if len(w) != s.dim else list(range(1, s.dim + 1))
    if len(w) != len(idx):
        raise WeightMismatch(
            f"{len(w)} weights for a state with {s.dim} outcomes ({len(idx)} possible)"
        )
    return idx


def _record(s: StateVector, n: int, replica: int, seed: int) -> MeasurementRecord:
    valuation = {label: i == n for i, label in enumerate(s.labels, start=1)}
    return MeasurementRecord(n, s.labels[n - 1], replica, valuation, seed)


def sample(s: StateVector, w: WeightVector, seed: int) -> MeasurementRecord:
    """Draw one outcome by picking a replica uniformly from the pool.

    ``w`` covers either every outcome of ``s`` or only its possible ones.
    """
    outcomes = _outcome_map(s, w)
    j = uniform_index(seed, w.total)
    cumulative = np.cumsum(w.weights)
    k = int(np.searchsorted(cumulative, j, side="right"))
    replica = j - (int(cumulative[k - 1]) if k else 0) + 1
    return _record(s, outcomes[k], replica, seed)


def sample_direct(s: StateVector, seed: int) -> MeasurementRecord:
    """Inverse-CDF draw over |c_n|^2, bypassing weights. Used as a cross-check."""
    u = uniform_float(seed)
    return _record(s, int(_inverse_cdf(s.probabilities(), np.array([u]))[0]), 0, seed)


def _inverse_cdf(probs: np.ndarray, u: np.ndarray) -> np.ndarray:
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    k = np.searchsorted(cdf, u, side="right")
    return np.minimum(k, len(probs) - 1) + 1


def sample_outcomes(s: StateVector, w: WeightVector, seeds: np.ndarray) -> np.ndarray:
    """1-based outcomes of :func:`sample` for every seed, computed in bulk."""
    outcomes = np.asarray(_outcome_map(s, w))
    j = uniform_indices(seeds, w.total).astype(np.int64)
    k = np.searchsorted(np.cumsum(w.weights), j, side="right")
    return outcomes[k]


def sample_direct_outcomes(s: StateVector, seeds: np.ndarray) -> np.ndarray:
    return _inverse_cdf(s.probabilities(), uniform_floats(seeds))


# -- experiments --------------------------------------------------------------


@dataclass(frozen=True)
class ExperimentStats:
    labels: tuple[str, ...]
    amplitudes: tuple[complex, ...]
    weights: tuple[int, ...]
    counts: tuple[int, ...]
    expected: tuple[float, ...]
    trials: int
    seed: int
    max_denominator: int
    chi_square: float
    p_value: float
    prng_id: str = field(default=PRNG_ID)

    @property
    def frequencies(self) -> tuple[float, ...]:
        return tuple(c / self.trials for c in self.counts)

    def to_json(self) -> dict:
        return {
            "state": {
                "labels": list(self.labels),
                "amplitudes": [[c.real, c.imag] for c in self.amplitudes],
            },
            "weights": list(self.weights),
            "trials": self.trials,
            "seed": self.seed,
            "max_denominator": self.max_denominator,
            "counts": list(self.counts),
            "frequencies": list(self.frequencies),
            "expected": list(self.expected),
            "chi_square": self.chi_square,
            "p_value": self.p_value,
            "prng_id": self.prng_id,
        }


def chi_square_gof(counts: Sequence[int], expected_probs: Sequence[float]) -> tuple[float, float]:
    """Pearson goodness of fit over cells with positive expectation."""
    counts = np.asarray(counts, dtype=float)
    probs = np.asarray(expected_probs, dtype=float)
    live = probs > 0
    if counts[~live].sum() > 0:
        return float("inf"), 0.0
    if live.sum() <= 1:
        return 0.0, 1.0
    res = stats.chisquare(counts[live], counts.sum() * probs[live])
    return float(res.statistic), float(res.pvalue)


def two_sample_chi_square(a: Sequence[int], b: Sequence[int]) -> tuple[float, float]:
    """Homogeneity test between two count vectors over the same outcomes."""
    table = np.array([a, b], dtype=float)
    table = table[:, table.sum(axis=0) > 0]
    if table.shape[1] <= 1:
        return 0.0, 1.0
    res = stats.chi2_contingency(table, correction=False)
    return float(res.statistic), float(res.pvalue)


def run_experiment(
    s: StateVector,
    trials: int,
    base_seed: int = 0,
    max_denominator: int = DEFAULT_MAX_DENOMINATOR,
) -> ExperimentStats:
    """Sample with seeds ``base_seed .. base_seed + trials - 1`` and tally outcomes."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    w = state_weights(s, max_denominator)
    outcomes = sample_outcomes(s, w, seed_range(base_seed, trials))
    counts = np.bincount(outcomes, minlength=s.dim + 1)[1:]
    full_weights = [0] * s.dim
    for n, wn in zip(support(s), w.weights):
        full_weights[n - 1] = wn
    expected = [wn / w.total for wn in full_weights]
    chi2, p = chi_square_gof(counts, expected)
    return ExperimentStats(
        labels=s.labels,
        amplitudes=tuple(complex(c) for c in s.amplitudes),
        weights=tuple(full_weights),
        counts=tuple(int(c) for c in counts),
        expected=tuple(expected),
        trials=trials,
        seed=base_seed,
        max_denominator=max_denominator,
        chi_square=chi2,
        p_value=p,
    )


# -- linking records to frames --------------------------------------------------


def record_satisfies_exactly_one(r: MeasurementRecord) -> bool:
    return evaluate(exactly_one(list(r.valuation)), r.valuation)


def apply_record_to_frame(m: KripkeModel, r: MeasurementRecord) -> str:
    """The leaf of a measurement frame at which the record's outcome is forced alone."""
    labels = set(r.valuation)
    leaves = m.leaves
    leaf_atoms = {w: m.forcing[w] for w in leaves}
    if len(leaves) != len(labels) or set().union(*leaf_atoms.values()) != labels:
        raise SpaceMismatch(
            f"record over {sorted(labels)} does not match a frame with leaves "
            f"forcing {sorted(set().union(*leaf_atoms.values()))}"
        )
    for w in leaves:
        if leaf_atoms[w] == {r.label}:
            return w
    raise SpaceMismatch(f"no leaf forces exactly {r.label!r}")
