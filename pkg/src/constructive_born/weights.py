"""Integer replication weights behind rational Born probabilities.

A weight vector ``(w_1, ..., w_N)`` stands for ``|c_n|^2 = w_n / sum(w)``: outcome
``a_n`` is split into ``w_n`` identical disjoint replica events, and every replica
in the pool is equally likely.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import IndexOutOfRange, InfeasibleDenominator, WeightError, ZeroProbability
from .logic import Atom, Proposition, disj
from .quantum import EPS_NORM

DEFAULT_MAX_DENOMINATOR = 4096


@dataclass(frozen=True)
class WeightVector:
    weights: tuple[int, ...]

    def __post_init__(self):
        ws = tuple(int(w) for w in self.weights)
        if not ws:
            raise WeightError("weight vector must be non-empty")
        if any(w < 1 for w in ws):
            raise WeightError(f"weights must be positive integers, got {ws}")
        if math.gcd(*ws) != 1:
            raise WeightError(f"weights {ws} are not in lowest terms")
        object.__setattr__(self, "weights", ws)

    @property
    def total(self) -> int:
        return sum(self.weights)

    def __len__(self) -> int:
        return len(self.weights)

    def probabilities(self) -> tuple[Fraction, ...]:
        t = self.total
        return tuple(Fraction(w, t) for w in self.weights)

    @classmethod
    def canonical(cls, weights: Sequence[int]) -> "WeightVector":
        g = math.gcd(*weights)
        return cls(tuple(w // g for w in weights))


def weight_probability(w: WeightVector, n: int) -> Fraction:
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= len(w):
        raise IndexOutOfRange(f"outcome index {n!r} not in 1..{len(w)}")
    return Fraction(w.weights[n - 1], w.total)


def best_weights_for_total(probs: Sequence[float], total: int) -> tuple[list[int], float]:
    """Positive integers summing to ``total`` minimizing max |w_n/total - p_n|.

    Greedy from the per-component rounding floor: each unit goes to (or is taken
    from) the component whose deviation it reduces most.
    """
    n = len(probs)
    if total < n:
        raise InfeasibleDenominator(f"total {total} cannot give {n} outcomes a weight >= 1")
    x = [p * total for p in probs]
    w = [max(1, math.floor(xi)) for xi in x]
    excess = sum(w) - total
    if excess < 0:
        heap = [(w[i] - x[i], i) for i in range(n)]
        heapq.heapify(heap)
        for _ in range(-excess):
            _, i = heapq.heappop(heap)
            w[i] += 1
            heapq.heappush(heap, (w[i] - x[i], i))
    elif excess > 0:
        heap = [(x[i] - w[i], i) for i in range(n) if w[i] > 1]
        heapq.heapify(heap)
        for _ in range(excess):
            _, i = heapq.heappop(heap)
            w[i] -= 1
            if w[i] > 1:
                heapq.heappush(heap, (x[i] - w[i], i))
    err = max(abs(wi / total - p) for wi, p in zip(w, probs))
    return w, err


def to_weights(probs: Sequence[float], max_denominator: int = DEFAULT_MAX_DENOMINATOR) -> WeightVector:
    """Closest weight vector with total at most ``max_denominator``.

    Closeness is the largest absolute probability error; among equally close
    candidates the smallest total wins, so the result is always in lowest terms.
    """
    p = np.asarray([float(q) for q in probs], dtype=float)
    n = p.size
    if n == 0:
        raise WeightError("no probabilities given")
    if np.any(p <= 0):
        raise ZeroProbability(
            "every outcome needs positive probability; drop impossible outcomes first"
        )
    if abs(p.sum() - 1.0) > EPS_NORM:
        raise WeightError(f"probabilities sum to {p.sum()!r}, expected 1")
    if max_denominator < n:
        raise InfeasibleDenominator(
            f"max_denominator {max_denominator} is smaller than the {n} outcomes"
        )
    if n == 1:
        return WeightVector((1,))

    # Any admissible weight vector at total T is off by at least the distance from
    # each p_n*T to the nearest integer >= 1, so most totals can be skipped.
    totals = np.arange(n, max_denominator + 1)
    x = np.outer(totals, p)
    nearest = np.maximum(np.rint(x), 1.0)
    bound = (np.abs(nearest - x).max(axis=1) / totals) * (1 - 1e-12)

    probs_list = p.tolist()
    seed_total = int(totals[np.argmin(bound)])
    best_w, best_err = best_weights_for_total(probs_list, seed_total)
    best_total = seed_total
    for t in totals[bound < best_err].tolist():
        if bound[t - n] >= best_err:
            continue
        w, err = best_weights_for_total(probs_list, t)
        if err < best_err or (err == best_err and t < best_total):
            best_w, best_err, best_total = w, err, t
    return WeightVector.canonical(best_w)


def approximation_error(probs: Sequence[float], w: WeightVector) -> float:
    return max(abs(float(q) - wp) for q, wp in zip(probs, map(float, w.probabilities())))


def replica_label(atom: str, i: int) -> str:
    return f"{atom}_{i}"


def expand_replicas(atom: str, w_n: int) -> Proposition:
    """``a_n`` rewritten as the disjunction of its ``w_n`` replica events."""
    if w_n < 1:
        raise WeightError(f"replica count must be >= 1, got {w_n}")
    return disj(*(Atom(replica_label(atom, i)) for i in range(1, w_n + 1)))
