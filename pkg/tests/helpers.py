"""Random generators and independent oracles shared by the test modules."""

from __future__ import annotations

import itertools

import numpy as np

from constructive_born import logic
from constructive_born.kripke import build_model
from constructive_born.logic import (
    And,
    Atom,
    Implies,
    Necessarily,
    Not,
    Or,
    Possibly,
    UndecidedAtom,
    Xor,
)

BINARY_NODES = (And, Or, Xor, Implies)


def random_formula(rng, labels, max_depth, unary=(Not, Possibly, Necessarily), undecided=()):
    """Random formula of depth <= max_depth over ``labels`` (and ``undecided``)."""
    if max_depth == 0 or rng.random() < 0.25:
        if undecided and rng.random() < 0.2:
            return UndecidedAtom(undecided[rng.integers(len(undecided))])
        return Atom(labels[rng.integers(len(labels))])
    if rng.random() < 0.35:
        node = unary[rng.integers(len(unary))]
        return node(random_formula(rng, labels, max_depth - 1, unary, undecided))
    node = BINARY_NODES[rng.integers(len(BINARY_NODES))]
    return node(
        random_formula(rng, labels, max_depth - 1, unary, undecided),
        random_formula(rng, labels, max_depth - 1, unary, undecided),
    )


def random_model(rng, labels, max_worlds=8):
    """Random rooted poset with monotone forcing.

    Edges only go from lower to higher index, so the order is acyclic; world 0
    is placed below everything. Forcing is made monotone by pushing each
    world's atoms up to all of its successors.
    """
    k = int(rng.integers(1, max_worlds + 1))
    worlds = [f"w{i}" for i in range(k)]
    edges = [(worlds[0], w) for w in worlds[1:]]
    for i, j in itertools.combinations(range(1, k), 2):
        if rng.random() < 0.3:
            edges.append((worlds[i], worlds[j]))
    seeds = {w: {a for a in labels if rng.random() < 0.25} for w in worlds}
    # naive closure for the upward propagation
    above = {w: {w} for w in worlds}
    changed = True
    while changed:
        changed = False
        for u, v in edges:
            new = above[v] - above[u]
            if new:
                above[u] |= new
                changed = True
    forcing = {w: set() for w in worlds}
    for u in worlds:
        for v in above[u]:
            forcing[v] |= seeds[u]
    return build_model(worlds, edges, forcing, root=worlds[0], atoms=labels)


def naive_forces(m, w, p):
    """Clause-by-clause forcing, recomputed from scratch at every world visited."""
    up = [v for v in m.worlds if m.leq(w, v)]
    if isinstance(p, (Atom, UndecidedAtom)):
        return p.label in m.forcing[w]
    if isinstance(p, Not):
        return all(not naive_forces(m, v, p.arg) for v in up)
    if isinstance(p, Possibly):
        return any(naive_forces(m, v, p.arg) for v in up)
    if isinstance(p, Necessarily):
        return all(naive_forces(m, v, p.arg) for v in up)
    if isinstance(p, And):
        return naive_forces(m, w, p.left) and naive_forces(m, w, p.right)
    if isinstance(p, Or):
        return naive_forces(m, w, p.left) or naive_forces(m, w, p.right)
    if isinstance(p, Implies):
        return all(not naive_forces(m, v, p.left) or naive_forces(m, v, p.right) for v in up)
    if isinstance(p, Xor):
        return naive_forces(m, w, logic.desugar_xor(p))
    raise TypeError(p)


def classical(p, valuation):
    """Scalar recursive two-valued evaluation, independent of the vectorized evaluator."""
    if isinstance(p, (Atom, UndecidedAtom)):
        return valuation[p.label]
    if isinstance(p, Not):
        return not classical(p.arg, valuation)
    if isinstance(p, (Possibly, Necessarily)):
        return classical(p.arg, valuation)
    a, b = classical(p.left, valuation), classical(p.right, valuation)
    if isinstance(p, And):
        return a and b
    if isinstance(p, Or):
        return a or b
    if isinstance(p, Xor):
        return a != b
    return (not a) or b


def all_assignments(labels):
    for bits in itertools.product([False, True], repeat=len(labels)):
        yield dict(zip(labels, bits))


def rational_state(weights, rng=None):
    """State with |c_n|^2 = w_n / sum(w), with random phases when ``rng`` is given."""
    w = np.asarray(weights, dtype=float)
    mags = np.sqrt(w / w.sum())
    phases = np.zeros(len(w)) if rng is None else rng.uniform(0, 2 * np.pi, len(w))
    return mags * np.exp(1j * phases)


def brute_force_weights(probs, max_denominator):
    """Exhaustive search over every composition of every total; minimax error, smaller total on ties."""
    n = len(probs)
    best = None
    for total in range(n, max_denominator + 1):
        for cuts in itertools.combinations(range(1, total), n - 1):
            bounds = (0, *cuts, total)
            w = [bounds[i + 1] - bounds[i] for i in range(n)]
            err = max(abs(wi / total - p) for wi, p in zip(w, probs))
            if best is None or err < best[0]:
                best = (err, total, w)
    return best
