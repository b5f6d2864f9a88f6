"""Intuitionistic forcing over finite Kripke models.

A model is a finite poset of worlds with a least element (the root) and a
monotone assignment of atoms to worlds. In the measurement frame the root is the
situation before the measurement, and each maximal world ("leaf") is a
situation after it in which one outcome has been recorded.

Modal operators use the order itself as accessibility: ``<>p`` holds at ``w``
when some ``w' >= w`` forces ``p``, and ``[]p`` when every one does. Forcing of
``<>``-formulas is therefore not monotone in general.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .errors import FrameError, NonMonotoneForcing, NotMaximalWorld, UnknownAtom, UnknownWorld
from .logic import (
    LEAVES,
    And,
    Atom,
    Implies,
    Necessarily,
    Not,
    Or,
    Possibly,
    Proposition,
    TruthValue3,
    UndecidedAtom,
    Xor,
    subformulas,
)
from .quantum import SampleSpace

PIHC_ATOM = "pi_hc"


@dataclass(frozen=True)
class KripkeModel:
    worlds: tuple[str, ...]
    order: frozenset[tuple[str, str]]
    root: str
    forcing: Mapping[str, frozenset[str]]
    atoms: frozenset[str]
    undecided: frozenset[str] = frozenset()

    def __post_init__(self):
        # Defensive copies keep the model immutable from the caller's side.
        object.__setattr__(self, "forcing", {w: frozenset(a) for w, a in self.forcing.items()})
        object.__setattr__(
            self, "_up", {w: frozenset(v for (u, v) in self.order if u == w) for w in self.worlds}
        )

    def up(self, w: str) -> frozenset[str]:
        """All worlds ``w' >= w``, including ``w``."""
        try:
            return self._up[w]
        except KeyError:
            raise UnknownWorld(w) from None

    def leq(self, u: str, v: str) -> bool:
        return (u, v) in self.order

    def is_maximal(self, w: str) -> bool:
        return self.up(w) == {w}

    @property
    def leaves(self) -> tuple[str, ...]:
        return tuple(w for w in self.worlds if self.is_maximal(w))


def build_model(
    worlds: Iterable[str],
    order: Iterable[tuple[str, str]],
    forcing: Mapping[str, Iterable[str]],
    root: str | None = None,
    atoms: Iterable[str] = (),
    undecided: Iterable[str] = (),
) -> KripkeModel:
    """Validate and close a model description.

    ``order`` may be any generating set of pairs; its reflexive-transitive
    closure is taken and must be antisymmetric with a least element. Forcing must
    be monotone along the closed order.
    """
    worlds = tuple(dict.fromkeys(worlds))
    if not worlds:
        raise FrameError("a model needs at least one world")
    known = set(worlds)
    le = {(w, w) for w in worlds}
    for u, v in order:
        for x in (u, v):
            if x not in known:
                raise FrameError(f"order mentions unknown world {x!r}")
        le.add((u, v))
    # Warshall closure; models are small.
    for k in worlds:
        for i in worlds:
            if (i, k) in le:
                for j in worlds:
                    if (k, j) in le:
                        le.add((i, j))
    for u, v in le:
        if u != v and (v, u) in le:
            raise FrameError(f"order is not antisymmetric: {u!r} and {v!r} are mutually below")

    minimal = [w for w in worlds if all((w, v) in le for v in worlds)]
    if root is None:
        if not minimal:
            raise FrameError("no world lies below every other world")
        root = minimal[0]
    elif root not in known:
        raise FrameError(f"root {root!r} is not a world")
    elif root not in minimal:
        offender = next(v for v in worlds if (root, v) not in le)
        raise FrameError(f"root {root!r} is not below {offender!r}")

    for w in forcing:
        if w not in known:
            raise FrameError(f"forcing assigned to unknown world {w!r}")
    forced = {w: frozenset(forcing.get(w, ())) for w in worlds}
    for u, v in sorted(le):
        missing = forced[u] - forced[v]
        if missing:
            raise NonMonotoneForcing(u, v, sorted(missing)[0])

    undecided = frozenset(undecided)
    all_atoms = frozenset(atoms) | undecided | frozenset().union(*forced.values())
    return KripkeModel(worlds, frozenset(le), root, forced, all_atoms, undecided)


def measurement_frame(space: SampleSpace | int, undecided: Iterable[str] = ()) -> KripkeModel:
    """Root plus one leaf per outcome; leaf n forces exactly outcome n."""
    if isinstance(space, int):
        space = SampleSpace.of_size(space)
    leaves = [f"leaf{i}" for i in range(1, len(space) + 1)]
    return build_model(
        ["root", *leaves],
        [("root", leaf) for leaf in leaves],
        {leaf: {label} for leaf, label in zip(leaves, space.outcomes)},
        root="root",
        atoms=space.outcomes,
        undecided=undecided,
    )


def leaf_world(space_size: int, n: int) -> str:
    if not 1 <= n <= space_size:
        raise UnknownWorld(f"leaf{n}")
    return f"leaf{n}"


def pihc_frame() -> KripkeModel:
    """Two worlds: a root, and a witness world where the solvability statement is forced.

    The witness stands for an exactly solvable model existing somewhere; the
    atom is still not forced at the root.
    """
    return build_model(
        ["root", "witness"],
        [("root", "witness")],
        {"witness": {PIHC_ATOM}},
        root="root",
        undecided={PIHC_ATOM},
    )


def truth_set(m: KripkeModel, p: Proposition) -> frozenset[str]:
    """Set of worlds forcing ``p``, computed bottom-up once per subformula."""
    sets: dict[Proposition, frozenset[str]] = {}
    worlds = m.worlds
    for q in subformulas(p):
        if q in sets:
            continue
        if isinstance(q, LEAVES):
            if q.label not in m.atoms:
                raise UnknownAtom(q.label)
            s = frozenset(w for w in worlds if q.label in m.forcing[w])
        elif isinstance(q, Not):
            a = sets[q.arg]
            s = frozenset(w for w in worlds if not (m.up(w) & a))
        elif isinstance(q, Possibly):
            a = sets[q.arg]
            s = frozenset(w for w in worlds if m.up(w) & a)
        elif isinstance(q, Necessarily):
            a = sets[q.arg]
            s = frozenset(w for w in worlds if m.up(w) <= a)
        elif isinstance(q, And):
            s = sets[q.left] & sets[q.right]
        elif isinstance(q, Or):
            s = sets[q.left] | sets[q.right]
        elif isinstance(q, Implies):
            a, b = sets[q.left], sets[q.right]
            s = frozenset(w for w in worlds if (m.up(w) & a) <= b)
        elif isinstance(q, Xor):
            # p ^ q abbreviates (p | q) & (~p | ~q)
            a, b = sets[q.left], sets[q.right]
            not_a = frozenset(w for w in worlds if not (m.up(w) & a))
            not_b = frozenset(w for w in worlds if not (m.up(w) & b))
            s = (a | b) & (not_a | not_b)
        else:
            raise TypeError(f"not a proposition: {q!r}")
        sets[q] = s
    return sets[p]


def forces(m: KripkeModel, w: str, p: Proposition) -> bool:
    m.up(w)
    return w in truth_set(m, p)


def modal_forces(m: KripkeModel, w: str, p: Proposition) -> bool:
    """Forcing for formulas containing ``<>``/``[]``; accessibility is the order."""
    return forces(m, w, p)


def eval3(m: KripkeModel, p: Proposition, world: str | None = None) -> TruthValue3:
    """True if ``p`` is forced at the world (root by default), False if ``~p`` is, else Undecided."""
    w = m.root if world is None else world
    if forces(m, w, p):
        return TruthValue3.TRUE
    if forces(m, w, Not(p)):
        return TruthValue3.FALSE
    return TruthValue3.UNDECIDED


def post_valuation(m: KripkeModel, leaf: str) -> dict[str, bool]:
    if not m.is_maximal(leaf):
        raise NotMaximalWorld(f"{leaf!r} has proper successors; no classical valuation there")
    return {a: a in m.forcing[leaf] for a in sorted(m.atoms)}


# -- model description files -------------------------------------------------


def model_to_dict(m: KripkeModel) -> dict:
    return {
        "worlds": list(m.worlds),
        "root": m.root,
        "order": sorted([u, v] for u, v in m.order if u != v),
        "forcing": {w: sorted(m.forcing[w]) for w in m.worlds},
        "atoms": sorted(m.atoms),
        "undecided": sorted(m.undecided),
    }


def model_from_dict(data: Mapping) -> KripkeModel:
    try:
        worlds = [str(w) for w in data["worlds"]]
        order = [(str(u), str(v)) for u, v in data.get("order", [])]
        forcing = {str(w): [str(a) for a in atoms] for w, atoms in data.get("forcing", {}).items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise FrameError(f"malformed model description: {exc}") from None
    return build_model(
        worlds,
        order,
        forcing,
        root=data.get("root"),
        atoms=data.get("atoms", ()),
        undecided=data.get("undecided", ()),
    )


def load_model(path: str | Path) -> KripkeModel:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FrameError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise FrameError(f"{path}: expected a JSON object")
    return model_from_dict(data)
