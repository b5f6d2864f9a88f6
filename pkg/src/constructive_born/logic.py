"""Propositions over outcome events: AST, text syntax, classical evaluation.

Surface syntax, loosest binding first::

    p -> q        implication (right associative)
    p | q         disjunction
    p ^ q         exclusive disjunction
    p & q         conjunction
    ~p  <>p  []p  negation, possibility, necessity

Atoms match ``[A-Za-z][A-Za-z0-9_]*``. Binary nodes always print parenthesized,
so ``parse(unparse(p)) == p``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Collection, Iterator, Mapping, Sequence, Union

import numpy as np

from .errors import FormulaSyntaxError, UnknownAtom


class TruthValue3(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNDECIDED = "undecided"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Atom:
    label: str


@dataclass(frozen=True)
class UndecidedAtom:
    """A statement taken as computationally undecidable, e.g. existence of the ready state."""

    label: str


@dataclass(frozen=True)
class Not:
    arg: "Proposition"


@dataclass(frozen=True)
class Possibly:
    arg: "Proposition"


@dataclass(frozen=True)
class Necessarily:
    arg: "Proposition"


@dataclass(frozen=True)
class And:
    left: "Proposition"
    right: "Proposition"


@dataclass(frozen=True)
class Or:
    left: "Proposition"
    right: "Proposition"


@dataclass(frozen=True)
class Xor:
    left: "Proposition"
    right: "Proposition"


@dataclass(frozen=True)
class Implies:
    left: "Proposition"
    right: "Proposition"


Proposition = Union[Atom, UndecidedAtom, Not, Possibly, Necessarily, And, Or, Xor, Implies]

LEAVES = (Atom, UndecidedAtom)
UNARY = {Not: "~", Possibly: "<>", Necessarily: "[]"}
BINARY = {And: "&", Or: "|", Xor: "^", Implies: "->"}


def conj(*ps: Proposition) -> Proposition:
    """Left-nested conjunction of one or more propositions."""
    return _chain(And, ps)


def disj(*ps: Proposition) -> Proposition:
    return _chain(Or, ps)


def xor_chain(*ps: Proposition) -> Proposition:
    return _chain(Xor, ps)


def _chain(node, ps):
    if not ps:
        raise ValueError("need at least one operand")
    out = ps[0]
    for p in ps[1:]:
        out = node(out, p)
    return out


def subformulas(p: Proposition) -> Iterator[Proposition]:
    """Post-order traversal; children come before parents."""
    stack: list[tuple[Proposition, bool]] = [(p, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded or isinstance(node, LEAVES):
            yield node
            continue
        stack.append((node, True))
        if type(node) in UNARY:
            stack.append((node.arg, False))
        else:
            stack.append((node.right, False))
            stack.append((node.left, False))


def atoms(p: Proposition) -> tuple[str, ...]:
    """Atom labels in order of first appearance (left to right)."""
    seen: dict[str, None] = {}
    for q in subformulas(p):
        if isinstance(q, LEAVES):
            seen.setdefault(q.label, None)
    return tuple(seen)


def size(p: Proposition) -> int:
    return sum(1 for _ in subformulas(p))


def depth(p: Proposition) -> int:
    if isinstance(p, LEAVES):
        return 0
    if type(p) in UNARY:
        return 1 + depth(p.arg)
    return 1 + max(depth(p.left), depth(p.right))


def count_nodes(p: Proposition, kind: type) -> int:
    return sum(1 for q in subformulas(p) if isinstance(q, kind))


def is_modal_free(p: Proposition, kinds: tuple[type, ...] = (Possibly, Necessarily)) -> bool:
    return not any(isinstance(q, kinds) for q in subformulas(p))


# -- printing ----------------------------------------------------------------


def unparse(p: Proposition) -> str:
    if isinstance(p, LEAVES):
        return p.label
    op = UNARY.get(type(p))
    if op is not None:
        return op + unparse(p.arg)
    return f"({unparse(p.left)} {BINARY[type(p)]} {unparse(p.right)})"


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<atom>[A-Za-z][A-Za-z0-9_]*)|(?P<op>->|<>|\[\]|[~&|^()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos + 1, text)
        kind = "atom" if m.group("atom") else "op"
        value = m.group(kind)
        tokens.append((kind, value, m.start(kind) + 1))
        pos = m.end()
    tokens.append(("eof", "", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text, declared, undecided):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.declared = declared
        self.undecided = undecided

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, tok, expected):
        found = "end of input" if tok[0] == "eof" else repr(tok[1])
        raise FormulaSyntaxError(f"expected {expected}, found {found}", tok[2], self.text)

    def parse(self):
        p = self.implication()
        tok = self.peek()
        if tok[0] != "eof":
            self.fail(tok, "end of input")
        return p

    def implication(self):
        left = self.binary_level(0)
        if self.peek()[1] == "->":
            self.take()
            return Implies(left, self.implication())
        return left

    _LEVELS = (("|", Or), ("^", Xor), ("&", And))

    def binary_level(self, level):
        if level == len(self._LEVELS):
            return self.unary()
        op, node = self._LEVELS[level]
        left = self.binary_level(level + 1)
        while self.peek()[:2] == ("op", op):
            self.take()
            left = node(left, self.binary_level(level + 1))
        return left

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("~", "<>", "[]"):
            self.take()
            arg = self.unary()
            return {"~": Not, "<>": Possibly, "[]": Necessarily}[tok[1]](arg)
        return self.primary()

    def primary(self):
        tok = self.take()
        if tok[0] == "atom":
            label = tok[1]
            if label in self.undecided:
                return UndecidedAtom(label)
            if self.declared is not None and label not in self.declared:
                raise UnknownAtom(label)
            return Atom(label)
        if tok[1] == "(":
            p = self.implication()
            close = self.take()
            if close[1] != ")":
                self.fail(close, "')'")
            return p
        self.fail(tok, "an atom, unary operator or '('")


def parse(
    text: str,
    atoms: Collection[str] | None = None,
    undecided: Collection[str] = (),
) -> Proposition:
    """Parse ``text`` into a proposition.

    Labels listed in ``undecided`` become :class:`UndecidedAtom`. When ``atoms``
    is given, any other label not in it raises :class:`UnknownAtom`.
    """
    return _Parser(text, None if atoms is None else set(atoms), set(undecided)).parse()


# -- rewriting ---------------------------------------------------------------


def desugar_xor(p: Proposition) -> Proposition:
    """Replace every ``a ^ b`` by ``(a | b) & (~a | ~b)``."""
    if isinstance(p, LEAVES):
        return p
    if type(p) in UNARY:
        return type(p)(desugar_xor(p.arg))
    left, right = desugar_xor(p.left), desugar_xor(p.right)
    if isinstance(p, Xor):
        return And(Or(left, right), Or(Not(left), Not(right)))
    return type(p)(left, right)


# -- classical semantics -----------------------------------------------------


def evaluate(p: Proposition, valuation: Mapping[str, bool]) -> bool:
    """Two-valued evaluation. Modal operators collapse to identity (a single reflexive world)."""
    return bool(evaluate_columns(p, {k: np.asarray(v, dtype=bool) for k, v in valuation.items()}))


def evaluate_columns(p: Proposition, columns: Mapping[str, np.ndarray]) -> np.ndarray:
    """Evaluate ``p`` on many valuations at once; each atom maps to a boolean array."""
    values: dict[Proposition, np.ndarray] = {}
    for q in subformulas(p):
        if q in values:
            continue
        if isinstance(q, LEAVES):
            try:
                values[q] = columns[q.label]
            except KeyError:
                raise UnknownAtom(q.label) from None
        elif isinstance(q, Not):
            values[q] = ~values[q.arg]
        elif isinstance(q, (Possibly, Necessarily)):
            values[q] = values[q.arg]
        else:
            a, b = values[q.left], values[q.right]
            if isinstance(q, And):
                values[q] = a & b
            elif isinstance(q, Or):
                values[q] = a | b
            elif isinstance(q, Xor):
                values[q] = a ^ b
            else:
                values[q] = ~a | b
    return values[p]


def assignment_columns(labels: Sequence[str]) -> dict[str, np.ndarray]:
    """All 2^N assignments, row r giving atom i the bit i of r counted from the left."""
    n = len(labels)
    rows = np.arange(2**n, dtype=np.int64)
    return {lab: ((rows >> (n - 1 - i)) & 1).astype(bool) for i, lab in enumerate(labels)}


def truth_table(p: Proposition, labels: Sequence[str] | None = None) -> tuple[tuple[str, ...], np.ndarray, np.ndarray]:
    """Return ``(labels, assignments, values)`` with ``assignments`` of shape (2^N, N)."""
    labels = tuple(atoms(p) if labels is None else labels)
    cols = assignment_columns(labels)
    values = np.broadcast_to(evaluate_columns(p, cols), (2 ** len(labels),))
    grid = np.column_stack([cols[l] for l in labels]) if labels else np.zeros((1, 0), bool)
    return labels, grid, np.array(values)


def is_one_hot(p: Proposition, labels: Sequence[str] | None = None) -> bool:
    """True iff ``p`` holds exactly on the assignments with a single true atom."""
    labels, grid, values = truth_table(p, labels)
    return bool(np.array_equal(values, grid.sum(axis=1) == 1))
