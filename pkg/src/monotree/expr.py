"""Read-once arithmetic expression trees.

Trees are immutable: ``Leaf(index)`` refers to the quantity mention with that
index, ``Node(op, left, right)`` applies one of the four basic operations.
Values are exact ``Fraction`` objects throughout.
"""
from __future__ import annotations

import enum
import itertools
import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple, Optional, Union

from .errors import DivByZero, LeafSetMismatch, MissingQuantity, TooManyQuantities, TreeSyntaxError

MAX_ENUMERATION_LEAVES = 6


class Op(enum.Enum):
    ADD = "+"
    SUB = "-"
    MUL = "*"
    DIV = "/"

    @property
    def kind(self) -> "ChainKind":
        return ChainKind.AS if self in (Op.ADD, Op.SUB) else ChainKind.MD

    @property
    def is_inverse(self) -> bool:
        return self in (Op.SUB, Op.DIV)


class ChainKind(enum.Enum):
    AS = "AS"
    MD = "MD"

    @property
    def plus(self) -> Op:
        return Op.ADD if self is ChainKind.AS else Op.MUL

    @property
    def minus(self) -> Op:
        return Op.SUB if self is ChainKind.AS else Op.DIV


class LcaLabel(enum.Enum):
    PLUS = "+"
    TIMES = "*"
    MINUS = "-"
    MINUS_REVERSE = "-_rev"
    DIV = "/"
    DIV_REVERSE = "/_rev"

    def reverse(self) -> "LcaLabel":
        return _REVERSED.get(self, self)


_REVERSED = {
    LcaLabel.MINUS: LcaLabel.MINUS_REVERSE,
    LcaLabel.MINUS_REVERSE: LcaLabel.MINUS,
    LcaLabel.DIV: LcaLabel.DIV_REVERSE,
    LcaLabel.DIV_REVERSE: LcaLabel.DIV,
}

LABELS = tuple(LcaLabel)


@dataclass(frozen=True)
class Leaf:
    index: int

    def __str__(self):
        return format_tree(self)


@dataclass(frozen=True)
class Node:
    op: Op
    left: "Tree"
    right: "Tree"

    def __str__(self):
        return format_tree(self)


Tree = Union[Leaf, Node]


class Term(NamedTuple):
    positive: bool
    tree: Tree


@dataclass(frozen=True)
class Chain:
    """A maximal connected run of same-family operation nodes.

    ``nodes`` holds the paths (0 = left, 1 = right) from the tree root to each
    chain node; ``terms`` are the subtrees hanging off the chain with their role
    (added/multiplied vs. subtracted/divided).
    """

    kind: ChainKind
    nodes: frozenset
    terms: tuple


# ---------------------------------------------------------------------------
# basic queries


@lru_cache(maxsize=1 << 16)
def leaves(tree: Tree) -> tuple:
    """Leaf indices in left-to-right order."""
    if isinstance(tree, Leaf):
        return (tree.index,)
    return leaves(tree.left) + leaves(tree.right)


def min_leaf(tree: Tree) -> int:
    return min(leaves(tree))


def size(tree: Tree) -> int:
    return len(leaves(tree))


def evaluate(tree: Tree, values: Mapping[int, Fraction]) -> Fraction:
    if isinstance(tree, Leaf):
        try:
            return Fraction(values[tree.index])
        except KeyError:
            raise MissingQuantity(tree.index) from None
    a = evaluate(tree.left, values)
    b = evaluate(tree.right, values)
    op = tree.op
    if op is Op.ADD:
        return a + b
    if op is Op.SUB:
        return a - b
    if op is Op.MUL:
        return a * b
    if b == 0:
        raise DivByZero(f"division by zero in {format_tree(tree)}")
    return a / b


def is_valid(tree: Tree) -> bool:
    idx = leaves(tree)
    return len(idx) == len(set(idx))


_FORBIDDEN_EDGES = {(Op.ADD, Op.SUB), (Op.MUL, Op.DIV), (Op.SUB, Op.SUB), (Op.DIV, Op.DIV)}


def is_monotonic(tree: Tree) -> bool:
    if isinstance(tree, Leaf):
        return True
    for child in (tree.left, tree.right):
        if isinstance(child, Node) and (tree.op, child.op) in _FORBIDDEN_EDGES:
            return False
    return is_monotonic(tree.left) and is_monotonic(tree.right)


# ---------------------------------------------------------------------------
# chains


def _collect_chain(tree, kind, path, positive, nodes, terms):
    if isinstance(tree, Node) and tree.op.kind is kind:
        nodes.append(path)
        _collect_chain(tree.left, kind, path + (0,), positive, nodes, terms)
        right_positive = positive if tree.op is kind.plus else not positive
        _collect_chain(tree.right, kind, path + (1,), right_positive, nodes, terms)
    else:
        terms.append((path, Term(positive, tree)))


def root_chain(tree: Tree) -> Optional[Chain]:
    """The chain containing the root node, or None for a bare leaf."""
    if isinstance(tree, Leaf):
        return None
    nodes, terms = [], []
    _collect_chain(tree, tree.op.kind, (), True, nodes, terms)
    return Chain(tree.op.kind, frozenset(nodes), tuple(t for _, t in terms))


def chains(tree: Tree) -> list:
    """Partition the internal nodes of ``tree`` into maximal AS/MD chains.

    Chains are listed in pre-order of their topmost node.
    """
    out = []
    stack = [((), tree)]
    while stack:
        path, sub = stack.pop()
        if isinstance(sub, Leaf):
            continue
        nodes, terms = [], []
        _collect_chain(sub, sub.op.kind, path, True, nodes, terms)
        out.append(Chain(sub.op.kind, frozenset(nodes), tuple(t for _, t in terms)))
        for term_path, term in reversed(terms):
            stack.append((term_path, term.tree))
    return out


def chain_value(chain: Chain, values: Mapping[int, Fraction]) -> Fraction:
    """Evaluate the chain expression by combining its signed terms."""
    if chain.kind is ChainKind.AS:
        total = Fraction(0)
        for term in chain.terms:
            v = evaluate(term.tree, values)
            total += v if term.positive else -v
        return total
    num, den = Fraction(1), Fraction(1)
    for term in chain.terms:
        v = evaluate(term.tree, values)
        if term.positive:
            num *= v
        else:
            den *= v
    if den == 0:
        raise DivByZero("zero divisor term in chain")
    return num / den


# ---------------------------------------------------------------------------
# normal forms


def _comb(op: Op, trees) -> Tree:
    return reduce(lambda a, b: Node(op, a, b), trees)


def _sorted_terms(trees):
    return sorted(trees, key=min_leaf)


@lru_cache(maxsize=1 << 16)
def monotonize(tree: Tree) -> Tree:
    """Rewrite ``tree`` into a monotonic tree for the same expression.

    Each chain becomes ``minus(plus-comb(positive terms), plus-comb(negative
    terms))``, or a bare plus-comb when no term is negative; term subtrees are
    monotonized recursively and combs are sorted by smallest leaf index.
    """
    if isinstance(tree, Leaf):
        return tree
    chain = root_chain(tree)
    kind = chain.kind
    pos = _sorted_terms(monotonize(t.tree) for t in chain.terms if t.positive)
    neg = _sorted_terms(monotonize(t.tree) for t in chain.terms if not t.positive)
    if not neg:
        return _comb(kind.plus, pos)
    return Node(kind.minus, _comb(kind.plus, pos), _comb(kind.plus, neg))


def _plus_run(tree, op, out):
    if isinstance(tree, Node) and tree.op is op:
        _plus_run(tree.left, op, out)
        _plus_run(tree.right, op, out)
    else:
        out.append(tree)


@lru_cache(maxsize=1 << 16)
def canonicalize(tree: Tree) -> Tree:
    """Sort every ADD-only / MUL-only run into a left-leaning comb."""
    if isinstance(tree, Leaf):
        return tree
    if tree.op in (Op.ADD, Op.MUL):
        run = []
        _plus_run(tree, tree.op, run)
        return _comb(tree.op, _sorted_terms(canonicalize(t) for t in run))
    return Node(tree.op, canonicalize(tree.left), canonicalize(tree.right))


# ---------------------------------------------------------------------------
# LCA operations


@lru_cache(maxsize=1 << 16)
def _leaf_paths(tree: Tree) -> dict:
    if isinstance(tree, Leaf):
        return {tree.index: ()}
    out = {k: (0,) + p for k, p in _leaf_paths(tree.left).items()}
    out.update({k: (1,) + p for k, p in _leaf_paths(tree.right).items()})
    return out


def _node_at(tree, path):
    for step in path:
        tree = tree.right if step else tree.left
    return tree


def lca_label(tree: Tree, qi: int, qj: int) -> LcaLabel:
    if qi == qj:
        raise ValueError("lca_label needs two distinct quantities")
    paths = _leaf_paths(tree)
    for q in (qi, qj):
        if q not in paths:
            raise MissingQuantity(q)
    pi, pj = paths[qi], paths[qj]
    k = 0
    while pi[k] == pj[k]:
        k += 1
    op = _node_at(tree, pi[:k]).op
    in_order = pi[k] == 0
    if op is Op.ADD:
        return LcaLabel.PLUS
    if op is Op.MUL:
        return LcaLabel.TIMES
    if op is Op.SUB:
        return LcaLabel.MINUS if in_order else LcaLabel.MINUS_REVERSE
    return LcaLabel.DIV if in_order else LcaLabel.DIV_REVERSE


@lru_cache(maxsize=1 << 16)
def _lca_items(tree):
    idx = sorted(leaves(tree))
    return tuple(((a, b), lca_label(tree, a, b)) for a, b in itertools.combinations(idx, 2))


def lca_map(tree: Tree) -> dict:
    """LCA label for every pair of leaf indices, keyed ``(low, high)``."""
    return dict(_lca_items(tree))


def lca_equivalent(t1: Tree, t2: Tree) -> bool:
    if sorted(leaves(t1)) != sorted(leaves(t2)):
        raise LeafSetMismatch(f"{format_tree(t1)} vs {format_tree(t2)}")
    return lca_map(t1) == lca_map(t2)


# ---------------------------------------------------------------------------
# brute-force enumeration


def _all_shapes(seq):
    if len(seq) == 1:
        yield Leaf(seq[0])
        return
    for split in range(1, len(seq)):
        for left in _all_shapes(seq[:split]):
            for right in _all_shapes(seq[split:]):
                for op in Op:
                    yield Node(op, left, right)


def enumerate_trees(indices: Iterable[int], constraints: Optional[Callable[[Tree], bool]] = None) -> Iterator[Tree]:
    """Yield every read-once tree over exactly ``indices``.

    Order is deterministic: leaf permutations in lexicographic order, then
    split points, then operations.
    """
    idx = sorted(set(indices))
    if not idx:
        raise ValueError("need at least one index")
    if len(idx) > MAX_ENUMERATION_LEAVES:
        raise TooManyQuantities(f"{len(idx)} > {MAX_ENUMERATION_LEAVES}")
    for perm in itertools.permutations(idx):
        for tree in _all_shapes(perm):
            if constraints is None or constraints(tree):
                yield tree


# ---------------------------------------------------------------------------
# chain-preserving rewrites (commutation and re-association inside a chain)


def _local_rewrites(node):
    if not isinstance(node, Node):
        return
    kind = node.op.kind
    P, M = kind.plus, kind.minus
    op, l, r = node.op, node.left, node.right
    lop = l.op if isinstance(l, Node) else None
    rop = r.op if isinstance(r, Node) else None
    if op is P:
        yield Node(P, r, l)
        if lop is P:
            yield Node(P, l.left, Node(P, l.right, r))
        if rop is P:
            yield Node(P, Node(P, l, r.left), r.right)
        if rop is M:
            yield Node(M, Node(P, l, r.left), r.right)
        if lop is M:
            yield Node(M, l.left, Node(M, l.right, r))
            yield Node(M, Node(P, l.left, r), l.right)
    else:
        if lop is P:
            yield Node(P, l.left, Node(M, l.right, r))
            yield Node(P, Node(M, l.left, r), l.right)
        if lop is M:
            yield Node(M, l.left, Node(P, l.right, r))
        if rop is P:
            yield Node(M, Node(M, l, r.left), r.right)
        if rop is M:
            yield Node(P, Node(M, l, r.left), r.right)


def chain_rewrites(tree: Tree) -> Iterator[Tree]:
    """All trees one commutation/re-association step away from ``tree``."""
    if isinstance(tree, Leaf):
        return
    yield from _local_rewrites(tree)
    for left in chain_rewrites(tree.left):
        yield Node(tree.op, left, tree.right)
    for right in chain_rewrites(tree.right):
        yield Node(tree.op, tree.left, right)


def rewrite_closure(tree: Tree, limit: int = 64) -> list:
    """Breadth-first closure of ``chain_rewrites``, capped at ``limit`` trees."""
    seen = {tree: None}
    queue = deque([tree])
    while queue and len(seen) < limit:
        for nxt in chain_rewrites(queue.popleft()):
            if nxt not in seen:
                seen[nxt] = None
                queue.append(nxt)
                if len(seen) >= limit:
                    break
    return list(seen)


# ---------------------------------------------------------------------------
# text forms

_TOKEN = re.compile(r"\(|\)|[^\s()]+")
_SYMBOLS = {op.value: op for op in Op}


def format_tree(tree: Tree) -> str:
    if isinstance(tree, Leaf):
        return f"q{tree.index}"
    return f"({tree.op.value} {format_tree(tree.left)} {format_tree(tree.right)})"


def parse_tree(text: str) -> Tree:
    tokens = _TOKEN.findall(text)
    if not tokens:
        raise TreeSyntaxError("empty tree string")
    tree, pos = _parse(tokens, 0, text)
    if pos != len(tokens):
        raise TreeSyntaxError(f"trailing input in {text!r}")
    return tree


def _parse(tokens, pos, text):
    if pos >= len(tokens):
        raise TreeSyntaxError(f"unexpected end of {text!r}")
    tok = tokens[pos]
    if tok == "(":
        if pos + 1 >= len(tokens) or tokens[pos + 1] not in _SYMBOLS:
            raise TreeSyntaxError(f"expected operator after '(' in {text!r}")
        op = _SYMBOLS[tokens[pos + 1]]
        left, pos = _parse(tokens, pos + 2, text)
        right, pos = _parse(tokens, pos, text)
        if pos >= len(tokens) or tokens[pos] != ")":
            raise TreeSyntaxError(f"expected ')' in {text!r}")
        return Node(op, left, right), pos + 1
    m = re.fullmatch(r"q(\d+)", tok)
    if not m:
        raise TreeSyntaxError(f"bad token {tok!r} in {text!r}")
    return Leaf(int(m.group(1))), pos + 1


def format_value(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def to_infix(tree: Tree, values: Optional[Mapping[int, Fraction]] = None) -> str:
    """Human-readable infix rendering, e.g. ``(3 + 5) * 9``."""
    def render(t, top):
        if isinstance(t, Leaf):
            return format_value(values[t.index]) if values is not None else f"q{t.index}"
        s = f"{render(t.left, False)} {t.op.value} {render(t.right, False)}"
        return s if top else f"({s})"
    return render(tree, True)
