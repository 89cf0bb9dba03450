"""Probabilistically balanced trees built from named lists, plus folds.

An element's level is the number of trailing zero bits of its content hash,
so levels follow a geometric distribution and the tree has expected
logarithmic depth.  The construction is canonical: the tree is the
leftmost-max cartesian tree of the level sequence (an element is an ancestor
of its neighbors exactly when its level beats every intervening level), so
the same value sequence always produces the same shape, and similar lists
produce similar trees.

All node names and reference names fork off the consumed input cell's name,
so a single replace only rebuilds the vicinity of that element.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..engine import ARef, Engine, MemoFn
from ..hashing import content_hash, trailing_zeros
from ..names import Name, fork4
from .lists import NIL, _resolve


class _Leaf:
    __slots__ = ()

    def __repr__(self):
        return "LEAF"

    def __content_hash__(self):
        return 0x1EAF


LEAF = _Leaf()

_TOP_LEVEL = 1 << 30


@dataclass(frozen=True)
class Bin:
    name: Name
    element: object
    left: object  # ARef holding a tree
    right: object

    def __content_hash__(self):
        return content_hash(("bin", self.name, self.element, self.left, self.right))


def height_of(value) -> int:
    """Trailing zero bits of the value's content hash (expected geometric)."""
    return trailing_zeros(content_hash(value))


def make_tree_builder(eng: Engine, seed: Name) -> MemoFn:
    """Memo function turning a list suffix into (tree, remaining-list).

    The body consumes elements whose level is at most the parent level,
    hanging the accumulated left tree under each consumed element; elements
    of a strictly larger level escape to an ancestor call.
    """

    def body(m, arg):
        parent_level, left, xs = arg
        while True:
            if xs is NIL:
                return (left, NIL)
            level = height_of(xs.head)
            if level > parent_level:
                return (left, xs)
            n1, n2, n3, n4 = fork4(xs.name)
            rest = _resolve(eng, xs.tail)
            right, remaining = eng.force(eng.thunk(m, n4, (level, LEAF, rest)))
            left = Bin(n1, xs.head, eng.aref(n2, left), eng.aref(n3, right))
            xs = remaining

    return eng.mk_mfn(seed, "tree_of_list", body)


def tree_of_list(eng: Engine, m: MemoFn, head_ref: ARef):
    """Demand the canonical tree of the list's current value sequence."""
    xs = eng.get(head_ref)
    key = m.seed if xs is NIL else xs.name
    tree, rest = eng.force(eng.thunk(m, key, (_TOP_LEVEL, LEAF, xs)))
    assert rest is NIL
    return tree


def tree_values(eng: Engine, tree) -> list:
    """In-order element sequence."""
    out = []
    stack = [("t", tree)]
    while stack:
        kind, item = stack.pop()
        if kind == "v":
            out.append(item)
            continue
        if item is LEAF:
            continue
        stack.append(("t", _resolve(eng, item.right)))
        stack.append(("v", item.element))
        stack.append(("t", _resolve(eng, item.left)))
    return out


def _fold_key(m: MemoFn, node) -> Name:
    return m.seed if node is LEAF else node.name


def make_tree_fold(eng: Engine, seed: Name, combine, identity) -> MemoFn:
    """Fold memoized per subtree under the subtree's own node name."""

    def body(m, node):
        if node is LEAF:
            return identity
        lt = _resolve(eng, node.left)
        rt = _resolve(eng, node.right)
        a = eng.force(eng.thunk(m, _fold_key(m, lt), lt))
        b = eng.force(eng.thunk(m, _fold_key(m, rt), rt))
        return combine(node.element, a, b)

    return eng.mk_mfn(seed, ("tree_fold", id(combine), identity), body)


def fold_tree(eng: Engine, m: MemoFn, tree):
    return eng.force(eng.thunk(m, _fold_key(m, tree), tree))


_MAX_INT = (1 << 63) - 1


def make_tree_min(eng: Engine, seed: Name) -> MemoFn:
    return make_tree_fold(eng, seed, lambda x, a, b: min(x, a, b), _MAX_INT)


def make_tree_sum(eng: Engine, seed: Name) -> MemoFn:
    return make_tree_fold(eng, seed, lambda x, a, b: x + a + b, 0)


def tree_min(eng: Engine, m: MemoFn, tree):
    return fold_tree(eng, m, tree)


def tree_sum(eng: Engine, m: MemoFn, tree):
    return fold_tree(eng, m, tree)
