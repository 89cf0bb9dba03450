"""Named mutable lists and the list-shaped incremental operations.

A list cell carries an element, a name, and a tail reference; the names give
every cell a stable identity across runs, so per-cell work lines up after
edits.  Mapping and filtering name each output cell by forking the input
cell's name; the recursion over a suffix is memoized under the suffix's head
cell name, which is what keeps a single insert from disturbing the rest of
the list.

Tail references are usually ``ARef``s; lazy producers (lazy map/filter,
merge) put un-forced ``AThunk``s in tail position instead, and the walkers
force them on demand.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..engine import ARef, AThunk, Engine, MemoFn
from ..errors import NomemoError
from ..hashing import content_hash
from ..names import Name, fork, fork4, with_index


class IndexOutOfRange(IndexError, NomemoError):
    pass


class _Nil:
    __slots__ = ()

    def __repr__(self):
        return "NIL"

    def __content_hash__(self):
        return 0x4E494C


NIL = _Nil()


@dataclass(frozen=True)
class Cons:
    head: object
    name: Name
    tail: object  # ARef, or AThunk for lazy tails

    def __content_hash__(self):
        return content_hash(("cons", self.head, self.name, self.tail))


def _resolve(eng: Engine, x):
    if type(x) is ARef:
        return eng.get(x)
    if type(x) is AThunk:
        return eng.force(x)
    return x


def list_of_values(eng: Engine, values) -> ARef:
    """Outer-layer construction: fresh names for every cell and tail ref."""
    tail = NIL
    ref = eng.aref(eng.fresh_name(), tail)
    for v in reversed(list(values)):
        cell = Cons(v, eng.fresh_name(), ref)
        ref = eng.aref(eng.fresh_name(), cell)
    return ref


def list_values(eng: Engine, lst) -> list:
    """Walk a list (handle or value), forcing lazy tails; returns elements."""
    v = _resolve(eng, lst)
    out = []
    while v is not NIL:
        out.append(v.head)
        v = _resolve(eng, v.tail)
    return out


def _ref_at(eng: Engine, head_ref: ARef, index: int) -> ARef:
    ref = head_ref
    for _ in range(index):
        cell = eng.get(ref)
        if cell is NIL:
            raise IndexOutOfRange(index)
        ref = cell.tail
    return ref


def list_insert(eng: Engine, head_ref: ARef, index: int, value) -> None:
    """Splice a fresh-named cell so that it lands at ``index``."""
    ref = _ref_at(eng, head_ref, index)
    old = eng.get(ref)
    eng.set(ref, Cons(value, eng.fresh_name(), eng.aref(eng.fresh_name(), old)))


def list_delete(eng: Engine, head_ref: ARef, index: int) -> None:
    ref = _ref_at(eng, head_ref, index)
    cell = eng.get(ref)
    if cell is NIL:
        raise IndexOutOfRange(index)
    eng.set(ref, _resolve(eng, cell.tail))


def list_replace(eng: Engine, head_ref: ARef, index: int, value) -> None:
    """Delete then re-insert at the same position (the new cell is fresh)."""
    ref = _ref_at(eng, head_ref, index)
    cell = eng.get(ref)
    if cell is NIL:
        raise IndexOutOfRange(index)
    eng.set(ref, Cons(value, eng.fresh_name(), cell.tail))


# ----------------------------------------------------------------------
# map / filter


def _suffix_key(m: MemoFn, xs) -> Name:
    """Thunk name for the computation over the suffix headed by ``xs``."""
    return m.seed if xs is NIL else xs.name


def make_list_mapper(eng: Engine, seed: Name, f, lazy: bool = False) -> MemoFn:
    def body(m, xs):
        if xs is NIL:
            return NIL
        n1, n2 = fork(xs.name)
        tl = _resolve(eng, xs.tail)
        tail_thunk = eng.thunk(m, _suffix_key(m, tl), tl)
        if lazy:
            return Cons(f(xs.head), n1, tail_thunk)
        return Cons(f(xs.head), n1, eng.aref(n2, eng.force(tail_thunk)))

    return eng.mk_mfn(seed, ("list_map", lazy, id(f)), body)


def make_list_filter(eng: Engine, seed: Name, keep, lazy: bool = False) -> MemoFn:
    def body(m, xs):
        while xs is not NIL and not lazy and not keep(xs.head):
            # skip-forward: dropped cells contribute nothing to the output
            xs = _resolve(eng, xs.tail)
        if xs is NIL:
            return NIL
        tl = _resolve(eng, xs.tail)
        tail_thunk = eng.thunk(m, _suffix_key(m, tl), tl)
        if lazy:
            if keep(xs.head):
                n1, _ = fork(xs.name)
                return Cons(xs.head, n1, tail_thunk)
            return eng.force(tail_thunk)
        n1, n2 = fork(xs.name)
        return Cons(xs.head, n1, eng.aref(n2, eng.force(tail_thunk)))

    return eng.mk_mfn(seed, ("list_filter", lazy, id(keep)), body)


def _suffixes(eng: Engine, head_ref: ARef) -> list:
    out = [eng.get(head_ref)]
    while out[-1] is not NIL:
        out.append(_resolve(eng, out[-1].tail))
    return out


def _demand_suffix_op(eng: Engine, m: MemoFn, head_ref: ARef, lazy: bool):
    suffixes = _suffixes(eng, head_ref)
    if not lazy:
        # warm bottom-up so each body finds its tail already cached and the
        # native call depth stays flat no matter how long the list is
        for xs in reversed(suffixes):
            eng.force(eng.thunk(m, _suffix_key(m, xs), xs))
    return eng.force(eng.thunk(m, _suffix_key(m, suffixes[0]), suffixes[0]))


def list_map(eng: Engine, m: MemoFn, head_ref: ARef):
    """Demand the mapped list; returns the output list value."""
    return _demand_suffix_op(eng, m, head_ref, m.body_id[1])


def list_filter(eng: Engine, m: MemoFn, head_ref: ARef):
    return _demand_suffix_op(eng, m, head_ref, m.body_id[1])


# ----------------------------------------------------------------------
# reverse


def make_reverser(eng: Engine, seed: Name) -> MemoFn:
    def body(m, arg):
        xs, acc = arg
        if xs is NIL:
            return acc
        n1, n2 = fork(xs.name)
        return (_resolve(eng, xs.tail), Cons(xs.head, n1, eng.aref(n2, acc)))

    return eng.mk_mfn(seed, "list_reverse_step", body)


def list_reverse(eng: Engine, m: MemoFn, head_ref: ARef):
    """Accumulator reverse, driven one memoized step per cell.

    The accumulator threads through the steps, so a replace at position i
    re-executes the steps after i; earlier steps are verified hits.
    """
    xs = eng.get(head_ref)
    acc = NIL
    while xs is not NIL:
        xs, acc = eng.force(eng.thunk(m, xs.name, (xs, acc)))
    return acc


# ----------------------------------------------------------------------
# mergesort / median (tree-shaped divide, lazy merge)


@dataclass
class Sorter:
    sort: MemoFn
    merge: MemoFn
    builder: MemoFn


def make_merge_sorter(eng: Engine, seed: Name, key=None) -> "Sorter":
    """Sorting goes through the probabilistic tree so that a small edit only
    disturbs the merges along one root path."""
    from .trees import LEAF, height_of, make_tree_builder

    keyf = key or (lambda x: x)
    s1, s2, s3 = fork(seed)[0], fork(fork(seed)[1])[0], fork(fork(seed)[1])[1]
    builder = make_tree_builder(eng, s3)

    def merge_body(m, arg):
        mode = arg[0]
        if mode == "tail":
            _, w, other, lvl = arg
            return _merge_step(_resolve(eng, w.tail), other, lvl)
        _, a, b, lvl = arg
        return _merge_step(a, b, lvl)

    def _merge_step(a, b, lvl):
        if a is NIL:
            return b
        if b is NIL:
            return a
        if keyf(a.head) <= keyf(b.head):
            w, other = a, b
        else:
            w, other = b, a
        base = with_index(w.name, lvl)
        n1, n2 = fork(base)
        return Cons(w.head, n1, eng.thunk(merge_mfn, n2, ("tail", w, other, lvl)))

    merge_mfn = eng.mk_mfn(s2, ("merge", id(key)), merge_body)

    def _tree_key(m, node):
        return m.seed if node is LEAF else node.name

    def sort_body(m, node):
        if node is LEAF:
            return NIL
        _, _, n3, n4 = fork4(node.name)
        lt = _resolve(eng, node.left)
        rt = _resolve(eng, node.right)
        ls = eng.force(eng.thunk(m, _tree_key(m, lt), lt))
        rs = eng.force(eng.thunk(m, _tree_key(m, rt), rt))
        single = Cons(node.element, with_index(node.name, 201), NIL)
        lvl = height_of(node.element)
        inner = eng.force(eng.thunk(merge_mfn, n3, ("merge", single, rs, 2 * lvl + 2)))
        return eng.force(eng.thunk(merge_mfn, n4, ("merge", ls, inner, 2 * lvl + 3)))

    sort_mfn = eng.mk_mfn(s1, ("merge_sort", id(key)), sort_body)
    return Sorter(sort_mfn, merge_mfn, builder)


def list_mergesort(eng: Engine, sorter: "Sorter", head_ref: ARef):
    """Demand the sorted list (lazy: tails are un-forced merge thunks)."""
    from .trees import LEAF, tree_of_list

    tree = tree_of_list(eng, sorter.builder, head_ref)
    key = sorter.sort.seed if tree is LEAF else tree.name
    return eng.force(eng.thunk(sorter.sort, key, tree))


def list_median(eng: Engine, sorter: "Sorter", head_ref: ARef):
    """Middle element of the sorted value sequence."""
    vals = list_values(eng, list_mergesort(eng, sorter, head_ref))
    if not vals:
        return None
    return vals[(len(vals) - 1) // 2]
