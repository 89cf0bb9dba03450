"""Probabilistic tries: incremental binary tries keyed by hash bits.

A trie node holds a name and two children behind reference cells; a leaf
holds its key's full bit string plus an opaque payload.  Lookup follows one
bit per level (true goes left); extension path-copies the spine, naming every
new node and reference by forking an *externally supplied* name, never a name
from the input trie.  That makes the pointer set of an extension a function
of (external name, bits) alone, so two runs that extend with the same names
reuse exactly the same cells even when the tries differ.

Tries are partial: paths may end in a nil mid-way, and a leaf may sit above
depth 64 when no other key shares its prefix.  Exact 64-bit hash collisions
are handled by the payload ``combine`` function (the map layer keeps a small
bucket of key/value pairs).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..engine import ARef, Engine, MemoFn
from ..hashing import content_hash
from ..names import Name, fork, fork4
from .lists import _resolve

BIT_LENGTH = 64


class _TrieNil:
    __slots__ = ()

    def __repr__(self):
        return "TRIE_NIL"

    def __content_hash__(self):
        return 0x7217


TRIE_NIL = _TrieNil()


@dataclass(frozen=True)
class TrieLeaf:
    bits: tuple  # the key's full bit path
    data: object

    def __content_hash__(self):
        return content_hash(("trieleaf", self.bits, self.data))


@dataclass(frozen=True)
class TrieBin:
    name: Name
    left: object  # ARef holding a trie
    right: object

    def __content_hash__(self):
        return content_hash(("triebin", self.name, self.left, self.right))


def bits_of(h: int, width: int = BIT_LENGTH) -> tuple:
    """Most-significant-first bit string of a hash."""
    return tuple(bool((h >> i) & 1) for i in range(width - 1, -1, -1))


def key_bits(key) -> tuple:
    return bits_of(content_hash(key))


def trie_find(eng: Engine, trie, bits):
    """Follow bits (true = left); returns the leaf payload or None."""
    bits = tuple(bits)
    depth = 0
    node = trie
    while True:
        if node is TRIE_NIL:
            return None
        if type(node) is TrieLeaf:
            if node.bits[depth:] == bits[depth:]:
                return node.data
            return None
        if depth >= len(bits):
            return None
        node = _resolve(eng, node.left if bits[depth] else node.right)
        depth += 1


def _replace(old, new):
    return new


def make_trie_extender(eng: Engine, seed: Name, combine=_replace) -> MemoFn:
    """Memoized path-copying extension that walks the whole given bit string.

    Every level allocates one recursion thunk and two child refs from the
    fork cascade off the external name, so the pointer set of an extension is
    exactly a function of (name, bit length) and never of the input trie.
    All extensions of one trie must use the same bit length.
    ``combine(old, new)`` resolves a write to an already-present key.
    """

    def body(m, arg):
        nm, trie, bits, depth, data = arg
        if depth == len(bits):
            if type(trie) is TrieLeaf:
                return TrieLeaf(bits, combine(trie.data, data))
            return TrieLeaf(bits, data)
        if type(trie) is TrieLeaf:
            raise ValueError("leaf above full depth: mixed bit lengths in one trie")
        n1, n2, n3, n4 = fork4(nm)
        if trie is TRIE_NIL:
            lt = rt = TRIE_NIL
        else:
            lt = _resolve(eng, trie.left)
            rt = _resolve(eng, trie.right)
        if bits[depth]:
            sub = eng.force(eng.thunk(m, n4, (n4, lt, bits, depth + 1, data)))
            return TrieBin(n1, eng.aref(n2, sub), eng.aref(n3, rt))
        sub = eng.force(eng.thunk(m, n4, (n4, rt, bits, depth + 1, data)))
        return TrieBin(n1, eng.aref(n2, lt), eng.aref(n3, sub))

    return eng.mk_mfn(seed, ("trie_extend", id(combine)), body)


def make_splitting_extender(eng: Engine, seed: Name, combine=_replace) -> MemoFn:
    """Shape-adaptive extension: paths stop as soon as keys are told apart.

    Used for interpreter-scale maps where full-length paths would dominate
    the running time; allocation names still come only from the external
    name, but the number of copied levels depends on the keys already
    present.
    """

    def body(m, arg):
        nm, trie, bits, depth, data = arg
        if type(trie) is TrieLeaf and trie.bits[depth:] == bits[depth:]:
            return TrieLeaf(bits, combine(trie.data, data))
        if trie is TRIE_NIL:
            return TrieLeaf(bits, data)
        if type(trie) is TrieLeaf:
            # split: walk both keys down to their first differing bit,
            # naming the chain from a fork cascade off the external name
            cursor = nm
            d = depth
            chain = []
            while trie.bits[d] == bits[d]:
                n1, n2, n3, n4 = fork4(cursor)
                chain.append((n1, n2, n3, bits[d]))
                cursor = n4
                d += 1
            n1, n2, n3, n4 = fork4(cursor)
            new_leaf = TrieLeaf(bits, data)
            if bits[d]:
                node = TrieBin(n1, eng.aref(n2, new_leaf), eng.aref(n3, trie))
            else:
                node = TrieBin(n1, eng.aref(n2, trie), eng.aref(n3, new_leaf))
            for bn, ln, rn, went_left in reversed(chain):
                if went_left:
                    node = TrieBin(bn, eng.aref(ln, node), eng.aref(rn, TRIE_NIL))
                else:
                    node = TrieBin(bn, eng.aref(ln, TRIE_NIL), eng.aref(rn, node))
            return node
        # TrieBin: path-copy one level and recurse on the taken side
        n1, n2, n3, n4 = fork4(nm)
        if bits[depth]:
            lt = _resolve(eng, trie.left)
            sub = eng.force(eng.thunk(m, n4, (n4, lt, bits, depth + 1, data)))
            return TrieBin(n1, eng.aref(n2, sub), eng.aref(n3, _resolve(eng, trie.right)))
        rt = _resolve(eng, trie.right)
        sub = eng.force(eng.thunk(m, n4, (n4, rt, bits, depth + 1, data)))
        return TrieBin(n1, eng.aref(n2, _resolve(eng, trie.left)), eng.aref(n3, sub))

    return eng.mk_mfn(seed, ("trie_extend", id(combine)), body)


def trie_extend(eng: Engine, m: MemoFn, nm: Name, trie, bits, data):
    """Extend under an external name; shares every untouched branch of the
    input trie."""
    bits = tuple(bits)
    return eng.force(eng.thunk(m, nm, (nm, trie, bits, 0, data)))


# ----------------------------------------------------------------------
# map layer (used by the interpreter's environments and stores)


def _bucket_combine(old, new):
    """Payloads are tuples of (key, value); update by key."""
    (k, v), = new
    rest = tuple(item for item in old if item[0] != k)
    return rest + ((k, v),)


def make_trie_map_extender(eng: Engine, seed: Name) -> MemoFn:
    return make_splitting_extender(eng, seed, combine=_bucket_combine)


def trie_map_put(eng: Engine, m: MemoFn, nm: Name, trie, key, value):
    return trie_extend(eng, m, nm, trie, key_bits(key), ((key, value),))


def trie_map_get(eng: Engine, trie, key):
    data = trie_find(eng, trie, key_bits(key))
    if data is None:
        return None
    for k, v in data:
        if k == key:
            return v
    return None


def trie_map_items(eng: Engine, trie) -> dict:
    """All key/value pairs (walks the whole trie)."""
    out = {}
    stack = [trie]
    while stack:
        node = stack.pop()
        if node is TRIE_NIL:
            continue
        if type(node) is TrieLeaf:
            for k, v in node.data:
                out[k] = v
            continue
        stack.append(_resolve(eng, node.left))
        stack.append(_resolve(eng, node.right))
    return out
