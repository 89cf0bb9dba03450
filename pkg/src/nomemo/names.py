"""First-class names, namespaces, and pointers.

A name is a path in an infinite binary tree: the root ``•`` plus a sequence
of left/right fork steps.  Forking is deterministic (``fork(n)`` always
returns the same pair), which is what lets an allocation in one run line up
with "the same" allocation in the next run.  Names, namespaces, and pointers
are immutable values with precomputed 64-bit digests; equality compares the
digest before falling back to the structure.
"""

from __future__ import annotations

from .hashing import MASK64, combine, mix64

_ROOT_DIGEST = mix64(0x1CE_0F_0DD)
_FORK1_TAG = 0x517CC1B727220A95
_FORK2_TAG = 0x2545F4914F6CDD1D


class Name:
    """A binary fork path rooted at ``•``.

    ``step`` is 0 for the root, 1 or 2 for a fork child; ``tail`` is the
    parent name.  ``tail_hash`` stores the tail's digest so disequality can
    short-circuit without walking the whole path.
    """

    __slots__ = ("step", "tail", "tail_hash", "digest", "_forked", "_pyhash")

    def __init__(self, step: int, tail: "Name | None"):
        self.step = step
        self.tail = tail
        if tail is None:
            self.tail_hash = 0
            self.digest = _ROOT_DIGEST
        else:
            self.tail_hash = tail.digest
            tag = _FORK1_TAG if step == 1 else _FORK2_TAG
            self.digest = mix64(tail.digest ^ tag)
        self._forked = None
        self._pyhash = self.digest ^ (self.digest >> 32)

    def __hash__(self):
        return self._pyhash

    def __eq__(self, other):
        if self is other:
            return True
        if type(other) is not Name:
            return NotImplemented
        # Hash first (the common case is disequality), tails on collision.
        a, b = self, other
        while True:
            if a is b:
                return True
            if a.step != b.step or a.tail_hash != b.tail_hash or a.digest != b.digest:
                return False
            a, b = a.tail, b.tail
            if a is None or b is None:
                return a is b

    def __repr__(self):
        return f"Name({self.render()})"

    def render(self) -> str:
        """Dot-path rendering, e.g. ``•.1.2.1``."""
        steps = []
        n = self
        while n.tail is not None:
            steps.append(str(n.step))
            n = n.tail
        steps.append("•")
        return ".".join(reversed(steps))

    def __content_hash__(self):
        return self.digest


ROOT_NAME = Name(0, None)


def fork(n: Name) -> tuple[Name, Name]:
    """Split a name into its two children; deterministic and cached."""
    pair = n._forked
    if pair is None:
        pair = (Name(1, n), Name(2, n))
        n._forked = pair
    return pair


def fork4(n: Name) -> tuple[Name, Name, Name, Name]:
    """The four grandchildren of ``n``: fork(fork(n).1) ++ fork(fork(n).2)."""
    a, b = fork(n)
    a1, a2 = fork(a)
    b1, b2 = fork(b)
    return a1, a2, b1, b2


def name_eq(a: Name, b: Name) -> bool:
    return a == b


def _descend_bits(base: Name, bits: int, width: int) -> Name:
    """Walk ``width`` fork steps chosen by the bits of ``bits``, MSB first."""
    n = base
    for i in range(width - 1, -1, -1):
        n = fork(n)[(bits >> i) & 1]
    return n


# Reserved subtrees.  Both bases are 64 pseudo-random fork steps below the
# root, so breadth-first user exploration of the name tree never lands on
# them, and the two are disjoint from each other.
_FRESH_BASE = _descend_bits(ROOT_NAME, mix64(0xF5E5), 64)
_CONTENT_BASE = _descend_bits(ROOT_NAME, mix64(0xC0117E17), 64)

_content_cache: dict[int, Name] = {}


def name_of_content(content_hash: int) -> Name:
    """Name deterministically derived from a 64-bit content hash.

    Lives in a reserved subtree disjoint from fresh names and user forks, so
    structural (hash-based) allocation never collides with nominal use.
    """
    content_hash &= MASK64
    n = _content_cache.get(content_hash)
    if n is None:
        n = _descend_bits(_CONTENT_BASE, content_hash, 64)
        _content_cache[content_hash] = n
    return n


def with_index(base: Name, index: int) -> Name:
    """Descend from ``base`` along a self-delimiting encoding of ``index``.

    The resulting names form an antichain: no result is an ancestor of
    another, so forking one can never produce another.  (Encoding: for
    c = index + 1 with bit length L, walk L-1 first-children, one second
    child, then the L-1 low bits of c.)
    """
    if index < 0:
        raise ValueError("index must be non-negative")
    c = index + 1
    length = c.bit_length()
    n = base
    for _ in range(length - 1):
        n = fork(n)[0]
    n = fork(n)[1]
    for i in range(length - 2, -1, -1):
        n = fork(n)[(c >> i) & 1]
    return n


class NameSupply:
    """Deterministic source of fresh names (one per engine instance).

    The paper-style ``new`` is nondeterministic; for reproducible tests a
    hidden counter indexes leaves of a reserved subtree instead.  ``reset``
    rewinds the counter so a harness can replay a run.  The leaves are an
    antichain, so user forks of one fresh name never collide with another.
    """

    __slots__ = ("_counter",)

    def __init__(self):
        self._counter = 0

    def fresh(self) -> Name:
        c = self._counter
        self._counter = c + 1
        return with_index(_FRESH_BASE, c)

    def reset(self, counter: int = 0) -> None:
        self._counter = counter


_default_supply = NameSupply()


def fresh_name(supply: NameSupply | None = None) -> Name:
    """A name distinct from every previous fresh name and every user fork."""
    return (supply or _default_supply).fresh()


class Namespace:
    """``Top`` or a parent namespace extended with a seed name."""

    __slots__ = ("parent", "seed", "digest", "_pyhash")

    def __init__(self, parent: "Namespace | None", seed: Name | None):
        self.parent = parent
        self.seed = seed
        if parent is None:
            self.digest = mix64(0x70505)
        else:
            self.digest = combine(parent.digest, seed.digest)
        self._pyhash = self.digest ^ (self.digest >> 32)

    def __hash__(self):
        return self._pyhash

    def __eq__(self, other):
        if self is other:
            return True
        if type(other) is not Namespace:
            return NotImplemented
        if self.digest != other.digest:
            return False
        if self.parent is None or other.parent is None:
            return self.parent is other.parent
        return self.seed == other.seed and self.parent == other.parent

    def __repr__(self):
        return f"Namespace({self.render()})"

    def render(self) -> str:
        """Slash-separated path, e.g. ``⊤/•.1/•.2.2``."""
        if self.parent is None:
            return "⊤"
        return f"{self.parent.render()}/{self.seed.render()}"

    def __content_hash__(self):
        return self.digest


TOP = Namespace(None, None)


def make_namespace(current: Namespace, seed: Name) -> Namespace:
    return Namespace(current, seed)


class Pointer:
    """A name paired with the namespace it was allocated in."""

    __slots__ = ("name", "namespace", "digest", "_pyhash")

    def __init__(self, name: Name, namespace: Namespace):
        self.name = name
        self.namespace = namespace
        self.digest = combine(name.digest, namespace.digest)
        self._pyhash = self.digest ^ (self.digest >> 32)

    def __hash__(self):
        return self._pyhash

    def __eq__(self, other):
        if self is other:
            return True
        if type(other) is not Pointer:
            return NotImplemented
        return (
            self.digest == other.digest
            and self.name == other.name
            and self.namespace == other.namespace
        )

    def __repr__(self):
        return f"Pointer({self.render()})"

    def render(self) -> str:
        return f"{self.name.render()}@{self.namespace.render()}"

    def __content_hash__(self):
        return self.digest


class _RootPointer:
    """Sentinel for the top-level force context; never maps to a node."""

    __slots__ = ()

    def render(self) -> str:
        return "root"

    def __repr__(self):
        return "RootPointer"

    def __content_hash__(self):
        return mix64(0x4007)


ROOT_POINTER = _RootPointer()
