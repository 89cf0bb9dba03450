"""User-facing incremental API.

Memoized functions coupled to namespaces, named thunks and reference cells,
``force`` with change propagation, and outer-layer mutation via ``set``.  One
engine owns one graph and runs on one thread.

Two matching modes:

* ``NOMINAL`` uses the names the caller supplies, so reuse follows the
  programmer's naming pattern.
* ``STRUCTURAL`` ignores supplied names and derives them from a content hash
  of the allocated value (hash-consing), the classic baseline.

Body functions must be pure except for engine operations; this is a
documented contract, not enforced.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from . import graph as dcg
from .errors import BodyMismatch, InnerMutation, WellFormednessError
from .hashing import content_hash
from .names import (
    TOP,
    Name,
    NameSupply,
    Namespace,
    Pointer,
    make_namespace,
    name_of_content,
)

NOMINAL = "nominal"
STRUCTURAL = "structural"


class MemoFn:
    """A memoized function: a body coupled to its own namespace.

    ``body`` takes ``(mfn, arg)`` and may recurse through ``mfn.thunk`` /
    ``mfn.call``.  At most one memo table exists per (engine, seed name);
    recreating with a different ``body_id`` is a runtime error.
    """

    __slots__ = ("engine", "seed", "body_id", "body", "namespace", "table")

    def __init__(self, engine, seed: Name, body_id, body):
        self.engine = engine
        self.seed = seed
        self.body_id = body_id
        self.body = body
        self.namespace = make_namespace(TOP, seed)
        self.table: dict[Name, Pointer] = {}

    def thunk(self, k: Name, arg) -> "AThunk":
        return self.engine.thunk(self, k, arg)

    def call(self, arg):
        return self.engine.call(self, arg)

    def __repr__(self):
        return f"MemoFn({self.body_id!r})"


class _Suspended:
    """What a thunk node runs: a memo function applied to an argument."""

    __slots__ = ("mfn",)

    def __init__(self, mfn):
        self.mfn = mfn

    def __eq__(self, other):
        return type(other) is _Suspended and self.mfn is other.mfn

    def __hash__(self):
        return id(self.mfn)

    def __repr__(self):
        return f"Suspended({self.mfn.body_id!r})"


@dataclass(frozen=True)
class AThunk:
    pointer: Pointer

    def __content_hash__(self):
        return self.pointer.digest


@dataclass(frozen=True)
class ARef:
    pointer: Pointer

    def __content_hash__(self):
        return self.pointer.digest


@dataclass
class Stats:
    re_executions: int = 0
    cache_hits: int = 0
    allocations: int = 0

    def snapshot(self) -> tuple[int, int, int]:
        return (self.re_executions, self.cache_hits, self.allocations)


class Engine:
    """One incremental session: a graph, memo tables, counters, a name supply.

    ``validate=True`` re-checks graph well-formedness after every outer-layer
    operation that dirtied or repaired something (used by the test suite).
    The ``NOMEMO_VALIDATE`` environment variable turns it on globally.
    """

    def __init__(self, mode: str = NOMINAL, validate: bool | None = None):
        if mode not in (NOMINAL, STRUCTURAL):
            raise ValueError(mode)
        self.mode = mode
        self.graph = dcg.Graph()
        self.tables: dict[Name, MemoFn] = {}
        self.stats = Stats()
        self.names = NameSupply()
        if validate is None:
            validate = bool(os.environ.get("NOMEMO_VALIDATE"))
        self.validate = validate
        self._validated_epoch = 0

    # ------------------------------------------------------------------
    # names

    def fresh_name(self) -> Name:
        return self.names.fresh()

    def _current_namespace(self) -> Namespace:
        top = self.graph.current_source()
        if isinstance(top, Pointer):
            return top.namespace
        return TOP

    # ------------------------------------------------------------------
    # memo tables

    def mk_mfn(self, seed: Name, body_id, body) -> MemoFn:
        existing = self.tables.get(seed)
        if existing is not None:
            if existing.body_id != body_id:
                raise BodyMismatch(
                    f"memo table under {seed.render()} already bound to "
                    f"{existing.body_id!r}, not {body_id!r}"
                )
            return existing
        mfn = MemoFn(self, seed, body_id, body)
        self.tables[seed] = mfn
        return mfn

    # ------------------------------------------------------------------
    # allocation

    def thunk(self, m: MemoFn, k: Name, arg) -> AThunk:
        if self.mode == STRUCTURAL:
            k = name_of_content(content_hash((content_hash(m.body_id), arg)))
        q = Pointer(k, m.namespace)
        g = self.graph
        outcome = g.put_thunk(q, _Suspended(m), arg)
        if outcome == "created":
            m.table[k] = q
            g.incref(q)
            self.stats.allocations += 1
        g.add_edge(g.current_source(), dcg.ALLOC_THUNK, (_Suspended(m), arg), q)
        self._maybe_validate()
        return AThunk(q)

    def aref(self, k: Name, v) -> ARef:
        # Structural naming consolidates inner allocations only: outer-layer
        # cells are the mutable inputs, and hash-consing them would alias the
        # cell being edited with its replacement.
        if self.mode == STRUCTURAL and self.graph.in_force():
            k = name_of_content(content_hash(v))
        q = Pointer(k, self._current_namespace())
        g = self.graph
        outcome = g.put_ref(q, v)
        if outcome == "created":
            g.incref(q)
            self.stats.allocations += 1
        g.add_edge(g.current_source(), dcg.ALLOC_REF, v, q)
        self._maybe_validate()
        return ARef(q)

    # ------------------------------------------------------------------
    # demand

    def _run_body(self, q: Pointer, rec) -> object:
        self.stats.re_executions += 1
        mfn = rec.computation.mfn
        return mfn.body(mfn, rec.arg_key)

    def force(self, t: AThunk):
        g = self.graph
        q = t.pointer
        rec = g.nodes[q]
        if rec.has_cache() and g.all_clean_out(q):
            self.stats.cache_hits += 1
            result = rec.cache
        else:
            result = dcg.repair(g, q, self._run_body)
        g.add_edge(g.current_source(), dcg.OBS_THUNK, result, q)
        self._maybe_validate()
        return result

    def get(self, r: ARef):
        g = self.graph
        rec = g.nodes[r.pointer]
        v = rec.value
        g.add_edge(g.current_source(), dcg.OBS_REF, v, r.pointer)
        return v

    def set(self, r: ARef, v) -> None:
        g = self.graph
        if g.in_force():
            raise InnerMutation(f"set of {r.pointer.render()} inside a force")
        rec = g.nodes[r.pointer]
        if rec.value == v:
            return
        old = rec.value
        rec.value = v
        g.dirty_paths_to(r.pointer, old=old, new=v)
        self._maybe_validate()

    def call(self, m: MemoFn, arg):
        """memo shorthand: force a thunk whose name is derived from its content."""
        k = name_of_content(content_hash((content_hash(m.body_id), arg)))
        return self.force(self.thunk(m, k, arg))

    # ------------------------------------------------------------------
    # space management

    def incref(self, t: AThunk | ARef) -> None:
        self.graph.incref(t.pointer)

    def decref(self, t: AThunk | ARef) -> None:
        self.graph.decref(t.pointer)

    def flush(self) -> int:
        removed = self.graph.flush()
        if removed:
            for mfn in self.tables.values():
                mfn.table = {k: p for k, p in mfn.table.items() if p in self.graph.nodes}
        self._maybe_validate()
        return removed

    # ------------------------------------------------------------------
    # validation hook

    def _maybe_validate(self) -> None:
        if not self.validate:
            return
        g = self.graph
        if g.in_force() or g.epoch == self._validated_epoch:
            return
        self._validated_epoch = g.epoch
        violations = g.check_well_formed()
        if violations:
            raise WellFormednessError(violations)
