"""The demanded computation graph (DCG).

Nodes are reference cells or thunks, addressed by pointers.  Edges record
which thunk allocated or observed which node, each with a clean/dirty status.
Mutation dirties all edges on paths into the changed node; demand-driven
repair (``repair``) re-verifies or re-executes thunks and scrubs edges back
to clean.  The graph also owns the force stack used for the ambiguous-name
check, reference counts with an explicit ``flush``, a well-formedness
validator, and DOT export.

A graph instance is single-threaded; values taken out of it are immutable.
"""

from __future__ import annotations

from collections import Counter

from .errors import AmbiguousName, NameKindClash
from .names import ROOT_POINTER, Pointer

REF = 0
THUNK = 1

ALLOC_REF = "alloc_ref"
ALLOC_THUNK = "alloc_thunk"
OBS_REF = "obs_ref"
OBS_THUNK = "obs_thunk"

_ABSENT = object()


class Edge:
    __slots__ = ("source", "kind", "payload", "dirty", "target")

    def __init__(self, source, kind, payload, target):
        self.source = source
        self.kind = kind
        self.payload = payload
        self.dirty = False
        self.target = target

    def __repr__(self):
        status = "dirty" if self.dirty else "clean"
        return f"Edge({self.source.render()} -{self.kind}/{status}-> {self.target.render()})"


class NodeRecord:
    __slots__ = (
        "kind",
        "value",
        "computation",
        "arg_key",
        "cache",
        "outgoing",
        "incoming",
        "refcount",
        "stack_count",
    )

    def __init__(self, kind):
        self.kind = kind
        self.value = None
        self.computation = None
        self.arg_key = None
        self.cache = _ABSENT
        self.outgoing = []
        self.incoming = set()
        self.refcount = 0
        self.stack_count = 0

    def has_cache(self):
        return self.cache is not _ABSENT


class _RootRecord:
    """Out-edges of the top-level force context.

    The outer layer re-demands the same nodes over and over, so root edges
    are deduplicated by (kind, target): re-observation refreshes the payload
    and status instead of appending.
    """

    __slots__ = ("outgoing", "index")

    def __init__(self):
        self.outgoing = []
        self.index = {}


class Graph:
    def __init__(self):
        self.nodes: dict[Pointer, NodeRecord] = {}
        self.root = _RootRecord()
        self.force_stack: list[Pointer] = []
        self.edge_count = 0
        self.dirty_edge_count = 0
        self.dirtied_total = 0
        self.executions = 0
        self.scrubs = 0
        self.epoch = 0

    # ------------------------------------------------------------------
    # force stack

    def push_force(self, q: Pointer) -> None:
        self.force_stack.append(q)
        self.nodes[q].stack_count += 1

    def pop_force(self) -> None:
        q = self.force_stack.pop()
        self.nodes[q].stack_count -= 1

    def current_source(self):
        return self.force_stack[-1] if self.force_stack else ROOT_POINTER

    def in_force(self) -> bool:
        return bool(self.force_stack)

    # ------------------------------------------------------------------
    # node mutation

    def put_ref(self, q: Pointer, v) -> str:
        """Create or overwrite a reference cell; returns created/unchanged/overwritten."""
        rec = self.nodes.get(q)
        if rec is None:
            rec = NodeRecord(REF)
            rec.value = v
            self.nodes[q] = rec
            return "created"
        if rec.kind is not REF:
            raise NameKindClash(f"{q.render()} holds a thunk, cannot put_ref")
        if rec.value == v:
            return "unchanged"
        old = rec.value
        rec.value = v
        self.dirty_paths_to(q, old=old, new=v)
        return "overwritten"

    def put_thunk(self, q: Pointer, computation, arg_key=None) -> str:
        """Create, reuse, or overwrite a thunk; returns created/reused/overwritten.

        Reuse requires both the computation identity and the argument key to
        match; a reused thunk keeps its cached result.
        """
        rec = self.nodes.get(q)
        if rec is None:
            rec = NodeRecord(THUNK)
            rec.computation = computation
            rec.arg_key = arg_key
            self.nodes[q] = rec
            return "created"
        if rec.kind is not THUNK:
            raise NameKindClash(f"{q.render()} holds a ref cell, cannot put_thunk")
        if rec.computation == computation and rec.arg_key == arg_key:
            return "reused"
        old = (rec.computation, rec.arg_key)
        rec.computation = computation
        rec.arg_key = arg_key
        rec.cache = _ABSENT
        self.dirty_paths_to(q, old=old, new=(computation, arg_key))
        return "overwritten"

    # ------------------------------------------------------------------
    # dirtying and cleaning

    def dirty_paths_to(self, q: Pointer, old=None, new=None) -> int:
        """Mark every edge on a path into ``q`` dirty; returns new transitions.

        Traversal stops at already-dirty edges (their upstream was dirtied
        when they were).  Raises AmbiguousName if a dirtied edge's source is
        on the force stack.
        """
        count = 0
        stack = [q]
        nodes = self.nodes
        while stack:
            p = stack.pop()
            rec = nodes.get(p)
            if rec is None:
                continue
            for e in rec.incoming:
                if e.dirty:
                    continue
                e.dirty = True
                count += 1
                self.dirty_edge_count += 1
                src = e.source
                if src is not ROOT_POINTER:
                    if nodes[src].stack_count:
                        self.dirtied_total += count
                        self.epoch += 1
                        raise AmbiguousName(q, src, old=old, new=new)
                    stack.append(src)
        if count:
            self.dirtied_total += count
            self.epoch += 1
        return count

    def delete_edges_out(self, q: Pointer) -> None:
        rec = self.nodes[q]
        for e in rec.outgoing:
            trec = self.nodes.get(e.target)
            if trec is not None:
                trec.incoming.discard(e)
                trec.refcount -= 1
            if e.dirty:
                self.dirty_edge_count -= 1
            self.edge_count -= 1
        rec.outgoing = []

    def all_clean_out(self, q: Pointer) -> bool:
        for e in self.nodes[q].outgoing:
            if e.dirty:
                return False
        return True

    def consistent_action(self, kind, payload, q: Pointer) -> bool:
        """Does the recorded action still match the current contents of q?"""
        rec = self.nodes.get(q)
        if rec is None:
            return False
        if kind is OBS_REF or kind is ALLOC_REF:
            return rec.kind is REF and rec.value == payload
        if kind is OBS_THUNK:
            return rec.kind is THUNK and rec.cache is not _ABSENT and rec.cache == payload
        if kind is ALLOC_THUNK:
            return (
                rec.kind is THUNK
                and rec.computation == payload[0]
                and rec.arg_key == payload[1]
            )
        raise ValueError(kind)

    def scrub_edge(self, e: Edge) -> str:
        """Clean one dirty edge if its target is verified; else reject."""
        assert e.dirty
        if self.all_clean_out(e.target) and self.consistent_action(e.kind, e.payload, e.target):
            e.dirty = False
            self.dirty_edge_count -= 1
            self.scrubs += 1
            self.epoch += 1
            return "cleaned"
        return "rejected"

    # ------------------------------------------------------------------
    # edges

    def add_edge(self, source, kind, payload, target: Pointer) -> Edge:
        if source is ROOT_POINTER:
            key = (kind, target)
            e = self.root.index.get(key)
            if e is not None:
                e.payload = payload
                if e.dirty:
                    e.dirty = False
                    self.dirty_edge_count -= 1
                return e
            e = Edge(source, kind, payload, target)
            self.root.outgoing.append(e)
            self.root.index[key] = e
        else:
            e = Edge(source, kind, payload, target)
            self.nodes[source].outgoing.append(e)
        trec = self.nodes[target]
        trec.incoming.add(e)
        trec.refcount += 1
        self.edge_count += 1
        return e

    # ------------------------------------------------------------------
    # space management

    def incref(self, q: Pointer) -> None:
        self.nodes[q].refcount += 1

    def decref(self, q: Pointer) -> None:
        rec = self.nodes[q]
        if rec.refcount <= 0:
            raise ValueError(f"decref of {q.render()} below zero")
        rec.refcount -= 1

    def flush(self) -> int:
        """Remove every zero-count node, transitively; returns removal count.

        Nodes on the force stack are never removed.  Deleting a node deletes
        its out-edges, decrementing their targets, which may cascade.
        """
        worklist = [
            p
            for p, rec in self.nodes.items()
            if rec.refcount == 0 and rec.stack_count == 0 and not rec.incoming
        ]
        removed = 0
        while worklist:
            p = worklist.pop()
            rec = self.nodes.get(p)
            if rec is None or rec.refcount != 0 or rec.stack_count or rec.incoming:
                continue
            targets = [e.target for e in rec.outgoing]
            self.delete_edges_out(p)
            del self.nodes[p]
            removed += 1
            for t in targets:
                trec = self.nodes.get(t)
                if trec is not None and trec.refcount == 0 and not trec.stack_count and not trec.incoming:
                    worklist.append(t)
        if removed:
            self.epoch += 1
        return removed

    # ------------------------------------------------------------------
    # validation

    def check_well_formed(self, deep: bool = False, reevaluator=None) -> list[str]:
        """Return a list of violation descriptions (empty when well-formed).

        Checks: structural invariants (edge endpoints, back-links, stack
        flags, action/node-kind discipline), transitive dirtiness (a node
        with a dirty out-edge has all incoming edges dirty), and that every
        clean edge is consistent with a clean-out target.  With ``deep`` a
        caller-supplied ``reevaluator(graph, pointer) -> bool`` revalidates
        cached thunk results.
        """
        out = []
        nodes = self.nodes
        incoming_seen = {p: set() for p in nodes}
        sources = [(ROOT_POINTER, self.root)] + [
            (p, rec) for p, rec in nodes.items() if rec.kind is THUNK
        ]
        for p, rec in nodes.items():
            if rec.kind is REF and rec.outgoing:
                out.append(f"ref {p.render()} has outgoing edges")
            if rec.kind is REF and rec.cache is not _ABSENT:
                out.append(f"ref {p.render()} carries a cache")
        for src, rec in sources:
            for e in rec.outgoing:
                if e.source != src:
                    out.append(f"edge {e!r} filed under wrong source {src.render()}")
                trec = nodes.get(e.target)
                if trec is None:
                    out.append(f"edge {e!r} targets a missing node")
                    continue
                incoming_seen[e.target].add(e)
                if e.kind in (ALLOC_REF, OBS_REF) and trec.kind is not REF:
                    out.append(f"{e.kind} edge into thunk {e.target.render()}")
                if e.kind in (ALLOC_THUNK, OBS_THUNK) and trec.kind is not THUNK:
                    out.append(f"{e.kind} edge into ref {e.target.render()}")
                if not e.dirty:
                    if not self.all_clean_out(e.target):
                        out.append(
                            f"clean edge {e!r} into node with a dirty out-edge"
                        )
                    if not self.consistent_action(e.kind, e.payload, e.target):
                        out.append(f"clean edge {e!r} is stale")
        for p, rec in nodes.items():
            if rec.incoming != incoming_seen[p]:
                out.append(f"back-links of {p.render()} disagree with out-edge lists")
            if rec.kind is THUNK and any(e.dirty for e in rec.outgoing):
                for e in rec.incoming:
                    if not e.dirty:
                        out.append(
                            f"node {p.render()} has a dirty out-edge but clean "
                            f"incoming edge from {e.source.render()}"
                        )
        stack_counts = Counter(self.force_stack)
        for p, rec in nodes.items():
            if rec.stack_count != stack_counts.get(p, 0):
                out.append(f"on-stack flag of {p.render()} disagrees with the stack")
        if deep and reevaluator is not None:
            for p, rec in nodes.items():
                if rec.kind is THUNK and rec.cache is not _ABSENT and self.all_clean_out(p):
                    if not reevaluator(self, p):
                        out.append(f"cached result of {p.render()} fails re-evaluation")
        return out

    # ------------------------------------------------------------------
    # reporting

    STATS_HEADER = "nodes,edges,dirty_edges,reexec"

    def stats_row(self) -> str:
        return f"{len(self.nodes)},{self.edge_count},{self.dirty_edge_count},{self.executions}"

    def export_dot(self) -> str:
        """Deterministic DOT rendering; dirty edges are dashed red."""
        lines = ["digraph dcg {", "  rankdir=TB;"]
        items = sorted(self.nodes.items(), key=lambda kv: kv[0].render())
        ids = {p: f"n{i}" for i, (p, _) in enumerate(items)}
        for p, rec in items:
            if rec.kind is REF:
                label = f"{p.render()}\\nref"
                shape = "box"
            else:
                label = f"{p.render()}\\nthunk" + (" (cached)" if rec.has_cache() else "")
                shape = "ellipse"
            lines.append(f'  {ids[p]} [label="{label}" shape={shape}];')
        has_root = bool(self.root.outgoing)
        if has_root:
            lines.append('  root [label="root" shape=diamond];')
        sources = [(self.root, "root")] if has_root else []
        sources += [(rec, ids[p]) for p, rec in items if rec.outgoing]
        for rec, src_id in sources:
            for e in rec.outgoing:
                style = ' style=dashed color=red' if e.dirty else ""
                tag = "alloc" if e.kind in (ALLOC_REF, ALLOC_THUNK) else "obs"
                lines.append(f'  {src_id} -> {ids[e.target]} [label="{tag}"{style}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# demand-driven repair


class _Frame:
    __slots__ = ("q", "idx", "waiting")

    def __init__(self, q):
        self.q = q
        self.idx = 0
        self.waiting = False


def execute(g: Graph, q: Pointer, run_body) -> object:
    """Re-execute a thunk: drop its old edges, run its body with q on the
    force stack, store the fresh cache."""
    rec = g.nodes[q]
    g.delete_edges_out(q)
    rec.cache = _ABSENT
    g.push_force(q)
    try:
        result = run_body(q, rec)
    finally:
        g.pop_force()
    if not g.all_clean_out(q):
        # The rules demand all out-edges clean when a recomputation is
        # popped; a dirty one here means a nominal match slipped past the
        # stack check.
        raise AmbiguousName(q, q, old=rec.computation, new=rec.computation)
    rec.cache = result
    g.executions += 1
    g.epoch += 1
    return result


def repair(g: Graph, q0: Pointer, run_body) -> object:
    """Bring thunk ``q0`` to a clean, cached state and return its result.

    Walks dirty out-edges in creation order; for each, the target is first
    made consistent (repairing nested thunks), then the edge is scrubbed.
    The first failed scrub re-executes the node.  Iterative so that repair
    chains as long as the input (e.g. list spines) do not recurse natively;
    only genuine body re-execution re-enters Python.
    """
    nodes = g.nodes
    rec0 = nodes[q0]
    if rec0.cache is not _ABSENT and g.all_clean_out(q0):
        return rec0.cache
    frames = [_Frame(q0)]
    g.push_force(q0)
    try:
        while frames:
            fr = frames[-1]
            rec = nodes[fr.q]
            if rec.cache is _ABSENT:
                execute(g, fr.q, run_body)
                frames.pop()
                g.pop_force()
                continue
            out = rec.outgoing
            descended = False
            while fr.idx < len(out):
                e = out[fr.idx]
                if not e.dirty:
                    fr.idx += 1
                    continue
                trec = nodes.get(e.target)
                if trec is not None and trec.kind is THUNK and not fr.waiting:
                    needs_child = not g.all_clean_out(e.target) or (
                        e.kind is OBS_THUNK and trec.cache is _ABSENT
                    )
                    if needs_child:
                        fr.waiting = True
                        frames.append(_Frame(e.target))
                        g.push_force(e.target)
                        descended = True
                        break
                fr.waiting = False
                if g.scrub_edge(e) == "cleaned":
                    fr.idx += 1
                    continue
                execute(g, fr.q, run_body)
                break
            if descended:
                continue
            frames.pop()
            g.pop_force()
    except BaseException:
        while frames:
            frames.pop()
            g.pop_force()
        raise
    return nodes[q0].cache
