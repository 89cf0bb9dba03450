import pytest

from nomemo import AmbiguousName, NameKindClash, ROOT_NAME, TOP, Pointer, fork
from nomemo.graph import (
    ALLOC_REF,
    ALLOC_THUNK,
    OBS_REF,
    OBS_THUNK,
    Graph,
)


def ptr(bits, depth=4):
    n = ROOT_NAME
    for i in range(depth):
        n = fork(n)[(bits >> i) & 1]
    return Pointer(n, TOP)


P = [ptr(i) for i in range(16)]


def test_put_ref_lifecycle():
    g = Graph()
    assert g.put_ref(P[0], 1) == "created"
    assert g.put_ref(P[0], 1) == "unchanged"
    assert g.put_ref(P[0], 2) == "overwritten"
    assert g.nodes[P[0]].value == 2


def test_kind_discipline():
    g = Graph()
    g.put_thunk(P[0], "comp", None)
    with pytest.raises(NameKindClash):
        g.put_ref(P[0], 1)
    g.put_ref(P[1], 1)
    with pytest.raises(NameKindClash):
        g.put_thunk(P[1], "comp", None)


def test_put_thunk_reuse_keeps_cache():
    g = Graph()
    assert g.put_thunk(P[0], "comp", 7) == "created"
    g.nodes[P[0]].cache = "result"
    assert g.put_thunk(P[0], "comp", 7) == "reused"
    assert g.nodes[P[0]].cache == "result"
    assert g.put_thunk(P[0], "comp", 8) == "overwritten"
    assert not g.nodes[P[0]].has_cache()


def chain(g, n):
    """Build cached thunks t0 -> t1 -> ... -> t(n-1) -> ref."""
    r = P[15]
    g.put_ref(r, 0)
    thunks = [P[i] for i in range(n)]
    for t in thunks:
        g.put_thunk(t, f"c{t.render()}", None)
        g.nodes[t].cache = "t"
    for a, b in zip(thunks, thunks[1:]):
        g.add_edge(a, OBS_THUNK, "t", b)
    g.add_edge(thunks[-1], OBS_REF, 0, r)
    return thunks, r


def test_dirty_paths_chain():
    g = Graph()
    thunks, r = chain(g, 3)
    assert g.dirty_paths_to(r) == 3
    assert g.dirty_paths_to(r) == 0  # idempotent
    assert g.dirty_edge_count == 3


def test_dirty_paths_diamond():
    g = Graph()
    for p in P[:4]:
        g.put_thunk(p, p.render(), None)
    # p0 -> p1 -> p3, p0 -> p2 -> p3: all 4 edges lie on a path into p3
    g.add_edge(P[0], OBS_THUNK, "t", P[1])
    g.add_edge(P[0], OBS_THUNK, "t", P[2])
    g.add_edge(P[1], OBS_THUNK, "t", P[3])
    g.add_edge(P[2], OBS_THUNK, "t", P[3])
    assert g.dirty_paths_to(P[3]) == 4


def test_dirty_on_stack_raises_ambiguity():
    g = Graph()
    thunks, r = chain(g, 2)
    g.push_force(thunks[0])
    with pytest.raises(AmbiguousName):
        g.put_ref(r, 99)
    g.pop_force()


def test_delete_edges_out():
    g = Graph()
    thunks, r = chain(g, 3)
    assert len(g.nodes[thunks[0]].outgoing) == 1
    before = g.nodes[thunks[1]].refcount
    g.delete_edges_out(thunks[0])
    assert g.nodes[thunks[0]].outgoing == []
    assert g.nodes[thunks[1]].refcount == before - 1
    # other nodes' edges unchanged
    assert len(g.nodes[thunks[1]].outgoing) == 1
    g.delete_edges_out(thunks[0])  # no-op


def test_all_clean_out_and_scrub():
    g = Graph()
    g.put_thunk(P[0], "c", None)
    g.put_ref(P[1], 5)
    assert g.all_clean_out(P[0])  # vacuous
    e = g.add_edge(P[0], OBS_REF, 5, P[1])
    assert g.all_clean_out(P[0])
    g.dirty_paths_to(P[1])
    assert not g.all_clean_out(P[0])
    assert g.scrub_edge(e) == "cleaned"
    assert g.all_clean_out(P[0])


def test_scrub_rejects_stale_value():
    g = Graph()
    g.put_thunk(P[0], "c", None)
    g.put_ref(P[1], 5)
    e = g.add_edge(P[0], OBS_REF, 5, P[1])
    g.put_ref(P[1], 6)
    assert e.dirty
    assert g.scrub_edge(e) == "rejected"
    assert e.dirty


def test_scrub_rejects_dirty_target():
    g = Graph()
    g.put_thunk(P[0], "a", None)
    g.put_thunk(P[1], "b", None)
    g.nodes[P[1]].cache = "t"
    g.put_ref(P[2], 1)
    e_ab = g.add_edge(P[0], OBS_THUNK, "t", P[1])
    g.add_edge(P[1], OBS_REF, 1, P[2])
    g.put_ref(P[2], 2)
    assert g.scrub_edge(e_ab) == "rejected"


def test_consistent_action():
    g = Graph()
    g.put_ref(P[0], 5)
    g.put_thunk(P[1], "comp", "arg")
    assert g.consistent_action(OBS_REF, 5, P[0])
    assert not g.consistent_action(OBS_REF, 6, P[0])
    assert g.consistent_action(ALLOC_REF, 5, P[0])
    assert not g.consistent_action(OBS_THUNK, "t", P[1])  # no cache yet
    g.nodes[P[1]].cache = "t"
    assert g.consistent_action(OBS_THUNK, "t", P[1])
    assert g.consistent_action(ALLOC_THUNK, ("comp", "arg"), P[1])
    assert not g.consistent_action(ALLOC_THUNK, ("comp", "other"), P[1])


def test_push_pop_force_flags():
    g = Graph()
    g.put_thunk(P[0], "a", None)
    g.put_thunk(P[1], "b", None)
    g.push_force(P[0])
    g.push_force(P[1])
    assert g.nodes[P[0]].stack_count == 1
    assert g.nodes[P[1]].stack_count == 1
    g.pop_force()
    g.pop_force()
    assert g.nodes[P[0]].stack_count == 0
    assert g.nodes[P[1]].stack_count == 0


def test_check_well_formed_clean_graph():
    g = Graph()
    chain(g, 3)
    assert g.check_well_formed() == []


def test_check_well_formed_flags_clean_over_dirty():
    g = Graph()
    thunks, r = chain(g, 3)
    g.dirty_paths_to(r)
    # manually fake a bad scrub: clean an upstream edge while downstream dirty
    e = g.nodes[thunks[0]].outgoing[0]
    e.dirty = False
    g.dirty_edge_count -= 1
    violations = g.check_well_formed()
    assert violations
    assert any("dirty" in v for v in violations)


def test_check_well_formed_flags_stale_clean_edge():
    g = Graph()
    g.put_thunk(P[0], "c", None)
    g.put_ref(P[1], 5)
    e = g.add_edge(P[0], OBS_REF, 5, P[1])
    rec = g.nodes[P[1]]
    rec.value = 6  # silent mutation behind the graph's back
    violations = g.check_well_formed()
    assert any("stale" in v for v in violations)


def test_flush_isolated_and_transitive():
    g = Graph()
    g.put_ref(P[0], 1)  # isolated, zero count
    assert g.flush() == 1
    g = Graph()
    g.put_thunk(P[0], "a", None)
    g.put_ref(P[1], 1)
    g.add_edge(P[0], OBS_REF, 1, P[1])  # b referenced only by a
    assert g.flush() == 2
    g = Graph()
    g.put_ref(P[0], 1)
    g.incref(P[0])
    assert g.flush() == 0


def test_flush_spares_on_stack():
    g = Graph()
    g.put_thunk(P[0], "a", None)
    g.push_force(P[0])
    assert g.flush() == 0
    g.pop_force()
    assert g.flush() == 1


def test_export_dot_deterministic():
    g = Graph()
    chain(g, 2)
    text1 = g.export_dot()
    text2 = g.export_dot()
    assert text1 == text2
    assert text1.count("thunk") >= 2
    empty = Graph().export_dot()
    assert empty.startswith("digraph")


def test_stats_row():
    g = Graph()
    chain(g, 2)
    row = g.stats_row()
    nodes, edges, dirty, reexec = row.split(",")
    assert int(nodes) == 3
    assert int(edges) == 2
    assert int(dirty) == 0
