import random

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from nomemo import Engine, fresh_name
from nomemo.structures import (
    LEAF,
    NIL,
    TRIE_NIL,
    bits_of,
    height_of,
    list_delete,
    list_filter,
    list_insert,
    list_map,
    list_median,
    list_mergesort,
    list_of_values,
    list_replace,
    list_reverse,
    list_values,
    make_list_filter,
    make_list_mapper,
    make_merge_sorter,
    make_reverser,
    make_tree_builder,
    make_tree_min,
    make_tree_sum,
    tree_min,
    tree_of_list,
    tree_sum,
    tree_values,
    trie_extend,
    trie_find,
    make_trie_extender,
)
from nomemo.structures.lists import IndexOutOfRange
from nomemo.structures.tries import (
    TrieLeaf,
    make_trie_map_extender,
    trie_map_get,
    trie_map_items,
    trie_map_put,
)

F = lambda x: x * 3 + 1


def fresh_engine():
    return Engine(validate=True)


# ----------------------------------------------------------------------
# lists


def test_list_roundtrip_and_lengths():
    eng = fresh_engine()
    assert list_values(eng, list_of_values(eng, [])) == []
    xs = list_of_values(eng, [0, 1, 3])
    assert list_values(eng, xs) == [0, 1, 3]
    head = eng.get(xs)
    names = set()
    v = head
    while v is not NIL:
        names.add(v.name)
        v = eng.get(v.tail)
    assert len(names) == 3  # pairwise distinct cell names


@given(st.lists(st.integers(), max_size=40))
@settings(max_examples=25, deadline=None)
def test_list_roundtrip_random(values):
    eng = Engine()
    assert list_values(eng, list_of_values(eng, values)) == values


def test_list_edits():
    eng = fresh_engine()
    xs = list_of_values(eng, [1])
    list_insert(eng, xs, 0, 9)
    assert list_values(eng, xs) == [9, 1]
    list_insert(eng, xs, 2, 7)
    assert list_values(eng, xs) == [9, 1, 7]
    list_delete(eng, xs, 1)
    assert list_values(eng, xs) == [9, 7]
    list_replace(eng, xs, 0, 4)
    assert list_values(eng, xs) == [4, 7]
    with pytest.raises(IndexOutOfRange):
        list_delete(eng, xs, 5)


def test_insert_then_delete_restores_values():
    eng = fresh_engine()
    xs = list_of_values(eng, list(range(10)))
    before = list_values(eng, xs)
    list_insert(eng, xs, 4, 99)
    list_delete(eng, xs, 4)
    assert list_values(eng, xs) == before


def test_map_empty():
    eng = fresh_engine()
    xs = list_of_values(eng, [])
    m = make_list_mapper(eng, fresh_name(), F)
    assert list_map(eng, m, xs) is NIL


def test_map_insert_reexecutes_two():
    eng = fresh_engine()
    xs = list_of_values(eng, [0, 1, 3])
    m = make_list_mapper(eng, eng.fresh_name(), F)
    out = list_map(eng, m, xs)
    assert list_values(eng, out) == [F(0), F(1), F(3)]
    list_insert(eng, xs, 2, 2)
    before = eng.stats.re_executions
    out = list_map(eng, m, xs)
    assert list_values(eng, out) == [F(0), F(1), F(2), F(3)]
    assert eng.stats.re_executions - before == 2


def test_map_prefix_pointers_stable_across_insert():
    eng = fresh_engine()
    xs = list_of_values(eng, list(range(16)))
    m = make_list_mapper(eng, eng.fresh_name(), F)
    out1 = list_map(eng, m, xs)

    def tail_pointers(v):
        seen = []
        while v is not NIL:
            seen.append(v.tail.pointer)
            v = eng.get(v.tail)
        return seen

    p1 = tail_pointers(out1)
    list_insert(eng, xs, 7, 99)
    out2 = list_map(eng, m, xs)
    p2 = tail_pointers(out2)
    assert set(p1) <= set(p2)
    assert len(set(p2) - set(p1)) == 1


@given(st.lists(st.integers(min_value=-50, max_value=50), max_size=30))
@settings(max_examples=20, deadline=None)
def test_filter_matches_oracle(values):
    eng = Engine()
    xs = list_of_values(eng, values)
    keep = lambda x: x % 2 == 0
    m = make_list_filter(eng, eng.fresh_name(), keep)
    assert list_values(eng, list_filter(eng, m, xs)) == [v for v in values if keep(v)]


def test_filter_all_kept_matches_map_identity():
    eng = fresh_engine()
    values = [5, 2, 8]
    xs = list_of_values(eng, values)
    m = make_list_filter(eng, eng.fresh_name(), lambda x: True)
    assert list_values(eng, list_filter(eng, m, xs)) == values


def test_reverse_roundtrip():
    eng = fresh_engine()
    values = list(range(12))
    xs = list_of_values(eng, values)
    m = make_reverser(eng, eng.fresh_name())
    rev = list_reverse(eng, m, xs)
    assert list_values(eng, rev) == values[::-1]
    ys = list_of_values(eng, list_values(eng, rev))
    m2 = make_reverser(eng, eng.fresh_name())
    assert list_values(eng, list_reverse(eng, m2, ys)) == values


def test_reverse_replace_reuses_prefix_steps():
    eng = fresh_engine()
    n = 64
    xs = list_of_values(eng, list(range(n)))
    m = make_reverser(eng, eng.fresh_name())
    list_reverse(eng, m, xs)
    pos = 50
    list_replace(eng, xs, pos, 999)
    before = eng.stats.re_executions
    rev = list_reverse(eng, m, xs)
    assert list_values(eng, rev)[n - 1 - pos] == 999
    delta = eng.stats.re_executions - before
    # steps strictly before the edit are verified, not re-run
    assert delta <= (n - pos) + 2


# ----------------------------------------------------------------------
# trees


def test_height_of_examples():
    # find values whose hashes end in ...1 and ...100
    h0 = next(v for v in range(100) if height_of(v) == 0)
    h2 = next(v for v in range(100) if height_of(v) == 2)
    assert height_of(h0) == 0
    assert height_of(h2) == 2


def oracle_tree(values):
    """Leftmost-max cartesian tree on levels, as (elem, left, right) tuples."""
    if not values:
        return None
    levels = [height_of(v) for v in values]
    top = max(levels)
    i = levels.index(top)
    return (values[i], oracle_tree(values[:i]), oracle_tree(values[i + 1 :]))


def shape_of(eng, tree):
    if tree is LEAF:
        return None
    from nomemo.structures.lists import _resolve

    return (
        tree.element,
        shape_of(eng, _resolve(eng, tree.left)),
        shape_of(eng, _resolve(eng, tree.right)),
    )


def test_canonical_example_shape():
    # elements with levels [0,1,0,2,1,0] must produce the documented shape:
    # root d, d.left = b over a and c, d.right = e with right child f
    pool = {lvl: [] for lvl in range(3)}
    for v in range(10_000):
        lvl = height_of(v)
        if lvl in pool and len(pool[lvl]) < 3:
            pool[lvl].append(v)
    a, c, f = pool[0][0], pool[0][1], pool[0][2]
    b, e = pool[1][0], pool[1][1]
    d = pool[2][0]
    values = [a, b, c, d, e, f]
    eng = fresh_engine()
    xs = list_of_values(eng, values)
    builder = make_tree_builder(eng, eng.fresh_name())
    tree = shape_of(eng, tree_of_list(eng, builder, xs))
    assert tree == (d, (b, (a, None, None), (c, None, None)), (e, None, (f, None, None)))
    assert tree == oracle_tree(values)


def test_singleton_tree():
    eng = fresh_engine()
    xs = list_of_values(eng, [42])
    builder = make_tree_builder(eng, eng.fresh_name())
    t = tree_of_list(eng, builder, xs)
    assert shape_of(eng, t) == (42, None, None)


@given(st.lists(st.integers(min_value=0, max_value=10**6), max_size=48))
@settings(max_examples=25, deadline=None)
def test_tree_matches_oracle_and_is_canonical(values):
    eng = Engine()
    xs = list_of_values(eng, values)
    builder = make_tree_builder(eng, eng.fresh_name())
    t = tree_of_list(eng, builder, xs)
    assert tree_values(eng, t) == values
    assert shape_of(eng, t) == oracle_tree(values)
    eng2 = Engine()
    ys = list_of_values(eng2, values)
    builder2 = make_tree_builder(eng2, eng2.fresh_name())
    assert shape_of(eng2, tree_of_list(eng2, builder2, ys)) == oracle_tree(values)


def test_tree_min_replace_scenario():
    # min over {3,2,1,4,5,6}; replacing the 1 with 9 moves the min to 2
    eng = fresh_engine()
    values = [3, 2, 1, 4, 5, 6]
    xs = list_of_values(eng, values)
    builder = make_tree_builder(eng, eng.fresh_name())
    fold = make_tree_min(eng, eng.fresh_name())
    assert tree_min(eng, fold, tree_of_list(eng, builder, xs)) == 1
    list_replace(eng, xs, values.index(1), 9)
    assert tree_min(eng, fold, tree_of_list(eng, builder, xs)) == 2


def test_tree_sum_and_empty_identities():
    eng = fresh_engine()
    xs = list_of_values(eng, [])
    builder = make_tree_builder(eng, eng.fresh_name())
    t = tree_of_list(eng, builder, xs)
    assert t is LEAF
    assert tree_sum(eng, make_tree_sum(eng, eng.fresh_name()), t) == 0
    assert tree_min(eng, make_tree_min(eng, eng.fresh_name()), t) == (1 << 63) - 1

    ys = list_of_values(eng, [5, 1, 9])
    b2 = make_tree_builder(eng, eng.fresh_name())
    t2 = tree_of_list(eng, b2, ys)
    assert tree_sum(eng, make_tree_sum(eng, eng.fresh_name()), t2) == 15


def test_tree_repair_is_shallow():
    eng = Engine()
    rng = random.Random(7)
    n = 1024
    values = [rng.randrange(10**9) for _ in range(n)]
    xs = list_of_values(eng, values)
    builder = make_tree_builder(eng, eng.fresh_name())
    fold = make_tree_min(eng, eng.fresh_name())
    tree_min(eng, fold, tree_of_list(eng, builder, xs))
    deltas = []
    for pos in range(0, n, n // 8):
        list_replace(eng, xs, pos, rng.randrange(10**9))
        before = eng.stats.re_executions
        got = tree_min(eng, fold, tree_of_list(eng, builder, xs))
        assert got == min(list_values(eng, xs))
        deltas.append(eng.stats.re_executions - before)
    # depth + constant: generous bound, but far below n
    assert max(deltas) <= 6 * 10  # 6 * log2(1024)


# ----------------------------------------------------------------------
# mergesort / median


@given(st.lists(st.integers(min_value=-10**6, max_value=10**6), max_size=40))
@settings(max_examples=20, deadline=None)
def test_mergesort_matches_oracle(values):
    eng = Engine()
    xs = list_of_values(eng, values)
    sorter, _ = make_merge_sorter(eng, eng.fresh_name())
    assert list_values(eng, list_mergesort(eng, sorter, xs)) == sorted(values)


def test_mergesort_sorted_input_stays_sorted():
    eng = fresh_engine()
    values = list(range(20))
    xs = list_of_values(eng, values)
    sorter, _ = make_merge_sorter(eng, eng.fresh_name())
    assert list_values(eng, list_mergesort(eng, sorter, xs)) == values


def test_mergesort_random_256_and_sublinear_repair():
    eng = Engine()
    rng = random.Random(11)
    n = 256
    values = [rng.randrange(10**9) for _ in range(n)]
    xs = list_of_values(eng, values)
    sorter, _ = make_merge_sorter(eng, eng.fresh_name())
    assert list_values(eng, list_mergesort(eng, sorter, xs)) == sorted(values)
    list_replace(eng, xs, n // 2, rng.randrange(10**9))
    before = eng.stats.re_executions
    assert list_values(eng, list_mergesort(eng, sorter, xs)) == sorted(list_values(eng, xs))
    delta = eng.stats.re_executions - before
    assert delta < n  # o(n): only merges along one root path re-run


def test_median():
    eng = fresh_engine()
    values = [5, 1, 9, 3, 7]
    xs = list_of_values(eng, values)
    sorter, _ = make_merge_sorter(eng, eng.fresh_name())
    assert list_median(eng, sorter, xs) == 5


# ----------------------------------------------------------------------
# tries


def test_trie_find_paper_base_cases():
    eng = fresh_engine()
    bits = bits_of(0xDEADBEEF)
    leaf = TrieLeaf(bits, 42)
    assert trie_find(eng, leaf, bits) == 42
    assert trie_find(eng, TRIE_NIL, bits) is None


def test_trie_extend_then_find():
    eng = fresh_engine()
    m = make_trie_extender(eng, eng.fresh_name())
    t = TRIE_NIL
    keys = [17, 99, 256, 1024]
    for i, k in enumerate(keys):
        t = trie_extend(eng, m, eng.fresh_name(), t, bits_of(k * 7919), k)
    for k in keys:
        assert trie_find(eng, t, bits_of(k * 7919)) == k
    assert trie_find(eng, t, bits_of(123456789)) is None


def test_trie_path_copy_shares_untouched_subtrees():
    eng = fresh_engine()
    m = make_trie_extender(eng, eng.fresh_name())
    t = TRIE_NIL
    for k in range(8):
        t = trie_extend(eng, m, eng.fresh_name(), t, bits_of(k * 104729), k)
    # collect the refs of t, extend with a new key, check overlap
    def refs_of(node, acc):
        from nomemo.structures.lists import _resolve

        if type(node).__name__ != "TrieBin":
            return
        acc.add(node.left.pointer)
        acc.add(node.right.pointer)
        refs_of(_resolve(eng, node.left), acc)
        refs_of(_resolve(eng, node.right), acc)

    old_refs = set()
    refs_of(t, old_refs)
    t2 = trie_extend(eng, m, eng.fresh_name(), t, bits_of(31 * 104729), 31)
    new_refs = set()
    refs_of(t2, new_refs)
    assert old_refs & new_refs  # untouched branches share pointers


def test_trie_extension_pointer_sets_independent_of_input_trie():
    # two runs extending [v1..v6] vs [v2..v6] with shared per-element names
    # must allocate identical pointer sets for the shared extensions
    values = [11, 22, 33, 44, 55, 66]
    shared_names = None

    def run(values):
        eng = Engine()
        supply = [eng.fresh_name() for _ in range(10)]
        m = make_trie_extender(eng, eng.fresh_name(), lambda o, n: n)
        t = TRIE_NIL
        per_extension = {}
        for v, nm in zip(values, supply):
            before = set(eng.graph.nodes)
            t = trie_extend(eng, m, nm, t, bits_of(v * 6151), v)
            per_extension[v] = set(eng.graph.nodes) - before
        return per_extension

    run1 = run(values)
    run2 = run(values[1:])
    for v in values[1:]:
        assert run1[v] == run2[v], f"pointer sets differ for element {v}"


def test_trie_map_layer():
    eng = fresh_engine()
    m = make_trie_map_extender(eng, eng.fresh_name())
    t = TRIE_NIL
    model = {}
    rng = random.Random(3)
    for i in range(60):
        k = f"k{rng.randrange(20)}"
        v = rng.randrange(1000)
        t = trie_map_put(eng, m, eng.fresh_name(), t, k, v)
        model[k] = v
    assert trie_map_items(eng, t) == model
    for k, v in model.items():
        assert trie_map_get(eng, t, k) == v
    assert trie_map_get(eng, t, "absent") is None
