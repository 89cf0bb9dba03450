"""Nominal incremental data structures: named lists, probabilistic trees,
probabilistic tries, and the standard operations over them."""

from .lists import (
    Sorter,
    NIL,
    Cons,
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
)
from .trees import (
    LEAF,
    Bin,
    fold_tree,
    height_of,
    make_tree_builder,
    make_tree_fold,
    make_tree_min,
    make_tree_sum,
    tree_min,
    tree_of_list,
    tree_sum,
    tree_values,
)
from .tries import (
    TRIE_NIL,
    TrieBin,
    TrieLeaf,
    bits_of,
    key_bits,
    make_splitting_extender,
    make_trie_extender,
    make_trie_map_extender,
    trie_extend,
    trie_find,
    trie_map_get,
    trie_map_items,
    trie_map_put,
)

__all__ = [
    "Bin",
    "Sorter",
    "Cons",
    "LEAF",
    "NIL",
    "TRIE_NIL",
    "TrieBin",
    "TrieLeaf",
    "bits_of",
    "fold_tree",
    "height_of",
    "list_delete",
    "list_filter",
    "list_insert",
    "list_map",
    "list_median",
    "list_mergesort",
    "list_of_values",
    "list_replace",
    "list_reverse",
    "list_values",
    "make_list_filter",
    "make_list_mapper",
    "make_merge_sorter",
    "make_reverser",
    "make_tree_builder",
    "make_tree_fold",
    "make_tree_min",
    "make_tree_sum",
    "key_bits",
    "make_splitting_extender",
    "make_trie_extender",
    "make_trie_map_extender",
    "tree_min",
    "tree_of_list",
    "tree_sum",
    "tree_values",
    "trie_extend",
    "trie_find",
    "trie_map_get",
    "trie_map_items",
    "trie_map_put",
]
