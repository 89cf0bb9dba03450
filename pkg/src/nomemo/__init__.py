"""nomemo: incremental computation with programmer-named allocations.

Allocations (reference cells, thunks, namespaces) carry first-class names so
that recomputation after an input edit repairs prior work instead of
rebuilding it.  See README.md for the API tour;
:mod:`nomemo.calculus` holds the core-calculus interpreters used for
differential correctness testing, and :mod:`nomemo.bench` the benchmark
harness.
"""

from .engine import ARef, AThunk, Engine, MemoFn, NOMINAL, STRUCTURAL
from .errors import (
    AmbiguousName,
    BodyMismatch,
    InnerMutation,
    NameKindClash,
    NomemoError,
    PointerCollision,
    Stuck,
    WellFormednessError,
)
from .hashing import content_hash, trailing_zeros
from .names import (
    ROOT_NAME,
    ROOT_POINTER,
    TOP,
    Name,
    NameSupply,
    Namespace,
    Pointer,
    fork,
    fork4,
    fresh_name,
    make_namespace,
    name_eq,
    name_of_content,
)

__all__ = [
    "ARef",
    "AThunk",
    "AmbiguousName",
    "BodyMismatch",
    "Engine",
    "InnerMutation",
    "MemoFn",
    "NOMINAL",
    "Name",
    "NameKindClash",
    "NameSupply",
    "Namespace",
    "NomemoError",
    "Pointer",
    "PointerCollision",
    "ROOT_NAME",
    "ROOT_POINTER",
    "STRUCTURAL",
    "Stuck",
    "TOP",
    "WellFormednessError",
    "content_hash",
    "fork",
    "fork4",
    "fresh_name",
    "make_namespace",
    "name_eq",
    "name_of_content",
    "trailing_zeros",
]
