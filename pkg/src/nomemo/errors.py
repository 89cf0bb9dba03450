"""Shared exception types."""

from __future__ import annotations


class NomemoError(Exception):
    pass


class AmbiguousName(NomemoError):
    """One name bound to two different contents within a single run.

    Detected when a dirtying transition touches a node that is currently on
    the force stack.  Carries the overwritten pointer, the on-stack pointer
    whose edge was dirtied, and both conflicting contents when known.
    """

    def __init__(self, pointer, on_stack, old=None, new=None):
        self.pointer = pointer
        self.on_stack = on_stack
        self.old = old
        self.new = new
        super().__init__(
            f"name {pointer.render()} used ambiguously: overwrite dirtied "
            f"on-stack node {on_stack.render()} (old={old!r}, new={new!r})"
        )


class NameKindClash(NomemoError):
    """A pointer currently holds a reference cell but a thunk was requested
    under the same name (or vice versa)."""


class InnerMutation(NomemoError):
    """``set`` called while the force stack is nonempty."""


class BodyMismatch(NomemoError):
    """A memo table exists under the seed name but with a different body."""


class PointerCollision(NomemoError):
    """Reference-system allocation hit an already-allocated pointer."""


class Stuck(NomemoError):
    """Ill-formed redex in the calculus (e.g. ``get`` of a non-reference)."""


class NonTermination(NomemoError):
    """Fix unrolled past the configured bound (fuzzer guard)."""


class WellFormednessError(NomemoError):
    def __init__(self, violations):
        self.violations = list(violations)
        head = "; ".join(str(v) for v in self.violations[:5])
        super().__init__(f"{len(self.violations)} graph violations: {head}")
