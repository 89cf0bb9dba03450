"""Core-calculus terms: values, terminal computations, computations.

Call-by-push-value style with named thunks, named reference cells, name
forking, and namespaces.  Evaluation substitutes eagerly, so terms under
evaluation are closed; substitution does not rename binders (capture cannot
occur on closed substituends).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..names import Name, Namespace, Pointer


class Value:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Value):
    ident: str


@dataclass(frozen=True)
class VPair(Value):
    fst: Value
    snd: Value


@dataclass(frozen=True)
class Inj(Value):
    tag: int  # 1 or 2
    val: Value


@dataclass(frozen=True)
class NameVal(Value):
    name: Name


@dataclass(frozen=True)
class RefVal(Value):
    pointer: Pointer


@dataclass(frozen=True)
class ThkVal(Value):
    pointer: Pointer


@dataclass(frozen=True)
class NsVal(Value):
    namespace: Namespace


class Computation:
    __slots__ = ()


class Terminal(Computation):
    """Results: lambdas and returned values."""

    __slots__ = ()


@dataclass(frozen=True)
class Lam(Terminal):
    var: str
    body: Computation


@dataclass(frozen=True)
class Ret(Terminal):
    value: Value


@dataclass(frozen=True)
class App(Computation):
    fn: Computation
    arg: Value


@dataclass(frozen=True)
class FixVar(Computation):
    ident: str


@dataclass(frozen=True)
class Fix(Computation):
    ident: str
    body: Computation


@dataclass(frozen=True)
class Let(Computation):
    var: str
    bound: Computation
    body: Computation


@dataclass(frozen=True)
class Case(Computation):
    scrut: Value
    var1: str
    arm1: Computation
    var2: str
    arm2: Computation


@dataclass(frozen=True)
class Split(Computation):
    scrut: Value
    var1: str
    var2: str
    body: Computation


@dataclass(frozen=True)
class ThunkExpr(Computation):
    name: Value
    body: Computation


@dataclass(frozen=True)
class Force(Computation):
    val: Value


@dataclass(frozen=True)
class ForkExpr(Computation):
    val: Value


@dataclass(frozen=True)
class RefExpr(Computation):
    name: Value
    val: Value


@dataclass(frozen=True)
class Get(Computation):
    val: Value


@dataclass(frozen=True)
class NsExpr(Computation):
    seed: Value
    var: str
    body: Computation


@dataclass(frozen=True)
class Nest(Computation):
    ns: Value
    first: Computation
    var: str
    body: Computation


# ----------------------------------------------------------------------
# substitution of a value for a value variable


def subst_value(v: Value, x: str, by: Value) -> Value:
    t = type(v)
    if t is Var:
        return by if v.ident == x else v
    if t is VPair:
        return VPair(subst_value(v.fst, x, by), subst_value(v.snd, x, by))
    if t is Inj:
        return Inj(v.tag, subst_value(v.val, x, by))
    return v  # names, pointers, namespaces are closed


def subst(e: Computation, x: str, by: Value) -> Computation:
    t = type(e)
    if t is Ret:
        return Ret(subst_value(e.value, x, by))
    if t is Lam:
        return e if e.var == x else Lam(e.var, subst(e.body, x, by))
    if t is App:
        return App(subst(e.fn, x, by), subst_value(e.arg, x, by))
    if t is FixVar:
        return e
    if t is Fix:
        return Fix(e.ident, subst(e.body, x, by))
    if t is Let:
        body = e.body if e.var == x else subst(e.body, x, by)
        return Let(e.var, subst(e.bound, x, by), body)
    if t is Case:
        arm1 = e.arm1 if e.var1 == x else subst(e.arm1, x, by)
        arm2 = e.arm2 if e.var2 == x else subst(e.arm2, x, by)
        return Case(subst_value(e.scrut, x, by), e.var1, arm1, e.var2, arm2)
    if t is Split:
        body = e.body if x in (e.var1, e.var2) else subst(e.body, x, by)
        return Split(subst_value(e.scrut, x, by), e.var1, e.var2, body)
    if t is ThunkExpr:
        return ThunkExpr(subst_value(e.name, x, by), subst(e.body, x, by))
    if t is Force:
        return Force(subst_value(e.val, x, by))
    if t is ForkExpr:
        return ForkExpr(subst_value(e.val, x, by))
    if t is RefExpr:
        return RefExpr(subst_value(e.name, x, by), subst_value(e.val, x, by))
    if t is Get:
        return Get(subst_value(e.val, x, by))
    if t is NsExpr:
        body = e.body if e.var == x else subst(e.body, x, by)
        return NsExpr(subst_value(e.seed, x, by), e.var, body)
    if t is Nest:
        body = e.body if e.var == x else subst(e.body, x, by)
        return Nest(subst_value(e.ns, x, by), subst(e.first, x, by), e.var, body)
    raise TypeError(e)


def subst_fix(e: Computation, f: str, by: Computation) -> Computation:
    """Substitute a computation for a fix variable."""
    t = type(e)
    if t is FixVar:
        return by if e.ident == f else e
    if t is Ret:
        return e
    if t is Lam:
        return Lam(e.var, subst_fix(e.body, f, by))
    if t is App:
        return App(subst_fix(e.fn, f, by), e.arg)
    if t is Fix:
        return e if e.ident == f else Fix(e.ident, subst_fix(e.body, f, by))
    if t is Let:
        return Let(e.var, subst_fix(e.bound, f, by), subst_fix(e.body, f, by))
    if t is Case:
        return Case(e.scrut, e.var1, subst_fix(e.arm1, f, by), e.var2, subst_fix(e.arm2, f, by))
    if t is Split:
        return Split(e.scrut, e.var1, e.var2, subst_fix(e.body, f, by))
    if t is ThunkExpr:
        return ThunkExpr(e.name, subst_fix(e.body, f, by))
    if t in (Force, ForkExpr, RefExpr, Get):
        return e
    if t is NsExpr:
        return NsExpr(e.seed, e.var, subst_fix(e.body, f, by))
    if t is Nest:
        return Nest(e.ns, subst_fix(e.first, f, by), e.var, subst_fix(e.body, f, by))
    raise TypeError(e)
