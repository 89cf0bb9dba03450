"""Deterministic random program generator for the calculus.

Programs are generated well-typed by construction over a small type language
(names, pairs, sums, references, thunks), so the reference evaluator never
gets stuck on them.  Termination is guaranteed: the only recursion emitted is
a peel combinator applied to a nested-injection literal of known depth.
Names are threaded linearly (every allocation name is used exactly once per
run), so first runs are ambiguity-free, and input pointers, allocation names,
data names, and edit names live in four disjoint reserved subtrees.

A generated case carries its own *input store*: reference cells that exist
before the program runs and that edits may overwrite.  The program reads
them through embedded pointer literals.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..hashing import mix64
from ..names import ROOT_NAME, TOP, Pointer, with_index
from ..names import _descend_bits  # reserved-subtree helper
from . import terms as t

_INPUT_BASE = _descend_bits(ROOT_NAME, mix64(0x1BA5E), 64)
_ALLOC_BASE = _descend_bits(ROOT_NAME, mix64(0xA110C), 64)
_DATA_BASE = _descend_bits(ROOT_NAME, mix64(0xDA7A), 64)
_EDIT_BASE = _descend_bits(ROOT_NAME, mix64(0xED17), 64)


@dataclass(frozen=True)
class TName:
    pass


@dataclass(frozen=True)
class TPair:
    fst: object
    snd: object


@dataclass(frozen=True)
class TSum:
    left: object
    right: object


@dataclass(frozen=True)
class TRef:
    of: object


@dataclass(frozen=True)
class TThk:
    of: object


_TNAME = TName()


@dataclass
class Case:
    """One generated differential-test case."""

    seed: int
    inputs: dict[Pointer, t.Value]
    input_types: dict[Pointer, object]
    body: t.Computation


@dataclass
class Edit:
    pointer: Pointer
    value: t.Value

    def describe(self) -> str:
        from .sexpr import render_value

        return f"{self.pointer.render()} := {render_value(self.value)}"


class _CantSynthesize(Exception):
    pass


class _Gen:
    def __init__(self, seed: int, size: int):
        self.rng = random.Random(mix64(seed ^ 0x6E6F6D))
        self.size = max(1, size)
        self.budget = self.size
        self.alloc_counter = 0
        self.data_counter = 0
        self.var_counter = 0
        self.inputs: dict[Pointer, t.Value] = {}
        self.input_types: dict[Pointer, object] = {}

    # -- supplies ------------------------------------------------------

    def alloc_name(self):
        self.alloc_counter += 1
        return with_index(_ALLOC_BASE, self.alloc_counter)

    def data_name(self):
        self.data_counter += 1
        return with_index(_DATA_BASE, self.data_counter)

    def var(self, stem="x"):
        self.var_counter += 1
        return f"{stem}{self.var_counter}"

    # -- data ----------------------------------------------------------

    def gen_data_type(self, depth: int):
        if depth <= 0 or self.rng.random() < 0.4:
            return _TNAME
        if self.rng.random() < 0.5:
            return TPair(self.gen_data_type(depth - 1), self.gen_data_type(depth - 1))
        return TSum(self.gen_data_type(depth - 1), self.gen_data_type(depth - 1))

    def gen_data_value(self, ty):
        if ty is _TNAME or type(ty) is TName:
            return t.NameVal(self.data_name())
        if type(ty) is TPair:
            return t.VPair(self.gen_data_value(ty.fst), self.gen_data_value(ty.snd))
        if type(ty) is TSum:
            if self.rng.random() < 0.5:
                return t.Inj(1, self.gen_data_value(ty.left))
            return t.Inj(2, self.gen_data_value(ty.right))
        raise _CantSynthesize(ty)

    # -- values --------------------------------------------------------

    def gen_value(self, env, depth=2):
        """A value of some type: an in-scope variable or a data literal."""
        usable = [ve for ve in env if self.rng.random() < 0.8]
        if usable and self.rng.random() < 0.65:
            name, ty = self.rng.choice(usable)
            return t.Var(name), ty
        if depth > 0 and self.rng.random() < 0.35:
            a, ta = self.gen_value(env, depth - 1)
            b, tb = self.gen_value(env, depth - 1)
            return t.VPair(a, b), TPair(ta, tb)
        if depth > 0 and self.rng.random() < 0.25:
            a, ta = self.gen_value(env, depth - 1)
            other = self.gen_data_type(1)
            if self.rng.random() < 0.5:
                return t.Inj(1, a), TSum(ta, other)
            return t.Inj(2, a), TSum(other, ta)
        return t.NameVal(self.data_name()), _TNAME

    def value_of_type(self, env, ty):
        """A value of exactly ``ty``; prefers variables, else synthesizes data."""
        candidates = [v for v, vt in env if vt == ty]
        if candidates and self.rng.random() < 0.7:
            return t.Var(self.rng.choice(candidates))
        if type(ty) is TPair:
            return t.VPair(self.value_of_type(env, ty.fst), self.value_of_type(env, ty.snd))
        if type(ty) is TSum:
            side = self.rng.random() < 0.5
            try:
                if side:
                    return t.Inj(1, self.value_of_type(env, ty.left))
                return t.Inj(2, self.value_of_type(env, ty.right))
            except _CantSynthesize:
                if side:
                    return t.Inj(2, self.value_of_type(env, ty.right))
                return t.Inj(1, self.value_of_type(env, ty.left))
        if ty is _TNAME or type(ty) is TName:
            return t.NameVal(self.data_name())
        if candidates:
            return t.Var(self.rng.choice(candidates))
        raise _CantSynthesize(ty)

    # -- computations ----------------------------------------------------

    def gen_comp(self, env):
        self.budget -= 1
        forms = ["ret"]
        if self.budget > 1:
            forms += ["let", "let", "get_input", "alloc_ref", "thunk_force", "app"]
        if self.budget > 3:
            forms += ["fork_split", "case", "split", "nest", "lazy_thunk", "ref_at_fork"]
        if self.budget > 5:
            forms += ["peel", "force_twice"]
        if any(type(ty) is TRef for _, ty in env):
            forms += ["get_var"]
        self.rng.shuffle(forms)
        for form in forms:
            try:
                return getattr(self, "_form_" + form)(env)
            except _CantSynthesize:
                continue
        v, ty = self.gen_value(env)
        return t.Ret(v), ty

    def _form_ret(self, env):
        v, ty = self.gen_value(env)
        return t.Ret(v), ty

    def _form_let(self, env):
        e1, t1 = self.gen_comp(env)
        x = self.var()
        e2, t2 = self.gen_comp(env + [(x, t1)])
        return t.Let(x, e1, e2), t2

    def _form_app(self, env):
        v, tv = self.gen_value(env)
        x = self.var()
        body, tb = self.gen_comp(env + [(x, tv)])
        return t.App(t.Lam(x, body), v), tb

    def _form_get_input(self, env):
        if not self.inputs:
            raise _CantSynthesize("no inputs")
        ptr = self.rng.choice(sorted(self.inputs, key=lambda p: p.render()))
        x = self.var("in")
        rest, ty = self.gen_comp(env + [(x, self.input_types[ptr])])
        return t.Let(x, t.Get(t.RefVal(ptr)), rest), ty

    def _form_get_var(self, env):
        refs = [(v, ty) for v, ty in env if type(ty) is TRef]
        if not refs:
            raise _CantSynthesize("no ref vars")
        v, ty = self.rng.choice(refs)
        return t.Get(t.Var(v)), ty.of

    def _form_alloc_ref(self, env):
        v, tv = self.gen_value(env)
        x = self.var("r")
        rest, ty = self.gen_comp(env + [(x, TRef(tv))])
        return t.Let(x, t.RefExpr(t.NameVal(self.alloc_name()), v), rest), ty

    def _thunk_body(self, env):
        """Thunk bodies are biased toward reading an input so that edits
        actually dirty demanded subgraphs."""
        if self.inputs and self.rng.random() < 0.6:
            ptr = self.rng.choice(sorted(self.inputs, key=lambda p: p.render()))
            x = self.var("in")
            rest, ty = self.gen_comp(env + [(x, self.input_types[ptr])])
            return t.Let(x, t.Get(t.RefVal(ptr)), rest), ty
        return self.gen_comp(env)

    def _form_thunk_force(self, env):
        # The thunk variable stays hidden so it is forced exactly once: a
        # second force would re-evaluate the body in the reference system and
        # collide on any allocation inside it.
        inner, ti = self._thunk_body(env)
        tv, x = self.var("t"), self.var()
        rest, ty = self.gen_comp(env + [(x, ti)])
        return (
            t.Let(
                tv,
                t.ThunkExpr(t.NameVal(self.alloc_name()), inner),
                t.Let(x, t.Force(t.Var(tv)), rest),
            ),
            ty,
        )

    def gen_pure_comp(self, env):
        """A computation with no store effects (safe to re-evaluate)."""
        r = self.rng.random()
        if r < 0.3:
            p, a, b = self.var("p"), self.var("n"), self.var("n")
            return (
                t.Let(
                    p,
                    t.ForkExpr(t.NameVal(self.data_name())),
                    t.Split(t.Var(p), a, b, t.Ret(t.VPair(t.Var(a), t.Var(b)))),
                ),
                TPair(_TNAME, _TNAME),
            )
        if r < 0.5:
            v, tv = self.gen_value(env)
            x = self.var()
            return t.App(t.Lam(x, t.Ret(t.Var(x))), v), tv
        v, tv = self.gen_value(env)
        return t.Ret(v), tv

    def _form_force_twice(self, env):
        # memoization coverage: pure bodies may be forced repeatedly
        inner, ti = self.gen_pure_comp(env)
        tv, x, y = self.var("t"), self.var(), self.var()
        rest, ty = self.gen_comp(env + [(x, ti), (y, ti)])
        return (
            t.Let(
                tv,
                t.ThunkExpr(t.NameVal(self.alloc_name()), inner),
                t.Let(
                    x,
                    t.Force(t.Var(tv)),
                    t.Let(y, t.Force(t.Var(tv)), rest),
                ),
            ),
            ty,
        )

    def _form_lazy_thunk(self, env):
        # allocated but possibly never forced
        inner, ti = self._thunk_body(env)
        return t.ThunkExpr(t.NameVal(self.alloc_name()), inner), TThk(ti)

    def _form_fork_split(self, env):
        p = self.var("p")
        a, b = self.var("n"), self.var("n")
        rest, ty = self.gen_comp(env + [(a, _TNAME), (b, _TNAME)])
        return (
            t.Let(p, t.ForkExpr(t.NameVal(self.data_name())), t.Split(t.Var(p), a, b, rest)),
            ty,
        )

    def _form_ref_at_fork(self, env):
        # allocate at a runtime-forked name: both halves, used linearly
        p, a, b = self.var("p"), self.var("n"), self.var("n")
        v1, tv1 = self.gen_value(env)
        v2, tv2 = self.gen_value(env)
        r1, r2 = self.var("r"), self.var("r")
        rest, ty = self.gen_comp(env + [(r1, TRef(tv1)), (r2, TRef(tv2))])
        inner = t.Let(
            r1,
            t.RefExpr(t.Var(a), v1),
            t.Let(r2, t.RefExpr(t.Var(b), v2), rest),
        )
        return (
            t.Let(p, t.ForkExpr(t.NameVal(self.alloc_name())), t.Split(t.Var(p), a, b, inner)),
            ty,
        )

    def _form_case(self, env):
        sums = [(v, ty) for v, ty in env if type(ty) is TSum]
        if sums and self.rng.random() < 0.7:
            sv, sty = self.rng.choice(sums)
            scrut = t.Var(sv)
        else:
            sty = TSum(self.gen_data_type(1), self.gen_data_type(1))
            scrut = self.gen_data_value(sty)
        x1, x2 = self.var(), self.var()
        arm1, ty = self.gen_comp(env + [(x1, sty.left)])
        arm2 = t.Ret(self.value_of_type(env + [(x2, sty.right)], ty))
        return t.Case(scrut, x1, arm1, x2, arm2), ty

    def _form_split(self, env):
        pairs = [(v, ty) for v, ty in env if type(ty) is TPair]
        if pairs and self.rng.random() < 0.7:
            pv, pty = self.rng.choice(pairs)
            scrut = t.Var(pv)
        else:
            pty = TPair(self.gen_data_type(1), self.gen_data_type(1))
            scrut = self.gen_data_value(pty)
        x1, x2 = self.var(), self.var()
        body, ty = self.gen_comp(env + [(x1, pty.fst), (x2, pty.snd)])
        return t.Split(scrut, x1, x2, body), ty

    def _form_nest(self, env):
        ns_var = self.var("s")
        inner, ti = self.gen_comp(env)
        x = self.var()
        rest, ty = self.gen_comp(env + [(x, ti)])
        body = t.Nest(t.Var(ns_var), inner, x, rest)
        return t.NsExpr(t.NameVal(self.alloc_name()), ns_var, body), ty

    def _form_peel(self, env):
        # fix f. \x. case(x, a. f a, b. ret b)  applied to a known-depth chain
        base, tb = self.gen_value(env, depth=1)
        depth = self.rng.randint(1, 5)
        chain = t.Inj(2, base)
        for _ in range(depth):
            chain = t.Inj(1, chain)
        f, x, a, b = self.var("f"), self.var(), self.var(), self.var()
        peel = t.Fix(
            f,
            t.Lam(
                x,
                t.Case(t.Var(x), a, t.App(t.FixVar(f), t.Var(a)), b, t.Ret(t.Var(b))),
            ),
        )
        return t.App(peel, chain), tb


def gen_program(seed: int, size: int) -> Case:
    """Deterministic pseudo-random closed test case (input store + body)."""
    g = _Gen(seed, size)
    n_inputs = 0 if size <= 1 else g.rng.randint(1, 3)
    for i in range(n_inputs):
        ty = g.gen_data_type(2)
        ptr = Pointer(with_index(_INPUT_BASE, mix64(seed) % 1000 * 8 + i), TOP)
        g.inputs[ptr] = g.gen_data_value(ty)
        g.input_types[ptr] = ty
    body, _ = g.gen_comp([])
    return Case(seed=seed, inputs=g.inputs, input_types=g.input_types, body=body)


def gen_edits(case: Case, count: int, seed: int = 0) -> list[Edit]:
    """Legal ref-overwrite edits: replace an input value by a fresh value of
    the same type (new names, possibly different injection tags)."""
    if not case.inputs:
        return []
    rng = random.Random(mix64(case.seed ^ seed ^ 0xED17))
    g = _Gen(mix64(case.seed ^ 0xFEED ^ seed), 1)
    g.rng = rng
    edits = []
    ptrs = sorted(case.inputs, key=lambda p: p.render())
    for i in range(count):
        ptr = rng.choice(ptrs)
        g.data_counter = 0
        base = with_index(_EDIT_BASE, mix64(case.seed ^ (seed * 1000 + i)) & 0xFFFFFFFF)
        g.data_name = lambda b=base, g=g: _edit_name(g, b)
        edits.append(Edit(ptr, g.gen_data_value(case.input_types[ptr])))
    return edits


def _edit_name(g, base):
    g.data_counter += 1
    return with_index(base, g.data_counter)
