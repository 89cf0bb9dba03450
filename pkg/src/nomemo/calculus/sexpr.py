"""Textual surface syntax for calculus terms (s-expression style).

Grammar (symbols are ``[A-Za-z_][A-Za-z0-9_'-]*``)::

    val  := SYMBOL                      -- value variable
          | (pair VAL VAL)
          | (inj1 VAL) | (inj2 VAL)
          | NAME                        -- '#' is the root, '#1.2' a fork path
    comp := SYMBOL                      -- fix variable
          | (ret VAL) | (lam SYMBOL COMP) | (app COMP VAL)
          | (fix SYMBOL COMP)
          | (let SYMBOL COMP COMP)
          | (case VAL SYMBOL COMP SYMBOL COMP)
          | (split VAL SYMBOL SYMBOL COMP)
          | (thunk VAL COMP) | (force VAL) | (fork VAL)
          | (ref VAL VAL) | (get VAL)
          | (ns VAL SYMBOL COMP)
          | (nest VAL COMP SYMBOL COMP)

Runtime-only values (pointers, namespaces) print as ``#<...>`` and are not
re-parseable; fixtures never contain them.
"""

from __future__ import annotations

import re

from ..names import ROOT_NAME, fork
from . import terms as t

_TOKEN = re.compile(r"\(|\)|[^\s()]+")


class SexprError(ValueError):
    pass


def _tokenize(text: str):
    return _TOKEN.findall(text)


def _read(tokens: list[str], pos: int):
    if pos >= len(tokens):
        raise SexprError("unexpected end of input")
    tok = tokens[pos]
    if tok == "(":
        items = []
        pos += 1
        while True:
            if pos >= len(tokens):
                raise SexprError("unclosed (")
            if tokens[pos] == ")":
                return items, pos + 1
            item, pos = _read(tokens, pos)
            items.append(item)
    if tok == ")":
        raise SexprError("unexpected )")
    return tok, pos + 1


def _parse_name(tok: str):
    assert tok.startswith("#")
    n = ROOT_NAME
    if tok == "#":
        return n
    for step in tok[1:].split("."):
        if step == "1":
            n = fork(n)[0]
        elif step == "2":
            n = fork(n)[1]
        else:
            raise SexprError(f"bad name literal {tok!r}")
    return n


def _render_name(n) -> str:
    steps = []
    while n.tail is not None:
        steps.append(str(n.step))
        n = n.tail
    return "#" + ".".join(reversed(steps))


def parse_value(form) -> t.Value:
    if isinstance(form, str):
        if form.startswith("#"):
            return t.NameVal(_parse_name(form))
        return t.Var(form)
    head = form[0]
    if head == "pair":
        return t.VPair(parse_value(form[1]), parse_value(form[2]))
    if head == "inj1":
        return t.Inj(1, parse_value(form[1]))
    if head == "inj2":
        return t.Inj(2, parse_value(form[1]))
    raise SexprError(f"bad value form {form!r}")


def parse_comp(form) -> t.Computation:
    if isinstance(form, str):
        return t.FixVar(form)
    head = form[0]
    rest = form[1:]
    if head == "ret":
        return t.Ret(parse_value(rest[0]))
    if head == "lam":
        return t.Lam(rest[0], parse_comp(rest[1]))
    if head == "app":
        return t.App(parse_comp(rest[0]), parse_value(rest[1]))
    if head == "fix":
        return t.Fix(rest[0], parse_comp(rest[1]))
    if head == "let":
        return t.Let(rest[0], parse_comp(rest[1]), parse_comp(rest[2]))
    if head == "case":
        return t.Case(parse_value(rest[0]), rest[1], parse_comp(rest[2]), rest[3], parse_comp(rest[4]))
    if head == "split":
        return t.Split(parse_value(rest[0]), rest[1], rest[2], parse_comp(rest[3]))
    if head == "thunk":
        return t.ThunkExpr(parse_value(rest[0]), parse_comp(rest[1]))
    if head == "force":
        return t.Force(parse_value(rest[0]))
    if head == "fork":
        return t.ForkExpr(parse_value(rest[0]))
    if head == "ref":
        return t.RefExpr(parse_value(rest[0]), parse_value(rest[1]))
    if head == "get":
        return t.Get(parse_value(rest[0]))
    if head == "ns":
        return t.NsExpr(parse_value(rest[0]), rest[1], parse_comp(rest[2]))
    if head == "nest":
        return t.Nest(parse_value(rest[0]), parse_comp(rest[1]), rest[2], parse_comp(rest[3]))
    raise SexprError(f"bad computation form {form!r}")


def parse(text: str) -> t.Computation:
    form, pos = _read(_tokenize(text), 0)
    return parse_comp(form)


def render_value(v: t.Value) -> str:
    k = type(v)
    if k is t.Var:
        return v.ident
    if k is t.VPair:
        return f"(pair {render_value(v.fst)} {render_value(v.snd)})"
    if k is t.Inj:
        return f"(inj{v.tag} {render_value(v.val)})"
    if k is t.NameVal:
        return _render_name(v.name)
    if k is t.RefVal:
        return f"#<ref {v.pointer.render()}>"
    if k is t.ThkVal:
        return f"#<thk {v.pointer.render()}>"
    if k is t.NsVal:
        return f"#<ns {v.namespace.render()}>"
    raise TypeError(v)


def render(e: t.Computation) -> str:
    k = type(e)
    if k is t.Ret:
        return f"(ret {render_value(e.value)})"
    if k is t.Lam:
        return f"(lam {e.var} {render(e.body)})"
    if k is t.App:
        return f"(app {render(e.fn)} {render_value(e.arg)})"
    if k is t.FixVar:
        return e.ident
    if k is t.Fix:
        return f"(fix {e.ident} {render(e.body)})"
    if k is t.Let:
        return f"(let {e.var} {render(e.bound)} {render(e.body)})"
    if k is t.Case:
        return (
            f"(case {render_value(e.scrut)} {e.var1} {render(e.arm1)} "
            f"{e.var2} {render(e.arm2)})"
        )
    if k is t.Split:
        return f"(split {render_value(e.scrut)} {e.var1} {e.var2} {render(e.body)})"
    if k is t.ThunkExpr:
        return f"(thunk {render_value(e.name)} {render(e.body)})"
    if k is t.Force:
        return f"(force {render_value(e.val)})"
    if k is t.ForkExpr:
        return f"(fork {render_value(e.val)})"
    if k is t.RefExpr:
        return f"(ref {render_value(e.name)} {render_value(e.val)})"
    if k is t.Get:
        return f"(get {render_value(e.val)})"
    if k is t.NsExpr:
        return f"(ns {render_value(e.seed)} {e.var} {render(e.body)})"
    if k is t.Nest:
        return f"(nest {render_value(e.ns)} {render(e.first)} {e.var} {render(e.body)})"
    raise TypeError(e)
