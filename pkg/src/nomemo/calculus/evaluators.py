"""Big-step evaluators for the core calculus.

Two closely related rule systems share the pure rules (term, app, fix, bind,
case, split, fork, namespace, nest) and differ on the effectful forms:

* the *reference* system evaluates over a plain store (no edges, no caches,
  allocation requires fresh pointers) — everything it does is from-scratch by
  construction;
* the *incremental* system evaluates over a demanded computation graph,
  creating dependency edges, caching thunk results, and repairing dirty
  subgraphs on demand.

Nondeterministic choices in the incremental rules are fixed the same way the
engine fixes them: dependencies are repaired depth-first over a thunk's dirty
out-edges in creation order, an edge is scrubbed exactly when its target has
been verified, and a failed verification re-executes the dependent thunk.
Both evaluators keep per-rule hit counters so tests can assert coverage.
"""

from __future__ import annotations

from .. import graph as dcg
from ..errors import NonTermination, PointerCollision, Stuck
from ..names import Namespace, Pointer, fork, make_namespace
from . import terms as t

COMMON_RULES = ("term", "app", "fix", "bind", "case", "split", "fork", "namespace", "nest")
PLAIN_RULES = ("refPlain", "thunkPlain", "getPlain", "forcePlain")
INC_RULES = (
    "refDirty",
    "refClean",
    "thunkDirty",
    "thunkClean",
    "getClean",
    "forceClean",
    "scrubEdge",
    "computeDep",
)

REF_KIND = "ref"
THUNK_KIND = "thunk"


class _BaseEvaluator:
    def __init__(self, fix_budget: int | None = None):
        self.rule_hits: dict[str, int] = {}
        self.fix_budget = fix_budget
        self._fix_depth = 0

    def _hit(self, rule: str) -> None:
        self.rule_hits[rule] = self.rule_hits.get(rule, 0) + 1

    def eval(self, omega: Namespace, e: t.Computation) -> t.Terminal:
        k = type(e)
        if k is t.Ret or k is t.Lam:
            self._hit("term")
            return e
        if k is t.App:
            self._hit("app")
            fn = self.eval(omega, e.fn)
            if type(fn) is not t.Lam:
                raise Stuck(f"application of non-lambda {fn!r}")
            return self.eval(omega, t.subst(fn.body, fn.var, e.arg))
        if k is t.Fix:
            self._hit("fix")
            if self.fix_budget is not None:
                self._fix_depth += 1
                if self._fix_depth > self.fix_budget:
                    raise NonTermination(f"fix unrolled past {self.fix_budget}")
            return self.eval(omega, t.subst_fix(e.body, e.ident, e))
        if k is t.FixVar:
            raise Stuck(f"unbound fix variable {e.ident!r}")
        if k is t.Let:
            self._hit("bind")
            bound = self.eval(omega, e.bound)
            if type(bound) is not t.Ret:
                raise Stuck("let of a non-returning computation")
            return self.eval(omega, t.subst(e.body, e.var, bound.value))
        if k is t.Case:
            self._hit("case")
            s = e.scrut
            if type(s) is not t.Inj:
                raise Stuck(f"case of non-injection {s!r}")
            if s.tag == 1:
                return self.eval(omega, t.subst(e.arm1, e.var1, s.val))
            return self.eval(omega, t.subst(e.arm2, e.var2, s.val))
        if k is t.Split:
            self._hit("split")
            s = e.scrut
            if type(s) is not t.VPair:
                raise Stuck(f"split of non-pair {s!r}")
            body = t.subst(t.subst(e.body, e.var1, s.fst), e.var2, s.snd)
            return self.eval(omega, body)
        if k is t.ForkExpr:
            self._hit("fork")
            v = e.val
            if type(v) is not t.NameVal:
                raise Stuck(f"fork of non-name {v!r}")
            a, b = fork(v.name)
            return t.Ret(t.VPair(t.NameVal(a), t.NameVal(b)))
        if k is t.NsExpr:
            self._hit("namespace")
            seed = e.seed
            if type(seed) is not t.NameVal:
                raise Stuck(f"ns of non-name {seed!r}")
            mu = make_namespace(omega, seed.name)
            return self.eval(omega, t.subst(e.body, e.var, t.NsVal(mu)))
        if k is t.Nest:
            self._hit("nest")
            ns = e.ns
            if type(ns) is not t.NsVal:
                raise Stuck(f"nest of non-namespace {ns!r}")
            first = self.eval(ns.namespace, e.first)
            if type(first) is not t.Ret:
                raise Stuck("nest of a non-returning computation")
            return self.eval(omega, t.subst(e.body, e.var, first.value))
        if k is t.RefExpr:
            name = e.name
            if type(name) is not t.NameVal:
                raise Stuck(f"ref at non-name {name!r}")
            return self._ref(omega, name.name, e.val)
        if k is t.ThunkExpr:
            name = e.name
            if type(name) is not t.NameVal:
                raise Stuck(f"thunk at non-name {name!r}")
            return self._thunk(omega, name.name, e.body)
        if k is t.Get:
            v = e.val
            if type(v) is not t.RefVal:
                raise Stuck(f"get of non-reference {v!r}")
            return self._get(v.pointer)
        if k is t.Force:
            v = e.val
            if type(v) is not t.ThkVal:
                raise Stuck(f"force of non-thunk {v!r}")
            return self._force(v.pointer)
        raise Stuck(f"no rule for {e!r}")


class RefEvaluator(_BaseEvaluator):
    """The non-incremental (reference) system over a plain store.

    The store maps pointers to ("ref", value) or ("thunk", computation);
    it only grows, allocation insists on fresh pointers, nothing is cached.
    """

    def __init__(self, store: dict | None = None, fix_budget: int | None = None):
        super().__init__(fix_budget)
        self.store = store if store is not None else {}

    def _ref(self, omega, name, value):
        self._hit("refPlain")
        q = Pointer(name, omega)
        if q in self.store:
            raise PointerCollision(f"reference allocation at occupied {q.render()}")
        self.store[q] = (REF_KIND, value)
        return t.Ret(t.RefVal(q))

    def _thunk(self, omega, name, body):
        self._hit("thunkPlain")
        q = Pointer(name, omega)
        if q in self.store:
            raise PointerCollision(f"thunk allocation at occupied {q.render()}")
        self.store[q] = (THUNK_KIND, body)
        return t.Ret(t.ThkVal(q))

    def _get(self, q):
        self._hit("getPlain")
        entry = self.store.get(q)
        if entry is None or entry[0] is not REF_KIND:
            raise Stuck(f"get of {q.render()} which holds no value")
        return t.Ret(entry[1])

    def _force(self, q):
        self._hit("forcePlain")
        entry = self.store.get(q)
        if entry is None or entry[0] is not THUNK_KIND:
            raise Stuck(f"force of {q.render()} which holds no thunk")
        return self.eval(q.namespace, entry[1])


class IncEvaluator(_BaseEvaluator):
    """The incremental system over a demanded computation graph.

    The current thunk (the judgment's ``p``) is the graph's force-stack top;
    at the outer level that is the root pointer.
    """

    def __init__(self, graph: dcg.Graph | None = None, fix_budget: int | None = None):
        super().__init__(fix_budget)
        self.graph = graph if graph is not None else dcg.Graph()

    def _ref(self, omega, name, value):
        g = self.graph
        q = Pointer(name, omega)
        outcome = g.put_ref(q, value)
        self._hit("refClean" if outcome == "unchanged" else "refDirty")
        g.add_edge(g.current_source(), dcg.ALLOC_REF, value, q)
        return t.Ret(t.RefVal(q))

    def _thunk(self, omega, name, body):
        g = self.graph
        q = Pointer(name, omega)
        outcome = g.put_thunk(q, body, None)
        self._hit("thunkClean" if outcome == "reused" else "thunkDirty")
        g.add_edge(g.current_source(), dcg.ALLOC_THUNK, (body, None), q)
        return t.Ret(t.ThkVal(q))

    def _get(self, q):
        self._hit("getClean")
        g = self.graph
        rec = g.nodes.get(q)
        if rec is None or rec.kind is not dcg.REF:
            raise Stuck(f"get of {q.render()} which holds no value")
        g.add_edge(g.current_source(), dcg.OBS_REF, rec.value, q)
        return t.Ret(rec.value)

    def _run_thunk(self, q, rec):
        self._hit("computeDep")
        return self.eval(q.namespace, rec.computation)

    def _force(self, q):
        g = self.graph
        rec = g.nodes.get(q)
        if rec is None or rec.kind is not dcg.THUNK:
            raise Stuck(f"force of {q.render()} which holds no thunk")
        if rec.has_cache() and g.all_clean_out(q):
            result = rec.cache
        else:
            scrubs_before = g.scrubs
            result = dcg.repair(g, q, self._run_thunk)
            self.rule_hits["scrubEdge"] = (
                self.rule_hits.get("scrubEdge", 0) + g.scrubs - scrubs_before
            )
        self._hit("forceClean")
        g.add_edge(g.current_source(), dcg.OBS_THUNK, result, q)
        return result

    def demand(self, omega, e):
        """Top-level evaluation as part of the root context."""
        return self.eval(omega, e)
