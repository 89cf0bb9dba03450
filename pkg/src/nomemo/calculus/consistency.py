"""Differential from-scratch-consistency checking.

For a generated case and a sequence of legal input-overwrite edits, each
prefix is checked two ways: the incremental evaluator re-runs the program on
its evolving graph, and the reference evaluator runs the same program from
scratch on a plain store holding just the (edited) inputs.  The terminals
must be equal, and the reference output store must embed into the restricted
incremental graph (same pointers, same contents once caches and edges are
dropped).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .. import graph as dcg
from ..errors import NomemoError
from ..names import TOP
from . import terms as t
from .evaluators import IncEvaluator, REF_KIND, RefEvaluator, THUNK_KIND
from .generate import Case, Edit, gen_edits, gen_program
from .sexpr import render, render_value


def restrict(graph: dcg.Graph, pointers=None) -> dict:
    """Definition of the graph-to-store restriction: keep the selected nodes,
    drop cached thunk results, erase all edges."""
    out = {}
    for p, rec in graph.nodes.items():
        if pointers is not None and p not in pointers:
            continue
        if rec.kind is dcg.REF:
            out[p] = (REF_KIND, rec.value)
        else:
            out[p] = (THUNK_KIND, rec.computation)
    return out


def embeds(store: dict, restricted: dict) -> str | None:
    """None if every store entry appears identically in the restriction,
    else a description of the first mismatch."""
    for p, entry in store.items():
        got = restricted.get(p)
        if got is None:
            return f"{p.render()} missing from restricted graph"
        if got != entry:
            return f"{p.render()}: store has {entry!r}, graph has {got!r}"
    return None


@dataclass
class Failure:
    seed: int
    step: int  # 0 = initial run, i = after edit i
    program: str
    edit: str
    kind: str
    detail: str

    def __str__(self):
        return (
            f"seed={self.seed} step={self.step} [{self.kind}] {self.detail}\n"
            f"  edit: {self.edit}\n  program: {self.program}"
        )


@dataclass
class Report:
    cases: int = 0
    evals: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def render(self) -> str:
        lines = [f"cases={self.cases} evals={self.evals} failures={len(self.failures)}"]
        lines.extend(str(f) for f in self.failures)
        return "\n".join(lines)


def _run_reference(case: Case, inputs: dict) -> tuple:
    store = {p: (REF_KIND, v) for p, v in inputs.items()}
    ev = RefEvaluator(store, fix_budget=256)
    result = ev.eval(TOP, case.body)
    return result, store


def check_consistency(case: Case, edits: list[Edit], report: Report | None = None) -> Report:
    """Differentially test one case across an edit script.

    The first failing step is recorded (smaller prefixes passed, so the
    report's trace is already minimal in the edit dimension).
    """
    if report is None:
        report = Report()
    report.cases += 1
    program_text = render(case.body)
    inc = IncEvaluator(fix_budget=256)
    inputs = dict(case.inputs)
    for p, v in inputs.items():
        inc.graph.put_ref(p, v)

    def fail(step, edit_desc, kind, detail):
        report.failures.append(
            Failure(case.seed, step, program_text, edit_desc, kind, detail)
        )

    for step in range(len(edits) + 1):
        edit_desc = "(initial)" if step == 0 else edits[step - 1].describe()
        if step > 0:
            edit = edits[step - 1]
            inputs[edit.pointer] = edit.value
            inc.graph.put_ref(edit.pointer, edit.value)
        try:
            t_inc = inc.eval(TOP, case.body)
        except NomemoError as exc:
            fail(step, edit_desc, "incremental-error", repr(exc))
            return report
        try:
            t_ref, store_ref = _run_reference(case, inputs)
        except NomemoError as exc:
            fail(step, edit_desc, "reference-error", repr(exc))
            return report
        report.evals += 2
        if t_inc != t_ref:
            fail(
                step,
                edit_desc,
                "terminal-mismatch",
                f"incremental {_show(t_inc)} != reference {_show(t_ref)}",
            )
            return report
        mismatch = embeds(store_ref, restrict(inc.graph))
        if mismatch is not None:
            fail(step, edit_desc, "embedding", mismatch)
            return report
        violations = inc.graph.check_well_formed()
        if violations:
            fail(step, edit_desc, "well-formedness", "; ".join(violations[:3]))
            return report
    return report


def _show(terminal) -> str:
    if isinstance(terminal, t.Ret):
        return f"(ret {render_value(terminal.value)})"
    return render(terminal)


def run_fuzz(
    programs: int,
    edits_per_program: int = 3,
    seed: int = 0,
    size: int = 20,
) -> Report:
    """Differentially test ``programs`` generated cases."""
    report = Report()
    for i in range(programs):
        case = gen_program(seed + i, size)
        edits = gen_edits(case, edits_per_program, seed=seed)
        check_consistency(case, edits, report)
    return report
