"""Core-calculus interpreters and the differential consistency checker."""

from .consistency import Report, check_consistency, embeds, restrict, run_fuzz
from .evaluators import COMMON_RULES, INC_RULES, PLAIN_RULES, IncEvaluator, RefEvaluator
from .generate import Case, Edit, gen_edits, gen_program
from .sexpr import parse, render, render_value
from . import terms

__all__ = [
    "COMMON_RULES",
    "Case",
    "Edit",
    "INC_RULES",
    "IncEvaluator",
    "PLAIN_RULES",
    "RefEvaluator",
    "Report",
    "check_consistency",
    "embeds",
    "gen_edits",
    "gen_program",
    "parse",
    "render",
    "render_value",
    "restrict",
    "terms",
]
