"""Exact checks for infinitesimal affine structures over Weil algebras."""

import json

from ._infaff import EvaluationError, ParseError, render
from ._infaff import eval as _eval
from ._infaff import check_json as _check_json
from ._infaff import selftest_json as _selftest_json

__all__ = ["EvaluationError", "ParseError", "check", "evaluate", "render", "selftest"]


def check(text, seed=0, timing=True):
    """Run the checks of a scenario; returns the JSON report as a dict."""
    return json.loads(_check_json(text, seed, timing))


def evaluate(text, expr):
    """Normal form of `expr` evaluated against the scenario's declarations."""
    return _eval(text, expr)


def selftest(grid="small", seed=0, criterion=0, timing=True):
    """Built-in theorem suite (one criterion if `criterion` is 1..12)."""
    return json.loads(_selftest_json(grid, seed, criterion, timing))
