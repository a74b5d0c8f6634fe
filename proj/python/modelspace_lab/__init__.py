"""Finite-dimensional model-space toolkit (C++ core)."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import MslabError, run_suite as _run_suite


def run_suite_report(suite, **kwargs):
    """Run a verification suite and return the report as a dict."""
    return _json.loads(_run_suite(suite, **kwargs))
