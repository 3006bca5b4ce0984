"""Exact twisted de Rham, gerbe and finite-site computations."""

import json
import os
from pathlib import Path

_bundled = Path(__file__).with_name("fixtures")
if "TWISTCOH_FIXTURES" not in os.environ and _bundled.is_dir():
    os.environ["TWISTCOH_FIXTURES"] = str(_bundled)

from ._twistcoh import (  # noqa: E402
    ParseError,
    bs1_dims,
    fixture_directory,
    kernel_dim,
    rank,
    smith_invariants,
    twisted_betti,
)
from ._twistcoh import run as _run  # noqa: E402

__all__ = [
    "ParseError",
    "bs1_dims",
    "fixture_directory",
    "kernel_dim",
    "rank",
    "run",
    "smith_invariants",
    "twisted_betti",
    "load_fixture",
]


def run(command, input="", *, lambda_=None, presheaf="", functor="", fixtures="", max_degree=-1,
        p_min=1, p_max=-1, seed=None):
    """Run a CLI command in-process. Returns (exit_code, report dict)."""
    if isinstance(input, dict):
        input = json.dumps(input)
    if lambda_ is not None and not isinstance(lambda_, str):
        lambda_ = json.dumps(lambda_)
    code, text = _run(command, input, lambda_ or "", presheaf, functor, fixtures, max_degree, p_min, p_max, seed)
    return code, json.loads(text)


def load_fixture(name):
    """The JSON document of a bundled fixture."""
    with open(Path(fixture_directory()) / f"{name}.json") as f:
        return json.load(f)
