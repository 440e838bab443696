"""Curvature decomposition and holonomy classification of Walker metrics."""

import json

from ._core import (
    SCHEMA_VERSION,
    ConventionError,
    DegenerateScreenError,
    DomainError,
    Error,
    Geometry,
    ParseError,
    SpecError,
    __version__,
    default_point,
)
from . import _core

__all__ = [
    "SCHEMA_VERSION",
    "ConventionError",
    "DegenerateScreenError",
    "DomainError",
    "Error",
    "Geometry",
    "ParseError",
    "SpecError",
    "__version__",
    "analyze",
    "decompose",
    "default_point",
    "verify",
]


def decompose(geometry, point=None):
    """Curvature components at `point` (default (0, 1, ..., 1, 0)) as a dict."""
    return json.loads(_core._decompose(geometry, point))


def analyze(geometry, point=None, samples=5, curves=64, seed=0, tol=None, threads=0):
    """Full analysis report, as produced by `walkerhol analyze --json`."""
    return json.loads(_core._analyze(geometry, point, samples, curves, seed, tol, threads))


def verify(geometry, points=10, seed=0):
    """Invariant suite rows: name, residual, budget, pass, detail."""
    return json.loads(_core._verify(geometry, points, seed))
