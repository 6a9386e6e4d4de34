"""Python bindings for the mrlab maximal regularity toolkit."""

import json

from ._core import (
    ConfigError,
    MeshError,
    SolverError,
    Mesh,
    Space,
    __version__,
    dual_norm,
    hilbert_window,
    interp_exponent,
    interval_mesh,
    kappa_r0,
    rect_mesh,
    sneiberg_isomorphism_radius,
    sneiberg_surjectivity_radius,
    theta_from_r,
    w1q_norm,
)
from . import _core


def solve(config, out=None):
    """Run a linear solve from config text; returns the report as a dict."""
    return json.loads(_core.run_solve(config, out))


def estimate(config, out=None):
    return json.loads(_core.run_estimate(config, out))


def quasilinear(config, out=None):
    return json.loads(_core.run_quasilinear(config, out))


def window(c_lower, c_upper, C, s=None, r0=4.0, r1=4.0 / 3.0, mode="isomorphism"):
    return json.loads(_core.run_window(c_lower, c_upper, C, s, r0, r1, mode))


def acceptance(only=()):
    return _core.run_acceptance(list(only))
