"""Photon-number-resolved phase-space tomography.

Density matrices are complex numpy arrays. States are described by small
dicts, e.g. ``{"type": "coherent", "beta": [1.0, 0.5]}``.
"""

import json

from . import _pntomo
from ._pntomo import (
    ConvergenceError,
    Table,
    ValidationError,
    admissible_s_range,
    apply_efficiency,
    characteristic_function,
    default_s,
    displaced_number_probabilities,
    displacement,
    effective_efficiency,
    fidelity,
    grid,
    invert_efficiency,
    q_from_zero_counts,
    read_density,
    reconstruct,
    simulate,
    squeeze,
    t_operator,
    trace_distance,
    weight_function,
    write_density,
)

__all__ = [
    "ConvergenceError",
    "Table",
    "ValidationError",
    "admissible_s_range",
    "apply_efficiency",
    "build_state",
    "characteristic_function",
    "default_s",
    "describe_state",
    "displaced_number_probabilities",
    "displacement",
    "effective_efficiency",
    "fidelity",
    "grid",
    "invert_efficiency",
    "q_from_zero_counts",
    "read_density",
    "reconstruct",
    "simulate",
    "squeeze",
    "t_operator",
    "trace_distance",
    "weight_function",
    "write_density",
]


def build_state(spec, dim):
    """Density matrix of a named state truncated to ``dim`` levels."""
    return _pntomo.build_state(json.dumps(spec), dim)


def describe_state(spec):
    return _pntomo.describe_state(json.dumps(spec))
