"""Compression level and energy management for an energy-harvesting sensor node."""

import json

from ._ehdist import (
    CausalityError,
    ConfigError,
    DomainError,
    UnsupportedConfigError,
    compare,
    default_config,
    energy_table,
    evaluate,
    expected_distortion,
    simulate,
    solve,
    solve_k_r,
    solve_k_star,
    source_distortion,
    sweep_distance,
    sweep_mu,
    verify,
)


def config(**sections):
    """Default config with the given sections merged in, as a JSON string."""
    doc = json.loads(default_config())
    for name, values in sections.items():
        doc.setdefault(name, {}).update(values)
    return json.dumps(doc)


__all__ = [
    "CausalityError",
    "ConfigError",
    "DomainError",
    "UnsupportedConfigError",
    "compare",
    "config",
    "default_config",
    "energy_table",
    "evaluate",
    "expected_distortion",
    "simulate",
    "solve",
    "solve_k_r",
    "solve_k_star",
    "source_distortion",
    "sweep_distance",
    "sweep_mu",
    "verify",
]
