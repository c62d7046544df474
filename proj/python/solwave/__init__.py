"""Pseudo-spectral solitary waves of u_t + (Lambda^s u - u Lambda^r u^2)_x = 0."""

from ._core import (
    ConfigError,
    commutator_decay,
    echo_config,
    evolve,
    functionals,
    nonlinear_bound,
    residual,
    run_config,
    smoothness,
    solve,
    sweep,
    tail_mass,
    traveling_frame_error,
    wave_speed,
)

__all__ = [
    "ConfigError",
    "commutator_decay",
    "echo_config",
    "evolve",
    "functionals",
    "nonlinear_bound",
    "residual",
    "run_config",
    "smoothness",
    "solve",
    "sweep",
    "tail_mass",
    "traveling_frame_error",
    "wave_speed",
]
