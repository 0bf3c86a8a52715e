"""Carleman-linearized D1Q3 shallow-water model: lattice, Carleman matrices,
forward-Euler linear system, condition numbers and inverse-polynomial degrees."""

import json

from ._swe_carleman import (
    SOUND_SPEED_SQ,
    VELOCITIES,
    WEIGHTS,
    ConvergenceError,
    DegreeCapError,
    InstabilityError,
    ResidualError,
    assemble,
    build_carleman,
    carleman_dimension,
    chebyshev_eval,
    condition_number,
    embed_state,
    equilibrium,
    extract_state,
    initial_field,
    inverse_poly,
    macro_state,
    reference_run,
    simulate,
)
from . import _swe_carleman as _core

__all__ = [
    "SOUND_SPEED_SQ", "VELOCITIES", "WEIGHTS",
    "ConvergenceError", "DegreeCapError", "InstabilityError", "ResidualError",
    "assemble", "build_carleman", "carleman_dimension", "chebyshev_eval", "condition_number",
    "embed_state", "equilibrium", "extract_state", "initial_field", "inverse_poly", "macro_state",
    "reference_run", "simulate",
    "bench_stable", "bench_sound_speed", "bench_truncation", "bench_kappa", "bench_qsvt_degree",
]


def bench_stable(h0=(0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09, 0.1),
                 grid_points=4, timesteps=4, dt=0.1, g=9.81, jobs=1):
    return json.loads(_core._bench_stable(list(h0), grid_points, timesteps, dt, g, jobs))


def bench_sound_speed(h0=(0.02, 0.04, 0.06, 0.08, 0.1), grid_points=16, g=9.81,
                      simulator="carleman", jobs=1):
    return json.loads(_core._bench_sound_speed(list(h0), grid_points, g, simulator, jobs))


def bench_truncation(deviations=(0.02, 0.01, 0.005), timesteps=4, jobs=1):
    return json.loads(_core._bench_truncation(list(deviations), timesteps, jobs))


def bench_kappa(timesteps=(2, 4, 8, 16), grid_points=(3, 4, 5, 6), grid_timesteps=4, jobs=1):
    return json.loads(_core._bench_kappa(list(timesteps), list(grid_points), grid_timesteps, jobs))


def bench_qsvt_degree(kappas=(4, 8, 16, 32, 64), epsilon=0.01, jobs=1):
    return json.loads(_core._bench_qsvt_degree(list(kappas), epsilon, jobs))
