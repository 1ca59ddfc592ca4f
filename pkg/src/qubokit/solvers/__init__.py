"""Optimization engines over Ising models."""

from .annealing import solve_sa
from .bifurcation import integrate, resolve_c0, solve_sbm
from .branch_bound import BBNode, BBResult, bound_base, bound_spd, solve_bb
from .brute_force import DEFAULT_CAP, solve_brute_force
from .common import (
    BBParams,
    PaParams,
    Sample,
    SampleSet,
    SaParams,
    SbmParams,
    default_config,
    make_sampleset,
    params_from_dict,
    params_to_dict,
    replica_streams,
)
from .eigen import eig_extreme
from .parallel_annealing import resolve_lambda0, solve_pa

__all__ = [
    "solve_sa", "solve_pa", "solve_sbm", "solve_brute_force", "solve_bb",
    "bound_base", "bound_spd", "eig_extreme", "integrate",
    "resolve_c0", "resolve_lambda0",
    "BBNode", "BBResult", "Sample", "SampleSet",
    "SaParams", "PaParams", "SbmParams", "BBParams",
    "default_config", "make_sampleset", "params_from_dict", "params_to_dict",
    "replica_streams", "DEFAULT_CAP",
]
