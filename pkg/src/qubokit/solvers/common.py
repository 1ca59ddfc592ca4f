"""Shared solver types: samples, parameter records, replica RNG streams.

Replica r of a solver seeded with ``seed`` always draws from the Philox
stream ``rng_stream(seed, r)``, so results are independent of how replicas
are scheduled and bitwise reproducible for a fixed (model, params, seed).
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from ..errors import ValidationError
from ..generators import rng_stream
from ..model import IsingModel


class Sample(NamedTuple):
    state: np.ndarray
    energy: float
    replica: int


@dataclass
class SampleSet:
    """Seeded, replica-indexed ensemble of (state, energy), best-first."""

    samples: list[Sample]
    replica_count: int
    seed: int | None
    wall_time: float = 0.0

    @property
    def best(self) -> Sample:
        return self.samples[0]

    def energies(self) -> np.ndarray:
        return np.array([s.energy for s in self.samples])

    def __len__(self) -> int:
        return len(self.samples)


def make_sampleset(model: IsingModel, states: np.ndarray, seed,
                   wall_time: float = 0.0) -> SampleSet:
    """Assemble a SampleSet from per-replica final states.

    Energies are re-evaluated through the model so every recorded energy is
    exactly the model energy of its state; ordering is ascending by energy
    with replica index as the stable tie-break.
    """
    states = np.asarray(states, dtype=np.int8)
    energies = model.energies(states)
    order = np.argsort(energies, kind="stable")
    samples = [Sample(states[r].copy(), float(energies[r]), int(r)) for r in order]
    return SampleSet(samples=samples, replica_count=states.shape[0], seed=seed,
                     wall_time=wall_time)


def replica_streams(seed, count: int) -> list[np.random.Generator]:
    return [rng_stream(seed, r) for r in range(count)]


def _positive(name: str, value: float):
    if not value > 0:
        raise ValidationError(f"{name} must be positive, got {value}")


@dataclass
class SaParams:
    """Simulated annealing: Metropolis sweeps with geometric cooling."""

    sweeps: int = 1000
    T_init: float | None = None      # None: 2 * model field scale
    T_final: float | None = None     # None: 1e-3 * resolved T_init
    schedule: str = "geometric"
    replicas: int = 32
    seed: int = 0

    def validate(self):
        _positive("sweeps", self.sweeps)
        _positive("replicas", self.replicas)
        if self.schedule != "geometric":
            raise ValidationError("only the geometric schedule is supported")
        if self.T_init is not None and self.T_final is not None:
            if not (self.T_init >= self.T_final > 0):
                raise ValidationError("need T_init >= T_final > 0")


@dataclass
class PaParams:
    """Parallel annealing: straight-through gradient descent with momentum.

    lambda0 None resolves to max_i (|h_i| + sum_j |J_ij|); the ramp
    lambda(t) = lambda0 * (1 - t / steps) decreases to zero.
    """

    steps: int = 1000
    learning_rate: float = 0.05
    momentum: float = 0.9
    lambda0: float | None = None
    replicas: int = 32
    seed: int = 0

    def validate(self):
        _positive("steps", self.steps)
        _positive("learning_rate", self.learning_rate)
        if not (0 <= self.momentum < 1):
            raise ValidationError("momentum must lie in [0, 1)")
        if self.lambda0 is not None:
            _positive("lambda0", self.lambda0)
        _positive("replicas", self.replicas)


@dataclass
class SbmParams:
    """Simulated bifurcation: Hamilton equations with a linear a(t) ramp.

    c0 None resolves to 1 / lambda_max of the coupling matrix driving the
    dynamics (power-iteration estimate with a norm-bound fallback).
    """

    steps: int = 10_000
    dt: float = 0.01
    a0: float = 1.0
    c0: float | None = None
    q_cap: float = 1.0
    init_noise: float = 1.0
    replicas: int = 32
    seed: int = 0

    def validate(self):
        _positive("steps", self.steps)
        _positive("dt", self.dt)
        _positive("a0", self.a0)
        if self.c0 is not None:
            _positive("c0", self.c0)
        _positive("q_cap", self.q_cap)
        _positive("init_noise", self.init_noise)
        _positive("replicas", self.replicas)


@dataclass
class BBParams:
    """Branch & bound configuration.

    ``bound_kind``: ``base`` (prefix energy), ``spd`` (folded SPD
    relaxation score), ``spd_admissible`` (SPD score corrected into a true
    lower bound), or ``spd_literal`` (SPD score on the bare reduced
    subproblem with no cross-term folding, kept for comparability).
    ``leaf_size`` closes nodes by exact enumeration once that many free
    variables remain.
    """

    bound_kind: str = "spd_admissible"
    pool_limit: int = 2 ** 20
    epsilon: float = 1e-6
    time_limit: float | None = None
    leaf_size: int = 12

    def validate(self):
        if self.bound_kind not in ("base", "spd", "spd_admissible", "spd_literal"):
            raise ValidationError(f"unknown bound_kind {self.bound_kind!r}")
        if self.pool_limit < 1:
            raise ValidationError("pool_limit must be >= 1")
        _positive("epsilon", self.epsilon)
        if self.time_limit is not None:
            _positive("time_limit", self.time_limit)
        if self.leaf_size < 1:
            raise ValidationError("leaf_size must be >= 1")


PARAM_CLASSES = {"sa": SaParams, "pa": PaParams, "sbm": SbmParams, "bb": BBParams}


def params_to_dict(params) -> dict:
    return dataclasses.asdict(params)


def params_from_dict(solver_id: str, data: dict):
    cls = PARAM_CLASSES.get(solver_id)
    if cls is None:
        raise ValidationError(f"no parameter record for solver {solver_id!r}")
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ValidationError(f"unknown {solver_id} parameters: {sorted(unknown)}")
    params = cls(**data)
    params.validate()
    return params


def default_config() -> str:
    """JSON dump of every solver's default parameter record."""
    return json.dumps({k: params_to_dict(cls()) for k, cls in PARAM_CLASSES.items()},
                      indent=2)
