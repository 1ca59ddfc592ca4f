"""Tests for the heuristic engines: SA, PA, SBM."""

import numpy as np
import pytest

from qubokit import (
    IsingModel,
    PaParams,
    SaParams,
    SbmParams,
    ValidationError,
    solve_brute_force,
    solve_pa,
    solve_sa,
    solve_sbm,
)
from qubokit.generators import gen_random
from qubokit.solvers import resolve_c0, resolve_lambda0
from qubokit.solvers.bifurcation import integrate
from qubokit.solvers.common import params_from_dict, params_to_dict


def ferro_pair():
    return IsingModel.from_terms(2, couplings=[(0, 1, -1.0)])


class TestSimulatedAnnealing:
    def test_ferromagnetic_pair_ground_state(self):
        m = ferro_pair()
        found = 0
        for seed in range(100):
            r = solve_sa(m, SaParams(sweeps=50, replicas=1, seed=seed))
            found += r.best.energy == -1.0
        assert found >= 99

    def test_matches_brute_force_n16(self):
        hits = 0
        for seed in range(10):
            m = gen_random("complete", "uniform", 300 + seed, n=16)
            _, gs = solve_brute_force(m)
            r = solve_sa(m, SaParams(sweeps=500, replicas=32, seed=seed))
            hits += abs(r.best.energy - gs) < 1e-9
        assert hits >= 9

    def test_zero_model(self):
        m = IsingModel.from_terms(4)
        r = solve_sa(m, SaParams(sweeps=10, replicas=2, seed=0))
        assert r.best.energy == 0.0

    def test_sampleset_sorted_and_consistent(self):
        m = gen_random("complete", "gaussian", 17, n=12)
        r = solve_sa(m, SaParams(sweeps=100, replicas=8, seed=1))
        energies = r.energies()
        assert np.all(np.diff(energies) >= 0)
        assert r.replica_count == 8
        for s in r.samples:
            assert m.energy(s.state) == pytest.approx(s.energy, abs=1e-9)

    def test_deterministic(self):
        m = gen_random("complete", "gaussian", 23, n=10)
        a = solve_sa(m, SaParams(sweeps=200, replicas=4, seed=7))
        b = solve_sa(m, SaParams(sweeps=200, replicas=4, seed=7))
        assert [s.energy for s in a.samples] == [s.energy for s in b.samples]
        assert all(np.array_equal(x.state, y.state) for x, y in zip(a.samples, b.samples))


class TestParallelAnnealing:
    def test_single_spin_field(self):
        m = IsingModel.from_terms(1, h=[-1.0])
        r = solve_pa(m, PaParams(steps=200, replicas=4, seed=0))
        assert r.best.energy == -1.0
        assert np.array_equal(r.best.state, [1])

    def test_lambda0_auto_formula(self):
        m = IsingModel.from_terms(3, h=[1.0, -2.0, 0.5],
                                  couplings=[(0, 1, 2.0), (1, 2, -3.0)])
        # max_i(|h_i| + sum_j |J_ij|): i=1 gives 2 + 2 + 3 = 7
        assert resolve_lambda0(m) == pytest.approx(7.0)

    def test_matches_brute_force_n16(self):
        hits = 0
        for seed in range(10):
            m = gen_random("complete", "uniform", 300 + seed, n=16)
            _, gs = solve_brute_force(m)
            r = solve_pa(m, PaParams(steps=500, replicas=32, seed=seed))
            hits += abs(r.best.energy - gs) < 1e-9
        assert hits >= 9

    def test_clipping_invariant(self):
        # replicate the loop, asserting spins stay inside [-1, 1] each step
        from qubokit.model import sign_pm
        from qubokit.solvers.common import replica_streams

        m = gen_random("complete", "gaussian", 41, n=10)
        params = PaParams(steps=100, replicas=4, seed=3)
        lam0 = resolve_lambda0(m)
        streams = replica_streams(params.seed, params.replicas)
        X = np.stack([g.uniform(-1, 1, size=m.n) for g in streams])
        M = np.zeros_like(X)
        A = m.coupling_matrix()
        for t in range(params.steps):
            lam = lam0 * (1 - t / params.steps)
            grad = lam * X + sign_pm(X).astype(float) @ A + m.h
            M = params.momentum * M - params.learning_rate * grad
            X = np.clip(X + M, -1.0, 1.0)
            assert np.all(np.abs(X) <= 1.0)

    def test_deterministic(self):
        m = gen_random("complete", "gaussian", 29, n=10)
        a = solve_pa(m, PaParams(steps=100, replicas=4, seed=5))
        b = solve_pa(m, PaParams(steps=100, replicas=4, seed=5))
        assert all(np.array_equal(x.state, y.state) for x, y in zip(a.samples, b.samples))


class TestSimulatedBifurcation:
    def test_two_oscillator_sync(self):
        # strong ferromagnetic coupling: both ends settle with equal signs
        m = IsingModel.from_terms(2, couplings=[(0, 1, -10.0)])
        agree = 0
        for seed in range(100):
            r = solve_sbm(m, SbmParams(steps=1000, dt=0.1, replicas=1, seed=seed))
            s = r.best.state
            agree += s[0] == s[1]
        assert agree >= 99

    def test_matches_brute_force_n16(self):
        hits = 0
        for seed in range(10):
            m = gen_random("complete", "uniform", 300 + seed, n=16)
            _, gs = solve_brute_force(m)
            r = solve_sbm(m, SbmParams(steps=1000, dt=0.1, replicas=32, seed=seed))
            hits += abs(r.best.energy - gs) < 1e-9
        assert hits >= 9

    def test_unbiased_signs_for_free_oscillator(self):
        # J = 0, h = 0: final sign distribution balanced over seeds
        m = IsingModel.from_terms(1)
        params = SbmParams(steps=200, dt=0.05, replicas=10_000, seed=123)
        r = solve_sbm(m, params)
        ups = sum(int(s.state[0] == 1) for s in r.samples)
        assert 0.45 <= ups / 10_000 <= 0.55

    def test_c0_auto_resolution(self):
        m = gen_random("complete", "uniform", 55, n=12)
        lam_max = float(np.linalg.eigvalsh(-m.coupling_matrix())[-1])
        assert resolve_c0(m) == pytest.approx(1.0 / lam_max, rel=1e-6)
        assert resolve_c0(IsingModel.from_terms(3, h=[1, 1, 1])) == 1.0

    def test_symplectic_energy_drift_bounded(self):
        # c0 = 0, a(t) = a0 constant: separable Hamiltonian
        # (a0/2) p^2 + q^4/4 is conserved up to bounded O(dt) wobble
        a0, dt, steps = 1.0, 0.01, 10_000
        Q = np.array([[0.5]])
        P = np.array([[0.0]])

        def sep_energy(q, p):
            return 0.5 * a0 * p ** 2 + 0.25 * q ** 4

        e0 = float(sep_energy(Q, P)[0, 0])
        B = np.zeros((1, 1))
        g = np.zeros(1)
        drift_first = drift_last = 0.0
        for half in range(2):
            Q, P = integrate(B, g, Q, P, dt, np.full(steps // 2, a0), a0, 0.0,
                             q_cap=np.inf)
            drift = abs(float(sep_energy(Q, P)[0, 0]) - e0)
            if half == 0:
                drift_first = drift
            else:
                drift_last = drift
        assert drift_last < 0.05 * e0 + 1e-12
        assert drift_last < 10 * max(drift_first, 1e-6)  # bounded, not growing

    def test_divergence_guard_clips(self):
        m = IsingModel.from_terms(1, h=[100.0])
        r = solve_sbm(m, SbmParams(steps=500, dt=0.1, replicas=2, seed=0, c0=5.0))
        assert r.best.energy == -100.0  # clipped run still lands on a spin

    def test_deterministic(self):
        m = gen_random("complete", "gaussian", 31, n=10)
        a = solve_sbm(m, SbmParams(steps=300, dt=0.05, replicas=4, seed=9))
        b = solve_sbm(m, SbmParams(steps=300, dt=0.05, replicas=4, seed=9))
        assert all(np.array_equal(x.state, y.state) for x, y in zip(a.samples, b.samples))


class TestParams:
    def test_validation(self):
        with pytest.raises(ValidationError):
            SaParams(sweeps=0).validate()
        with pytest.raises(ValidationError):
            PaParams(momentum=1.0).validate()
        with pytest.raises(ValidationError):
            SbmParams(dt=-0.1).validate()

    def test_json_round_trip(self):
        p = PaParams(steps=123, learning_rate=0.07, seed=5)
        back = params_from_dict("pa", params_to_dict(p))
        assert back == p

    def test_unknown_keys_rejected(self):
        with pytest.raises(ValidationError):
            params_from_dict("sa", {"swups": 10})
