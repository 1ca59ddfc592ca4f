"""Tests for model types and energy evaluation."""

import numpy as np
import pytest

from qubokit import (
    HuboModel,
    IsingModel,
    QuboModel,
    ValidationError,
    as_bits,
    as_spins,
    energy_hubo,
    energy_ising,
    energy_qubo,
    sign_pm,
)
from qubokit.generators import apply_gauge, gen_random

from oracles import all_spin_states, hubo_energy_naive, ising_energy_naive, qubo_energy_naive


class TestIsingEnergy:
    def test_single_field(self):
        m = IsingModel.from_terms(1, h=[1.0])
        assert energy_ising(m, [1]) == 1.0

    def test_ferromagnetic_pair(self):
        m = IsingModel.from_terms(2, couplings=[(0, 1, -1.0)])
        assert energy_ising(m, [1, 1]) == -1.0

    def test_dimension_mismatch(self):
        m = IsingModel.from_terms(2, couplings=[(0, 1, -1.0)])
        with pytest.raises(ValidationError):
            energy_ising(m, [1, 1, 1])

    def test_offset_included(self):
        m = IsingModel.from_terms(1, h=[0.0], offset=2.5)
        assert energy_ising(m, [-1]) == 2.5

    def test_minimum_matches_naive_enumeration(self):
        m = gen_random("complete", "gaussian", 11, n=10)
        states = all_spin_states(10)
        lib_min = m.energies(states).min()
        naive_min = min(ising_energy_naive(m, s) for s in states)
        assert lib_min == pytest.approx(naive_min, abs=1e-12)

    def test_batch_matches_scalar(self):
        m = gen_random("complete", "uniform", 3, n=8)
        states = all_spin_states(8)[:17]
        batch = m.energies(states)
        for s, e in zip(states, batch):
            assert m.energy(s) == pytest.approx(float(e), abs=1e-12)

    def test_purity(self):
        m = gen_random("complete", "gaussian", 5, n=12)
        s = all_spin_states(12)[1234]
        assert m.energy(s) == m.energy(s)


class TestQuboEnergy:
    def test_zero_vector(self):
        q = QuboModel.from_terms(1, terms=[(0, 0, 1.0)])
        assert energy_qubo(q, [0]) == 0.0

    def test_diagonal_is_linear(self):
        q = QuboModel.from_terms(1, terms=[(0, 0, 1.0)])
        assert energy_qubo(q, [1]) == 1.0

    def test_full_enumeration_matches_oracle(self):
        rng = np.random.default_rng(7)
        n = 12
        terms = [(i, j, float(rng.normal())) for i in range(n) for j in range(i, n)
                 if rng.random() < 0.5]
        q = QuboModel.from_terms(n, terms=terms)
        bits = ((np.arange(2 ** n)[:, None] >> np.arange(n)[None, :]) & 1).astype(np.int8)
        lib_min = q.energies(bits).min()
        naive_min = min(qubo_energy_naive(q, x) for x in bits)
        assert lib_min == pytest.approx(naive_min, abs=1e-12)

    def test_dimension_mismatch(self):
        q = QuboModel.from_terms(2, terms=[(0, 1, 1.0)])
        with pytest.raises(ValidationError):
            energy_qubo(q, [1])


class TestHuboEnergy:
    def test_all_up_product(self):
        h = HuboModel.from_terms(3, "spin", [((0, 1, 2), 1.0)])
        assert energy_hubo(h, [1, 1, 1]) == 1.0

    def test_sign_flip(self):
        h = HuboModel.from_terms(3, "spin", [((0, 1, 2), 1.0)])
        assert energy_hubo(h, [-1, 1, 1]) == -1.0

    def test_domain_mismatch(self):
        h = HuboModel.from_terms(3, "spin", [((0, 1, 2), 1.0)])
        with pytest.raises(ValidationError):
            energy_hubo(h, [0, 1, 1])

    def test_random_cubic_enumeration_matches_oracle(self):
        rng = np.random.default_rng(3)
        n = 8
        terms = []
        for _ in range(25):
            order = int(rng.integers(1, 4))
            idx = tuple(sorted(rng.choice(n, size=order, replace=False)))
            terms.append((idx, float(rng.normal())))
        h = HuboModel.from_terms(n, "spin", terms)
        states = all_spin_states(n)
        lib_min = h.energies(states).min()
        naive_min = min(hubo_energy_naive(h, s) for s in states)
        assert lib_min == pytest.approx(naive_min, abs=1e-12)

    def test_constant_term(self):
        h = HuboModel.from_terms(2, "spin", [((), 4.0), ((0,), 1.0)])
        assert energy_hubo(h, [-1, 1]) == 3.0


class TestValidation:
    def test_duplicate_pairs_summed(self):
        m = IsingModel.from_terms(3, couplings=[(0, 1, 1.0), (1, 0, 2.0)])
        assert m.num_couplings == 1
        assert m.couplings() == [(0, 1, 3.0)]

    def test_diagonal_coupling_rejected(self):
        with pytest.raises(ValidationError):
            IsingModel.from_terms(2, couplings=[(1, 1, 1.0)])

    def test_out_of_range(self):
        with pytest.raises(ValidationError):
            IsingModel.from_terms(2, couplings=[(0, 2, 1.0)])

    def test_non_finite_rejected(self):
        with pytest.raises(ValidationError):
            IsingModel.from_terms(2, couplings=[(0, 1, np.inf)])
        with pytest.raises(ValidationError):
            IsingModel.from_terms(1, h=[np.nan])

    def test_hubo_duplicate_index(self):
        with pytest.raises(ValidationError):
            HuboModel.from_terms(3, "spin", [((0, 0, 1), 1.0)])

    def test_spin_vector_validation(self):
        with pytest.raises(ValidationError):
            as_spins([1, 0, -1])
        with pytest.raises(ValidationError):
            as_bits([0, 2])

    def test_models_immutable(self):
        m = IsingModel.from_terms(2, h=[1.0, 0.0], couplings=[(0, 1, 1.0)])
        with pytest.raises(ValueError):
            m.h[0] = 5.0


class TestGaugeCovariance:
    def test_energy_invariant_under_gauge(self):
        rng = np.random.default_rng(21)
        for trial in range(5):
            m = gen_random("complete", "gaussian", 30 + trial, n=12)
            s = rng.choice(np.array([-1, 1], dtype=np.int8), size=12)
            g = rng.choice(np.array([-1, 1], dtype=np.int8), size=12)
            m2, s2, _ = apply_gauge(m, s, g)
            assert m2.energy(s2) == pytest.approx(m.energy(s), abs=1e-12)


def test_sign_zero_is_plus_one():
    assert np.array_equal(sign_pm(np.array([0.0, -0.0, 1.5, -2.0])),
                          np.array([1, 1, 1, -1], dtype=np.int8))
