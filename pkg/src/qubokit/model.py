"""Canonical data model for QUBO / Ising / HUBO problems and energy evaluation.

Conventions used throughout the toolkit:

* Ising energy:  H(s) = sum_{i<j} J_ij s_i s_j + sum_i h_i s_i + offset,
  with spins s_i in {-1, +1}.
* QUBO energy:   Q(x) = sum_{i<=j} Q_ij x_i x_j + offset, bits x_i in {0, 1}.
* HUBO energy:   sum over terms of coeff * prod of selected entries.  A HUBO
  carries no separate offset; constants live in a degree-0 term.
* sign(0) = +1 everywhere.

Models are immutable after construction (arrays are frozen) and therefore
safe to share across concurrent workers; all evaluation is stateless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import ValidationError

# Above this size, energy accumulation switches to exact (fsum) summation so
# large sparse sums do not lose digits against reference values.
COMPENSATED_SUM_THRESHOLD = 100_000

SPIN_DOMAIN = "spin"
BINARY_DOMAIN = "binary"


def sign_pm(x: np.ndarray) -> np.ndarray:
    """Sign with the global tie-break sign(0) = +1, returned as int8 spins."""
    return np.where(np.asarray(x) >= 0, 1, -1).astype(np.int8)


def as_spins(values, n: int | None = None) -> np.ndarray:
    """Validate and return a spin vector (entries exactly -1 or +1)."""
    v = np.asarray(values)
    if v.ndim != 1:
        raise ValidationError(f"spin vector must be 1-d, got shape {v.shape}")
    if not np.all(np.abs(v) == 1):
        raise ValidationError("spin vector entries must be -1 or +1")
    if n is not None and v.shape[0] != n:
        raise ValidationError(f"spin vector has length {v.shape[0]}, expected {n}")
    return v.astype(np.int8)


def as_bits(values, n: int | None = None) -> np.ndarray:
    """Validate and return a binary vector (entries exactly 0 or 1)."""
    v = np.asarray(values)
    if v.ndim != 1:
        raise ValidationError(f"binary vector must be 1-d, got shape {v.shape}")
    if not np.all((v == 0) | (v == 1)):
        raise ValidationError("binary vector entries must be 0 or 1")
    if n is not None and v.shape[0] != n:
        raise ValidationError(f"binary vector has length {v.shape[0]}, expected {n}")
    return v.astype(np.int8)


def spins_to_bits(s) -> np.ndarray:
    """Map spins to bits through x = (1 + s) / 2."""
    return ((1 + as_spins(s)) // 2).astype(np.int8)


def bits_to_spins(x) -> np.ndarray:
    """Map bits to spins through s = 2x - 1."""
    return (2 * as_bits(x) - 1).astype(np.int8)


def _accurate_sum(parts: np.ndarray, compensated: bool) -> float:
    if compensated:
        return math.fsum(parts.tolist())
    return float(np.sum(parts))


def _canonical_pairs(terms: Iterable[tuple[int, int, float]], n: int,
                     allow_diagonal: bool) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Deduplicate (i, j, v) terms into sorted upper-triangular arrays.

    Swapped index pairs are normalized to i <= j and duplicates are summed.
    """
    acc: dict[tuple[int, int], float] = {}
    for i, j, v in terms:
        i, j = int(i), int(j)
        if i > j:
            i, j = j, i
        if not (0 <= i <= j < n):
            raise ValidationError(f"term index pair ({i}, {j}) out of range for n={n}")
        if i == j and not allow_diagonal:
            raise ValidationError(f"diagonal coupling ({i}, {i}) not allowed; use the linear field")
        v = float(v)
        if not math.isfinite(v):
            raise ValidationError(f"non-finite coefficient for pair ({i}, {j})")
        acc[(i, j)] = acc.get((i, j), 0.0) + v
    keys = sorted(acc)
    rows = np.fromiter((k[0] for k in keys), dtype=np.int64, count=len(keys))
    cols = np.fromiter((k[1] for k in keys), dtype=np.int64, count=len(keys))
    vals = np.fromiter((acc[k] for k in keys), dtype=np.float64, count=len(keys))
    return rows, cols, vals


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class IsingModel:
    """Sparse symmetric Ising model: couplings on i<j pairs, fields, offset."""

    n: int
    h: np.ndarray
    rows: np.ndarray
    cols: np.ndarray
    values: np.ndarray
    offset: float = 0.0

    @classmethod
    def from_terms(cls, n: int, h=None, couplings: Iterable[tuple[int, int, float]] = (),
                   offset: float = 0.0) -> "IsingModel":
        if n < 1:
            raise ValidationError("model needs at least one variable")
        hv = np.zeros(n, dtype=np.float64) if h is None else np.asarray(h, dtype=np.float64)
        if hv.shape != (n,):
            raise ValidationError(f"field vector has shape {hv.shape}, expected ({n},)")
        if not np.all(np.isfinite(hv)):
            raise ValidationError("field vector must be finite")
        if not math.isfinite(offset):
            raise ValidationError("offset must be finite")
        rows, cols, vals = _canonical_pairs(couplings, n, allow_diagonal=False)
        return cls(n=n, h=_freeze(hv), rows=_freeze(rows), cols=_freeze(cols),
                   values=_freeze(vals), offset=float(offset))

    def __post_init__(self):
        object.__setattr__(self, "h", _freeze(np.asarray(self.h, dtype=np.float64)))
        object.__setattr__(self, "rows", _freeze(np.asarray(self.rows, dtype=np.int64)))
        object.__setattr__(self, "cols", _freeze(np.asarray(self.cols, dtype=np.int64)))
        object.__setattr__(self, "values", _freeze(np.asarray(self.values, dtype=np.float64)))

    @property
    def num_couplings(self) -> int:
        return int(self.values.shape[0])

    def couplings(self) -> list[tuple[int, int, float]]:
        return [(int(i), int(j), float(v)) for i, j, v in zip(self.rows, self.cols, self.values)]

    def energy(self, s) -> float:
        s = as_spins(s, self.n)
        compensated = self.n > COMPENSATED_SUM_THRESHOLD
        quad = _accurate_sum(self.values * s[self.rows] * s[self.cols], compensated)
        lin = _accurate_sum(self.h * s, compensated)
        return quad + lin + self.offset

    def energies(self, states: np.ndarray) -> np.ndarray:
        """Batch energies for a (replicas, n) array of spin states."""
        S = np.asarray(states, dtype=np.float64)
        quad = (S[:, self.rows] * S[:, self.cols]) @ self.values if self.num_couplings else 0.0
        return quad + S @ self.h + self.offset

    @cached_property
    def _matrix(self) -> np.ndarray:
        A = np.zeros((self.n, self.n), dtype=np.float64)
        A[self.rows, self.cols] = self.values
        A[self.cols, self.rows] = self.values
        A.setflags(write=False)
        return A

    def coupling_matrix(self) -> np.ndarray:
        """Dense symmetric coupling matrix with zero diagonal (read-only)."""
        return self._matrix

    @cached_property
    def _csr(self) -> sp.csr_array:
        both_r = np.concatenate([self.rows, self.cols])
        both_c = np.concatenate([self.cols, self.rows])
        both_v = np.concatenate([self.values, self.values])
        return sp.csr_array((both_v, (both_r, both_c)), shape=(self.n, self.n))

    def coupling_operator(self, dense_limit: int = 2048):
        """Symmetric coupling matrix as dense array or CSR, by problem size."""
        return self._matrix if self.n <= dense_limit else self._csr

    def neighbor_lists(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """CSR triplet (indptr, indices, data) of the symmetric adjacency."""
        csr = self._csr
        return csr.indptr, csr.indices, csr.data

    @cached_property
    def field_scale(self) -> float:
        """max_i (|h_i| + sum_j |J_ij|): dominates the gradient of H."""
        row = np.abs(self.h).copy()
        np.add.at(row, self.rows, np.abs(self.values))
        np.add.at(row, self.cols, np.abs(self.values))
        return float(row.max()) if self.n else 0.0


@dataclass(frozen=True)
class QuboModel:
    """Sparse QUBO: terms on i<=j pairs (i=j is the linear/diagonal term)."""

    n: int
    rows: np.ndarray
    cols: np.ndarray
    values: np.ndarray
    offset: float = 0.0

    @classmethod
    def from_terms(cls, n: int, terms: Iterable[tuple[int, int, float]] = (),
                   offset: float = 0.0) -> "QuboModel":
        if n < 1:
            raise ValidationError("model needs at least one variable")
        if not math.isfinite(offset):
            raise ValidationError("offset must be finite")
        rows, cols, vals = _canonical_pairs(terms, n, allow_diagonal=True)
        return cls(n=n, rows=_freeze(rows), cols=_freeze(cols), values=_freeze(vals),
                   offset=float(offset))

    def __post_init__(self):
        object.__setattr__(self, "rows", _freeze(np.asarray(self.rows, dtype=np.int64)))
        object.__setattr__(self, "cols", _freeze(np.asarray(self.cols, dtype=np.int64)))
        object.__setattr__(self, "values", _freeze(np.asarray(self.values, dtype=np.float64)))

    @property
    def num_terms(self) -> int:
        return int(self.values.shape[0])

    def terms(self) -> list[tuple[int, int, float]]:
        return [(int(i), int(j), float(v)) for i, j, v in zip(self.rows, self.cols, self.values)]

    def energy(self, x) -> float:
        x = as_bits(x, self.n)
        compensated = self.n > COMPENSATED_SUM_THRESHOLD
        return _accurate_sum(self.values * x[self.rows] * x[self.cols], compensated) + self.offset

    def energies(self, states: np.ndarray) -> np.ndarray:
        X = np.asarray(states, dtype=np.float64)
        quad = (X[:, self.rows] * X[:, self.cols]) @ self.values if self.num_terms else 0.0
        return quad + self.offset


@dataclass(frozen=True)
class HuboModel:
    """Higher-order polynomial over spin or binary variables.

    Terms are (strictly increasing index tuple, coefficient); the empty tuple
    holds the constant.  ``max_order`` is the declared order cap P.
    """

    n: int
    domain: str
    term_index: tuple[tuple[int, ...], ...]
    coefficients: np.ndarray
    max_order: int

    @classmethod
    def from_terms(cls, n: int, domain: str,
                   terms: Iterable[tuple[Sequence[int], float]],
                   max_order: int | None = None) -> "HuboModel":
        if n < 1:
            raise ValidationError("model needs at least one variable")
        if domain not in (SPIN_DOMAIN, BINARY_DOMAIN):
            raise ValidationError(f"unknown domain {domain!r}")
        acc: dict[tuple[int, ...], float] = {}
        for idx, coeff in terms:
            key = tuple(int(i) for i in sorted(idx))
            if len(set(key)) != len(key):
                raise ValidationError(f"term {key} repeats an index")
            if key and not (0 <= key[0] and key[-1] < n):
                raise ValidationError(f"term {key} out of range for n={n}")
            coeff = float(coeff)
            if not math.isfinite(coeff):
                raise ValidationError(f"non-finite coefficient for term {key}")
            acc[key] = acc.get(key, 0.0) + coeff
        keys = sorted(acc, key=lambda k: (len(k), k))
        order = max((len(k) for k in keys), default=1)
        if max_order is None:
            max_order = max(order, 1)
        if max_order < 1:
            raise ValidationError("max_order must be >= 1")
        if order > max_order:
            raise ValidationError(f"term of order {order} exceeds declared max_order {max_order}")
        coeffs = np.array([acc[k] for k in keys], dtype=np.float64)
        return cls(n=n, domain=domain, term_index=tuple(keys),
                   coefficients=_freeze(coeffs), max_order=int(max_order))

    def __post_init__(self):
        object.__setattr__(self, "coefficients",
                           _freeze(np.asarray(self.coefficients, dtype=np.float64)))

    @property
    def num_terms(self) -> int:
        return len(self.term_index)

    def terms(self) -> list[tuple[tuple[int, ...], float]]:
        return [(k, float(c)) for k, c in zip(self.term_index, self.coefficients)]

    @cached_property
    def _by_order(self) -> list[tuple[np.ndarray, np.ndarray]]:
        """Terms grouped by order as (index array (m, k), coeff array (m,))."""
        groups: dict[int, list[int]] = {}
        for pos, key in enumerate(self.term_index):
            groups.setdefault(len(key), []).append(pos)
        out = []
        for k in sorted(groups):
            pos = groups[k]
            idx = np.array([self.term_index[p] for p in pos], dtype=np.int64).reshape(len(pos), k)
            out.append((idx, self.coefficients[np.array(pos)]))
        return out

    def _check_domain(self, v) -> np.ndarray:
        if self.domain == SPIN_DOMAIN:
            return as_spins(v, self.n)
        return as_bits(v, self.n)

    def energy(self, v) -> float:
        v = self._check_domain(v).astype(np.float64)
        total = 0.0
        for idx, coeffs in self._by_order:
            if idx.shape[1] == 0:
                total += float(coeffs.sum())
            else:
                total += float(np.prod(v[idx], axis=1) @ coeffs)
        return total

    def energies(self, states: np.ndarray) -> np.ndarray:
        V = np.asarray(states, dtype=np.float64)
        total = np.zeros(V.shape[0])
        for idx, coeffs in self._by_order:
            if idx.shape[1] == 0:
                total += coeffs.sum()
            else:
                total += np.prod(V[:, idx], axis=2) @ coeffs
        return total


@dataclass(frozen=True)
class ReductionMap:
    """Bookkeeping for a cubic-to-quadratic reduction.

    One auxiliary spin per cubic term; ``aux_bindings`` lists
    (aux_index, (i, j, k)).  Reduced and original optima are related by
    ``reduced = energy_scale * original + energy_shift`` (the gadget used here
    is exact, so scale is 1 and shift 0, but the affine record is kept).
    """

    original_n: int
    aux_bindings: tuple[tuple[int, tuple[int, int, int]], ...] = ()
    energy_scale: float = 1.0
    energy_shift: float = 0.0

    def __post_init__(self):
        if self.energy_scale <= 0:
            raise ValidationError("energy_scale must be positive")
        for pos, (aux, trip) in enumerate(self.aux_bindings):
            if aux != self.original_n + pos:
                raise ValidationError("aux indices must be contiguous from original_n")
            if not (trip[0] < trip[1] < trip[2]):
                raise ValidationError(f"binding triple {trip} must be strictly increasing")

    @property
    def reduced_n(self) -> int:
        return self.original_n + len(self.aux_bindings)

    def lift(self, reduced) -> np.ndarray:
        reduced = as_spins(reduced)
        if reduced.shape[0] != self.reduced_n:
            raise ValidationError(
                f"reduced state has length {reduced.shape[0]}, expected {self.reduced_n}")
        return reduced[: self.original_n].copy()


def energy_ising(model: IsingModel, s) -> float:
    """Ising energy of a spin state (couplings + fields + offset)."""
    return model.energy(s)


def energy_qubo(model: QuboModel, x) -> float:
    """QUBO energy of a binary state."""
    return model.energy(x)


def energy_hubo(model: HuboModel, v) -> float:
    """HUBO energy of a state matching the model domain."""
    return model.energy(v)
