"""Domain conversions: QUBO <-> Ising, binary <-> spin, cubic reduction.

All conversions are done by exact polynomial expansion of the variable maps
x_i = (1 + s_i) / 2 and s_i = 2 x_i - 1, with every constant folded into the
model offset, so converted models agree in energy on all states (not merely
up to an affine constant).
"""

from __future__ import annotations

import numpy as np

from .errors import UnsupportedOrderError, ValidationError
from .model import (
    BINARY_DOMAIN,
    SPIN_DOMAIN,
    HuboModel,
    IsingModel,
    QuboModel,
    ReductionMap,
    as_spins,
    bits_to_spins,
    spins_to_bits,
)

__all__ = [
    "qubo_to_ising",
    "ising_to_qubo",
    "reduce_cubic",
    "lift_solution",
    "spin_binary_convert",
    "hubo_to_spin_domain",
]


def qubo_to_ising(q: QuboModel) -> IsingModel:
    """Convert a QUBO to an Ising model under x_i = (1 + s_i) / 2.

    Each Q_ij x_i x_j expands to Q_ij (1 + s_i)(1 + s_j) / 4 and each
    diagonal Q_ii x_i to Q_ii (1 + s_i) / 2, so output energies equal input
    energies on all mapped states.
    """
    h = np.zeros(q.n)
    couplings: list[tuple[int, int, float]] = []
    offset = q.offset
    for i, j, v in zip(q.rows, q.cols, q.values):
        i, j = int(i), int(j)
        if i == j:
            h[i] += v / 2.0
            offset += v / 2.0
        else:
            couplings.append((i, j, v / 4.0))
            h[i] += v / 4.0
            h[j] += v / 4.0
            offset += v / 4.0
    return IsingModel.from_terms(q.n, h=h, couplings=couplings, offset=offset)


def ising_to_qubo(m: IsingModel) -> QuboModel:
    """Convert an Ising model to a QUBO under s_i = 2 x_i - 1."""
    terms: list[tuple[int, int, float]] = []
    offset = m.offset
    diag = np.zeros(m.n)
    for i, j, v in zip(m.rows, m.cols, m.values):
        i, j = int(i), int(j)
        terms.append((i, j, 4.0 * v))
        diag[i] -= 2.0 * v
        diag[j] -= 2.0 * v
        offset += v
    diag += 2.0 * m.h
    offset -= float(np.sum(m.h))
    terms.extend((i, i, diag[i]) for i in range(m.n) if diag[i] != 0.0)
    return QuboModel.from_terms(m.n, terms=terms, offset=offset)


def spin_binary_convert(v) -> np.ndarray:
    """Apply the bijection between spin and binary vectors (either direction).

    Spin input maps through x = (1 + s) / 2; binary input through s = 2x - 1.
    Composing the two directions is the identity.
    """
    v = np.asarray(v)
    if np.all(np.abs(v) == 1):
        return spins_to_bits(v)
    return bits_to_spins(v)


def reduce_cubic(h: HuboModel) -> tuple[IsingModel, ReductionMap]:
    """Reduce a spin HUBO of order <= 3 to an Ising model with auxiliaries.

    Every cubic term K s_i s_j s_k gets one auxiliary spin through the gadget

        +-(s_i s_j s_k) -> 3 +- (s_i + s_j + s_k + 2 s_aux)
                           + 2 s_aux (s_i + s_j + s_k)
                           + s_i s_j + s_j s_k + s_i s_k,

    scaled by |K|, with the sign chosen by sign(K).  Minimizing over the
    auxiliary reproduces the cubic value exactly for all 8 assignments, so
    the recorded affine relation is scale 1, shift 0.  Quadratic, linear and
    constant terms pass through unchanged.
    """
    if h.domain != SPIN_DOMAIN:
        raise ValidationError("cubic reduction expects a spin-domain HUBO")
    order = max((len(t) for t in h.term_index), default=0)
    if order > 3:
        raise UnsupportedOrderError(f"reduction supports order <= 3, model has order {order}")

    cubic = [(t, float(c)) for t, c in h.terms() if len(t) == 3 and c != 0.0]
    total_n = h.n + len(cubic)
    fields = np.zeros(total_n)
    couplings: list[tuple[int, int, float]] = []
    offset = 0.0

    for t, c in h.terms():
        if len(t) == 0:
            offset += c
        elif len(t) == 1:
            fields[t[0]] += c
        elif len(t) == 2:
            couplings.append((t[0], t[1], c))

    bindings = []
    for pos, ((i, j, k), coeff) in enumerate(cubic):
        aux = h.n + pos
        w = abs(coeff)
        sgn = 1.0 if coeff > 0 else -1.0
        offset += 3.0 * w
        for v in (i, j, k):
            fields[v] += w * sgn
            couplings.append((v, aux, 2.0 * w))
        fields[aux] += 2.0 * w * sgn
        couplings.append((i, j, w))
        couplings.append((j, k, w))
        couplings.append((i, k, w))
        bindings.append((aux, (i, j, k)))

    reduced = IsingModel.from_terms(total_n, h=fields, couplings=couplings, offset=offset)
    rmap = ReductionMap(original_n=h.n, aux_bindings=tuple(bindings))
    return reduced, rmap


def lift_solution(rmap: ReductionMap, reduced) -> np.ndarray:
    """Project a reduced-model spin state back to the original variables."""
    return rmap.lift(reduced)


def hubo_to_spin_domain(h: HuboModel) -> HuboModel:
    """Expand a binary-domain HUBO into the equivalent spin-domain HUBO.

    Each product of bits expands through x_i = (1 + s_i) / 2 into 2^k spin
    monomials of order <= k, so the polynomial order never grows.
    """
    if h.domain == SPIN_DOMAIN:
        return h
    from itertools import combinations

    acc: dict[tuple[int, ...], float] = {}
    for t, c in h.terms():
        k = len(t)
        base = c / (2.0 ** k)
        for r in range(k + 1):
            for sub in combinations(t, r):
                acc[sub] = acc.get(sub, 0.0) + base
    return HuboModel.from_terms(h.n, SPIN_DOMAIN, acc.items(), max_order=h.max_order)
