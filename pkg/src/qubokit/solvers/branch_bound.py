"""Branch & bound over spin prefixes with prefix-energy and SPD bounds.

Nodes fix spins for a prefix U = {0, ..., k-1} of a fixed variable order
(descending |h_i| + sum_j |J_ij|).  The search is best-first on the node
bound; children fix the next variable to +-1.  Bound functions:

* ``base``: the prefix subproblem energy (no contribution from free spins).
* ``spd``: prefix energy plus the minimum of the convex relaxation of the
  remaining subproblem, obtained by shifting the remaining coupling matrix
  by d = max(0, -eigmin) + eps into positive definite form and solving
  J~ r* = -h~ (fixed spins folded into the remaining linear terms).
* ``spd_admissible``: the spd value minus d * |remaining|, making it a true
  lower bound on any binary completion, so pruning is exact.
* ``spd_literal``: spd without cross-term folding (bare reduced subproblem),
  kept for comparison.

In ``spd_admissible`` mode nodes whose bound reaches the incumbent are
pruned exactly; the heuristic modes treat their score as a selection order
only and discard nodes solely through pool eviction (an unsound premise
that can lose the optimum, which is the point of comparing them).  In the
SPD modes each expansion also rounds the relaxed minimizer into a full
assignment (polished by 1-opt descent) as an incumbent candidate.

Once ``leaf_size`` free variables remain, nodes are closed by exact
vectorized enumeration of the remaining block.  The frontier pool is capped
at ``pool_limit`` states with worst-bound eviction; any eviction (or
timeout) clears the ``optimal`` flag.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from ..errors import QubokitError, ValidationError
from ..model import IsingModel, as_spins, sign_pm
from .brute_force import _spin_table
from .common import BBParams
from .eigen import eig_extreme

_FACTOR_RETRIES = 8


@dataclass
class BBNode:
    """Partial assignment over the first k variables of the model order."""

    fixed_prefix: np.ndarray
    prefix_energy: float
    bound: float = -np.inf

    @classmethod
    def from_prefix(cls, model: IsingModel, prefix) -> "BBNode":
        prefix = as_spins(np.asarray(prefix)) if len(prefix) else np.zeros(0, dtype=np.int8)
        node = cls(fixed_prefix=prefix, prefix_energy=0.0)
        node.prefix_energy = bound_base(model, node)
        return node


def bound_base(model: IsingModel, node: BBNode) -> float:
    """Energy of the prefix-induced subproblem (plus the model offset)."""
    u = np.asarray(node.fixed_prefix, dtype=np.float64)
    k = u.shape[0]
    if k > model.n:
        raise ValidationError("prefix longer than the model")
    A = model.coupling_matrix()
    return float(0.5 * u @ (A[:k, :k] @ u) + model.h[:k] @ u) + model.offset


def _shifted_solve(A_rem: np.ndarray, rhs: np.ndarray, neg_part: float,
                   epsilon: float) -> tuple[np.ndarray, float]:
    """Solve (A_rem + d I) r = rhs with d = neg_part + eps, doubling eps on
    factorization failure up to a fixed budget."""
    eps = epsilon
    for _ in range(_FACTOR_RETRIES):
        d = neg_part + eps
        try:
            cho = sla.cho_factor(A_rem + d * np.eye(A_rem.shape[0]), lower=True)
            return sla.cho_solve(cho, rhs), d
        except np.linalg.LinAlgError:
            eps *= 2.0
    raise QubokitError("SPD factorization failed after retry budget")


def bound_spd(model: IsingModel, node: BBNode, epsilon: float, *,
              admissible: bool = False, fold_fixed: bool = True,
              d: float | None = None) -> float:
    """SPD relaxation bound for the remaining subproblem of a node.

    With ``admissible`` the result additionally subtracts d * |remaining| so
    it never exceeds the energy of any binary completion.  ``d`` may be
    supplied (any value >= the submatrix shift is valid, e.g. one derived
    from the full matrix by eigenvalue interlacing); by default it is
    computed from the remaining submatrix.
    """
    if epsilon <= 0:
        raise ValidationError("epsilon must be positive")
    u = np.asarray(node.fixed_prefix, dtype=np.float64)
    k = u.shape[0]
    n = model.n
    if k >= n:
        raise ValidationError("SPD bound needs a nonempty remaining set")
    A = model.coupling_matrix()
    A_rem = A[k:, k:]
    h_rem = model.h[k:].copy()
    if fold_fixed and k:
        h_rem += A[k:, :k] @ u
    if d is None:
        neg_part = max(0.0, -eig_extreme(A_rem, "min"))
        r, d_used = _shifted_solve(A_rem, -h_rem, neg_part, epsilon)
    else:
        r, d_used = _shifted_solve(A_rem, -h_rem, d - epsilon, epsilon)
    relaxed = 0.5 * float(h_rem @ r)
    value = bound_base(model, node) + relaxed
    if admissible:
        value -= d_used * (n - k)
    return value


@dataclass
class BBResult:
    state: np.ndarray
    energy: float
    optimal: bool
    expansions: int = 0
    evictions: int = 0
    timed_out: bool = False


def _unpack_bits(bits: int, k: int) -> np.ndarray:
    if k == 0:
        return np.zeros(0)
    raw = bits.to_bytes((k + 7) // 8, "little")
    arr = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little", count=k)
    return 2.0 * arr - 1.0


def solve_bb(model: IsingModel, params: BBParams) -> BBResult:
    """Best-first branch & bound; see module docstring for semantics."""
    params.validate()
    t0 = time.perf_counter()
    n = model.n
    A_full = model.coupling_matrix()

    weight = np.abs(model.h).copy()
    np.add.at(weight, model.rows, np.abs(model.values))
    np.add.at(weight, model.cols, np.abs(model.values))
    perm = np.argsort(-weight, kind="stable")
    Ap = A_full[np.ix_(perm, perm)]
    hp = model.h[perm]

    mode = params.bound_kind
    spd = mode.startswith("spd")
    d_root = 0.0
    if spd:
        neg = max(0.0, -eig_extreme(A_full, "min"))
        d_root = neg + params.epsilon

    leaf = min(params.leaf_size, n)
    kc = n - leaf
    S_leaf = _spin_table(leaf)
    A_leaf = Ap[kc:, kc:]
    quad_leaf = 0.5 * np.einsum("bi,ij,bj->b", S_leaf, A_leaf, S_leaf)

    incumbent_energy = np.inf
    incumbent_state: np.ndarray | None = None

    def descend(u: np.ndarray, energy: float) -> float:
        # 1-opt polish: flip best-improving spins until locally optimal
        f = Ap @ u + hp
        for _ in range(4 * n):
            dE = -2.0 * u * f
            best = int(np.argmin(dE))
            if dE[best] >= -1e-12:
                break
            u[best] = -u[best]
            energy += dE[best]
            f += 2.0 * Ap[:, best] * u[best]
        return energy

    def consider(full_u: np.ndarray, energy: float, polish: bool = False):
        nonlocal incumbent_energy, incumbent_state
        if polish or energy < incumbent_energy:
            full_u = full_u.copy()
            energy = descend(full_u, energy)
        if energy < incumbent_energy:
            incumbent_energy = energy
            incumbent_state = full_u

    # Deterministic greedy completion seeds the incumbent so even truncated
    # runs return a full assignment.
    greedy = np.zeros(n)
    for t in range(n):
        f = hp[t] + Ap[t, :t] @ greedy[:t]
        greedy[t] = -1.0 if f >= 0 else 1.0
    greedy_e = float(0.5 * greedy @ (Ap @ greedy) + hp @ greedy) + model.offset
    consider(greedy, greedy_e)

    counter = 0
    heap: list[tuple[float, int, int, int, float]] = [(-np.inf, counter, 0, 0, model.offset)]
    expansions = 0
    evictions = 0
    timed_out = False
    deadline = None if params.time_limit is None else t0 + params.time_limit

    admissible = mode == "spd_admissible"

    while heap:
        if deadline is not None and expansions % 64 == 0 and time.perf_counter() > deadline:
            timed_out = True
            break
        bound, _, k, bits, pe = heapq.heappop(heap)
        # only a true lower bound may prune against the incumbent; the
        # heuristic scores order the pool and prune through eviction alone
        if admissible and bound >= incumbent_energy:
            continue
        expansions += 1
        u = _unpack_bits(bits, k)

        if k == kc:
            h_leaf = hp[kc:] + (Ap[kc:, :kc] @ u if kc else 0.0)
            completions = pe + quad_leaf + S_leaf @ h_leaf
            pos = int(np.argmin(completions))
            full = np.concatenate([u, S_leaf[pos]])
            consider(full, float(completions[pos]))
            continue

        cross = float(Ap[k, :k] @ u) if k else 0.0
        step = hp[k] + cross
        pe_children = (pe + step, pe - step)
        bits_children = (bits | (1 << k), bits)

        if spd:
            nrem = n - k - 1
            base_h = hp[k + 1:] + (Ap[k + 1:, :k] @ u if k else 0.0)
            col = Ap[k + 1:, k]
            if mode == "spd_literal":
                h_pair = np.stack([hp[k + 1:], hp[k + 1:]], axis=1)
            else:
                h_pair = np.stack([base_h + col, base_h - col], axis=1)
            A_rem = Ap[k + 1:, k + 1:]
            R, d_used = _shifted_solve(A_rem, -h_pair, d_root - params.epsilon,
                                       params.epsilon)
            child_bounds = []
            for c in range(2):
                relaxed = 0.5 * float(h_pair[:, c] @ R[:, c])
                b = pe_children[c] + relaxed
                if mode == "spd_admissible":
                    b -= d_used * nrem
                child_bounds.append(b)
                # relaxation rounding: a full assignment candidate for free;
                # quench one child per expansion so the tree doubles as a
                # multi-start local search
                v = sign_pm(R[:, c]).astype(np.float64)
                h_round = base_h + col if c == 0 else base_h - col
                cand = pe_children[c] + 0.5 * float(v @ (A_rem @ v)) + float(v @ h_round)
                child_u = np.concatenate([u, [1.0 if c == 0 else -1.0], v])
                consider(child_u, cand, polish=(expansions % 2 == c))
        else:
            child_bounds = list(pe_children)

        for c in range(2):
            if admissible and child_bounds[c] >= incumbent_energy:
                continue
            counter += 1
            heapq.heappush(heap, (child_bounds[c], counter, k + 1, bits_children[c],
                                  pe_children[c]))

        if len(heap) > params.pool_limit:
            heap.sort()
            evictions += len(heap) - params.pool_limit
            del heap[params.pool_limit:]

    state = np.empty(n, dtype=np.int8)
    state[perm] = incumbent_state.astype(np.int8)
    optimal = (mode == "spd_admissible" and evictions == 0 and not timed_out)
    return BBResult(state=state, energy=model.energy(state), optimal=optimal,
                    expansions=expansions, evictions=evictions, timed_out=timed_out)
