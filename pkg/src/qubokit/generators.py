"""Planted and random instance generators with ground-state certificates.

All generators are pure functions of (parameters, seed).  Randomness comes
from counter-based Philox streams: ``rng_stream(seed)`` is the base stream
and ``rng_stream(seed, index)`` is the stream for sub-instance / replica
``index`` (the base stream jumped ``index`` times), so instances can be
generated independently and in parallel with reproducible results.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import GenerationError, ValidationError
from .model import SPIN_DOMAIN, HuboModel, IsingModel, as_spins

__all__ = [
    "PlantedInstance",
    "rng_stream",
    "gen_chain3",
    "gen_mw3s",
    "gen_3r3x",
    "gen_tile",
    "gen_wishart",
    "gen_random",
    "gauge_randomize",
    "apply_gauge",
    "TILE_COUPLING_SETS",
]


def rng_stream(seed, index: int = 0) -> np.random.Generator:
    """Counter-based stream ``index`` of the Philox generator keyed by seed."""
    bits = np.random.Philox(key=np.uint64(seed))
    if index:
        bits = bits.jumped(index)
    return np.random.Generator(bits)


@dataclass(frozen=True)
class PlantedInstance:
    """A model bundled with its certified ground-state energy and state.

    ``planted_state`` is the post-gauge state; for the exact-certificate
    families (3r3x, tile, wishart) ``planted_energy`` is a true global
    minimum by construction.  The energy certificate is re-checked here.
    """

    model: IsingModel | HuboModel
    planted_energy: float
    planted_state: np.ndarray
    family: str
    hardness: dict = field(default_factory=dict)
    seed: int | None = None

    def __post_init__(self):
        state = as_spins(self.planted_state, self.model.n)
        object.__setattr__(self, "planted_state", state)
        e = self.model.energy(state)
        tol = 1e-9 * max(1.0, abs(self.planted_energy))
        if abs(e - self.planted_energy) > tol:
            raise ValidationError(
                f"planted state evaluates to {e}, certificate says {self.planted_energy}")


def gen_chain3(n: int, seed) -> HuboModel:
    """Random 3-body chain: fields, nearest-neighbor pairs, and consecutive
    triples, all coefficients i.i.d. standard normal."""
    if n < 3:
        raise ValidationError("chain3 needs n >= 3")
    rng = rng_stream(seed)
    h = rng.standard_normal(n)
    J = rng.standard_normal(n - 1)
    K = rng.standard_normal(n - 2)
    terms: list[tuple[tuple[int, ...], float]] = []
    terms += [((i,), float(h[i])) for i in range(n)]
    terms += [((i, i + 1), float(J[i])) for i in range(n - 1)]
    terms += [((i, i + 1, i + 2), float(K[i])) for i in range(n - 2)]
    return HuboModel.from_terms(n, SPIN_DOMAIN, terms, max_order=3)


def gen_mw3s(n: int, seed) -> HuboModel:
    """Weighted MAX-3-SAT chain cost expanded exactly into spin terms.

    Clause i covers the sliding window (i, i+1, i+2) and contributes
    (w_i / 8) * prod_{v in window} (1 + a_v s_v) with a_v = (-1)^{c_v},
    w_i uniform on [0, 1] and c_v uniform on {0, 1}.
    """
    if n < 3:
        raise ValidationError("mw3s needs n >= 3")
    rng = rng_stream(seed)
    omega = rng.random(n - 2)
    c = rng.integers(0, 2, size=n)
    a = np.where(c == 0, 1.0, -1.0)
    acc: dict[tuple[int, ...], float] = {}
    for i in range(n - 2):
        window = (i, i + 1, i + 2)
        w = omega[i] / 8.0
        for r in range(4):
            for sub in itertools.combinations(window, r):
                coeff = w * float(np.prod([a[v] for v in sub])) if sub else w
                acc[sub] = acc.get(sub, 0.0) + coeff
    return HuboModel.from_terms(n, SPIN_DOMAIN, acc.items(), max_order=3)


def _hubo_gauge(h: HuboModel, g: np.ndarray) -> HuboModel:
    terms = [(t, c * float(np.prod(g[list(t)])) if t else c) for t, c in h.terms()]
    return HuboModel.from_terms(h.n, h.domain, terms, max_order=h.max_order)


def gen_3r3x(n: int, seed, max_tries: int = 1000) -> PlantedInstance:
    """3-regular 3-XORSAT planted instance as a cubic spin HUBO.

    Builds a random incidence where every equation touches exactly three
    distinct variables and every variable sits in exactly three equations
    (configuration model with rejection of repeated-variable and duplicate
    clauses), plants a random spin state, and sets each clause coupling to
    the planted product so the planted energy is exactly -m with m = n.
    """
    if n < 6:
        raise ValidationError("3r3x needs n >= 6")
    rng = rng_stream(seed)
    stubs = np.repeat(np.arange(n), 3)
    triples = None
    for _ in range(max_tries):
        cand = np.sort(rng.permutation(stubs).reshape(n, 3), axis=1)
        if np.any(cand[:, 0] == cand[:, 1]) or np.any(cand[:, 1] == cand[:, 2]):
            continue
        if len(np.unique(cand, axis=0)) != n:
            continue
        triples = cand
        break
    if triples is None:
        raise GenerationError(f"no simple 3-regular incidence found in {max_tries} tries")

    planted = rng.choice(np.array([-1, 1], dtype=np.int8), size=n)
    clause_J = planted[triples].prod(axis=1).astype(np.float64)
    terms = [(tuple(int(v) for v in t), -float(j)) for t, j in zip(triples, clause_J)]
    model = HuboModel.from_terms(n, SPIN_DOMAIN, terms, max_order=3)

    g = rng.choice(np.array([-1, 1], dtype=np.int8), size=n)
    model = _hubo_gauge(model, g)
    state = (planted * g).astype(np.int8)
    return PlantedInstance(model=model, planted_energy=-float(n), planted_state=state,
                           family="r3x3", hardness={"m": n}, seed=seed)


# Plaquette coupling sets, cyclically ordered around the 4-cycle.  With the
# cell Hamiltonian -sum J s s, type i has 2i minimizing states of the 16
# (i states per global-flip sector), always including the ferromagnetic pair.
TILE_COUPLING_SETS: dict[int, tuple[float, float, float, float]] = {
    1: (1.0, 1.0, 1.0, 1.0),
    2: (2.0, 2.0, 1.0, -1.0),
    3: (2.0, 1.0, 1.0, -1.0),
    4: (1.0, 1.0, 1.0, -1.0),
}

_FERRO4 = np.ones(4, dtype=np.int8)


def _tile_cell_check(couplings) -> tuple[float, int]:
    """Minimum and minimizer count of the 16-state cell Hamiltonian."""
    states = np.array(list(itertools.product((-1, 1), repeat=4)), dtype=np.float64)
    cyc = [(0, 1), (1, 2), (2, 3), (3, 0)]
    energies = -sum(j * states[:, a] * states[:, b] for (a, b), j in zip(cyc, couplings))
    emin = float(energies.min())
    count = int(np.sum(np.isclose(energies, emin)))
    ferro = -float(sum(couplings))
    if not np.isclose(ferro, emin):
        raise GenerationError("tile coupling set does not minimize at the ferromagnetic state")
    return emin, count


def _checked_tile_sets() -> dict[int, tuple[tuple[float, ...], float]]:
    out = {}
    for t, cset in TILE_COUPLING_SETS.items():
        emin, count = _tile_cell_check(cset)
        if count != 2 * t:
            raise GenerationError(
                f"tile type C{t} has {count} minimizers, expected {2 * t}")
        out[t] = (cset, emin)
    return out


def gen_tile(L: int, p, seed) -> PlantedInstance:
    """Tile-planted Ising instance on the periodic L x L square lattice.

    Plaquettes are selected checkerboard-fashion so each edge belongs to
    exactly one tile and each vertex to two.  Every tile draws its type from
    the probability 4-vector ``p``; the drawn coupling set is applied in a
    random rotation/reflection around the cell cycle.  The ferromagnetic
    state minimizes every tile simultaneously, so the planted energy is the
    sum of per-tile minima (verified per type by 16-state enumeration); the
    planted state is then concealed by gauge randomization.
    """
    if L < 4 or L % 2 != 0:
        raise ValidationError("tile planting needs even L >= 4")
    p = np.asarray(p, dtype=np.float64)
    if p.shape != (4,) or np.any(p < 0) or abs(p.sum() - 1.0) > 1e-9:
        raise ValidationError("p must be a length-4 probability vector")
    p = p / p.sum()
    checked = _checked_tile_sets()
    rng = rng_stream(seed)

    n = L * L

    def vid(r, c):
        return (r % L) * L + (c % L)

    couplings: list[tuple[int, int, float]] = []
    planted_energy = 0.0
    for r in range(L):
        for c in range(L):
            if (r + c) % 2 != 0:
                continue
            # cell cycle: (r,c) -> (r,c+1) -> (r+1,c+1) -> (r+1,c) -> back
            verts = [vid(r, c), vid(r, c + 1), vid(r + 1, c + 1), vid(r + 1, c)]
            tile_type = int(rng.choice(4, p=p)) + 1
            cset, emin = checked[tile_type]
            rot = int(rng.integers(0, 4))
            flip = bool(rng.integers(0, 2))
            js = list(cset[rot:] + cset[:rot])
            if flip:
                js = js[::-1]
            planted_energy += emin
            cyc = [(0, 1), (1, 2), (2, 3), (3, 0)]
            for (a, b), j in zip(cyc, js):
                # tile Hamiltonian is -J s s; model convention is +J s s
                couplings.append((verts[a], verts[b], -j))

    model = IsingModel.from_terms(n, couplings=couplings)
    state = np.ones(n, dtype=np.int8)
    g = rng.choice(np.array([-1, 1], dtype=np.int8), size=n)
    model, state, _ = apply_gauge(model, state, g)
    return PlantedInstance(model=model, planted_energy=planted_energy, planted_state=state,
                           family="tile", hardness={"p": [float(x) for x in p]}, seed=seed)


def gen_wishart(N: int, M: int, seed) -> PlantedInstance:
    """Wishart-planted dense Ising instance with exact certificate.

    Columns of W are built by exact projection, w = sqrt(N/(N-1)) *
    (z - (t.z / N) t) for standard-normal z, which enforces w^T t = 0 and
    realizes the covariance N/(N-1) [1 - t t^T / N].  With
    J~ = -(1/N) W W^T and zero-diagonal J, the Hamiltonian
    -(1/2) s^T J s has global minimum at s = t with energy (1/2) Tr(J~);
    the planted state is concealed by gauge randomization.
    """
    if N < 3 or M < 1:
        raise ValidationError("wishart needs N >= 3 and M >= 1")
    rng = rng_stream(seed)
    t = np.ones(N)
    Z = rng.standard_normal((N, M))
    W = np.sqrt(N / (N - 1.0)) * (Z - np.outer(t, t @ Z) / N)
    Jt = -(W @ W.T) / N
    energy = 0.5 * float(np.trace(Jt))
    couplings = [(i, j, -float(Jt[i, j])) for i in range(N) for j in range(i + 1, N)]
    model = IsingModel.from_terms(N, couplings=couplings)
    state = np.ones(N, dtype=np.int8)
    g = rng.choice(np.array([-1, 1], dtype=np.int8), size=N)
    model, state, _ = apply_gauge(model, state, g)
    return PlantedInstance(model=model, planted_energy=energy, planted_state=state,
                           family="wishart", hardness={"alpha": M / N, "M": M}, seed=seed)


def _chimera_edges(rows: int, cols: int) -> tuple[int, list[tuple[int, int]]]:
    """Standard Chimera graph: rows x cols grid of K_{4,4} cells with chains."""
    def node(i, j, u, k):
        return ((i * cols + j) * 2 + u) * 4 + k

    edges = []
    for i in range(rows):
        for j in range(cols):
            for k in range(4):
                for kp in range(4):
                    edges.append((node(i, j, 0, k), node(i, j, 1, kp)))
            if i + 1 < rows:
                for k in range(4):
                    edges.append((node(i, j, 0, k), node(i + 1, j, 0, k)))
            if j + 1 < cols:
                for k in range(4):
                    edges.append((node(i, j, 1, k), node(i, j + 1, 1, k)))
    return rows * cols * 8, edges


def gen_random(topology: str, coupling_dist: str, seed, *, n: int | None = None,
               rows: int | None = None, cols: int | None = None,
               edges: list[tuple[int, int]] | None = None,
               a: float = -1.0, b: float = 1.0,
               with_biases: bool = True) -> IsingModel:
    """Random Ising model on a chosen topology.

    Topologies: ``complete`` (needs n), ``chimera`` (needs rows, cols),
    ``edge_list`` (needs edges; n optional, inferred from edges).
    Distributions: ``uniform`` on [a, b], ``int_uniform`` on integers in
    [a, b], ``gaussian`` (standard normal).  Couplings are drawn first, then
    biases, from a single seeded stream.
    """
    if topology == "complete":
        if n is None or n < 1:
            raise ValidationError("complete topology needs n >= 1")
        edge_list = [(i, j) for i in range(n) for j in range(i + 1, n)]
        nvars = n
    elif topology == "chimera":
        if not rows or not cols:
            raise ValidationError("chimera topology needs rows and cols")
        nvars, edge_list = _chimera_edges(rows, cols)
    elif topology == "edge_list":
        if not edges:
            raise ValidationError("edge_list topology needs a nonempty edge list")
        edge_list = [(int(i), int(j)) for i, j in edges]
        nvars = n if n is not None else max(max(e) for e in edge_list) + 1
    else:
        raise ValidationError(f"unknown topology {topology!r}")

    rng = rng_stream(seed)

    def draw(size):
        if coupling_dist == "uniform":
            return rng.uniform(a, b, size=size)
        if coupling_dist == "int_uniform":
            return rng.integers(int(a), int(b) + 1, size=size).astype(np.float64)
        if coupling_dist == "gaussian":
            return rng.standard_normal(size)
        raise ValidationError(f"unknown coupling distribution {coupling_dist!r}")

    vals = draw(len(edge_list))
    h = draw(nvars) if with_biases else np.zeros(nvars)
    couplings = [(i, j, float(v)) for (i, j), v in zip(edge_list, vals)]
    return IsingModel.from_terms(nvars, h=h, couplings=couplings)


def apply_gauge(m: IsingModel, s, g) -> tuple[IsingModel, np.ndarray, np.ndarray]:
    """Transform (model, state) by the sign vector g; energies are preserved."""
    g = as_spins(g, m.n)
    s = as_spins(s, m.n)
    h = m.h * g
    vals = m.values * g[m.rows] * g[m.cols]
    model = IsingModel(n=m.n, h=h, rows=m.rows, cols=m.cols, values=vals, offset=m.offset)
    return model, (s * g).astype(np.int8), g


def gauge_randomize(m: IsingModel, s, seed) -> tuple[IsingModel, np.ndarray, np.ndarray]:
    """Gauge-conceal a state with a random sign vector drawn from the seed."""
    rng = rng_stream(seed)
    g = rng.choice(np.array([-1, 1], dtype=np.int8), size=m.n)
    return apply_gauge(m, s, g)
