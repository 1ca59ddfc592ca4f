"""Benchmark harness: optimality gaps, suites, spectra, and report export.

A suite pairs an instance source (generator sweep or file glob) with a list
of solver configurations.  Each (instance, solver) entry runs with its
configured replicas, keeps the best sample, and records the optimality gap

    gap = (energy - reference_energy) / |reference_energy|

against the suite's reference policy.  Wall time covers the solve call only
(monotonic clock, I/O excluded) unless ``include_overhead`` adds end-to-end
timing.  Failed entries become per-record errors and the suite continues.
"""

from __future__ import annotations

import concurrent.futures
import csv
import dataclasses
import glob as globmod
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ReferenceUndefinedError, ValidationError
from .generators import PlantedInstance, gen_3r3x, gen_chain3, gen_mw3s, gen_random, gen_tile, gen_wishart
from .instance_io import read_certificate, read_instance
from .model import HuboModel, IsingModel, QuboModel
from .solvers import (
    BBParams,
    params_from_dict,
    solve_bb,
    solve_brute_force,
    solve_pa,
    solve_sa,
    solve_sbm,
)
from .solvers.common import PARAM_CLASSES
from .transforms import qubo_to_ising, reduce_cubic

REPORT_SCHEMA_VERSION = 1

RECORD_FIELDS = ["instance_id", "solver_id", "energy", "reference_energy", "gap",
                 "wall_time", "seed", "error"]


def optimality_gap(e: float, e_ref: float) -> float:
    """Relative gap of an energy against a reference; negative means better."""
    if e_ref == 0:
        raise ReferenceUndefinedError(
            "optimality gap undefined for zero reference energy; "
            "use an absolute difference explicitly")
    return (e - e_ref) / abs(e_ref)


@dataclass
class GapRecord:
    instance_id: str
    solver_id: str
    energy: float
    reference_energy: float
    gap: float
    wall_time: float
    seed: int | None
    error: str = ""

    def to_row(self) -> dict:
        return dataclasses.asdict(self)


@dataclass
class SuiteSpec:
    """Declarative description of a benchmark suite.

    ``source`` is either {"generator": {"family", "sizes", "seeds", ...}} or
    {"files": "<glob>"}.  ``solvers`` entries are {"id", "name"?, "params"?}.
    ``reference`` is one of planted | brute_force | best_of_suite | file.
    """

    source: dict
    solvers: list[dict]
    reference: str = "best_of_suite"
    sample_count: int = 1024
    replicas: int | None = None
    reference_file: str | None = None
    brute_force_cap: int = 30
    workers: int = 1
    include_overhead: bool = False

    def validate(self):
        if not self.source:
            raise ValidationError("suite needs an instance source")
        if not self.solvers:
            raise ValidationError("suite needs at least one solver")
        if self.sample_count < 1:
            raise ValidationError("sample_count must be >= 1")
        if self.reference not in ("planted", "brute_force", "best_of_suite", "file"):
            raise ValidationError(f"unknown reference policy {self.reference!r}")
        if self.reference == "file" and not self.reference_file:
            raise ValidationError("reference policy 'file' needs reference_file")

    @classmethod
    def from_json(cls, path) -> "SuiteSpec":
        data = json.loads(Path(path).read_text())
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValidationError(f"unknown suite fields: {sorted(unknown)}")
        spec = cls(**data)
        spec.validate()
        return spec


@dataclass
class _Entry:
    instance_id: str
    model: IsingModel
    seed: int | None
    planted_energy: float | None


_GENERATORS = {
    "chain3": lambda size, seed, params: gen_chain3(size, seed),
    "mw3s": lambda size, seed, params: gen_mw3s(size, seed),
    "r3x3": lambda size, seed, params: gen_3r3x(size, seed),
    "tile": lambda size, seed, params: gen_tile(
        size, params.get("p", (0.0, params.get("p2", 0.5), 0.0, 1.0 - params.get("p2", 0.5))), seed),
    "wishart": lambda size, seed, params: gen_wishart(
        size, params.get("M", max(1, int(round(params.get("alpha", 1.0) * size)))), seed),
    "random": lambda size, seed, params: gen_random(
        params.get("topology", "complete"), params.get("dist", "uniform"), seed,
        n=size, rows=params.get("rows"), cols=params.get("cols"),
        a=params.get("a", -1.0), b=params.get("b", 1.0)),
}


def _as_ising(model, instance_id: str) -> IsingModel:
    if isinstance(model, IsingModel):
        return model
    if isinstance(model, QuboModel):
        return qubo_to_ising(model)
    if isinstance(model, HuboModel):
        reduced, _ = reduce_cubic(model)
        return reduced
    raise ValidationError(f"{instance_id}: unsupported model type")


def _resolve_instances(spec: SuiteSpec) -> list[_Entry]:
    entries: list[_Entry] = []
    if "generator" in spec.source:
        g = dict(spec.source["generator"])
        family = g.pop("family")
        sizes = g.pop("sizes")
        seeds = g.pop("seeds")
        if family not in _GENERATORS:
            raise ValidationError(f"unknown generator family {family!r}")
        for size in sizes:
            for seed in seeds:
                made = _GENERATORS[family](size, seed, g)
                planted = None
                if isinstance(made, PlantedInstance):
                    planted = made.planted_energy
                    model = made.model
                else:
                    model = made
                iid = f"{family}-n{size}-s{seed}"
                entries.append(_Entry(iid, _as_ising(model, iid), seed, planted))
    elif "files" in spec.source:
        paths = sorted(globmod.glob(spec.source["files"]))
        if not paths:
            raise ValidationError(f"file glob {spec.source['files']!r} matched nothing")
        for p in paths:
            model = read_instance(p)
            planted = None
            cert = Path(p).with_suffix(Path(p).suffix + ".cert.json")
            if cert.exists():
                planted = float(read_certificate(cert)["planted_energy"])
            iid = Path(p).name
            entries.append(_Entry(iid, _as_ising(model, iid), None, planted))
    else:
        raise ValidationError("suite source must contain 'generator' or 'files'")
    return entries


def _run_solver(entry: _Entry, solver: dict, spec: SuiteSpec) -> tuple[float, float]:
    """Run one solver on one instance; returns (best energy, solve seconds)."""
    sid = solver["id"]
    raw = dict(solver.get("params", {}))
    replicas = spec.replicas if spec.replicas is not None else spec.sample_count
    if sid in ("sa", "pa", "sbm"):
        raw.setdefault("replicas", replicas)
        raw.setdefault("seed", entry.seed if entry.seed is not None else 0)
        params = params_from_dict(sid, raw)
        solve = {"sa": solve_sa, "pa": solve_pa, "sbm": solve_sbm}[sid]
        t0 = time.perf_counter()
        result = solve(entry.model, params)
        dt = time.perf_counter() - t0
        return result.best.energy, dt
    if sid == "bf":
        t0 = time.perf_counter()
        _, energy = solve_brute_force(entry.model, cap=raw.get("cap", spec.brute_force_cap))
        return energy, time.perf_counter() - t0
    if sid == "bb":
        params = params_from_dict("bb", raw)
        t0 = time.perf_counter()
        result = solve_bb(entry.model, params)
        return result.energy, time.perf_counter() - t0
    raise ValidationError(f"unknown solver id {sid!r}")


def run_suite(spec: SuiteSpec) -> list[GapRecord]:
    """Execute a suite and return one GapRecord per (instance, solver)."""
    spec.validate()
    entries = _resolve_instances(spec)
    file_refs: dict[str, float] = {}
    if spec.reference == "file":
        file_refs = {k: float(v) for k, v in
                     json.loads(Path(spec.reference_file).read_text()).items()}

    tasks = [(entry, solver) for entry in entries for solver in spec.solvers]

    def run_task(task):
        entry, solver = task
        sid = solver.get("name", solver["id"])
        t_all = time.perf_counter()
        try:
            energy, dt = _run_solver(entry, solver, spec)
            if spec.include_overhead:
                dt = time.perf_counter() - t_all
            return (entry, sid, energy, dt, "")
        except Exception as exc:  # per-entry failure: record and continue
            return (entry, sid, np.nan, 0.0, f"{type(exc).__name__}: {exc}")

    if spec.workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=spec.workers) as pool:
            raw_results = list(pool.map(run_task, tasks))
    else:
        raw_results = [run_task(t) for t in tasks]

    best_by_instance: dict[str, float] = {}
    for entry, sid, energy, dt, err in raw_results:
        if not err and (entry.instance_id not in best_by_instance
                        or energy < best_by_instance[entry.instance_id]):
            best_by_instance[entry.instance_id] = energy

    records: list[GapRecord] = []
    for entry, sid, energy, dt, err in raw_results:
        ref = np.nan
        gap = np.nan
        if not err:
            try:
                ref = _resolve_reference(entry, spec, best_by_instance, file_refs)
                gap = optimality_gap(energy, ref)
            except Exception as exc:
                err = f"{type(exc).__name__}: {exc}"
        records.append(GapRecord(instance_id=entry.instance_id, solver_id=sid,
                                 energy=float(energy), reference_energy=float(ref),
                                 gap=float(gap), wall_time=dt, seed=entry.seed,
                                 error=err))
    records.sort(key=lambda r: (r.instance_id, r.solver_id))
    return records


def _resolve_reference(entry: _Entry, spec: SuiteSpec, best_by_instance, file_refs) -> float:
    if spec.reference == "planted":
        if entry.planted_energy is None:
            raise ValidationError(f"{entry.instance_id}: no planted certificate")
        return entry.planted_energy
    if spec.reference == "brute_force":
        _, e = solve_brute_force(entry.model, cap=spec.brute_force_cap)
        return e
    if spec.reference == "best_of_suite":
        return best_by_instance[entry.instance_id]
    if spec.reference == "file":
        if entry.instance_id not in file_refs:
            raise ValidationError(f"{entry.instance_id}: not in reference file")
        return file_refs[entry.instance_id]
    raise ValidationError(f"unknown reference policy {spec.reference!r}")


def spectrum(sampleset, bins: int) -> tuple[np.ndarray, np.ndarray]:
    """Equal-width histogram of sample energies; counts sum to sample count."""
    energies = np.asarray(sampleset.energies() if hasattr(sampleset, "energies")
                          else sampleset, dtype=np.float64)
    if energies.size == 0:
        raise ValidationError("spectrum needs at least one sample")
    lo, hi = float(energies.min()), float(energies.max())
    if lo == hi:
        return np.array([lo, hi]), np.array([energies.size])
    counts, edges = np.histogram(energies, bins=bins, range=(lo, hi))
    return edges, counts


def export_records(records: list[GapRecord], path, fmt: str = "csv") -> Path:
    """Write records to CSV or JSON with a stable column order."""
    path = Path(path)
    try:
        if fmt == "csv":
            with path.open("w", newline="") as fh:
                writer = csv.DictWriter(fh, fieldnames=RECORD_FIELDS)
                writer.writeheader()
                for rec in records:
                    writer.writerow(rec.to_row())
        elif fmt == "json":
            payload = {"version": REPORT_SCHEMA_VERSION,
                       "records": [rec.to_row() for rec in records]}
            path.write_text(json.dumps(payload, indent=2) + "\n")
        else:
            raise ValidationError(f"unknown export format {fmt!r}")
    except OSError as exc:
        raise OSError(f"failed to write report {path}: {exc}") from exc
    return path


def load_records(path, fmt: str | None = None) -> list[GapRecord]:
    path = Path(path)
    if fmt is None:
        fmt = "json" if path.suffix == ".json" else "csv"
    records = []
    if fmt == "csv":
        with path.open(newline="") as fh:
            for row in csv.DictReader(fh):
                records.append(GapRecord(
                    instance_id=row["instance_id"], solver_id=row["solver_id"],
                    energy=float(row["energy"]), reference_energy=float(row["reference_energy"]),
                    gap=float(row["gap"]), wall_time=float(row["wall_time"]),
                    seed=None if row["seed"] in ("", "None") else int(row["seed"]),
                    error=row.get("error", "")))
    else:
        payload = json.loads(path.read_text())
        for row in payload["records"]:
            records.append(GapRecord(**row))
    return records
