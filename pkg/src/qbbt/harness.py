"""Seeded experiment sweeps over the benchmark suite.

Every repetition of every cell gets its own stream
``Rng(seed).split(entry_id, config_index, repetition)``; cells can thus run
in any order, or in parallel, and still reproduce bit for bit.
"""

from __future__ import annotations

import csv
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields

from . import __version__
from .bench import BenchmarkEntry, suite
from .checkers import CHECKS, CheckConfig, id_check
from .params import eq_min_rounds, un_min_rounds
from .sim import Rng

CSV_COLUMNS = ("entry_id", "task", "variant", "k", "epsilon", "s", "t", "repetitions",
               "pass_count", "trigger_count", "total_shots", "wall_ms", "seed")
QUICK_REPETITIONS = 20
QUICK_S_CAP = 500


class PlanError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentPlan:
    tasks: tuple = ("EQ", "ID", "UN")
    ids: tuple = ()
    variants: tuple = ("original",)
    k: tuple = (4,)
    epsilon: tuple = (0.15,)
    s_fraction: tuple = (1.0,)
    t: tuple = (20,)
    id_k: tuple = (50,)
    repetitions: int = 100
    seed: int = 0
    alpha2: float = 0.1
    s: int | None = None
    s_cap: int | None = None

    def __post_init__(self):
        for name in ("tasks", "ids", "variants", "k", "epsilon", "s_fraction", "t", "id_k"):
            value = getattr(self, name)
            object.__setattr__(self, name, tuple(value if isinstance(value, (list, tuple)) else [value]))
        if self.repetitions < 1:
            raise PlanError("repetitions must be at least 1")
        if any(not 0 < f <= 1 for f in self.s_fraction):
            raise PlanError("s fractions must lie in (0, 1]")
        if any(v not in ("original", "optimized") for v in self.variants):
            raise PlanError(f"unknown variant in {self.variants}")
        if any(task not in ("EQ", "ID", "UN") for task in self.tasks):
            raise PlanError(f"unknown task in {self.tasks}")
        if any(k < 1 for k in self.k + self.id_k) or any(t < 1 for t in self.t):
            raise PlanError("k and t values must be positive")
        if any(not 0 < e < 1 for e in self.epsilon):
            raise PlanError("epsilon values must lie in (0, 1)")
        if self.s is not None and self.s < 1:
            raise PlanError("s must be positive")

    @classmethod
    def from_dict(cls, doc: dict, quick: bool = False) -> "ExperimentPlan":
        known = {f.name for f in fields(cls)}
        extra = set(doc) - known - {"quick"}
        if extra:
            raise PlanError(f"unknown plan keys {sorted(extra)}")
        plan = cls(**{k: v for k, v in doc.items() if k in known})
        if quick or doc.get("quick"):
            plan = plan.quick()
        return plan

    def quick(self) -> "ExperimentPlan":
        cap = QUICK_S_CAP if self.s_cap is None else min(self.s_cap, QUICK_S_CAP)
        return ExperimentPlan(**{**asdict(self), "repetitions": min(self.repetitions, QUICK_REPETITIONS),
                                 "s_cap": cap})


@dataclass(frozen=True)
class Cell:
    entry_id: str
    task: str
    variant: str
    config_index: int
    k: int
    epsilon: float | None = None
    s: int | None = None
    t: int | None = None


@dataclass
class CellResult:
    entry_id: str
    task: str
    variant: str
    k: int
    epsilon: float | None
    s: int | None
    t: int | None
    repetitions: int
    pass_count: int
    trigger_count: int
    total_shots: int
    wall_ms: float
    seed: int


@dataclass
class ExperimentReport:
    cells: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def without_wall_time(self) -> list[dict]:
        return [{k: v for k, v in asdict(c).items() if k != "wall_ms"} for c in self.cells]


def _rounds(task: str, k: int, epsilon: float, plan: ExperimentPlan, fraction: float) -> int:
    if plan.s is not None:
        s = plan.s
    else:
        s0 = (eq_min_rounds if task == "EQ" else un_min_rounds)(k, epsilon, plan.alpha2)
        s = max(1, math.ceil(fraction * s0))
    if plan.s_cap is not None:
        s = min(s, plan.s_cap)
    return s


def select_entries(plan: ExperimentPlan, entries=None) -> list[BenchmarkEntry]:
    entries = suite(False) if entries is None else entries
    chosen = [e for e in entries if e.task in plan.tasks and (not plan.ids or e.id in plan.ids)]
    missing = set(plan.ids) - {e.id for e in entries}
    if missing:
        raise PlanError(f"unknown entry ids {sorted(missing)}")
    return chosen


def cells_for(entry: BenchmarkEntry, plan: ExperimentPlan) -> list[Cell]:
    out: list[Cell] = []
    if entry.task == "ID":
        for k in plan.id_k:
            out.append(Cell(entry.id, "ID", "original", len(out), k))
        return out
    for variant in plan.variants:
        for k in plan.k:
            if entry.task == "UN" and k < 2:
                continue
            for eps in plan.epsilon:
                for frac in plan.s_fraction:
                    s = _rounds(entry.task, k, eps, plan, frac)
                    for t in (plan.t if variant == "optimized" else (None,)):
                        out.append(Cell(entry.id, entry.task, variant, len(out), k, eps, s, t))
    return out


def run_cell(entry: BenchmarkEntry, cell: Cell, plan: ExperimentPlan) -> CellResult:
    root = Rng(plan.seed)
    passes = triggers = shots = 0
    start = time.perf_counter()
    n = entry.n_qubits
    for rep in range(plan.repetitions):
        rng = root.split(entry.id, cell.config_index, rep)
        if cell.task == "ID":
            v = id_check(n, cell.k, entry.payload[0], rng)
        else:
            cfg = CheckConfig(k=cell.k, s=cell.s, epsilon=cell.epsilon, t=cell.t or 1, seed=plan.seed)
            v = CHECKS[(cell.task, cell.variant)](n, cfg, *entry.payload, rng=rng)
        passes += v.passed
        triggers += v.trigger_count
        shots += v.shots
    wall = (time.perf_counter() - start) * 1000
    return CellResult(entry.id, cell.task, cell.variant, cell.k, cell.epsilon, cell.s, cell.t,
                      plan.repetitions, passes, triggers, shots, round(wall, 3), plan.seed)


def _worker(args):
    entry_id, cell, plan = args
    entry = next(e for e in suite(False) if e.id == entry_id)
    return run_cell(entry, cell, plan)


def worker_count() -> int:
    cap = os.environ.get("QBBT_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise PlanError(f"QBBT_THREADS must be an integer, got {cap!r}") from None
    return n


def run_plan(plan: ExperimentPlan, entries=None, workers: int | None = None) -> ExperimentReport:
    chosen = select_entries(plan, entries)
    jobs = [(e, c) for e in chosen for c in cells_for(e, plan)]
    workers = worker_count() if workers is None else workers
    if workers > 1 and entries is None and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_worker, [(e.id, c, plan) for e, c in jobs]))
    else:
        results = [run_cell(e, c, plan) for e, c in jobs]
    meta = {"seed": plan.seed, "version": __version__, "plan": asdict(plan)}
    return ExperimentReport(results, meta)


def _csv_value(v):
    return "" if v is None else v


def emit_report(report: ExperimentReport, fmt: str, path) -> None:
    fmt = fmt.lower()
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(CSV_COLUMNS)
            for c in report.cells:
                row = asdict(c)
                w.writerow([_csv_value(row[col]) for col in CSV_COLUMNS])
    elif fmt == "json":
        doc = {"metadata": report.metadata, "cells": [asdict(c) for c in report.cells]}
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
    else:
        raise ValueError(f"unknown report format {fmt!r}")


def load_report(path) -> ExperimentReport:
    with open(path) as fh:
        doc = json.load(fh)
    return ExperimentReport([CellResult(**c) for c in doc["cells"]], doc.get("metadata", {}))
