"""Labeled benchmark suite: originals, mutants and the 63 checking tasks."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .. import circuit
from ..circuit import Program, compose
from .mutate import KINDS, MutationOp, mutate, swap_adjacent
from .programs import ORIGINAL_QUBITS, build_original

__all__ = [
    "BenchmarkEntry", "KINDS", "MutationOp", "ORIGINAL_QUBITS", "SuiteError",
    "build_original", "export_suite", "import_suite", "mutate", "suite", "swap_adjacent",
]

TASK_COUNTS = {("EQ", "PASS"): 4, ("EQ", "FAIL"): 20, ("ID", "PASS"): 4, ("ID", "FAIL"): 17,
               ("UN", "PASS"): 8, ("UN", "FAIL"): 10}


class SuiteError(RuntimeError):
    """A suite label contradicts the exact oracle, or the catalog is malformed."""


@dataclass(frozen=True)
class BenchmarkEntry:
    id: str
    task: str
    expected: str
    payload: tuple
    frozen: bool = False
    note: str = ""

    @property
    def n_qubits(self) -> int:
        return self.payload[0].n_qubits


def _build(expr: dict) -> Program:
    if "program" in expr:
        return build_original(expr["program"], expr.get("n_qubits"))
    if "compose" in expr:
        first, second = (_build(e) for e in expr["compose"])
        return compose(first, second, name=expr.get("name"))
    if "mutate" in expr:
        p = _build(expr["mutate"])
        for op in expr["ops"]:
            p = mutate(p, MutationOp.from_json(op))
        return p.renamed(expr.get("name", p.name))
    raise SuiteError(f"unknown payload expression {expr}")


def load_catalog() -> list[dict]:
    text = resources.files(__package__).joinpath("catalog.json").read_text()
    return json.loads(text)["entries"]


def _verify(e: BenchmarkEntry) -> None:
    from ..oracle import exact_equivalent, exact_unitary

    if e.task == "EQ":
        truth = exact_equivalent(*e.payload)
    elif e.task == "ID":
        truth = exact_equivalent(e.payload[0], circuit.empty(e.n_qubits))
    else:
        truth = exact_unitary(e.payload[0])
    if truth != (e.expected == "PASS"):
        raise SuiteError(f"entry {e.id}: label {e.expected} contradicts the exact oracle")


@lru_cache(maxsize=2)
def suite(verify: bool = True) -> tuple[BenchmarkEntry, ...]:
    """All 63 entries; with ``verify`` every label is confirmed by the exact oracle."""
    entries = []
    for doc in load_catalog():
        payload = tuple(_build(x) for x in doc["payload"])
        entries.append(BenchmarkEntry(doc["id"], doc["task"], doc["expected"], payload,
                                      bool(doc.get("frozen")), doc.get("note", "")))
    counts: dict = {}
    for e in entries:
        counts[(e.task, e.expected)] = counts.get((e.task, e.expected), 0) + 1
        if len(e.payload) != (2 if e.task == "EQ" else 1):
            raise SuiteError(f"entry {e.id} has the wrong payload arity")
    if counts != TASK_COUNTS:
        raise SuiteError(f"catalog counts {counts} differ from the benchmark layout")
    if verify:
        for e in entries:
            _verify(e)
    return tuple(entries)


def by_id(entry_id: str, verify: bool = False) -> BenchmarkEntry:
    for e in suite(verify):
        if e.id == entry_id:
            return e
    raise KeyError(entry_id)


def export_suite(directory, entries=None) -> Path:
    """Write each program as JSON plus ``manifest.json``; returns the manifest path."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    entries = suite(False) if entries is None else entries
    manifest = []
    for e in entries:
        files = []
        for i, p in enumerate(e.payload):
            fname = f"entry_{e.id}_{i}.json"
            circuit.save(p, out / fname)
            files.append(fname)
        manifest.append({"id": e.id, "task": e.task, "expected": e.expected, "files": files,
                         "frozen": e.frozen, "note": e.note})
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, indent=1) + "\n")
    return path


def import_suite(directory) -> tuple[BenchmarkEntry, ...]:
    root = Path(directory)
    manifest = json.loads((root / "manifest.json").read_text())
    return tuple(
        BenchmarkEntry(m["id"], m["task"], m["expected"],
                       tuple(circuit.load(root / f) for f in m["files"]),
                       bool(m.get("frozen")), m.get("note", ""))
        for m in manifest)
