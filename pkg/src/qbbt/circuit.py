"""Program intermediate representation for black-box quantum programs.

A :class:`Program` acts on ``n_qubits`` input/output qubits plus
``n_ancilla`` workspace qubits that start in ``|0>`` and are discarded at
the end. Qubits ``0..n_qubits-1`` are the I/O register; ancillas follow.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Union

import numpy as np

from . import _kernels
from .qnum import DAGGER_NAME, GATE_ARITY, std_gate


class NotInvertible(ValueError):
    """The program contains a measurement, reset or classical control."""


@dataclass(frozen=True)
class Gate:
    name: str
    targets: tuple[int, ...]
    controls: tuple[int, ...] = ()
    params: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(q) for q in self.targets))
        object.__setattr__(self, "controls", tuple(int(q) for q in self.controls))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if self.name not in GATE_ARITY:
            raise ValueError(f"unknown gate {self.name!r}")
        width, n_params = GATE_ARITY[self.name]
        if len(self.targets) != width:
            raise ValueError(f"{self.name} acts on {width} qubit(s), got {self.targets}")
        if len(self.params) != n_params:
            raise ValueError(f"{self.name} takes {n_params} parameter(s)")
        if not all(np.isfinite(self.params)):
            raise ValueError("gate parameters must be finite")

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.controls + self.targets

    def matrix(self) -> np.ndarray:
        return std_gate(self.name, self.params)

    def dagger(self) -> "Gate":
        if self.name in DAGGER_NAME:
            return replace(self, name=DAGGER_NAME[self.name])
        return replace(self, params=tuple(-p for p in self.params))


@dataclass(frozen=True)
class Measure:
    """Measure ``targets`` in the computational basis into classical ``slot``."""

    targets: tuple[int, ...]
    slot: str

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(q) for q in self.targets))

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.targets


@dataclass(frozen=True)
class Reset:
    targets: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(q) for q in self.targets))

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.targets


@dataclass(frozen=True)
class Conditional:
    """Run ``inner`` only when classical ``slot`` equals ``value``."""

    slot: str
    value: int
    inner: Gate

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.inner.qubits


Instruction = Union[Gate, Measure, Reset, Conditional]


@dataclass(frozen=True)
class Program:
    n_qubits: int
    instructions: tuple = ()
    n_ancilla: int = 0
    name: str = ""
    _live_after: tuple = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "instructions", tuple(self.instructions))
        if self.n_qubits < 1 or self.n_ancilla < 0:
            raise ValueError("register sizes must be n_qubits >= 1, n_ancilla >= 0")
        total = self.total_qubits
        written: set[str] = set()
        for pos, ins in enumerate(self.instructions):
            if not isinstance(ins, (Gate, Measure, Reset, Conditional)):
                raise TypeError(f"instruction {pos} has unsupported type {type(ins)}")
            qs = ins.qubits
            if len(set(qs)) != len(qs) or not qs:
                raise ValueError(f"instruction {pos} repeats or lacks qubits: {qs}")
            if min(qs) < 0 or max(qs) >= total:
                raise ValueError(f"instruction {pos} addresses qubit outside 0..{total - 1}")
            if isinstance(ins, Conditional):
                if ins.slot not in written:
                    raise ValueError(f"slot {ins.slot!r} read before any Measure writes it")
            if isinstance(ins, Measure):
                written.add(ins.slot)
        # slots still read by some later Conditional, per position
        live: list[frozenset] = []
        reads: set[str] = set()
        for ins in reversed(self.instructions):
            live.append(frozenset(reads))
            if isinstance(ins, Conditional):
                reads.add(ins.slot)
        object.__setattr__(self, "_live_after", tuple(reversed(live)))

    @property
    def total_qubits(self) -> int:
        return self.n_qubits + self.n_ancilla

    @property
    def is_unitary_circuit(self) -> bool:
        return all(isinstance(ins, Gate) for ins in self.instructions)

    @property
    def n_random_events(self) -> int:
        """Upper bound on random draws one sampled run consumes."""
        count = sum(1 for ins in self.instructions if isinstance(ins, (Measure, Reset)))
        return count + (1 if self.n_ancilla else 0)

    def live_slots_after(self, pos: int) -> frozenset:
        return self._live_after[pos]

    def __len__(self) -> int:
        return len(self.instructions)

    def renamed(self, name: str) -> "Program":
        return replace(self, name=name)


def empty(n_qubits: int, name: str = "Empty") -> Program:
    return Program(n_qubits, (), name=name)


def _remap(ins, qmap, smap):
    if isinstance(ins, Gate):
        return replace(ins, targets=tuple(qmap(q) for q in ins.targets),
                       controls=tuple(qmap(q) for q in ins.controls))
    if isinstance(ins, Measure):
        return Measure(tuple(qmap(q) for q in ins.targets), smap(ins.slot))
    if isinstance(ins, Reset):
        return Reset(tuple(qmap(q) for q in ins.targets))
    return Conditional(smap(ins.slot), ins.value, _remap(ins.inner, qmap, smap))


def _slots(p: Program) -> set[str]:
    return {ins.slot for ins in p.instructions if isinstance(ins, Measure)}


def compose(first: Program, second: Program, name: str | None = None) -> Program:
    """Run ``first`` then ``second`` on the same I/O register."""
    if first.n_qubits != second.n_qubits:
        raise ValueError(
            f"register mismatch: {first.n_qubits} vs {second.n_qubits} qubits")
    n, shift = first.n_qubits, first.n_ancilla
    taken = _slots(first)
    clash = taken & _slots(second)

    def qmap(q):
        return q if q < n else q + shift

    def smap(s):
        if s not in clash:
            return s
        new = s
        while new in taken or new in _slots(second):
            new += "'"
        return new

    tail = tuple(_remap(ins, qmap, smap) for ins in second.instructions)
    return Program(
        n,
        first.instructions + tail,
        n_ancilla=first.n_ancilla + second.n_ancilla,
        name=name if name is not None else f"{first.name}>{second.name}",
    )


def inverse(p: Program, name: str | None = None) -> Program:
    """Reverse a measurement-free program, replacing each gate by its dagger."""
    if not p.is_unitary_circuit:
        raise NotInvertible(f"{p.name or 'program'} contains non-unitary instructions")
    return Program(
        p.n_qubits,
        tuple(g.dagger() for g in reversed(p.instructions)),
        n_ancilla=p.n_ancilla,
        name=name if name is not None else f"inv{p.name}",
    )


def to_unitary(p: Program) -> np.ndarray:
    """Full unitary of a measurement-free, ancilla-free program (<= 12 qubits)."""
    if not p.is_unitary_circuit:
        raise ValueError("to_unitary requires a measurement-free program")
    if p.n_ancilla:
        raise ValueError("to_unitary requires an ancilla-free program")
    n = p.n_qubits
    if n > 12:
        raise ValueError("to_unitary is limited to 12 qubits")
    # row j of `cols` holds U|j>
    cols = np.eye(2**n, dtype=complex)
    for g in p.instructions:
        cols = _kernels.apply_gate(cols, g.matrix(), g.targets, g.controls, n)
    return cols.T.copy()


def phase_aligned_distance(u: np.ndarray, v: np.ndarray) -> float:
    """max |U - e^{i phi} V| after choosing phi to maximize |tr(U^dagger V)|."""
    ov = np.trace(np.conj(u).T @ v)
    phase = ov / abs(ov) if abs(ov) > 1e-300 else 1.0
    return float(np.max(np.abs(u * phase - v)))


# ----------------------------------------------------------------- JSON

def _fmt_params(params) -> str:
    return "[" + ", ".join("%.17g" % p for p in params) + "]"


def _ins_fields(ins) -> dict:
    if isinstance(ins, Gate):
        return {"kind": "gate", "gate": ins.name, "params": ins.params,
                "targets": list(ins.targets), "controls": list(ins.controls)}
    if isinstance(ins, Measure):
        return {"kind": "measure", "targets": list(ins.targets), "slot": ins.slot}
    if isinstance(ins, Reset):
        return {"kind": "reset", "targets": list(ins.targets)}
    inner = _ins_fields(ins.inner)
    inner.update(kind="cond", slot=ins.slot, cond=int(ins.value))
    return inner


def _ins_json(ins) -> str:
    fields = _ins_fields(ins)
    params = fields.pop("params", None)
    body = json.dumps(fields)
    if params is None:
        return body
    return body[:-1] + ', "params": ' + _fmt_params(params) + "}"


def dumps(p: Program) -> str:
    """Serialize to the Program JSON document (parameters at 17 significant digits)."""
    head = json.dumps({"name": p.name, "n_qubits": p.n_qubits, "n_ancilla": p.n_ancilla})
    ins = ",\n    ".join(_ins_json(i) for i in p.instructions)
    return head[:-1] + ',\n  "instructions": [\n    ' + ins + "\n  ]\n}\n" if ins else \
        head[:-1] + ', "instructions": []}\n'


def _ins_from(d: dict):
    kind = d["kind"]
    if kind in ("gate", "cond"):
        g = Gate(d["gate"], tuple(d.get("targets", ())), tuple(d.get("controls", ())),
                 tuple(float(x) for x in d.get("params", ())))
        if kind == "gate":
            return g
        return Conditional(d["slot"], int(d["cond"]), g)
    if kind == "measure":
        return Measure(tuple(d["targets"]), d["slot"])
    if kind == "reset":
        return Reset(tuple(d["targets"]))
    raise ValueError(f"unknown instruction kind {kind!r}")


def loads(text: str) -> Program:
    doc = json.loads(text)
    return Program(
        int(doc["n_qubits"]),
        tuple(_ins_from(d) for d in doc["instructions"]),
        n_ancilla=int(doc.get("n_ancilla", 0)),
        name=doc.get("name", ""),
    )


def save(p: Program, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(p))


def load(path) -> Program:
    with open(path) as fh:
        return loads(fh.read())
