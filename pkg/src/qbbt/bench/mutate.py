"""Single-edit gate and measurement mutation operators."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..circuit import Conditional, Gate, Measure, Program, _ins_fields, _ins_from

KINDS = ("GM-add", "GM-remove", "GM-replace", "MM-add", "MM-remove")


@dataclass(frozen=True)
class MutationOp:
    kind: str
    position: int
    detail: Optional[object] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown mutation kind {self.kind!r}")
        if self.kind in ("GM-add", "GM-replace") and not isinstance(self.detail, (Gate, Conditional)):
            raise ValueError(f"{self.kind} needs a gate as detail")
        if self.kind == "MM-add" and not isinstance(self.detail, Measure):
            raise ValueError("MM-add needs a Measure as detail")

    @property
    def tag(self) -> str:
        return f"{self.kind}@{self.position}"

    def to_json(self) -> dict:
        out = {"kind": self.kind, "position": self.position}
        if self.detail is not None:
            out["detail"] = _ins_fields(self.detail)
        return out

    @classmethod
    def from_json(cls, doc: dict) -> "MutationOp":
        detail = doc.get("detail")
        if detail is not None:
            detail = dict(detail)
            detail.setdefault("params", ())
            detail = _ins_from(detail)
        return cls(doc["kind"], int(doc["position"]), detail)


def mutate(p: Program, op: MutationOp) -> Program:
    ins = list(p.instructions)
    size = len(ins)
    limit = size + 1 if op.kind.endswith("add") else size
    if not 0 <= op.position < limit:
        raise ValueError(f"position {op.position} outside 0..{limit - 1} for {op.kind}")
    if op.kind in ("GM-add", "MM-add"):
        ins.insert(op.position, op.detail)
    elif op.kind == "GM-remove":
        if not isinstance(ins[op.position], (Gate, Conditional)):
            raise ValueError(f"GM-remove at {op.position} does not address a gate")
        del ins[op.position]
    elif op.kind == "MM-remove":
        if not isinstance(ins[op.position], Measure):
            raise ValueError(f"MM-remove at {op.position} does not address a Measure")
        del ins[op.position]
    else:
        if not isinstance(ins[op.position], (Gate, Conditional)):
            raise ValueError(f"GM-replace at {op.position} does not address a gate")
        ins[op.position] = op.detail
    return Program(p.n_qubits, ins, n_ancilla=p.n_ancilla, name=f"{p.name}[{op.tag}]")


def swap_adjacent(p: Program, position: int) -> list[MutationOp]:
    """Remove-then-add pair exchanging instructions ``position`` and ``position + 1``."""
    moved = p.instructions[position]
    return [MutationOp("GM-remove", position), MutationOp("GM-add", position + 1, moved)]
