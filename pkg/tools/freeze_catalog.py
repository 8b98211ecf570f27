"""Regenerate src/qbbt/bench/catalog.json, the frozen list of benchmark entries.

Mutant edits were picked with the exact pass-rate predictions in
``qbbt.oracle`` so that each entry lands in its intended detection regime.
Run from the repository root: ``python tools/freeze_catalog.py``.
"""

import json
import math
from pathlib import Path

from qbbt.bench.mutate import MutationOp, swap_adjacent
from qbbt.bench.programs import cir2a, cir2b
from qbbt.circuit import Conditional, Gate, Measure

OUT = Path(__file__).resolve().parents[1] / "src" / "qbbt" / "bench" / "catalog.json"


def prog(name, n=None):
    d = {"program": name}
    if n is not None:
        d["n_qubits"] = n
    return d


def comp(first, second, name):
    return {"compose": [first, second], "name": name}


def mut(base, ops, name):
    return {"mutate": base, "ops": [op.to_json() for op in ops], "name": name}


def G(name, t, c=(), p=()):
    return Gate(name, t, c, p)


def add(pos, ins):
    kind = "MM-add" if isinstance(ins, Measure) else "GM-add"
    return MutationOp(kind, pos, ins)


def rm(pos):
    return MutationOp("GM-remove", pos)


def rep(pos, ins):
    return MutationOp("GM-replace", pos, ins)


entries = []


def entry(id_, task, expected, payload, frozen=False, note=""):
    entries.append({"id": id_, "task": task, "expected": expected, "payload": payload,
                    "frozen": frozen, "note": note})


# EQ
entry("1", "EQ", "PASS", [prog("Cir1A"), prog("Cir1B")])
entry("2", "EQ", "PASS", [prog("Cir2A"), prog("Cir2B")])
entry("3", "EQ", "PASS", [prog("QFT"), prog("QFT")])
qft_inv = comp(prog("invQFT"), prog("QFT"), "QFT*invQFT")
entry("4", "EQ", "PASS", [qft_inv, prog("Empty", 5)])

cir1_muts = [
    ([rm(2)], "remove the CNOT"),
    ([rm(0)], "remove the first H on q0"),
    ([rep(3, G("S", (0,)))], "replace the second H on q0 with S"),
    ([rep(2, G("CNOT", (1, 0)))], "reverse the CNOT"),
    ([add(5, G("Z", (0,)))], "append Z on q0"),
]
for i, (ops, note) in enumerate(cir1_muts, 1):
    entry(f"5.{i}", "EQ", "FAIL", [mut(prog("Cir1A"), ops, "error Cir1A"), prog("Cir1B")], True, note)

a, b = cir2a(), cir2b()
entry("6.1", "EQ", "FAIL", [mut(prog("Cir2A"), [rep(2, G("S", (2,)))], "error Cir2A"), prog("Cir2B")],
      True, "replace H on q2 with S")
entry("6.2", "EQ", "FAIL", [mut(prog("Cir2A"), swap_adjacent(a, 2), "error Cir2A"), prog("Cir2B")],
      True, "exchange H on q2 and the final CNOT")
entry("7.1", "EQ", "FAIL", [prog("Cir2A"), mut(prog("Cir2B"), swap_adjacent(b, 2), "error Cir2B")],
      True, "exchange H on q2 and the final CNOT")
entry("7.2", "EQ", "FAIL", [prog("Cir2A"), mut(prog("Cir2B"), [rep(0, G("CZ", (0, 1)))], "error Cir2B")],
      True, "replace the first CNOT with CZ")
entry("7.3", "EQ", "FAIL", [prog("Cir2A"), mut(prog("Cir2B"), [rep(2, G("S", (2,)))], "error Cir2B")],
      True, "replace H on q2 with S")

qft_muts = [
    ([rm(0)], "remove H on q0"),
    ([rm(1)], "remove the controlled pi/2 phase on q0"),
    ([rm(15)], "remove SWAP(0,4)"),
    ([add(17, G("X", (2,)))], "append X on q2"),
    ([rep(9, G("X", (2,)))], "replace H on q2 with X"),
]
for i, (ops, note) in enumerate(qft_muts, 1):
    entry(f"8.{i}", "EQ", "FAIL", [mut(prog("QFT"), ops, "error QFT"), prog("QFT")], True, note)

inv_muts = [
    ([rm(0)], "remove SWAP(1,3)"),
    ([rm(2)], "remove H on q4"),
    ([rep(7, G("X", (2,)))], "replace H on q2 with X"),
    ([add(17, G("Z", (0,)))], "append Z on q0"),
    ([rm(16)], "remove the final H on q0"),
]
for i, (ops, note) in enumerate(inv_muts, 1):
    bad = comp(mut(prog("invQFT"), ops, "error invQFT"), prog("QFT"), "QFT*error invQFT")
    entry(f"9.{i}", "EQ", "FAIL", [bad, prog("Empty", 5)], True, note)

# ID
entry("10", "ID", "PASS", [prog("Empty")])
entry("11", "ID", "PASS", [qft_inv])
entry("12", "ID", "PASS", [comp(prog("invQPE"), prog("QPE"), "QPE*invQPE")])
entry("13", "ID", "PASS", [prog("TeleportABA")])
entry("14.1", "ID", "FAIL", [mut(prog("Empty", 2), [add(0, G("S", (0,)))], "error Empty")], True,
      "S on q0 of a 2-qubit Empty")
entry("14.2", "ID", "FAIL", [mut(prog("Empty", 2), [add(0, G("T", (0,)))], "error Empty")], True,
      "T on q0 of a 2-qubit Empty")
for i, (ops, note) in enumerate(inv_muts, 1):
    bad = comp(mut(prog("invQFT"), ops, "error invQFT"), prog("QFT"), "QFT*error invQFT")
    entry(f"15.{i}", "ID", "FAIL", [bad], True, note)
qpe_len = 46
qpe_muts = [
    ([rm(0)], "remove the first H of the inverse"),
    ([rm(qpe_len - 1)], "remove the last H of the inverse"),
    ([add(0, G("X", (4,)))], "prepend X on the target"),
    ([rm(12)], "remove a controlled Sdg"),
    ([add(qpe_len, G("H", (2,)))], "append H on q2"),
]
for i, (ops, note) in enumerate(qpe_muts, 1):
    bad = comp(mut(prog("invQPE"), ops, "error invQPE"), prog("QPE"), "QPE*error invQPE")
    entry(f"16.{i}", "ID", "FAIL", [bad], True, note)
tele_muts = [
    ([rm(6)], "drop the first X correction"),
    ([rm(7)], "drop the first Z correction"),
    ([rm(0)], "drop the first Bell-pair H"),
    ([rep(17, Conditional("baz", 1, G("X", (0,))))], "second Z correction becomes X"),
    ([add(20, G("S", (0,)))], "append S on A"),
]
for i, (ops, note) in enumerate(tele_muts, 1):
    entry(f"17.{i}", "ID", "FAIL", [mut(prog("TeleportABA"), ops, "error TeleportABA")], True, note)

# UN
for id_, name in (("18", "Cir1A"), ("19", "Cir1B"), ("20", "Empty"), ("21", "QFT"), ("22", "CRot")):
    entry(id_, "UN", "PASS", [prog(name)])
gm_muts = [
    ([rm(0)], "remove H on q0"),
    ([add(0, G("T", (0,)))], "prepend T on q0"),
    ([rep(2, G("Phase", (0,), (2,), (math.pi / 2,)))], "controlled pi/4 phase becomes pi/2"),
]
for i, (ops, note) in enumerate(gm_muts, 1):
    entry(f"23.{i}", "UN", "PASS", [mut(prog("QFT"), ops, "GM QFT")], True, note)
entry("24", "UN", "FAIL", [prog("Cir2A")])
entry("25", "UN", "FAIL", [prog("Cir2B")])
entry("26", "UN", "FAIL", [prog("Reset")])
mm_qft = [
    (0, 0, "measure q0 at the beginning"),
    (5, 1, "measure q1 inside the rotation loop"),
    (17, 0, "measure q0 at the end"),
    (9, 2, "measure q2 inside the rotation loop"),
    (12, 3, "measure q3 inside the rotation loop"),
]
for i, (pos, q, note) in enumerate(mm_qft, 1):
    entry(f"27.{i}", "UN", "FAIL", [mut(prog("QFT"), [add(pos, Measure((q,), "mm"))], "MM QFT")], True, note)
for i, (pos, q, note) in enumerate([(0, 0, "measure l-register q0 first"),
                                    (40, 2, "measure l-register q2 mid-program")], 1):
    entry(f"28.{i}", "UN", "FAIL", [mut(prog("CRot"), [add(pos, Measure((q,), "mm"))], "MM CRot")], True, note)

OUT.write_text(json.dumps({"version": 1, "entries": entries}, indent=1) + "\n")
print(f"wrote {len(entries)} entries to {OUT}")
