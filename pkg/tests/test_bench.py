import json

import numpy as np
import pytest

from qbbt.bench import (
    KINDS, ORIGINAL_QUBITS, MutationOp, SuiteError, build_original, by_id, export_suite,
    import_suite, load_catalog, mutate, suite, swap_adjacent,
)
from qbbt.bench import TASK_COUNTS, _verify, BenchmarkEntry
from qbbt.circuit import Gate, Measure, empty
from qbbt.oracle import exact_equivalent, exact_unitary

TABLE_QUBITS = {"Cir1A": 2, "Cir1B": 2, "Cir2A": 3, "Cir2B": 3, "Empty": 6, "TeleportABA": 3,
                "QFT": 5, "invQFT": 5, "QPE": 5, "invQPE": 5, "CRot": 5, "Reset": 6}


@pytest.mark.parametrize("name", sorted(ORIGINAL_QUBITS))
def test_original_sizes(name):
    p = build_original(name)
    assert p.total_qubits == TABLE_QUBITS[name]
    assert p.name == name


def test_original_examples():
    e = build_original("Empty")
    assert e.n_qubits == 6 and len(e) == 0
    assert build_original("Empty", 2).n_qubits == 2
    with pytest.raises(ValueError):
        build_original("Grover")
    with pytest.raises(ValueError):
        build_original("QFT", 3)


def test_crot_rotation_amplitudes():
    from qbbt.circuit import to_unitary
    u = to_unitary(build_original("CRot"))
    for lam in range(16):
        col = u[:, lam << 1]
        if lam == 0:
            assert np.isclose(col[0], 1)
            continue
        assert np.isclose(col[(lam << 1) | 1], 1 / lam)
        assert np.isclose(col[lam << 1], np.sqrt(1 - 1 / lam**2))


def test_qpe_reads_out_the_eigenphase():
    from qbbt.circuit import to_unitary
    from qbbt.qnum import std_gate
    u = to_unitary(build_original("QPE"))
    values, vectors = np.linalg.eig(std_gate("S") @ std_gate("H"))
    for lam, v in zip(values, vectors.T):
        scaled = (np.angle(lam) / (2 * np.pi)) % 1 * 16
        out = u @ np.kron(np.eye(16)[0], v)
        probs = (np.abs(out.reshape(16, 2)) ** 2).sum(axis=1)
        assert probs.argmax() in (int(np.floor(scaled)) % 16, int(np.ceil(scaled)) % 16)
        # textbook lower bound for the nearest 4-bit estimate
        assert probs.max() >= 4 / np.pi**2


def test_mutation_validation():
    qft = build_original("QFT")
    with pytest.raises(ValueError):
        MutationOp("GM-swap", 0)
    with pytest.raises(ValueError):
        MutationOp("GM-add", 0)
    with pytest.raises(ValueError):
        MutationOp("MM-add", 0, Gate("X", (0,)))
    with pytest.raises(ValueError):
        mutate(qft, MutationOp("GM-remove", len(qft)))
    with pytest.raises(ValueError):
        mutate(qft, MutationOp("MM-remove", 0))
    with pytest.raises(ValueError):
        mutate(build_original("Cir2A"), MutationOp("GM-remove", 0))
    assert len(KINDS) == 5


def test_mutation_names_and_round_trip():
    qft = build_original("QFT")
    added = mutate(qft, MutationOp("GM-add", 4, Gate("X", (1,))))
    assert added.name.endswith("[GM-add@4]") and len(added) == len(qft) + 1
    back = mutate(added, MutationOp("GM-remove", 4))
    assert exact_equivalent(back, qft)
    cir = build_original("Cir2B")
    no_measure = mutate(cir, MutationOp("MM-remove", 1))
    assert not any(isinstance(i, Measure) for i in no_measure.instructions)
    op = MutationOp("GM-replace", 2, Gate("Phase", (0,), (2,), (0.25,)))
    assert MutationOp.from_json(json.loads(json.dumps(op.to_json()))) == op


def test_swap_adjacent():
    p = build_original("Cir2A")
    q = p
    for op in swap_adjacent(p, 2):
        q = mutate(q, op)
    assert q.instructions[2] == p.instructions[3] and q.instructions[3] == p.instructions[2]


def test_suite_counts_and_examples():
    entries = suite(False)
    assert len(entries) == 63
    counts = {}
    for e in entries:
        counts[(e.task, e.expected)] = counts.get((e.task, e.expected), 0) + 1
    assert counts == TASK_COUNTS
    assert len({e.id for e in entries}) == 63
    e4 = by_id("4")
    assert e4.task == "EQ" and e4.expected == "PASS"
    assert exact_equivalent(e4.payload[1], empty(5)) and e4.payload[1].n_qubits == 5
    assert (by_id("26").task, by_id("26").expected, by_id("26").payload[0].name) == ("UN", "FAIL", "Reset")
    assert (by_id("13").task, by_id("13").expected, by_id("13").payload[0].name) == \
        ("ID", "PASS", "TeleportABA")
    with pytest.raises(KeyError):
        by_id("99")


def test_frozen_flags():
    frozen = {d["id"] for d in load_catalog() if d.get("frozen")}
    for prefix in ("5.", "9.", "14.", "15.", "16.", "17.", "23.", "28."):
        assert any(i.startswith(prefix) for i in frozen)
    assert "1" not in frozen and "26" not in frozen


def test_mm_add_at_end_of_qft():
    p = by_id("27.3").payload[0]
    qft = build_original("QFT")
    assert p.instructions[:-1] == qft.instructions
    assert isinstance(p.instructions[-1], Measure) and len(p.instructions[-1].targets) == 1
    assert not exact_unitary(p)


def test_gm_mutants_stay_unitary():
    for e in suite(False):
        if e.id.startswith("23."):
            assert exact_unitary(e.payload[0])
    gen = np.random.default_rng(3)
    for name in ("Cir1A", "QFT", "CRot"):
        p = build_original(name)
        for _ in range(3):
            pos = int(gen.integers(len(p)))
            q = mutate(p, MutationOp("GM-replace", pos, Gate("T", (int(gen.integers(p.n_qubits)),))))
            assert exact_unitary(q)


def test_mm_add_mutants_are_not_unitary():
    for e in suite(False):
        if e.id.startswith(("27.", "28.")):
            assert not exact_unitary(e.payload[0])
    q = mutate(build_original("Cir1B"), MutationOp("MM-add", 1, Measure((1,), "x")))
    assert not exact_unitary(q)


def test_every_label_matches_the_oracle():
    suite.cache_clear()
    entries = suite(True)
    assert len(entries) == 63


def test_contradicting_label_is_rejected():
    e = by_id("1")
    with pytest.raises(SuiteError):
        _verify(BenchmarkEntry(e.id, e.task, "FAIL", e.payload))


def test_export_import_round_trip(tmp_path):
    entries = suite(False)
    manifest = export_suite(tmp_path, entries)
    doc = json.loads(manifest.read_text())
    assert {"id", "task", "expected", "files"} <= set(doc[0])
    back = import_suite(tmp_path)
    assert [(e.id, e.task, e.expected, e.payload, e.frozen) for e in back] == \
        [(e.id, e.task, e.expected, e.payload, e.frozen) for e in entries]
