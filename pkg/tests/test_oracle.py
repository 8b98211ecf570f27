import itertools
import math

import numpy as np
import pytest
from scipy.stats import binom

from conftest import random_program
from qbbt.bench import ORIGINAL_QUBITS, build_original, mutate, MutationOp
from qbbt.circuit import Gate, Measure, Program, empty
from qbbt.oracle import (
    OracleConsistencyError, choi_matrix, choi_route, choi_spectrum_extremes, e_param, e_tilde_pass,
    e_values, exact_equivalent, exact_unitary, id_point_pass, overlap, overlap_pass, purity,
    orthogonality_route, trab_true,
)

SQ2 = 1 / math.sqrt(2)
KET0 = np.diag([1.0, 0.0])
KET1 = np.diag([0.0, 1.0])
MIX = np.eye(2) / 2
UN_COLUMN = {"Cir1A": True, "Cir1B": True, "Cir2A": False, "Cir2B": False, "Empty": True,
             "TeleportABA": True, "QFT": True, "invQFT": True, "QPE": True, "invQPE": True,
             "CRot": True, "Reset": False}


def test_overlap_examples():
    plus = np.full((2, 2), 0.5)
    minus = np.array([[0.5, -0.5], [-0.5, 0.5]])
    assert overlap(plus, plus) == pytest.approx(1)
    assert overlap(KET0, MIX) == pytest.approx(0.5)
    assert overlap(plus, minus) == pytest.approx(0)
    assert purity(MIX) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        overlap(KET0, np.eye(4))


def test_e_param_examples():
    assert e_param(MIX, MIX) == 0
    assert e_param(KET0, KET1) == pytest.approx(1)
    assert e_param(KET0, MIX) == pytest.approx(0.25)


def test_equivalence_examples():
    assert exact_equivalent(build_original("Cir1A"), build_original("Cir1B"))
    assert exact_equivalent(build_original("Cir2A"), build_original("Cir2B"))
    qft = build_original("QFT")
    bad = mutate(qft, MutationOp("GM-replace", 3, Gate("X", (2,))))
    assert not exact_equivalent(qft, bad)
    x = Program(1, [Gate("X", (0,))])
    Ks, vals = e_values(empty(1), x)
    assert vals[Ks.index((0,))] == pytest.approx(1)


def test_unitarity_examples():
    assert exact_unitary(Program(1, [Gate("H", (0,))]))
    assert not exact_unitary(build_original("Reset"))
    meas = Program(1, [Measure((0,), "c")])
    assert not exact_unitary(meas)
    ev = np.linalg.eigvalsh(choi_matrix(meas).choi)
    assert np.allclose(sorted(ev)[-2:], [1, 1]) and np.allclose(sorted(ev)[:2], [0, 0])


@pytest.mark.parametrize("name", sorted(UN_COLUMN))
def test_unitarity_column(name):
    assert exact_unitary(build_original(name)) is UN_COLUMN[name]


def test_teleport_is_identity_on_its_register():
    assert exact_equivalent(build_original("TeleportABA"), empty(1))


@pytest.mark.parametrize("seed", range(50))
def test_routes_agree_on_random_programs(seed):
    gen = np.random.default_rng(1000 + seed)
    p = random_program(2, 6, gen, measures=seed % 2 == 1, resets=seed % 10 == 9)
    a, b = orthogonality_route(p), choi_route(p)
    assert a == b
    if seed % 2 == 0 and seed % 10 != 9:
        assert a


def test_choi_is_a_channel():
    for name in ("Cir2A", "TeleportABA", "Reset", "QFT"):
        cm = choi_matrix(build_original(name))
        assert cm.partial_trace_residual() < 1e-9
        assert choi_spectrum_extremes(cm)[2] > -1e-8


def test_unitarity_route_disagreement_raises(monkeypatch):
    import qbbt.oracle as mod
    monkeypatch.setattr(mod, "choi_route", lambda p: False)
    with pytest.raises(OracleConsistencyError):
        exact_unitary(Program(1, [Gate("H", (0,))]))


def test_reflexive_and_symmetric():
    progs = [build_original(n) for n in ORIGINAL_QUBITS]
    # 6-qubit self-comparisons sweep 46656 inputs each; covered by the suite self-check
    for p in progs:
        if p.n_qubits <= 5:
            assert exact_equivalent(p, p)
    same = [(p, q) for p, q in itertools.combinations(progs, 2) if p.n_qubits == q.n_qubits]
    for p, q in same:
        assert exact_equivalent(p, q) == exact_equivalent(q, p)


def test_oracle_size_cap():
    with pytest.raises(ValueError):
        exact_equivalent(empty(7), empty(7))


# --------------------------------------------------------- predicted rates

def _brute_e_tilde(s, eps, t11, t22, t12):
    p = [(1 - x) / 2 for x in (t11, t22, t12)]
    pmf = [binom.pmf(np.arange(s + 1), s, q) for q in p]
    total = 0.0
    for a, b, c in itertools.product(range(s + 1), repeat=3):
        if abs((2 * c - a - b) / s) <= eps:
            total += pmf[0][a] * pmf[1][b] * pmf[2][c]
    return total


@pytest.mark.parametrize("traces", [(1, 1, 1), (1, 1, 0), (0.5, 0.5, 0.5), (1, 0.5, 0.75),
                                    (0.3, 0.9, 0.2)])
@pytest.mark.parametrize("s,eps", [(5, 0.3), (8, 0.15), (9, 0.5)])
def test_e_tilde_pass_matches_enumeration(traces, s, eps):
    assert e_tilde_pass(s, eps, *traces) == pytest.approx(_brute_e_tilde(s, eps, *traces), abs=1e-12)


def test_overlap_pass_and_trab():
    assert overlap_pass(100, 0.15, 0.0) > 0.85
    assert overlap_pass(100, 0.15, 1.0) == 0.0
    assert trab_true(20, 0.5) == pytest.approx(0.75**20)
    assert trab_true(7, 1.0) == 1.0


def test_id_point_pass_for_x():
    # detected by K in {0,1,4,5}, missed by K in {2,3}
    assert id_point_pass(Program(1, [Gate("X", (0,))])) == pytest.approx(1 / 3)
    assert id_point_pass(empty(2)) == pytest.approx(1)
