import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbbt.bench import ORIGINAL_QUBITS, build_original
from qbbt.circuit import Measure, Program, compose, empty, to_unitary
from qbbt.qnum import DensityMatrix, StateVector
from qbbt.sim import (
    GOLDEN, MASK64, ResourceError, Rng, SimulationError, child_key, child_keys, exact_channel,
    exact_channel_batch, mix64, mix64_vec, run_batch, run_shot, uniform_at, uniform_vec,
)
from qbbt.states import pauli_prep

SQ2 = 1 / math.sqrt(2)
PLUS = StateVector(np.array([SQ2, SQ2]))


# ------------------------------------------------------------------ RNG

def _splitmix_reference(seed: int, count: int) -> list[int]:
    # textbook sequential splitmix64: state += GOLDEN, then finalize
    out, state = [], seed
    for _ in range(count):
        state = (state + 0x9E3779B97F4A7C15) & MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        out.append(z ^ (z >> 31))
    return out


def test_uniform_stream_is_splitmix64():
    key = 1234567
    ref = _splitmix_reference(key, 5)
    for ctr, word in enumerate(ref):
        assert uniform_at(key, ctr) == (word >> 11) * 2.0**-53


def test_known_splitmix_vector():
    # first output of splitmix64 seeded with 0
    assert _splitmix_reference(0, 1)[0] == 0xE220A8397B1DCDAF
    assert mix64(GOLDEN) == 0xE220A8397B1DCDAF


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**64 - 1), st.integers(0, 2**40))
def test_scalar_and_vector_paths_agree(key, ctr):
    assert int(mix64_vec(np.array([key], dtype=np.uint64))[0]) == mix64(key)
    assert uniform_vec(np.array([key], dtype=np.uint64), np.array([ctr], dtype=np.uint64))[0] \
        == uniform_at(key, ctr)
    assert int(child_keys(key, np.array([ctr], dtype=np.uint64))[0]) == child_key(key, ctr)


def test_rng_determinism_and_split():
    a, b = Rng(7), Rng(7)
    assert [a.uniform() for _ in range(5)] == [b.uniform() for _ in range(5)]
    c = Rng(7)
    before = c.counter
    child = c.split("point", 3)
    assert c.counter == before
    assert child.key == Rng(7).split("point", 3).key
    assert child.key != Rng(7).split("point", 4).key
    assert Rng(7).split("x").key != Rng(8).split("x").key
    s1, s2 = c.spawn(), c.spawn()
    assert s1.key != s2.key and c.counter == 2


def test_integer_uniformity():
    r = Rng(3)
    counts = np.bincount([r.integer(6) for _ in range(60000)], minlength=6)
    assert np.all(np.abs(counts / 60000 - 1 / 6) < 0.01)


# ------------------------------------------------------- sampled semantics

def test_run_shot_empty():
    psi = StateVector.basis(2, 1)
    res = run_shot(empty(2), psi, Rng(0))
    assert res.collapsed.allclose(psi) and res.classical == {}


def test_run_shot_measure_plus():
    p = Program(1, [Measure((0,), "c")])
    rng = Rng(11)
    ones = sum(run_shot(p, PLUS, rng).classical["c"] for _ in range(10000))
    assert abs(ones / 10000 - 0.5) < 0.02


def test_run_shot_advances_counter_per_event():
    p = Program(2, [Measure((0,), "a"), Measure((1,), "b")])
    rng = Rng(0)
    run_shot(p, StateVector.basis(2, 0), rng)
    assert rng.counter == 2


@pytest.mark.parametrize("amps", [(1, 0), (0, 1), (SQ2, SQ2), (0.6, 0.8j)])
def test_teleport_returns_input(amps):
    psi = StateVector(np.array(amps, dtype=complex))
    p = build_original("TeleportABA")
    rng = Rng(5)
    for _ in range(20):
        assert run_shot(p, psi, rng).collapsed.allclose(psi)


def test_batch_matches_individual_shots():
    p = compose(pauli_prep((2, 4)), Program(2, [Measure((0,), "a"), Measure((1,), "b")]))
    keys = Rng(9).shot_keys(50)
    zero = np.zeros((1, 4), dtype=complex)
    zero[0, 0] = 1
    _, cl, _ = run_batch(p, zero, keys, np.zeros(50, dtype=np.uint64))
    for i, key in enumerate(keys):
        res = run_shot(p, StateVector.basis(2, 0), Rng.from_key(int(key)))
        assert res.classical == {"a": cl["a"][i], "b": cl["b"][i]}


def test_zero_probability_outcomes_never_chosen():
    p = Program(1, [Measure((0,), "c")])
    rng = Rng(2)
    assert all(run_shot(p, StateVector.basis(1, 0), rng).classical["c"] == 0 for _ in range(2000))


def test_simulation_error_on_null_state():
    p = Program(1, [Measure((0,), "c")])
    keys = Rng(0).shot_keys(1)
    with pytest.raises(SimulationError):
        run_batch(p, np.zeros((1, 2), dtype=complex), keys, np.zeros(1, dtype=np.uint64))


# --------------------------------------------------------- exact semantics

def _random_rho(n, seed):
    return DensityMatrix.random(n, np.random.default_rng(seed))


def test_exact_examples():
    rho = _random_rho(3, 0)
    assert exact_channel(empty(3), rho).allclose(rho)
    rho6 = _random_rho(6, 1)
    out = exact_channel(build_original("Reset"), rho6)
    target = np.zeros((64, 64))
    target[0, 0] = 1
    assert np.allclose(out.mat, target, atol=1e-9)
    m = exact_channel(Program(1, [Measure((0,), "c")]), PLUS.to_density())
    assert np.allclose(m.mat, np.eye(2) / 2)


def test_exact_resource_cap():
    with pytest.raises(ResourceError):
        exact_channel_batch(empty(13), np.zeros((1, 2, 2)))


@pytest.mark.parametrize("name", sorted(ORIGINAL_QUBITS))
def test_exact_channel_preserves_trace(name):
    p = build_original(name)
    rho = _random_rho(p.n_qubits, 2)
    out = exact_channel_batch(p, rho.mat[None])[0]
    assert abs(np.trace(out) - 1) < 1e-9


@pytest.mark.parametrize("name", ["Cir1A", "QFT", "QPE", "CRot", "invQPE"])
def test_exact_matches_unitary_conjugation(name):
    p = build_original(name)
    u = to_unitary(p)
    gen = np.random.default_rng(4)
    v = gen.normal(size=2**p.n_qubits) + 1j * gen.normal(size=2**p.n_qubits)
    v /= np.linalg.norm(v)
    out = exact_channel(p, StateVector(v).to_density()).mat
    w = u @ v
    assert np.max(np.abs(out - np.outer(w, w.conj()))) < 1e-9


def _fixed_inputs(n):
    gen = np.random.default_rng(123)
    rows = [np.eye(2**n, dtype=complex)[0], np.eye(2**n, dtype=complex)[-1]]
    for K in ((2,) * n, tuple((q % 6) for q in range(1, n + 1))):
        rows.append(run_batch(pauli_prep(K), rows[0][None], Rng(0).shot_keys(1),
                              np.zeros(1, dtype=np.uint64))[0][0])
    v = gen.normal(size=2**n) + 1j * gen.normal(size=2**n)
    rows.append(v / np.linalg.norm(v))
    return rows


@pytest.mark.parametrize("name", sorted(ORIGINAL_QUBITS))
def test_shot_frequencies_match_exact(name):
    p = build_original(name)
    n = p.n_qubits
    readout = compose(p, Program(n, [Measure(tuple(range(n)), "_out")]))
    shots = 20000
    band = math.sqrt(math.log(2 / 0.001) / (2 * shots))
    for i, psi in enumerate(_fixed_inputs(n)):
        keys = Rng(i).split(name).shot_keys(shots)
        _, cl, _ = run_batch(readout, psi[None], keys, np.zeros(shots, dtype=np.uint64))
        freq = np.bincount(cl["_out"], minlength=2**n) / shots
        exact = np.real(np.diag(exact_channel_batch(p, np.outer(psi, psi.conj())[None])[0]))
        assert np.max(np.abs(freq - exact)) < band, (name, i)
