import math
from functools import reduce

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbbt.circuit import compose, empty
from qbbt.oracle import exact_equivalent
from qbbt.qnum import StateVector
from qbbt.sim import Rng, run_batch, run_shot
from qbbt.states import basis_prep, pauli_prep, pauli_prep_inverse, superpos_prep

SQ2 = 1 / math.sqrt(2)
NAMED = {
    0: np.array([1, 0]), 1: np.array([0, 1]),
    2: np.array([SQ2, SQ2]), 3: np.array([SQ2, -SQ2]),
    4: np.array([SQ2, 1j * SQ2]), 5: np.array([SQ2, -1j * SQ2]),
}


def prepared(p):
    zero = np.zeros((1, 2**p.n_qubits), dtype=complex)
    zero[0, 0] = 1
    return run_batch(p, zero, Rng(0).shot_keys(1), np.zeros(1, dtype=np.uint64))[0][0]


def named_product(K):
    return reduce(np.kron, [NAMED[d] for d in K])


def test_pauli_examples():
    assert np.allclose(prepared(pauli_prep([0, 0])), [1, 0, 0, 0])
    assert np.allclose(prepared(pauli_prep([1, 2, 3])), named_product((1, 2, 3)))
    assert np.allclose(prepared(pauli_prep([4])), [SQ2, 1j * SQ2])


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(0, 5), min_size=1, max_size=5))
def test_pauli_states_match_named_products(K):
    out = prepared(pauli_prep(K))
    assert abs(np.vdot(out, out) - 1) < 1e-9
    assert np.max(np.abs(out - named_product(K))) < 1e-9


def test_pauli_round_trip():
    gen = np.random.default_rng(8)
    for _ in range(20):
        K = tuple(int(x) for x in gen.integers(0, 6, size=int(gen.integers(1, 4))))
        assert exact_equivalent(compose(pauli_prep(K), pauli_prep_inverse(K)), empty(len(K)))
    assert np.allclose(prepared(compose(pauli_prep([2]), pauli_prep_inverse([2]))), [1, 0])


def test_pauli_round_trip_measures_zero():
    from qbbt.circuit import Measure, Program
    p = compose(compose(pauli_prep([5]), pauli_prep_inverse([5])), Program(1, [Measure((0,), "c")]))
    rng = Rng(1)
    assert all(run_shot(p, StateVector.basis(1, 0), rng).classical["c"] == 0 for _ in range(1000))


def test_pauli_invalid_digits():
    for bad in ([6], [-1], [], [1.5]):
        with pytest.raises(ValueError):
            pauli_prep(bad)


def test_basis_examples():
    assert exact_equivalent(basis_prep(0, 3), empty(3))
    out = prepared(basis_prep(5, 3))
    assert np.isclose(out[5], 1)
    with pytest.raises(ValueError):
        basis_prep(8, 3)


def test_superposition_examples():
    assert np.allclose(prepared(superpos_prep(0, 1, 1, 1)), [SQ2, SQ2])
    assert np.allclose(prepared(superpos_prep(0, 3, -1, 2)), [SQ2, 0, 0, -SQ2], atol=1e-9)
    with pytest.raises(ValueError):
        superpos_prep(2, 2, 1, 2)
    with pytest.raises(ValueError):
        superpos_prep(0, 1, 0, 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.data())
def test_superpositions_normalized_and_orthogonal(n, data):
    d = 2**n
    m = data.draw(st.integers(0, d - 1))
    m2 = data.draw(st.integers(0, d - 1).filter(lambda x: x != m))
    plus, minus = prepared(superpos_prep(m, m2, 1, n)), prepared(superpos_prep(m, m2, -1, n))
    assert abs(np.vdot(plus, plus) - 1) < 1e-9
    assert abs(np.vdot(plus, minus)) < 1e-9
    assert np.isclose(plus[m], SQ2) and np.isclose(abs(plus[m2]), SQ2)
