"""Preparation programs for the three input families used by the checkers.

Pauli digits map as 0:|0>, 1:|1>, 2:|+>, 3:|->, 4:|+i>, 5:|-i>.
"""

from __future__ import annotations

from functools import lru_cache

from .circuit import Gate, Program, inverse

# gate sequence applied to |0> for each digit, in execution order
_PAULI_GATES = {
    0: (),
    1: ("X",),
    2: ("H",),
    3: ("X", "H"),
    4: ("H", "S"),
    5: ("H", "Sdg"),
}


def _check_k(K) -> tuple[int, ...]:
    K = tuple(K)
    if not K:
        raise ValueError("Pauli index must have at least one digit")
    for digit in K:
        if not isinstance(digit, int) and not hasattr(digit, "__index__"):
            raise ValueError(f"invalid Pauli digit {digit!r}")
        if int(digit) not in _PAULI_GATES:
            raise ValueError(f"Pauli digit {digit} outside 0..5")
    return tuple(int(d) for d in K)


@lru_cache(maxsize=8192)
def _pauli_prep(K: tuple[int, ...]) -> Program:
    gates = [Gate(name, (q,)) for q, digit in enumerate(K) for name in _PAULI_GATES[digit]]
    return Program(len(K), gates, name="G" + "".join(map(str, K)))


def pauli_prep(K) -> Program:
    """Program mapping ``|0...0>`` to the Pauli product state named by ``K``."""
    return _pauli_prep(_check_k(K))


@lru_cache(maxsize=8192)
def _pauli_prep_inverse(K: tuple[int, ...]) -> Program:
    return inverse(_pauli_prep(K), name="invG" + "".join(map(str, K)))


def pauli_prep_inverse(K) -> Program:
    return _pauli_prep_inverse(_check_k(K))


def _bit(m: int, q: int, n: int) -> int:
    return (m >> (n - 1 - q)) & 1


def basis_prep(m: int, n: int) -> Program:
    """X on every qubit whose bit is set in ``m`` (qubit 0 is the MSB)."""
    if not 0 <= m < 2**n:
        raise ValueError(f"basis index {m} outside 0..{2**n - 1}")
    return Program(n, [Gate("X", (q,)) for q in range(n) if _bit(m, q, n)], name=f"C{m}")


def superpos_prep(m: int, n2: int, sign: int, n: int) -> Program:
    """Prepare ``(|m> + sign |n2>) / sqrt(2)`` on ``n`` qubits."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if m == n2:
        raise ValueError("superposition needs two distinct basis states")
    for v in (m, n2):
        if not 0 <= v < 2**n:
            raise ValueError(f"basis index {v} outside 0..{2**n - 1}")
    differ = [q for q in range(n) if _bit(m, q, n) != _bit(n2, q, n)]
    lead = differ[0]
    gates = [Gate("H", (lead,))]
    if sign < 0:
        gates.append(Gate("Z", (lead,)))
    gates += [Gate("CNOT", (lead, q)) for q in differ[1:]]
    # both branches now read m XOR (bits of m); flip the bits set in m
    gates += [Gate("X", (q,)) for q in range(n) if _bit(m, q, n)]
    tag = "+" if sign > 0 else "-"
    return Program(n, gates, name=f"S{tag}{m},{n2}")
