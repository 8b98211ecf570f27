"""The twelve original benchmark programs."""

from __future__ import annotations

import math

from ..circuit import Conditional, Gate, Measure, Program, Reset, empty, inverse

ORIGINAL_QUBITS = {
    "Cir1A": 2, "Cir1B": 2, "Cir2A": 3, "Cir2B": 3, "Empty": 6, "TeleportABA": 1,
    "QFT": 5, "invQFT": 5, "QPE": 5, "invQPE": 5, "CRot": 5, "Reset": 6,
}


def cir1a() -> Program:
    # CNOT with control and target exchanged by Hadamard conjugation
    return Program(2, [
        Gate("H", (0,)), Gate("H", (1,)), Gate("CNOT", (0, 1)), Gate("H", (0,)), Gate("H", (1,)),
    ], name="Cir1A")


def cir1b() -> Program:
    return Program(2, [Gate("CNOT", (1, 0))], name="Cir1B")


def cir2a() -> Program:
    return Program(3, [
        Measure((0,), "c"),
        Conditional("c", 1, Gate("X", (1,))),
        Gate("H", (2,)),
        Gate("CNOT", (2, 1)),
    ], name="Cir2A")


def cir2b() -> Program:
    """Deferred-measurement form of Cir2A."""
    return Program(3, [
        Gate("CNOT", (0, 1)),
        Measure((0,), "c"),
        Gate("H", (2,)),
        Gate("CNOT", (2, 1)),
    ], name="Cir2B")


def teleport_aba() -> Program:
    """Teleport qubit A (0) to B (1) via helper 2, then back to A.

    B and the helper are workspace qubits and end in |0>.
    """
    a, b, h = 0, 1, 2

    def teleport(src, dst, tag):
        return [
            Gate("H", (h,)), Gate("CNOT", (h, dst)),
            Gate("CNOT", (src, h)), Gate("H", (src,)),
            Measure((src,), f"{tag}z"), Measure((h,), f"{tag}x"),
            Conditional(f"{tag}x", 1, Gate("X", (dst,))),
            Conditional(f"{tag}z", 1, Gate("Z", (dst,))),
            Reset((src,)), Reset((h,)),
        ]

    return Program(1, teleport(a, b, "ab") + teleport(b, a, "ba"), n_ancilla=2,
                   name="TeleportABA")


def qft_gates(qubits) -> list:
    qs = list(qubits)
    n = len(qs)
    gates = []
    for i in range(n):
        gates.append(Gate("H", (qs[i],)))
        for j in range(i + 1, n):
            gates.append(Gate("Phase", (qs[i],), (qs[j],), (math.pi / 2 ** (j - i),)))
    for i in range(n // 2):
        gates.append(Gate("SWAP", (qs[i], qs[n - 1 - i])))
    return gates


def qft(n: int = 5) -> Program:
    return Program(n, qft_gates(range(n)), name="QFT")


def inv_qft(n: int = 5) -> Program:
    return inverse(qft(n), name="invQFT")


def qpe() -> Program:
    """Phase estimation of U = S H on qubit 4 with counting register 0..3."""
    counting, target = (0, 1, 2, 3), 4
    gates = [Gate("H", (c,)) for c in counting]
    for j, c in enumerate(counting):
        for _ in range(2 ** (len(counting) - 1 - j)):
            gates += [Gate("H", (target,), (c,)), Gate("S", (target,), (c,))]
    gates += [g.dagger() for g in reversed(qft_gates(counting))]
    return Program(5, gates, name="QPE")


def inv_qpe() -> Program:
    return inverse(qpe(), name="invQPE")


def crot() -> Program:
    """|l>|0> -> |l>(sqrt(1 - 1/l^2)|0> + (1/l)|1>) on a 4-qubit register l.

    l = 0 is left untouched.
    """
    reg, target = (0, 1, 2, 3), 4
    gates = []
    for lam in range(1, 16):
        zeros = [q for q in reg if not (lam >> (3 - q)) & 1]
        flips = [Gate("X", (q,)) for q in zeros]
        theta = 2 * math.asin(1 / lam)
        gates += flips + [Gate("Ry", (target,), reg, (theta,))] + flips
    return Program(5, gates, name="CRot")


def reset(n: int = 6) -> Program:
    return Program(n, [Reset((q,)) for q in range(n)], name="Reset")


_BUILDERS = {
    "Cir1A": cir1a, "Cir1B": cir1b, "Cir2A": cir2a, "Cir2B": cir2b,
    "Empty": lambda: empty(6), "TeleportABA": teleport_aba,
    "QFT": qft, "invQFT": inv_qft, "QPE": qpe, "invQPE": inv_qpe,
    "CRot": crot, "Reset": reset,
}


def build_original(name: str, n_qubits: int | None = None) -> Program:
    """One of the twelve originals; ``n_qubits`` resizes Empty only."""
    if name not in _BUILDERS:
        raise ValueError(f"unknown benchmark program {name!r}")
    if n_qubits is not None and n_qubits != ORIGINAL_QUBITS[name]:
        if name != "Empty":
            raise ValueError(f"{name} has a fixed size of {ORIGINAL_QUBITS[name]} qubits")
        return empty(n_qubits)
    return _BUILDERS[name]()
