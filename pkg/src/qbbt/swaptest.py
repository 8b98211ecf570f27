"""Sampled Swap Test and its early-exit variant.

Each shot prepares the two registers independently, so a mixed output
shows up as shot-to-shot variation of the prepared pure states. Given the
two pure states ``a`` and ``b`` of a shot, the ancilla reads '1' with
probability ``(1 - |<a|b>|^2) / 2``; that closed form replaces simulating
the controlled swaps, and :func:`swap_test_program` builds the explicit
circuit for cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import Gate, Measure, Program, _remap
from .sim import PRUNE, Rng, run_batch, run_shot, uniform_vec
from .qnum import StateVector

CHUNK = 8192
_DISCARD = ("_discard_a", "_discard_b")
SWAP_SLOT = "_swap"


@dataclass(frozen=True)
class SwapTestCount:
    s: int
    s1: int

    def __post_init__(self):
        if not 0 <= self.s1 <= self.s:
            raise ValueError("count of '1' outcomes must lie in 0..s")

    @property
    def overlap_estimate(self) -> float:
        return 1 - 2 * self.s1 / self.s


class ShotCounter:
    """Mutable tally of swap-test shots actually executed."""

    def __init__(self):
        self.shots = 0

    def add(self, count: int) -> None:
        self.shots += int(count)


def _check(n: int, prep1: Program, prep2: Program) -> None:
    if prep1.n_qubits != n or prep2.n_qubits != n:
        raise ValueError(
            f"register mismatch: expected {n} qubits, got {prep1.n_qubits} and {prep2.n_qubits}")


def _ones(n: int, prep1: Program, prep2: Program, keys: np.ndarray) -> np.ndarray:
    """Ancilla outcome of every shot (True means '1')."""
    zero = np.zeros((1, 2**n), dtype=complex)
    zero[0, 0] = 1
    ctrs = np.zeros(keys.shape[0], dtype=np.uint64)
    a, _, ctrs = run_batch(prep1, zero, keys, ctrs)
    b, _, ctrs = run_batch(prep2, zero, keys, ctrs)
    ov = np.abs(np.sum(np.conj(a) * b, axis=1)) ** 2
    p1 = np.clip((1 - ov) / 2, 0.0, 0.5)
    p1[p1 < PRUNE] = 0.0
    u = uniform_vec(keys, ctrs)
    return u >= 1 - p1


def swap_test(n: int, s: int, prep1: Program, prep2: Program, rng: Rng,
              counter: ShotCounter | None = None) -> SwapTestCount:
    """Run ``s`` independent shots and count ancilla outcomes '1'."""
    _check(n, prep1, prep2)
    if s < 1:
        raise ValueError("s must be at least 1")
    sub = rng.spawn()
    ones = 0
    for start in range(0, s, CHUNK):
        keys = sub.shot_keys(min(CHUNK, s - start), start)
        ones += int(np.count_nonzero(_ones(n, prep1, prep2, keys)))
    if counter is not None:
        counter.add(s)
    return SwapTestCount(s, ones)


def is_trab_equals_1(n: int, t: int, prep1: Program, prep2: Program, rng: Rng,
                     counter: ShotCounter | None = None) -> bool:
    """TRUE when none of up to ``t`` shots reads '1'; stops at the first '1'."""
    _check(n, prep1, prep2)
    if t < 1:
        raise ValueError("t must be at least 1")
    sub = rng.spawn()
    chunk = 64
    start = 0
    while start < t:
        size = min(chunk, t - start)
        ones = _ones(n, prep1, prep2, sub.shot_keys(size, start))
        if ones.any():
            if counter is not None:
                counter.add(start + int(np.argmax(ones)) + 1)
            return False
        start += size
        chunk = min(chunk * 4, CHUNK)
    if counter is not None:
        counter.add(t)
    return True


def swap_test_program(prep1: Program, prep2: Program) -> Program:
    """Explicit circuit: qubit 0 is the test ancilla, then register A, then B.

    Workspace qubits of the preparations follow at ``2n+1`` onward and are
    measured out right after their preparation, matching the draw order of
    :func:`swap_test`.
    """
    n = prep1.n_qubits
    if prep2.n_qubits != n:
        raise ValueError("register mismatch")
    base = 2 * n + 1
    ins: list = []
    for tag, prep, reg, anc0 in (("a", prep1, 1, base), ("b", prep2, n + 1, base + prep1.n_ancilla)):
        def qmap(q, reg=reg, anc0=anc0):
            return reg + q if q < n else anc0 + (q - n)
        ins += [_remap(i, qmap, lambda slot, tag=tag: f"{tag}:{slot}") for i in prep.instructions]
        if prep.n_ancilla:
            slot = _DISCARD[0] if tag == "a" else _DISCARD[1]
            ins.append(Measure(tuple(range(anc0, anc0 + prep.n_ancilla)), slot))
    ins.append(Gate("H", (0,)))
    for i in range(n):
        a, b = 1 + i, n + 1 + i
        ins += [Gate("CNOT", (a, b), (0,)), Gate("CNOT", (b, a), (0,)), Gate("CNOT", (a, b), (0,))]
    ins.append(Gate("H", (0,)))
    ins.append(Measure((0,), SWAP_SLOT))
    return Program(base, ins, n_ancilla=prep1.n_ancilla + prep2.n_ancilla,
                   name=f"SwapTest({prep1.name},{prep2.name})")


def swap_test_sequential(n: int, s: int, prep1: Program, prep2: Program, rng: Rng) -> SwapTestCount:
    """Shot-by-shot execution of the explicit circuit; slow reference for tests."""
    _check(n, prep1, prep2)
    prog = swap_test_program(prep1, prep2)
    sub = rng.spawn()
    zero = StateVector.basis(prog.n_qubits, 0)
    ones = 0
    for key in sub.shot_keys(s):
        ones += run_shot(prog, zero, Rng.from_key(int(key))).classical[SWAP_SLOT]
    return SwapTestCount(s, ones)
