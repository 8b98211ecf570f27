import numpy as np
import pytest

from qbbt.circuit import Gate, Measure, Program, Reset

_ACCEPTANCE: list[str] = []


@pytest.fixture
def acceptance_line():
    """Record one summary line per acceptance criterion."""

    def record(number: int, ok: bool, detail: str) -> None:
        _ACCEPTANCE.append(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


_ONE_Q = ("H", "X", "Y", "Z", "S", "T", "Sdg", "Tdg")


def random_program(n: int, size: int, gen: np.random.Generator, measures: bool = False,
                   resets: bool = False) -> Program:
    """Random circuit on ``n`` qubits for property tests."""
    ins = []
    for _ in range(size):
        roll = gen.random()
        if measures and roll < 0.12:
            ins.append(Measure((int(gen.integers(n)),), f"m{len(ins)}"))
        elif resets and roll < 0.2:
            ins.append(Reset((int(gen.integers(n)),)))
        elif n > 1 and roll < 0.45:
            a, b = (int(x) for x in gen.choice(n, 2, replace=False))
            ins.append(Gate("CNOT", (a, b)))
        elif roll < 0.6:
            ins.append(Gate(["Rx", "Ry", "Rz"][int(gen.integers(3))], (int(gen.integers(n)),),
                            params=(float(gen.uniform(-np.pi, np.pi)),)))
        else:
            ins.append(Gate(_ONE_Q[int(gen.integers(len(_ONE_Q)))], (int(gen.integers(n)),)))
    return Program(n, ins, name="rand")
