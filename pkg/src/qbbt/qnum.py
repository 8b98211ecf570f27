"""Dense complex linear algebra and quantum state value types.

Matrices are plain ``numpy`` complex128 arrays. Qubit 0 is the most
significant bit of a basis-state label, so ``|m>`` for an integer ``m``
reads left to right.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TOL_NORM = 1e-9
TOL_UNITARY = 1e-12
MAX_QUBITS = 14
MAX_DIM = 2**MAX_QUBITS


class DimensionError(ValueError):
    """Raised when a matrix or state would exceed the configured qubit cap."""


_SQ2 = 1 / np.sqrt(2)

_FIXED = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": np.array([[1, 1], [1, -1]], dtype=complex) * _SQ2,
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "Sdg": np.array([[1, 0], [0, -1j]], dtype=complex),
    "T": np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]], dtype=complex),
    "Tdg": np.array([[1, 0], [0, np.exp(-1j * np.pi / 4)]], dtype=complex),
    "CNOT": np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    ),
    "CZ": np.diag([1, 1, 1, -1]).astype(complex),
    "SWAP": np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
    ),
}


def _rx(theta):
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def _ry(theta):
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _rz(theta):
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def _phase(theta):
    return np.diag([1, np.exp(1j * theta)]).astype(complex)


_PARAMETRIC = {"Rx": _rx, "Ry": _ry, "Rz": _rz, "Phase": _phase}

GATE_NAMES = frozenset(_FIXED) | frozenset(_PARAMETRIC)

# name -> (number of qubits the bare gate acts on, number of real parameters)
GATE_ARITY = {name: (int(np.log2(m.shape[0])), 0) for name, m in _FIXED.items()}
GATE_ARITY.update({name: (1, 1) for name in _PARAMETRIC})

# gate -> gate whose matrix is its dagger, for named inverses
DAGGER_NAME = {
    "I": "I", "X": "X", "Y": "Y", "Z": "Z", "H": "H", "S": "Sdg", "Sdg": "S",
    "T": "Tdg", "Tdg": "T", "CNOT": "CNOT", "CZ": "CZ", "SWAP": "SWAP",
}


def std_gate(name: str, params=()) -> np.ndarray:
    """Return the unitary matrix of a standard gate.

    Parametric gates (``Rx``, ``Ry``, ``Rz``, ``Phase``) take one angle.
    """
    if name in _FIXED:
        if len(params):
            raise ValueError(f"gate {name} takes no parameters")
        return _FIXED[name].copy()
    if name in _PARAMETRIC:
        if len(params) != 1:
            raise ValueError(f"gate {name} takes exactly one parameter")
        theta = float(params[0])
        if not np.isfinite(theta):
            raise ValueError("gate parameter must be finite")
        return _PARAMETRIC[name](theta)
    raise ValueError(f"unknown gate {name!r}")


def pauli(i: int) -> np.ndarray:
    if i not in (0, 1, 2, 3):
        raise IndexError(f"Pauli index must be in 0..3, got {i}")
    return std_gate(("I", "X", "Y", "Z")[i])


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, refusing results beyond the qubit cap."""
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1] if a.ndim == 2 else 1
    if max(rows, cols) > MAX_DIM:
        raise DimensionError(f"dimension {max(rows, cols)} exceeds 2^{MAX_QUBITS}")
    return np.kron(a, b)


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def controlled(u: np.ndarray, n_controls: int) -> np.ndarray:
    """Lift ``u`` to a gate with ``n_controls`` leading control qubits."""
    if n_controls == 0:
        return u
    d = u.shape[0]
    full = np.eye(d * 2**n_controls, dtype=complex)
    full[-d:, -d:] = u
    return full


def unitarity_residual(u: np.ndarray) -> float:
    return float(np.max(np.abs(dagger(u) @ u - np.eye(u.shape[0]))))


def _check_finite(arr: np.ndarray) -> None:
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite entries are not admitted")


def _n_qubits_for(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 1 or 2**n != dim:
        raise DimensionError(f"dimension {dim} is not a power of two")
    if n > MAX_QUBITS:
        raise DimensionError(f"{n} qubits exceeds the cap of {MAX_QUBITS}")
    return n


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state on ``n_qubits`` qubits."""

    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex).reshape(-1)
        _n_qubits_for(amps.size)
        _check_finite(amps)
        norm = np.vdot(amps, amps).real
        if abs(norm - 1) > TOL_NORM:
            raise ValueError(f"state vector norm^2 {norm} is not 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @property
    def n_qubits(self) -> int:
        return _n_qubits_for(self.amps.size)

    @classmethod
    def basis(cls, n_qubits: int, m: int = 0) -> "StateVector":
        amps = np.zeros(2**n_qubits, dtype=complex)
        amps[m] = 1
        return cls(amps)

    def to_density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amps, np.conj(self.amps)))

    def inner(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amps, other.amps))

    def allclose(self, other: "StateVector", atol: float = TOL_NORM) -> bool:
        return bool(np.allclose(self.amps, other.amps, atol=atol))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Trace-one, Hermitian, positive semidefinite operator."""

    mat: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("density matrix must be square")
        _n_qubits_for(mat.shape[0])
        _check_finite(mat)
        if abs(np.trace(mat) - 1) > TOL_NORM:
            raise ValueError(f"trace {np.trace(mat)} is not 1")
        if np.max(np.abs(mat - dagger(mat))) > TOL_NORM:
            raise ValueError("density matrix is not Hermitian")
        if np.linalg.eigvalsh((mat + dagger(mat)) / 2)[0] < -1e-8:
            raise ValueError("density matrix is not positive semidefinite")
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)

    @property
    def n_qubits(self) -> int:
        return _n_qubits_for(self.mat.shape[0])

    @property
    def purity(self) -> float:
        return float(np.real(np.vdot(self.mat, self.mat)))

    @classmethod
    def maximally_mixed(cls, n_qubits: int) -> "DensityMatrix":
        d = 2**n_qubits
        return cls(np.eye(d, dtype=complex) / d)

    @classmethod
    def random(cls, n_qubits: int, rng: np.random.Generator, rank: int | None = None):
        """Random state from a Ginibre ensemble (for tests)."""
        d = 2**n_qubits
        rank = d if rank is None else rank
        g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
        rho = g @ dagger(g)
        return cls(rho / np.trace(rho))

    def allclose(self, other: "DensityMatrix", atol: float = TOL_NORM) -> bool:
        return bool(np.allclose(self.mat, other.mat, atol=atol))
