"""Batched gate kernels shared by the simulators.

States are arrays of shape ``(B, 2**n)``; density operators are
``(B, 2**n, 2**n)``. Qubit 0 is the most significant bit.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=4096)
def bits_value(n: int, qubits: tuple[int, ...]) -> np.ndarray:
    """For every basis index, the integer spelled by ``qubits`` (first = MSB)."""
    idx = np.arange(2**n)
    val = np.zeros(2**n, dtype=np.int64)
    for q in qubits:
        val = (val << 1) | ((idx >> (n - 1 - q)) & 1)
    val.setflags(write=False)
    return val


@lru_cache(maxsize=4096)
def clear_bits_index(n: int, qubits: tuple[int, ...]) -> np.ndarray:
    """Basis index with the given qubits forced to 0."""
    idx = np.arange(2**n)
    mask = 0
    for q in qubits:
        mask |= 1 << (n - 1 - q)
    out = idx & ~mask
    out.setflags(write=False)
    return out


def apply_gate(states: np.ndarray, u: np.ndarray, targets, controls, n: int) -> np.ndarray:
    """Apply ``u`` on ``targets`` conditioned on all ``controls`` being 1."""
    b = states.shape[0]
    psi = states.reshape((b,) + (2,) * n)
    if controls:
        out = psi.copy()
        index = [slice(None)] * (n + 1)
        for c in controls:
            index[1 + c] = 1
        index = tuple(index)
        sub = psi[index]
        cs = sorted(controls)
        local = [t - sum(1 for c in cs if c < t) for t in targets]
        out[index] = _apply_dense(sub, u, local, n - len(controls))
        return out.reshape(b, 2**n)
    return _apply_dense(psi, u, list(targets), n).reshape(b, 2**n)


def _apply_dense(psi: np.ndarray, u: np.ndarray, targets, n: int) -> np.ndarray:
    k = len(targets)
    axes = [1 + t for t in targets]
    dest = list(range(n + 1 - k, n + 1))
    moved = np.moveaxis(psi, axes, dest)
    shape = moved.shape
    moved = (moved.reshape(-1, 2**k) @ u.T).reshape(shape)
    return np.moveaxis(moved, dest, axes)


def conj_gate(rhos: np.ndarray, u: np.ndarray, targets, controls, n: int) -> np.ndarray:
    """``U rho U^dagger`` for a batch of operators (any operator, not only PSD)."""
    b, d, _ = rhos.shape
    cols = rhos.transpose(0, 2, 1).reshape(b * d, d)
    left = apply_gate(cols, u, targets, controls, n).reshape(b, d, d).transpose(0, 2, 1)
    rows = np.conj(left).reshape(b * d, d)
    # row i of `right` is column i of U (U rho)^dagger
    right = apply_gate(rows, u, targets, controls, n).reshape(b, d, d)
    return np.conj(right)
