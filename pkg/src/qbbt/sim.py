"""Sampled and exact execution of :class:`~qbbt.circuit.Program`.

Sampled runs keep one state vector per shot and draw Born outcomes from a
counter-based generator, so any shot can be replayed in isolation. Exact
runs evolve density operators through a tree of classical branches.

Stream rule
-----------
Every random event of a shot (a Measure, a Reset, or the final discard of
ancillas) consumes one uniform ``uniform_at(key, ctr)`` and advances the
shot's counter. Shot ``i`` of a batch drawn from an :class:`Rng` ``r`` uses
key ``child_key(r.key, i)``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _kernels
from .circuit import Conditional, Gate, Measure, Program, Reset
from .qnum import DensityMatrix, StateVector

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
PRUNE = 1e-12
MAX_BRANCHES = 2**20
MAX_EXACT_QUBITS = 12


class SimulationError(RuntimeError):
    """Every outcome of a measurement had probability below the pruning threshold."""


class ResourceError(RuntimeError):
    pass


# ------------------------------------------------------------------ RNG

def mix64(z: int) -> int:
    """splitmix64 finalizer on a Python int."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def mix64_vec(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def _label_int(label) -> int:
    if isinstance(label, (int, np.integer)):
        return int(label) & MASK64
    data = str(label).encode("utf-8")
    return int.from_bytes(hashlib.blake2b(data, digest_size=8).digest(), "little")


def child_key(key: int, label) -> int:
    return mix64(key ^ mix64(_label_int(label) + GOLDEN))


def child_keys(key: int, idx: np.ndarray) -> np.ndarray:
    """Vectorized :func:`child_key` for integer labels."""
    with np.errstate(over="ignore"):
        inner = mix64_vec(np.asarray(idx, dtype=np.uint64) + np.uint64(GOLDEN))
    return mix64_vec(np.uint64(key) ^ inner)


def uniform_at(key: int, ctr: int) -> float:
    return (mix64(key + GOLDEN * (ctr + 1)) >> 11) * 2.0**-53


def uniform_vec(keys: np.ndarray, ctrs: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = np.asarray(keys, dtype=np.uint64) + np.uint64(GOLDEN) * (
            np.asarray(ctrs, dtype=np.uint64) + np.uint64(1))
    return (mix64_vec(z) >> np.uint64(11)).astype(np.float64) * 2.0**-53


class Rng:
    """Counter-based generator; ``split`` derives independent child streams."""

    __slots__ = ("seed", "key", "counter")

    def __init__(self, seed: int):
        self.seed = int(seed) & MASK64
        self.key = mix64(self.seed)
        self.counter = 0

    @classmethod
    def from_key(cls, key: int) -> "Rng":
        r = cls.__new__(cls)
        r.seed = None
        r.key = int(key) & MASK64
        r.counter = 0
        return r

    def split(self, *labels) -> "Rng":
        """Child stream keyed by ``labels``; does not touch this stream's counter."""
        key = self.key
        for label in labels:
            key = child_key(key, label)
        return Rng.from_key(key)

    def spawn(self) -> "Rng":
        """Fresh child stream, advancing this stream's counter by one."""
        child = self.split("spawn", self.counter)
        self.counter += 1
        return child

    def uniform(self) -> float:
        u = uniform_at(self.key, self.counter)
        self.counter += 1
        return u

    def integer(self, bound: int) -> int:
        return min(int(self.uniform() * bound), bound - 1)

    def shot_keys(self, count: int, start: int = 0) -> np.ndarray:
        return child_keys(self.key, np.arange(start, start + count, dtype=np.uint64))

    def __repr__(self) -> str:
        return f"Rng(key={self.key:#018x}, counter={self.counter})"


# ------------------------------------------------------ sampled semantics

@dataclass(frozen=True, eq=False)
class ShotResult:
    collapsed: StateVector
    classical: dict = field(default_factory=dict)


@lru_cache(maxsize=1024)
def _onehot(n: int, qubits: tuple) -> np.ndarray:
    vals = _kernels.bits_value(n, qubits)
    out = np.zeros((vals.size, 2 ** len(qubits)))
    out[np.arange(vals.size), vals] = 1.0
    out.setflags(write=False)
    return out


def _measure(psi: np.ndarray, qubits: tuple, n: int, u: np.ndarray):
    """Sample and collapse a joint measurement of ``qubits`` on every row."""
    absq = psi.real**2 + psi.imag**2
    probs = absq @ _onehot(n, qubits)
    probs[probs < PRUNE] = 0.0
    total = probs.sum(axis=1)
    if np.any(total < PRUNE):
        raise SimulationError("measurement with no outcome above the pruning threshold")
    cdf = np.cumsum(probs, axis=1) / total[:, None]
    outcome = np.sum(u[:, None] >= cdf, axis=1)
    width = probs.shape[1]
    last_nonzero = width - 1 - np.argmax(probs[:, ::-1] > 0, axis=1)
    outcome = np.minimum(outcome, last_nonzero)
    keep = _kernels.bits_value(n, qubits)[None, :] == outcome[:, None]
    psi = np.where(keep, psi, 0)
    norm = np.sqrt(np.sum(psi.real**2 + psi.imag**2, axis=1))
    return psi / norm[:, None], outcome


def _reset_collapsed(psi: np.ndarray, qubits: tuple, n: int) -> np.ndarray:
    """Move a state whose ``qubits`` are already definite onto ``qubits = 0``."""
    b = psi.shape[0]
    t = psi.reshape((b,) + (2,) * n)
    axes = tuple(1 + q for q in qubits)
    folded = t.sum(axis=axes, keepdims=True)
    out = np.zeros_like(t)
    index = [slice(None)] * (n + 1)
    for q in qubits:
        index[1 + q] = slice(0, 1)
    out[tuple(index)] = folded
    return out.reshape(b, 2**n)


def run_batch(p: Program, psi: np.ndarray, keys: np.ndarray, ctrs: np.ndarray):
    """Run ``p`` once per key. ``psi`` holds 1 or ``len(keys)`` input rows.

    Returns ``(states, classical, ctrs)``; states has one row per key unless
    the program never draws randomness, in which case rows are not broadcast.
    ``ctrs`` is updated in place.
    """
    n_io, total = p.n_qubits, p.total_qubits
    shots = keys.shape[0]
    if psi.shape[1] != 2**n_io:
        raise ValueError(f"input has {psi.shape[1]} amplitudes, program expects {2**n_io}")
    if p.n_ancilla:
        big = np.zeros((psi.shape[0], 2**total), dtype=complex)
        big[:, :: 2**p.n_ancilla] = psi
        psi = big
    else:
        psi = np.array(psi, dtype=complex)
    classical: dict[str, np.ndarray] = {}

    def draw():
        u = uniform_vec(keys, ctrs)
        ctrs[:] += np.uint64(1)
        return u

    def widen(x):
        return np.repeat(x, shots, axis=0) if x.shape[0] != shots else x

    for ins in p.instructions:
        if isinstance(ins, Gate):
            psi = _kernels.apply_gate(psi, ins.matrix(), ins.targets, ins.controls, total)
        elif isinstance(ins, Measure):
            psi, out = _measure(widen(psi), ins.targets, total, draw())
            classical[ins.slot] = out
        elif isinstance(ins, Reset):
            psi, _ = _measure(widen(psi), ins.targets, total, draw())
            psi = _reset_collapsed(psi, ins.targets, total)
        elif isinstance(ins, Conditional):
            psi = widen(psi)
            hit = classical[ins.slot] == ins.value
            g = ins.inner
            moved = _kernels.apply_gate(psi, g.matrix(), g.targets, g.controls, total)
            psi = np.where(hit[:, None], moved, psi)
    if p.n_ancilla:
        anc = tuple(range(n_io, total))
        psi, _ = _measure(widen(psi), anc, total, draw())
        psi = psi.reshape(psi.shape[0], 2**n_io, 2**p.n_ancilla).sum(axis=2)
    return psi, classical, ctrs


def run_shot(p: Program, input: StateVector, rng: Rng) -> ShotResult:
    """One sampled execution. Consumes uniforms from ``rng`` at its counter."""
    if input.n_qubits != p.n_qubits:
        raise ValueError(f"input has {input.n_qubits} qubits, program {p.n_qubits}")
    keys = np.array([rng.key], dtype=np.uint64)
    ctrs = np.array([rng.counter], dtype=np.uint64)
    psi, classical, ctrs = run_batch(p, input.amps[None, :], keys, ctrs)
    rng.counter = int(ctrs[0])
    return ShotResult(
        StateVector(psi[0]), {slot: int(v[0]) for slot, v in classical.items()})


# -------------------------------------------------------- exact semantics

def _embed(rhos: np.ndarray, n_ancilla: int) -> np.ndarray:
    if not n_ancilla:
        return np.array(rhos, dtype=complex)
    b, d, _ = rhos.shape
    step = 2**n_ancilla
    big = np.zeros((b, d * step, d * step), dtype=complex)
    big[:, ::step, ::step] = rhos
    return big


def _project(rhos: np.ndarray, qubits: tuple, n: int, value: int) -> np.ndarray:
    keep = _kernels.bits_value(n, qubits) == value
    mask = np.outer(keep, keep)
    return np.where(mask[None], rhos, 0)


def _reset_channel(rhos: np.ndarray, qubits: tuple, n: int) -> np.ndarray:
    b = rhos.shape[0]
    for q in qubits:
        t = rhos.reshape((b,) + (2,) * (2 * n))
        row, col = 1 + q, 1 + n + q
        i0 = [slice(None)] * (2 * n + 1)
        i1 = list(i0)
        i0[row] = i0[col] = 0
        i1[row] = i1[col] = 1
        folded = t[tuple(i0)] + t[tuple(i1)]
        out = np.zeros_like(t)
        out[tuple(i0)] = folded
        rhos = out.reshape(rhos.shape)
    return rhos


def exact_channel_batch(p: Program, rhos: np.ndarray) -> np.ndarray:
    """Exact output operators for a batch of inputs of shape ``(B, d, d)``.

    Inputs need not be density operators (linearity is used by the oracle).
    """
    total = p.total_qubits
    if total > MAX_EXACT_QUBITS:
        raise ResourceError(f"{total} qubits exceeds the exact-simulation cap")
    d_io = 2**p.n_qubits
    if rhos.shape[1:] != (d_io, d_io):
        raise ValueError("input dimension does not match the program register")
    # branch key: sorted tuple of (slot, value) for slots still read later
    branches: dict[tuple, np.ndarray] = {(): _embed(rhos, p.n_ancilla)}
    pruned = False
    for pos, ins in enumerate(p.instructions):
        live = p.live_slots_after(pos)
        nxt: dict[tuple, np.ndarray] = {}

        def put(key, value):
            key = tuple(kv for kv in key if kv[0] in live)
            if key in nxt:
                nxt[key] = nxt[key] + value
            else:
                nxt[key] = value

        for key, rho in branches.items():
            if isinstance(ins, Gate):
                put(key, _kernels.conj_gate(rho, ins.matrix(), ins.targets, ins.controls, total))
            elif isinstance(ins, Reset):
                put(key, _reset_channel(rho, ins.targets, total))
            elif isinstance(ins, Conditional):
                if dict(key).get(ins.slot) == ins.value:
                    g = ins.inner
                    rho = _kernels.conj_gate(rho, g.matrix(), g.targets, g.controls, total)
                put(key, rho)
            else:
                base = tuple(kv for kv in key if kv[0] != ins.slot)
                for v in range(2 ** len(ins.targets)):
                    part = _project(rho, ins.targets, total, v)
                    weight = np.max(np.abs(part), axis=(1, 2))
                    if np.all(weight < PRUNE):
                        pruned = pruned or bool(np.any(weight > 0))
                        continue
                    put(tuple(sorted(base + ((ins.slot, v),))), part)
        if len(nxt) > MAX_BRANCHES:
            raise ResourceError(f"branch tree exceeds {MAX_BRANCHES} branches")
        branches = nxt
    out = sum(branches.values())
    if p.n_ancilla:
        b = out.shape[0]
        da = 2**p.n_ancilla
        out = np.einsum("bijkj->bik", out.reshape(b, d_io, da, d_io, da))
    if pruned:
        tr = np.trace(out, axis1=1, axis2=2).real
        ref = np.trace(rhos, axis1=1, axis2=2).real
        scale = np.where(np.abs(tr) > PRUNE, ref / np.where(tr == 0, 1, tr), 1.0)
        out = out * scale[:, None, None]
    return out


def exact_channel(p: Program, rho: DensityMatrix) -> DensityMatrix:
    out = exact_channel_batch(p, rho.mat[None])[0]
    return DensityMatrix((out + np.conj(out).T) / 2)
