"""Exact ground truth for the sampled checkers.

Everything here works on exact density operators from
:func:`qbbt.sim.exact_channel_batch`; nothing is sampled.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse.linalg
from scipy.stats import binom

from .circuit import Program
from .qnum import DensityMatrix
from .sim import exact_channel_batch

ORACLE_TOL = 1e-8
MAX_ORACLE_QUBITS = 6
_CHUNK = 512

_SQ2 = 1 / np.sqrt(2)
PAULI_KETS = np.array([
    [1, 0], [0, 1], [_SQ2, _SQ2], [_SQ2, -_SQ2], [_SQ2, 1j * _SQ2], [_SQ2, -1j * _SQ2],
], dtype=complex)


class OracleConsistencyError(AssertionError):
    """The two exact unitarity routes disagree."""


def _mat(rho) -> np.ndarray:
    return rho.mat if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)


def _tr_prod(a: np.ndarray, b: np.ndarray) -> complex:
    return complex(np.sum(a * b.T))


def overlap(rho1, rho2) -> float:
    """``tr(rho1 rho2)``; the imaginary part must vanish."""
    a, b = _mat(rho1), _mat(rho2)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch {a.shape} vs {b.shape}")
    value = _tr_prod(a, b)
    if abs(value.imag) > 1e-9:
        raise ValueError(f"overlap has imaginary part {value.imag}")
    return value.real


def purity(rho) -> float:
    return overlap(rho, rho)


def e_param(rho1, rho2) -> float:
    return abs((purity(rho1) + purity(rho2)) / 2 - overlap(rho1, rho2))


def _batch_tr(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise ``tr(a_i b_i)`` for stacks of operators."""
    return np.einsum("bij,bji->b", a, b).real


def _cap(*progs: Program) -> None:
    for p in progs:
        if p.total_qubits > MAX_ORACLE_QUBITS:
            raise ValueError(f"{p.name or 'program'} uses {p.total_qubits} qubits; "
                             f"the oracle handles at most {MAX_ORACLE_QUBITS}")


def pauli_kets(n: int, indices) -> np.ndarray:
    """State vectors of the Pauli product inputs named by each row of ``indices``."""
    out = np.ones((len(indices), 1), dtype=complex)
    idx = np.asarray(indices)
    for q in range(n):
        single = PAULI_KETS[idx[:, q]]
        out = (out[:, :, None] * single[:, None, :]).reshape(len(indices), -1)
    return out


def _dens(kets: np.ndarray) -> np.ndarray:
    return kets[:, :, None] * np.conj(kets[:, None, :])


def _e_chunks(p1: Program, p2: Program):
    if p1.n_qubits != p2.n_qubits:
        raise ValueError("register mismatch")
    _cap(p1, p2)
    n = p1.n_qubits
    Ks = list(itertools.product(range(6), repeat=n))
    for start in range(0, len(Ks), _CHUNK):
        chunk = Ks[start:start + _CHUNK]
        rhos = _dens(pauli_kets(n, chunk))
        o1 = exact_channel_batch(p1, rhos)
        o2 = exact_channel_batch(p2, rhos)
        yield chunk, np.abs((_batch_tr(o1, o1) + _batch_tr(o2, o2)) / 2 - _batch_tr(o1, o2))


def e_values(p1: Program, p2: Program) -> tuple[list[tuple], np.ndarray]:
    """E of the exact outputs on every one of the 6^n Pauli inputs."""
    Ks, values = [], []
    for chunk, vals in _e_chunks(p1, p2):
        Ks += chunk
        values.append(vals)
    return Ks, np.concatenate(values)


def exact_equivalent(p1: Program, p2: Program) -> bool:
    """Equal outputs on all 6^n Pauli inputs; stops at the first differing chunk."""
    return all(bool(np.all(vals < ORACLE_TOL)) for _, vals in _e_chunks(p1, p2))


def pauli_outputs(p: Program, Ks) -> np.ndarray:
    _cap(p)
    return exact_channel_batch(p, _dens(pauli_kets(p.n_qubits, list(Ks))))


# ----------------------------------------------------------- unitarity

def _basis_kets(d: int) -> np.ndarray:
    return np.eye(d, dtype=complex)


def _pair_kets(d: int, pairs, phase: complex) -> np.ndarray:
    out = np.zeros((len(pairs), d), dtype=complex)
    rows = np.arange(len(pairs))
    pairs = np.asarray(pairs, dtype=int).reshape(-1, 2)
    out[rows, pairs[:, 0]] = _SQ2
    out[rows, pairs[:, 1]] = phase * _SQ2
    return out


def _outputs(p: Program, kets: np.ndarray) -> np.ndarray:
    parts = [exact_channel_batch(p, _dens(kets[i:i + _CHUNK]))
             for i in range(0, len(kets), _CHUNK)]
    return np.concatenate(parts)


def orthogonality_route(p: Program) -> bool:
    """Basis outputs pairwise orthogonal, and each neighbouring +/- pair orthogonal."""
    _cap(p)
    d = 2**p.n_qubits
    basis_out = _outputs(p, _basis_kets(d))
    gram = np.einsum("aij,bji->ab", basis_out, basis_out).real
    off = gram[~np.eye(d, dtype=bool)]
    if off.size and np.max(np.abs(off)) >= ORACLE_TOL:
        return False
    path = [(m, m + 1) for m in range(d - 1)]
    plus = _outputs(p, _pair_kets(d, path, 1))
    minus = _outputs(p, _pair_kets(d, path, -1))
    return bool(np.all(np.abs(_batch_tr(plus, minus)) < ORACLE_TOL))


@dataclass(frozen=True, eq=False)
class ChannelMatrix:
    d: int
    choi: np.ndarray

    def partial_trace_residual(self) -> float:
        d = self.d
        pt = np.einsum("iaja->ij", self.choi.reshape(d, d, d, d))
        return float(np.max(np.abs(pt - np.eye(d))))


def choi_matrix(p: Program) -> ChannelMatrix:
    """Choi operator ``sum_ij |i><j| (x) E(|i><j|)`` from density-operator inputs only.

    Off-diagonal inputs come from ``|i><j| = |+><+| + i|+i><+i| - (1+i)/2 (|i><i| + |j><j|)``.
    """
    _cap(p)
    d = 2**p.n_qubits
    diag = _outputs(p, _basis_kets(d))
    pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
    choi = np.zeros((d, d, d, d), dtype=complex)
    for i in range(d):
        choi[i, :, i, :] = diag[i]
    if pairs:
        plus = _outputs(p, _pair_kets(d, pairs, 1))
        plus_i = _outputs(p, _pair_kets(d, pairs, 1j))
        for idx, (i, j) in enumerate(pairs):
            block = plus[idx] + 1j * plus_i[idx] - 0.5 * (1 + 1j) * (diag[i] + diag[j])
            choi[i, :, j, :] = block
            choi[j, :, i, :] = np.conj(block).T
    return ChannelMatrix(d, choi.reshape(d * d, d * d))


def choi_spectrum_extremes(cm: ChannelMatrix) -> tuple[float, float, float]:
    """(largest, second largest, smallest) eigenvalue of the Choi operator."""
    mat = (cm.choi + np.conj(cm.choi).T) / 2
    if mat.shape[0] <= 1024:
        ev = np.linalg.eigvalsh(mat)
        second = ev[-2] if ev.size > 1 else 0.0
        return float(ev[-1]), float(second), float(ev[0])
    top = scipy.sparse.linalg.eigsh(mat, k=2, which="LA", return_eigenvectors=False)
    low = scipy.sparse.linalg.eigsh(mat, k=1, which="SA", return_eigenvectors=False)
    top = np.sort(top)
    return float(top[-1]), float(top[-2]), float(low[0])


def choi_route(p: Program) -> bool:
    cm = choi_matrix(p)
    largest, second, smallest = choi_spectrum_extremes(cm)
    if smallest < -ORACLE_TOL:
        raise OracleConsistencyError(f"Choi operator of {p.name} is not PSD ({smallest})")
    return abs(largest - cm.d) < 1e-6 and second < ORACLE_TOL


def exact_unitary(p: Program) -> bool:
    """Exact unitarity decision, computed two ways that must agree."""
    a = orthogonality_route(p)
    b = choi_route(p)
    if a != b:
        raise OracleConsistencyError(
            f"unitarity routes disagree on {p.name or 'program'}: orthogonality={a}, choi={b}")
    return a


# ------------------------------------------------- predicted pass rates
#
# Exact per-point acceptance probabilities of the sampled checkers, given
# exact output states. Test points are independent, so a whole run passes
# with the product of per-point probabilities.

def _allowed(s: int, epsilon: float, lo: int, hi: int) -> np.ndarray:
    """Integers D in [lo, hi] with abs(D / s) <= epsilon, as the checkers compute it."""
    d = np.arange(lo, hi + 1)
    return np.abs(d / s) <= epsilon


def _binom_pmf(s: int, p: float) -> np.ndarray:
    return binom.pmf(np.arange(s + 1), s, min(max(p, 0.0), 1.0))


def e_tilde_pass(s: int, epsilon: float, tr11: float, tr22: float, tr12: float) -> float:
    """P(|2 s12 - s1 - s2| / s <= epsilon) for independent binomial counts."""
    p1, p2, p12 = ((1 - x) / 2 for x in (tr11, tr22, tr12))
    total = np.convolve(_binom_pmf(s, p1), _binom_pmf(s, p2))  # s1 + s2 on 0..2s
    cdf = np.concatenate([[0.0], np.cumsum(total)])
    twice = _binom_pmf(s, p12)  # 2*s12 = 2a
    ds = np.nonzero(_allowed(s, epsilon, -2 * s, 2 * s))[0] - 2 * s
    if ds.size == 0:
        return 0.0
    # D = 2a - (s1 + s2) lies in one interval [ds[0], ds[-1]]
    a = np.arange(s + 1)
    t_hi = np.minimum(2 * s, 2 * a - ds[0])
    t_lo = np.maximum(0, 2 * a - ds[-1])
    ok = t_lo <= t_hi
    out = float(np.sum(twice[ok] * (cdf[t_hi[ok] + 1] - cdf[t_lo[ok]])))
    return float(min(out, 1.0))


def overlap_pass(s: int, epsilon: float, tr: float) -> float:
    """P(|1 - 2 s1 / s| <= epsilon) with s1 ~ Binomial(s, (1 - tr) / 2)."""
    pmf = _binom_pmf(s, (1 - tr) / 2)
    s1 = np.arange(s + 1)
    return float(np.sum(pmf[np.abs(1 - 2 * s1 / s) <= epsilon]))


def trab_true(t: int, tr: float) -> float:
    """Probability that ``t`` shots all read '0'."""
    return float((1 - (1 - tr) / 2) ** t)


def _pauli_traces(p1: Program, p2: Program):
    n = p1.n_qubits
    Ks = list(itertools.product(range(6), repeat=n))
    rows = []
    for start in range(0, len(Ks), _CHUNK):
        rhos = _dens(pauli_kets(n, Ks[start:start + _CHUNK]))
        o1 = exact_channel_batch(p1, rhos)
        o2 = o1 if p2 is p1 else exact_channel_batch(p2, rhos)
        rows.append(np.stack([_batch_tr(o1, o1), _batch_tr(o2, o2), _batch_tr(o1, o2)], 1))
    return np.concatenate(rows)


def eq_point_pass(p1: Program, p2: Program, s: int, epsilon: float,
                  t: int | None = None) -> float:
    """Per-point PASS probability of equivalence checking, averaged over K.

    ``t=None`` gives the original procedure, otherwise the optimized one.
    """
    _cap(p1, p2)
    traces = np.round(_pauli_traces(p1, p2), 12)
    uniq, counts = np.unique(traces, axis=0, return_counts=True)
    acc = 0.0
    for (t11, t22, t12), c in zip(uniq, counts):
        general = e_tilde_pass(s, epsilon, t11, t22, t12)
        if t is None:
            acc += c * general
            continue
        q1, q2 = trab_true(t, t11), trab_true(t, t22)
        acc += c * (q1 * q2 * trab_true(t, t12) + (1 - q1) * (1 - q2) * general)
    return acc / counts.sum()


def id_point_pass(p: Program) -> float:
    """Average over K of the probability that ``G_K -> P -> G_K^-1`` reads all zeros."""
    _cap(p)
    n = p.n_qubits
    Ks = list(itertools.product(range(6), repeat=n))
    total = 0.0
    for start in range(0, len(Ks), _CHUNK):
        kets = pauli_kets(n, Ks[start:start + _CHUNK])
        out = exact_channel_batch(p, _dens(kets))
        total += float(np.einsum("bi,bij,bj->", np.conj(kets), out, kets).real)
    return total / len(Ks)


def un_point_pass(p: Program, s: int, epsilon: float) -> tuple[float, float]:
    """(type-b, type-a) per-point PASS probabilities of unitarity checking."""
    _cap(p)
    n = p.n_qubits
    d = 2**n
    mask = d - 1
    pairs = [(m, (~m) & mask) for m in range(d)]
    plus = _outputs(p, _pair_kets(d, pairs, 1))
    minus = _outputs(p, _pair_kets(d, pairs, -1))
    tb = np.round(_batch_tr(plus, minus), 12)
    basis_out = _outputs(p, _basis_kets(d))
    gram = np.round(np.einsum("aij,bji->ab", basis_out, basis_out).real, 12)
    ta = gram[~np.eye(d, dtype=bool)]
    cache: dict = {}

    def f(tr):
        if tr not in cache:
            cache[tr] = overlap_pass(s, epsilon, tr)
        return cache[tr]

    return (float(np.mean([f(x) for x in tb])), float(np.mean([f(x) for x in ta])))


def un_purity_pass(p: Program, t: int) -> float:
    """Per-point probability that the purity probe of a Pauli input reads TRUE."""
    tr = _pauli_traces(p, p)[:, 0]
    return float(np.mean([trab_true(t, x) for x in tr]))


def predicted_pass(task: str, variant: str, payload, k: int, s: int = 1,
                   epsilon: float = 0.15, t: int = 20) -> float:
    """Exact probability that a whole run returns PASS."""
    if task == "ID":
        return id_point_pass(payload[0]) ** k
    if task == "EQ":
        q = eq_point_pass(payload[0], payload[1], s, epsilon,
                          t if variant == "optimized" else None)
        return q**k
    pb, pa = un_point_pass(payload[0], s, epsilon)
    nb = math.ceil(k / 2)
    base = pb**nb * pa ** (k - nb)
    if variant == "optimized":
        base *= un_purity_pass(payload[0], t) ** k
    return base
