"""Black-box decision procedures for equivalence, identity and unitarity.

Every procedure draws its test points from a per-point child stream
``rng.split(<stage>, j)``, so verdicts depend only on the seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .circuit import Measure, Program, compose
from .sim import Rng, run_batch
from .states import basis_prep, pauli_prep, pauli_prep_inverse, superpos_prep
from .swaptest import ShotCounter, is_trab_equals_1, swap_test

PASS, FAIL = "PASS", "FAIL"
RULES = ("threshold", "purity-mismatch", "pure-overlap", "purity-violation",
         "nonzero-measurement")


@dataclass(frozen=True)
class CheckConfig:
    k: int
    s: int = 1
    epsilon: float = 0.15
    t: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.s < 1 or self.t < 1:
            raise ValueError("s and t must be at least 1")
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")


@dataclass(frozen=True)
class FailingPoint:
    index: int
    point: tuple
    statistic: Optional[float]
    rule: str


@dataclass(frozen=True)
class Verdict:
    outcome: str
    failing_point: Optional[FailingPoint] = None
    trigger_count: int = 0
    shots: int = 0
    points_run: int = 0
    general_branches: int = 0

    def __post_init__(self):
        if (self.outcome == FAIL) != (self.failing_point is not None):
            raise ValueError("a FAIL verdict needs a failing point and a PASS verdict none")

    @property
    def passed(self) -> bool:
        return self.outcome == PASS


@dataclass
class _Run:
    """Per-invocation bookkeeping."""

    counter: ShotCounter = field(default_factory=ShotCounter)
    triggers: int = 0
    points: int = 0
    general: int = 0

    def verdict(self, failing: FailingPoint | None = None) -> Verdict:
        return Verdict(FAIL if failing else PASS, failing, self.triggers,
                       self.counter.shots, self.points, self.general)


def _as_rng(rng, cfg: CheckConfig | None = None) -> Rng:
    if isinstance(rng, Rng):
        return rng
    if rng is None:
        return Rng(cfg.seed if cfg is not None else 0)
    return Rng(int(rng))


def _check_regs(n: int, *progs: Program) -> None:
    for p in progs:
        if p.n_qubits != n:
            raise ValueError(f"register mismatch: {p.name or 'program'} has "
                             f"{p.n_qubits} qubits, expected {n}")


def draw_pauli_index(rng: Rng, n: int) -> tuple[int, ...]:
    return tuple(rng.integer(6) for _ in range(n))


def draw_distinct_pair(rng: Rng, d: int) -> tuple[int, int]:
    m = rng.integer(d)
    m2 = rng.integer(d - 1)
    if m2 >= m:
        m2 += 1
    return m, m2


@lru_cache(maxsize=4096)
def _after(prep: Program, p: Program) -> Program:
    return compose(prep, p, name=f"{p.name}({prep.name})")


def _e_tilde(n, s, a, b, rng, run: _Run) -> float:
    s1 = swap_test(n, s, a, a, rng, run.counter).s1
    s2 = swap_test(n, s, b, b, rng, run.counter).s1
    s12 = swap_test(n, s, a, b, rng, run.counter).s1
    return abs((2 * s12 - s1 - s2) / s)


def eq_check_original(n: int, cfg: CheckConfig, p1: Program, p2: Program,
                      rng: Rng | int | None = None) -> Verdict:
    _check_regs(n, p1, p2)
    rng = _as_rng(rng, cfg)
    run = _Run()
    for j in range(cfg.k):
        pr = rng.split("point", j)
        K = draw_pauli_index(pr, n)
        prep = pauli_prep(K)
        run.points += 1
        run.general += 1
        e = _e_tilde(n, cfg.s, _after(prep, p1), _after(prep, p2), pr, run)
        if e > cfg.epsilon:
            return run.verdict(FailingPoint(j, K, e, "threshold"))
    return run.verdict()


def eq_check_optimized(n: int, cfg: CheckConfig, p1: Program, p2: Program,
                       rng: Rng | int | None = None) -> Verdict:
    _check_regs(n, p1, p2)
    rng = _as_rng(rng, cfg)
    run = _Run()
    for j in range(cfg.k):
        pr = rng.split("point", j)
        K = draw_pauli_index(pr, n)
        prep = pauli_prep(K)
        a, b = _after(prep, p1), _after(prep, p2)
        run.points += 1
        pure1 = is_trab_equals_1(n, cfg.t, a, a, pr, run.counter)
        pure2 = is_trab_equals_1(n, cfg.t, b, b, pr, run.counter)
        if pure1 != pure2:
            run.triggers += 1
            return run.verdict(FailingPoint(j, K, None, "purity-mismatch"))
        if pure1:
            if not is_trab_equals_1(n, cfg.t, a, b, pr, run.counter):
                run.triggers += 1
                return run.verdict(FailingPoint(j, K, None, "pure-overlap"))
            continue
        run.general += 1
        e = _e_tilde(n, cfg.s, a, b, pr, run)
        if e > cfg.epsilon:
            return run.verdict(FailingPoint(j, K, e, "threshold"))
    return run.verdict()


@lru_cache(maxsize=4096)
def _sandwich(K: tuple, p: Program) -> Program:
    body = compose(compose(pauli_prep(K), p), pauli_prep_inverse(K))
    return Program(body.n_qubits, body.instructions + (Measure(tuple(range(p.n_qubits)), "_id"),),
                   n_ancilla=body.n_ancilla, name=f"ID[{p.name}]")


def id_check(n: int, k: int, p: Program, rng: Rng | int | None = None) -> Verdict:
    """Single shot per point of ``G_K -> P -> G_K^-1``; any nonzero readout fails."""
    _check_regs(n, p)
    if k < 1:
        raise ValueError("k must be at least 1")
    rng = _as_rng(rng)
    run = _Run()
    zero = np.zeros((1, 2**n), dtype=complex)
    zero[0, 0] = 1
    for j in range(k):
        pr = rng.split("point", j)
        K = draw_pauli_index(pr, n)
        keys = pr.spawn().shot_keys(1)
        _, classical, _ = run_batch(_sandwich(K, p), zero, keys, np.zeros(1, dtype=np.uint64))
        run.points += 1
        run.counter.add(1)
        value = int(classical["_id"][0])
        if value != 0:
            return run.verdict(FailingPoint(j, K, float(value), "nonzero-measurement"))
    return run.verdict()


def un_point(n: int, j: int, k: int, rng: Rng) -> tuple[str, int, int]:
    """Input pair of point ``j``: the first ceil(k/2) use complementary superpositions."""
    d = 2**n
    if j < math.ceil(k / 2):
        m = rng.integer(d)
        return "b", m, (~m) & (d - 1)
    m, m2 = draw_distinct_pair(rng, d)
    return "a", m, m2


def un_preps(n: int, kind: str, m: int, m2: int) -> tuple[Program, Program]:
    if kind == "b":
        return superpos_prep(m, m2, 1, n), superpos_prep(m, m2, -1, n)
    return basis_prep(m, n), basis_prep(m2, n)


def _un_stage(n: int, cfg: CheckConfig, p: Program, rng: Rng, run: _Run) -> FailingPoint | None:
    for j in range(cfg.k):
        pr = rng.split("point", j)
        kind, m, m2 = un_point(n, j, cfg.k, pr)
        prep_a, prep_b = un_preps(n, kind, m, m2)
        run.points += 1
        run.general += 1
        count = swap_test(n, cfg.s, _after(prep_a, p), _after(prep_b, p), pr, run.counter)
        r = 1 - 2 * count.s1 / cfg.s
        if abs(r) > cfg.epsilon:
            return FailingPoint(j, (m, m2), r, "threshold")
    return None


def un_check_original(n: int, cfg: CheckConfig, p: Program,
                      rng: Rng | int | None = None) -> Verdict:
    _check_regs(n, p)
    if cfg.k < 2:
        raise ValueError("unitarity checking needs k >= 2")
    run = _Run()
    return run.verdict(_un_stage(n, cfg, p, _as_rng(rng, cfg), run))


def un_check_optimized(n: int, cfg: CheckConfig, p: Program,
                       rng: Rng | int | None = None) -> Verdict:
    """Purity probes on k Pauli inputs, then the full orthogonality stage."""
    _check_regs(n, p)
    if cfg.k < 2:
        raise ValueError("unitarity checking needs k >= 2")
    rng = _as_rng(rng, cfg)
    run = _Run()
    for j in range(cfg.k):
        pr = rng.split("purity", j)
        K = draw_pauli_index(pr, n)
        out = _after(pauli_prep(K), p)
        run.points += 1
        if not is_trab_equals_1(n, cfg.t, out, out, pr, run.counter):
            run.triggers += 1
            return run.verdict(FailingPoint(j, K, None, "purity-violation"))
    return run.verdict(_un_stage(n, cfg, p, rng, run))


CHECKS = {
    ("EQ", "original"): eq_check_original,
    ("EQ", "optimized"): eq_check_optimized,
    ("UN", "original"): un_check_original,
    ("UN", "optimized"): un_check_optimized,
}
