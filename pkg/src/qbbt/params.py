"""Swap-test round counts that bound the chance of rejecting a correct program.

With ``k`` test points and a target miss rate ``alpha2`` over all points,
each point may miss with probability ``1 - (1 - alpha2)**(1/k)``. The
equivalence statistic combines three swap tests and its Hoeffding bound
gives ``(8/eps^2) ln(2/gap)``; the unitarity statistic uses one swap test,
giving ``(2/eps^2) log2(1/gap)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

SNAP = 1e-9


def _check(k: int, alpha2: float, epsilon: float | None = None, k_min: int = 1) -> None:
    if int(k) != k or k < k_min:
        raise ValueError(f"k must be an integer >= {k_min}, got {k}")
    if not 0 < alpha2 < 1:
        raise ValueError(f"alpha2 must lie in (0, 1), got {alpha2}")
    if epsilon is not None and not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")


def per_point_gap(k: int, alpha2: float) -> float:
    """``1 - (1 - alpha2)**(1/k)``, evaluated without cancellation."""
    return -math.expm1(math.log1p(-alpha2) / k)


def snap_ceil(x: float) -> int:
    near = round(x)
    if abs(x - near) < SNAP:
        return int(near)
    return math.ceil(x)


def eq_bound(k: int, epsilon: float, alpha2: float) -> float:
    _check(k, alpha2, epsilon)
    return 8 / epsilon**2 * math.log(2 / per_point_gap(k, alpha2))


def un_bound(k: int, epsilon: float, alpha2: float) -> float:
    _check(k, alpha2, epsilon, k_min=2)
    return 2 / epsilon**2 * math.log2(1 / per_point_gap(k, alpha2))


def eq_min_rounds(k: int, epsilon: float, alpha2: float) -> int:
    return snap_ceil(eq_bound(k, epsilon, alpha2))


def un_min_rounds(k: int, epsilon: float, alpha2: float) -> int:
    return snap_ceil(un_bound(k, epsilon, alpha2))


def budget_bounds(k: int, alpha2: float) -> tuple[float, float]:
    """Bracket ``(k / -ln(1-alpha2), k / alpha2)`` around ``1 / per_point_gap``."""
    _check(k, alpha2)
    return k / -math.log1p(-alpha2), k / alpha2


@dataclass(frozen=True)
class RoundBudget:
    s: int
    task: str
    k: int
    epsilon: float
    alpha2: float

    def __post_init__(self):
        if self.s < 1:
            raise ValueError("s must be at least 1")
        if self.task not in ("EQ", "UN"):
            raise ValueError(f"task must be EQ or UN, got {self.task}")


def round_budget(task: str, k: int, epsilon: float, alpha2: float) -> RoundBudget:
    task = task.upper()
    if task == "EQ":
        s = eq_min_rounds(k, epsilon, alpha2)
    elif task == "UN":
        s = un_min_rounds(k, epsilon, alpha2)
    else:
        raise ValueError(f"no round budget for task {task}")
    return RoundBudget(s, task, k, epsilon, alpha2)
