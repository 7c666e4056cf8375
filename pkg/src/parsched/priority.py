"""Dynamic synthesis priority: importance/urgency rank factor times a
quadratic timeliness factor, re-evaluated at every placement decision.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

import numpy as np

from .model import RadarTask

BALANCED = "balanced"


@dataclass(frozen=True)
class PriorityConfig:
    eta: Union[float, str] = BALANCED
    a: float = 0.5
    b: float = 0.8

    def __post_init__(self):
        if not 0 < self.a < 1:
            raise ValueError("a must lie in (0, 1)")
        if not 0 < self.b < 1:
            raise ValueError("b must lie in (0, 1)")
        if isinstance(self.eta, str) and self.eta != BALANCED:
            raise ValueError(f"unknown eta sentinel {self.eta!r}")


@dataclass(frozen=True)
class RankedCandidate:
    task_id: int
    n_p: int
    n_d: int
    f: float
    g: float
    p: float


def resolve_eta(eta: Union[float, str], q: int) -> float:
    if eta == BALANCED:
        return min(max((q + 2) / 2.0, 1.0), float(q))
    return float(eta)


def _best_first_by_mode(tasks: Sequence[RadarTask]) -> List[int]:
    return sorted(range(len(tasks)), key=lambda i: (-tasks[i].priority, tasks[i].t_d, tasks[i].id))


def _best_first_by_deadline(tasks: Sequence[RadarTask]) -> List[int]:
    return sorted(range(len(tasks)), key=lambda i: (tasks[i].t_d, -tasks[i].priority, tasks[i].id))


def rank_candidates(candidates: Sequence[RadarTask]) -> List[Tuple[int, int]]:
    """(n_p, n_d) per candidate, in input order. Rank Q is the most important /
    most urgent, rank 1 the least.
    """
    q = len(candidates)
    if q == 0:
        raise ValueError("cannot rank an empty candidate set")
    n_p = [0] * q
    n_d = [0] * q
    for pos, i in enumerate(_best_first_by_mode(candidates)):
        n_p[i] = q - pos
    for pos, i in enumerate(_best_first_by_deadline(candidates)):
        n_d[i] = q - pos
    return list(zip(n_p, n_d))


def importance_urgency(q: int, n_p: int, n_d: int, eta: Union[float, str]) -> float:
    eta = resolve_eta(eta, q)
    if not (1 <= n_p <= q and 1 <= n_d <= q):
        raise ValueError(f"ranks ({n_p}, {n_d}) outside 1..{q}")
    if not 1 <= eta <= q:
        raise ValueError(f"eta {eta} outside [1, {q}]")
    return ((q + 2 - eta) * n_d + eta * n_p) / (q + 1)


def timeliness(task: RadarTask, tp: float, cfg: PriorityConfig) -> float:
    shift = abs(task.t_e - tp) / task.template.l
    g = (1.0 - cfg.a * shift) ** 2 if tp >= task.t_e else (1.0 - shift) ** 2
    return cfg.b * g if task.mode.is_search else g


def select_best(candidates: Sequence[RadarTask], tp: float, cfg: PriorityConfig,
                use_timeliness: bool = True) -> RankedCandidate:
    """Candidate with the highest f*g at ``tp``.

    Ties go to higher mode priority, then earlier deadline, then lower id. With
    ``use_timeliness=False`` g is held at 1 (plain HPEDF ranking).
    """
    if not candidates:
        raise ValueError("no candidates to select from")
    q = len(candidates)
    ranks = rank_candidates(candidates)
    best = None
    best_key = None
    for task, (n_p, n_d) in zip(candidates, ranks):
        f = importance_urgency(q, n_p, n_d, cfg.eta)
        g = timeliness(task, tp, cfg) if use_timeliness else 1.0
        rc = RankedCandidate(task.id, n_p, n_d, f, g, f * g)
        key = (-rc.p, -task.priority, task.t_d, task.id)
        if best_key is None or key < best_key:
            best, best_key = rc, key
    return best


def score_arrays(prio: np.ndarray, t_d: np.ndarray, ids: np.ndarray, t_e: np.ndarray,
                 window: np.ndarray, is_search: np.ndarray, tp: float, cfg: PriorityConfig,
                 use_timeliness: bool = True) -> np.ndarray:
    """Vectorised synthesis priority for a candidate set given as parallel arrays.

    Returns candidate indices ordered best first; same ranking and tie rules as
    :func:`select_best`.
    """
    q = len(prio)
    by_mode = np.lexsort((ids, t_d, -prio))
    by_deadline = np.lexsort((ids, -prio, t_d))
    rank_values = np.arange(q, 0, -1, dtype=float)
    n_p = np.empty(q)
    n_d = np.empty(q)
    n_p[by_mode] = rank_values
    n_d[by_deadline] = rank_values
    eta = resolve_eta(cfg.eta, q)
    p = ((q + 2 - eta) * n_d + eta * n_p) / (q + 1)
    if use_timeliness:
        shift = np.abs(t_e - tp) / window
        g = np.where(tp >= t_e, (1.0 - cfg.a * shift) ** 2, (1.0 - shift) ** 2)
        g = np.where(is_search, cfg.b * g, g)
        p = p * g
    return np.lexsort((ids, t_d, -prio, -p))
