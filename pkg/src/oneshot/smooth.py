"""Min-/max-entropies and their smooth versions, plain and conditional.

Smoothing removes sub-normalized mass: an event of probability at least
``1 - eps`` is kept and the entropy is evaluated on what survives, without
renormalizing. Both optimizations have exact combinatorial solutions.

* smooth min-entropy: cap every conditional probability at a common level c
  (water-filling). The removed mass is piecewise linear in c, so the optimal
  level is found exactly from the sorted breakpoints.
* smooth max-entropy: for a target support size k, keeping the k heaviest
  atoms of every column removes the least mass; scan k upwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Union

import numpy as np

from .prob import (
    ZERO_MASS,
    JointDistribution,
    ProbVector,
    SubProbVector,
    check_epsilon,
)

# Slack granted to mass-removal budgets so that exact ties such as
# 0.05 + 0.05 <= 0.1 survive floating-point summation.
BUDGET_SLACK = 1e-12

Witness = Union[SubProbVector, Mapping[str, SubProbVector]]


@dataclass(frozen=True)
class SmoothingReport:
    value: float
    removed_mass: float
    witness: Witness
    eps: float

    def to_dict(self) -> dict:
        if isinstance(self.witness, SubProbVector):
            witness = self.witness.to_dict()
        else:
            witness = {y: w.to_dict() for y, w in self.witness.items()}
        return {
            "value_bits": self.value,
            "removed_mass": self.removed_mass,
            "eps": self.eps,
            "witness": witness,
        }


# -- array kernels -------------------------------------------------------------


def cap_level(v: np.ndarray, w: np.ndarray, eps: float) -> float:
    """Smallest c with sum((v - c*w)^+) <= eps.

    ``v`` are atom masses, ``w`` the mass of the conditioning event each atom
    belongs to (all ones for the unconditional case); ``w > 0`` is required.
    """
    ratio = v / w
    if eps <= 0.0:
        return float(ratio.max())
    order = np.argsort(-ratio, kind="stable")
    t = ratio[order]
    vc = np.cumsum(v[order])
    wc = np.cumsum(w[order])
    t_next = np.append(t[1:], 0.0)
    removal = vc - t_next * wc
    k = int(np.argmax(removal > eps))
    if removal[k] <= eps:
        # eps exceeds all the mass; any positive cap works
        return 0.0
    return float((vc[k] - eps) / wc[k])


def _column_atoms(matrix: np.ndarray):
    """Atoms of columns with positive mass as (v, w) arrays plus the column masses."""
    py = matrix.sum(axis=0)
    live = py > ZERO_MASS
    sub = matrix[:, live]
    v = sub.ravel()
    w = np.broadcast_to(py[live], sub.shape).ravel()
    return v, w, py, live


def hmin_smooth_value(mass: np.ndarray, eps: float) -> float:
    c = cap_level(mass, np.ones_like(mass), eps)
    return -math.log2(c) if c > 0 else math.inf


def hmin_cond_smooth_value(matrix: np.ndarray, eps: float) -> float:
    v, w, _, _ = _column_atoms(matrix)
    c = cap_level(v, w, eps)
    return -math.log2(c) if c > 0 else math.inf


def _support_size_after_removal(mass: np.ndarray, eps: float) -> int:
    s = np.sort(mass, kind="stable")
    dropped = int(np.searchsorted(np.cumsum(s), eps + BUDGET_SLACK, side="right"))
    return max(mass.size - dropped, 0)


def hmax_smooth_value(mass: np.ndarray, eps: float) -> float:
    if eps <= 0.0:
        k = int(np.count_nonzero(mass > ZERO_MASS))
    else:
        k = _support_size_after_removal(mass, eps)
    return math.log2(k) if k > 0 else -math.inf


def min_columns_k(values: np.ndarray, cols: np.ndarray, eps: float) -> int:
    """Smallest k such that keeping the k heaviest atoms per column removes <= eps.

    Atoms are given sparsely: ``values[i]`` sits in column ``cols[i]``.
    """
    if values.size == 0:
        return 0
    if eps <= 0.0:
        live = values > ZERO_MASS
        return int(np.bincount(cols[live]).max()) if live.any() else 0
    order = np.lexsort((-values, cols))
    c = cols[order]
    starts = np.flatnonzero(np.r_[True, c[1:] != c[:-1]])
    rank = np.arange(c.size) - np.repeat(starts, np.diff(np.r_[starts, c.size]))
    kept = np.cumsum(np.bincount(rank, weights=values[order]))
    removed = values.sum() - kept
    return int(np.argmax(removed <= eps + BUDGET_SLACK)) + 1


def _min_columns_k(matrix: np.ndarray, eps: float) -> int:
    rows, cols = np.nonzero(matrix > 0)
    return min_columns_k(matrix[rows, cols], cols, eps)


def hmax_cond_smooth_value(matrix: np.ndarray, eps: float) -> float:
    k = _min_columns_k(matrix, eps)
    return math.log2(k) if k > 0 else -math.inf


# -- public API ----------------------------------------------------------------


def h_min(p: SubProbVector) -> float:
    """-log2 of the largest atom."""
    return -math.log2(float(p.mass.max()))


def h_max(p: SubProbVector) -> float:
    """log2 of the support size."""
    return math.log2(int(np.count_nonzero(p.mass > ZERO_MASS)))


def h_min_cond(j: JointDistribution) -> float:
    return hmin_cond_smooth_value(j.matrix, 0.0)


def h_max_cond(j: JointDistribution) -> float:
    return hmax_cond_smooth_value(j.matrix, 0.0)


def smooth_h_min(p: ProbVector, eps) -> SmoothingReport:
    eps = check_epsilon(eps)
    c = cap_level(p.mass, np.ones_like(p.mass), eps)
    q = np.minimum(p.mass, c)
    return SmoothingReport(
        value=-math.log2(c),
        removed_mass=float(p.mass.sum() - q.sum()),
        witness=SubProbVector(p.labels, q),
        eps=eps,
    )


def smooth_h_max(p: ProbVector, eps) -> SmoothingReport:
    eps = check_epsilon(eps)
    keep = p.mass > ZERO_MASS
    if eps > 0.0:
        order = np.argsort(p.mass, kind="stable")
        drop = np.cumsum(p.mass[order]) <= eps + BUDGET_SLACK
        keep = np.ones(len(p), dtype=bool)
        keep[order[drop]] = False
    q = np.where(keep, p.mass, 0.0)
    return SmoothingReport(
        value=math.log2(int(keep.sum())) if keep.any() else -math.inf,
        removed_mass=float(p.mass.sum() - q.sum()),
        witness=SubProbVector(p.labels, q),
        eps=eps,
    )


def _per_column_witness(j: JointDistribution, kept: np.ndarray) -> dict[str, SubProbVector]:
    py = j.matrix.sum(axis=0)
    return {
        y: SubProbVector(j.x_labels, kept[:, col] / py[col])
        for col, y in enumerate(j.y_labels)
        if py[col] > ZERO_MASS
    }


def smooth_h_min_cond(j: JointDistribution, eps) -> SmoothingReport:
    eps = check_epsilon(eps)
    v, w, py, _ = _column_atoms(j.matrix)
    c = cap_level(v, w, eps)
    kept = np.minimum(j.matrix, c * py[None, :])
    return SmoothingReport(
        value=-math.log2(c),
        removed_mass=float(j.matrix.sum() - kept.sum()),
        witness=_per_column_witness(j, kept),
        eps=eps,
    )


def smooth_h_max_cond(j: JointDistribution, eps) -> SmoothingReport:
    eps = check_epsilon(eps)
    k = _min_columns_k(j.matrix, eps)
    # rank atoms within each column, heaviest first, ties by x label order
    order = np.argsort(-j.matrix, axis=0, kind="stable")
    rank = np.empty_like(order)
    np.put_along_axis(rank, order, np.arange(j.shape[0])[:, None].repeat(j.shape[1], 1), axis=0)
    kept = np.where((rank < k) & (j.matrix > ZERO_MASS), j.matrix, 0.0)
    return SmoothingReport(
        value=math.log2(k),
        removed_mass=float(j.matrix.sum() - kept.sum()),
        witness=_per_column_witness(j, kept),
        eps=eps,
    )


def witness_value(report: SmoothingReport, kind: str) -> float:
    """Re-evaluate the non-smooth entropy of a report's witness.

    For conditional witnesses the worst column decides (min over y for
    ``kind="min"``, max over y for ``kind="max"``).
    """
    if isinstance(report.witness, SubProbVector):
        parts = [report.witness.mass]
    else:
        parts = [w.mass for w in report.witness.values()]
    if kind == "min":
        return -math.log2(max(float(m.max()) for m in parts))
    if kind == "max":
        return math.log2(max(int(np.count_nonzero(m > ZERO_MASS)) for m in parts))
    raise ValueError(f"kind must be 'min' or 'max', not {kind!r}")
