"""Randomness extraction and compression with side information, evaluated exactly.

Every error reported here is computed from the joint distribution by full
enumeration, never by sampling. Extraction error is the total-variation
distance between (hash(X), Y) and (uniform string, Y); compression error is
the probability that the decoder outputs the wrong x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .common import c_min_lower, gacs_korner
from .errors import InvalidEpsilonBudget, OutputTooLong
from .hashing import HashFunction
from .prob import JointDistribution, check_epsilon
from .smooth import (
    hmax_cond_smooth_value,
    hmin_cond_smooth_value,
)


@dataclass(frozen=True)
class TaskReport:
    task: str
    achieved_bits: int
    achieved_error: float
    bound_lower: float | None = None
    bound_upper: float | None = None
    worst_error: float | None = None
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "task": self.task,
            "achieved_bits": self.achieved_bits,
            "achieved_error": self.achieved_error,
            "worst_error": self.worst_error,
            "bound_lower": self.bound_lower,
            "bound_upper": self.bound_upper,
            "params": dict(self.params),
        }


def _eps_pair(eps, eps_prime):
    if eps is None:
        return None
    eps = check_epsilon(eps)
    eps_prime = check_epsilon(0.0 if eps_prime is None else eps_prime, "eps_prime")
    if not eps_prime < eps:
        raise InvalidEpsilonBudget("need eps_prime < eps")
    return eps, eps_prime


def extraction_bounds(j: JointDistribution, eps, eps_prime) -> tuple[float, float]:
    """H_min^{eps'}(X|Y) - 2 log2(1/(eps-eps')) <= H_ext^eps(X|Y) <= H_min^eps(X|Y)."""
    eps, eps_prime = _eps_pair(eps, eps_prime)
    low = hmin_cond_smooth_value(j.matrix, eps_prime) - 2 * math.log2(1 / (eps - eps_prime))
    return low, hmin_cond_smooth_value(j.matrix, eps)


def compression_bounds(j: JointDistribution, eps, eps_prime) -> tuple[float, float]:
    """H_max^eps(X|Y) <= H_comp^eps(X|Y) <= H_max^{eps'}(X|Y) + log2(1/(eps-eps'))."""
    eps, eps_prime = _eps_pair(eps, eps_prime)
    high = hmax_cond_smooth_value(j.matrix, eps_prime) + math.log2(1 / (eps - eps_prime))
    return hmax_cond_smooth_value(j.matrix, eps), high


def _multipliers(h: HashFunction, seeds, exhaustive: bool) -> np.ndarray:
    if exhaustive:
        return h.all_multipliers()
    return np.array([h.multiplier(s) for s in seeds], dtype=np.int64)


def extraction_errors(j: JointDistribution, ell: int, multipliers=None) -> np.ndarray:
    """Distance from uniform-and-independent-of-Y, one entry per multiplier."""
    h = HashFunction(j.shape[0], ell)
    mults = h.all_multipliers() if multipliers is None else np.asarray(multipliers)
    tabs = h.tables(mults)
    py = j.matrix.sum(axis=0)
    bins = 2**ell
    out = np.empty(len(mults))
    for t, tab in enumerate(tabs):
        hashed = np.zeros((bins, j.shape[1]))
        np.add.at(hashed, tab, j.matrix)
        out[t] = 0.5 * np.abs(hashed - py[None, :] / bins).sum()
    return out


def extract(
    j: JointDistribution,
    ell: int,
    seed_count: int = 1,
    *,
    exhaustive: bool = False,
    eps=None,
    eps_prime=None,
) -> TaskReport:
    """Hash X to ``ell`` bits and measure the exact distance from an ideal key.

    Seeds ``0 .. seed_count-1`` pick multipliers; ``exhaustive=True`` averages
    over the whole family instead. The report carries the seed average and
    the worst seed. With ``eps`` (and ``eps_prime``) given, the smooth
    min-entropy sandwich for the extractable length is attached.
    """
    ell = int(ell)
    if ell < 0 or seed_count < 1:
        raise ValueError("need ell >= 0 and seed_count >= 1")
    if 2**ell > 2 * j.shape[0]:
        raise OutputTooLong(f"2^{ell} outputs exceed twice the input alphabet ({j.shape[0]})")
    h = HashFunction(j.shape[0], ell)
    seeds = list(range(seed_count))
    mults = _multipliers(h, seeds, exhaustive)
    errs = extraction_errors(j, ell, mults)
    bounds = (None, None)
    if eps is not None:
        bounds = extraction_bounds(j, eps, eps_prime)
    params = {"ell": ell, "hash": h.describe(), "exhaustive": exhaustive}
    if not exhaustive:
        params["seeds"] = seeds
        params["multipliers"] = [int(a) for a in mults]
    return TaskReport(
        task="extract",
        achieved_bits=ell,
        achieved_error=float(errs.mean()),
        worst_error=float(errs.max()),
        bound_lower=bounds[0],
        bound_upper=bounds[1],
        params=params,
    )


def binning_errors(j: JointDistribution, m: int, multipliers=None) -> np.ndarray:
    """Exact decoding-error probability for each multiplier.

    The decoder sees the bin of x and y and returns the x in that bin with
    the largest P(x, y) (lowest label index on ties), which is the
    error-minimizing rule.
    """
    h = HashFunction(j.shape[0], m)
    mults = h.all_multipliers() if multipliers is None else np.asarray(multipliers)
    tabs = h.tables(mults)
    bins = 2**m
    out = np.empty(len(mults))
    for t, tab in enumerate(tabs):
        best = np.zeros((bins, j.shape[1]))
        np.maximum.at(best, tab, j.matrix)
        out[t] = 1.0 - best.sum()
    return np.maximum(out, 0.0)


def compress_with_side_info(
    j: JointDistribution,
    m: int,
    seed: int = 0,
    *,
    exhaustive: bool = False,
    eps=None,
    eps_prime=None,
) -> TaskReport:
    """Store X as an m-bit bin index; the decoder also sees Y."""
    m = int(m)
    if m < 0:
        raise ValueError("need m >= 0")
    h = HashFunction(j.shape[0], m)
    mults = _multipliers(h, [seed], exhaustive)
    errs = binning_errors(j, m, mults)
    bounds = (None, None)
    if eps is not None:
        bounds = compression_bounds(j, eps, eps_prime)
    params = {"bins_bits": m, "hash": h.describe(), "exhaustive": exhaustive}
    if not exhaustive:
        params["seed"] = int(seed)
        params["multiplier"] = int(mults[0])
    return TaskReport(
        task="compress",
        achieved_bits=m,
        achieved_error=float(errs.mean()),
        worst_error=float(errs.max()),
        bound_lower=bounds[0],
        bound_upper=bounds[1],
        params=params,
    )


def _block_maps(j: JointDistribution, witness: JointDistribution):
    """Block index each party computes from its own symbol."""
    cp = gacs_korner(witness)
    n_blocks = max(len(cp), 1)

    def fallback(weights, labels, lookup):
        # symbol outside the perturbed support: follow its heaviest partner
        for idx in np.argsort(-weights, kind="stable"):
            if labels[idx] in lookup:
                return lookup[labels[idx]]
        return 0

    rows = np.array(
        [
            cp.row_block[x] if x in cp.row_block else fallback(j.matrix[i], j.y_labels, cp.col_block)
            for i, x in enumerate(j.x_labels)
        ]
    )
    cols = np.array(
        [
            cp.col_block[y] if y in cp.col_block else fallback(j.matrix[:, k], j.x_labels, cp.row_block)
            for k, y in enumerate(j.y_labels)
        ]
    )
    return rows, cols, n_blocks


def extract_common(
    j: JointDistribution,
    eps_budget,
    ell: int,
    seed: int = 0,
    *,
    exhaustive: bool = False,
) -> TaskReport:
    """Both parties hash the block of the perturbed common part they observe.

    The perturbed joint is the witness of ``c_min_lower(j, eps_budget)``.
    The error is the total-variation distance between the pair of outputs
    under the true joint and a shared uniform ``ell``-bit string, which
    accounts for both disagreement and non-uniformity.
    """
    eps_budget = check_epsilon(eps_budget, "eps_budget")
    ell = int(ell)
    if ell < 0:
        raise ValueError("need ell >= 0")
    low = c_min_lower(j, eps_budget)
    rows, cols, n_blocks = _block_maps(j, low.perturbed_joint)
    h = HashFunction(n_blocks, ell)
    mults = _multipliers(h, [seed], exhaustive)
    size = 2**ell
    target = np.eye(size) / size
    errs, disagree = [], []
    for tab in h.tables(mults):
        ka, kb = tab[rows], tab[cols]
        q = np.zeros((size, size))
        np.add.at(q, (ka[:, None].repeat(j.shape[1], 1), kb[None, :].repeat(j.shape[0], 0)), j.matrix)
        errs.append(0.5 * np.abs(q - target).sum())
        disagree.append(1.0 - np.trace(q))
    params = {
        "ell": ell,
        "eps_budget": eps_budget,
        "hash": h.describe(),
        "exhaustive": exhaustive,
        "c_min_lower_bits": low.lower_bits,
        "disagreement": float(np.mean(disagree)),
    }
    if not exhaustive:
        params["seed"] = int(seed)
        params["multiplier"] = int(mults[0])
    return TaskReport(
        task="extract_common",
        achieved_bits=ell,
        achieved_error=float(np.mean(errs)),
        worst_error=float(np.max(errs)),
        params=params,
    )
