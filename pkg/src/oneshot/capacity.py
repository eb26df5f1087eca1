"""Single-use channel capacity: bounds, a random-coding construction, and Blahut-Arimoto.

Input laws are searched over distributions that are uniform on a subset of
the input alphabet: exhaustively for up to ``EXHAUSTIVE_INPUTS`` symbols,
by steepest-ascent add/remove moves beyond that.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .common import c_min_lower
from .errors import EmptyCode, InvalidEpsilonBudget, UnknownSymbol
from .prob import (
    Channel,
    ProbVector,
    check_epsilon,
    joint_from_channel,
)
from .smooth import (
    hmin_smooth_value,
    min_columns_k,
    smooth_h_max_cond,
    smooth_h_min,
)

EXHAUSTIVE_INPUTS = 14


@dataclass(frozen=True)
class Code:
    """Codebook (message i is sent as ``codebook[i]``) and a decoder from outputs to messages."""

    codebook: tuple[str, ...]
    decoder: dict[str, int]
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "codebook", tuple(str(x) for x in self.codebook))
        if len(set(self.codebook)) != len(self.codebook):
            raise ValueError("codebook entries must be distinct")
        for y, i in self.decoder.items():
            if not 0 <= i < len(self.codebook):
                raise ValueError(f"decoder maps {y!r} to unknown message {i}")

    def __len__(self) -> int:
        return len(self.codebook)

    def to_dict(self) -> dict:
        return {"codebook": list(self.codebook), "decoder": dict(self.decoder)}


@dataclass(frozen=True)
class CapacityBounds:
    lower_bits: float | None
    upper_bits: float | None
    lower_witness: tuple[str, ...] | None
    upper_witness: tuple[str, ...] | None
    params: dict
    input_search: str

    def to_dict(self) -> dict:
        return {
            "lower_bits": self.lower_bits,
            "upper_bits": self.upper_bits,
            "lower_witness": list(self.lower_witness) if self.lower_witness else None,
            "upper_witness": list(self.upper_witness) if self.upper_witness else None,
            "params": dict(self.params),
            "input_search": self.input_search,
        }


def evaluate_code(w: Channel, c: Code) -> tuple[float, float]:
    """Exact (maximum, average) probability of decoding the wrong message."""
    errors = codeword_errors(w, c)
    return float(errors.max()), float(errors.mean())


def codeword_errors(w: Channel, c: Code) -> np.ndarray:
    for y in c.decoder:
        if y not in w.y_labels:
            raise UnknownSymbol(f"decoder output {y!r} is not a channel output")
    rows = []
    for x in c.codebook:
        if x not in w.x_labels:
            raise UnknownSymbol(f"codeword {x!r} is not a channel input")
        rows.append(w.x_labels.index(x))
    dec = np.array([c.decoder.get(y, -1) for y in w.y_labels])
    sub = w.matrix[rows]
    correct = np.array([sub[i, dec == i].sum() for i in range(len(rows))])
    return 1.0 - correct


# -- uniform-subset input search -----------------------------------------------


def _subset_law(nx: int, subset: Sequence[int]) -> np.ndarray:
    p = np.zeros(nx)
    p[list(subset)] = 1.0 / len(subset)
    return p


def maximize_over_subsets(nx: int, objective: Callable[[tuple[int, ...]], float]):
    """Best nonempty input subset: ``(value, subset, method)``."""
    if nx <= EXHAUSTIVE_INPUTS:
        best = (-math.inf, ())
        for size in range(1, nx + 1):
            for s in itertools.combinations(range(nx), size):
                val = objective(s)
                if val > best[0]:
                    best = (val, s)
        return best[0], best[1], "exhaustive-uniform-subsets"
    current = tuple(range(nx))
    value = objective(current)
    while True:
        moves = [tuple(x for x in current if x != d) for d in current if len(current) > 1]
        moves += [tuple(sorted(current + (a,))) for a in range(nx) if a not in current]
        scored = [(objective(s), s) for s in moves]
        best_val, best_s = max(scored, key=lambda t: (t[0], [-i for i in t[1]]))
        if best_val <= value:
            return value, current, "local-search-uniform-subsets"
        value, current = best_val, best_s


def _check_lower_budget(eps, eps_p, eps_pp):
    eps = check_epsilon(eps)
    eps_p = check_epsilon(eps_p, "eps_prime")
    eps_pp = check_epsilon(eps_pp, "eps_pp")
    if not eps > eps_p + eps_pp:
        raise InvalidEpsilonBudget(f"need eps > eps' + eps'' (got {eps} <= {eps_p + eps_pp})")
    return eps, eps_p, eps_pp


def _check_upper_budget(eps, eps1, eps2):
    eps = check_epsilon(eps)
    eps1 = check_epsilon(eps1, "eps1")
    eps2 = check_epsilon(eps2, "eps2")
    if eps1 <= 0:
        raise InvalidEpsilonBudget("eps1 must be positive")
    if eps1 + eps2 + 2 * eps >= 1:
        raise InvalidEpsilonBudget(f"need eps1 + eps2 + 2*eps < 1 (got {eps1 + eps2 + 2 * eps})")
    return eps, eps1, eps2


def _entropy_gap(w: Channel, min_eps: float, max_eps: float):
    nx = w.shape[0]
    rows, cols = np.nonzero(w.matrix > 0)
    vals = w.matrix[rows, cols]

    def gap(subset):
        p = _subset_law(nx, subset)
        inside = p[rows] > 0
        k = min_columns_k(vals[inside] / len(subset), cols[inside], max_eps)
        return hmin_smooth_value(p, min_eps) - math.log2(k)

    return gap


def capacity_lower(w: Channel, eps, eps_p, eps_pp) -> CapacityBounds:
    """max_S [H_min^{eps'}(X) - H_max^{eps''}(X|Y)] - log2(4 eps / (eps - eps' - eps'')^2), clamped at 0."""
    eps, eps_p, eps_pp = _check_lower_budget(eps, eps_p, eps_pp)
    value, subset, how = maximize_over_subsets(w.shape[0], _entropy_gap(w, eps_p, eps_pp))
    penalty = math.log2(4 * eps / (eps - eps_p - eps_pp) ** 2)
    return CapacityBounds(
        lower_bits=max(value - penalty, 0.0),
        upper_bits=None,
        lower_witness=tuple(w.x_labels[i] for i in subset),
        upper_witness=None,
        params={"eps": eps, "eps_prime": eps_p, "eps_pp": eps_pp},
        input_search=how,
    )


def capacity_upper(w: Channel, eps, eps1, eps2) -> CapacityBounds:
    """max_S [H_min^{eps2}(X) - H_max^{eps1+eps2+2eps}(X|Y)] + log2(1/eps1)."""
    eps, eps1, eps2 = _check_upper_budget(eps, eps1, eps2)
    gap = _entropy_gap(w, eps2, eps1 + eps2 + 2 * eps)
    value, subset, how = maximize_over_subsets(w.shape[0], gap)
    return CapacityBounds(
        lower_bits=None,
        upper_bits=max(value + math.log2(1 / eps1), 0.0),
        lower_witness=None,
        upper_witness=tuple(w.x_labels[i] for i in subset),
        params={"eps": eps, "eps1": eps1, "eps2": eps2},
        input_search=how,
    )


def capacity_bounds(w: Channel, eps, eps_p, eps_pp, eps1, eps2) -> CapacityBounds:
    lo = capacity_lower(w, eps, eps_p, eps_pp)
    hi = capacity_upper(w, eps, eps1, eps2)
    return CapacityBounds(
        lower_bits=lo.lower_bits,
        upper_bits=hi.upper_bits,
        lower_witness=lo.lower_witness,
        upper_witness=hi.upper_witness,
        params={**lo.params, **hi.params},
        input_search=lo.input_search,
    )


def cmin_maximize(w: Channel, eps) -> tuple[float, ProbVector]:
    """Best ``c_min_lower`` over inputs uniform on a subset."""
    eps = check_epsilon(eps)

    def objective(subset):
        p = ProbVector(w.x_labels, _subset_law(w.shape[0], subset))
        return c_min_lower(joint_from_channel(p, w), eps).lower_bits

    value, subset, _ = maximize_over_subsets(w.shape[0], objective)
    return value, ProbVector(w.x_labels, _subset_law(w.shape[0], subset))


# -- random coding with expurgation --------------------------------------------


def _decode(column: np.ndarray, consistent: np.ndarray, allowed: np.ndarray) -> int:
    """Unique consistent codeword, else the most likely consistent one, else the most likely."""
    cand = np.nonzero(consistent & allowed)[0]
    if cand.size == 0:
        cand = np.nonzero(allowed)[0]
    return int(cand[np.argmax(column[cand])])


def build_code(w: Channel, p_x: ProbVector, eps1, eps2, eps3, eps, rng_seed: int) -> Code:
    """Random code from the smoothed input law, then expurgation down to max error eps.

    The number of sampled codewords is
    ``ceil(2 ** (H_min^{eps1}(X) - H_max^{eps2}(X|Y) - log2(1/eps3)))``.
    An output is decoded to the unique codeword whose retained support (in the
    max-entropy smoothing witness) contains it, or to the most likely such
    codeword when several do. Codewords whose exact error exceeds ``eps`` are
    removed and their outputs re-decoded among the survivors, which can only
    lower the survivors' errors.
    """
    eps1, eps2, eps3, eps = (
        check_epsilon(v, n) for v, n in ((eps1, "eps1"), (eps2, "eps2"), (eps3, "eps3"), (eps, "eps"))
    )
    budget = eps1 + eps2 + eps3
    if eps3 <= 0 or not eps > budget:
        raise InvalidEpsilonBudget(f"need eps3 > 0 and eps > eps1 + eps2 + eps3 (= {budget})")
    joint = joint_from_channel(p_x, w)
    hmin = smooth_h_min(p_x, eps1)
    hmax = smooth_h_max_cond(joint, eps2)
    n_draw = math.ceil(2 ** (hmin.value - hmax.value - math.log2(1 / eps3)) - 1e-9)
    n_draw = max(n_draw, 1)
    law = hmin.witness.mass / hmin.witness.mass.sum()

    rng = np.random.default_rng(rng_seed)
    draws = rng.choice(w.shape[0], size=n_draw, p=law)
    book = list(dict.fromkeys(int(d) for d in draws))

    kept = np.zeros(w.shape, dtype=bool)
    for y, sub in hmax.witness.items():
        kept[:, w.y_labels.index(y)] = sub.mass > 0
    wm = w.matrix
    rows = np.array(book)

    def decoder_for(alive: np.ndarray) -> np.ndarray:
        return np.array(
            [_decode(wm[rows, k], kept[rows, k], alive) for k in range(w.shape[1])]
        )

    alive = np.ones(len(book), dtype=bool)
    dec = decoder_for(alive)
    errors = np.array([1.0 - wm[x, dec == i].sum() for i, x in enumerate(book)])
    alive = errors <= eps
    if not alive.any():
        raise EmptyCode(f"all {len(book)} sampled codewords exceed error {eps}")
    if not alive.all():
        dec = decoder_for(alive)
    renumber = np.cumsum(alive) - 1
    code = Code(
        codebook=tuple(w.x_labels[book[i]] for i in np.nonzero(alive)[0]),
        decoder={y: int(renumber[dec[k]]) for k, y in enumerate(w.y_labels)},
        meta={
            "seed": int(rng_seed),
            "sampled": n_draw,
            "distinct": len(book),
            "expurgated": int((~alive).sum()),
            "markov_floor": (eps - budget) / eps * n_draw,
            "h_min_bits": hmin.value,
            "h_max_cond_bits": hmax.value,
        },
    )
    return code


# -- asymptotic baseline -------------------------------------------------------


def asymptotic_capacity(w: Channel, tol: float = 1e-9, max_iter: int = 100_000) -> float:
    """Shannon capacity max_P I(X;Y) by Blahut-Arimoto, to additive accuracy ``tol``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    wm = w.matrix
    q = np.full(w.shape[0], 1.0 / w.shape[0])
    logw = np.log2(wm, out=np.zeros_like(wm), where=wm > 0)
    lower = 0.0
    for _ in range(max_iter):
        out = q @ wm
        logout = np.log2(out, out=np.zeros_like(out), where=out > 0)
        d = (wm * (logw - logout[None, :])).sum(axis=1)
        lower = math.log2(float((q * np.exp2(d)).sum()))
        upper = float(d.max())
        if upper - lower <= tol:
            break
        q = q * np.exp2(d)
        q /= q.sum()
    return max(lower, 0.0)
