"""Exhaustive reference computations for tiny instances.

Everything here is brute force on purpose: subsets are enumerated, decoders
and extractor pairs are tried one by one. The code shares data types with
the fast modules but none of their algorithms, so agreement between the two
is evidence rather than tautology.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import BudgetExceeded
from .prob import ZERO_MASS, Channel, JointDistribution, ProbVector, SubProbVector, check_epsilon

FEAS_TOL = 1e-12


@dataclass(frozen=True)
class OracleBudget:
    max_support_atoms: int = 12
    max_codebook: int = 4
    max_outputs: int = 6
    time_limit: float = 120.0
    max_candidates: int = 10**7

    def __post_init__(self):
        for name, value in asdict(self).items():
            if value <= 0:
                raise ValueError(f"budget field {name} must be positive")

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULT_BUDGET = OracleBudget()


class _Clock:
    def __init__(self, budget: OracleBudget):
        self.deadline = time.monotonic() + budget.time_limit

    def check(self):
        if time.monotonic() > self.deadline:
            raise BudgetExceeded("oracle time limit reached")


def _as_matrix(p_or_j) -> np.ndarray:
    if isinstance(p_or_j, JointDistribution):
        return np.array(p_or_j.matrix)
    if isinstance(p_or_j, SubProbVector):
        return np.array(p_or_j.mass)[:, None]
    raise TypeError("expected a ProbVector or JointDistribution")


def _subset_masks(n: int) -> np.ndarray:
    """All 2^n subsets of range(n) as a boolean matrix, one row per subset."""
    codes = np.arange(2**n, dtype=np.int64)[:, None]
    return ((codes >> np.arange(n)) & 1).astype(bool)


# -- smooth entropies ----------------------------------------------------------


def _event_min(mat: np.ndarray, eps: float) -> float:
    py = mat.sum(axis=0)
    live = py > ZERO_MASS
    v = mat[:, live].ravel()
    w = np.broadcast_to(py[live], mat[:, live].shape).ravel()
    keep = v > ZERO_MASS
    v, w = v[keep], w[keep]
    masks = _subset_masks(v.size)[1:].astype(float)
    # every optimal cap equals (mass(A) - eps) / weight(A) for the set A of
    # atoms it actually cuts, or sits exactly at one conditional probability
    cand = np.concatenate([(masks @ v - eps) / (masks @ w), v / w])
    cand = cand[cand > 0]
    removal = np.maximum(v[None, :] - cand[:, None] * w[None, :], 0.0).sum(axis=1)
    feasible = cand[removal <= eps + FEAS_TOL]
    return -math.log2(float(feasible.min()))


def _event_max(mat: np.ndarray, eps: float) -> float:
    ii, jj = np.nonzero(mat > ZERO_MASS)
    v = mat[ii, jj]
    masks = _subset_masks(v.size)
    removed = (~masks).astype(float) @ v
    ok = masks[removed <= eps + 1e-12]
    cols = np.unique(jj)
    per_col = np.stack([ok[:, jj == c].sum(axis=1) for c in cols], axis=1)
    best = int(per_col.max(axis=1).min())
    return math.log2(best)


def _coupling_min(mat: np.ndarray, eps: float, iters: int = 60) -> float:
    """Largest conditional min-entropy reachable within total variation eps.

    Bisection on the cap t of P'(x|y); each step is a linear feasibility
    problem in the perturbed joint P' (P'(x,y) <= t * P'(y) is linear).
    Returns the value at the last feasible cap, a certified lower bound on
    the optimum up to solver tolerance.
    """
    nx_, ny = mat.shape
    n = nx_ * ny
    p = mat.ravel()
    # variables: P' (n), d (n) with d >= |P' - P|
    c = np.zeros(2 * n)
    a_ub, b_ub = [], []
    for k in range(n):
        row = np.zeros(2 * n)
        row[k], row[n + k] = 1.0, -1.0
        a_ub.append(row)
        b_ub.append(p[k])
        row = np.zeros(2 * n)
        row[k], row[n + k] = -1.0, -1.0
        a_ub.append(row)
        b_ub.append(-p[k])
    tv = np.zeros(2 * n)
    tv[n:] = 0.5
    a_ub.append(tv)
    b_ub.append(eps)
    a_eq = np.zeros((1, 2 * n))
    a_eq[0, :n] = 1.0

    def feasible(t: float) -> bool:
        rows = []
        for x in range(nx_):
            for y in range(ny):
                row = np.zeros(2 * n)
                for x2 in range(nx_):
                    row[x2 * ny + y] -= t
                row[x * ny + y] += 1.0
                rows.append(row)
        res = linprog(
            c,
            A_ub=np.vstack(a_ub + rows),
            b_ub=np.concatenate([b_ub, np.zeros(len(rows))]),
            A_eq=a_eq,
            b_eq=[1.0],
            bounds=[(0, None)] * (2 * n),
            method="highs",
        )
        return res.status == 0

    py = mat.sum(axis=0)
    live = py > ZERO_MASS
    hi = float((mat[:, live] / py[live]).max())
    lo = 1.0 / nx_
    if eps == 0.0 or hi <= lo:
        return -math.log2(hi)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return -math.log2(hi)


def exact_smooth_entropy(
    p_or_j,
    eps,
    which: str,
    formulation: str = "event",
    budget: OracleBudget = DEFAULT_BUDGET,
) -> float:
    """Smooth min/max entropy by exhaustive search.

    A ProbVector gives the unconditional quantity, a JointDistribution the
    entropy of X conditioned on Y. ``formulation="event"`` removes
    sub-normalized mass; ``"coupling"`` optimizes over normalized joints on
    the same alphabets within total-variation distance ``eps``.
    """
    eps = check_epsilon(eps)
    mat = _as_matrix(p_or_j)
    n_atoms = int(np.count_nonzero(mat > ZERO_MASS))
    if n_atoms > budget.max_support_atoms:
        raise BudgetExceeded(f"{n_atoms} support atoms > {budget.max_support_atoms}")
    if which not in ("min", "max") or formulation not in ("event", "coupling"):
        raise ValueError(f"unsupported combination which={which!r}, formulation={formulation!r}")
    if which == "max":
        # Moving the deleted mass onto kept atoms costs exactly the deleted mass
        # in total variation, and extra atoms never shrink a support, so both
        # formulations reduce to the same subset search.
        return _event_max(mat, eps)
    if formulation == "event":
        return _event_min(mat, eps)
    return _coupling_min(mat, eps)


def lp_smooth_min(p_or_j, eps) -> float:
    """Event-based smooth min-entropy as a linear program (second reference).

    minimize c  s.t.  0 <= q <= P,  q(x,y) <= c * P(y),  sum q >= 1 - eps.
    """
    eps = check_epsilon(eps)
    mat = _as_matrix(p_or_j)
    py = mat.sum(axis=0)
    live = py > ZERO_MASS
    sub = mat[:, live]
    v = sub.ravel()
    w = np.broadcast_to(py[live], sub.shape).ravel()
    n = v.size
    cost = np.zeros(n + 1)
    cost[-1] = 1.0
    a_ub = np.zeros((n + 1, n + 1))
    a_ub[:n, :n] = np.eye(n)
    a_ub[:n, -1] = -w
    a_ub[n, :n] = -1.0
    b_ub = np.concatenate([np.zeros(n), [-(1.0 - eps)]])
    bounds = [(0.0, float(x)) for x in v] + [(0.0, None)]
    res = linprog(cost, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
    return -math.log2(float(res.x[-1]))


# -- common information --------------------------------------------------------


def _component_masses(mat: np.ndarray, rows: np.ndarray, cols: np.ndarray, kept: np.ndarray):
    nx_, ny = mat.shape
    r, c = rows[kept], cols[kept]
    graph = coo_matrix((np.ones(r.size), (r, nx_ + c)), shape=(nx_ + ny, nx_ + ny))
    _, labels = connected_components(graph, directed=False)
    comp = labels[r]
    uniq, inv = np.unique(comp, return_inverse=True)
    masses = np.bincount(inv, weights=mat[r, c], minlength=uniq.size)
    free_rows = nx_ - np.unique(r).size
    free_cols = ny - np.unique(c).size
    return masses, min(free_rows, free_cols)


def _water_level(masses: np.ndarray, budget: float) -> float:
    # L* = max(0, max_k (S_k - budget) / k) over the k heaviest blocks
    s = np.cumsum(np.sort(masses)[::-1])
    k = np.arange(1, s.size + 1)
    return max(0.0, float(((s - budget) / k).max()))


def exact_c_min(
    j: JointDistribution,
    eps,
    budget: OracleBudget = DEFAULT_BUDGET,
    extra_symbols: int = 0,
) -> float:
    """Max over joints within total variation eps of H_min of the common part.

    Enumerates every set of kept support atoms. For each, deleted mass r is
    spent first; the remaining budget lowers the heaviest blocks, and the
    freed mass fills the others, including brand-new blocks that can be
    opened on a row and a column carrying no kept atom. ``extra_symbols``
    adds that many unused symbols to both alphabets.
    """
    eps = check_epsilon(eps)
    mat = np.array(j.matrix)
    if extra_symbols:
        mat = np.pad(mat, ((0, extra_symbols), (0, extra_symbols)))
    rows, cols = np.nonzero(mat > ZERO_MASS)
    n = rows.size
    if n > budget.max_support_atoms:
        raise BudgetExceeded(f"{n} support atoms > {budget.max_support_atoms}")
    clock = _Clock(budget)
    v = mat[rows, cols]
    best = 1.0
    for t, kept in enumerate(_subset_masks(n)):
        if t % 256 == 0:
            clock.check()
        if not kept.any():
            continue
        deleted = float(v[~kept].sum())
        if deleted > eps + FEAS_TOL:
            continue
        masses, new_blocks = _component_masses(mat, rows, cols, kept)
        m_total = masses.size + new_blocks
        if deleted == 0.0 and eps == 0.0:
            level = float(masses.max())
        else:
            level = max(_water_level(masses, max(eps - deleted, 0.0)), 1.0 / m_total)
        best = min(best, level)
    return -math.log2(best) + 0.0


def exact_c_ext(j: JointDistribution, eps, budget: OracleBudget = DEFAULT_BUDGET) -> float:
    """Largest l such that some f(X), g(Y) are within TV eps of a shared uniform l-bit string."""
    eps = check_epsilon(eps)
    nx_, ny = j.shape
    if nx_ > 4 or ny > 4:
        raise BudgetExceeded("exact_c_ext supports alphabets of size <= 4")
    mat = np.array(j.matrix)
    clock = _Clock(budget)
    best = 0
    ell = 1
    while True:
        size = 2**ell
        # f hits at most min(|X|, |Y|) shared values; the rest of the diagonal is missed
        if 1.0 - min(nx_, ny) / size > eps + FEAS_TOL:
            break
        n_f, n_g = size**nx_, size**ny
        if n_f * n_g > budget.max_candidates:
            raise BudgetExceeded(f"{n_f * n_g} extractor pairs at l={ell}")
        fs = np.array(list(itertools.product(range(size), repeat=nx_)))
        gs = np.array(list(itertools.product(range(size), repeat=ny)))
        f_hot = np.eye(size)[fs]  # (n_f, nx, L)
        g_hot = np.eye(size)[gs]  # (n_g, ny, L)
        fa = np.einsum("fxa,xy->fay", f_hot, mat)
        target = np.eye(size) / size
        found = False
        for start in range(0, n_f, 64):
            clock.check()
            q = np.einsum("fay,gyb->fgab", fa[start : start + 64], g_hot)
            tv = 0.5 * np.abs(q - target).sum(axis=(2, 3))
            if tv.min() <= eps + FEAS_TOL:
                found = True
                break
        if not found:
            break
        best = ell
        ell += 1
    return float(best)


# -- channels ------------------------------------------------------------------


def exact_best_code(w: Channel, eps, budget: OracleBudget = DEFAULT_BUDGET):
    """Largest codebook with a deterministic decoder of maximum error <= eps.

    Returns ``(bits, codebook_indices, decoder)`` where ``decoder[y]`` is a
    message index for every output symbol.
    """
    eps = check_epsilon(eps)
    nx_, ny = w.shape
    if nx_ > 3 * budget.max_codebook:
        raise BudgetExceeded(f"|X| = {nx_} > {3 * budget.max_codebook}")
    if ny > budget.max_outputs:
        raise BudgetExceeded(f"|Y| = {ny} > {budget.max_outputs}")
    clock = _Clock(budget)
    wm = np.array(w.matrix)
    best = ((0,), np.zeros(ny, dtype=int))
    for m in range(2, min(nx_, ny) + 1):
        hit = None
        for book in itertools.combinations(range(nx_), m):
            clock.check()
            sub = wm[list(book)]
            relevant = np.nonzero(sub.max(axis=0) > 0)[0]
            n_dec = m ** relevant.size
            if n_dec > budget.max_candidates:
                raise BudgetExceeded(f"{n_dec} decoders for a codebook of size {m}")
            decs = np.array(list(itertools.product(range(m), repeat=relevant.size)), dtype=int)
            hot = np.eye(m)[decs]  # (n_dec, |relevant|, m)
            correct = np.einsum("dym,my->dm", hot, sub[:, relevant])
            max_err = (1.0 - correct).max(axis=1)
            ok = np.nonzero(max_err <= eps + FEAS_TOL)[0]
            if ok.size:
                decoder = np.zeros(ny, dtype=int)
                decoder[relevant] = decs[ok[0]]
                hit = (book, decoder)
                break
        if hit is None:
            break
        best = hit
    book, decoder = best
    return math.log2(len(book)), book, decoder


def exact_one_shot_capacity(w: Channel, eps, budget: OracleBudget = DEFAULT_BUDGET) -> float:
    return exact_best_code(w, eps, budget)[0]


# -- uniform decomposition -----------------------------------------------------


def uniform_decomposition(p: ProbVector) -> list[tuple[float, SubProbVector]]:
    """Write p as a convex combination of distributions flat at level max(p).

    Each component puts mass ``a = max(p)`` on ``floor(1/a)`` atoms and the
    remainder ``1 - floor(1/a) * a`` (zero when 1/a is an integer) on one more.
    Components are peeled greedily: the heaviest residual atoms get level
    ``a`` and the largest feasible weight is removed at each step.
    """
    mass = np.array(p.mass)
    a = float(mass.max())
    k = int(math.floor(1.0 / a + 1e-12))
    rest = max(1.0 - k * a, 0.0)
    if rest < 1e-12:
        rest = 0.0
    residual = mass.copy()
    total = 1.0
    out: list[tuple[float, SubProbVector]] = []
    n = mass.size
    while total > 1e-13:
        order = np.argsort(-residual, kind="stable")
        comp = np.zeros(n)
        comp[order[:k]] = a
        if rest > 0:
            comp[order[k]] = rest
        # largest lam keeping residual >= 0 and residual <= a * remaining total
        limits = [residual[x] / comp[x] for x in np.nonzero(comp)[0]]
        for x in range(n):
            if comp[x] == 0:
                limits.append(total - residual[x] / a)
            elif comp[x] < a:
                limits.append((a * total - residual[x]) / (a - comp[x]))
        lam = max(min(limits), 0.0)
        if lam <= 1e-15:
            lam = total
        lam = min(lam, total)
        residual = np.maximum(residual - lam * comp, 0.0)
        total -= lam
        out.append((float(lam), SubProbVector(p.labels, comp)))
    return out
