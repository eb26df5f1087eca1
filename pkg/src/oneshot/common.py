"""Gacs-Korner common part and the smoothed common min-entropy.

The common part of (X, Y) is the connected component of the observed pair in
the bipartite support graph (rows and columns are nodes, positive atoms are
edges). Perturbing the joint within total-variation distance eps can delete
atoms, which may disconnect blocks, and move mass between blocks.

For a fixed set of kept atoms with deleted mass r, the best achievable
largest block mass is the water level obtained by lowering the heaviest
blocks with the remaining budget ``eps - r``, floored at ``1/m`` for ``m``
blocks. ``c_min_lower`` searches over kept sets heuristically; the oracle
module enumerates them.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import networkx as nx
import numpy as np

from .errors import InvalidEpsilonBudget
from .prob import ZERO_MASS, JointDistribution, check_epsilon
from .smooth import cap_level, hmax_cond_smooth_value, hmax_smooth_value

Atom = tuple[int, int]


@dataclass(frozen=True)
class CommonPartition:
    """Blocks of support atoms (as label pairs) and their probabilities."""

    blocks: tuple[tuple[tuple[str, str], ...], ...]
    block_mass: np.ndarray
    row_block: dict[str, int]
    col_block: dict[str, int]

    def __len__(self) -> int:
        return len(self.blocks)

    def to_dict(self) -> dict:
        return {
            "blocks": [[list(a) for a in b] for b in self.blocks],
            "block_mass": [float(m) for m in self.block_mass],
        }


@dataclass(frozen=True)
class CminResult:
    lower_bits: float
    upper_bits: float | None
    perturbed_joint: JointDistribution
    perturbation_mass: float
    eps: float

    def to_dict(self) -> dict:
        return {
            "eps": self.eps,
            "lower_bits": self.lower_bits,
            "upper_bits": self.upper_bits,
            "perturbation_mass": self.perturbation_mass,
            "perturbed_joint": self.perturbed_joint.to_dict(),
        }


def components(atoms: list[Atom], n_rows: int) -> tuple[list[int], int]:
    """Label each atom with its connected component (union-find on rows + columns).

    Component ids are assigned in order of first appearance in ``atoms``.
    """
    parent: dict[int, int] = {}

    def find(u):
        while parent.setdefault(u, u) != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    for i, j in atoms:
        a, b = find(i), find(n_rows + j)
        if a != b:
            parent[a] = b
    ids: dict[int, int] = {}
    labels = [ids.setdefault(find(i), len(ids)) for i, _ in atoms]
    return labels, len(ids)


def gacs_korner(j: JointDistribution) -> CommonPartition:
    atoms = j.support_atoms()
    comp, m = components(atoms, j.shape[0])
    blocks: list[list[tuple[str, str]]] = [[] for _ in range(m)]
    mass = np.zeros(m)
    row_block: dict[str, int] = {}
    col_block: dict[str, int] = {}
    for (i, k), c in zip(atoms, comp):
        blocks[c].append((j.x_labels[i], j.y_labels[k]))
        mass[c] += j.matrix[i, k]
        row_block[j.x_labels[i]] = c
        col_block[j.y_labels[k]] = c
    mass.setflags(write=False)
    return CommonPartition(tuple(tuple(b) for b in blocks), mass, row_block, col_block)


def common_entropy(cp: CommonPartition) -> float:
    m = cp.block_mass[cp.block_mass > 0]
    return float(-(m * np.log2(m)).sum()) + 0.0


def common_min_entropy(cp: CommonPartition) -> float:
    return -math.log2(float(cp.block_mass.max())) + 0.0


def flattened_level(block_mass: np.ndarray, budget: float, n_blocks: int | None = None) -> float:
    """Smallest achievable largest-block mass.

    ``block_mass`` holds the kept mass per block (summing to ``1 - r``),
    ``budget`` the total-variation budget left after deletion, and
    ``n_blocks`` the number of blocks that may receive mass (defaults to
    ``len(block_mass)``; extra blocks start empty).
    """
    m = len(block_mass) if n_blocks is None else n_blocks
    if budget <= 0.0 and abs(block_mass.sum() - 1.0) <= ZERO_MASS:
        return float(block_mass.max())
    lowered = cap_level(block_mass, np.ones_like(block_mass), max(budget, 0.0))
    return max(lowered, 1.0 / m)


def _flattened_masses(pi: np.ndarray, level: float) -> np.ndarray:
    beta = np.minimum(pi, level)
    deficit = 1.0 - beta.sum()
    room = level - beta
    if deficit > 0 and room.sum() > 0:
        beta = beta + deficit * room / room.sum()
    return beta


class _KeptState:
    """Evaluation of one kept-atom set."""

    def __init__(self, j: JointDistribution, atoms: list[Atom], kept: list[bool]):
        self.j = j
        self.atoms = atoms
        self.kept = list(kept)
        live = [a for a, k in zip(atoms, kept) if k]
        self.live = live
        self.comp, self.m = components(live, j.shape[0])
        self.pi = np.zeros(self.m)
        for (i, k), c in zip(live, self.comp):
            self.pi[c] += j.matrix[i, k]
        self.deleted = float(sum(j.matrix[a] for a, k in zip(atoms, kept) if not k))

    def level(self, eps: float) -> float:
        if self.m == 0:
            return 1.0
        return flattened_level(self.pi, eps - self.deleted)

    def witness(self, eps: float) -> JointDistribution:
        level = self.level(eps)
        beta = _flattened_masses(self.pi, level)
        mat = np.zeros(self.j.shape)
        for (i, k), c in zip(self.live, self.comp):
            mat[i, k] = self.j.matrix[i, k] * beta[c] / self.pi[c]
        return JointDistribution(self.j.x_labels, self.j.y_labels, mat)


def _cheapest_first_path(j: JointDistribution, atoms: list[Atom], eps: float):
    """Delete atoms cheapest first; among equal masses prefer those that split a block."""
    kept = [True] * len(atoms)
    deleted = 0.0
    while True:
        live_idx = [t for t, k in enumerate(kept) if k]
        if len(live_idx) <= 1:
            return
        _, base_m = components([atoms[t] for t in live_idx], j.shape[0])
        best = None
        for t in live_idx:
            rest = [atoms[s] for s in live_idx if s != t]
            _, m = components(rest, j.shape[0])
            key = (float(j.matrix[atoms[t]]), -(m - base_m), atoms[t])
            if best is None or key < best[0]:
                best = (key, t)
        t = best[1]
        deleted += float(j.matrix[atoms[t]])
        if deleted > eps:
            return
        kept[t] = False
        yield list(kept)


def _min_cut_path(j: JointDistribution, atoms: list[Atom], eps: float):
    """Repeatedly cut the heaviest splittable block along its minimum-weight edge cut."""
    kept = [True] * len(atoms)
    deleted = 0.0
    n_rows = j.shape[0]
    while True:
        live_idx = [t for t, k in enumerate(kept) if k]
        comp, m = components([atoms[t] for t in live_idx], n_rows)
        members: list[list[int]] = [[] for _ in range(m)]
        for t, c in zip(live_idx, comp):
            members[c].append(t)
        splittable = [mem for mem in members if len(mem) >= 2]
        if not splittable:
            return
        block = max(splittable, key=lambda mem: (sum(j.matrix[atoms[t]] for t in mem), -mem[0]))
        g = nx.Graph()
        for t in block:
            i, k = atoms[t]
            g.add_edge(("x", i), ("y", k), weight=float(j.matrix[i, k]), atom=t)
        _, (side, _) = nx.stoer_wagner(g)
        side = set(side)
        cut = sorted(
            d["atom"] for u, v, d in g.edges(data=True) if (u in side) != (v in side)
        )
        deleted += float(sum(j.matrix[atoms[t]] for t in cut))
        if deleted > eps:
            return
        for t in cut:
            kept[t] = False
        yield list(kept)


def c_min_lower(j: JointDistribution, eps) -> CminResult:
    """Feasible lower bound on the smoothed common min-entropy.

    Explores two deletion sequences that do not depend on ``eps`` (cheapest
    atom first; repeated minimum cuts of the heaviest block), evaluates every
    prefix whose deleted mass fits the budget, and keeps the best. Because the
    sequences are fixed, the bound is non-decreasing in ``eps``.
    """
    eps = check_epsilon(eps)
    atoms = j.support_atoms()
    best = _KeptState(j, atoms, [True] * len(atoms))
    best_level = best.level(eps)
    for path in (_cheapest_first_path, _min_cut_path):
        for kept in path(j, atoms, eps):
            state = _KeptState(j, atoms, kept)
            lev = state.level(eps)
            if lev < best_level:
                best, best_level = state, lev
    witness = best.witness(eps)
    tv = 0.5 * float(np.abs(witness.matrix - j.matrix).sum())
    return CminResult(
        lower_bits=-math.log2(best_level) + 0.0,
        upper_bits=None,
        perturbed_joint=witness,
        perturbation_mass=tv,
        eps=eps,
    )


def _check_upper_budget(eps: float, eps1: float, eps2: float) -> None:
    if eps1 <= 0.0:
        raise InvalidEpsilonBudget("eps1 must be positive")
    if eps1 + eps2 + 2 * eps >= 1.0:
        raise InvalidEpsilonBudget(
            f"need eps1 + eps2 + 2*eps < 1, got {eps1 + eps2 + 2 * eps:.6g}"
        )


def c_min_upper(j: JointDistribution, eps, eps1, eps2) -> float:
    """H_max^{eps2}(X) - H_max^{eps1+eps2+2eps}(X|Y) + log2(1/eps1)."""
    eps, eps1, eps2 = (check_epsilon(e, n) for e, n in ((eps, "eps"), (eps1, "eps1"), (eps2, "eps2")))
    _check_upper_budget(eps, eps1, eps2)
    hx = hmax_smooth_value(j.matrix.sum(axis=1), eps2)
    hxy = hmax_cond_smooth_value(j.matrix, eps1 + eps2 + 2 * eps)
    return hx - hxy + math.log2(1.0 / eps1)


def upper_split_grid(eps: float, steps: int = 8) -> list[tuple[float, float]]:
    """Admissible (eps1, eps2) pairs with eps1 + eps2 + 2*eps < 1."""
    room = 1.0 - 2 * eps
    if room <= 0:
        return []
    fracs = [(k + 0.5) / steps for k in range(steps)]
    out = []
    for f1, f2 in itertools.product(fracs, [0.0] + fracs):
        if f1 + f2 < 1.0:
            out.append((room * f1, room * f2))
    return out


def c_min_bounds(j: JointDistribution, eps, eps1=None, eps2=None) -> CminResult:
    """Lower bound plus the Lemma-style upper bound.

    With ``eps1``/``eps2`` omitted the upper bound is minimized over
    ``upper_split_grid(eps)``.
    """
    low = c_min_lower(j, eps)
    if eps1 is not None:
        upper = c_min_upper(j, eps, eps1, 0.0 if eps2 is None else eps2)
    else:
        grid = upper_split_grid(low.eps)
        upper = min((c_min_upper(j, low.eps, a, b) for a, b in grid), default=math.inf)
    return CminResult(low.lower_bits, upper, low.perturbed_joint, low.perturbation_mass, low.eps)


def c_ext_bounds(j: JointDistribution, eps, eps_prime) -> tuple[float, float]:
    """Bounds on the randomness two parties can extract without communicating.

    lower: c_min_lower at ``eps_prime`` minus 2*log2(1/(eps - eps_prime)),
    clamped at zero; with ``eps == eps_prime == 0`` the penalty is infinite
    and the lower bound is 0.
    upper: the smoothed common min-entropy at ``eps`` bounded by the best
    admissible split of ``c_min_upper`` (infinite when ``2*eps >= 1`` leaves
    no admissible split).
    """
    eps = check_epsilon(eps)
    eps_prime = check_epsilon(eps_prime, "eps_prime")
    if eps_prime > eps or (eps_prime == eps and eps > 0):
        raise InvalidEpsilonBudget("need eps_prime < eps")
    if eps == 0.0:
        lower = 0.0
    else:
        base = c_min_lower(j, eps_prime).lower_bits
        lower = max(base - 2 * math.log2(1.0 / (eps - eps_prime)), 0.0)
    upper = min((c_min_upper(j, eps, a, b) for a, b in upper_split_grid(eps)), default=math.inf)
    return lower, upper
