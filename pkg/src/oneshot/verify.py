"""Property suites over seeded random instances and the shipped tiny corpus.

Each suite returns a :class:`SuiteResult`; ``run_all`` bundles them into a
report whose serialization is byte-stable (no timings, fixed ordering,
floats rounded to 12 significant digits).
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .capacity import (
    asymptotic_capacity,
    build_code,
    capacity_lower,
    capacity_upper,
    maximize_over_subsets,
)
from .common import c_ext_bounds, c_min_lower, c_min_upper, upper_split_grid
from .corpus import task_joints, tiny_channels, tiny_joints
from .oracle import exact_c_ext, exact_c_min, exact_one_shot_capacity, exact_smooth_entropy
from .prob import JointDistribution, ProbVector, binary_entropy, joint_from_channel
from .smooth import (
    hmax_cond_smooth_value,
    hmax_smooth_value,
    hmin_cond_smooth_value,
    hmin_smooth_value,
)
from .tasks import binning_errors, extraction_errors
from .zoo import bec, bsc, identity

TOL = 1e-9
MAX_DETAILS = 5


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    violations: int = 0
    worst_gap: float = 0.0
    details: list = field(default_factory=list)

    def check(self, ok_gap: float, **info) -> None:
        """Record one comparison; ``ok_gap`` > TOL counts as a violation."""
        self.checked += 1
        if ok_gap > self.worst_gap:
            self.worst_gap = ok_gap
        if ok_gap > TOL:
            self.violations += 1
            if len(self.details) < MAX_DETAILS:
                self.details.append({"gap": ok_gap, **info})

    @property
    def passed(self) -> bool:
        return self.violations == 0 and self.checked > 0

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "violations": self.violations,
            "worst_gap": self.worst_gap,
            "details": self.details,
        }


def threads() -> int:
    """Worker count from ONESHOT_THREADS (default 1)."""
    try:
        return max(1, int(os.environ.get("ONESHOT_THREADS", "1")))
    except ValueError:
        return 1


def _pmap(fn, items) -> list:
    items = list(items)
    n = threads()
    if n == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _merge(name: str, parts) -> SuiteResult:
    out = SuiteResult(name)
    for part in parts:
        out.checked += part.checked
        out.violations += part.violations
        out.worst_gap = max(out.worst_gap, part.worst_gap)
        out.details.extend(part.details[: MAX_DETAILS - len(out.details)])
    return out


def random_joint(rng: np.random.Generator, max_x: int = 6, max_y: int = 6, max_atoms=None) -> np.ndarray:
    """Dirichlet joint with random shape and random zero pattern."""
    while True:
        nx, ny = rng.integers(1, max_x + 1), rng.integers(1, max_y + 1)
        m = rng.dirichlet(np.full(nx * ny, rng.choice([0.3, 1.0, 3.0])))
        m[rng.random(nx * ny) < rng.uniform(0.0, 0.6)] = 0.0
        if max_atoms is not None:
            nz = np.flatnonzero(m)
            if nz.size > max_atoms:
                m[rng.choice(nz, nz.size - max_atoms, replace=False)] = 0.0
        if m.sum() > 0:
            return (m / m.sum()).reshape(nx, ny)


def random_eps_tuple(rng: np.random.Generator) -> dict:
    """eps in (0, 1), eps' with eps + eps' < 1, and a split eps1 + eps2 < eps."""
    eps = float(rng.uniform(0.01, 0.95))
    eps_p = 0.0 if rng.random() < 0.2 else float(rng.uniform(0.0, 1.0 - eps))
    w = rng.dirichlet([1.0, 1.0, 1.0])
    if rng.random() < 0.2:
        w[rng.integers(0, 2)] = 0.0
        w /= w.sum()
    return {"eps": eps, "eps_p": eps_p, "eps1": eps * w[0], "eps2": eps * w[1]}


# -- 1. chain rules -------------------------------------------------------------


def _chain_rule_one(args) -> SuiteResult:
    seed, n_tuples = args
    rng = np.random.default_rng([seed, 1])
    mat = random_joint(rng)
    py = mat.sum(axis=0)
    flat = mat.ravel()
    res = SuiteResult("chain_rules")
    for _ in range(n_tuples):
        t = random_eps_tuple(rng)
        e, ep, e1, e2 = t["eps"], t["eps_p"], t["eps1"], t["eps2"]
        pen = math.log2(1.0 / (e - e1 - e2))
        hmax_c = hmax_cond_smooth_value(mat, e)
        hmin_c = hmin_cond_smooth_value(mat, e)
        res.check(
            hmax_smooth_value(flat, min(e + ep, 1.0)) - hmax_smooth_value(py, ep) - hmax_c,
            joint_seed=seed, rule="max_lower", **t,
        )
        res.check(
            hmax_c - (hmax_smooth_value(flat, e1) - hmin_smooth_value(py, e2) + pen),
            joint_seed=seed, rule="max_upper", **t,
        )
        res.check(
            hmin_smooth_value(flat, e1) - hmax_smooth_value(py, e2) - pen - hmin_c,
            joint_seed=seed, rule="min_lower", **t,
        )
        res.check(
            hmin_c - (hmin_smooth_value(flat, min(e + ep, 1.0)) - hmin_smooth_value(py, ep)),
            joint_seed=seed, rule="min_upper", **t,
        )
    return res


def chain_rule_suite(n_joints: int = 1000, n_tuples: int = 10, seed: int = 0) -> SuiteResult:
    """The four chain-rule inequalities linking joint, marginal and conditional smooth entropies."""
    parts = _pmap(_chain_rule_one, [(seed * 1_000_003 + i, n_tuples) for i in range(n_joints)])
    return _merge("chain_rules", parts)


# -- 2. fast kernels against exhaustive oracles ---------------------------------


def _oracle_one(seed: int) -> SuiteResult:
    rng = np.random.default_rng([seed, 2])
    res = SuiteResult("smooth_oracle")
    if rng.random() < 0.4:
        mat = random_joint(rng, max_x=12, max_y=1, max_atoms=12)
        obj = ProbVector.from_array(mat.ravel())
        kernels = (lambda e: hmin_smooth_value(obj.mass, e), lambda e: hmax_smooth_value(obj.mass, e))
    else:
        mat = random_joint(rng, max_x=4, max_y=4, max_atoms=12)
        obj = JointDistribution.from_array(mat)
        kernels = (lambda e: hmin_cond_smooth_value(mat, e), lambda e: hmax_cond_smooth_value(mat, e))
    for eps in (0.0, float(rng.uniform(0, 0.3)), float(rng.uniform(0, 0.95))):
        for which, fast in zip(("min", "max"), kernels):
            want = exact_smooth_entropy(obj, eps, which)
            got = fast(eps)
            res.check(abs(got - want), seed=seed, which=which, eps=eps, fast=got, oracle=want)
    return res


def smooth_oracle_suite(n: int = 500, seed: int = 0) -> SuiteResult:
    """Water-filling and truncation values against subset-enumeration oracles."""
    parts = _pmap(_oracle_one, [seed * 1_000_003 + i for i in range(n)])
    return _merge("smooth_oracle", parts)


# -- 3. common randomness sandwich ----------------------------------------------


def _ext_one(item) -> SuiteResult:
    name, j = item
    res = SuiteResult("c_ext_sandwich")
    for eps in (0.0, 0.1, 0.25):
        low, up = c_ext_bounds(j, eps, eps / 2)
        exact = exact_c_ext(j, eps)
        res.check(max(low - exact, exact - up), joint=name, eps=eps, lower=low, exact=exact, upper=up)
    return res


def c_ext_sandwich_suite(corpus=None) -> SuiteResult:
    corpus = tiny_joints() if corpus is None else corpus
    return _merge("c_ext_sandwich", _pmap(_ext_one, corpus))


def _cmin_one(item) -> SuiteResult:
    name, j = item
    res = SuiteResult("c_min_sandwich")
    for eps in (0.0, 0.05, 0.1, 0.25):
        exact = exact_c_min(j, eps)
        low = c_min_lower(j, eps).lower_bits
        res.check(low - exact, joint=name, eps=eps, side="lower", bound=low, exact=exact)
        for e1, e2 in upper_split_grid(eps, steps=4):
            up = c_min_upper(j, eps, e1, e2)
            res.check(exact - up, joint=name, eps=eps, eps1=e1, eps2=e2, side="upper", bound=up, exact=exact)
    return res


def c_min_sandwich_suite(corpus=None) -> SuiteResult:
    corpus = tiny_joints() if corpus is None else corpus
    return _merge("c_min_sandwich", _pmap(_cmin_one, corpus))


def _subset_joint(w, subset) -> JointDistribution:
    mass = np.zeros(w.shape[0])
    mass[list(subset)] = 1.0 / len(subset)
    return joint_from_channel(ProbVector(w.x_labels, mass), w)


LEMMA4_SPLITS = ((0.05, 0.05, 0.1), (0.0, 0.1, 0.1), (0.1, 0.0, 0.2), (0.02, 0.03, 0.25))


def _lemma4_one(item) -> SuiteResult:
    name, w = item
    res = SuiteResult("c_min_input_bound")
    for e1, e2, e3 in LEMMA4_SPLITS:
        joints = {}

        def joint(s):
            if s not in joints:
                joints[s] = _subset_joint(w, s)
            return joints[s]

        lhs = maximize_over_subsets(w.shape[0], lambda s: exact_c_min(joint(s), e1 + e2 + e3))[0]
        gap = maximize_over_subsets(
            w.shape[0],
            lambda s: hmin_smooth_value(joint(s).matrix.sum(axis=1), e1)
            - hmax_cond_smooth_value(joint(s).matrix, e2),
        )[0]
        rhs = gap - math.log2(1.0 / e3)
        res.check(rhs - lhs, channel=name, eps1=e1, eps2=e2, eps3=e3, lhs=lhs, rhs=rhs)
    return res


def c_min_input_bound_suite(channels=None) -> SuiteResult:
    """max_P C_min^{e1+e2+e3} >= max_P [H_min^{e1}(X) - H_max^{e2}(X|Y)] - log2(1/e3)."""
    channels = tiny_channels() if channels is None else channels
    return _merge("c_min_input_bound", _pmap(_lemma4_one, channels))


# -- 5. capacity sandwich -------------------------------------------------------

CAPACITY_EPS = (0.05, 0.1, 0.2)
LOWER_FRACTIONS = ((0.0, 0.0), (0.1, 0.1), (0.25, 0.25), (0.4, 0.1), (0.1, 0.4), (0.0, 0.5), (0.5, 0.0))


def _capacity_one(item) -> SuiteResult:
    name, w = item
    res = SuiteResult("capacity_sandwich")
    for eps in CAPACITY_EPS:
        exact = exact_one_shot_capacity(w, eps)
        for fp, fpp in LOWER_FRACTIONS:
            low = capacity_lower(w, eps, eps * fp, eps * fpp).lower_bits
            res.check(low - exact, channel=name, eps=eps, eps_p=eps * fp, eps_pp=eps * fpp, side="lower",
                      bound=low, exact=exact)
        for e1, e2 in upper_split_grid(eps, steps=4):
            up = capacity_upper(w, eps, e1, e2).upper_bits
            res.check(exact - up, channel=name, eps=eps, eps1=e1, eps2=e2, side="upper", bound=up, exact=exact)
    return res


def capacity_sandwich_suite(channels=None) -> SuiteResult:
    channels = tiny_channels() if channels is None else channels
    return _merge("capacity_sandwich", _pmap(_capacity_one, channels))


def _cmin_capacity_one(item) -> SuiteResult:
    name, w = item
    res = SuiteResult("capacity_vs_c_min")
    joints = {}

    def cmin(s, e):
        if s not in joints:
            joints[s] = _subset_joint(w, s)
        return exact_c_min(joints[s], e)

    for eps in CAPACITY_EPS:
        exact = exact_one_shot_capacity(w, eps)
        up = maximize_over_subsets(w.shape[0], lambda s: cmin(s, eps))[0]
        res.check(exact - up, channel=name, eps=eps, side="upper", bound=up, exact=exact)
        for frac in (0.25, 0.5, 0.75):
            ep = eps * frac
            low = maximize_over_subsets(w.shape[0], lambda s: cmin(s, ep))[0] - math.log2(eps / (eps - ep))
            res.check(low - exact, channel=name, eps=eps, eps_p=ep, side="lower", bound=low, exact=exact)
    return res


def capacity_c_min_suite(channels=None) -> SuiteResult:
    """Capacity against the exact C_min characterization over uniform-subset inputs."""
    channels = tiny_channels() if channels is None else channels
    return _merge("capacity_vs_c_min", _pmap(_cmin_capacity_one, channels))


# -- 6. closed forms ------------------------------------------------------------


def closed_form_suite() -> SuiteResult:
    res = SuiteResult("closed_forms")
    for n in (2, 3, 4):
        for eps in (0.0, 0.1, 0.25, 0.4, 0.49):
            got = exact_one_shot_capacity(identity(n), eps)
            res.check(abs(got - math.log2(n)), channel=f"identity{n}", eps=eps, got=got)
    for p in (0.1, 0.2, 0.3):
        for eps in sorted({p, 0.3, 0.45, 0.49}):
            if p <= eps < 0.5:
                got = exact_one_shot_capacity(bec(p), eps)
                res.check(abs(got - 1.0), channel=f"bec{p}", eps=eps, got=got)
    got = asymptotic_capacity(bsc(0.11), tol=1e-10)
    want = 1.0 - binary_entropy(0.11)
    # this anchor is held to 1e-6 rather than TOL
    res.check(abs(got - want) - 1e-6, channel="bsc0.11", got=got, want=want)
    return res


# -- 7. constructive coding -----------------------------------------------------


def coding_suite(n_seeds: int = 100, min_success: int = 95) -> SuiteResult:
    """build_code on identity(16): exact max error <= eps and size at the Markov floor."""
    from .capacity import evaluate_code

    w = identity(16)
    p = ProbVector.uniform(w.x_labels)
    eps1, eps2, eps3, eps = 0.0, 0.0, 0.25, 0.5
    ok = 0
    failures = []
    for seed in range(n_seeds):
        code = build_code(w, p, eps1, eps2, eps3, eps, seed)
        worst, _ = evaluate_code(w, code)
        floor = code.meta["markov_floor"]
        if worst <= eps and len(code) >= floor - TOL:
            ok += 1
        elif len(failures) < MAX_DETAILS:
            failures.append({"seed": seed, "size": len(code), "floor": floor, "max_error": worst})
    res = SuiteResult("constructive_coding", checked=n_seeds)
    res.details = failures
    if ok < min_success:
        res.violations = min_success - ok
        res.worst_gap = float(min_success - ok)
    return res


# -- 8. operational extraction and binning --------------------------------------

TASK_EPS = ((0.1, 0.025), (0.1, 0.05), (0.25, 0.0625), (0.25, 0.125), (0.5, 0.125), (0.5, 0.25))


def _task_one(item) -> SuiteResult:
    name, j = item
    res = SuiteResult("operational")
    n = j.shape[0]
    for eps, ep in TASK_EPS:
        pen = math.log2(1.0 / (eps - ep))
        ell = max(math.floor(hmin_cond_smooth_value(j.matrix, ep) - 2 * pen + 1e-12), 0)
        ell = min(ell, max(math.floor(math.log2(2 * n)), 0))
        err = float(extraction_errors(j, ell).mean())
        res.check(err - eps, joint=name, task="extract", eps=eps, eps_p=ep, ell=ell, error=err)
        m = max(math.ceil(hmax_cond_smooth_value(j.matrix, ep) + pen - 1e-12), 0)
        err = float(binning_errors(j, m).mean())
        res.check(err - eps, joint=name, task="compress", eps=eps, eps_p=ep, bins_bits=m, error=err)
    return res


def operational_suite(corpus=None) -> SuiteResult:
    corpus = task_joints() if corpus is None else corpus
    return _merge("operational", _pmap(_task_one, corpus))


# -- bundle ---------------------------------------------------------------------


def run_all(tiny: bool = False) -> dict:
    """Every suite; ``tiny`` shrinks the random suites and the random-channel set."""
    channels = tiny_channels(n_random=4 if tiny else 20)
    suites = [
        chain_rule_suite(n_joints=100 if tiny else 1000),
        smooth_oracle_suite(n=60 if tiny else 500),
        c_ext_sandwich_suite(),
        c_min_sandwich_suite(),
        c_min_input_bound_suite(channels),
        capacity_sandwich_suite(channels),
        capacity_c_min_suite(channels),
        closed_form_suite(),
        coding_suite(),
        operational_suite(),
    ]
    return {
        "version": __version__,
        "tiny": tiny,
        "passed": all(s.passed for s in suites),
        "suites": [s.to_dict() for s in suites],
    }


EXACT_KEYS = ("mass", "matrix")


def round_floats(obj, digits: int = 12):
    """Recursively round floats to ``digits`` significant digits.

    Probability arrays (under ``mass`` or ``matrix``) are left at full
    precision so that written distributions validate again when read back.
    """
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return str(x)
        return float(f"{x:.{digits}g}")
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): v if k in EXACT_KEYS else round_floats(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v, digits) for v in obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(round_floats(obj), sort_keys=True, indent=2, ensure_ascii=False)
