import math

import numpy as np
import pytest
from hypothesis import given, settings

from oneshot.oracle import exact_smooth_entropy, lp_smooth_min
from oneshot.prob import JointDistribution, ProbVector, joint_from_channel, shannon_entropy
from oneshot.smooth import (
    cap_level,
    h_max,
    h_max_cond,
    h_min,
    h_min_cond,
    smooth_h_max,
    smooth_h_max_cond,
    smooth_h_min,
    smooth_h_min_cond,
    witness_value,
)
from oneshot.verify import chain_rule_suite
from oneshot.zoo import bsc, equal, product

from conftest import epsilons, joints, prob_vectors, random_joint, random_prob

BIT = ProbVector.uniform(["0", "1"])
BSC_JOINT = joint_from_channel(BIT, bsc(0.1))


def test_nonsmooth_examples():
    u8 = ProbVector.uniform(range(8))
    assert h_min(u8) == 3.0 and h_max(u8) == 3.0
    assert h_min(ProbVector.from_array([0.5, 0.3, 0.2])) == 1.0
    assert h_min(ProbVector.point("ab", "b")) == 0.0
    assert h_max(ProbVector.point("ab", "b")) == 0.0
    assert h_max(ProbVector.from_array([0.9, 0.05, 0.05])) == pytest.approx(math.log2(3))


def test_conditional_nonsmooth_examples():
    assert h_min_cond(equal(2)) == 0.0 and h_max_cond(equal(2)) == 0.0
    prod = product([0.5, 0.5], [0.5, 0.5])
    assert h_min_cond(prod) == 1.0 and h_max_cond(prod) == 1.0
    assert h_max_cond(BSC_JOINT) == 1.0
    assert h_min_cond(BSC_JOINT) == pytest.approx(-math.log2(0.9))


def _check_derived(obj, eps, which, fast, expected):
    # oracle first, then the fast kernel
    assert exact_smooth_entropy(obj, eps, which) == pytest.approx(expected, abs=1e-9)
    assert fast(obj, eps).value == pytest.approx(expected, abs=1e-9)


def test_smooth_min_examples():
    p = ProbVector.from_array([0.5, 0.25, 0.25])
    assert smooth_h_min(p, 0).value == 1.0
    _check_derived(p, 0.25, "min", smooth_h_min, 2.0)
    assert lp_smooth_min(p, 0.25) == pytest.approx(2.0, abs=1e-7)
    _check_derived(ProbVector.uniform(range(4)), 0.5, "min", smooth_h_min, 3.0)


def test_smooth_max_examples():
    p = ProbVector.from_array([0.9, 0.05, 0.05])
    assert smooth_h_max(p, 0).value == pytest.approx(math.log2(3))
    _check_derived(p, 0.05, "max", smooth_h_max, 1.0)
    _check_derived(p, 0.1, "max", smooth_h_max, 0.0)


def test_smooth_conditional_examples():
    assert smooth_h_min_cond(equal(2), 0).value == 0.0
    assert smooth_h_min_cond(product([0.5, 0.5], [0.5, 0.5]), 0).value == 1.0
    _check_derived(BSC_JOINT, 0.1, "min", smooth_h_min_cond, -math.log2(0.8))
    assert smooth_h_max_cond(equal(2), 0).value == 0.0
    assert smooth_h_max_cond(BSC_JOINT, 0).value == 1.0
    _check_derived(BSC_JOINT, 0.2, "max", smooth_h_max_cond, 0.0)


def test_cap_level_is_exact_breakpoint():
    v = np.array([0.5, 0.25, 0.25])
    c = cap_level(v, np.ones(3), 0.1)
    assert np.maximum(v - c, 0).sum() == pytest.approx(0.1, abs=1e-15)
    assert cap_level(v, np.ones(3), 0.0) == 0.5


@settings(max_examples=300, deadline=None)
@given(prob_vectors(), epsilons)
def test_report_invariants_unconditional(p, eps):
    for fn, kind in ((smooth_h_min, "min"), (smooth_h_max, "max")):
        rep = fn(p, eps)
        assert rep.removed_mass <= eps + 1e-12
        assert np.all(rep.witness.mass <= p.mass + 1e-15)
        assert witness_value(rep, kind) == pytest.approx(rep.value, abs=1e-9)


@settings(max_examples=300, deadline=None)
@given(joints(), epsilons)
def test_report_invariants_conditional(j, eps):
    py = j.matrix.sum(axis=0)
    for fn, kind in ((smooth_h_min_cond, "min"), (smooth_h_max_cond, "max")):
        rep = fn(j, eps)
        assert rep.removed_mass <= eps + 1e-12
        for y, sub in rep.witness.items():
            col = j.y_labels.index(y)
            assert np.all(sub.mass * py[col] <= j.matrix[:, col] + 1e-15)
        assert witness_value(rep, kind) == pytest.approx(rep.value, abs=1e-9)


@settings(max_examples=300, deadline=None)
@given(prob_vectors())
def test_ordering_and_zero_eps(p):
    assert h_min(p) <= shannon_entropy(p) + 1e-12
    assert shannon_entropy(p) <= h_max(p) + 1e-12
    assert smooth_h_min(p, 0).value == h_min(p)
    assert smooth_h_max(p, 0).value == h_max(p)


@settings(max_examples=200, deadline=None)
@given(joints())
def test_conditional_zero_eps(j):
    assert smooth_h_min_cond(j, 0).value == h_min_cond(j)
    assert smooth_h_max_cond(j, 0).value == h_max_cond(j)


def test_monotonicity(rng):
    for _ in range(1000):
        j = random_joint(rng, rng.integers(1, 5), rng.integers(1, 5))
        p = j.flatten()
        e1, e2 = sorted(rng.uniform(0, 0.95, 2))
        assert smooth_h_min(p, e1).value <= smooth_h_min(p, e2).value + 1e-12
        assert smooth_h_max(p, e1).value >= smooth_h_max(p, e2).value - 1e-12
        assert smooth_h_min_cond(j, e1).value <= smooth_h_min_cond(j, e2).value + 1e-12
        assert smooth_h_max_cond(j, e1).value >= smooth_h_max_cond(j, e2).value - 1e-12


def test_oracle_equivalence_small(rng):
    for _ in range(150):
        j = random_joint(rng, rng.integers(1, 4), rng.integers(1, 4), sparsity=0.2)
        p = random_prob(rng, int(rng.integers(1, 10)))
        eps = float(rng.uniform(0, 0.9))
        assert smooth_h_min(p, eps).value == pytest.approx(exact_smooth_entropy(p, eps, "min"), abs=1e-9)
        assert smooth_h_max(p, eps).value == pytest.approx(exact_smooth_entropy(p, eps, "max"), abs=1e-9)
        assert smooth_h_min_cond(j, eps).value == pytest.approx(exact_smooth_entropy(j, eps, "min"), abs=1e-9)
        assert smooth_h_max_cond(j, eps).value == pytest.approx(exact_smooth_entropy(j, eps, "max"), abs=1e-9)


def test_event_min_never_below_coupling(rng):
    # the coupling optimum stays normalized, so it cannot beat removing mass
    for _ in range(40):
        j = random_joint(rng, rng.integers(1, 3), rng.integers(1, 3), sparsity=0.1)
        eps = float(rng.uniform(0, 0.5))
        event = exact_smooth_entropy(j, eps, "min")
        coupling = exact_smooth_entropy(j, eps, "min", formulation="coupling")
        assert coupling <= event + 1e-6  # LP feasibility tolerance


def test_formulations_differ_on_same_alphabet():
    # a normalized perturbation cannot push the largest atom below 1/|X|
    p = ProbVector.from_array([0.5, 0.25, 0.25])
    assert exact_smooth_entropy(p, 0.25, "min") == pytest.approx(2.0, abs=1e-9)
    assert exact_smooth_entropy(p, 0.25, "min", formulation="coupling") == pytest.approx(math.log2(3), abs=1e-6)
    assert exact_smooth_entropy(p, 0.05, "max", formulation="coupling") == exact_smooth_entropy(p, 0.05, "max")


def test_chain_rules_small_suite():
    res = chain_rule_suite(n_joints=150, n_tuples=5, seed=7)
    assert res.violations == 0, res.details


@settings(max_examples=200, deadline=None)
@given(joints(), epsilons, epsilons)
def test_chain_rule_min_upper_property(j, eps, eps_p):
    if eps + eps_p >= 1:
        return
    flat, py = j.flatten(), ProbVector(j.y_labels, j.matrix.sum(axis=0))
    lhs = smooth_h_min_cond(j, eps).value
    rhs = smooth_h_min(flat, eps + eps_p).value - smooth_h_min(py, eps_p).value
    assert lhs <= rhs + 1e-9
