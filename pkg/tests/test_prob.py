import json
import math

import numpy as np
import pytest

from oneshot.errors import (
    DuplicateLabel,
    InvalidEpsilon,
    LabelMismatch,
    NegativeMass,
    NotNormalized,
    ZeroConditioningEvent,
)
from oneshot.prob import (
    Channel,
    JointDistribution,
    ProbVector,
    SubProbVector,
    binary_entropy,
    check_epsilon,
    conditional_x_given_y,
    from_dict,
    joint_from_channel,
    marginal_x,
    marginal_y,
    mutual_information,
    shannon_entropy,
    to_csv,
)
from oneshot.zoo import bsc, identity, product

from conftest import random_joint


def test_validate_examples():
    ProbVector(["a", "b"], [0.5, 0.5])
    with pytest.raises(NotNormalized):
        ProbVector(["a", "b"], [0.5, 0.6])
    with pytest.raises(NegativeMass):
        ProbVector(["a", "b"], [1.2, -0.2])
    with pytest.raises(DuplicateLabel):
        ProbVector(["a", "a"], [0.5, 0.5])


def test_subprob_allows_deficit_but_not_excess():
    assert SubProbVector(["a", "b"], [0.2, 0.3]).total == pytest.approx(0.5)
    with pytest.raises(NotNormalized):
        SubProbVector(["a", "b"], [0.6, 0.6])


def test_channel_rows_must_be_stochastic():
    with pytest.raises(NotNormalized):
        Channel(["0", "1"], ["0", "1"], [[0.5, 0.5], [0.5, 0.4]])


def test_values_are_immutable():
    p = ProbVector.uniform("ab")
    with pytest.raises(ValueError):
        p.mass[0] = 1.0


def test_epsilon_range():
    assert check_epsilon(0.0) == 0.0
    for bad in (-0.1, 1.0, float("nan")):
        with pytest.raises(InvalidEpsilon):
            check_epsilon(bad)


def test_joint_from_channel_examples():
    bit = ProbVector.uniform(["0", "1"])
    assert np.allclose(joint_from_channel(bit, identity(2)).matrix, np.diag([0.5, 0.5]))
    assert np.allclose(joint_from_channel(bit, bsc(0.1)).matrix, [[0.45, 0.05], [0.05, 0.45]])
    w = Channel(["0", "1"], ["a", "b", "c"], [[0.2, 0.3, 0.5], [1, 0, 0]])
    j = joint_from_channel(ProbVector.point(["0", "1"], "0"), w)
    assert np.allclose(j.matrix, [[0.2, 0.3, 0.5], [0, 0, 0]])
    with pytest.raises(LabelMismatch):
        joint_from_channel(ProbVector.uniform(["a", "b"]), identity(2))


def test_marginals():
    diag = JointDistribution.from_array(np.diag([0.5, 0.5]))
    assert np.allclose(marginal_x(diag).mass, [0.5, 0.5])
    assert np.allclose(marginal_y(diag).mass, [0.5, 0.5])
    j = product([0.7, 0.3], [0.2, 0.5, 0.3])
    assert np.allclose(marginal_x(j).mass, [0.7, 0.3])
    assert np.allclose(marginal_y(j).mass, [0.2, 0.5, 0.3])


def test_conditionals():
    diag = JointDistribution.from_array(np.diag([0.5, 0.5]))
    assert np.allclose(conditional_x_given_y(diag, "0").mass, [1, 0])
    j = product([0.7, 0.3], [0.4, 0.6])
    assert np.allclose(conditional_x_given_y(j, "1").mass, [0.7, 0.3])
    b = JointDistribution.from_array([[0.45, 0.05], [0.05, 0.45]])
    assert np.allclose(conditional_x_given_y(b, "0").mass, [0.9, 0.1])
    z = JointDistribution.from_array([[0.5, 0.0], [0.5, 0.0]])
    with pytest.raises(ZeroConditioningEvent):
        conditional_x_given_y(z, "1")


def test_shannon_examples():
    assert shannon_entropy(ProbVector.uniform(range(8))) == pytest.approx(3.0)
    assert shannon_entropy(ProbVector.point("ab", "a")) == 0.0
    # independent evaluation of -sum p log p
    want = -(0.89 * math.log2(0.89) + 0.11 * math.log2(0.11))
    assert shannon_entropy(ProbVector.from_array([0.89, 0.11])) == pytest.approx(want, abs=1e-12)
    assert want == pytest.approx(0.4999, abs=1e-4)


def test_mutual_information_examples():
    assert mutual_information(product([0.3, 0.7], [0.5, 0.5])) == pytest.approx(0.0, abs=1e-12)
    assert mutual_information(JointDistribution.from_array(np.diag([0.5, 0.5]))) == pytest.approx(1.0)
    j = joint_from_channel(ProbVector.uniform(["0", "1"]), bsc(0.11))
    want = 1 - binary_entropy(0.11)
    assert mutual_information(j) == pytest.approx(want, abs=1e-12)
    assert want == pytest.approx(0.5001, abs=1e-4)


def test_law_of_total_probability(rng):
    for _ in range(200):
        j = random_joint(rng, rng.integers(1, 6), rng.integers(1, 6))
        py = marginal_y(j)
        acc = np.zeros(j.shape[0])
        for y, m in zip(j.y_labels, py.mass):
            if m > 0:
                acc += m * conditional_x_given_y(j, y).mass
        assert np.allclose(acc, marginal_x(j).mass, atol=1e-12)


def test_mutual_information_nonnegative(rng):
    for _ in range(1000):
        j = random_joint(rng, rng.integers(1, 6), rng.integers(1, 6))
        assert mutual_information(j) >= 0.0


def test_channel_roundtrip_marginal(rng):
    for _ in range(100):
        w = Channel(range(4), range(3), rng.dirichlet(np.ones(3), size=4))
        p = ProbVector.from_array(rng.dirichlet(np.ones(4)))
        assert np.allclose(marginal_x(joint_from_channel(p, w)).mass, p.mass, atol=1e-12)


def test_json_roundtrip():
    for obj in (ProbVector.from_array([0.25, 0.75]), product([0.5, 0.5], [0.1, 0.9]), bsc(0.2)):
        back = from_dict(json.loads(json.dumps(obj.to_dict())))
        assert type(back) is type(obj)
        assert np.array_equal(getattr(back, "matrix", getattr(back, "mass", None)),
                              getattr(obj, "matrix", getattr(obj, "mass", None)))
    assert bsc(0.2).to_dict()["row_stochastic"] is True


def test_csv_has_header_row_and_column():
    lines = to_csv(bsc(0.25)).splitlines()
    assert lines[0] == ",0,1"
    assert lines[1].split(",")[0] == "0"
