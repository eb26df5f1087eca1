"""Small shipped instances used by ``verify`` and the acceptance tests."""

from __future__ import annotations

import numpy as np

from .prob import JointDistribution, ProbVector, joint_from_channel
from .zoo import bec, blocks, bsc, equal, identity, product, random_channel, zchannel


def _sparse_joint(nx: int, ny: int, seed: int, density: float = 0.6) -> JointDistribution:
    rng = np.random.default_rng(seed)
    while True:
        m = rng.dirichlet(np.ones(nx * ny)).reshape(nx, ny)
        m[rng.random((nx, ny)) > density] = 0.0
        if m.sum() > 0:
            return JointDistribution.from_array(m / m.sum())


def _through(w) -> JointDistribution:
    return joint_from_channel(ProbVector.uniform(w.x_labels), w)


def tiny_joints() -> list[tuple[str, JointDistribution]]:
    """Joints with |X|, |Y| <= 4 and at most 12 support atoms."""
    near_equal = np.full((3, 3), 0.02) + np.eye(3) * (1 / 3 - 0.06)
    return [
        ("equal2", equal(2)),
        ("equal3", equal(3)),
        ("equal4", equal(4)),
        ("product_uniform2", product([0.5, 0.5], [0.5, 0.5])),
        ("product_skew", product([0.7, 0.3], [0.4, 0.6])),
        ("blocks_60_40", blocks([0.6, 0.4], [(2, 2), (2, 2)])),
        ("blocks_50_25_25", blocks([0.5, 0.25, 0.25], [(2, 2), (1, 1), (1, 1)])),
        ("bsc_0.1", _through(bsc(0.1))),
        ("bec_0.2", _through(bec(0.2))),
        ("z_0.2", _through(zchannel(0.2))),
        ("near_equal3", JointDistribution.from_array(near_equal / near_equal.sum())),
        ("sparse_3x3", _sparse_joint(3, 3, 7)),
        ("sparse_4x3", _sparse_joint(4, 3, 11, density=0.5)),
        ("sparse_4x4", _sparse_joint(4, 4, 5, density=0.45)),
    ]


def tiny_channels(n_random: int = 20) -> list[tuple[str, object]]:
    named = [
        ("identity2", identity(2)),
        ("identity3", identity(3)),
        ("identity4", identity(4)),
        ("bsc_0.1", bsc(0.1)),
        ("bsc_0.3", bsc(0.3)),
        ("bec_0.1", bec(0.1)),
        ("bec_0.2", bec(0.2)),
        ("z_0.2", zchannel(0.2)),
    ]
    named += [(f"random3x3_{s}", random_channel(3, 3, s)) for s in range(n_random)]
    return named


def task_joints() -> list[tuple[str, JointDistribution]]:
    """Tiny corpus plus larger joints (alphabets up to 64) where key lengths are nonzero."""

    def trivial_side(p) -> JointDistribution:
        return JointDistribution(p.labels, ["*"], np.asarray(p.mass)[:, None])

    erased = np.zeros((8, 4))
    for x in range(8):
        erased[x, x // 2] = 1 / 8
    rng = np.random.default_rng(2024)
    skew = rng.dirichlet(np.full(64, 5.0))
    return tiny_joints() + [
        ("uniform16", trivial_side(ProbVector.uniform(range(16)))),
        ("uniform64", trivial_side(ProbVector.uniform(range(64)))),
        ("skewed64", trivial_side(ProbVector.from_array(skew / skew.sum()))),
        ("erased_bit8", JointDistribution.from_array(erased)),
        ("noisy_16x4", _sparse_joint(16, 4, 3, density=0.9)),
        ("noisy_32x2", _sparse_joint(32, 2, 4, density=0.95)),
    ]
