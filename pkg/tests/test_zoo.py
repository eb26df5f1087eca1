import json

import numpy as np
import pytest

from oneshot.errors import InvalidParameter
from oneshot.prob import Channel, JointDistribution, validate
from oneshot.zoo import (
    ERASURE,
    ChannelSpec,
    blocks,
    completely_noisy,
    equal,
    make_channel,
    make_joint,
    product,
    random_channel,
)


def test_channel_examples():
    assert np.array_equal(make_channel(ChannelSpec("identity", {"n": 3})).matrix, np.eye(3))
    assert np.array_equal(make_channel(ChannelSpec("bsc", {"p": 0.1})).matrix, [[0.9, 0.1], [0.1, 0.9]])
    w = make_channel(ChannelSpec("bec", {"p": 0.2}))
    assert w.shape == (2, 3) and w.y_labels[2] == ERASURE
    assert np.allclose(w.matrix[:, 2], [0.2, 0.2])
    z = make_channel(ChannelSpec("zchannel", {"p": 0.2}))
    assert np.allclose(z.matrix, [[1, 0], [0.2, 0.8]])


def test_joint_examples():
    assert np.array_equal(make_joint("equal", n=2).matrix, np.diag([0.5, 0.5]))
    assert np.allclose(make_joint("product", p=[0.5, 0.5], q=[0.5, 0.5]).matrix, 0.25)
    b = make_joint("blocks", masses=[0.5, 0.5], sizes=[(2, 2), (2, 2)])
    assert np.allclose(b.matrix[:2, :2], 0.125) and np.all(b.matrix[:2, 2:] == 0)


def test_invalid_parameters():
    for spec in (ChannelSpec("bsc", {"p": 1.5}), ChannelSpec("identity", {"n": 0}), ChannelSpec("warp", {})):
        with pytest.raises(InvalidParameter):
            make_channel(spec)
    with pytest.raises(InvalidParameter):
        blocks([0.5, 0.4], [(1, 1), (1, 1)])
    with pytest.raises(InvalidParameter):
        make_joint("nope")


def test_random_channels_are_reproducible():
    a, b = random_channel(4, 5, 9), random_channel(4, 5, 9)
    assert np.array_equal(a.matrix, b.matrix)
    assert not np.array_equal(a.matrix, random_channel(4, 5, 10).matrix)
    assert np.allclose(a.matrix.sum(axis=1), 1.0, atol=1e-12)


def test_generators_pass_validation():
    outs = [random_channel(3, 3, s) for s in range(20)]
    outs += [completely_noisy(3, 4), equal(5), product([0.2, 0.8], [1.0]), blocks([1.0], [(2, 3)])]
    for o in outs:
        validate(o)
        assert isinstance(o, (Channel, JointDistribution))


def test_file_backed_specs(tmp_path):
    doc = random_channel(2, 3, 1).to_dict()
    doc.pop("row_stochastic")
    path = tmp_path / "w.json"
    path.write_text(json.dumps(doc))
    w = make_channel(ChannelSpec("matrix", {"file": str(path)}))
    assert isinstance(w, Channel) and w.shape == (2, 3)
    j = equal(3).to_dict()
    path.write_text(json.dumps(j))
    assert isinstance(make_joint("custom", file=str(path)), JointDistribution)
