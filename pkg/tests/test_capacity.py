import math

import numpy as np
import pytest

from oneshot.capacity import (
    Code,
    asymptotic_capacity,
    build_code,
    capacity_bounds,
    capacity_lower,
    capacity_upper,
    cmin_maximize,
    evaluate_code,
)
from oneshot.errors import EmptyCode, InvalidEpsilonBudget, UnknownSymbol
from oneshot.oracle import exact_c_min, exact_one_shot_capacity
from oneshot.prob import ProbVector, binary_entropy, joint_from_channel
from oneshot.verify import capacity_c_min_suite, capacity_sandwich_suite, coding_suite
from oneshot.zoo import ERASURE, bec, bsc, completely_noisy, identity, random_channel, zchannel


def test_evaluate_code_examples():
    w = identity(4)
    full = Code(w.x_labels, {y: i for i, y in enumerate(w.y_labels)})
    assert evaluate_code(w, full) == (0.0, 0.0)
    assert evaluate_code(bsc(0.3), Code(["0", "1"], {"0": 0, "1": 1})) == pytest.approx((0.3, 0.3))
    code = Code(["0", "1"], {"0": 0, "1": 1, ERASURE: 0})
    assert evaluate_code(bec(0.2), code) == pytest.approx((0.2, 0.1))


def test_evaluate_code_rejects_unknown_symbols():
    with pytest.raises(UnknownSymbol):
        evaluate_code(bsc(0.1), Code(["0", "7"], {"0": 0, "1": 1}))
    with pytest.raises(UnknownSymbol):
        evaluate_code(bsc(0.1), Code(["0", "1"], {"z": 0}))


def test_code_serialization():
    code = Code(["0", "1"], {"0": 0, "1": 1})
    assert code.to_dict() == {"codebook": ["0", "1"], "decoder": {"0": 0, "1": 1}}
    with pytest.raises(ValueError):
        Code(["0", "0"], {})


def test_capacity_lower_examples():
    assert capacity_lower(identity(8), 0.2, 0.05, 0.05).lower_bits == 0.0
    # identity on 1024 inputs: H_min^{0.05}(uniform) = -log2(0.95/1024), H_max(X|Y) = 0
    want = -math.log2(0.95 / 1024) - math.log2(4 * 0.2 / 0.1**2)
    got = capacity_lower(identity(2**10), 0.2, 0.05, 0.05)
    assert got.lower_bits == pytest.approx(want, abs=1e-9)
    assert want == pytest.approx(3.752, abs=1e-3)
    assert got.input_search == "local-search-uniform-subsets"
    for eps, a, b in ((0.2, 0.05, 0.05), (0.4, 0.0, 0.1)):
        assert capacity_lower(completely_noisy(3), eps, a, b).lower_bits == 0.0
    with pytest.raises(InvalidEpsilonBudget):
        capacity_lower(identity(2), 0.1, 0.05, 0.05)


def test_capacity_upper_examples():
    assert capacity_upper(identity(2), 0.1, 0.25, 0).upper_bits == pytest.approx(3.0)
    assert capacity_upper(identity(4), 0, 1 / 16, 0).upper_bits == pytest.approx(6.0)
    # completely noisy, uniform on k inputs: deleting 0.7 of the mass keeps
    # ceil(0.3 k) atoms per output, so the objective is log k - log ceil(0.3 k) + 1
    for nx in (2, 3):
        want = max(math.log2(k) - math.log2(math.ceil(0.3 * k)) + 1 for k in range(1, nx + 1))
        assert capacity_upper(completely_noisy(nx), 0.1, 0.5, 0).upper_bits == pytest.approx(want)
    assert capacity_upper(completely_noisy(2), 0.1, 0.5, 0).upper_bits == pytest.approx(2.0)
    for bad in ((0.0, 0.1), (0.5, 0.3)):
        with pytest.raises(InvalidEpsilonBudget):
            capacity_upper(identity(2), 0.1, *bad)


def test_bounds_echo_parameters():
    b = capacity_bounds(bsc(0.1), 0.2, 0.05, 0.05, 0.05, 0.05)
    assert b.params == {"eps": 0.2, "eps_prime": 0.05, "eps_pp": 0.05, "eps1": 0.05, "eps2": 0.05}
    assert b.lower_bits <= b.upper_bits


def test_lower_bound_monotone_in_eps_with_proportional_splits():
    for w in (identity(4), bsc(0.1), bec(0.2), random_channel(3, 3, 1)):
        vals = [capacity_lower(w, e, e / 4, e / 4).lower_bits for e in np.linspace(0.05, 0.95, 19)]
        assert all(a <= b + 1e-12 for a, b in zip(vals, vals[1:]))


def test_upper_bound_monotone_in_eps_with_fixed_splits():
    for w in (identity(4), bsc(0.1), bec(0.2), random_channel(3, 3, 1)):
        vals = [capacity_upper(w, e, 0.1, 0.05).upper_bits for e in np.linspace(0.0, 0.42, 15)]
        assert all(a <= b + 1e-12 for a, b in zip(vals, vals[1:]))


def test_upper_bound_not_monotone_under_proportional_scaling():
    # log(1/eps1) shrinks as eps1 grows with eps, so this reading cannot hold in general
    vals = [capacity_upper(identity(2), e, e, 0).upper_bits for e in (0.05, 0.1, 0.2)]
    assert vals[0] > vals[-1]


def test_cmin_maximize_examples():
    bits, p = cmin_maximize(identity(4), 0)
    assert bits == 2.0 and np.allclose(p.mass, 0.25)
    assert cmin_maximize(completely_noisy(3), 0)[0] == pytest.approx(0.0, abs=1e-12)
    # oracle first
    j = joint_from_channel(ProbVector.uniform(["0", "1"]), bec(0.2))
    assert exact_c_min(j, 0.2) == pytest.approx(1.0)
    assert cmin_maximize(bec(0.2), 0.2)[0] == pytest.approx(1.0)


def test_exact_capacity_examples():
    assert exact_one_shot_capacity(identity(4), 0) == 2.0
    assert exact_one_shot_capacity(bsc(0.3), 0.1) == 0.0
    assert exact_one_shot_capacity(bec(0.2), 0.2) == 1.0


def test_build_code_identity():
    w = identity(16)
    code = build_code(w, ProbVector.uniform(w.x_labels), 0, 0, 0.25, 0.5, rng_seed=0)
    assert len(code) >= 2
    assert evaluate_code(w, code)[0] == 0.0
    again = build_code(w, ProbVector.uniform(w.x_labels), 0, 0, 0.25, 0.5, rng_seed=0)
    assert again == code


def test_build_code_noisy_channel_is_trivial():
    w = completely_noisy(2)
    for seed in range(10):
        try:
            code = build_code(w, ProbVector.uniform(w.x_labels), 0.0, 0.0, 0.25, 0.4, seed)
        except EmptyCode:
            continue
        assert len(code) == 1


def test_build_code_bec():
    w = bec(0.1)
    p = ProbVector.uniform(w.x_labels)
    with pytest.raises(InvalidEpsilonBudget):
        build_code(w, p, 0, 0, 0.5, 0.2, rng_seed=0)
    for seed in range(20):
        code = build_code(w, p, 0, 0, 0.1, 0.2, rng_seed=seed)
        assert len(code) in (1, 2)
        assert evaluate_code(w, code)[0] <= 0.2


def test_build_code_max_error_never_exceeds_eps():
    for s in range(40):
        w = random_channel(4, 4, s)
        p = ProbVector.uniform(w.x_labels)
        try:
            code = build_code(w, p, 0.05, 0.05, 0.1, 0.3, rng_seed=s)
        except EmptyCode:
            continue
        assert evaluate_code(w, code)[0] <= 0.3


def test_coding_floor_suite():
    res = coding_suite(n_seeds=100)
    assert res.violations == 0, res.details


def test_asymptotic_capacity_closed_forms():
    for n in (2, 3, 5):
        assert asymptotic_capacity(identity(n)) == pytest.approx(math.log2(n), abs=1e-9)
    assert asymptotic_capacity(completely_noisy(3)) == pytest.approx(0.0, abs=1e-9)
    assert asymptotic_capacity(bsc(0.11)) == pytest.approx(1 - binary_entropy(0.11), abs=1e-9)
    assert asymptotic_capacity(bec(0.3)) == pytest.approx(0.7, abs=1e-9)
    # Z-channel closed form: log2(1 + (1 - p) p^(p / (1 - p)))
    p = 0.2
    assert asymptotic_capacity(zchannel(p)) == pytest.approx(math.log2(1 + (1 - p) * p ** (p / (1 - p))), abs=1e-9)


def test_sandwiches_on_small_channels():
    chans = [("bsc", bsc(0.1)), ("bec", bec(0.2)), ("z", zchannel(0.2)), ("r", random_channel(3, 3, 4))]
    for res in (capacity_sandwich_suite(chans), capacity_c_min_suite(chans)):
        assert res.violations == 0, res.details
