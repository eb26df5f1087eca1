"""Smooth min- and max-entropies by removing a little probability mass."""

# %%
import numpy as np

from oneshot.prob import ProbVector, joint_from_channel, shannon_entropy
from oneshot.smooth import h_max, h_min, smooth_h_max, smooth_h_max_cond, smooth_h_min, smooth_h_min_cond
from oneshot.zoo import bsc

p = ProbVector(["a", "b", "c"], [0.5, 0.25, 0.25])
print("H_min", h_min(p), " H", shannon_entropy(p), " H_max", h_max(p))

# %% Cutting the top of the distribution: with eps = 0.25 the cap drops to 0.25
for eps in (0.0, 0.1, 0.25, 0.5):
    rep = smooth_h_min(p, eps)
    print(f"eps={eps:<4}  H_min^eps={rep.value:.4f}  witness={np.round(rep.witness.mass, 4)}")

# %% Max-entropy goes the other way: drop the smallest atoms
q = ProbVector(["a", "b", "c"], [0.9, 0.05, 0.05])
for eps in (0.0, 0.05, 0.1):
    print(f"eps={eps:<4}  H_max^eps={smooth_h_max(q, eps).value:.4f}")

# %% Conditional versions on a binary symmetric channel with uniform input
j = joint_from_channel(ProbVector.uniform(["0", "1"]), bsc(0.1))
for eps in (0.0, 0.1, 0.2):
    lo = smooth_h_min_cond(j, eps).value
    hi = smooth_h_max_cond(j, eps).value
    print(f"eps={eps:<4}  H_min(X|Y)={lo:.4f}  H_max(X|Y)={hi:.4f}")
