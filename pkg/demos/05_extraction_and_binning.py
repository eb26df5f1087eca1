"""Hashing a source: key extraction and compression with side information."""

# %%
import math

import numpy as np

from oneshot.prob import JointDistribution
from oneshot.smooth import hmax_cond_smooth_value, hmin_cond_smooth_value
from oneshot.tasks import compress_with_side_info, extract

# X uniform over 8; Y reveals all but the last bit
m = np.zeros((8, 4))
for x in range(8):
    m[x, x // 2] = 1 / 8
j = JointDistribution.from_array(m)

# %% Key extraction at the length the smooth min-entropy guarantees
eps, eps_p = 0.5, 0.25
ell = math.floor(hmin_cond_smooth_value(j.matrix, eps_p) - 2 * math.log2(1 / (eps - eps_p)))
for length in range(0, 3):
    rep = extract(j, length, exhaustive=True)
    print(f"ell={length}  mean error={rep.achieved_error:.4f}  worst seed={rep.worst_error:.4f}")
print("guaranteed length:", max(ell, 0))

# %% Binning: one bit of bin index suffices when Y is known
m_bits = math.ceil(hmax_cond_smooth_value(j.matrix, eps_p) + math.log2(1 / (eps - eps_p)))
for bins in range(0, 3):
    rep = compress_with_side_info(j, bins, exhaustive=True)
    print(f"m={bins}  expected error={rep.achieved_error:.4f}  worst seed={rep.worst_error:.4f}")
print("guaranteed storage:", m_bits)
