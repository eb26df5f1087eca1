"""One-shot capacity: entropy bounds against the exhaustive optimum."""

# %%
from oneshot.capacity import asymptotic_capacity, capacity_lower, capacity_upper
from oneshot.oracle import exact_one_shot_capacity
from oneshot.zoo import bec, bsc, identity, random_channel, zchannel

channels = {
    "identity4": identity(4),
    "bsc0.1": bsc(0.1),
    "bec0.2": bec(0.2),
    "z0.2": zchannel(0.2),
    "random3x3": random_channel(3, 3, 7),
}

# %% The exact value sits between the bounds; the lower bound pays a large
# constant that only matters on big alphabets
eps = 0.2
for name, w in channels.items():
    lo = capacity_lower(w, eps, 0.05, 0.05).lower_bits
    up = min(capacity_upper(w, eps, e1, 0.0).upper_bits for e1 in (0.05, 0.1, 0.3))
    ex = exact_one_shot_capacity(w, eps)
    print(f"{name:<10} lower={lo:.3f}  exact={ex:.3f}  upper={up:.3f}  shannon={asymptotic_capacity(w):.3f}")

# %% At 1024 inputs the lower bound is no longer vacuous
print("identity(1024) lower:", round(capacity_lower(identity(1024), 0.2, 0.05, 0.05).lower_bits, 4))
