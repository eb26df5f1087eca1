"""Common randomness: the Gacs-Korner part and its smoothed min-entropy."""

# %%
from oneshot.common import c_ext_bounds, c_min_bounds, common_entropy, common_min_entropy, gacs_korner
from oneshot.oracle import exact_c_ext, exact_c_min
from oneshot.zoo import blocks, equal, product

two = blocks([0.6, 0.4], [(2, 2), (2, 2)])
cp = gacs_korner(two)
print("blocks:", len(cp), "masses:", cp.block_mass, "H:", common_entropy(cp), "H_min:", common_min_entropy(cp))

# %% Moving 0.1 of mass between the blocks makes them a fair coin
for eps in (0.0, 0.05, 0.1):
    res = c_min_bounds(two, eps)
    print(f"eps={eps:<4}  lower={res.lower_bits:.4f}  exact={exact_c_min(two, eps):.4f}  upper={res.upper_bits:.4f}")

# %% Independent bits share nothing, even after a small perturbation
print("independent bits, eps=0.25:", exact_c_min(product([0.5, 0.5], [0.5, 0.5]), 0.25))

# %% With a perturbation budget, two parties holding X = Y on three symbols
# can agree on a 2-bit key, which a same-alphabet perturbation cannot explain
j = equal(3)
print("C_ext^0.25:", exact_c_ext(j, 0.25))
print("C_min^0.25 same alphabet:", round(exact_c_min(j, 0.25), 4))
print("C_min^0.25 with one spare symbol:", exact_c_min(j, 0.25, extra_symbols=1))
print("bounds on C_ext:", c_ext_bounds(j, 0.25, 0.125))
