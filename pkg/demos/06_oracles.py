"""Brute-force references and what they reveal."""

# %%
import numpy as np

from oneshot.oracle import exact_smooth_entropy, uniform_decomposition
from oneshot.prob import ProbVector

p = ProbVector(["a", "b", "c"], [0.5, 0.25, 0.25])

# %% Removing mass versus perturbing within total variation
print("event:", exact_smooth_entropy(p, 0.25, "min"))
print("coupling:", round(exact_smooth_entropy(p, 0.25, "min", formulation="coupling"), 6))

# %% Any law is a mixture of laws flat at the level of its largest atom
for weight, comp in uniform_decomposition(p):
    print(round(weight, 4), np.round(comp.mass, 4))
