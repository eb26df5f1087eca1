"""Random coding with expurgation, and exact error evaluation."""

# %%
from oneshot.capacity import Code, build_code, evaluate_code
from oneshot.prob import ProbVector
from oneshot.zoo import ERASURE, bec, identity

w = identity(16)
code = build_code(w, ProbVector.uniform(w.x_labels), eps1=0.0, eps2=0.0, eps3=0.25, eps=0.5, rng_seed=0)
print("codebook:", code.codebook)
print("max/avg error:", evaluate_code(w, code))
print("meta:", code.meta)

# %% Sizes over many seeds: expurgation keeps at least the Markov floor
sizes = [len(build_code(w, ProbVector.uniform(w.x_labels), 0, 0, 0.25, 0.5, s)) for s in range(100)]
print("sizes seen:", sorted(set(sizes)))

# %% Erasures decoded to a fixed message
e = bec(0.2)
print(evaluate_code(e, Code(["0", "1"], {"0": 0, "1": 1, ERASURE: 0})))
