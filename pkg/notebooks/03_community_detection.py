# %% [markdown]
# # Detecting and estimating hidden communities
#
# The test statistic opt_k(A - (d/n) 1 1^T)/(n sqrt d) is calibrated on null
# (Erdos-Renyi) graphs, then applied to planted partitions on both sides of
# lam = (a-b)/sqrt(2(a+b)) = 1.

# %%
import numpy as np

from sdpgraph import gen_er, gen_planted_2, gen_planted_r
from sdpgraph.detection import estimate_partition, test_two_communities
from sdpgraph.experiments import delta_from_null, planted_params

n, d = 2000, 15
null = [test_two_communities(gen_er(n, d, s), k=64, restarts=1, seed=s).statistic
        for s in range(10)]
delta = delta_from_null(null, margin=0.02)
print("null statistics", np.round(null, 4), "-> delta", round(delta, 4))

# %%
for lam in (0.5, 1.0, 1.5, 2.0):
    a, b = planted_params(d, lam)
    hits = [test_two_communities(gen_planted_2(n, a, b, 100 + s)[0], delta=delta, k=64,
                                 restarts=1, seed=s).decision for s in range(10)]
    print(f"lam={lam}: a={a:.2f} b={b:.2f} detection rate {np.mean(hits):.1f}")

# %% [markdown]
# Three communities, same statistic and threshold machinery.

# %%
a, b = planted_params(d, 1.5, r=3)
g, _ = gen_planted_r(1998, 3, a, b, seed=3)
print(test_two_communities(g, delta=delta, k=64, restarts=1, seed=0))

# %% [markdown]
# Estimation: split the edges, solve on G1, round eigenvectors using G2.

# %%
for lam in (0.0, 1.0, 1.5, 2.5):
    a, b = planted_params(d, lam)
    g, labels = gen_planted_2(1000, a, b, seed=5)
    res = estimate_partition(g, seed=1, labels=labels)
    print(f"lam={lam}: overlap {res.overlap:.3f}, nonzero entries {np.count_nonzero(res.xhat)}")
