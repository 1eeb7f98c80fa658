# %% [markdown]
# # Rank-k values and the Grothendieck-type sandwich
#
# opt_k is a certified lower bound; the sandwich adds upper bounds from the
# spectrum and from combining the inequality for M and -M.  The gap closes
# like 1/k.

# %%
import numpy as np

from sdpgraph import alpha_k, grothendieck_round, objective, opt_k, sample_goe, sdp_sandwich

m = sample_goe(300, seed=3)
for k in (1, 2, 4, 8, 16, 32):
    print(f"k={k:2d} alpha_k={alpha_k(k):.4f}")
for k in (2, 4, 8, 16, 32):
    sw = sdp_sandwich(m, k, restarts=1, seed=0)
    print(f"k={k:2d} lower/n={sw.lower / 300:.4f} upper/n={sw.upper / 300:.4f}"
          f" spectral/n={sw.spectral_upper / 300:.4f}")

# %% [markdown]
# Randomized rounding of a rank-32 optimum down to rank 2.

# %%
value, f, _ = opt_k(m, 32, restarts=1, seed=1)
rounded = [objective(m, grothendieck_round(f, 2, seed=s)) for s in range(100)]
print(value / 300, np.mean(rounded) / 300, alpha_k(2))
