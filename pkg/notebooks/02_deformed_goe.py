# %% [markdown]
# # Deformed GOE: eigenvalue transition vs SDP value
#
# The top eigenvalue of (lam/n) 1 1^T + W leaves the bulk edge at lam = 1.
# The SDP value per vertex tracks the same picture, and an explicit witness
# built from eigenvectors gives a lower bound without running the solver.

# %%
import numpy as np

from sdpgraph import bbap_prediction, deformed_goe, eig_sym, opt_k
from sdpgraph.witness import grid_search, verify_feasible

n = 1000
for lam in (0.0, 0.5, 1.0, 1.5, 2.0, 3.0):
    b = deformed_goe(n, lam, seed=7)  # same W for every lam
    spec = eig_sym(b)
    sdp = opt_k(b, k=40, restarts=1, seed=1)[0] / n
    mode = "supercritical" if lam > 1 else "subcritical"
    wval, w = grid_search(b, mode, spectrum=spec)
    print(f"lam={lam:.1f}  xi_1={spec.top:.3f} (limit {bbap_prediction(lam):.3f})"
          f"  opt_k/n={sdp:.3f}  witness={wval:.3f} {w.params}"
          f"  feasible={verify_feasible(w).ok}")

# %% [markdown]
# The witness needs n large before it clears 2: the bulk block loses value
# through the fluctuating row norms of a few eigenvectors.

# %%
for n in (500, 1000, 2000):
    b = deformed_goe(n, 2.0, seed=1)
    print(n, round(grid_search(b)[0], 4))
