# %% [markdown]
# # SDP value of sparse random graphs
#
# For a d-regular random graph the normalized value opt_k(A_cen)/n sits near
# 2 sqrt(d-1); for Erdos-Renyi graphs opt_k(A_cen)/(n sqrt d) approaches 2 as
# d grows, and the top eigenvalue overshoots because of high-degree vertices.

# %%
import math

from sdpgraph import centered_operator, gen_er, gen_regular, opt_k
from sdpgraph.solver import top_eigenvalue

n = 2000

# %%
for d in (3, 4, 6, 10):
    g = gen_regular(n, d, seed=1)
    value, _, report = opt_k(centered_operator(g, d), k=64, restarts=1, seed=2)
    print(f"regular d={d:2d}: value/n = {value / n:.3f}   2 sqrt(d-1) = {2 * math.sqrt(d - 1):.3f}"
          f"   ({report.epochs} epochs)")

# %%
for d in (5, 10, 20, 40):
    op = centered_operator(gen_er(n, d, seed=1), d)
    value = opt_k(op, k=64, restarts=1, seed=2)[0]
    xi1 = top_eigenvalue(op)
    print(f"ER d={d:2d}: SDP/(n sqrt d) = {value / (n * math.sqrt(d)):.3f}"
          f"   xi_1/sqrt d = {xi1 / math.sqrt(d):.3f}")
