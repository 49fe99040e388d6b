"""
Cumulant tensors and their leading directions
=============================================

Gaussian data have vanishing cumulants beyond order two.  Heavy tails that
live along one direction show up in the fourth cumulant, and the leading
eigenvector of its self-contraction points along that direction.
"""
import numpy as np

from c4detect import contract_self, cumulants_upto_4, leading_directions, whiten

rng = np.random.default_rng(0)

# three Gaussian coordinates
X = rng.standard_normal((50_000, 3))
C2, C3, C4 = cumulants_upto_4(X)
print("covariance diagonal:", np.round([C2[i, i] for i in range(3)], 3))
print("largest |C3| entry:", np.abs(C3.values).max().round(4))
print("largest |C4| entry:", np.abs(C4.values).max().round(4))

# only unique entries are stored: 15 of the 81 for n = 3, d = 4
print("stored C4 entries:", C4.values.size, "dense size:", C4.to_dense().size)
print("C4[0,1,0,1] == C4[1,1,0,0]:", C4[0, 1, 0, 1] == C4[1, 1, 0, 0])

# %%
# Now hide a heavy-tailed signal along the direction (1, 1, 0) / sqrt(2).
u = np.array([1.0, 1.0, 0.0]) / np.sqrt(2)
X = rng.standard_normal((50_000, 3)) + np.outer(rng.standard_t(5, 50_000), u)

Y = whiten(X)
_, _, C4 = cumulants_upto_4(Y)
M = contract_self(C4)
top = leading_directions(M, 1)
print("leading direction:", np.round(top.directions[:, 0], 3))
print("eigenvalues of M:", np.round(leading_directions(M, 3).eigenvalues, 4))

# %%
# Tensors serialize to JSON with sorted multi-indices.
print(C2.to_json()[:120], "...")
