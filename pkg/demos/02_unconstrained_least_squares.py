# # Unconstrained least squares: D' drops out
#
# Solving R x = Q^H y and R' x = Q'^H y gives the same minimizer; the QDRD
# path needs no square roots and no divisions in back substitution.

import numpy as np

from qdrd import solve_ls_qdrd, solve_ls_qr
from qdrd.counting import OpCounter
from qdrd.harness import gated_gaussian_matrix
from qdrd.mimo import complex_gaussian

rng = np.random.default_rng(1)
A = gated_gaussian_matrix(rng, 6, 3)
y = complex_gaussian(rng, 6)

ops_qr, ops_qdrd = OpCounter(), OpCounter()
qr = solve_ls_qr(A, y, ops_qr)
qd = solve_ls_qdrd(A, y, ops_qdrd)

print("x (QR)   =", np.round(qr.x_star, 6))
print("x (QDRD) =", np.round(qd.x_star, 6))
print("max |difference| =", np.abs(qr.x_star - qd.x_star).max())
print("residual via ||y||^2 - ||Q^H y||^2 =", qr.residual_sq)
print("residual via ||y - A x||^2        =", qd.residual_sq)

# ## Where the operations go

print("-- QR path\n" + ops_qr.report())
print("-- QDRD path\n" + ops_qdrd.report())

# ## Over many instances

worst = 0.0
for _ in range(500):
    A = gated_gaussian_matrix(rng, 4, 4)
    y = complex_gaussian(rng, 4)
    worst = max(worst, np.abs(solve_ls_qr(A, y).x_star - solve_ls_qdrd(A, y).x_star).max())
print("worst disagreement over 500 square systems:", worst)
