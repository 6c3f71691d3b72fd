# # Three factorizations of the same matrix
#
# Thin QR by modified Gram-Schmidt, full QR by Householder, and the
# square-root-free QDRD, with the operation counter attached to each.

import numpy as np

from qdrd import full_qr_householder, qdrd_sqrt_free, relate_qdrd_to_qr, thin_qr_mgs
from qdrd.counting import OpCounter

A = np.array([[3.0, 1.0], [4.0, 2.0]])

# ## Thin QR

ops = OpCounter()
f = thin_qr_mgs(A, ops)
print("Q =\n", f.q.real)
print("R =\n", f.r.real)
print(ops.report())

# ## QDRD: no square roots
#
# Q' has orthogonal columns with Q'^H Q' = diag(1/d'), R' has a unit diagonal.

ops = OpCounter()
g = qdrd_sqrt_free(A, ops)
print("Q' =\n", g.q_prime.real)
print("d' =", g.d_prime)
print("R' =\n", g.r_prime.real)
print("Q'^H Q' =\n", (g.q_prime.conj().T @ g.q_prime).real)
print(ops.report())

# Taking square roots of d' recovers the thin QR factors exactly.

back = relate_qdrd_to_qr(g)
print("max |Q - Q' D| =", np.abs(back.q - f.q).max())
print("max |R - D R'| =", np.abs(back.r - f.r).max())

# ## Full QR and the orthogonal complement

rng = np.random.default_rng(0)
B = (rng.standard_normal((5, 2)) + 1j * rng.standard_normal((5, 2))) / np.sqrt(2)
y = (rng.standard_normal(5) + 1j * rng.standard_normal(5)) / np.sqrt(2)
h = full_qr_householder(B)
print("||Q_bar^H Q_bar - I|| =", np.linalg.norm(h.q_bar.conj().T @ h.q_bar - np.eye(5)))
print("||Q~^H y||^2          =", np.linalg.norm(h.q_tilde.conj().T @ y) ** 2)
print("||y||^2 - ||Q^H y||^2 =", np.linalg.norm(y) ** 2 - np.linalg.norm(h.q.conj().T @ y) ** 2)
