# # Noise after the unitary versus the unnormalized transform
#
# Q^H n stays white; Q'^H n has covariance sigma^2 diag(1/d').

import numpy as np

from qdrd.harness import noise_statistics
from qdrd.mimo import complex_gaussian

rng = np.random.default_rng(707)
A = complex_gaussian(rng, (4, 4))
st = noise_statistics(A, noise_var=0.5, draws=100_000, seed=77)

np.set_printoptions(precision=4, suppress=True)
print("cov(Q^H n) =\n", st.cov_q.real)
print("cov(Q'^H n) =\n", st.cov_q_prime.real)
print("sigma^2 / d' =", 0.5 / st.d_prime)
