"""
Three-state combination beyond convex mixing
============================================

Feeding three density matrices into a permutation-built unitary and
tracing out two slots gives an output that is *almost* a convex
mixture: the weights |q_k|^2 mix the inputs, while the phases of the
q_k add commutator interference.  The closed form makes this explicit.
"""

import numpy as np

from qmix import (
    DensityMatrix,
    combine3_bruteforce,
    combine3_closed,
    pdelta_from_q,
    random_density,
    random_qtriple,
    z_from_q,
)

rng = np.random.default_rng(11)
rho1 = random_density(2, seed=rng)
rho2 = random_density(2, seed=rng)
rho3 = random_density(2, seed=rng)

q = random_qtriple(rng)
print("q =", np.round(q.as_array(), 4))
print("weights |q|^2 =", np.round(q.weights(), 4), " (sum = 1)")

out = combine3_closed(rho1, rho2, rho3, q)
print("\ncombined state:")
print(np.round(out.mat, 4))

# sanity: the 8x8 conjugate-and-trace construction gives the same state
brute = combine3_bruteforce(rho1, rho2, rho3, z_from_q(q))
print("closed vs brute-force:", np.abs(out.mat - brute.mat).max())

# the deviation from plain mixing is pure interference
mix = sum(w * r.mat for w, r in zip(q.weights(), (rho1, rho2, rho3)))
print("\ndistance from the convex mixture:",
      f"{np.abs(out.mat - mix).max():.4f}")

# conjugating q flips the sign of the first-order interference
flipped = combine3_closed(rho1, rho2, rho3, q.conjugate())
print("conjugate-q output differs by:",
      f"{np.abs(out.mat - flipped.mat).max():.4f}")

# weights p and relative phases delta are an equivalent parametrization
pd = pdelta_from_q(q)
print("\nphase-difference form:")
print("  p      =", np.round(pd.p, 4))
print("  deltas =", np.round(pd.deltas, 4), " (sum = 0 mod 2pi)")

# commuting inputs feel no interference at all
diag = [DensityMatrix.from_probs(p) for p in ([0.9, 0.1], [0.5, 0.5], [0.2, 0.8])]
out_d = combine3_closed(*diag, q)
mix_d = sum(w * r.mat for w, r in zip(q.weights(), diag))
print("\ncommuting inputs, distance from mixture:",
      f"{np.abs(out_d.mat - mix_d).max():.2e}")
