"""Two estimates whose errors share an identical noise term.

We take a small 2x2 pair whose sum and product are both multiples of the
identity, so every number below can be checked by hand.
"""

import numpy as np

from commonnoise import (
    b_matrix,
    ci_upper_bound,
    ci_weights,
    dual_upper_bound,
    fused_bound,
    fused_lower,
    lower_bound,
    optimize_bound,
)
from commonnoise.fusion import FusionWeight

np.set_printoptions(precision=4, suppress=True)

P1 = np.array([[9.0, 3.0], [3.0, 4.0]])
P2 = np.array([[4.0, -3.0], [-3.0, 9.0]])
print("P1 + P2 =\n", P1 + P2)
print("P1 @ P2 =\n", P1 @ P2)

# The harmonic-mean matrix B drives the off-diagonal block of the bound.
print("\nB(1/2) =\n", b_matrix(P1, P2, 0.5), "\n54/13 =", 54 / 13)

M = dual_upper_bound(P1, P2, mu=1.0, omega=0.5)
print("\njoint upper bound, mu = 1, omega = 1/2:\n", M)

# Covariance intersection keeps a block-diagonal bound. With the matching
# weight, both bounds give the same fused matrix.
W = ci_weights(P1, P2, 0.5)
print("\nfused with the CI bound:\n", fused_bound(W, ci_upper_bound(P1, P2, 1.0)))
print("fused with the new bound:\n", fused_bound(W, M))

# A lower bound is also available once the noise is known to be common.
half = FusionWeight(0.5 * np.eye(2), 0.5 * np.eye(2))
print("\njoint lower bound:\n", lower_bound(P1, P2))
print("fused lower bound for W = [I/2, I/2]:\n", fused_lower(half, P1, P2))

for rule in ("ci", "dual", "ici"):
    res = optimize_bound(P1, P2, rule, "trace")
    print(f"\n{rule:>4}: trace {res.criterion_value:.6f}, params {res.params.as_dict()}")
