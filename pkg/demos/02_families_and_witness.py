"""Sampling admissible cross-covariances and checking who dominates whom.

The new bound covers every joint covariance built from a common noise
term. Under a fully unknown correlation it fails, and a random search finds
the counterexample quickly.
"""

import numpy as np

from commonnoise import ci_upper_bound, dual_upper_bound, family_sampler, lower_bound, verify_lower, verify_upper

P1 = np.array([[9.0, 3.0], [3.0, 4.0]])
P2 = np.array([[4.0, -3.0], [-3.0, 9.0]])
M = dual_upper_bound(P1, P2, 1.0, 0.5)
L = lower_bound(P1, P2)

# For this pair the two margins coincide: P1 - P1^2/13 = (27/13) I, so M - K
# and K - L differ only by the sign of their off-diagonal block.
for family in ("rank1", "omega", "ci_general"):
    sampler = family_sampler(P1, P2, family)
    up = verify_upper(M, sampler, 5000, seed=1)
    lo = verify_lower(L, sampler, 5000, seed=1)
    print(f"{family:>10}: min eig(M - K) = {up.min_margin:9.3g}   min eig(K - L) = {lo.min_margin:9.3g}")

rep = verify_upper(M, family_sampler(P1, P2, "ci_general"), 5000, seed=1)
print("\nworst unrestricted cross-covariance against the new bound:\n", rep.worst_sample.P12.round(3))

# Covariance intersection does cover it.
rep = verify_upper(ci_upper_bound(P1, P2, 1.0), family_sampler(P1, P2, "ci_general"), 5000, seed=1)
print("CI bound margin on the same family:", f"{rep.min_margin:.3g}")
