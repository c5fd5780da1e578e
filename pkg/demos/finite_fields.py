"""
Counting points over finite fields
==================================

The invariants in this package are rational functions of q, but they
also count things over the field with q elements.  Here we check two
such statements numerically: g(alpha) counts points of a moduli space of
stable representations, and semistable counts are the exponential of
indecomposable counts.
"""

from qdt import Quiver, Stability
from qdt.abelian import count_over_Fq
from qdt.wallcross import verify_exponential_formula, verify_geometricity

two_cycle = Quiver.from_arrows(["1", "2"], [("1", "2", 1), ("2", "1", 1)])

# Direct point counts for a few field sizes.
for q0 in (2, 3, 4, 5):
    print(q0, "semistable:", count_over_Fq(two_cycle, None, q0, "semistable"),
          "indecomposable:", count_over_Fq(two_cycle, None, q0, "indecomposable"))

# The literal count enumerates every scalar on every arrow.
print("literal check:", count_over_Fq(two_cycle, None, 3, "semistable", literal=True))

# g as a virtual motive: evaluate and compare with a deformed moduli count.
rep = verify_geometricity(two_cycle, Stability.trivial(2), (2, 1))
print(rep.summary(timing=False))

# The exponential formula, ray by ray.
kron = Quiver.from_arrows(["1", "2"], [("2", "1", 2)])
for q0 in (2, 3):
    print(verify_exponential_formula(kron, Stability.from_slopes((0, 1)), q0, 4).summary(timing=False))
