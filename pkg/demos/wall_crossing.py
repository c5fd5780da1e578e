"""
Crossing a wall in rank two
===========================

Two charges e1, e2 with <e1, e2> = k.  On one side of the wall only the
two charges themselves carry invariants; crossing it produces bound
states.  We compute them twice: by inverting the Kontsevich-Soibelman
product, and by counting abelian representations of a quiver built on
the charges.
"""

from qdt import Quiver, Stability
from qdt.exactalg import ONE
from qdt.wallcross import ks_to_mps_rank2, verify_abelian_wallcross

seed = {(1, 0): ONE, (0, 1): ONE}

for k in (1, 2, 3):
    res = ks_to_mps_rank2(k, seed, (3, 3))
    print(res.report.summary(timing=False))
    for gamma in sorted(res.ks):
        print("   ", gamma, res.ks[gamma])

# For k = 1 the bound state at e1 + e2 is the pentagon identity.  The
# other entries are there because the seed puts 1 only on e1 and e2 and
# nothing on 2 e1, 2 e2, which is not a single quantum dilogarithm.

# The abelian identity behind this: for any stability the ordered product
# of the per-ray generating series does not depend on the stability.
kron = Quiver.from_arrows(["1", "2"], [("2", "1", 1)])
for Z in (Stability.trivial(2), Stability.from_slopes((0, 1)), Stability.from_slopes((1, 0))):
    print("slopes (" + ", ".join(str(x) for x in Z.d) + ")", verify_abelian_wallcross(kron, Z, 4).summary(timing=False))
