"""
Abelian invariants and spanning trees
=====================================

For a symmetric quiver and the trivial stability, the abelian invariant
g(alpha) is a polynomial in q^(1/2) with nonnegative coefficients.  At
q^(1/2) = 1 it counts spanning trees of a multigraph built from alpha.
This script computes g by brute force and compares it with a determinant.
"""

from qdt import Quiver
from qdt.abelian import b_tree_formula, f_enum, matrix_tree_count
from qdt.exactalg import is_laurent_polynomial
from qdt.qtorus import Truncation, extract_g

# A single vertex with two loops.  Its covering quiver Q(3) has three
# vertices, all joined by two arrows in each direction (plus loops).
loops = Quiver.from_arrows(["i"], [("i", "i", 2)])

trunc = Truncation.box((3,))
f = {a: f_enum(loops, a) for a in trunc.vectors()}
for a, value in f.items():
    print("f", a, "=", value)

g = extract_g(f, trunc, loops.skew_matrix())
print("g(3) =", g[(3,)])

# The logarithm removed every denominator: what is left is a polynomial.
poly = is_laurent_polynomial(g[(3,)])
print("value at q^(1/2) = 1:", poly(1))

# The same number from the Kirchhoff matrix-tree theorem ...
print("spanning trees:", matrix_tree_count(loops.r, (3,)))

# ... and the q-refinement from a sum over labelled trees with inversions.
print("tree formula:", b_tree_formula(loops.r, (3,)))

# A two-vertex example where the colours matter.
bip = Quiver.from_arrows(["1", "2"], [("1", "2", 2), ("2", "1", 2)])
trunc = Truncation.box((2, 1))
g = extract_g({a: f_enum(bip, a) for a in trunc.vectors()}, trunc, bip.skew_matrix())
print("bipartite g(2,1) =", g[(2, 1)], "->", is_laurent_polynomial(g[(2, 1)])(1), "trees")
