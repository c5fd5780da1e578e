"""Independent reference computations built on sympy.

Nothing here imports the enumeration or series code of ``qdt``; the
functions re-derive the same quantities from their definitions with
symbolic algebra so the tests can compare two unrelated routes.
"""

from fractions import Fraction
from itertools import product
from math import factorial

import sympy

v = sympy.Symbol("v", positive=True)
q = v ** 2
x = sympy.Symbol("x")


def to_sympy(value):
    """Convert a qdt RatFunc or HalfLaurent to a sympy expression in v."""
    num = getattr(value, "num", value)
    den = getattr(value, "den", None)

    def lau(p):
        return sum((c * v ** e for e, c in p.coeffs.items()), sympy.Integer(0))

    expr = lau(num)
    if den is not None:
        expr = expr / lau(den)
    return expr


def same(value, expr) -> bool:
    return sympy.simplify(to_sympy(value) - expr) == 0


def covering(r, alpha):
    proj = [i for i, a in enumerate(alpha) for _ in range(a)]
    return [[r[i][j] for j in proj] for i in proj], proj


def _semistable(n, edges, d, rr, strict=False):
    """Check all subsets closed under the edges (ignoring loops) against the total slope."""
    total_d, total_r = sum(d), sum(rr)
    for mask in range(1, (1 << n) - 1):
        inside = [i for i in range(n) if mask >> i & 1]
        if any(mask >> s & 1 and not mask >> t & 1 for s, t in edges if s != t):
            continue
        sd = sum(d[i] for i in inside)
        sr = sum(rr[i] for i in inside)
        cross = sd * total_r - total_d * sr
        if cross > 0 or (strict and cross == 0):
            return False
    return True


def f_literal(r, alpha, d, rr):
    """f_Z(alpha) by listing every edge subset of the covering quiver."""
    R, proj = covering(r, alpha)
    n = len(proj)
    dd = [Fraction(d[i]) for i in proj]
    rv = [Fraction(rr[i]) for i in proj]
    arrows = [(i, j) for i in range(n) for j in range(n) for _ in range(R[i][j])]
    total = sympy.Integer(0)
    for bits in product((0, 1), repeat=len(arrows)):
        edges = [a for a, b in zip(arrows, bits) if b]
        if _semistable(n, edges, dd, rv):
            total += (q - 1) ** len(edges)
    return sympy.simplify(v ** (n - len(arrows)) * total / (q - 1) ** n)


def g_from_f(fvals: dict, alpha):
    """Logarithm of 1 + sum f(b) x^b/b! along multiples of one primitive vector.

    ``fvals`` maps k -> f(k * prim) for k = 1..K; returns g(K * prim).
    """
    K = max(fvals)
    series = 1 + sum(fvals[k] * x ** k / factorial(k) for k in fvals)
    log = sympy.series(sympy.log(series), x, 0, K + 1).removeO()
    return sympy.simplify((v - 1 / v) * factorial(K) * log.coeff(x, K))


def spanning_trees(r, alpha) -> int:
    """Kirchhoff count from a plain integer Laplacian (Bareiss via sympy on a fresh matrix)."""
    colors = [i for i, a in enumerate(alpha) for _ in range(a)]
    n = len(colors)
    if n == 1:
        return 1
    rows = [[0] * n for _ in range(n)]
    for s in range(n):
        for t in range(n):
            if s != t:
                rows[s][t] = -r[colors[s]][colors[t]]
        rows[s][s] = -sum(rows[s][t] for t in range(n) if t != s)
    return int(sympy.Matrix(rows)[1:, 1:].det(method="berkowitz"))
