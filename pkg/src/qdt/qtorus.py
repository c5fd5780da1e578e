"""Truncated series in a quantum torus over the rational functions in q^(1/2).

The product is x^a o x^b = q^(<a,b>/2) x^(a+b) for a skew form <.,.> on the
exponent lattice.  Every series carries its truncation; combining series
with different truncations or lattices is an error, never a silent
re-truncation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Mapping, Optional, Sequence

from .exactalg import GM, ONE, ZERO, HalfLaurent, RatFunc, is_laurent_polynomial, q_power
from .quiver import Quiver, form_r, vec_factorial

__all__ = [
    "Truncation",
    "QSeries",
    "RaySymmetryError",
    "twisted_mul",
    "series_exp",
    "series_log",
    "T_r_operator",
    "extract_g",
    "admissible_exponents",
    "is_admissible",
    "is_quantum_admissible",
    "normal_order",
    "stack_invariant",
    "f_triv",
]

Q_MINUS_1 = RatFunc(HalfLaurent({2: 1, 0: -1}))


@dataclass(frozen=True)
class Truncation:
    """Keep exponents alpha with w . alpha <= b for every (w, b) in ``constraints``.

    Box truncations use one constraint per coordinate, total-degree
    truncations a single all-ones weight.  Every coordinate must be bounded
    by some constraint so the kept set is finite.
    """

    rank: int
    constraints: tuple

    def __post_init__(self):
        cons = tuple((tuple(int(x) for x in w), int(b)) for w, b in self.constraints)
        for w, b in cons:
            if len(w) != self.rank or any(x < 0 for x in w):
                raise ValueError("constraint weights must be nonnegative vectors of the right rank")
        for i in range(self.rank):
            if not any(w[i] > 0 for w, _ in cons):
                raise ValueError(f"coordinate {i} is unbounded")
        object.__setattr__(self, "constraints", cons)

    @classmethod
    def box(cls, bounds: Sequence[int]) -> "Truncation":
        n = len(bounds)
        return cls(n, tuple((tuple(int(i == k) for k in range(n)), b) for i, b in enumerate(bounds)))

    @classmethod
    def total(cls, rank: int, degree: int) -> "Truncation":
        return cls(rank, (((1,) * rank, degree),))

    def contains(self, alpha) -> bool:
        return all(sum(x * a for x, a in zip(w, alpha)) <= b for w, b in self.constraints)

    def bounds(self) -> tuple:
        """Per-coordinate upper bounds implied by the constraints."""
        out = []
        for i in range(self.rank):
            out.append(min(b // w[i] for w, b in self.constraints if w[i] > 0))
        return tuple(out)

    def vectors(self, include_zero: bool = False) -> list:
        """Every exponent kept by the truncation, sorted by (total degree, lexicographic)."""
        res = [
            a
            for a in product(*(range(b + 1) for b in self.bounds()))
            if (include_zero or any(a)) and self.contains(a)
        ]
        res.sort(key=lambda a: (sum(a), a))
        return res

    def max_degree(self) -> int:
        return max((sum(a) for a in self.vectors()), default=0)


class RaySymmetryError(ValueError):
    """Two nonzero coefficients on one ray pair nontrivially under the skew form."""

    def __init__(self, alpha, beta, value):
        super().__init__(f"<{alpha}, {beta}> = {value} != 0 on a ray: g is undefined here")
        self.pair = (alpha, beta)


def _skew(mat, a, b) -> int:
    n = len(a)
    return sum(a[i] * mat[i][j] * b[j] for i in range(n) if a[i] for j in range(n) if b[j])


class QSeries:
    """A truncated series sum_alpha c_alpha x^alpha with twisted product.

    ``skew[i][j]`` is <e_i, e_j>; a zero matrix gives the commutative ring.
    """

    __slots__ = ("skew", "trunc", "coeffs")

    def __init__(self, skew: Sequence[Sequence[int]], trunc: Truncation, coeffs: Optional[Mapping] = None):
        self.skew = tuple(tuple(int(x) for x in row) for row in skew)
        if len(self.skew) != trunc.rank:
            raise ValueError("skew form and truncation have different ranks")
        for i in range(trunc.rank):
            for j in range(trunc.rank):
                if self.skew[i][j] != -self.skew[j][i]:
                    raise ValueError("the form is not skew-symmetric")
        self.trunc = trunc
        self.coeffs = {}
        for a, c in (coeffs or {}).items():
            a = tuple(int(x) for x in a)
            if len(a) != trunc.rank:
                raise ValueError(f"exponent {a} has the wrong rank")
            if not trunc.contains(a):
                continue
            c = c if isinstance(c, RatFunc) else RatFunc.from_fraction(c) if isinstance(c, Fraction) else ONE * c
            if c:
                self.coeffs[a] = c

    # --- constructors -----------------------------------------------------------

    @classmethod
    def for_quiver(cls, Q: Quiver, trunc: Truncation, coeffs: Optional[Mapping] = None) -> "QSeries":
        return cls(Q.skew_matrix(), trunc, coeffs)

    @classmethod
    def commutative(cls, trunc: Truncation, coeffs: Optional[Mapping] = None) -> "QSeries":
        n = trunc.rank
        return cls([[0] * n for _ in range(n)], trunc, coeffs)

    def _like(self, coeffs: Mapping) -> "QSeries":
        out = QSeries.__new__(QSeries)
        out.skew = self.skew
        out.trunc = self.trunc
        out.coeffs = {a: c for a, c in coeffs.items() if c}
        return out

    def one(self) -> "QSeries":
        return self._like({(0,) * self.trunc.rank: ONE})

    # --- basic access --------------------------------------------------------------

    @property
    def rank(self) -> int:
        return self.trunc.rank

    def __getitem__(self, alpha) -> RatFunc:
        return self.coeffs.get(tuple(alpha), ZERO)

    def constant(self) -> RatFunc:
        return self[(0,) * self.rank]

    def is_commutative(self) -> bool:
        return not any(any(row) for row in self.skew)

    def _compatible(self, other: "QSeries") -> None:
        if not isinstance(other, QSeries):
            raise TypeError("expected a QSeries")
        if self.skew != other.skew:
            raise ValueError("series live in different quantum tori")
        if self.trunc != other.trunc:
            raise ValueError("series have different truncations")

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.skew == other.skew and self.trunc == other.trunc and self.coeffs == other.coeffs

    def __add__(self, other):
        self._compatible(other)
        out = dict(self.coeffs)
        for a, c in other.coeffs.items():
            out[a] = out.get(a, ZERO) + c
        return self._like(out)

    def __neg__(self):
        return self._like({a: -c for a, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "QSeries":
        return self._like({a: c * x for a, x in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return twisted_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def map_coeffs(self, fn) -> "QSeries":
        """Apply fn(alpha, c) to every coefficient."""
        return self._like({a: fn(a, c) for a, c in self.coeffs.items()})

    def __repr__(self):
        return f"QSeries({len(self.coeffs)} terms, rank {self.rank})"

    def __str__(self):
        lines = []
        for a in sorted(self.coeffs):
            lines.append(f"x^({','.join(map(str, a))}) : {self.coeffs[a]}")
        return "\n".join(lines)


def twisted_mul(A: QSeries, B: QSeries) -> QSeries:
    """Product with x^a o x^b = q^(<a,b>/2) x^(a+b), truncated."""
    A._compatible(B)
    trunc = A.trunc
    out: dict = {}
    skew = A.skew
    commutative = A.is_commutative()
    for a, ca in A.coeffs.items():
        for b, cb in B.coeffs.items():
            s = tuple(x + y for x, y in zip(a, b))
            if not trunc.contains(s):
                continue
            term = ca * cb
            if not commutative:
                term = term.shift(_skew(skew, a, b))
            out[s] = out.get(s, ZERO) + term
    return A._like(out)


def _power_sums(A: QSeries, coefficients: Sequence) -> QSeries:
    """sum_k coefficients[k] * A^k with A of zero constant term."""
    if A.constant():
        raise ValueError("series must have zero constant term")
    result = A.one().scale(coefficients[0])
    power = A.one()
    for k in range(1, len(coefficients)):
        power = twisted_mul(power, A)
        if not power.coeffs:
            break
        if coefficients[k]:
            result = result + power.scale(coefficients[k])
    return result


def series_exp(A: QSeries) -> QSeries:
    """exp(A) for A with zero constant term, within A's truncation."""
    if A.constant():
        raise ValueError("exp needs a series with zero constant term")
    d = A.trunc.max_degree()
    coeffs = []
    f = 1
    for k in range(d + 1):
        if k:
            f *= k
        coeffs.append(RatFunc.from_fraction(Fraction(1, f)))
    return _power_sums(A, coeffs)


def series_log(A: QSeries) -> QSeries:
    """log(A) for A with constant term 1, within A's truncation."""
    if A.constant() != ONE:
        raise ValueError("log needs a series with constant term 1")
    B = A - A.one()
    d = A.trunc.max_degree()
    coeffs = [ZERO] + [RatFunc.from_fraction(Fraction((-1) ** (k + 1), k)) for k in range(1, d + 1)]
    return _power_sums(B, coeffs)


def T_r_operator(A: QSeries, r_form) -> QSeries:
    """x^alpha -> q^(r(alpha, alpha)/2) x^alpha.

    ``r_form`` is a square integer matrix or a :class:`Quiver` (whose form r is used).
    """
    if isinstance(r_form, Quiver):
        quad = lambda a: form_r(r_form, a, a)  # noqa: E731
    else:
        mat = [list(row) for row in r_form]
        quad = lambda a: sum(a[i] * mat[i][j] * a[j] for i in range(len(a)) for j in range(len(a)))  # noqa: E731
    return A.map_coeffs(lambda a, c: c.shift(quad(a)))


def _ray_gate(coeffs: Mapping, skew) -> None:
    keys = sorted(a for a, c in coeffs.items() if c)
    for i, a in enumerate(keys):
        for b in keys[i + 1:]:
            s = _skew(skew, a, b)
            if s:
                raise RaySymmetryError(a, b, s)


def extract_g(
    f_coeffs: Mapping,
    trunc: Truncation,
    skew: Optional[Sequence[Sequence[int]]] = None,
) -> dict:
    """Solve 1 + sum f(a) x^a/a! = exp(sum g(a) x^a/a! / (q^(1/2) - q^(-1/2))) for g.

    All vectors are assumed to lie on one ray.  When ``skew`` is given the
    ray must be symmetric (pairwise <a, b> = 0 among nonzero f), otherwise
    :class:`RaySymmetryError` names a violating pair.  On a symmetric ray
    the twisted and commutative products agree, so a commutative logarithm
    is used.
    """
    f_coeffs = {tuple(a): c for a, c in f_coeffs.items()}
    if skew is not None:
        _ray_gate(f_coeffs, skew)
    F = QSeries.commutative(trunc, {a: c / vec_factorial(a) for a, c in f_coeffs.items()})
    F = F + F.one()
    L = series_log(F)
    out = {}
    for a in trunc.vectors():
        c = L[a]
        if c or a in f_coeffs:
            out[a] = c * GM * vec_factorial(a)
    return out


def normal_order(A: QSeries) -> QSeries:
    """Rewrite sum a_alpha x^alpha as sum a'_alpha x_1^alpha_1 o ... o x_n^alpha_n coefficients.

    x_1^a_1 o ... o x_n^a_n = q^(sum_{i<j} <e_i,e_j> a_i a_j / 2) x^alpha, so
    the coefficient a_alpha x^alpha of the ordered monomial expansion is
    multiplied by that power.
    """
    n = A.rank

    def shift(a):
        return sum(A.skew[i][j] * a[i] * a[j] for i in range(n) for j in range(i + 1, n))

    return A.map_coeffs(lambda a, c: c.shift(shift(a)))


def admissible_exponents(A: QSeries) -> Optional[dict]:
    """The polynomials b_alpha with A = exp(sum b_alpha x^alpha/alpha! / (q - 1)), or None.

    The logarithm is taken commutatively; None means some b_alpha is not a
    Laurent polynomial in q^(1/2).
    """
    if A.constant() != ONE:
        raise ValueError("admissibility needs constant term 1")
    L = series_log(QSeries.commutative(A.trunc, A.coeffs))
    out = {}
    for a in A.trunc.vectors():
        b = L[a] * Q_MINUS_1 * vec_factorial(a)
        p = is_laurent_polynomial(b)
        if p is None:
            return None
        if not p.is_zero():
            out[a] = p
    return out


def is_admissible(A: QSeries) -> bool:
    return admissible_exponents(A) is not None


def is_quantum_admissible(A: QSeries) -> bool:
    """Admissibility of the ordered-monomial rewrite of A (see :func:`normal_order`)."""
    return is_admissible(normal_order(A))


def stack_invariant(Q: Quiver, alpha) -> RatFunc:
    """[R(Q, alpha)]_vir / [GL_alpha]_vir = q^((alpha.alpha + r(alpha,alpha))/2) / |GL_alpha|(q)."""
    alpha = Q.dim(alpha)
    num = q_power(sum(a * a for a in alpha) + form_r(Q, alpha, alpha))
    den = ONE
    for a in alpha:
        for k in range(a):
            den = den * RatFunc(HalfLaurent({2 * a: 1}) - HalfLaurent({2 * k: 1}))
    return num / den


def f_triv(Q: Quiver, alpha) -> RatFunc:
    """Closed form q^(r(alpha,alpha)/2) / (q^(1/2) - q^(-1/2))^|alpha| for the trivial stability."""
    alpha = Q.dim(alpha)
    return q_power(form_r(Q, alpha, alpha)) / GM ** sum(alpha)
