"""Wall-crossing identities checked exactly.

Ordered products always run clockwise, i.e. over rays of decreasing slope,
with the leftmost factor on the ray of largest slope.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, Iterable, Mapping, Optional, Sequence

from .abelian import DEFAULT_BUDGET, count_over_Fq, f_enum, subquiver_sum
from .exactalg import GM, ONE, ZERO, HalfLaurent, RatFunc, eval_at_prime_power
from .quiver import (
    Quiver,
    charge_quiver,
    covering_quiver,
    form_r,
    form_skew,
    level_quiver,
    sub,
    sub_vectors,
    vec_factorial,
)
from .qtorus import (
    QSeries,
    RaySymmetryError,
    Truncation,
    extract_g,
    f_triv,
    series_exp,
    stack_invariant,
    twisted_mul,
)
from .stability import Stability, deform_generic, ray_partition, ray_symmetric

__all__ = [
    "RayInvariants",
    "VerificationReport",
    "ordered_product",
    "abelian_ray_factors",
    "verify_abelian_wallcross",
    "hn_resolve",
    "abelian_g",
    "verify_geometricity",
    "hn_recursion_general",
    "ks_to_mps_rank2",
    "KSMPSResult",
    "verify_mps_degeneration",
    "verify_exponential_formula",
    "rank2_skew",
    "C_PLUS",
    "C_MINUS",
]


@dataclass
class RayInvariants:
    ray: object
    entries: dict = field(default_factory=dict)


@dataclass
class VerificationReport:
    """Outcome of a coefficient-by-coefficient comparison."""

    name: str
    ok: bool = True
    checked: int = 0
    first_mismatch: Optional[tuple] = None  # (key, left, right)
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok

    def record(self, key, left, right) -> bool:
        self.checked += 1
        if left != right:
            if self.first_mismatch is None:
                self.first_mismatch = (key, left, right)
            self.ok = False
            return False
        return True

    def to_json(self, timing: bool = True) -> dict:
        out = {"check": self.name, "ok": self.ok, "checked": self.checked}
        if timing:
            out["seconds"] = round(self.seconds, 3)
        if self.first_mismatch is not None:
            k, a, b = self.first_mismatch
            out["first_mismatch"] = {"key": str(k), "left": str(a), "right": str(b)}
        if self.details:
            out["details"] = {str(k): str(v) for k, v in self.details.items()}
        return out

    def summary(self, timing: bool = True) -> str:
        status = "pass" if self.ok else "FAIL"
        text = f"{self.name}: {status} ({self.checked} coefficients"
        text += f", {self.seconds:.2f}s)" if timing else ")"
        if self.first_mismatch is not None:
            k, a, b = self.first_mismatch
            text += f"\n  first mismatch at {k}: {a} != {b}"
        for k, v in self.details.items():
            text += f"\n  {k}: {v}"
        return text


def _timed(report: VerificationReport, start: float) -> VerificationReport:
    report.seconds = time.perf_counter() - start
    return report


def ordered_product(factors: Sequence[QSeries]) -> QSeries:
    out = factors[0]
    for F in factors[1:]:
        out = twisted_mul(out, F)
    return out


# --- abelian wall-crossing ---------------------------------------------------------

def abelian_ray_factors(
    Q: Quiver, Z: Stability, trunc: Truncation, budget: Optional[int] = DEFAULT_BUDGET
) -> list:
    """Clockwise list of (ray, 1 + sum_{alpha on ray} f_Z(alpha) x^alpha/alpha!)."""
    out = []
    for ray, vecs in ray_partition(Z, trunc.vectors()).items():
        coeffs = {a: f_enum(Q, a, Z, budget=budget) / vec_factorial(a) for a in vecs}
        F = QSeries.for_quiver(Q, trunc, coeffs)
        out.append((ray, F + F.one()))
    return out


def verify_abelian_wallcross(
    Q: Quiver, Z: Stability, trunc, budget: Optional[int] = DEFAULT_BUDGET
) -> VerificationReport:
    """Compare the clockwise product of ray factors with the trivial-stability series."""
    start = time.perf_counter()
    if isinstance(trunc, int):
        trunc = Truncation.total(Q.n, trunc)
    report = VerificationReport("abelian wall-crossing")
    factors = [F for _, F in abelian_ray_factors(Q, Z, trunc, budget)]
    left = ordered_product(factors)
    for a in trunc.vectors():
        report.record(a, left[a], f_triv(Q, a) / vec_factorial(a))
    return _timed(report, start)


def hn_resolve(trivial_side, Z: Stability, alpha, skew) -> RatFunc:
    """Closed-form solution of the abelian wall-crossing recursion for f_Z(alpha).

    Sums over ordered decompositions alpha = a^1 + ... + a^s into nonzero
    parts whose partial sums a^1 + ... + a^i (i < s) all have slope strictly
    above alpha; each contributes (-1)^(s-1) times the twisted product of
    the trivial-side terms T(a^i) = f_triv(a^i)/a^i!, and the total is
    multiplied by alpha!.  The sum runs as a dynamic programme over partial
    sums.  ``trivial_side`` maps beta to f_triv(beta) (a mapping or a
    callable); ``skew`` is a Quiver or a callable giving <a, b>.
    """
    alpha = tuple(alpha)
    if isinstance(skew, Quiver):
        quiver = skew
        skew = lambda a, b: form_skew(quiver, a, b)  # noqa: E731
    if isinstance(trivial_side, Mapping):
        trivial_side = trivial_side.__getitem__
    if not any(alpha):
        raise ValueError("alpha must be nonzero")
    prefixes = [b for b in sub_vectors(alpha) if b != alpha and Z.compare(b, alpha) > 0]
    prefixes.sort(key=sum)
    T = {}

    def term(g):
        if g not in T:
            T[g] = trivial_side(g) / vec_factorial(g)
        return T[g]

    # W[beta]: signed sum over decompositions of beta with admissible partial sums
    W = {(0,) * len(alpha): -ONE}
    for beta in prefixes + [alpha]:
        total = ZERO
        for prev, w in W.items():
            g = sub(beta, prev)
            if min(g) < 0 or not any(g):
                continue
            total = total - (w * term(g)).shift(skew(prev, g))
        W[beta] = total
    return W[alpha] * vec_factorial(alpha)


def abelian_g(
    Q: Quiver, Z: Stability, alpha, budget: Optional[int] = DEFAULT_BUDGET
) -> RatFunc:
    """g_Z(alpha), after checking that the ray of alpha is symmetric below alpha.

    Raises :class:`RaySymmetryError` naming the first pair with nonzero skew form.
    """
    alpha = Q.dim(alpha)
    ray = Z.slope(alpha)
    gate = ray_symmetric(Q, Z, ray, sum(alpha), within=alpha)
    if not gate:
        a, b = gate.pair
        raise RaySymmetryError(a, b, form_skew(Q, a, b))
    on_ray = [b for b in sub_vectors(alpha) if Z.slope(b) == ray]
    f = {b: f_enum(Q, b, Z, budget=budget) for b in on_ray}
    return extract_g(f, Truncation.box(alpha))[alpha]


def verify_geometricity(
    Q: Quiver,
    Z: Stability,
    alpha,
    primes: Iterable[int] = (2, 3, 4, 5),
    seed: int = 0,
    budget: Optional[int] = DEFAULT_BUDGET,
) -> VerificationReport:
    """Check g_Z(alpha)(q0) * q0^(dim/2) against stable points of Q(alpha) under Z^def.

    dim = r(alpha, alpha) - |alpha| + 1.  The deformation is rejected if it
    leaves strictly semistable abelian representations, since then it is not
    generic enough for the comparison.
    """
    start = time.perf_counter()
    alpha = Q.dim(alpha)
    report = VerificationReport(f"geometricity {alpha}")
    g = abelian_g(Q, Z, alpha, budget)
    Qa, proj = covering_quiver(Q, alpha)
    Za = Z.pullback(Q.unit(i) for i in proj)
    Zdef = deform_generic(Qa, Za, seed)
    if subquiver_sum(Qa, Zdef, "semistable", budget=budget) != subquiver_sum(Qa, Zdef, "stable", budget=budget):
        raise ArithmeticError("deformed stability still has strictly semistable points")
    dim = form_r(Q, alpha, alpha) - sum(alpha) + 1
    gd = g.shift(dim)
    for q0 in primes:
        left = eval_at_prime_power(gd, q0, _sqrt_or_none(q0))
        right = count_over_Fq(Qa, Zdef, q0, "stable_moduli", budget=budget)
        report.record(q0, left, Fraction(right))
    report.details["g"] = g
    return _timed(report, start)


def _sqrt_or_none(q0: int) -> Optional[int]:
    from math import isqrt

    s = isqrt(q0)
    return s if s * s == q0 else None


# --- HN recursion for arbitrary dimension vectors ----------------------------------

def hn_recursion_general(
    Q: Quiver, Z: Stability, trunc, upto=None
) -> Dict[object, RayInvariants]:
    """Semistable stack invariants A_Z(alpha) per ray by inverting the HN product.

    The clockwise product of the ray series 1 + sum A_Z(alpha) x^alpha
    equals sum stack_invariant(alpha) x^alpha.  An HN type of alpha is a
    sequence gamma^1 >_Z ... >_Z gamma^s summing to alpha, contributing the
    twisted product of the A_Z(gamma^i); for s = 1 this is A_Z(alpha)
    itself, which is solved for.  ``upto`` restricts to vectors below a
    given alpha (the truncation is then ignored).
    """
    if upto is not None:
        vecs = sorted(sub_vectors(Q.dim(upto)), key=lambda a: (sum(a), a))
    else:
        if isinstance(trunc, int):
            trunc = Truncation.total(Q.n, trunc)
        vecs = trunc.vectors()
    A: dict = {}

    @lru_cache(maxsize=None)
    def tail(rem, bound):
        """Sum over HN sequences of rem whose first part has slope below ``bound``."""
        if not any(rem):
            return ONE
        total = ZERO
        for g in sub_vectors(rem):
            if Z.compare(g, bound) >= 0:
                continue
            rest = sub(rem, g)
            total = total + (A[g] * tail(rest, g)).shift(form_skew(Q, g, rest))
        return total

    for a in vecs:
        value = stack_invariant(Q, a)
        for g in sub_vectors(a):
            if g == a:
                continue
            rest = sub(a, g)
            value = value - (A[g] * tail(rest, g)).shift(form_skew(Q, g, rest))
        A[a] = value
    out: Dict[object, RayInvariants] = {}
    for ray, vs in ray_partition(Z, vecs).items():
        out[ray] = RayInvariants(ray, {a: A[a] for a in vs})
    return out


# --- rank 2: Kontsevich-Soibelman versus the abelian-quiver expansion --------------

def rank2_skew(k: int) -> tuple:
    return ((0, k), (-k, 0))


# two chambers on either side of the wall where e1 and e2 align
C_PLUS = Stability((0, 1), (1, 1))   # mu(e1) < mu(e2)
C_MINUS = Stability((1, 0), (1, 1))  # mu(e1) > mu(e2)


def _ray_exponentials(omega: Mapping, Z: Stability, trunc: Truncation, k: int) -> list:
    """Factors exp(sum_{gamma on ray} omega_gamma x^gamma / (q^(1/2) - q^(-1/2))), ordered by decreasing slope under Z."""
    skew = rank2_skew(k)
    support = [g for g in trunc.vectors() if omega.get(g)]
    out = []
    for ray, vecs in ray_partition(Z, support).items():
        S = QSeries(skew, trunc, {g: omega[g] / GM for g in vecs})
        out.append(series_exp(S))
    return out


def _ks_side(omega: Mapping, Z: Stability, trunc: Truncation, k: int) -> QSeries:
    factors = _ray_exponentials(omega, Z, trunc, k)
    if not factors:
        return QSeries(rank2_skew(k), trunc).one()
    return ordered_product(factors)


def ks_route(k: int, omega_minus: Mapping, trunc: Truncation) -> dict:
    """Solve the KS identity for the clockwise invariants by triangular inversion.

    The anticlockwise side is the product over rays of increasing c+ slope,
    which is decreasing slope under a c- stability.
    """
    target = _ks_side(omega_minus, C_MINUS, trunc, k)
    omega_plus: dict = {}
    for g in trunc.vectors():
        # product with the unknown coefficient at g set to zero
        current = _ks_side(omega_plus, C_PLUS, trunc, k)
        # at degree g an unknown omega_g enters only through the linear term omega_g/GM
        omega_plus[g] = (target[g] - current[g]) * GM
        if not omega_plus[g]:
            del omega_plus[g]
    return omega_plus


def _multiplicity_vectors(points: Sequence[tuple], bound: tuple) -> list:
    """All nonzero m: points -> N with sum m(p) p <= bound componentwise."""
    out = []

    def rec(i, m, acc):
        if i == len(points):
            if any(m):
                out.append(tuple(m))
            return
        p = points[i]
        c = 0
        while all(acc[t] + c * p[t] <= bound[t] for t in range(2)):
            rec(i + 1, m + [c], tuple(acc[t] + c * p[t] for t in range(2)))
            c += 1

    rec(0, [], (0, 0))
    return out


def _norm(m: Sequence[int], points: Sequence[tuple]) -> tuple:
    return tuple(sum(c * p[t] for c, p in zip(m, points)) for t in range(2))


def mps_route(
    k: int,
    omega_minus: Mapping,
    trunc: Truncation,
    Zplus: Stability = C_PLUS,
    budget: Optional[int] = DEFAULT_BUDGET,
) -> tuple:
    """Clockwise invariants from abelian invariants of the charge quiver.

    Returns (omega_plus, g) where g maps multiplicity vectors m to g(m).
    """
    bound = trunc.bounds()
    points = [g for g in trunc.vectors() if omega_minus.get(g)]
    if not points:
        return {}, {}
    hq, pts = charge_quiver(k, points)
    Zq = Zplus.pullback(pts)
    ms = [m for m in _multiplicity_vectors(pts, bound) if trunc.contains(_norm(m, pts))]
    f_plus = {m: f_enum(hq, m, Zq, budget=budget) for m in ms}
    # group by the ray of ||m|| and extract g ray by ray
    rays: dict = {}
    for m in ms:
        rays.setdefault(Zq.slope(m), []).append(m)
    g: dict = {}
    sub_trunc_bounds = tuple(max(m[i] for m in ms) for i in range(len(pts)))
    for ray, members in rays.items():
        member_set = set(members)
        local = Truncation.box(sub_trunc_bounds)
        vals = extract_g({m: f_plus[m] for m in members}, local, skew=hq.skew_matrix())
        for m, val in vals.items():
            if m in member_set and val:
                g[m] = val
    omega_plus: dict = {}
    for m, gm in g.items():
        gamma = _norm(m, pts)
        term = gm / vec_factorial(m)
        for c, p in zip(m, pts):
            if c:
                term = term * omega_minus[p] ** c
        omega_plus[gamma] = omega_plus.get(gamma, ZERO) + term
    return {a: c for a, c in omega_plus.items() if c}, g


@dataclass
class KSMPSResult:
    k: int
    ks: dict
    mps: dict
    g: dict
    report: VerificationReport


def ks_to_mps_rank2(
    k: int,
    omega_minus: Mapping,
    trunc,
    check_chamber: bool = True,
    budget: Optional[int] = DEFAULT_BUDGET,
) -> KSMPSResult:
    """Compute the clockwise invariants by the KS route and by the abelian-quiver route.

    The report compares both coefficient-wise, re-inserts the result into
    the KS identity, and (optionally) confirms that a second c+ stability
    gives the same g(m).
    """
    start = time.perf_counter()
    if not isinstance(trunc, Truncation):
        trunc = Truncation.box(tuple(trunc))
    omega_minus = {tuple(g): (c if isinstance(c, RatFunc) else ONE * c) for g, c in omega_minus.items()}
    ks = ks_route(k, omega_minus, trunc)
    mps, g = mps_route(k, omega_minus, trunc, budget=budget)
    report = VerificationReport(f"KS vs MPS, k={k}")
    for gamma in trunc.vectors():
        report.record(("omega+", gamma), ks.get(gamma, ZERO), mps.get(gamma, ZERO))
    left = _ks_side(mps, C_PLUS, trunc, k)
    right = _ks_side(omega_minus, C_MINUS, trunc, k)
    for gamma in trunc.vectors():
        report.record(("round trip", gamma), left[gamma], right[gamma])
    if check_chamber:
        other = Stability((1, 3), (2, 1))  # another point of c+
        _, g2 = mps_route(k, omega_minus, trunc, other, budget=budget)
        for m in sorted(set(g) | set(g2)):
            report.record(("chamber", m), g.get(m, ZERO), g2.get(m, ZERO))
    return KSMPSResult(k, ks, mps, g, _timed(report, start))


def f_minus_check(k: int, points: Sequence[tuple], bound: tuple, budget: Optional[int] = DEFAULT_BUDGET) -> VerificationReport:
    """Under a c- stability, f(m) is (q^(1/2)-q^(-1/2))^(-|m|) when m sits on one ray and 0 otherwise."""
    start = time.perf_counter()
    report = VerificationReport(f"c- abelian invariants, k={k}")
    hq, pts = charge_quiver(k, points)
    Zq = C_MINUS.pullback(pts)
    for m in _multiplicity_vectors(pts, bound):
        used = [p for c, p in zip(m, pts) if c]
        parallel = all(u[0] * used[0][1] == u[1] * used[0][0] for u in used)
        expected = ONE / GM ** sum(m) if parallel else ZERO
        report.record(m, f_enum(hq, m, Zq, budget=budget), expected)
    return _timed(report, start)


# --- degeneration through the level quiver -----------------------------------------

def _level_factor(l: int, sign_twist: bool) -> RatFunc:
    """(q^(1/2) - q^(-1/2)) / (l (q^(l/2) - q^(-l/2))), times (-1)^(l-1) if sign_twist."""
    den = RatFunc(HalfLaurent({l: l, -l: -l}))
    f = GM / den
    if sign_twist and l % 2 == 0:
        f = -f
    return f


def level_expansion(
    Q: Quiver, Z: Stability, alpha, sign_twist: bool = True, budget: Optional[int] = DEFAULT_BUDGET
) -> RatFunc:
    """Sum over m on the level quiver with ||m|| = alpha of f_Z(Q'(m))/m! times level factors."""
    alpha = Q.dim(alpha)
    L = max(alpha)
    Qp, labels = level_quiver(Q, L)
    images = [tuple(l if t == i else 0 for t in range(Q.n)) for i, l in labels]
    Zp = Z.pullback(images)
    total = ZERO
    for m in _level_vectors(labels, alpha):
        term = f_enum(Qp, m, Zp, budget=budget) / vec_factorial(m)
        for c, (_, l) in zip(m, labels):
            if c:
                term = term * _level_factor(l, sign_twist) ** c
        total = total + term
    return total


def _level_vectors(labels: Sequence[tuple], alpha: tuple) -> list:
    """All m on the level-quiver vertices (i, l) with sum_l l m(i, l) = alpha_i."""
    per_vertex = []
    for i, a in enumerate(alpha):
        idx = [k for k, (j, _) in enumerate(labels) if j == i]
        levels = [labels[k][1] for k in idx]
        choices = []
        for counts in product(*(range(a // l + 1) for l in levels)):
            if sum(c * l for c, l in zip(counts, levels)) == a:
                choices.append(dict(zip(idx, counts)))
        per_vertex.append(choices)
    out = []
    for combo in product(*per_vertex):
        m = [0] * len(labels)
        for d in combo:
            for k, c in d.items():
                m[k] = c
        if any(m):
            out.append(tuple(m))
    return out


def verify_mps_degeneration(
    Q: Quiver, Z: Stability, alpha, sign_twist: bool = True, budget: Optional[int] = DEFAULT_BUDGET
) -> VerificationReport:
    """Compare A_Z(alpha) from the HN recursion with its level-quiver expansion.

    With ``sign_twist`` each level-l factor carries (-1)^(l-1), which is the
    form of the identity valid for the positive square root q^(1/2) used
    throughout this package (see the README).
    """
    start = time.perf_counter()
    alpha = Q.dim(alpha)
    report = VerificationReport(f"level-quiver degeneration {alpha}")
    hn = hn_recursion_general(Q, Z, None, upto=alpha)
    left = hn[Z.slope(alpha)].entries[alpha]
    right = level_expansion(Q, Z, alpha, sign_twist, budget)
    report.record(alpha, left, right)
    return _timed(report, start)


# --- exponential formula over a finite field ---------------------------------------

def verify_exponential_formula(
    Q: Quiver, Z: Stability, q0: int, max_total: int, budget: Optional[int] = DEFAULT_BUDGET
) -> VerificationReport:
    """Per ray, 1 + sum s(a) x^a/a! = exp(sum i(a) x^a/a!) at q = q0.

    s(a) counts semistable and i(a) indecomposable semistable abelian
    representations of Q(a), both divided by |G(Q(a))|(q0) = (q0 - 1)^|a|.
    """
    start = time.perf_counter()
    report = VerificationReport(f"exponential formula q0={q0}")
    trunc = Truncation.total(Q.n, max_total)
    for ray, vecs in ray_partition(Z, trunc.vectors()).items():
        s = {}
        ind = {}
        for a in vecs:
            Qa, proj = covering_quiver(Q, a)
            Za = Z.pullback(Q.unit(i) for i in proj)
            denom = Fraction(q0 - 1) ** sum(a)
            s[a] = Fraction(count_over_Fq(Qa, Za, q0, "semistable", budget=budget)) / denom
            ind[a] = Fraction(count_over_Fq(Qa, Za, q0, "indecomposable", budget=budget), q0 - 1)
        S = QSeries.commutative(trunc, {a: v / vec_factorial(a) for a, v in s.items()})
        I = QSeries.commutative(trunc, {a: v / vec_factorial(a) for a, v in ind.items()})
        E = series_exp(I)
        for a in vecs:
            report.record((ray, a), (S + S.one())[a], E[a])
    return _timed(report, start)
