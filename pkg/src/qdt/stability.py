"""Central charges Z = -d + i*r with exact slope arithmetic.

Conventions shared by the whole package: slope mu(alpha) = d(alpha)/r(alpha),
vectors with r(alpha) = 0 have slope +infinity, and the clockwise order on
rays is the order of *decreasing* slope.
"""

from __future__ import annotations

import json
import random
from collections import OrderedDict
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, NamedTuple, Optional, Sequence, Union

from .quiver import Quiver, form_skew, sub_vectors, vectors_up_to_total

__all__ = [
    "Stability",
    "RayKey",
    "slope_compare",
    "ray_key",
    "ray_partition",
    "deform_generic",
    "ray_symmetric",
    "DeformationError",
    "RaySymmetry",
    "check_deformation",
]

INF = float("inf")
RayKey = Union[Fraction, float]


class DeformationError(RuntimeError):
    pass


class RaySymmetry(NamedTuple):
    ok: bool
    pair: Optional[tuple]

    def __bool__(self):
        return self.ok


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(str(x))


@dataclass(frozen=True)
class Stability:
    d: tuple
    r: tuple

    def __post_init__(self):
        d = tuple(_frac(x) for x in self.d)
        r = tuple(_frac(x) for x in self.r)
        if len(d) != len(r):
            raise ValueError("d and r must have the same length")
        for di, ri in zip(d, r):
            if ri < 0 or (ri == 0 and di <= 0):
                raise ValueError(f"Z = {-di} + {ri}i is not in the upper half plane H+")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "r", r)

    @classmethod
    def trivial(cls, n: int) -> "Stability":
        return cls((0,) * n, (1,) * n)

    @classmethod
    def from_slopes(cls, slopes: Sequence) -> "Stability":
        return cls(tuple(slopes), (1,) * len(slopes))

    @classmethod
    def from_json(cls, data: Union[str, Mapping], quiver: Quiver) -> "Stability":
        if isinstance(data, str):
            data = json.loads(data)
        d = [Fraction(0)] * quiver.n
        r = [Fraction(1)] * quiver.n
        for v, x in data.get("d", {}).items():
            d[quiver.index(v)] = Fraction(str(x))
        for v, x in data.get("r", {}).items():
            r[quiver.index(v)] = Fraction(str(x))
        return cls(tuple(d), tuple(r))

    def to_json(self, quiver: Quiver) -> dict:
        return {
            "d": {v: str(x) for v, x in zip(quiver.vertices, self.d)},
            "r": {v: str(x) for v, x in zip(quiver.vertices, self.r)},
        }

    @property
    def n(self) -> int:
        return len(self.d)

    def d_of(self, alpha) -> Fraction:
        return sum((a * x for a, x in zip(alpha, self.d) if a), Fraction(0))

    def r_of(self, alpha) -> Fraction:
        return sum((a * x for a, x in zip(alpha, self.r) if a), Fraction(0))

    def slope(self, alpha) -> RayKey:
        if not any(alpha):
            raise ValueError("the slope of the zero vector is undefined")
        rr = self.r_of(alpha)
        if rr == 0:
            return INF
        return self.d_of(alpha) / rr

    def compare(self, alpha, beta) -> int:
        """Sign of mu(alpha) - mu(beta), computed by cross-multiplication."""
        if not any(alpha) or not any(beta):
            raise ValueError("slope comparison needs nonzero vectors")
        x = self.d_of(alpha) * self.r_of(beta) - self.d_of(beta) * self.r_of(alpha)
        return (x > 0) - (x < 0)

    def is_trivial(self) -> bool:
        units = [tuple(1 if k == i else 0 for k in range(self.n)) for i in range(self.n)]
        return all(self.compare(units[0], u) == 0 for u in units[1:])

    def pullback(self, images: Iterable[Sequence[int]]) -> "Stability":
        """Induced stability along a lattice map sending new basis vector k to images[k]."""
        images = list(images)
        return Stability(
            tuple(self.d_of(img) for img in images),
            tuple(self.r_of(img) for img in images),
        )

    def restrict(self, keep: Sequence[int]) -> "Stability":
        return Stability(tuple(self.d[i] for i in keep), tuple(self.r[i] for i in keep))

    def perturb(self, other: "Stability", eps: Fraction) -> "Stability":
        return Stability(
            tuple(a + eps * b for a, b in zip(self.d, other.d)),
            tuple(a + eps * b for a, b in zip(self.r, other.r)),
        )


def slope_compare(Z: Stability, alpha, beta) -> str:
    c = Z.compare(alpha, beta)
    return "<" if c < 0 else (">" if c > 0 else "=")


def ray_key(Z: Stability, alpha) -> RayKey:
    return Z.slope(alpha)


def ray_partition(Z: Stability, vectors: Iterable) -> "OrderedDict[RayKey, list]":
    """Group vectors by ray, rays listed clockwise (decreasing slope)."""
    groups: dict = {}
    for v in vectors:
        groups.setdefault(Z.slope(v), []).append(tuple(v))
    return OrderedDict(sorted(groups.items(), key=lambda kv: kv[0], reverse=True))


# --- generic deformation -----------------------------------------------------------

def _subset_vector(mask: int, n: int) -> tuple:
    return tuple((mask >> i) & 1 for i in range(n))


def _slope_sort_key(Z: Stability, vec) -> tuple:
    s = Z.slope(vec)
    return (1, Fraction(0)) if s == INF else (0, s)


def check_deformation(Z: Stability, Zdef: Stability) -> Optional[str]:
    """None if Zdef separates all subset slopes and refines the order of Z, else a reason.

    Sorting subsets by (mu_Z, mu_Zdef), both conditions together say that
    mu_Zdef is strictly increasing along the sorted list.
    """
    n = Z.n
    vecs = [_subset_vector(m, n) for m in range(1, 1 << n)]
    keyed = sorted(vecs, key=lambda v: (_slope_sort_key(Z, v), _slope_sort_key(Zdef, v)))
    for a, b in zip(keyed, keyed[1:]):
        c = Zdef.compare(a, b)
        if c == 0:
            return f"subsets {a} and {b} have equal deformed slope"
        if c > 0:
            return f"deformation reverses the order of {a} and {b}"
    return None


def deform_generic(
    Q: Quiver, Z: Stability, seed: int = 0, attempts: int = 20, shrink_steps: int = 60
) -> Stability:
    """A deformation Z + eps*Z' with pairwise distinct slopes on all vertex subsets.

    The returned stability also preserves every strict inequality of Z between
    subset slopes.  Both properties are verified exhaustively over the
    2^n - 1 nonempty subsets.
    """
    n = Z.n
    if Q.n != n:
        raise ValueError("stability and quiver have different vertex counts")
    if n <= 1:
        return Z
    rng = random.Random(seed)
    for _ in range(attempts):
        dp = rng.sample(range(1, 10 ** 6), n)
        rp = [rng.randrange(1, 10 ** 3) for _ in range(n)]
        Zp = Stability(tuple(dp), tuple(rp))
        eps = Fraction(1, 10 ** 7)
        for _ in range(shrink_steps):
            Zdef = Z.perturb(Zp, eps)
            if check_deformation(Z, Zdef) is None:
                return Zdef
            eps /= 16
    raise DeformationError(f"no verified generic deformation found for seed {seed}")


# --- ray symmetry gate ---------------------------------------------------------

def ray_symmetric(
    Q: Quiver,
    Z: Stability,
    ray: RayKey,
    bound: int,
    nonzero: Optional[Callable] = None,
    within: Optional[Sequence[int]] = None,
) -> RaySymmetry:
    """Check <alpha, beta> = 0 for all alpha, beta on ``ray`` with f_Z != 0.

    Vectors range over |alpha| <= bound (or over alpha <= ``within`` when
    given).  The result is truthy iff the ray is symmetric; ``pair`` holds
    the first violating (alpha, beta).  ``nonzero`` decides
    f_Z(alpha) != 0; by default the full covering quiver Q(alpha) is tested
    for semistability, which is equivalent because semistable spanning
    subquivers are closed under adding arrows.
    """
    if nonzero is None:
        from .abelian import f_nonzero

        def nonzero(alpha):
            return f_nonzero(Q, alpha, Z)

    if within is not None:
        candidates = list(sub_vectors(within))
    else:
        candidates = vectors_up_to_total(Q.n, bound)
    on_ray = [a for a in candidates if Z.slope(a) == ray and nonzero(a)]
    for i, a in enumerate(on_ray):
        for b in on_ray[i + 1:]:
            if form_skew(Q, a, b) != 0:
                return RaySymmetry(False, (a, b))
    return RaySymmetry(True, None)
