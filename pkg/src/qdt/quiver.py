"""Quivers, dimension vectors and their bilinear forms.

A quiver is stored as its arrow-multiplicity matrix ``r[i][j]`` (number of
arrows i -> j) over an ordered list of string vertex ids.  Dimension vectors
are plain tuples of nonnegative ints aligned with ``Quiver.vertices``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product
from math import factorial
from typing import Iterable, Iterator, Mapping, Sequence, Union

__all__ = [
    "Quiver",
    "DimVector",
    "form_r",
    "form_euler",
    "form_skew",
    "covering_quiver",
    "charge_quiver",
    "level_quiver",
    "charge_id",
    "vec_factorial",
    "sub_vectors",
    "vectors_up_to_total",
    "add",
    "sub",
    "scale",
]

DimVector = tuple


@dataclass(frozen=True)
class Quiver:
    vertices: tuple
    r: tuple  # r[i][j] = number of arrows vertices[i] -> vertices[j]

    def __post_init__(self):
        verts = tuple(str(v) for v in self.vertices)
        if len(set(verts)) != len(verts):
            raise ValueError("vertex ids must be unique")
        n = len(verts)
        mat = tuple(tuple(int(x) for x in row) for row in self.r)
        if len(mat) != n or any(len(row) != n for row in mat):
            raise ValueError("multiplicity matrix must be square of size |Q0|")
        if any(x < 0 for row in mat for x in row):
            raise ValueError("arrow multiplicities must be nonnegative")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "r", mat)

    @classmethod
    def from_arrows(cls, vertices: Sequence, arrows: Iterable) -> "Quiver":
        """Build from (source, target[, multiplicity]) triples."""
        verts = [str(v) for v in vertices]
        index = {v: i for i, v in enumerate(verts)}
        mat = [[0] * len(verts) for _ in verts]
        for arrow in arrows:
            s, t = str(arrow[0]), str(arrow[1])
            m = int(arrow[2]) if len(arrow) > 2 else 1
            if s not in index or t not in index:
                raise KeyError(f"arrow {s}->{t} uses an unknown vertex")
            mat[index[s]][index[t]] += m
        return cls(tuple(verts), tuple(tuple(row) for row in mat))

    @classmethod
    def from_json(cls, data: Union[str, Mapping]) -> "Quiver":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_arrows(data["vertices"], data.get("arrows", []))

    def to_json(self) -> dict:
        arrows = [
            [self.vertices[i], self.vertices[j], m]
            for i, row in enumerate(self.r)
            for j, m in enumerate(row)
            if m
        ]
        return {"vertices": list(self.vertices), "arrows": arrows}

    @property
    def n(self) -> int:
        return len(self.vertices)

    def index(self, vertex) -> int:
        try:
            return self.vertices.index(str(vertex))
        except ValueError:
            raise KeyError(f"unknown vertex {vertex!r}") from None

    def num_arrows(self) -> int:
        return sum(map(sum, self.r))

    def is_symmetric(self) -> bool:
        return all(self.r[i][j] == self.r[j][i] for i in range(self.n) for j in range(self.n))

    def arrows(self) -> list:
        """Individual arrows as (source, target, copy-index), lexicographic."""
        return [
            (i, j, k)
            for i, row in enumerate(self.r)
            for j, m in enumerate(row)
            for k in range(m)
        ]

    def dim(self, alpha: Union[Mapping, Sequence, int, None] = None) -> DimVector:
        """Normalize a dimension vector given as mapping, sequence, or unit-vertex id."""
        if alpha is None:
            return (1,) * self.n
        if isinstance(alpha, Mapping):
            out = [0] * self.n
            for v, a in alpha.items():
                out[self.index(v)] = int(a)
            return tuple(out)
        vec = tuple(int(a) for a in alpha)
        if len(vec) != self.n:
            raise ValueError(f"dimension vector of length {len(vec)} for a quiver with {self.n} vertices")
        return vec

    def unit(self, i: int) -> DimVector:
        return tuple(1 if k == i else 0 for k in range(self.n))

    def skew_matrix(self) -> tuple:
        """Matrix of <e_i, e_j> = r(j, i) - r(i, j)."""
        return tuple(
            tuple(self.r[j][i] - self.r[i][j] for j in range(self.n)) for i in range(self.n)
        )

    def restrict(self, keep: Sequence[int]) -> "Quiver":
        keep = list(keep)
        return Quiver(
            tuple(self.vertices[i] for i in keep),
            tuple(tuple(self.r[i][j] for j in keep) for i in keep),
        )


def _check(Q: Quiver, alpha) -> DimVector:
    if len(alpha) != Q.n:
        raise KeyError(f"dimension vector {alpha} does not match the {Q.n} vertices of the quiver")
    return alpha


def form_r(Q: Quiver, alpha, beta) -> int:
    """r(alpha, beta) = sum over arrows i->j of alpha_i * beta_j."""
    _check(Q, alpha)
    _check(Q, beta)
    return sum(
        alpha[i] * Q.r[i][j] * beta[j]
        for i in range(Q.n) if alpha[i]
        for j in range(Q.n) if beta[j]
    )


def form_euler(Q: Quiver, alpha, beta) -> int:
    return sum(a * b for a, b in zip(_check(Q, alpha), _check(Q, beta))) - form_r(Q, alpha, beta)


def form_skew(Q: Quiver, alpha, beta) -> int:
    return form_r(Q, beta, alpha) - form_r(Q, alpha, beta)


def covering_quiver(Q: Quiver, alpha) -> tuple[Quiver, list]:
    """The quiver Q(alpha) with vertices i_k, 1 <= k <= alpha_i.

    Returns the quiver and the projection as a list mapping each new vertex
    index to its base vertex index.
    """
    alpha = Q.dim(alpha)
    if any(a < 0 for a in alpha):
        raise ValueError("dimension vector must be nonnegative")
    proj = [i for i in range(Q.n) for _ in range(alpha[i])]
    names = [f"{Q.vertices[i]}[{k + 1}]" for i in range(Q.n) for k in range(alpha[i])]
    mat = tuple(tuple(Q.r[i][j] for j in proj) for i in proj)
    return Quiver(tuple(names), mat), proj


def charge_id(gamma: Sequence[int]) -> str:
    return "(" + ",".join(str(int(x)) for x in gamma) + ")"


def _lattice_skew(k: int, a, b) -> int:
    return k * (a[0] * b[1] - a[1] * b[0])


def charge_quiver(k: int, support: Iterable[Sequence[int]]) -> tuple[Quiver, list]:
    """Finite truncation of the rank-2 charge quiver for <e1, e2> = k.

    Vertices are the given lattice points; there are <beta, alpha> arrows
    alpha -> beta when that number is positive.  Returns the quiver and the
    list of lattice points labelling its vertices (the map ||.||).
    """
    if k == 0:
        raise ValueError("the skew form must be nondegenerate (k != 0)")
    pts = []
    for g in support:
        g = tuple(int(x) for x in g)
        if len(g) != 2 or min(g) < 0 or g == (0, 0):
            raise ValueError(f"{g} is not a nonzero point of N^2")
        if g not in pts:
            pts.append(g)
    mat = tuple(
        tuple(max(_lattice_skew(k, beta, alpha), 0) for beta in pts) for alpha in pts
    )
    return Quiver(tuple(charge_id(g) for g in pts), mat), pts


def level_quiver(Q: Quiver, max_level: int) -> tuple[Quiver, list]:
    """The quiver Q' with vertices i_l (1 <= l <= L) and l*l'*r(i,j) arrows i_l -> j_l'.

    Returns the quiver and the projection as a list of (base index, level)
    pairs; the lattice map is i_l -> l*i.
    """
    if max_level < 1:
        raise ValueError("max_level must be at least 1")
    labels = [(i, l) for i in range(Q.n) for l in range(1, max_level + 1)]
    names = [f"{Q.vertices[i]}<{l}>" for i, l in labels]
    mat = tuple(
        tuple(l * l2 * Q.r[i][j] for j, l2 in labels) for i, l in labels
    )
    return Quiver(tuple(names), mat), labels


# --- small vector helpers ------------------------------------------------------

def add(a, b) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def sub(a, b) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def scale(c: int, a) -> tuple:
    return tuple(c * x for x in a)


def vec_factorial(alpha) -> int:
    out = 1
    for a in alpha:
        out *= factorial(a)
    return out


def sub_vectors(alpha, include_zero: bool = False) -> Iterator[tuple]:
    """All beta with 0 <= beta <= alpha componentwise."""
    for beta in product(*(range(a + 1) for a in alpha)):
        if include_zero or any(beta):
            yield beta


def vectors_up_to_total(n: int, max_total: int, min_total: int = 1) -> list:
    """All beta in N^n with min_total <= |beta| <= max_total, sorted by (|beta|, beta)."""
    out = [
        beta
        for beta in product(range(max_total + 1), repeat=n)
        if min_total <= sum(beta) <= max_total
    ]
    out.sort(key=lambda b: (sum(b), b))
    return out
