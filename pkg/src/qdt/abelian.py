"""Abelian representations as spanning subquivers, and the invariants built on them.

An abelian representation of a quiver (dimension one at every vertex) is
determined up to the torus action by its support, a spanning subquiver G,
together with a nonzero scalar on every arrow of G.  Everything in this
module therefore reduces to enumerating edge subsets and weighting each one
by a power of (q - 1).

Two enumeration strategies are provided:

* ``"edges"`` walks literally over all 2^|Q1| edge subsets and tests each
  :class:`Subquiver` with the predicates below.  It is the reference path.
* ``"patterns"`` walks over *pair supports*: the set of ordered vertex pairs
  (i, j), i != j, that carry at least one arrow of G.  Closedness,
  semistability and connectivity only depend on the pair support, and the
  sum of (q-1)^|G1| over all G with a given support P factors as
  q^L * prod_{(i,j) in P} (q^{r_ij} - 1), L being the number of loops.
  This is exponentially cheaper on quivers with multiple arrows.

Loops never influence closedness or connectivity, but they do count in |G1|.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations, product
from math import comb
from typing import Iterable, Optional, Sequence

from .exactalg import ONE_L, ZERO_L, HalfLaurent, RatFunc, eval_at_prime_power, q_int
from .quiver import Quiver, covering_quiver
from .stability import Stability

__all__ = [
    "BudgetExceeded",
    "DEFAULT_BUDGET",
    "Subquiver",
    "ColoredTree",
    "closed_subsets",
    "is_semistable",
    "is_stable",
    "f_quiver",
    "f_enum",
    "f_nonzero",
    "subquiver_sum",
    "a_direct",
    "a_tree_algorithm",
    "TreeTerm",
    "tutte",
    "format_bivariate",
    "semistable_tutte_is_positive",
    "gessel_wang_forward",
    "gessel_wang_backward",
    "inversions",
    "labeled_trees",
    "connected_graphs",
    "b_tree_formula",
    "matrix_tree_count",
    "count_over_Fq",
]

DEFAULT_BUDGET = 1 << 20

# polynomials in q, stored as HalfLaurent with even v-exponents
_Q1 = HalfLaurent({2: 1, 0: -1})  # q - 1


def _q(k: int) -> HalfLaurent:
    return HalfLaurent.monomial(2 * k)


def _qint(m: int) -> HalfLaurent:
    return HalfLaurent({2 * k: 1 for k in range(m)})


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed the caller's budget."""


def _check_budget(size: int, budget: Optional[int], what: str) -> None:
    if budget is not None and size > budget:
        raise BudgetExceeded(f"{what}: {size} candidates exceed the budget of {budget}")


# --- subquivers --------------------------------------------------------------------

@dataclass(frozen=True)
class Subquiver:
    """A spanning subquiver of ``base`` given by a set of arrows (source, target, copy)."""

    base: Quiver
    edges: frozenset

    def __post_init__(self):
        edges = frozenset(tuple(e) for e in self.edges)
        for i, j, k in edges:
            if not (0 <= i < self.base.n and 0 <= j < self.base.n) or not 0 <= k < self.base.r[i][j]:
                raise ValueError(f"arrow {(i, j, k)} is not an arrow of the base quiver")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def full(cls, Q: Quiver) -> "Subquiver":
        return cls(Q, frozenset(Q.arrows()))

    @property
    def n(self) -> int:
        return self.base.n

    def num_edges(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list:
        return sorted(self.edges)

    def _out_masks(self) -> list:
        out = [0] * self.n
        for i, j, _ in self.edges:
            if i != j:
                out[i] |= 1 << j
        return out

    def components(self) -> int:
        """Number of connected components of the underlying undirected graph."""
        return _count_components(self.n, ((i, j) for i, j, _ in self.edges if i != j))

    def is_connected(self) -> bool:
        return self.components() == 1

    def nullity(self) -> int:
        return len(self.edges) - self.n + self.components()

    def closed_masks(self) -> list:
        out = self._out_masks()
        full = (1 << self.n) - 1
        res = []
        for mask in range(1, full):
            if all(not (out[i] & ~mask) for i in range(self.n) if mask >> i & 1):
                res.append(mask)
        return res


def _count_components(n: int, pairs: Iterable) -> int:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    count = n
    for i, j in pairs:
        a, b = find(i), find(j)
        if a != b:
            parent[a] = b
            count -= 1
    return count


def _mask_vector(mask: int, n: int) -> tuple:
    return tuple((mask >> i) & 1 for i in range(n))


def closed_subsets(G: Subquiver) -> list:
    """All proper nonempty subsets I with no arrow of G leaving I, as sorted index tuples."""
    return [tuple(i for i in range(G.n) if m >> i & 1) for m in G.closed_masks()]


def _violates(Z: Stability, n: int, mask: int, strict: bool) -> bool:
    c = Z.compare(_mask_vector(mask, n), (1,) * n)
    return c >= 0 if strict else c > 0


def is_semistable(G: Subquiver, Z: Stability) -> bool:
    """No closed proper subset of G has slope above the slope of all of Q0."""
    return not any(_violates(Z, G.n, m, False) for m in G.closed_masks())


def is_stable(G: Subquiver, Z: Stability) -> bool:
    return not any(_violates(Z, G.n, m, True) for m in G.closed_masks())


# --- pair-support enumeration ------------------------------------------------------

class _Patterns:
    """Precomputed data for enumerating pair supports of a quiver."""

    def __init__(self, Q: Quiver, Z: Optional[Stability]):
        n = Q.n
        self.Q = Q
        self.n = n
        self.loops = sum(Q.r[i][i] for i in range(n))
        self.pairs = [(i, j, Q.r[i][j]) for i in range(n) for j in range(n) if i != j and Q.r[i][j]]
        mults = sorted({m for _, _, m in self.pairs})
        self.mults = mults
        self.class_masks = [
            sum(1 << p for p, (_, _, m) in enumerate(self.pairs) if m == mu) for mu in mults
        ]
        full = (1 << n) - 1
        cross = {}
        for mask in range(1, full):
            c = 0
            for p, (i, j, _) in enumerate(self.pairs):
                if mask >> i & 1 and not mask >> j & 1:
                    c |= 1 << p
            cross[mask] = c
        self.cross = cross
        if Z is None:
            self.ss_constraints = self.st_constraints = []
        else:
            if Z.n != n:
                raise ValueError("stability does not match the quiver")
            self.ss_constraints = _minimal_masks(cross[m] for m in cross if _violates(Z, n, m, False))
            self.st_constraints = _minimal_masks(cross[m] for m in cross if _violates(Z, n, m, True))

    @property
    def size(self) -> int:
        return 1 << len(self.pairs)

    def semistable(self, P: int) -> bool:
        return all(P & c for c in self.ss_constraints)

    def stable(self, P: int) -> bool:
        return all(P & c for c in self.st_constraints)

    def components(self, P: int) -> int:
        return _count_components(
            self.n, ((i, j) for p, (i, j, _) in enumerate(self.pairs) if P >> p & 1)
        )

    def counts(self, P: int) -> tuple:
        return tuple(bin(P & cm).count("1") for cm in self.class_masks)

    def weight(self, counts: Sequence[int], shift: int = 0) -> HalfLaurent:
        """q^L (q-1)^(|P| + shift) prod [m]_q over P; |P| + shift must be >= 0."""
        total = sum(counts) + shift
        if total < 0:
            raise ArithmeticError("negative power of (q - 1) in a pattern weight")
        w = _q(self.loops) * _Q1 ** total
        for m, c in zip(self.mults, counts):
            if c:
                w = w * _qint(m) ** c
        return w


def _minimal_masks(masks: Iterable[int]) -> list:
    """Inclusion-minimal masks; a pattern meeting these meets all of them."""
    masks = sorted(set(masks), key=lambda m: bin(m).count("1"))
    out = []
    for m in masks:
        if not any(o & m == o for o in out):
            out.append(m)
    return out


def _edge_subquivers(Q: Quiver, budget: Optional[int]):
    arrows = Q.arrows()
    _check_budget(1 << len(arrows), budget, "edge enumeration")
    for bits in range(1 << len(arrows)):
        yield Subquiver(Q, frozenset(a for k, a in enumerate(arrows) if bits >> k & 1))


def subquiver_sum(
    Q: Quiver,
    Z: Optional[Stability],
    kind: str = "semistable",
    method: str = "patterns",
    budget: Optional[int] = DEFAULT_BUDGET,
) -> HalfLaurent:
    """Polynomial in q summing (q-1)^|G1| over subquivers G of the given kind.

    ``kind`` is ``"semistable"`` or ``"stable"``; Z=None means all subquivers.
    """
    if kind not in ("semistable", "stable"):
        raise ValueError(f"unknown kind {kind!r}")
    if method == "edges":
        total = ZERO_L
        for G in _edge_subquivers(Q, budget):
            ok = Z is None or (is_semistable(G, Z) if kind == "semistable" else is_stable(G, Z))
            if ok:
                total = total + _Q1 ** G.num_edges()
        return total
    if method != "patterns":
        raise ValueError(f"unknown method {method!r}")
    pat = _Patterns(Q, Z)
    constraints = pat.ss_constraints if kind == "semistable" else pat.st_constraints
    return _split_sum(pat, constraints, budget)


def _half_table(pat: _Patterns, indices: Sequence[int], constraints: Sequence[int]) -> dict:
    """For patterns on ``indices``: {constraint signature: Counter of class counts}."""
    table: dict = {}
    for bits in range(1 << len(indices)):
        P = 0
        for k, p in enumerate(indices):
            if bits >> k & 1:
                P |= 1 << p
        sig = 0
        for t, c in enumerate(constraints):
            if P & c:
                sig |= 1 << t
        table.setdefault(sig, Counter())[pat.counts(P)] += 1
    return table


def _split_sum(pat: _Patterns, constraints: Sequence[int], budget: Optional[int]) -> HalfLaurent:
    """Sum of pattern weights over patterns meeting every constraint mask.

    The pairs are split into two halves; a pattern is admissible iff the
    constraint sets met by its two halves cover all constraints, so only
    the two half tables (2^(p/2) entries each) are enumerated.
    """
    p = len(pat.pairs)
    first, second = list(range(p // 2)), list(range(p // 2, p))
    _check_budget((1 << len(first)) + (1 << len(second)), budget, "pattern enumeration")
    full = (1 << len(constraints)) - 1
    left = _half_table(pat, first, constraints)
    right = _half_table(pat, second, constraints)
    acc = Counter()
    for sa, ca in left.items():
        for sb, cb in right.items():
            if sa | sb != full:
                continue
            for ka, na in ca.items():
                for kb, nb in cb.items():
                    acc[tuple(x + y for x, y in zip(ka, kb))] += na * nb
    total = ZERO_L
    for counts, c in acc.items():
        total = total + pat.weight(counts) * c
    return total


def f_quiver(
    Q: Quiver, Z: Optional[Stability] = None, method: str = "patterns", budget: Optional[int] = DEFAULT_BUDGET
) -> RatFunc:
    """f_Z(Q) = q^((|Q0| - |Q1|)/2) * sum_G (q-1)^|G1| / (q-1)^|Q0| over Z-semistable G."""
    if Z is None:
        Z = Stability.trivial(Q.n)
    s = subquiver_sum(Q, Z, "semistable", method, budget)
    return RatFunc(s.shift(Q.n - Q.num_arrows()), _Q1 ** Q.n)


def f_enum(
    Q: Quiver,
    alpha,
    Z: Optional[Stability] = None,
    method: str = "patterns",
    budget: Optional[int] = DEFAULT_BUDGET,
) -> RatFunc:
    """The abelian invariant f_Z(alpha), by enumerating subquivers of the covering quiver Q(alpha)."""
    alpha = Q.dim(alpha)
    if not any(alpha):
        raise ValueError("f_enum needs a nonzero dimension vector")
    if Z is None:
        Z = Stability.trivial(Q.n)
    Qa, proj = covering_quiver(Q, alpha)
    Za = Z.pullback(Q.unit(i) for i in proj)
    return f_quiver(Qa, Za, method, budget)


def f_nonzero(Q: Quiver, alpha, Z: Stability) -> bool:
    """Whether f_Z(alpha) != 0.

    Adding arrows to a semistable subquiver keeps it semistable, so some
    semistable G exists iff the full covering quiver is semistable.
    """
    alpha = Q.dim(alpha)
    Qa, proj = covering_quiver(Q, alpha)
    Za = Z.pullback(Q.unit(i) for i in proj)
    pat = _Patterns(Qa, Za)
    return pat.semistable((1 << len(pat.pairs)) - 1)


# --- indecomposables ---------------------------------------------------------------

def a_direct(
    Q: Quiver,
    Z: Optional[Stability] = None,
    method: str = "patterns",
    budget: Optional[int] = DEFAULT_BUDGET,
) -> HalfLaurent:
    """a_Z(Q) = sum over connected semistable spanning G of (q-1)^n(G), a polynomial in q."""
    if Z is None:
        Z = Stability.trivial(Q.n)
    if Q.n == 0:
        return ZERO_L
    if method == "edges":
        total = ZERO_L
        for G in _edge_subquivers(Q, budget):
            if G.is_connected() and is_semistable(G, Z):
                total = total + _Q1 ** G.nullity()
        return total
    pat = _Patterns(Q, Z)
    _check_budget(pat.size, budget, "pattern enumeration")
    acc = Counter()
    for P in range(pat.size):
        if pat.semistable(P) and pat.components(P) == 1:
            acc[pat.counts(P)] += 1
    total = ZERO_L
    for counts, c in acc.items():
        total = total + pat.weight(counts, 1 - Q.n) * c
    return total


@dataclass(frozen=True)
class TreeTerm:
    tree: tuple  # sorted arrows of T
    externally_active: tuple  # sorted arrows of E(T)


def a_tree_algorithm(
    Q: Quiver,
    Z: Optional[Stability] = None,
    arrow_order: Optional[Sequence] = None,
    return_trees: bool = False,
    budget: Optional[int] = DEFAULT_BUDGET,
):
    """a_Z(Q) as sum over pruned trees T of q^|E(T)|.

    For G in C_Z (connected, semistable) let A(G) be the arrows whose removal
    stays in C_Z and a(G) = min A(G) in ``arrow_order``.  The sets with
    A(T) empty form the tree set, and E(T) collects the arrows b outside T
    with a(T + b) = b.  Every coefficient of the result is visibly a count.
    """
    if Z is None:
        Z = Stability.trivial(Q.n)
    arrows = Q.arrows()
    if arrow_order is None:
        arrow_order = arrows
    arrow_order = [tuple(a) for a in arrow_order]
    if sorted(arrow_order) != arrows:
        raise ValueError("arrow_order must be a permutation of the arrows of Q")
    _check_budget(1 << len(arrows), budget, "tree algorithm")
    rank = {a: k for k, a in enumerate(arrow_order)}
    bit = {a: 1 << k for k, a in enumerate(arrow_order)}
    m = len(arrow_order)

    member = {}
    for bits in range(1 << m):
        G = Subquiver(Q, frozenset(a for a in arrow_order if bits & bit[a]))
        member[bits] = G.is_connected() and is_semistable(G, Z)

    def active(bits):
        return [a for a in arrow_order if bits & bit[a] and member[bits & ~bit[a]]]

    total = ZERO_L
    terms = []
    for bits in range(1 << m):
        if not member[bits] or active(bits):
            continue
        ext = []
        for b in arrow_order:
            if bits & bit[b]:
                continue
            bigger = bits | bit[b]
            if member[bigger] and min(active(bigger), key=rank.__getitem__) == b:
                ext.append(b)
        total = total + _q(len(ext))
        terms.append(
            TreeTerm(tuple(sorted(a for a in arrow_order if bits & bit[a])), tuple(sorted(ext)))
        )
    terms.sort(key=lambda t: t.tree)
    return (total, terms) if return_trees else total


# --- Tutte polynomials -------------------------------------------------------------

def _bivariate_add(acc: dict, poly_t: dict, poly_q: HalfLaurent, scale: int) -> None:
    for i, ct in poly_t.items():
        for e, cq in poly_q.coeffs.items():
            key = (i, e // 2)
            acc[key] = acc.get(key, 0) + scale * ct * cq


def _t_minus_one_pow(k: int) -> dict:
    return {i: comb(k, i) * (-1) ** (k - i) for i in range(k + 1)}


def tutte(
    Q: Quiver,
    Z: Optional[Stability] = None,
    budget: Optional[int] = DEFAULT_BUDGET,
) -> dict:
    """Tutte polynomial sum_G (t-1)^(kappa(G) - kappa(Q)) (q-1)^n(G) as {(deg_t, deg_q): coeff}.

    With Z given, only Z-semistable G are summed (the semistable Tutte polynomial).
    """
    pat = _Patterns(Q, Z)
    _check_budget(pat.size, budget, "pattern enumeration")
    kq = pat.components(pat.size - 1)
    acc = Counter()
    for P in range(pat.size):
        if Z is None or pat.semistable(P):
            acc[(pat.counts(P), pat.components(P))] += 1
    out: dict = {}
    for (counts, kappa), c in acc.items():
        w = pat.weight(counts, kappa - Q.n)
        _bivariate_add(out, _t_minus_one_pow(kappa - kq), w, c)
    return {k: v for k, v in sorted(out.items()) if v}


def _monomial_text(var: str, e: int) -> str:
    return "" if e == 0 else (var if e == 1 else f"{var}^{e}")


def format_bivariate(poly: dict) -> str:
    """Render {(i, j): c} as a polynomial in t and q, highest total degree first."""
    if not poly:
        return "0"
    parts = []
    for (i, j), c in sorted(poly.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][0])):
        mono = "*".join(x for x in (_monomial_text("t", i), _monomial_text("q", j)) if x)
        a = abs(c)
        body = (str(a) if not mono else (mono if a == 1 else f"{a}*{mono}"))
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def semistable_tutte_is_positive(Q: Quiver, Z: Stability, budget: Optional[int] = DEFAULT_BUDGET) -> bool:
    """Empirical check that the semistable Tutte polynomial has nonnegative coefficients.

    This positivity is conjectural; the function only reports what it observes.
    """
    return all(c >= 0 for c in tutte(Q, Z, budget).values())


# --- trees, inversions and the Gessel-Wang bijection -------------------------------

@dataclass(frozen=True)
class ColoredTree:
    """A tree on the ordered node set 0 < 1 < ... < n-1, rooted at 0.

    ``parent[x]`` is the parent of x (``parent[0]`` is None); ``colors[x]``
    is the color of node x.
    """

    parent: tuple
    colors: Optional[tuple] = None

    def __post_init__(self):
        parent = tuple(self.parent)
        n = len(parent)
        if n == 0 or parent[0] is not None:
            raise ValueError("the root must be node 0 and have no parent")
        for x in range(1, n):
            seen = set()
            y = x
            while y != 0:
                if y in seen or parent[y] is None or not 0 <= parent[y] < n:
                    raise ValueError("parent map does not describe a tree rooted at 0")
                seen.add(y)
                y = parent[y]
        object.__setattr__(self, "parent", parent)
        if self.colors is not None and len(self.colors) != n:
            raise ValueError("one color per node is required")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable, colors=None) -> "ColoredTree":
        adj = {x: [] for x in range(n)}
        count = 0
        for a, b in edges:
            adj[a].append(b)
            adj[b].append(a)
            count += 1
        if count != n - 1:
            raise ValueError("a tree on n nodes has n - 1 edges")
        parent = [None] * n
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    parent[y] = x
                    stack.append(y)
        if len(seen) != n:
            raise ValueError("edges do not form a spanning tree")
        return cls(tuple(parent), colors)

    @property
    def n(self) -> int:
        return len(self.parent)

    def edges(self) -> frozenset:
        return frozenset(_edge(x, self.parent[x]) for x in range(1, self.n))

    def strict_ancestors(self, y: int) -> list:
        out = []
        while self.parent[y] is not None:
            y = self.parent[y]
            out.append(y)
        return out


def _edge(a: int, b: int) -> tuple:
    return (a, b) if a < b else (b, a)


def inversions(T: ColoredTree) -> list:
    """Pairs (x, y) with x a strict ancestor of y and x > y, sorted."""
    return sorted((x, y) for y in range(T.n) for x in T.strict_ancestors(y) if x > y)


def _graph_connected(n: int, edges) -> bool:
    return _count_components(n, edges) == 1


def gessel_wang_forward(n: int, edges: Iterable) -> tuple:
    """Map a connected graph on {0..n-1} to (T, J) with J a subset of the inversions of T.

    T is the depth-first search tree from node 0 that always moves to the
    largest unvisited neighbour; J records every non-tree edge {p(j), k}
    as the inversion (j, k).
    """
    G = frozenset(_edge(a, b) for a, b in edges)
    if any(a == b for a, b in G):
        raise ValueError("graphs here are simple: no loops")
    if not _graph_connected(n, G):
        raise ValueError("the graph is not connected")
    adj = {x: set() for x in range(n)}
    for a, b in G:
        adj[a].add(b)
        adj[b].add(a)
    parent = [None] * n
    visited = {0}
    path = [0]
    while path:
        x = path[-1]
        fresh = [y for y in adj[x] if y not in visited]
        if fresh:
            y = max(fresh)
            parent[y] = x
            visited.add(y)
            path.append(y)
        else:
            path.pop()
    T = ColoredTree(tuple(parent))
    tree_edges = T.edges()
    J = sorted(
        (j, k) for j, k in inversions(T) if _edge(T.parent[j], k) in G and _edge(T.parent[j], k) not in tree_edges
    )
    return T, tuple(J)


def gessel_wang_backward(T: ColoredTree, J: Iterable) -> frozenset:
    """Inverse of :func:`gessel_wang_forward`: the edges of T plus {p(j), k} for (j, k) in J."""
    inv = set(inversions(T))
    out = set(T.edges())
    for j, k in J:
        if (j, k) not in inv:
            raise ValueError(f"{(j, k)} is not an inversion of the tree")
        out.add(_edge(T.parent[j], k))
    return frozenset(out)


def _prufer_decode(code: Sequence[int], n: int) -> list:
    degree = [1] * n
    for x in code:
        degree[x] += 1
    edges = []
    for x in code:
        leaf = min(i for i in range(n) if degree[i] == 1)
        edges.append(_edge(leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, w = [i for i in range(n) if degree[i] == 1]
    edges.append(_edge(u, w))
    return edges


def labeled_trees(n: int, colors=None) -> list:
    """All n^(n-2) trees on {0..n-1}, rooted at 0, decoded from Pruefer sequences."""
    if n < 1:
        raise ValueError("need at least one node")
    if n == 1:
        return [ColoredTree((None,), colors)]
    if n == 2:
        return [ColoredTree((None, 0), colors)]
    return [ColoredTree.from_edges(n, _prufer_decode(code, n), colors) for code in product(range(n), repeat=n - 2)]


def connected_graphs(n: int) -> list:
    """All connected simple graphs on {0..n-1}, as frozensets of sorted edge pairs."""
    all_pairs = list(combinations(range(n), 2))
    out = []
    for bits in range(1 << len(all_pairs)):
        edges = frozenset(p for k, p in enumerate(all_pairs) if bits >> k & 1)
        if n == 1 or _graph_connected(n, edges):
            out.append(edges)
    return out


# --- spanning-tree formulas --------------------------------------------------------

def b_tree_formula(r_matrix: Sequence[Sequence[int]], alpha: Sequence[int]) -> RatFunc:
    """The colored-tree polynomial b_alpha for a symmetric integer matrix r.

    Nodes are alpha_i copies of each color i, ordered color by color; each
    tree rooted at the smallest node contributes, for every edge {x, y}, the
    quantum integer [r_{c(x) c(y)}]_q and, for every inversion (x, y), the
    power q^{r_{c(p(x)) c(y)}}.  The sum is multiplied by q^{(sum_i r_ii alpha_i)/2}.
    """
    alpha = [int(a) for a in alpha]
    n = len(alpha)
    if any(len(row) != n for row in r_matrix):
        raise ValueError("matrix size does not match the composition")
    if any(r_matrix[i][j] != r_matrix[j][i] for i in range(n) for j in range(n)):
        raise ValueError("b_tree_formula needs a symmetric matrix")
    colors = tuple(i for i in range(n) for _ in range(alpha[i]))
    size = len(colors)
    if size == 0:
        raise ValueError("alpha must be nonzero")
    total = ZERO_L
    qints = {}
    for T in labeled_trees(size, colors):
        term = ONE_L
        for x in range(1, size):
            m = r_matrix[colors[x]][colors[T.parent[x]]]
            if m not in qints:
                qints[m] = q_int(m).num
            term = term * qints[m]
        exp = sum(r_matrix[colors[T.parent[x]]][colors[y]] for x, y in inversions(T))
        total = total + term.shift(2 * exp)
    pref = sum(r_matrix[i][i] * alpha[i] for i in range(n))
    return RatFunc(total.shift(pref))


def matrix_tree_count(r_matrix: Sequence[Sequence[int]], alpha: Sequence[int]) -> int:
    """Number of spanning trees of the multigraph on alpha_i copies of each color.

    Distinct nodes of colors i, j are joined by r_ij parallel edges; loops are
    ignored.  Computed as a Laplacian cofactor with sympy's exact determinant.
    """
    import sympy

    colors = [i for i in range(len(alpha)) for _ in range(int(alpha[i]))]
    size = len(colors)
    if size == 0:
        raise ValueError("alpha must be nonzero")
    if size == 1:
        return 1
    L = sympy.zeros(size, size)
    for x in range(size):
        for y in range(size):
            if x != y:
                L[x, y] = -r_matrix[colors[x]][colors[y]]
        L[x, x] = -sum(L[x, y] for y in range(size) if y != x)
    return int(L[1:, 1:].det())


# --- finite-field counts -----------------------------------------------------------

def _literal_scalar_count(Q: Quiver, Z: Stability, q0: int, test) -> int:
    """Count arrow-scalar assignments in F_q0 whose support satisfies ``test``."""
    arrows = Q.arrows()
    cache = {}
    total = 0
    for values in product(range(q0), repeat=len(arrows)):
        support = frozenset(a for a, x in zip(arrows, values) if x)
        if support not in cache:
            cache[support] = test(Subquiver(Q, support))
        total += cache[support]
    return total


def count_over_Fq(
    Q: Quiver,
    Z: Optional[Stability],
    q0: int,
    mode: str = "semistable",
    literal: bool = False,
    budget: Optional[int] = DEFAULT_BUDGET,
):
    """Point counts of abelian representations of Q over F_q0.

    ``semistable``: number of Z-semistable abelian representations (an integer).
    ``indecomposable``: isomorphism classes of indecomposable semistable ones.
    ``stable_moduli``: stable representations divided by the free torus
    action, which must come out integral.  ``literal=True`` enumerates all
    scalar assignments instead of summing (q0 - 1)^|G1| per support.
    """
    q0 = int(q0)
    if q0 < 2:
        raise ValueError("q0 must be a prime power >= 2")
    if Z is None:
        Z = Stability.trivial(Q.n)
    n = Q.n
    if literal:
        _check_budget(q0 ** Q.num_arrows(), budget, "literal point count")
        if mode == "semistable":
            return _literal_scalar_count(Q, Z, q0, lambda G: is_semistable(G, Z))
        if mode == "stable_moduli":
            c = _literal_scalar_count(Q, Z, q0, lambda G: is_stable(G, Z))
            return _divide_exact(c, (q0 - 1) ** (n - 1))
        if mode == "indecomposable":
            c = _literal_scalar_count(Q, Z, q0, lambda G: G.is_connected() and is_semistable(G, Z))
            # connected supports have a torus stabilizer of size q0 - 1
            return _divide_exact(c, (q0 - 1) ** (n - 1))
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "semistable":
        return _eval_int(subquiver_sum(Q, Z, "semistable", budget=budget), q0)
    if mode == "indecomposable":
        return _eval_int(a_direct(Q, Z, budget=budget), q0)
    if mode == "stable_moduli":
        c = _eval_int(subquiver_sum(Q, Z, "stable", budget=budget), q0)
        return _divide_exact(c, (q0 - 1) ** (n - 1))
    raise ValueError(f"unknown mode {mode!r}")


def _eval_int(p: HalfLaurent, q0: int) -> int:
    value = eval_at_prime_power(RatFunc(p), q0)
    if value.denominator != 1:
        raise ArithmeticError(f"expected an integer count, got {value}")
    return int(value)


def _divide_exact(c: int, d: int) -> int:
    if c % d:
        raise ArithmeticError(f"point count {c} is not divisible by {d}: stability bookkeeping is inconsistent")
    return c // d
