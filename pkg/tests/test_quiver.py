import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdt.quiver import (
    Quiver,
    charge_quiver,
    covering_quiver,
    form_euler,
    form_r,
    form_skew,
    level_quiver,
    sub_vectors,
    vectors_up_to_total,
)


def test_form_r_on_kronecker():
    Q = Quiver.from_arrows(["1", "2"], [("2", "1", 3)])
    assert form_r(Q, (0, 1), (1, 0)) == 3
    assert form_r(Q, (0, 0), (4, 1)) == 0


def test_form_r_on_loops():
    Q = Quiver.from_arrows(["i"], [("i", "i", 2)])
    assert form_r(Q, (2,), (2,)) == 8


def test_skew_and_euler_forms():
    Q = Quiver.from_arrows(["1", "2"], [("2", "1", 3)])
    assert form_skew(Q, (1, 0), (0, 1)) == 3
    assert form_skew(Q, (2, 5), (2, 5)) == 0
    assert form_euler(Q, (1, 1), (1, 1)) == 2 - 3
    sym = Quiver.from_arrows(["1", "2"], [("1", "2", 2), ("2", "1", 2)])
    assert form_skew(sym, (1, 0), (0, 1)) == 0


def test_mismatched_vector_raises():
    Q = Quiver.from_arrows(["1", "2"], [])
    with pytest.raises(KeyError):
        form_r(Q, (1,), (1, 0))
    with pytest.raises(KeyError):
        Q.index("7")


def test_validation():
    with pytest.raises(ValueError):
        Quiver(("a", "a"), ((0, 0), (0, 0)))
    with pytest.raises(ValueError):
        Quiver(("a",), ((-1,),))


def test_json_roundtrip():
    data = {"vertices": ["1", "2"], "arrows": [["1", "2", 3], ["2", "2", 1]]}
    Q = Quiver.from_json(data)
    assert Q.r == ((0, 3), (0, 1))
    assert Quiver.from_json(Q.to_json()) == Q
    assert Q.dim({"2": 4}) == (0, 4)


def test_covering_quiver_of_single_arrow():
    Q = Quiver.from_arrows(["1", "2"], [("1", "2", 1)])
    Qa, proj = covering_quiver(Q, (2, 1))
    assert Qa.vertices == ("1[1]", "1[2]", "2[1]")
    assert proj == [0, 0, 1]
    assert sorted((Qa.vertices[i], Qa.vertices[j]) for i, j, _ in Qa.arrows()) == [
        ("1[1]", "2[1]"),
        ("1[2]", "2[1]"),
    ]


def test_covering_quiver_of_unit_and_loops():
    Q = Quiver.from_arrows(["1", "2"], [("1", "1", 2), ("1", "2", 1)])
    Qa, _ = covering_quiver(Q, (1, 0))
    assert Qa.r == ((2,),)
    L = Quiver.from_arrows(["i"], [("i", "i", 2)])
    Qd, _ = covering_quiver(L, (3,))
    assert all(Qd.r[a][b] == 2 for a in range(3) for b in range(3))


def test_charge_quiver_examples():
    Q1, pts = charge_quiver(1, [(1, 0), (0, 1)])
    # one arrow from e2 to e1
    assert Q1.r == ((0, 0), (1, 0)) and pts == [(1, 0), (0, 1)]
    Q0, _ = charge_quiver(1, [(1, 0)])
    assert Q0.r == ((0,),)
    Q2, pts = charge_quiver(2, [(1, 0), (0, 1), (1, 1)])
    i = {p: k for k, p in enumerate(pts)}
    assert Q2.r[i[(0, 1)]][i[(1, 0)]] == 2
    assert Q2.r[i[(0, 1)]][i[(1, 1)]] == 2
    assert Q2.r[i[(1, 1)]][i[(1, 0)]] == 2
    assert Q2.num_arrows() == 6


def test_charge_quiver_rejects_degenerate_form():
    with pytest.raises(ValueError):
        charge_quiver(0, [(1, 0)])


def test_level_quiver_examples():
    K = Quiver.from_arrows(["1", "2"], [("1", "2", 1)])
    Q2, labels = level_quiver(K, 2)
    idx = {lab: k for k, lab in enumerate(labels)}
    assert Q2.r[idx[(0, 1)]][idx[(1, 2)]] == 2
    assert Q2.r[idx[(0, 2)]][idx[(1, 2)]] == 4
    Q1, _ = level_quiver(K, 1)
    assert Q1.r == K.r
    L = Quiver.from_arrows(["i"], [("i", "i", 1)])
    QL, labels = level_quiver(L, 2)
    assert QL.r[labels.index((0, 2))][labels.index((0, 2))] == 4


def test_vector_helpers():
    assert len(list(sub_vectors((1, 2)))) == 5
    assert vectors_up_to_total(2, 2) == [(0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]


# --- properties ------------------------------------------------------------------

@st.composite
def quivers(draw, max_n=3, max_m=2):
    n = draw(st.integers(1, max_n))
    r = [[draw(st.integers(0, max_m)) for _ in range(n)] for _ in range(n)]
    return Quiver(tuple(str(i) for i in range(n)), tuple(map(tuple, r)))


def vectors(n, hi=3):
    return st.tuples(*[st.integers(0, hi)] * n)


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_skew_form_is_antisymmetric(data):
    Q = data.draw(quivers())
    a, b = data.draw(vectors(Q.n)), data.draw(vectors(Q.n))
    assert form_skew(Q, a, b) == -form_skew(Q, b, a)
    assert form_skew(Q, a, b) == form_euler(Q, a, b) - form_euler(Q, b, a)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_covering_quiver_sizes_and_projection(data):
    Q = data.draw(quivers())
    alpha = data.draw(vectors(Q.n, 2))
    Qa, proj = covering_quiver(Q, alpha)
    assert Qa.n == sum(alpha)
    assert Qa.num_arrows() == form_r(Q, alpha, alpha)
    if Qa.n < 2:
        return
    # disjoint vertex subsets I, J: the skew form is preserved under projection
    labels = data.draw(st.lists(st.sampled_from([0, 1, 2]), min_size=Qa.n, max_size=Qa.n))
    I = tuple(int(x == 1) for x in labels)
    J = tuple(int(x == 2) for x in labels)

    def push(vec):
        out = [0] * Q.n
        for k, c in enumerate(vec):
            out[proj[k]] += c
        return tuple(out)

    assert form_skew(Qa, I, J) == form_skew(Q, push(I), push(J))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(any), min_size=1, max_size=5, unique=True))
def test_charge_quiver_pulls_back_the_lattice_form(k, support):
    Qc, pts = charge_quiver(k, support)
    for a in range(Qc.n):
        for b in range(Qc.n):
            pa, pb = pts[a], pts[b]
            assert form_skew(Qc, Qc.unit(a), Qc.unit(b)) == k * (pa[0] * pb[1] - pa[1] * pb[0])


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_level_quiver_pulls_back_the_skew_form(data):
    Q = data.draw(quivers())
    L = data.draw(st.integers(1, 3))
    QL, labels = level_quiver(Q, L)
    for a, (i, l) in enumerate(labels):
        for b, (j, m) in enumerate(labels):
            lhs = form_skew(QL, QL.unit(a), QL.unit(b))
            rhs = form_skew(Q, tuple(l if t == i else 0 for t in range(Q.n)), tuple(m if t == j else 0 for t in range(Q.n)))
            assert lhs == rhs
