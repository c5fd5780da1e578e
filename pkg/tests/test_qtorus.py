import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from qdt.abelian import b_tree_formula, f_enum
from qdt.exactalg import GM, ONE, Q, V, RatFunc, has_nonneg_coeffs, is_laurent_polynomial, q_power
from qdt.quiver import Quiver, vec_factorial
from qdt.qtorus import (
    QSeries,
    RaySymmetryError,
    T_r_operator,
    Truncation,
    extract_g,
    f_triv,
    is_admissible,
    is_quantum_admissible,
    normal_order,
    series_exp,
    series_log,
    stack_invariant,
    twisted_mul,
)
from qdt.stability import Stability, ray_partition

from conftest import quiver


def kron_torus(m, bounds=(2, 2)):
    return QSeries([[0, m], [-m, 0]], Truncation.box(bounds))


def mono(A, alpha, c=1):
    return A._like({alpha: ONE * c})


# --- products -----------------------------------------------------------------

@pytest.mark.parametrize("m", [1, 2, 3])
def test_twist_rule(m):
    A = kron_torus(m)
    x1, x2 = mono(A, (1, 0)), mono(A, (0, 1))
    assert twisted_mul(x1, x2)[(1, 1)] == q_power(m)
    assert twisted_mul(x2, x1)[(1, 1)] == q_power(-m)


def test_truncation_drops_high_terms():
    A = kron_torus(1, (1, 1))
    x1 = mono(A, (1, 0))
    assert not (x1 * x1).coeffs


def test_mismatched_series_raise():
    A = kron_torus(1)
    B = kron_torus(2)
    C = kron_torus(1, (3, 3))
    with pytest.raises(ValueError):
        A * B
    with pytest.raises(ValueError):
        A + C
    with pytest.raises(ValueError):
        QSeries([[0, 1], [1, 0]], Truncation.box((1, 1)))


def test_truncation_shapes():
    assert Truncation.total(2, 2).vectors() == [(0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]
    assert Truncation.box((1, 2)).bounds() == (1, 2)
    with pytest.raises(ValueError):
        Truncation(2, (((1, 0), 3),))


def test_series_text_format():
    A = kron_torus(1)
    S = A._like({(1, 0): ONE, (0, 1): V / (Q - 1)})
    assert str(S) == "x^(0,1) : q^(1/2)/(q - 1)\nx^(1,0) : 1"


# --- exp and log ------------------------------------------------------------------

def test_exp_and_log_in_one_variable():
    x = QSeries([[0]], Truncation.box((2,)), {(1,): 1})
    assert series_exp(x).coeffs == {(0,): ONE, (1,): ONE, (2,): ONE / 2}
    y = QSeries([[0]], Truncation.box((3,)), {(0,): 1, (1,): 1})
    L = series_log(y)
    assert [L[(k,)] for k in (1, 2, 3)] == [ONE, -ONE / 2, ONE / 3]


def test_exp_log_constant_term_errors():
    x = QSeries([[0]], Truncation.box((2,)), {(0,): 1})
    with pytest.raises(ValueError):
        series_exp(x)
    with pytest.raises(ValueError):
        series_log(x.scale(2))


def test_commuting_exponentials_combine():
    A = QSeries([[0, 0], [0, 0]], Truncation.box((3, 3)))
    a = mono(A, (1, 0), 2)
    b = mono(A, (0, 1), 3)
    assert series_exp(a) * series_exp(b) == series_exp(a + b)


def test_noncommuting_exponentials_do_not_combine():
    A = kron_torus(1)
    a, b = mono(A, (1, 0)), mono(A, (0, 1))
    assert series_exp(a) * series_exp(b) != series_exp(a + b)


# --- T_r ----------------------------------------------------------------------

def test_T_r_examples():
    A = kron_torus(1)
    r = [[1, 2], [0, 0]]
    S = A._like({(1, 1): ONE, (2, 0): ONE})
    T = T_r_operator(S, r)
    assert T[(1, 1)] == q_power(3) and T[(2, 0)] == q_power(4)
    assert T_r_operator(S, [[0, 0], [0, 0]]) == S
    x1, x2 = mono(A, (1, 0)), mono(A, (0, 1))
    assert T_r_operator(x1 * x2, r) != T_r_operator(x1, r) * T_r_operator(x2, r)
    K = Quiver.from_arrows(["1", "2"], [("1", "1", 1), ("1", "2", 2)])
    assert T_r_operator(S, K) == T


# --- extraction of g ------------------------------------------------------------

def test_extract_g_primitive():
    f = f_enum(quiver(2, [("2", "1", 1)]), (1, 1), Stability.from_slopes((0, 1)))
    g = extract_g({(1, 1): f}, Truncation.box((1, 1)))
    assert g[(1, 1)] == GM * f


@pytest.mark.parametrize("m", [1, 2, 3])
def test_extract_g_loops_order_two(m):
    L = quiver(1, [("1", "1", m)])
    trunc = Truncation.box((2,))
    g = extract_g({(k,): f_enum(L, (k,)) for k in (1, 2)}, trunc)
    assert g[(2,)] == q_power(2 * m + 1) * (Q ** m - 1) / (Q - 1)
    assert oracle.same(g[(2,)], oracle.g_from_f({k: oracle.to_sympy(f_enum(L, (k,))) for k in (1, 2)}, (2,)))


@pytest.mark.parametrize("a", [1, 2, 3])
def test_extract_g_symmetric_two_vertex(a):
    S = quiver(2, [("1", "2", a), ("2", "1", a)])
    trunc = Truncation.box((1, 1))
    f = {alpha: f_enum(S, alpha) for alpha in trunc.vectors()}
    g = extract_g(f, trunc, S.skew_matrix())
    assert g[(1, 1)] == V * (Q ** a - 1) / (Q - 1)
    assert g[(1, 1)].num(1) == a


def test_extract_g_gate():
    K = quiver(2, [("2", "1", 1)])
    trunc = Truncation.box((1, 1))
    f = {alpha: f_enum(K, alpha) for alpha in trunc.vectors()}
    with pytest.raises(RaySymmetryError) as info:
        extract_g(f, trunc, K.skew_matrix())
    assert info.value.pair == ((0, 1), (1, 0))


def test_extract_g_matches_tree_formula():
    cases = [([[1]], (3,)), ([[0, 1], [1, 0]], (2, 1)), ([[1, 1], [1, 0]], (1, 2))]
    for r, alpha in cases:
        Qv = Quiver(tuple(str(i) for i in range(len(r))), tuple(map(tuple, r)))
        trunc = Truncation.box(alpha)
        f = {b: f_enum(Qv, b) for b in trunc.vectors()}
        g = extract_g(f, trunc, Qv.skew_matrix())
        assert g[alpha] == q_power(sum(alpha) - 1) * b_tree_formula(r, alpha)


# --- admissibility ------------------------------------------------------------

def test_admissibility_examples():
    trunc = Truncation.box((2, 2))
    base = QSeries([[0, 0], [0, 0]], trunc, {(1, 0): ONE / (Q - 1), (0, 1): ONE / (Q - 1)})
    E = series_exp(base)
    assert is_admissible(E)
    for r in ([[1, 0], [0, 2]], [[0, 3], [3, 1]], [[2, 1], [1, 0]]):
        assert is_admissible(T_r_operator(E, r))
    one_var = QSeries([[0]], Truncation.box((1,)), {(0,): 1, (1,): ONE / (Q - 1) ** 2})
    assert not is_admissible(one_var)


def test_normal_order_matches_ordered_products():
    A = kron_torus(2, (3, 3))
    rng = random.Random(1)
    for _ in range(5):
        a1, a2 = rng.randint(0, 3), rng.randint(0, 3)
        x1 = mono(A, (1, 0))
        x2 = mono(A, (0, 1))
        prod = A.one()
        for _ in range(a1):
            prod = prod * x1
        for _ in range(a2):
            prod = prod * x2
        # ordered monomial x1^a1 o x2^a2 equals normal_order(x^(a1,a2))
        assert prod == normal_order(mono(A, (a1, a2)))


def test_ray_factors_are_quantum_admissible():
    K = quiver(2, [("2", "1", 2)])
    trunc = Truncation.total(2, 3)
    for Z in (Stability.trivial(2), Stability.from_slopes((0, 1)), Stability.from_slopes((1, 0))):
        rays = ray_partition(Z, trunc.vectors())
        for vecs in rays.values():
            F = QSeries.for_quiver(K, trunc, {a: f_enum(K, a, Z) / vec_factorial(a) for a in vecs})
            assert is_quantum_admissible(F + F.one())


# --- stack invariant --------------------------------------------------------------

def test_stack_invariant_examples(point, loop1):
    assert stack_invariant(point, (1,)) == V / (Q - 1) == 1 / GM
    assert stack_invariant(point, (0,)) == ONE
    assert stack_invariant(loop1, (1,)) == Q / (Q - 1)
    # |GL_2| = (q^2 - 1)(q^2 - q), virtual shift q^(4/2)
    assert stack_invariant(point, (2,)) == Q ** 2 / ((Q ** 2 - 1) * (Q ** 2 - Q))


# --- properties ------------------------------------------------------------------

small_values = st.sampled_from([ONE, -ONE, V, Q + 1, ONE / (Q - 1), GM, ONE * 2, RatFunc.from_fraction(Fraction(1, 3))])


@st.composite
def series(draw, skew, trunc, zero_const=False):
    coeffs = {}
    for a in trunc.vectors(include_zero=not zero_const):
        if draw(st.booleans()):
            coeffs[a] = draw(small_values)
    return QSeries(skew, trunc, coeffs)


SKEW = [[0, 1, -2], [-1, 0, 1], [2, -1, 0]]
TRUNC = Truncation.total(3, 3)


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_twisted_mul_is_associative(data):
    A, B, C = (data.draw(series(SKEW, TRUNC)) for _ in range(3))
    assert (A * B) * C == A * (B * C)


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_commutative_product_commutes(data):
    zero = [[0] * 3 for _ in range(3)]
    A, B = data.draw(series(zero, TRUNC)), data.draw(series(zero, TRUNC))
    assert A * B == B * A


@settings(max_examples=20, deadline=None)
@given(st.data())
def test_log_inverts_exp(data):
    A = data.draw(series(SKEW, Truncation.box((2, 1, 1)), zero_const=True))
    assert series_log(series_exp(A)) == A


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 2))
def test_trivial_g_is_positive_tree_count(m, d, loops):
    # two colors with m arrows each way, optional loops on the first
    S = quiver(2, [("1", "2", m), ("2", "1", m)] + ([("1", "1", loops)] if loops else []))
    alpha = (d, 1)
    trunc = Truncation.box(alpha)
    g = extract_g({b: f_triv(S, b) for b in trunc.vectors()}, trunc, S.skew_matrix())[alpha]
    p = is_laurent_polynomial(g)
    assert p is not None and has_nonneg_coeffs(p)
