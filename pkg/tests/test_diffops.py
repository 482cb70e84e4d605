import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qhp.diffops import (
    DiffOp,
    QhpParams,
    binomial_power_op,
    heat_apply,
    heat_op,
    multiplicative_apply,
    negative_binomial,
    neumann_inverse_apply,
    op_apply,
    quasi_monomials,
    weyl_commutator_residual,
)
from qhp.polycore import Poly, poly_derive, random_poly

from conftest import Y_SET, polys, rationals

D = DiffOp.derivative()


def test_binomial_power_op_on_x4():
    # (1 + D^2/2)^2 x^4 = x^4 + 12 x^2 + 6
    op = binomial_power_op(2, 1, 2, 4)
    assert op == DiffOp({0: 1, 2: 1, 4: Fraction(1, 4)})
    assert op(Poly.monomial(4)) == Poly((6, 0, 12, 0, 1))


def test_binomial_power_op_drops_high_orders():
    assert binomial_power_op(2, 3, 5, 3) == DiffOp({0: 1, 2: 3})


def test_negative_binomial():
    assert [negative_binomial(1, r) for r in range(4)] == [1, -1, 1, -1]
    assert [negative_binomial(3, r) for r in range(4)] == [1, -3, 6, -10]


def test_neumann_inverse_small_case():
    # (1 + D^2)^(-1) x^4 = x^4 - 12 x^2 + 24
    assert neumann_inverse_apply(2, 1, 1, Poly.monomial(4)) == Poly((24, 0, -12, 0, 1))


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("N", [1, 2, 5])
@pytest.mark.parametrize("y", Y_SET)
def test_neumann_inverse_contract(m, N, y):
    rng = random.Random(hash((m, N, y)) & 0xFFFF)
    for _ in range(4):
        p = random_poly(rng, 12)
        fwd = binomial_power_op(m, y, N, 12)
        assert fwd(neumann_inverse_apply(m, y, N, p)) == p
        assert neumann_inverse_apply(m, y, N, fwd(p)) == p


@given(st.dictionaries(st.integers(0, 6), rationals, max_size=4),
       st.dictionaries(st.integers(0, 6), rationals, max_size=4), polys())
def test_composition_commutes_and_matches_application(a, b, p):
    A, B = DiffOp(a), DiffOp(b)
    assert A @ B == B @ A
    assert (A @ B)(p) == A(B(p))
    assert (A + B)(p) == A(p) + B(p)


@given(polys(), rationals, rationals)
def test_heat_semigroup(p, s, t):
    assert heat_apply(s, 2, heat_apply(t, 2, p)) == heat_apply(s + t, 2, p)
    assert heat_op(t, 2, 10)(p) == heat_apply(t, 2, p) or p.degree > 10


@pytest.mark.parametrize("m", [1, 2, 3, 4])
@pytest.mark.parametrize("N", [1, 3])
def test_weyl_pair(m, N):
    rng = random.Random(m * 10 + N)
    for y in Y_SET:
        params = QhpParams(0, N, y, m)
        for _ in range(5):
            assert weyl_commutator_residual(params, random_poly(rng, 10)).is_zero()


def test_quasi_monomials_lower_correctly():
    params = QhpParams(0, 3, Fraction(5, 2), 2)
    seq = quasi_monomials(params, 10)
    for n in range(1, 10):
        assert poly_derive(seq[n], 1) == n * seq[n - 1]


def test_raising_from_one():
    params = QhpParams(0, 2, 1, 2)
    assert multiplicative_apply(params, Poly.const(1)) == Poly.x()
    assert multiplicative_apply(params, Poly.x()) == Poly((2, 0, 1))


def test_diffop_json_round_trip():
    op = DiffOp({0: 1, 2: Fraction(-3, 7), 5: 2})
    assert DiffOp.from_json(op.to_json()) == op
    assert hash(DiffOp.from_json(op.to_json())) == hash(op)


def test_identity_and_power():
    assert (D.power(3))(Poly.monomial(3)) == Poly.const(6)
    assert DiffOp.identity()(Poly((1, 2))) == Poly((1, 2))
    with pytest.raises(ValueError):
        D.power(-1)


@pytest.mark.parametrize("bad", [dict(n=-1, N=1), dict(n=0, N=0), dict(n=0, N=1, m=0)])
def test_params_validation(bad):
    with pytest.raises(ValueError):
        QhpParams(**bad)


def test_op_apply_on_zero():
    assert op_apply(DiffOp({0: 2, 3: 1}), Poly.zero()).is_zero()
