from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from errors import DimensionError, InputError
from exact_arith import (INFEASIBLE, MIN, OPTIMAL, UNBOUNDED, Constraint, LinProgram, RatMat, determinant,
                         dot, lp_solve, matrix_rank, nullspace, primitive, rat, solve_linear)


def test_rat_parses_strings_and_rejects_garbage():
    assert rat('3/4') == Fraction(3, 4)
    assert rat(2) == Fraction(2)
    with pytest.raises(InputError):
        rat('x')
    with pytest.raises(InputError):
        rat(True)


def test_primitive():
    assert primitive((Fraction(1, 2), Fraction(3, 4))) == (2, 3)
    assert primitive((0, -4, 6)) == (0, -2, 3)
    with pytest.raises(InputError):
        primitive((0, 0))


def test_solve_linear_unique():
    result = solve_linear(RatMat.identity(2), (3, 5))
    assert result.kind == 'unique'
    assert result.particular == (3, 5)


def test_solve_linear_affine():
    result = solve_linear(RatMat.of([[1, 1]]), (1,))
    assert result.kind == 'affine'
    assert result.particular == (1, 0)
    assert result.nullspace == ((1, -1),)


def test_solve_linear_infeasible():
    assert solve_linear(RatMat.of([[1], [1]]), (0, 1)).kind == 'infeasible'


def test_solve_linear_dimension_mismatch():
    with pytest.raises(DimensionError):
        solve_linear(RatMat.identity(2), (1, 2, 3))


small_ints = st.integers(min_value=-5, max_value=5)


@settings(max_examples=100, deadline=None)
@given(rows=st.lists(st.lists(small_ints, min_size=3, max_size=3), min_size=1, max_size=3),
       x=st.lists(small_ints, min_size=3, max_size=3))
def test_solve_linear_recovers_right_hand_side(rows, x):
    a = RatMat.of(rows, 3)
    b = a.apply(x)
    result = solve_linear(a, b)
    assert result.kind in ('unique', 'affine')
    assert a.apply(result.particular) == b
    for k in result.nullspace:
        assert all(v == 0 for v in a.apply(k))


def test_matrix_rank():
    assert matrix_rank(RatMat.identity(3)) == 3
    assert matrix_rank(RatMat.zero(2, 2)) == 0
    assert matrix_rank(RatMat.of([[1, 1], [2, 2]])) == 1


def test_determinant():
    assert determinant(RatMat.of([[2, 1], [1, 3]])) == 5
    assert determinant(RatMat.of([[0, 1], [1, 0]])) == -1
    assert determinant(RatMat.of([[Fraction(1, 2), 0], [0, Fraction(2, 3)]])) == Fraction(1, 3)
    assert determinant(RatMat.of([[1, 2], [2, 4]])) == 0


def test_nullspace_is_primitive():
    assert nullspace(RatMat.of([[2, 4]])) == ((2, -1),)


def test_lp_interval_endpoint():
    result = lp_solve(LinProgram((1,), (Constraint.ge((1,), 0), Constraint.ge((-1,), -2))))
    assert result.status == OPTIMAL
    assert result.value == 2
    assert result.witness == (2,)


def test_lp_unbounded():
    assert lp_solve(LinProgram((1,), (Constraint.ge((1,), 0),))).status == UNBOUNDED


def test_lp_infeasible():
    result = lp_solve(LinProgram((0,), (Constraint.ge((1,), 1), Constraint.ge((-1,), 0))))
    assert result.status == INFEASIBLE


def test_lp_strong_duality():
    # max x + y  s.t.  x, y >= 0, x + 2y <= 4, 3x + y <= 6
    primal = LinProgram((1, 1), (Constraint.ge((1, 0)), Constraint.ge((0, 1)),
                                 Constraint.ge((-1, -2), -4), Constraint.ge((-3, -1), -6)))
    # min 4u + 6v  s.t.  u, v >= 0, u + 3v >= 1, 2u + v >= 1
    dual = LinProgram((4, 6), (Constraint.ge((1, 0)), Constraint.ge((0, 1)),
                               Constraint.ge((1, 3), 1), Constraint.ge((2, 1), 1)), MIN)
    p, d = lp_solve(primal), lp_solve(dual)
    assert p.value == d.value == Fraction(14, 5)
    assert p.witness == (Fraction(8, 5), Fraction(6, 5))


def test_lp_witness_satisfies_constraints():
    constraints = (Constraint.ge((1, 1), 1), Constraint.eq((1, -1), Fraction(1, 3)), Constraint.ge((0, 1)))
    result = lp_solve(LinProgram((-1, -2), constraints))
    assert result.is_optimal
    for con in constraints:
        value = dot(con.coeffs, result.witness)
        assert value >= con.rhs if con.relation == 'ge' else value == con.rhs


def test_lp_degenerate_vertex_terminates():
    # three constraints tight at the optimum
    constraints = (Constraint.ge((1, 0)), Constraint.ge((0, 1)), Constraint.ge((-1, -1)))
    result = lp_solve(LinProgram((1, 0), constraints))
    assert result.value == 0


def test_lp_rejects_mismatched_constraint():
    with pytest.raises(DimensionError):
        LinProgram((1, 0), (Constraint.ge((1,)),))


lp_rows = st.lists(st.tuples(small_ints, small_ints, small_ints), min_size=1, max_size=4)
box = tuple(Constraint.ge(c, -6) for c in ((1, 0), (-1, 0), (0, 1), (0, -1)))


@settings(max_examples=60, deadline=None)
@given(rows=lp_rows, objective=st.tuples(small_ints, small_ints), data=st.data())
def test_lp_optimum_ignores_row_order_and_positive_scaling(rows, objective, data):
    constraints = [Constraint.ge((a, b), c) for a, b, c in rows] + list(box)
    reference = lp_solve(LinProgram(objective, tuple(constraints)))
    order = data.draw(st.permutations(range(len(constraints))))
    factors = data.draw(st.lists(st.fractions(min_value=Fraction(1, 7), max_value=7, max_denominator=7),
                                 min_size=len(constraints), max_size=len(constraints)))
    shuffled = tuple(Constraint.ge(tuple(k * x for x in constraints[i].coeffs), k * constraints[i].rhs)
                     for i, k in zip(order, factors))
    result = lp_solve(LinProgram(objective, shuffled))
    assert result.status == reference.status
    assert result.value == reference.value
