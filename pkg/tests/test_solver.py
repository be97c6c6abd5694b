# -*- coding: utf-8 -*-
import numpy as np
import pytest
from scipy.optimize import linprog

from setfn.solver import DEFAULT_SOLVER, LinearProgram, SimplexSolver, Solver
from setfn.types import LpStatus


def oracle(program: LinearProgram) -> float:
    result = linprog(-program.c, A_ub=program.a, b_ub=program.b, bounds=(0, None), method="highs")
    assert result.status == 0
    return -result.fun


@pytest.mark.parametrize("seed", range(8))
def test_feasible_origin_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    rows, cols = int(rng.integers(2, 12)), int(rng.integers(2, 8))
    program = LinearProgram(
        c=rng.uniform(0.0, 1.0, cols), a=rng.uniform(0.1, 1.0, (rows, cols)), b=rng.uniform(1.0, 2.0, rows)
    )
    solution = SimplexSolver()(program)
    assert solution.optimal
    assert solution.objective == pytest.approx(oracle(program), rel=1e-9)
    assert np.all(program.a @ solution.x <= program.b + 1e-9)
    assert np.all(solution.x >= 0)
    # strong duality
    assert np.all(solution.y >= -1e-12)
    assert program.b @ solution.y == pytest.approx(solution.objective, rel=1e-9)


@pytest.mark.parametrize("seed", range(8))
def test_auxiliary_phase_matches_oracle(seed):
    rng = np.random.default_rng(100 + seed)
    rows, cols = int(rng.integers(3, 10)), int(rng.integers(2, 6))
    point = rng.uniform(0.5, 2.0, cols)
    a = rng.standard_normal((rows, cols))
    b = a @ point + rng.uniform(0.0, 1.0, rows)
    a = np.vstack([a, np.ones(cols)])
    b = np.append(b, 4.0 * point.sum())
    program = LinearProgram(c=rng.standard_normal(cols), a=a, b=b)
    solution = SimplexSolver()(program)
    assert solution.optimal
    assert solution.objective == pytest.approx(oracle(program), rel=1e-8, abs=1e-9)
    assert np.all(a @ solution.x <= b + 1e-8)


def test_covering_program():
    # minimize x1 + x2 subject to x1 + x2 >= 1, x1 <= 3, x2 <= 2
    program = LinearProgram(c=[-1.0, -1.0], a=[[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]], b=[-1.0, 3.0, 2.0])
    solution = SimplexSolver()(program)
    assert solution.optimal
    assert solution.objective == pytest.approx(-1.0)


def test_infeasible():
    program = LinearProgram(c=[1.0], a=[[1.0]], b=[-1.0])
    assert SimplexSolver()(program).status is LpStatus.INFEASIBLE


def test_unbounded():
    program = LinearProgram(c=[1.0, 0.0], a=[[-1.0, 1.0]], b=[1.0])
    solution = SimplexSolver()(program)
    assert solution.status is LpStatus.UNBOUNDED
    assert np.isnan(solution.objective)


def test_exact_mode_is_rational():
    program = LinearProgram(c=[1.0, 1.0], a=[[1.0, 2.0], [3.0, 1.0]], b=[4.0, 6.0])
    solution = SimplexSolver(exact=True)(program)
    assert solution.exact
    assert solution.objective == 2.8
    assert solution.x.tolist() == [1.6, 1.2]


def test_iteration_cap():
    program = LinearProgram(c=[1.0, 1.0], a=[[1.0, 2.0], [3.0, 1.0]], b=[4.0, 6.0])
    assert SimplexSolver(iteration_cap=1)(program).status is LpStatus.NUMERICAL_FAILURE


def test_shape_validation():
    with pytest.raises(ValueError):
        LinearProgram(c=[1.0, 1.0], a=[[1.0, 2.0, 3.0]], b=[1.0])


def test_solver_holder():
    holder = Solver(SimplexSolver, tol=1e-10)
    assert repr(holder) == "Solver(SimplexSolver, tol=1e-10)"
    assert not hasattr(holder, "__iter__")
    solver = holder.build(exact=True)
    assert isinstance(solver, SimplexSolver)
    assert solver.exact and solver.tol == 0.0
    assert DEFAULT_SOLVER.build().tol == 1e-9


def test_exact_mode_with_thirds():
    # x = (1/5, 1/5, 1/5); every ratio on the way is a non-dyadic fraction
    program = LinearProgram(c=[1.0, 1.0, 1.0], a=[[3.0, 1.0, 1.0], [1.0, 3.0, 1.0], [1.0, 1.0, 3.0]], b=[1.0, 1.0, 1.0])
    solution = SimplexSolver(exact=True)(program)
    assert solution.optimal
    assert solution.objective == 0.6
    assert solution.x.tolist() == [0.2, 0.2, 0.2]


@pytest.mark.parametrize("seed", range(4))
def test_exact_mode_matches_float_mode(seed):
    rng = np.random.default_rng(200 + seed)
    rows, cols = int(rng.integers(2, 6)), int(rng.integers(2, 5))
    program = LinearProgram(
        c=rng.integers(1, 7, cols).astype(float),
        a=rng.integers(1, 9, (rows, cols)).astype(float),
        b=rng.integers(3, 12, rows).astype(float),
    )
    exact = SimplexSolver(exact=True)(program)
    assert exact.optimal
    assert exact.objective == pytest.approx(SimplexSolver()(program).objective, rel=1e-12)
    assert exact.objective == pytest.approx(oracle(program), rel=1e-9)
