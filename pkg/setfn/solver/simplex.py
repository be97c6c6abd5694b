# -*- coding: utf-8 -*-
"""
Dense dictionary simplex with Bland's rule.

The tableau keeps one row per constraint, ``[a_i | b_i]`` meaning ``basic_i = b_i - a_i · nonbasic``, plus the
objective row ``[d | v]`` meaning ``z = v - d · nonbasic``. Variables are labelled 0..n-1 (structural) and
n..n+m-1 (slacks). Infeasible origins go through the single-artificial auxiliary problem first. With
``exact=True`` the same code runs on ``Fraction`` object arrays with zero tolerance.
"""
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from setfn.solver.base import BaseSolver, LinearProgram, RawSolution
from setfn.types import LpStatus

_to_fraction = np.vectorize(Fraction, otypes=[object])


class Tableau:
    def __init__(self, matrix: np.ndarray, basic: np.ndarray, nonbasic: np.ndarray, tol):
        self.matrix = matrix
        self.basic = basic
        self.nonbasic = nonbasic
        self.tol = tol
        self.iterations = 0

    @property
    def rows(self) -> int:
        return self.matrix.shape[0] - 1

    def pivot(self, leave: int, enter: int) -> None:
        matrix = self.matrix
        piv = matrix[leave, enter]
        row = matrix[leave] / piv
        row[enter] = 1 / piv
        col = matrix[:, enter].copy()
        matrix -= col[:, None] * row[None, :]
        matrix[:, enter] = -col / piv
        matrix[leave] = row
        self.basic[leave], self.nonbasic[enter] = self.nonbasic[enter], self.basic[leave]
        self.iterations += 1

    def entering(self) -> Optional[int]:
        """Smallest-label column with a negative objective entry"""
        costs = self.matrix[-1, :-1]
        eligible = np.nonzero(np.asarray(costs < -self.tol, dtype=bool))[0]
        if not len(eligible):
            return None
        return int(eligible[np.argmin(self.nonbasic[eligible])])

    def leaving(self, enter: int) -> Optional[int]:
        """Minimum-ratio row, ties broken by the smallest basic label"""
        col = self.matrix[:-1, enter]
        rows = np.nonzero(np.asarray(col > self.tol, dtype=bool))[0]
        if not len(rows):
            return None
        ratios = self.matrix[rows, -1] / col[rows]
        # the minimum always ties with itself
        tied = rows[np.asarray(ratios - ratios.min() <= self.tol, dtype=bool)]
        return int(tied[np.argmin(self.basic[tied])])

    def run(self, cap: int) -> LpStatus:
        while True:
            if self.iterations >= cap:
                return LpStatus.NUMERICAL_FAILURE
            enter = self.entering()
            if enter is None:
                return LpStatus.OPTIMAL
            leave = self.leaving(enter)
            if leave is None:
                return LpStatus.UNBOUNDED
            self.pivot(leave, enter)


class SimplexSolver(BaseSolver):
    def _coerce(self, array: np.ndarray) -> np.ndarray:
        return _to_fraction(array) if self.exact else np.array(array, dtype=float)

    def _zero(self):
        return Fraction(0) if self.exact else 0.0

    @property
    def _threshold(self):
        # Fraction + float is a float
        return Fraction(0) if self.exact else self.tol

    def _initial(self, program: LinearProgram) -> Tuple[Optional[Tableau], LpStatus, int]:
        rows, cols = program.shape
        a, b, c = self._coerce(program.a), self._coerce(program.b), self._coerce(program.c)
        basic = np.arange(cols, cols + rows)
        nonbasic = np.arange(cols)
        if rows == 0 or not np.any(np.asarray(b < -self._threshold, dtype=bool)):
            matrix = np.vstack([np.column_stack([a, b]), np.concatenate([-c, [self._zero()]])])
            return Tableau(matrix, basic, nonbasic, self._threshold), LpStatus.OPTIMAL, 0

        # auxiliary problem: maximize -x0 with x0 (label -1) relaxing every row
        artificial = self._coerce(np.full(rows, -1.0))
        objective = self._coerce(np.zeros(cols + 2))
        objective[cols] = 1
        matrix = np.vstack([np.column_stack([a, artificial, b]), objective])
        tableau = Tableau(matrix, basic, np.append(nonbasic, -1), self._threshold)
        tableau.pivot(int(np.argmin(b)), cols)
        status = tableau.run(self.iteration_cap)
        if status is not LpStatus.OPTIMAL:
            return None, LpStatus.NUMERICAL_FAILURE, tableau.iterations
        if tableau.matrix[-1, -1] < -self._threshold:
            return None, LpStatus.INFEASIBLE, tableau.iterations

        where = np.nonzero(tableau.basic == -1)[0]
        if len(where):
            leave = int(where[0])
            coeffs = np.abs(np.asarray(tableau.matrix[leave, :-1], dtype=float))
            if coeffs.max() > 0:
                tableau.pivot(leave, int(np.argmax(coeffs)))
            else:
                # redundant row: x0 = 0 identically
                tableau.matrix = np.delete(tableau.matrix, leave, axis=0)
                tableau.basic = np.delete(tableau.basic, leave)
        artificial_cols = np.nonzero(tableau.nonbasic == -1)[0]
        keep = [j for j in range(tableau.matrix.shape[1]) if j not in artificial_cols]
        matrix = tableau.matrix[:, keep]
        nonbasic = tableau.nonbasic[tableau.nonbasic != -1]

        # restore the original objective in terms of the current nonbasic variables
        matrix[-1] = self._zero()
        for j, cost in enumerate(c):
            if cost == 0:
                continue
            at = np.nonzero(tableau.basic == j)[0]
            if len(at):
                matrix[-1] += cost * matrix[int(at[0])]
            else:
                matrix[-1, int(np.nonzero(nonbasic == j)[0][0])] -= cost
        restored = Tableau(matrix, tableau.basic, nonbasic, self._threshold)
        restored.iterations = tableau.iterations
        return restored, LpStatus.OPTIMAL, tableau.iterations

    def solve(self, program: LinearProgram) -> RawSolution:
        rows, cols = program.shape
        tableau, status, iterations = self._initial(program)
        if tableau is not None:
            status = tableau.run(self.iteration_cap)
            iterations = tableau.iterations
        x = np.zeros(cols)
        y = np.zeros(rows)
        objective = float("nan")
        if tableau is not None and status is LpStatus.OPTIMAL:
            for i, label in enumerate(tableau.basic):
                if 0 <= label < cols:
                    x[label] = float(tableau.matrix[i, -1])
            for j, label in enumerate(tableau.nonbasic):
                if label >= cols:
                    y[label - cols] = float(tableau.matrix[-1, j])
            objective = float(tableau.matrix[-1, -1])
        return RawSolution(status=status, x=x, y=y, objective=objective, iterations=iterations, exact=self.exact)
