"""Exact-rational linear programming via a dense two-phase simplex.

All arithmetic is fractions.Fraction; pivoting follows Bland's rule, so
the method terminates without cycling.  Problems here are tiny (dominance
tests over a handful of strategies), so a dense tableau is the right tool.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class LpError(Exception):
    pass


@dataclass(frozen=True)
class LpResult:
    status: str                 # "optimal" | "unbounded" | "infeasible"
    value: Fraction | None
    solution: tuple[Fraction, ...] | None


def _pivot(tableau, basis, row, col):
    pivot = tableau[row][col]
    tableau[row] = [x / pivot for x in tableau[row]]
    for r, line in enumerate(tableau):
        if r != row and line[col] != 0:
            factor = line[col]
            tableau[r] = [a - factor * b for a, b in zip(line, tableau[row])]
    basis[row] = col


def _run_simplex(tableau, basis, ncols):
    """Maximize the objective held in the last tableau row (stored negated,
    standard form).  Bland's rule: smallest eligible column, then smallest
    basis index among minimizing ratios."""
    while True:
        obj = tableau[-1]
        col = next((j for j in range(ncols) if obj[j] < 0), None)
        if col is None:
            return "optimal"
        best_row = None
        best_ratio = None
        for r in range(len(tableau) - 1):
            coef = tableau[r][col]
            if coef > 0:
                ratio = tableau[r][-1] / coef
                if (best_ratio is None or ratio < best_ratio
                        or (ratio == best_ratio and basis[r] < basis[best_row])):
                    best_ratio = ratio
                    best_row = r
        if best_row is None:
            return "unbounded"
        _pivot(tableau, basis, best_row, col)


def maximize(c, a_ub=None, b_ub=None, a_eq=None, b_eq=None) -> LpResult:
    """max c.x subject to a_ub.x <= b_ub, a_eq.x == b_eq, x >= 0."""
    c = [Fraction(x) for x in c]
    a_ub = [[Fraction(x) for x in row] for row in (a_ub or [])]
    b_ub = [Fraction(x) for x in (b_ub or [])]
    a_eq = [[Fraction(x) for x in row] for row in (a_eq or [])]
    b_eq = [Fraction(x) for x in (b_eq or [])]
    n = len(c)
    rows = []
    # slack variables for inequalities, artificials for everything with a
    # negative right-hand side or an equality
    n_slack = len(a_ub)
    for idx, (row, rhs) in enumerate(zip(a_ub, b_ub)):
        slack = [Fraction(0)] * n_slack
        slack[idx] = Fraction(1)
        rows.append((row + slack, rhs))
    for row, rhs in zip(a_eq, b_eq):
        rows.append((row + [Fraction(0)] * n_slack, rhs))
    # normalize to nonnegative rhs
    rows = [
        ([-x for x in row], -rhs) if rhs < 0 else (row, rhs) for row, rhs in rows
    ]
    width = n + n_slack
    n_art = len(rows)
    tableau = []
    basis = []
    for idx, (row, rhs) in enumerate(rows):
        art = [Fraction(0)] * n_art
        art[idx] = Fraction(1)
        tableau.append(row + art + [rhs])
        basis.append(width + idx)
    total = width + n_art
    # phase 1: maximize minus the artificial sum; seed the objective with
    # the artificial columns, then reduce against the (artificial) basis
    phase1 = [Fraction(0)] * total + [Fraction(0)]
    for j in range(width, total):
        phase1[j] = Fraction(1)
    for r in range(len(rows)):
        for j in range(total + 1):
            phase1[j] -= tableau[r][j]
    tableau.append(phase1)
    status = _run_simplex(tableau, basis, total)
    if status != "optimal" or tableau[-1][-1] != 0:
        return LpResult("infeasible", None, None)
    tableau.pop()
    # drive artificials out of the basis where possible
    for r in range(len(rows)):
        if basis[r] >= width:
            col = next(
                (j for j in range(width) if tableau[r][j] != 0), None
            )
            if col is not None:
                _pivot(tableau, basis, r, col)
    # drop artificial columns
    tableau = [line[:width] + [line[-1]] for line in tableau]
    # phase 2 objective
    obj = [-x for x in c] + [Fraction(0)] * n_slack + [Fraction(0)]
    for r in range(len(rows)):
        if basis[r] < width and obj[basis[r]] != 0:
            factor = obj[basis[r]]
            obj = [a - factor * b for a, b in zip(obj, tableau[r])]
    tableau.append(obj)
    status = _run_simplex(tableau, basis, width)
    if status == "unbounded":
        return LpResult("unbounded", None, None)
    solution = [Fraction(0)] * n
    for r, b in enumerate(basis):
        if b < n:
            solution[b] = tableau[r][-1]
    value = sum(ci * xi for ci, xi in zip(c, solution))
    return LpResult("optimal", value, tuple(solution))
