"""Exact rational linear programming.

Dense two-phase simplex with Bland's rule, which is always on: the programs
built elsewhere in this package are highly degenerate and cycling must be
impossible rather than unlikely. Arithmetic uses gmpy2.mpq when available and
falls back to fractions.Fraction; results cross the API boundary as Fraction
either way.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .core import DomainError, Rat

try:
    from gmpy2 import mpq as _mpq
except ImportError:  # pragma: no cover - environment without gmpy2
    _mpq = Fraction

_ZERO = _mpq(0)
_ONE = _mpq(1)


def _to_kernel(value: Rat) -> object:
    f = Fraction(value)
    return _mpq(f.numerator, f.denominator)


def _to_fraction(value: object) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


MINIMIZE = "min"
MAXIMIZE = "max"

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LinearProgram:
    """minimize/maximize c.x subject to rows; every variable is >= 0."""

    n_vars: int
    sense: str = MINIMIZE
    objective: dict[int, Fraction] = field(default_factory=dict)
    rows: list[tuple[dict[int, Fraction], str, Fraction]] = field(default_factory=list)

    def set_objective(self, coeffs: Mapping[int, Rat]) -> None:
        self.objective = {j: Fraction(c) for j, c in coeffs.items() if c != 0}
        self._check_cols(self.objective)

    def add_row(self, coeffs: Mapping[int, Rat], rel: str, rhs: Rat) -> None:
        if rel not in (">=", "<=", "="):
            raise DomainError(f"unknown relation {rel!r}")
        row = {j: Fraction(c) for j, c in coeffs.items() if c != 0}
        self._check_cols(row)
        self.rows.append((row, rel, Fraction(rhs)))

    def _check_cols(self, coeffs: Mapping[int, Fraction]) -> None:
        for j in coeffs:
            if not 0 <= j < self.n_vars:
                raise DomainError(f"variable index {j} out of range")

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.n_vars)


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Optional[Fraction] = None
    point: Optional[tuple[Fraction, ...]] = None
    pivots: int = 0


class _Tableau:
    """Equality-form simplex tableau over the kernel rational type."""

    def __init__(self, lp: LinearProgram):
        m = len(lp.rows)
        self.n_orig = lp.n_vars
        self.pivots = 0

        # Column layout: structural vars, then one slack/surplus per inequality
        # row, then artificials as needed.
        ncols = lp.n_vars
        slack_col: list[Optional[int]] = [None] * m
        slack_sign: list[int] = [0] * m
        norm_rows: list[tuple[dict[int, object], str, object]] = []
        for i, (coeffs, rel, rhs) in enumerate(lp.rows):
            kc = {j: _to_kernel(c) for j, c in coeffs.items()}
            krhs = _to_kernel(rhs)
            if krhs < 0:
                kc = {j: -c for j, c in kc.items()}
                krhs = -krhs
                rel = {">=": "<=", "<=": ">=", "=": "="}[rel]
            norm_rows.append((kc, rel, krhs))
            if rel != "=":
                slack_col[i] = ncols
                slack_sign[i] = 1 if rel == "<=" else -1
                ncols += 1

        art_col: list[Optional[int]] = [None] * m
        basis: list[int] = [0] * m
        for i, (_, rel, krhs) in enumerate(norm_rows):
            if rel == "<=":
                basis[i] = slack_col[i]  # slack basic at rhs >= 0
            elif rel == ">=" and krhs == 0:
                basis[i] = slack_col[i]  # surplus basic at 0, row negated below
            else:
                art_col[i] = ncols
                basis[i] = ncols
                ncols += 1

        rows: list[list[object]] = []
        for i, (kc, rel, krhs) in enumerate(norm_rows):
            row = [_ZERO] * (ncols + 1)
            for j, c in kc.items():
                row[j] = c
            if slack_col[i] is not None:
                row[slack_col[i]] = _mpq(slack_sign[i])
            if art_col[i] is not None:
                row[art_col[i]] = _ONE
            row[ncols] = krhs
            if basis[i] == slack_col[i] and slack_sign[i] == -1:
                row = [-v for v in row]  # make the basic surplus column +1
            rows.append(row)

        self.rows = rows
        self.ncols = ncols
        self.basis = basis
        self.artificials = frozenset(c for c in art_col if c is not None)
        self.allowed = [True] * ncols

        sign = _ONE if lp.sense == MINIMIZE else -_ONE
        self.cost = [_ZERO] * ncols
        for j, c in lp.objective.items():
            self.cost[j] = sign * _to_kernel(c)
        self.sense_sign = sign

    def _reduced_cost_row(self, cost: Sequence[object]) -> list[object]:
        """r_j = c_j - c_B B^-1 A_j, with the current rhs in the last slot."""
        red = list(cost) + [_ZERO]
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb != 0:
                row = self.rows[i]
                for j in range(self.ncols):
                    if row[j] != 0:
                        red[j] -= cb * row[j]
                red[self.ncols] -= cb * row[self.ncols]
        return red

    def _pivot(self, r: int, c: int, red: list[object]) -> None:
        self.pivots += 1
        row = self.rows[r]
        piv = row[c]
        if piv != 1:
            inv = _ONE / piv
            self.rows[r] = row = [v * inv for v in row]
        for other in self.rows:
            if other is row:
                continue
            factor = other[c]
            if factor != 0:
                for j in range(self.ncols + 1):
                    if row[j] != 0:
                        other[j] -= factor * row[j]
        factor = red[c]
        if factor != 0:
            for j in range(self.ncols + 1):
                if row[j] != 0:
                    red[j] -= factor * row[j]
        self.basis[r] = c

    def _iterate(self, red: list[object]) -> str:
        """Run simplex to optimality with Bland's rule. Returns a status."""
        ncols = self.ncols
        while True:
            enter = -1
            for j in range(ncols):
                if self.allowed[j] and red[j] < 0:
                    enter = j
                    break
            if enter < 0:
                return OPTIMAL
            leave = -1
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = row[ncols] / a
                    if best is None or ratio < best or (
                        ratio == best and self.basis[i] < self.basis[leave]
                    ):
                        best = ratio
                        leave = i
            if leave < 0:
                return UNBOUNDED
            self._pivot(leave, enter, red)

    def solve_two_phase(self) -> tuple[str, list[object]]:
        ncols = self.ncols
        if self.artificials:
            start_infeasibility = sum(
                self.rows[i][ncols]
                for i in range(len(self.rows))
                if self.basis[i] in self.artificials
            )
            if start_infeasibility != 0:
                phase1_cost = [
                    _ONE if j in self.artificials else _ZERO for j in range(ncols)
                ]
                red = self._reduced_cost_row(phase1_cost)
                status = self._iterate(red)
                assert status == OPTIMAL  # phase 1 is bounded below by 0
                if -red[ncols] != 0:
                    return INFEASIBLE, []
            for j in self.artificials:
                self.allowed[j] = False
        red = self._reduced_cost_row(self.cost)
        status = self._iterate(red)
        return status, red

    def extract_point(self) -> list[Fraction]:
        values = [_ZERO] * self.ncols
        for i, b in enumerate(self.basis):
            values[b] = self.rows[i][self.ncols]
        return [_to_fraction(values[j]) for j in range(self.n_orig)]


def solve(lp: LinearProgram) -> LPResult:
    """Exact optimum, infeasibility, or unboundedness, deterministically."""
    tab = _Tableau(lp)
    status, red = tab.solve_two_phase()
    if status == INFEASIBLE:
        return LPResult(INFEASIBLE, pivots=tab.pivots)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, pivots=tab.pivots)
    point = tab.extract_point()
    value = sum((c * point[j] for j, c in lp.objective.items()), Fraction(0))
    return LPResult(OPTIMAL, value=value, point=tuple(point), pivots=tab.pivots)


def feasible(lp: LinearProgram) -> tuple[bool, Optional[tuple[Fraction, ...]]]:
    """Phase-one only; a feasible point when one exists."""
    probe = LinearProgram(lp.n_vars, MINIMIZE)
    probe.rows = lp.rows
    tab = _Tableau(probe)
    status, _ = tab.solve_two_phase()
    if status == INFEASIBLE:
        return False, None
    return True, tuple(tab.extract_point())
