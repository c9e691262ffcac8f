"""Shared brute-force oracles and generators for the test suite.

Everything here is deliberately naive: independent recomputations that the
package modules are checked against.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Optional, Sequence

from entroplex import (
    Expr,
    Universe,
    basic_modular,
    enumerate_monotone_boolean,
    evaluate,
    make_expr,
    step_function,
    universe,
)
from entroplex.lp import INFEASIBLE, LinearProgram, MAXIMIZE, OPTIMAL, UNBOUNDED

BOX = Fraction(10**18)


def rand_expr(rng: random.Random, uni: Universe, lo: int = -2, hi: int = 2) -> Expr:
    terms = {}
    for mask in range(1, uni.full_mask + 1):
        c = rng.randint(lo, hi)
        if c:
            terms[mask] = Fraction(c)
    return make_expr(uni, terms)


def monotone_brute(expr: Expr) -> bool:
    """Dedekind-style oracle: test every monotone 0/1 function directly."""
    return all(
        evaluate(expr, fn) >= 0 for fn in enumerate_monotone_boolean(expr.universe)
    )


def step_brute(expr: Expr) -> bool:
    uni = expr.universe
    return all(
        evaluate(expr, step_function(uni, v)) >= 0
        for v in range(1, uni.full_mask + 1)
    )


def modular_brute(expr: Expr) -> bool:
    uni = expr.universe
    return all(
        evaluate(expr, basic_modular(uni, name)) >= 0 for name in uni.names
    )


def _solve_square(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]):
    """Exact Gaussian elimination; None if the system is singular."""
    n = len(rhs)
    aug = [list(rows[i]) + [rhs[i]] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col]), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


def vertex_oracle(lp: LinearProgram):
    """Solve by enumerating vertices of the box-clipped feasible region.

    Returns (status, value) with the same status constants as lp.solve.
    Sound because an optimum attained off the box faces is optimal for the
    unclipped program as well.
    """
    n = lp.n_vars
    ineqs: list[tuple[list[Fraction], Fraction]] = []  # a . x >= b
    for coeffs, op, rhs in lp.rows:
        a = [Fraction(coeffs.get(i, 0)) for i in range(n)]
        b = Fraction(rhs)
        if op in (">=", "="):
            ineqs.append((a, b))
        if op in ("<=", "="):
            ineqs.append(([-v for v in a], -b))
    for i in range(n):
        unit = [Fraction(0)] * n
        unit[i] = Fraction(1)
        ineqs.append((unit[:], Fraction(0)))
        ineqs.append(([-v for v in unit], -BOX))
    obj = [Fraction(lp.objective.get(i, 0)) for i in range(n)]
    sign = -1 if lp.sense == MAXIMIZE else 1

    best: Optional[Fraction] = None
    best_off_box = False
    feasible_seen = False
    for chosen in itertools.combinations(range(len(ineqs)), n):
        point = _solve_square(
            [ineqs[k][0] for k in chosen], [ineqs[k][1] for k in chosen]
        )
        if point is None:
            continue
        if any(
            sum(a_i * x_i for a_i, x_i in zip(a, point)) < b for a, b in ineqs
        ):
            continue
        feasible_seen = True
        value = sign * sum(c * x for c, x in zip(obj, point))
        off_box = all(x < BOX for x in point)
        if best is None or value < best:
            best, best_off_box = value, off_box
        elif value == best and off_box:
            best_off_box = True
    if not feasible_seen:
        return INFEASIBLE, None
    assert best is not None
    if not best_off_box:
        return UNBOUNDED, None
    return OPTIMAL, sign * best


def rand_lp(rng: random.Random) -> LinearProgram:
    n = rng.randint(1, 4)
    lp = LinearProgram(n, sense=rng.choice(["min", "max"]))
    lp.set_objective(
        {i: Fraction(rng.randint(-5, 5)) for i in range(n) if rng.random() < 0.9}
    )
    for _ in range(rng.randint(1, 6)):
        coeffs = {
            i: Fraction(rng.randint(-4, 4)) for i in range(n) if rng.random() < 0.8
        }
        lp.add_row(coeffs, rng.choice([">=", "<=", "="]), Fraction(rng.randint(-6, 6)))
    return lp


def rand_sigma(rng: random.Random, n_max=5, simple=False, acyclic=False):
    """Random guarded degree system over a single all-covering atom."""
    from entroplex import GuardedEntry, GuardedSigma, Query, conditional

    n = rng.randint(1, n_max)
    uni = universe(*[f"V{i}" for i in range(n)])
    query = Query(uni, (("R0", uni.full_mask),))
    entries = []
    for _ in range(rng.randint(1, 5 if not simple else 6)):
        if acyclic:
            # condition entirely before the target in variable order
            split = rng.randint(0, n - 1)
            u = rng.getrandbits(split) if split else 0
            v = 0
            for i in range(split, n):
                if rng.random() < 0.6:
                    v |= 1 << i
            if not v:
                v = 1 << rng.randrange(split, n)
        else:
            v = rng.randint(1, uni.full_mask)
            u = rng.randint(0, uni.full_mask) & ~v
            if simple:
                u = (1 << rng.randrange(n)) & ~v if rng.random() < 0.7 else 0
        d = rng.choice([1, 2, 3, 4])
        b = Fraction(rng.randint(0, 3 * d), d)
        entries.append(GuardedEntry(conditional(v, u), 0, b))
    return query, GuardedSigma(uni, tuple(entries))


def product_join(atom_schemas, relations):
    """Join by scanning the full product of active domains, one value per column.

    atom_schemas: list of (column name tuple) per atom; relations: matching
    list of row sets. Returns the set of result tuples over the sorted union
    of columns.
    """
    columns = sorted({c for schema in atom_schemas for c in schema})
    domain = sorted({v for rows in relations for row in rows for v in row})
    out = set()
    for values in itertools.product(domain, repeat=len(columns)):
        bound = dict(zip(columns, values))
        ok = all(
            tuple(bound[c] for c in schema) in rows
            for schema, rows in zip(atom_schemas, relations)
        )
        if ok:
            out.add(values)
    return out
