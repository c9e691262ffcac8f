"""Degree-constrained output-size bounds for self-join-free conjunctive
queries, computed exactly in log space.

A constraint system pairs conditionals (V|U) with guard atoms and log-degree
budgets b. Weighted sums of the conditionals that dominate h(X) over a
function class turn the budgets into an output bound; each class gives one
optimization routine here. Values are Fractions in bits, or math.inf when no
valid weighting exists.
"""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

from .core import CapExceeded, DomainError, Expr, Universe, make_expr
from .lp import (
    INFEASIBLE,
    LinearProgram,
    MAXIMIZE,
    OPTIMAL,
    UNBOUNDED,
    solve,
)
from .validity import (
    FormError,
    _elemental_rows,
    POLYMATROID_MAX_N,
    check_modular,
    check_polymatroid,
    check_simple_sigma,
    check_step,
)

STEP_BOUND_MAX_N = 16


@dataclass(frozen=True)
class Conditional:
    """Degree term (V|U): target and condition masks, disjoint, V nonempty."""

    target: int
    condition: int

    def __post_init__(self) -> None:
        if not self.target:
            raise DomainError("conditional needs a nonempty target")
        if self.target & self.condition:
            raise DomainError("conditional target overlaps its condition")

    @property
    def joint(self) -> int:
        return self.target | self.condition


def conditional(target: int, condition: int = 0) -> Conditional:
    """Normalize V := V minus U, then build the (V|U) pair."""
    return Conditional(target & ~condition, condition)


@dataclass(frozen=True)
class Query:
    """Self-join-free conjunctive query; the head is all variables."""

    universe: Universe
    atoms: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        names = [name for name, _ in self.atoms]
        if len(set(names)) != len(names):
            raise DomainError("relation names must be distinct")
        covered = 0
        for _, schema in self.atoms:
            covered |= schema
        if covered != self.universe.full_mask:
            raise DomainError("atom schemas must cover every head variable")

    def atom_index(self, name: str) -> int:
        for i, (atom_name, _) in enumerate(self.atoms):
            if atom_name == name:
                return i
        raise DomainError(f"no atom named {name!r}")


@dataclass(frozen=True)
class GuardedEntry:
    sigma: Conditional
    guard: int  # index into the query's atoms
    log_degree: Fraction

    def __post_init__(self) -> None:
        if self.log_degree < 0:
            raise DomainError("log-degree must be non-negative")


@dataclass(frozen=True)
class GuardedSigma:
    universe: Universe
    entries: tuple[GuardedEntry, ...]


def build_sigma(
    query: Query,
    specs: Sequence[tuple[Conditional, Optional[str], Fraction]],
) -> GuardedSigma:
    """Resolve guards for (conditional, guard name or None, b) triples.

    A missing guard name picks the first atom containing the conditional's
    variables; a named guard must contain them.
    """
    entries = []
    for cond, guard_name, b in specs:
        if guard_name is None:
            for i, (_, schema) in enumerate(query.atoms):
                if cond.joint & ~schema == 0:
                    guard = i
                    break
            else:
                label = query.universe.label(cond.joint)
                raise DomainError(f"no atom can guard {label}")
        else:
            guard = query.atom_index(guard_name)
            schema = query.atoms[guard][1]
            if cond.joint & ~schema:
                raise DomainError(
                    f"guard {guard_name} does not contain the conditional's "
                    "variables"
                )
        entries.append(GuardedEntry(cond, guard, Fraction(b)))
    return GuardedSigma(query.universe, tuple(entries))


@dataclass(frozen=True)
class BoundResult:
    value: Union[Fraction, float]  # Fraction, or math.inf
    method: str
    weights: Optional[tuple[Fraction, ...]] = None
    lp_shape: Optional[tuple[int, int]] = None

    @property
    def is_finite(self) -> bool:
        return isinstance(self.value, Fraction)

    def linear_value(self) -> float:
        """Display-only 2**value; exactness lives in log space."""
        return math.inf if not self.is_finite else 2.0 ** float(self.value)


def is_acyclic(sigma: GuardedSigma) -> bool:
    """No directed cycle among condition-to-target variable dependencies."""
    n = sigma.universe.n
    succ: list[set[int]] = [set() for _ in range(n)]
    for entry in sigma.entries:
        cond = entry.sigma
        for a in range(n):
            if cond.condition >> a & 1:
                for b in range(n):
                    if cond.target >> b & 1:
                        succ[a].add(b)
    state = [0] * n  # 0 unseen, 1 on stack, 2 done
    for root in range(n):
        if state[root]:
            continue
        stack = [(root, iter(sorted(succ[root])))]
        state[root] = 1
        while stack:
            node, it = stack[-1]
            for nxt in it:
                if state[nxt] == 1:
                    return False
                if state[nxt] == 0:
                    state[nxt] = 1
                    stack.append((nxt, iter(sorted(succ[nxt]))))
                    break
            else:
                state[node] = 2
                stack.pop()
    return True


def is_simple(sigma: GuardedSigma) -> bool:
    return all(
        bin(entry.sigma.condition).count("1") <= 1 for entry in sigma.entries
    )


def sigma_inequality(sigma: GuardedSigma, weights: Sequence[Fraction]) -> Expr:
    """The weighted form: sum of w(h(UV) - h(U)) minus h of the full set."""
    if len(weights) != len(sigma.entries):
        raise DomainError("one weight per constraint entry required")
    uni = sigma.universe
    acc: dict[int, Fraction] = {uni.full_mask: Fraction(-1)}
    for entry, w in zip(sigma.entries, weights):
        w = Fraction(w)
        if w < 0:
            raise DomainError("weights must be non-negative")
        cond = entry.sigma
        acc[cond.joint] = acc.get(cond.joint, Fraction(0)) + w
        if cond.condition:
            acc[cond.condition] = acc.get(cond.condition, Fraction(0)) - w
    return make_expr(uni, acc)


def _weight_lp_result(
    sigma: GuardedSigma, lp: LinearProgram, method: str
) -> BoundResult:
    shape = lp.shape
    result = solve(lp)
    if result.status == INFEASIBLE:
        return BoundResult(math.inf, method, lp_shape=shape)
    assert result.status == OPTIMAL  # objective is bounded below by zero
    weights = result.point[: len(sigma.entries)]
    return BoundResult(result.value, method, weights=weights, lp_shape=shape)


def logbound_modular(query: Query, sigma: GuardedSigma) -> BoundResult:
    """Cheapest weighting whose targets cover every variable.

    Evaluating the weighted form on each basic modular function leaves only
    the weights of conditionals whose target holds the variable, so modular
    validity is exactly the covering program.
    """
    uni = sigma.universe
    lp = LinearProgram(len(sigma.entries))
    lp.set_objective(
        {k: entry.log_degree for k, entry in enumerate(sigma.entries)}
    )
    for a in range(uni.n):
        row = {
            k: 1
            for k, entry in enumerate(sigma.entries)
            if entry.sigma.target >> a & 1
        }
        lp.add_row(row, ">=", 1)
    out = _weight_lp_result(sigma, lp, "modular")
    if out.is_finite:
        assert check_modular(sigma_inequality(sigma, out.weights)).valid
    return out


def logbound_step(query: Query, sigma: GuardedSigma) -> BoundResult:
    """Weight program with one covering row per step function.

    The weighted form evaluated on the step function of V keeps the weights
    of conditionals whose target meets V while the condition avoids it, and
    needs them to sum to at least 1. Rows collapse to the distinct support
    sets, minimal supports only; the feasible region is unchanged.
    """
    uni = sigma.universe
    if uni.n > STEP_BOUND_MAX_N:
        raise CapExceeded(f"step bound capped at n <= {STEP_BOUND_MAX_N}")
    supports = set()
    for v in range(1, uni.full_mask + 1):
        support = frozenset(
            k
            for k, entry in enumerate(sigma.entries)
            if entry.sigma.target & v and not entry.sigma.condition & v
        )
        supports.add(support)
    minimal = [s for s in supports if not any(t < s for t in supports)]
    lp = LinearProgram(len(sigma.entries))
    lp.set_objective(
        {k: entry.log_degree for k, entry in enumerate(sigma.entries)}
    )
    for support in sorted(minimal, key=sorted):
        lp.add_row({k: 1 for k in support}, ">=", 1)
    out = _weight_lp_result(sigma, lp, "step")
    if out.is_finite:
        assert check_step(sigma_inequality(sigma, out.weights)).valid
    return out


def logbound_polymatroid_dual(query: Query, sigma: GuardedSigma) -> BoundResult:
    """Exponential oracle: maximize h(full) inside the degree-sliced cone.

    The primal maximizes h of the full set over the elemental cone cut by
    h(UV) - h(U) <= b per conditional; unbounded means no finite bound.
    Weights come from the explicit dual program, whose rows say that the
    weighted form dominates h(full) modulo the cone's rows. Equality of the
    two optimal values is asserted rather than assumed.
    """
    uni = sigma.universe
    if uni.n > POLYMATROID_MAX_N:
        raise CapExceeded(
            f"polymatroid bound capped at n <= {POLYMATROID_MAX_N}"
        )
    n_sets = uni.full_mask
    var = {mask: mask - 1 for mask in range(1, n_sets + 1)}
    elemental = _elemental_rows(uni)
    primal = LinearProgram(n_sets, sense=MAXIMIZE)
    primal.set_objective({var[uni.full_mask]: 1})
    for row in elemental:
        primal.add_row({var[m]: c for m, c in row.items()}, ">=", 0)
    for entry in sigma.entries:
        cond = entry.sigma
        row = {var[cond.joint]: 1}
        if cond.condition:
            row[var[cond.condition]] = -1
        primal.add_row(row, "<=", entry.log_degree)
    shape = primal.shape
    result = solve(primal)
    assert result.status != INFEASIBLE  # the zero function always fits
    if result.status == UNBOUNDED:
        return BoundResult(math.inf, "polymatroid-dual", lp_shape=shape)

    k = len(sigma.entries)
    dual = LinearProgram(k + len(elemental))
    dual.set_objective(
        {i: entry.log_degree for i, entry in enumerate(sigma.entries)}
    )
    columns: dict[int, dict[int, Fraction]] = {m: {} for m in var}
    for i, entry in enumerate(sigma.entries):
        cond = entry.sigma
        columns[cond.joint][i] = Fraction(1)
        if cond.condition:
            columns[cond.condition][i] = Fraction(-1)
    for e, row in enumerate(elemental):
        for m, c in row.items():
            columns[m][k + e] = columns[m].get(k + e, Fraction(0)) - c
    for m in sorted(var):
        dual.add_row(columns[m], ">=", 1 if m == uni.full_mask else 0)
    dual_result = solve(dual)
    assert dual_result.status == OPTIMAL
    assert dual_result.value == result.value
    weights = dual_result.point[:k]
    assert check_polymatroid(sigma_inequality(sigma, weights)).valid
    return BoundResult(
        result.value, "polymatroid-dual", weights=weights, lp_shape=shape
    )


def _reduced_mask(mask: int, i: int) -> int:
    low = (1 << i) - 1
    return (mask & low) | ((mask >> 1) & ~low)


def logbound_simple_entropic(query: Query, sigma: GuardedSigma) -> BoundResult:
    """Polynomial-size entropic bound for simple constraint systems.

    The weighted form is kept symbolic in w. For each variable A its
    one-variable reduction has coefficient sums c_A and d_A that are linear
    in w, with the full-set term of the weighted form homogenized through a
    pseudo-weight pinned to 1 by an equality row. The block for A encodes
    feasibility of the pairing program of the reduced inequality, lists kept
    unmerged with both full-set terms present, plus the row c_A - d_A >= 0;
    a shared-column selector stacks the blocks into one program. Feasible
    weightings are exactly those valid over the entropic class, so
    minimizing the budget over the stack gives the bound. The returned
    weights are re-verified through the reduction pipeline.
    """
    if not is_simple(sigma):
        raise FormError("entropic bound requires conditions of size <= 1")
    uni = sigma.universe
    k = len(sigma.entries)
    w0 = k  # pseudo-weight homogenizing the full-set constant
    n_w = k + 1

    blocks: list[list[tuple[dict[int, int], dict[int, Fraction]]]] = []
    n_x = 0
    for a in range(uni.n):
        bit = 1 << a
        c_form: dict[int, Fraction] = {}
        d_form: dict[int, Fraction] = {w0: Fraction(1)}
        lhs: list[tuple[int, dict[int, Fraction]]] = []
        rhs: list[tuple[int, dict[int, Fraction]]] = []
        for s, entry in enumerate(sigma.entries):
            cond = entry.sigma
            if cond.joint & bit:
                c_form[s] = c_form.get(s, Fraction(0)) + 1
            else:
                lhs.append((_reduced_mask(cond.joint, a), {s: Fraction(1)}))
            if cond.condition & bit:
                d_form[s] = d_form.get(s, Fraction(0)) + 1
            elif cond.condition:
                rhs.append(
                    (_reduced_mask(cond.condition, a), {s: Fraction(1)})
                )
        rows: list[tuple[dict[int, int], dict[int, Fraction]]] = []
        if uni.n > 1:
            full_red = (1 << (uni.n - 1)) - 1
            lhs.insert(0, (full_red, c_form))
            rhs.insert(0, (full_red, d_form))
            pair_at: dict[tuple[int, int], int] = {}
            for i, (y, _) in enumerate(rhs):
                for j, (x, _) in enumerate(lhs):
                    if y & ~x == 0:
                        pair_at[(i, j)] = n_x
                        n_x += 1
            for i, (y, d_i) in enumerate(rhs):
                xpart = {
                    pair_at[(i, j)]: 1
                    for j in range(len(lhs))
                    if (i, j) in pair_at
                }
                rows.append((xpart, {s: -c for s, c in d_i.items()}))
            for j, (x, c_j) in enumerate(lhs):
                xpart = {
                    pair_at[(i, j)]: -1
                    for i in range(len(rhs))
                    if (i, j) in pair_at
                }
                rows.append((xpart, dict(c_j)))
        margin = dict(c_form)
        for s, c in d_form.items():
            margin[s] = margin.get(s, Fraction(0)) - c
        rows.append(({}, margin))
        blocks.append(rows)

    # Selector composition: every block's weight slots read the shared
    # (w, w0) columns sitting after the pairing variables.
    lp = LinearProgram(n_x + n_w)
    lp.set_objective(
        {n_x + s: entry.log_degree for s, entry in enumerate(sigma.entries)}
    )
    for rows in blocks:
        for xpart, wpart in rows:
            row: dict[int, Fraction] = {
                j: Fraction(c) for j, c in xpart.items()
            }
            for s, c in wpart.items():
                if c:
                    row[n_x + s] = row.get(n_x + s, Fraction(0)) + c
            lp.add_row(row, ">=", 0)
    lp.add_row({n_x + w0: 1}, "=", 1)
    shape = lp.shape
    result = solve(lp)
    if result.status == INFEASIBLE:
        return BoundResult(math.inf, "simple-entropic", lp_shape=shape)
    assert result.status == OPTIMAL
    weights = result.point[n_x : n_x + k]
    assert check_simple_sigma(sigma_inequality(sigma, weights)).valid
    return BoundResult(
        result.value, "simple-entropic", weights=weights, lp_shape=shape
    )


@dataclass(frozen=True)
class Relation:
    name: str
    schema: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]

    def __post_init__(self) -> None:
        if len(set(self.schema)) != len(self.schema):
            raise DomainError("relation schema repeats a variable")
        for row in self.rows:
            if len(row) != len(self.schema):
                raise DomainError("row width differs from schema width")


def relation_from_csv(name: str, text: str) -> Relation:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DomainError("empty relation file") from None
    schema = tuple(cell.strip() for cell in header)
    rows = tuple(
        tuple(cell.strip() for cell in row) for row in reader if row
    )
    return Relation(name, schema, rows)


def degree_scan(
    relation: Relation,
    target: Sequence[str],
    condition: Sequence[str] = (),
) -> int:
    """Maximum number of distinct target projections per condition value."""
    condition = tuple(condition)
    target = tuple(v for v in target if v not in condition)
    if not target:
        raise DomainError("degree target is empty after normalization")
    for v in (*target, *condition):
        if v not in relation.schema:
            raise DomainError(f"{v!r} is not in the schema of {relation.name}")
    t_idx = [relation.schema.index(v) for v in target]
    c_idx = [relation.schema.index(v) for v in condition]
    groups: dict[tuple[str, ...], set[tuple[str, ...]]] = {}
    for row in relation.rows:
        key = tuple(row[i] for i in c_idx)
        groups.setdefault(key, set()).add(tuple(row[i] for i in t_idx))
    return max((len(vals) for vals in groups.values()), default=0)


def satisfies_degrees(
    data: Mapping[str, Relation], query: Query, sigma: GuardedSigma
) -> bool:
    """Whether every guarded degree stays within 2 to the power b."""
    uni = sigma.universe
    for entry in sigma.entries:
        guard_name = query.atoms[entry.guard][0]
        if guard_name not in data:
            raise DomainError(f"no data for relation {guard_name}")
        deg = degree_scan(
            data[guard_name],
            uni.names_of(entry.sigma.target),
            uni.names_of(entry.sigma.condition),
        )
        if deg <= 1:
            continue
        b = entry.log_degree
        if deg ** b.denominator > 2 ** b.numerator:
            return False
    return True


def natural_join(query: Query, data: Mapping[str, Relation]) -> set[tuple]:
    """All head tuples, by backtracking over atoms. Test-scale only."""
    uni = query.universe
    order: list[tuple[Relation, list[int]]] = []
    for name, schema_mask in query.atoms:
        if name not in data:
            raise DomainError(f"no data for relation {name}")
        rel = data[name]
        names = uni.names_of(schema_mask)
        if tuple(sorted(rel.schema)) != tuple(sorted(names)):
            raise DomainError(f"schema mismatch for relation {name}")
        order.append((rel, [uni.index(v) for v in rel.schema]))
    out: set[tuple] = set()

    def descend(i: int, bound: dict[int, str]) -> None:
        if i == len(order):
            out.add(tuple(bound[j] for j in range(uni.n)))
            return
        rel, positions = order[i]
        for row in rel.rows:
            extended = dict(bound)
            ok = True
            for pos, value in zip(positions, row):
                if extended.get(pos, value) != value:
                    ok = False
                    break
                extended[pos] = value
            if ok:
                descend(i + 1, extended)

    descend(0, {})
    return out


_QUERY_RE = re.compile(r"^query\s+(\w+)\s*\(([^)]*)\)\s*=\s*(.+)$")
_ATOM_RE = re.compile(r"(\w+)\s*\(([^)]*)\)")
_LOGDEG_RE = re.compile(
    r"^logdeg\s+(?:(\w+)\s+)?\(([^|)]*)(?:\|([^)]*))?\)\s*<=\s*(\S+)$"
)
_CARD_RE = re.compile(r"^card\s+(\w+)\s*<=\s*(\d+)$")


def _split_names(text: str) -> list[str]:
    return [v.strip() for v in text.split(",") if v.strip()]


def parse_constraints(text: str) -> tuple[Query, GuardedSigma]:
    """Read a query line plus logdeg/card lines into a constraint system."""
    query: Optional[Query] = None
    pending: list[tuple[list[str], list[str], Optional[str], Fraction]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _QUERY_RE.match(line)
        if m:
            if query is not None:
                raise DomainError(f"line {lineno}: second query declaration")
            head = _split_names(m.group(2))
            uni = Universe(tuple(head))
            atoms = []
            rest = m.group(3)
            matched = _ATOM_RE.findall(rest)
            if not matched or "".join(
                _ATOM_RE.sub("", rest).split()
            ).strip(",") != "":
                raise DomainError(f"line {lineno}: malformed atom list")
            for name, vars_text in matched:
                atoms.append((name, uni.mask(_split_names(vars_text))))
            query = Query(uni, tuple(atoms))
            continue
        m = _LOGDEG_RE.match(line)
        if m:
            guard, v_text, u_text, b_text = m.groups()
            try:
                b = Fraction(b_text)
            except (ValueError, ZeroDivisionError):
                raise DomainError(
                    f"line {lineno}: bad log-degree {b_text!r}"
                ) from None
            pending.append(
                (_split_names(v_text), _split_names(u_text or ""), guard, b)
            )
            continue
        m = _CARD_RE.match(line)
        if m:
            name, count_text = m.groups()
            count = int(count_text)
            if count < 1 or count & (count - 1):
                raise DomainError(
                    f"line {lineno}: cardinality {count} is not a power of two"
                )
            pending.append(([], [], name, Fraction(count.bit_length() - 1)))
            continue
        raise DomainError(f"line {lineno}: unrecognized constraint {line!r}")
    if query is None:
        raise DomainError("missing query declaration")
    specs = []
    for v_names, u_names, guard, b in pending:
        if not v_names and guard is not None:
            # cardinality constraint: target is the named atom's full schema
            schema = query.atoms[query.atom_index(guard)][1]
            specs.append((conditional(schema, 0), guard, b))
        else:
            u = query.universe.mask(u_names)
            v = query.universe.mask(v_names)
            specs.append((conditional(v, u), guard, b))
    return query, build_sigma(query, specs)
