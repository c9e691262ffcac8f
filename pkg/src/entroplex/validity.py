"""Validity checkers with witnesses and decomposition certificates.

Function classes nest as modular < step = normal < entropic < polymatroid <
monotone, so validity propagates the other way: monotone-valid implies
polymatroid-valid implies step-valid implies modular-valid. Each checker
returns a Verdict whose Invalid branch carries an evaluable counterexample and
whose Valid branch may carry an exact decomposition into axioms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .core import (
    CapExceeded,
    DomainError,
    Expr,
    SetRep,
    Universe,
    combine,
    evaluate,
    make_expr,
    set_representation,
)
from .functions import (
    SetFunction,
    basic_modular,
    enumerate_monotone_boolean,
    step_function,
)
from .lp import INFEASIBLE, LinearProgram, OPTIMAL, feasible as lp_feasible, solve

POLYMATROID_MAX_N = 10

STEP_CLASSES = ("step", "normal")
SIMPLE_CLASSES = ("step", "normal", "entropic", "polymatroid")


class FormError(DomainError):
    """Input is not in the syntactic form a checker requires."""


class UnsupportedSemantics(Exception):
    """Requested semantics has no decision procedure here."""


@dataclass(frozen=True)
class Witness:
    """Counterexample function; evaluates strictly negative on the input."""

    kind: str  # 'step' | 'boolean_monotone' | 'polymatroid' | 'basic_modular'
    function: SetFunction
    step_set: Optional[int] = None
    generators: tuple[int, ...] = ()  # minimal 1-sets of a Boolean monotone fn
    variable: Optional[str] = None

    def describe(self) -> str:
        uni = self.function.universe
        if self.kind == "step":
            return f"step function on {uni.label(self.step_set)}"
        if self.kind == "basic_modular":
            return f"basic modular function of {self.variable}"
        if self.kind == "boolean_monotone":
            gens = ", ".join(uni.label(g) for g in self.generators)
            return f"monotone 0/1 function, upward closure of {gens}"
        return "polymatroid"


@dataclass(frozen=True)
class Axiom:
    kind: str  # 'nonneg' | 'mono'
    sup: int
    sub: int = 0  # only for 'mono': sup contains sub

    def as_expr_terms(self) -> dict[int, int]:
        if self.kind == "nonneg":
            return {self.sup: 1}
        return {self.sup: 1, self.sub: -1} if self.sup != self.sub else {}


@dataclass(frozen=True)
class Decomposition:
    """Positive combination of monotonicity and non-negativity axioms."""

    universe: Universe
    parts: tuple[tuple[Fraction, Axiom], ...]

    def recombine(self) -> Expr:
        acc: dict[int, Fraction] = {}
        for weight, axiom in self.parts:
            for mask, c in axiom.as_expr_terms().items():
                acc[mask] = acc.get(mask, Fraction(0)) + weight * c
        return make_expr(self.universe, acc)

    def is_separable(self) -> bool:
        """No subset receives both positive and negative contributions."""
        signs: dict[int, set[int]] = {}
        for weight, axiom in self.parts:
            if weight == 0:
                continue
            for mask, c in axiom.as_expr_terms().items():
                signs.setdefault(mask, set()).add(1 if c > 0 else -1)
        return all(len(s) == 1 for s in signs.values())


@dataclass(frozen=True)
class Verdict:
    valid: bool
    semantics: tuple[str, ...]
    method: str
    certificate: Optional[Decomposition] = None
    witness: Optional[Witness] = None
    witness_absent: bool = False
    iterations: Optional[int] = None
    lp_shape: Optional[tuple[int, int]] = None
    per_class: Optional[dict[str, "Verdict"]] = None


def _assert_witness(expr: Expr, witness: Witness) -> Witness:
    value = evaluate(expr, witness.function)
    assert value < 0, f"witness evaluates to {value}, expected negative"
    return witness


def check_modular(expr: Expr) -> Verdict:
    """Valid iff the inequality holds on every basic modular function."""
    uni = expr.universe
    for i, name in enumerate(uni.names):
        bit = 1 << i
        value = sum(
            (c for mask, c in expr.terms.items() if mask & bit), Fraction(0)
        )
        if value < 0:
            witness = Witness(
                "basic_modular", basic_modular(uni, name), step_set=bit,
                variable=name,
            )
            return Verdict(
                False, ("modular",), "modular",
                witness=_assert_witness(expr, witness),
            )
    return Verdict(True, ("modular",), "modular")


def _lex_subset_masks(n: int):
    """Nonempty subsets ordered as sorted index tuples: {0},{0,1},...,{n-1}."""

    def rec(prefix: int, start: int):
        for i in range(start, n):
            m = prefix | 1 << i
            yield m
            yield from rec(m, i + 1)

    yield from rec(0, 0)


def check_step(expr: Expr) -> Verdict:
    """Enumerate all step functions; first failure in lexicographic order."""
    uni = expr.universe
    rep = set_representation(expr, cap=1 << 62)  # integer coefficients only
    terms = [
        (mask, k) for mask, k in rep.positives.items()
    ] + [(mask, -k) for mask, k in rep.negatives.items()]
    for v in _lex_subset_masks(uni.n):
        total = 0
        for mask, k in terms:
            if mask & v:
                total += k
        if total < 0:
            witness = Witness("step", step_function(uni, v), step_set=v)
            return Verdict(
                False, STEP_CLASSES, "step-enumeration",
                witness=_assert_witness(expr, witness),
            )
    return Verdict(True, STEP_CLASSES, "step-enumeration")


def _upset_indicator(uni: Universe, gens: list[int]) -> SetFunction:
    one, zero = Fraction(1), Fraction(0)
    values = [zero] * (1 << uni.n)
    for m in range(1, 1 << uni.n):
        if any(g & ~m == 0 for g in gens):
            values[m] = one
    return SetFunction(uni, tuple(values))


def _minimal_sets(masks: list[int]) -> tuple[int, ...]:
    mins = []
    for m in sorted(masks, key=lambda x: (bin(x).count("1"), x)):
        if not any(g & ~m == 0 for g in mins):
            mins.append(m)
    return tuple(sorted(mins))


def check_monotone_fixpoint(expr: Expr) -> Verdict:
    """Augmenting-path decomposition over the set representation.

    Positive terms supply monotonicity axioms, negative terms demand them;
    an axiom h(X) >= h(Y) is available whenever Y is a subset of X. The
    inequality is valid over monotone functions iff the demand side is
    saturated. Multiplicities are kept aggregated; each augmentation moves
    the bottleneck amount, so iterations never exceed the total demand.
    """
    uni = expr.universe
    rep = set_representation(expr)
    scale = Fraction(rep.scale)
    pos = sorted(rep.positives)
    neg = sorted(rep.negatives)
    supply = dict(rep.positives)
    demand = dict(rep.negatives)
    forward = {x: [y for y in neg if y & ~x == 0] for x in pos}
    into = {y: [x for x in pos if y & ~x == 0] for y in neg}
    flow: dict[tuple[int, int], int] = {}
    iterations = 0

    def find_path(source: int) -> Optional[list[int]]:
        # Alternating BFS: left nodes reached via residual backward flow,
        # right nodes via forward edges. Deterministic neighbor order.
        parent: dict[tuple[str, int], tuple[str, int]] = {}
        queue = [("L", source)]
        seen = {("L", source)}
        while queue:
            side, node = queue.pop(0)
            if side == "L":
                for y in forward[node]:
                    key = ("R", y)
                    if key not in seen:
                        seen.add(key)
                        parent[key] = ("L", node)
                        if demand[y] > 0:
                            path = [y]
                            cur = key
                            while cur in parent:
                                cur = parent[cur]
                                path.append(cur[1])
                            path.reverse()
                            return path
                        queue.append(key)
            else:
                for x in into[node]:
                    key = ("L", x)
                    if flow.get((x, node), 0) > 0 and key not in seen:
                        seen.add(key)
                        parent[key] = ("R", node)
                        queue.append(key)
        return None

    while True:
        path = None
        for x in pos:
            if supply[x] > 0:
                path = find_path(x)
                if path is not None:
                    break
        if path is None:
            break
        iterations += 1
        # path = [L0, R1, L1, R2, ..., Rk] alternating, odd length >= 2
        delta = min(supply[path[0]], demand[path[-1]])
        for t in range(1, len(path) - 1, 2):
            delta = min(delta, flow[(path[t + 1], path[t])])
        for t in range(0, len(path) - 1, 2):
            key = (path[t], path[t + 1])
            flow[key] = flow.get(key, 0) + delta
        for t in range(1, len(path) - 1, 2):
            key = (path[t + 1], path[t])
            flow[key] -= delta
        supply[path[0]] -= delta
        demand[path[-1]] -= delta

    if all(v == 0 for v in demand.values()):
        parts: list[tuple[Fraction, Axiom]] = []
        for (x, y), f in sorted(flow.items()):
            if f > 0:
                parts.append((Fraction(f) / scale, Axiom("mono", x, y)))
        for x in pos:
            if supply[x] > 0:
                parts.append((Fraction(supply[x]) / scale, Axiom("nonneg", x)))
        cert = Decomposition(uni, tuple(parts))
        assert cert.recombine().terms == expr.terms
        return Verdict(
            True, ("monotone",), "fixpoint", certificate=cert,
            iterations=iterations,
        )

    # Reverse reachability from unmet demand nodes along reversed edges:
    # a right node is reached from any forward predecessor, a left node from
    # right nodes holding positive flow on the shared edge.
    reached_r = set()
    reached_l = set()
    queue = [y for y in neg if demand[y] > 0]
    reached_r.update(queue)
    while queue:
        y = queue.pop(0)
        for x in into[y]:
            if x not in reached_l:
                reached_l.add(x)
                for y2 in forward[x]:
                    if flow.get((x, y2), 0) > 0 and y2 not in reached_r:
                        reached_r.add(y2)
                        queue.append(y2)
    gens = _minimal_sets(sorted(reached_r))
    witness = Witness(
        "boolean_monotone",
        _upset_indicator(uni, list(gens)),
        generators=gens,
    )
    return Verdict(
        False, ("monotone",), "fixpoint",
        witness=_assert_witness(expr, witness), iterations=iterations,
    )


def _monotone_witness_after_lp(expr: Expr) -> tuple[Optional[Witness], bool]:
    """Recover a Boolean monotone counterexample once the LP said infeasible."""
    try:
        verdict = check_monotone_fixpoint(expr)
    except CapExceeded:
        if expr.universe.n <= 5:
            for fn in enumerate_monotone_boolean(expr.universe):
                if evaluate(expr, fn) < 0:
                    ones = [
                        m for m in range(1, 1 << expr.universe.n) if fn[m] == 1
                    ]
                    witness = Witness(
                        "boolean_monotone", fn, generators=_minimal_sets(ones)
                    )
                    return witness, False
        return None, True
    assert not verdict.valid
    return verdict.witness, False


def check_monotone_lp(expr: Expr) -> Verdict:
    """Feasibility of the pairing program between the two sides.

    One variable per (negative set, containing positive set) pair; demand
    rows require each negative coefficient to be covered, capacity rows keep
    each positive coefficient from being overdrawn. Feasible iff valid over
    monotone functions, and a feasible point converts into an exact separable
    decomposition after tightening the demand rows.
    """
    uni = expr.universe
    lhs, rhs = expr.two_sided()
    pos = sorted(lhs)
    neg = sorted(rhs)
    pairs = [(y, x) for y in neg for x in pos if y & ~x == 0]
    index = {p: k for k, p in enumerate(pairs)}
    lp = LinearProgram(len(pairs))
    for y in neg:
        row = {index[(y, x)]: 1 for x in pos if (y, x) in index}
        lp.add_row(row, ">=", rhs[y])
    for x in pos:
        row = {index[(y, x)]: 1 for y in neg if (y, x) in index}
        lp.add_row(row, "<=", lhs[x])
    shape = lp.shape
    ok, point = lp_feasible(lp)
    if ok:
        values = {p: point[k] for p, k in index.items()}
        for y in neg:  # tighten so demand rows hold with equality
            surplus = sum(
                (values[(y, x)] for x in pos if (y, x) in index), Fraction(0)
            ) - rhs[y]
            for x in pos:
                if surplus == 0:
                    break
                if (y, x) in index:
                    take = min(surplus, values[(y, x)])
                    values[(y, x)] -= take
                    surplus -= take
        parts: list[tuple[Fraction, Axiom]] = []
        used: dict[int, Fraction] = {x: Fraction(0) for x in pos}
        for (y, x), val in sorted(values.items()):
            if val > 0:
                parts.append((val, Axiom("mono", x, y)))
                used[x] += val
        for x in pos:
            residual = lhs[x] - used[x]
            if residual > 0:
                parts.append((residual, Axiom("nonneg", x)))
        cert = Decomposition(uni, tuple(parts))
        assert cert.recombine().terms == expr.terms
        assert cert.is_separable()
        return Verdict(
            True, ("monotone",), "pairing-lp", certificate=cert,
            lp_shape=shape,
        )
    witness, absent = _monotone_witness_after_lp(expr)
    if witness is not None:
        witness = _assert_witness(expr, witness)
    return Verdict(
        False, ("monotone",), "pairing-lp", witness=witness,
        witness_absent=absent, lp_shape=shape,
    )


def _elemental_rows(uni: Universe) -> list[dict[int, int]]:
    """Minimal generating inequalities of the polymatroid cone, h({}) = 0."""
    n = uni.n
    full = uni.full_mask
    rows: list[dict[int, int]] = []
    for i in range(n):
        row = {full: 1}
        rest = full & ~(1 << i)
        if rest:
            row[rest] = -1
        rows.append(row)
    for i in range(n):
        for j in range(i + 1, n):
            pair = (1 << i) | (1 << j)
            others = full & ~pair
            k = others
            while True:
                row = {}
                for mask, c in (
                    (k | 1 << i, 1), (k | 1 << j, 1), (k, -1), (k | pair, -1),
                ):
                    if mask:
                        row[mask] = row.get(mask, 0) + c
                rows.append({m: c for m, c in row.items() if c})
                if k == 0:
                    break
                k = (k - 1) & others
    return rows


def check_polymatroid(expr: Expr) -> Verdict:
    """Minimize the form over the polymatroid cone sliced at h(full) <= 1.

    Any cone point with a negative value has h(full) > 0 and scales into the
    slice, so the slice minimum is negative exactly when the inequality fails
    over polymatroids, and the minimizer itself is the witness.
    """
    uni = expr.universe
    if uni.n > POLYMATROID_MAX_N:
        raise CapExceeded(
            f"polymatroid check capped at n <= {POLYMATROID_MAX_N}"
        )
    if not expr.terms:
        return Verdict(True, ("polymatroid",), "cone-lp")
    var = {mask: mask - 1 for mask in range(1, uni.full_mask + 1)}
    lp = LinearProgram(len(var))
    lp.set_objective({var[m]: c for m, c in expr.terms.items()})
    for row in _elemental_rows(uni):
        lp.add_row({var[m]: c for m, c in row.items()}, ">=", 0)
    lp.add_row({var[uni.full_mask]: 1}, "<=", 1)
    shape = lp.shape
    result = solve(lp)
    assert result.status == OPTIMAL  # the slice is compact
    if result.value >= 0:
        return Verdict(True, ("polymatroid",), "cone-lp", lp_shape=shape)
    values = (Fraction(0),) + result.point
    witness = Witness("polymatroid", SetFunction(uni, values))
    return Verdict(
        False, ("polymatroid",), "cone-lp",
        witness=_assert_witness(expr, witness), lp_shape=shape,
    )


@dataclass(frozen=True)
class AReduction:
    """Coefficient sums for one variable plus the reduced inequality."""

    variable: str
    c: Fraction
    d: Fraction
    reduced: Expr


def a_reduction(expr: Expr, name: str) -> AReduction:
    """Project the inequality away from one variable.

    Terms containing the variable collapse into their coefficient sums c and
    d; the reduced inequality carries (c - d) on the full remaining set and
    keeps every term avoiding the variable.
    """
    uni = expr.universe
    i = uni.index(name)
    bit = 1 << i
    low = bit - 1
    red_uni = Universe(uni.names[:i] + uni.names[i + 1:])
    c = Fraction(0)
    d = Fraction(0)
    acc: dict[int, Fraction] = {}
    for mask, coeff in expr.terms.items():
        if mask & bit:
            if coeff > 0:
                c += coeff
            else:
                d -= coeff
        else:
            red_mask = (mask & low) | ((mask & ~(2 * bit - 1)) >> 1)
            acc[red_mask] = acc.get(red_mask, Fraction(0)) + coeff
    if red_uni.n:
        full = red_uni.full_mask
        acc[full] = acc.get(full, Fraction(0)) + (c - d)
    return AReduction(name, c, d, make_expr(red_uni, acc))


def is_simple_form(expr: Expr) -> bool:
    """Every right-hand-side set is a singleton or the full universe."""
    _, rhs = expr.two_sided()
    full = expr.universe.full_mask
    return all(mask == full or bin(mask).count("1") == 1 for mask in rhs)


def check_simple_sigma(expr: Expr, target: str = "step") -> Verdict:
    """Per-variable reduction pipeline for simple-form inequalities.

    Valid iff for every variable the coefficient sums satisfy c >= d and the
    reduced inequality is valid over monotone functions; the verdict holds
    simultaneously for step, normal, entropic, and polymatroid semantics.
    Invalid verdicts always carry a step witness.
    """
    if target not in SIMPLE_CLASSES:
        raise DomainError(f"unknown simple-form target {target!r}")
    uni = expr.universe
    _, rhs = expr.two_sided()
    full = uni.full_mask
    for mask in sorted(rhs):
        if mask != full and bin(mask).count("1") != 1:
            raise FormError(
                f"right-hand-side set {uni.label(mask)} is neither a "
                "singleton nor the full universe"
            )
    for i, name in enumerate(uni.names):
        red = a_reduction(expr, name)
        bit = 1 << i
        if red.c < red.d:
            witness = Witness("step", step_function(uni, bit), step_set=bit)
            return Verdict(
                False, SIMPLE_CLASSES, "simple-reduction",
                witness=_assert_witness(expr, witness),
            )
        if not red.reduced:
            continue
        sub = check_monotone_lp(red.reduced)
        if sub.valid:
            continue
        red_uni = red.reduced.universe
        if sub.witness is not None and sub.witness.kind == "boolean_monotone":
            ones = [
                j for j in range(red_uni.n) if sub.witness.function[1 << j] == 1
            ]
        else:
            # Witness recovery was capped; enumerate steps on the reduction.
            fallback = check_step(red.reduced)
            assert not fallback.valid
            ones = [
                j for j in range(red_uni.n)
                if fallback.witness.step_set >> j & 1
            ]
        assert ones, "a failing reduction must light up some singleton"
        v = bit
        for j in ones:
            orig = j if j < i else j + 1
            v |= 1 << orig
        witness = Witness("step", step_function(uni, v), step_set=v)
        return Verdict(
            False, SIMPLE_CLASSES, "simple-reduction",
            witness=_assert_witness(expr, witness),
        )
    return Verdict(True, SIMPLE_CLASSES, "simple-reduction")


DECIDABLE = ("modular", "step", "polymatroid", "monotone")


def check(expr: Expr, semantics: str = "auto") -> Verdict:
    """Dispatch to the checker for the requested semantics.

    'auto' uses the simple-form pipeline when it applies (one verdict for
    step through polymatroid) and otherwise reports every decidable class.
    'entropic' is answered only through the simple-form coincidence.
    """
    if semantics == "modular":
        return check_modular(expr)
    if semantics in ("step", "normal"):
        return check_step(expr)
    if semantics == "polymatroid":
        return check_polymatroid(expr)
    if semantics == "monotone":
        return check_monotone_lp(expr)
    if semantics == "entropic":
        if is_simple_form(expr):
            return check_simple_sigma(expr, "entropic")
        raise UnsupportedSemantics(
            "entropic validity is decided here only for inequalities whose "
            "right-hand-side sets are singletons or the full universe"
        )
    if semantics == "auto":
        if is_simple_form(expr):
            return check_simple_sigma(expr)
        per = {name: check(expr, name) for name in DECIDABLE}
        return Verdict(
            all(v.valid for v in per.values()),
            DECIDABLE,
            "per-class",
            per_class=per,
        )
    raise DomainError(f"unknown semantics {semantics!r}")
