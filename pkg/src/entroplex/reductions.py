"""Hardness-reduction generators with exhaustive oracles.

Each generator turns a combinatorial instance into an information inequality
whose step-function validity decides the instance: a satisfying assignment, a
proper 3-coloring, or an equal-sum split exists exactly when the inequality
fails on some step function, and the failing set decodes back to a solution.
The oracles are deliberately brute force so round-trips are independent.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .core import (
    CapExceeded,
    DomainError,
    Expr,
    Universe,
    expand_measure,
    make_expr,
    multi_mutual_info,
)
from .validity import Witness

SAT_ORACLE_MAX_VARS = 20
COLORING_ORACLE_MAX_VERTICES = 8
PARTITION_ORACLE_MAX_ITEMS = 20
PARTITION_ORACLE_MAX_SUM = 60

COLORS = ("r", "g", "b")


@dataclass(frozen=True)
class MonSat3Instance:
    """Monotone 3-SAT: all-positive and all-negative clauses of size 3."""

    variables: tuple[str, ...]
    positive: tuple[frozenset[str], ...]
    negative: tuple[frozenset[str], ...]

    def __post_init__(self) -> None:
        if len(set(self.variables)) != len(self.variables):
            raise DomainError("duplicate variable")
        if not self.positive and not self.negative:
            raise DomainError("at least one clause required")
        pool = set(self.variables)
        for clause in (*self.positive, *self.negative):
            if len(clause) != 3:
                raise DomainError("clauses must have exactly 3 variables")
            if not clause <= pool:
                raise DomainError("clause mentions an undeclared variable")


@dataclass(frozen=True)
class Graph:
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]  # endpoint-sorted, deduplicated

    def __post_init__(self) -> None:
        if not self.vertices:
            raise DomainError("graph needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise DomainError("duplicate vertex")
        pool = set(self.vertices)
        seen = set()
        for a, b in self.edges:
            if a == b:
                raise DomainError("self-loop")
            if a not in pool or b not in pool:
                raise DomainError("edge endpoint is not a vertex")
            if (a, b) != tuple(sorted((a, b))) or (a, b) in seen:
                raise DomainError("edges must be sorted pairs, no repeats")
            seen.add((a, b))


def graph(vertices: Iterable[str], edges: Iterable[tuple[str, str]]) -> Graph:
    pairs = sorted({tuple(sorted(e)) for e in edges})
    return Graph(tuple(vertices), tuple(pairs))


@dataclass(frozen=True)
class PartitionInstance:
    """Multiset of positive integers with an even total."""

    items: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.items:
            raise DomainError("at least one item required")
        if any(x < 1 for x in self.items):
            raise DomainError("items must be positive integers")
        if sum(self.items) % 2:
            raise DomainError("total sum must be even")


def from_3dmonsat(phi: MonSat3Instance) -> Expr:
    """Sum of h(X|C) over positive clauses plus the triple mutual
    information of each negative clause, against h(X).

    A step function falsifies the result exactly when its set, read as the
    truth assignment, satisfies every clause. The all-zero assignment has no
    step function, but it only matters when there are no positive clauses,
    and then singleton assignments satisfy the instance anyway.
    """
    uni = Universe(tuple(sorted(phi.variables)))
    full = uni.full_mask
    acc: dict[int, Fraction] = {full: Fraction(-1)}

    def add(mask: int, c: int) -> None:
        acc[mask] = acc.get(mask, Fraction(0)) + c

    for clause in phi.positive:
        m = uni.mask(clause)
        add(full, 1)
        add(m, -1)
    for clause in phi.negative:
        m = uni.mask(clause)
        for mask, c in expand_measure(uni, multi_mutual_info(m)).terms.items():
            add(mask, int(c))
    return make_expr(uni, acc)


def from_3coloring(g: Graph) -> Expr:
    """Color-variable inequality that is step-valid iff G is not
    3-colorable.

    Universe holds one variable per vertex and color. Singleton entropies
    reward picking colors; blocks weighted just past their total count
    forbid giving a vertex two colors or an edge one, read through the
    complement of the failing step set.
    """
    names = sorted(f"{v}_{c}" for v in g.vertices for c in COLORS)
    uni = Universe(tuple(names))
    full = uni.full_mask
    weight = 2 * len(g.vertices) + 1
    acc: dict[int, Fraction] = {full: Fraction(-weight)}

    def add(mask: int, c: int) -> None:
        acc[mask] = acc.get(mask, Fraction(0)) + c

    for v in g.vertices:
        for c in COLORS:
            add(uni.mask([f"{v}_{c}"]), 1)
        for c, d in itertools.permutations(COLORS, 2):
            add(full, weight)
            add(uni.mask([f"{v}_{c}", f"{v}_{d}"]), -weight)
    for a, b in g.edges:
        for c in COLORS:
            add(full, weight)
            add(uni.mask([f"{a}_{c}", f"{b}_{c}"]), -weight)
    return make_expr(uni, acc)


def from_partition(inst: PartitionInstance) -> Expr:
    """Pairwise cross-product form that fails on a step function exactly
    when the items split into two halves of equal sum.

    Each unordered pair contributes its item product once through both
    one-sided conditional entropies, so a step set worth S on one side
    makes the subtracted part S(m-S), beating (m/2)^2 - 1 only at S = m/2.
    """
    items = inst.items
    m = sum(items)
    if m % 2:
        raise DomainError("total sum must be even")
    uni = Universe(tuple(f"A{i + 1}" for i in range(len(items))))
    bound = (m // 2) ** 2 - 1
    acc: dict[int, Fraction] = {}
    if uni.full_mask:
        acc[uni.full_mask] = Fraction(bound)
    for i, j in itertools.combinations(range(len(items)), 2):
        x = items[i] * items[j]
        a, b = 1 << i, 1 << j

        # x(h(Ai|Aj) + h(Aj|Ai)) = x(2 h(AiAj) - h(Ai) - h(Aj))
        acc[a] = acc.get(a, Fraction(0)) + x
        acc[b] = acc.get(b, Fraction(0)) + x
        acc[a | b] = acc.get(a | b, Fraction(0)) - 2 * x
    return make_expr(uni, acc)


def assignment_satisfies(phi: MonSat3Instance, true_vars: frozenset) -> bool:
    return all(clause & true_vars for clause in phi.positive) and all(
        not clause <= true_vars for clause in phi.negative
    )


def sat_oracle(phi: MonSat3Instance) -> bool:
    """Exhaustive satisfiability check over all assignments."""
    if len(phi.variables) > SAT_ORACLE_MAX_VARS:
        raise CapExceeded(
            f"oracle capped at {SAT_ORACLE_MAX_VARS} variables"
        )
    for r in range(len(phi.variables) + 1):
        for chosen in itertools.combinations(phi.variables, r):
            if assignment_satisfies(phi, frozenset(chosen)):
                return True
    return False


def coloring_is_proper(g: Graph, colors: dict) -> bool:
    if set(colors) != set(g.vertices):
        return False
    if any(colors[v] not in COLORS for v in g.vertices):
        return False
    return all(colors[a] != colors[b] for a, b in g.edges)


def coloring_oracle(g: Graph) -> bool:
    """Exhaustive search for a proper 3-coloring."""
    if len(g.vertices) > COLORING_ORACLE_MAX_VERTICES:
        raise CapExceeded(
            f"oracle capped at {COLORING_ORACLE_MAX_VERTICES} vertices"
        )
    for assignment in itertools.product(COLORS, repeat=len(g.vertices)):
        colors = dict(zip(g.vertices, assignment))
        if coloring_is_proper(g, colors):
            return True
    return False


def partition_oracle(inst: PartitionInstance) -> bool:
    """Subset-sum reachability of half the total."""
    if len(inst.items) > PARTITION_ORACLE_MAX_ITEMS:
        raise CapExceeded(
            f"oracle capped at {PARTITION_ORACLE_MAX_ITEMS} items"
        )
    total = sum(inst.items)
    if total > PARTITION_ORACLE_MAX_SUM:
        raise CapExceeded(f"oracle capped at total sum {PARTITION_ORACLE_MAX_SUM}")
    reachable = 1  # bitset over sums
    for x in inst.items:
        reachable |= reachable << x
    return bool(reachable >> (total // 2) & 1)


def decode_monsat_witness(
    phi: MonSat3Instance, witness: Witness
) -> frozenset:
    """Failing step set, read directly as the set of true variables."""
    uni = witness.function.universe
    return frozenset(uni.names_of(witness.step_set))


def decode_coloring_witness(g: Graph, witness: Witness) -> dict:
    """Color each vertex by its unique color variable outside the step set."""
    uni = witness.function.universe
    kept = set(uni.names_of(uni.full_mask & ~witness.step_set))
    colors = {}
    for v in g.vertices:
        picks = [c for c in COLORS if f"{v}_{c}" in kept]
        if len(picks) != 1:
            raise DomainError(f"witness gives vertex {v} {len(picks)} colors")
        colors[v] = picks[0]
    return colors


def decode_partition_witness(
    inst: PartitionInstance, witness: Witness
) -> tuple[int, ...]:
    """Item indices on the step-set side; their sum is half the total."""
    uni = witness.function.universe
    side = tuple(
        i
        for i in range(len(inst.items))
        if witness.step_set >> uni.index(f"A{i + 1}") & 1
    )
    if 2 * sum(inst.items[i] for i in side) != sum(inst.items):
        raise DomainError("witness does not give an equal split")
    return side


def _strip_comments(text: str, marker: str = "c") -> list[tuple[int, str]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line == marker or line.startswith(marker + " "):
            continue
        out.append((lineno, line))
    return out


def parse_monsat(text: str) -> MonSat3Instance:
    """DIMACS-like: `p monsat3 <vars> <clauses>` then `+ i j k` / `- i j k`."""
    lines = _strip_comments(text)
    if not lines or not lines[0][1].startswith("p "):
        raise DomainError("missing problem line")
    lineno, problem = lines[0]
    fields = problem.split()
    if len(fields) != 4 or fields[1] != "monsat3":
        raise DomainError(f"line {lineno}: expected `p monsat3 <n> <m>`")
    try:
        n_vars, n_clauses = int(fields[2]), int(fields[3])
    except ValueError:
        raise DomainError(f"line {lineno}: bad problem counts") from None
    variables = tuple(f"x{i}" for i in range(1, n_vars + 1))
    positive, negative = [], []
    for lineno, line in lines[1:]:
        fields = line.split()
        if len(fields) != 4 or fields[0] not in "+-":
            raise DomainError(f"line {lineno}: expected `+ i j k` or `- i j k`")
        try:
            idx = [int(f) for f in fields[1:]]
        except ValueError:
            raise DomainError(f"line {lineno}: bad variable index") from None
        if any(i < 1 or i > n_vars for i in idx):
            raise DomainError(f"line {lineno}: variable index out of range")
        clause = frozenset(f"x{i}" for i in idx)
        (positive if fields[0] == "+" else negative).append(clause)
    if len(positive) + len(negative) != n_clauses:
        raise DomainError("clause count differs from the problem line")
    return MonSat3Instance(variables, tuple(positive), tuple(negative))


def parse_graph(text: str) -> Graph:
    """DIMACS edge list: `p edge <vertices> <edges>` then `e i j`."""
    lines = _strip_comments(text)
    if not lines or not lines[0][1].startswith("p "):
        raise DomainError("missing problem line")
    lineno, problem = lines[0]
    fields = problem.split()
    if len(fields) != 4 or fields[1] != "edge":
        raise DomainError(f"line {lineno}: expected `p edge <n> <m>`")
    n_vertices, n_edges = int(fields[2]), int(fields[3])
    vertices = tuple(f"v{i}" for i in range(1, n_vertices + 1))
    edges = []
    for lineno, line in lines[1:]:
        fields = line.split()
        if len(fields) != 3 or fields[0] != "e":
            raise DomainError(f"line {lineno}: expected `e i j`")
        i, j = int(fields[1]), int(fields[2])
        if not (1 <= i <= n_vertices and 1 <= j <= n_vertices):
            raise DomainError(f"line {lineno}: vertex index out of range")
        edges.append((f"v{i}", f"v{j}"))
    if len(edges) != n_edges:
        raise DomainError("edge count differs from the problem line")
    return graph(vertices, edges)


def parse_partition(text: str) -> PartitionInstance:
    """Whitespace-separated positive integers."""
    fields = text.split()
    if not fields:
        raise DomainError("empty partition instance")
    try:
        items = tuple(int(f) for f in fields)
    except ValueError:
        raise DomainError("partition items must be integers") from None
    return PartitionInstance(items)
