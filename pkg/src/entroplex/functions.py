"""Set functions: steps, modular functions, entropic vectors, classifiers.

The exact side works in Fractions; entropies computed from a distribution are
the single floating-point surface and live in their own type.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .core import DomainError, Expr, Rat, Universe

MONOTONE_ENUM_MAX_N = 5


@dataclass(frozen=True)
class SetFunction:
    """Dense vector of 2^n exact values with value({}) = 0, indexed by mask."""

    universe: Universe
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.values) != 1 << self.universe.n:
            raise DomainError("value vector length must be 2^n")
        if self.values[0] != 0:
            raise DomainError("a set function must vanish on the empty set")

    def __getitem__(self, mask: int) -> Fraction:
        return self.values[mask]

    def table(self) -> dict[str, Fraction]:
        """Readable mapping from '{A,B}' labels to values, nonempty sets only."""
        return {
            self.universe.label(m): self.values[m]
            for m in range(1, len(self.values))
        }


def from_values(uni: Universe, values: Sequence[Rat]) -> SetFunction:
    return SetFunction(uni, tuple(Fraction(v) for v in values))


def zero_function(uni: Universe) -> SetFunction:
    return SetFunction(uni, (Fraction(0),) * (1 << uni.n))


def step_function(uni: Universe, v: int) -> SetFunction:
    """s^V: value 1 exactly on sets that intersect V; V must be nonempty."""
    if v == 0:
        raise DomainError("a step function needs a nonempty witness set")
    if v > uni.full_mask:
        raise DomainError("step set outside universe")
    one, zero = Fraction(1), Fraction(0)
    return SetFunction(
        uni, tuple(one if m & v else zero for m in range(1 << uni.n))
    )


def basic_modular(uni: Universe, name: str) -> SetFunction:
    """s^{{A}}: value 1 exactly on sets containing the variable A."""
    return step_function(uni, 1 << uni.index(name))


def is_monotone(fn: SetFunction) -> bool:
    """value(S) <= value(S | {i}) for every S and i, hence for all supersets."""
    n = fn.universe.n
    for m in range(1 << n):
        for i in range(n):
            if not m >> i & 1:
                if fn.values[m] > fn.values[m | 1 << i]:
                    return False
    return True


def is_polymatroid(fn: SetFunction) -> bool:
    """Monotone plus submodular, checked through the elemental inequalities."""
    if not is_monotone(fn):
        return False
    n = fn.universe.n
    for i in range(n):
        for j in range(i + 1, n):
            pair = (1 << i) | (1 << j)
            others = fn.universe.full_mask & ~pair
            k = others
            while True:
                # I(i;j|K) >= 0 for every K disjoint from {i,j}
                lhs = fn.values[k | 1 << i] + fn.values[k | 1 << j]
                if lhs < fn.values[k] + fn.values[k | pair]:
                    return False
                if k == 0:
                    break
                k = (k - 1) & others
    return True


def is_modular(fn: SetFunction) -> bool:
    """Additive over singletons with nonnegative weights."""
    n = fn.universe.n
    singles = [fn.values[1 << i] for i in range(n)]
    if any(s < 0 for s in singles):
        return False
    for m in range(1 << n):
        total = sum(singles[i] for i in range(n) if m >> i & 1)
        if fn.values[m] != total:
            return False
    return True


def enumerate_monotone_boolean(uni: Universe) -> Iterator[SetFunction]:
    """Every monotone 0/1 function with value({}) = 0, each exactly once.

    Equivalently the upward-closed families of nonempty subsets. Yielded in
    increasing order of the family bitmask (bit m set iff value(mask m) = 1).
    Counts follow the Dedekind numbers minus one: 2, 5, 19, 167, 7580 for
    n = 1..5.
    """
    n = uni.n
    if n > MONOTONE_ENUM_MAX_N:
        raise DomainError(
            f"monotone enumeration capped at n <= {MONOTONE_ENUM_MAX_N}"
        )
    size = 1 << n
    masks = list(range(1, size))
    # Deciding membership for larger sets first makes the monotonicity check
    # local: mask may be 1 only if all its immediate supersets are 1.
    order = sorted(masks, key=lambda m: (-bin(m).count("1"), m))
    supersets = {
        m: [m | 1 << i for i in range(n) if not m >> i & 1] for m in masks
    }
    families: list[int] = []

    def assign(pos: int, family: int) -> None:
        if pos == len(order):
            families.append(family)
            return
        m = order[pos]
        assign(pos + 1, family)  # value(m) = 0
        if all(family >> s & 1 for s in supersets[m]):
            assign(pos + 1, family | 1 << m)

    assign(0, 0)
    one, zero = Fraction(1), Fraction(0)
    for family in sorted(families):
        yield SetFunction(
            uni,
            tuple(one if m and family >> m & 1 else zero for m in range(size)),
        )


@dataclass(frozen=True)
class JointDistribution:
    """Finite joint distribution: distinct value rows with positive weights."""

    universe: Universe
    rows: tuple[tuple[tuple[str, ...], Fraction], ...]

    def __post_init__(self) -> None:
        width = self.universe.n
        seen = set()
        total = Fraction(0)
        for values, p in self.rows:
            if len(values) != width:
                raise DomainError("row width does not match the schema")
            if values in seen:
                raise DomainError(f"duplicate row {values!r}")
            seen.add(values)
            if p <= 0:
                raise DomainError("probabilities must be positive")
            total += p
        if total != 1:
            raise DomainError(f"probabilities sum to {total}, expected 1")


@dataclass(frozen=True)
class EntropyVector:
    """Marginal entropies in bits, one float per subset. Display and
    tolerance checks only; never feeds an exact verdict."""

    universe: Universe
    values: tuple[float, ...]

    def __getitem__(self, mask: int) -> float:
        return self.values[mask]


def entropic_from_distribution(dist: JointDistribution) -> EntropyVector:
    """Entropy (base 2) of every marginal of the distribution."""
    uni = dist.universe
    n = uni.n
    out = [0.0] * (1 << n)
    for mask in range(1, 1 << n):
        idx = [i for i in range(n) if mask >> i & 1]
        marginal: dict[tuple[str, ...], Fraction] = {}
        for values, p in dist.rows:
            key = tuple(values[i] for i in idx)
            marginal[key] = marginal.get(key, Fraction(0)) + p
        out[mask] = -sum(float(p) * math.log2(float(p)) for p in marginal.values())
    return EntropyVector(uni, tuple(out))


def distribution_from_csv(text: str) -> JointDistribution:
    """Parse the CSV-like exchange format: variable headers plus a prob column.

    Probabilities are exact rationals, `p/q` or integer.
    """
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise DomainError("empty distribution file")
    header = [c.strip() for c in lines[0].split(",")]
    if not header or header[-1] != "prob":
        raise DomainError("last CSV column must be 'prob'")
    names = tuple(header[:-1])
    uni = Universe(names)
    rows = []
    for ln in lines[1:]:
        cells = [c.strip() for c in ln.split(",")]
        if len(cells) != len(header):
            raise DomainError(f"row has {len(cells)} cells, expected {len(header)}")
        rows.append((tuple(cells[:-1]), Fraction(cells[-1])))
    return JointDistribution(uni, tuple(rows))
