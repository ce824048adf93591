"""Chain-valued capacities on finite spaces and their monad structure.

A capacity assigns a chain level to every subset, is monotone, and sends
the empty set to 0 and the whole space to 1.  Possibility capacities
turn unions into maxima and are determined by a density on points with
maximum 1; necessity capacities turn intersections into minima and are
determined by a codensity (the value on each complement of a point)
with minimum 0.  Both are stored in their one-dimensional form and
evaluate subsets lazily, so they stay usable on carriers far too large
for explicit tables.

The monad: the unit sends a point to its Dirac capacity, the functor
acts by preimage, and the multiplication of an outer capacity over a
carrier of named capacities picks, for each subset F, the largest level
a such that the outer mass of {inner : inner(F) >= a} is itself >= a.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Mapping, NamedTuple

from .chain import Chain, Level, complement as level_complement
from .errors import (
    BudgetExceededError,
    CarrierMismatchError,
    ValidationError,
)
from .spaces import FiniteSpace, InclusionHyperspace, PointMap, Subset

# explicit tables hold 2^n entries; keep that honest
_MAX_TABLE_CARRIER = 16
# default guard for mult over table-backed outer capacities
DEFAULT_MULT_CARRIER_LIMIT = 64
# default guard for enumeration: (2^|X| - 1) * (k + 1)
DEFAULT_ENUMERATION_BUDGET = 64


class SetFunction:
    """Explicit subset -> level table; not necessarily a capacity."""

    __slots__ = ("carrier", "chain", "table")

    def __init__(self, carrier: FiniteSpace, chain: Chain, table: Mapping[Subset, Level]):
        if len(carrier) > _MAX_TABLE_CARRIER:
            raise BudgetExceededError(
                f"explicit tables are limited to carriers of size {_MAX_TABLE_CARRIER}"
            )
        fixed: dict[Subset, Level] = {}
        for s in carrier.subsets(include_empty=True):
            if s not in table:
                raise ValidationError(f"missing value for subset {sorted(s)}")
            fixed[s] = chain.level(table[s])
        self.carrier = carrier
        self.chain = chain
        self.table = fixed

    def value(self, members: Subset) -> Level:
        got = self.table.get(frozenset(members))
        if got is None:
            raise ValidationError(f"{sorted(members)} is not a subset of the carrier")
        return got

    def __eq__(self, other):
        return (
            isinstance(other, SetFunction)
            and other.carrier == self.carrier
            and other.chain == self.chain
            and other.table == self.table
        )

    def __hash__(self):
        return hash((self.carrier, self.chain, canonical_key(self)))

    def __repr__(self):
        parts = [
            f"{{{','.join(self.carrier.sorted_names(s))}}}:{v}"
            for s, v in sorted(self.table.items(), key=lambda kv: self.carrier.subset_key(kv[0]))
        ]
        return f"{type(self).__name__}({'; '.join(parts)})"


class Capacity(SetFunction):
    """A normalized monotone set function, table-backed."""

    __slots__ = ()

    def __init__(self, carrier, chain, table):
        super().__init__(carrier, chain, table)
        problems = validate(self, require_normalized=True)
        if problems:
            raise ValidationError("; ".join(problems))


class PossibilityCapacity:
    """Capacity determined by a point density with maximum 1."""

    __slots__ = ("carrier", "chain", "density")

    def __init__(self, carrier: FiniteSpace, chain: Chain, density: Mapping[str, Level]):
        for x in density:
            if x not in carrier.index:
                raise ValidationError(f"density key {x!r} is not in the carrier")
        dens = {x: chain.level(density.get(x, 0)) for x in carrier.elements}
        if max(dens.values()) != chain.one:
            raise ValidationError("a possibility density must attain 1")
        self.carrier = carrier
        self.chain = chain
        self.density = dens

    def value(self, members: Subset) -> Level:
        members = frozenset(members)
        bad = members - self.carrier.universe
        if bad:
            raise ValidationError(f"{sorted(bad)} are not elements of the carrier")
        if not members:
            return self.chain.zero
        return max(self.density[x] for x in members)

    def __eq__(self, other):
        return (
            isinstance(other, PossibilityCapacity)
            and other.carrier == self.carrier
            and other.chain == self.chain
            and other.density == self.density
        )

    def __hash__(self):
        return hash((self.carrier, self.chain, tuple(self.density[x] for x in self.carrier.elements)))

    def __repr__(self):
        parts = [f"{x}:{self.density[x]}" for x in self.carrier.elements]
        return f"PossibilityCapacity({', '.join(parts)})"


class NecessityCapacity:
    """Capacity determined by its values on complements of points (codensity, min 0)."""

    __slots__ = ("carrier", "chain", "codensity")

    def __init__(self, carrier: FiniteSpace, chain: Chain, codensity: Mapping[str, Level]):
        for x in codensity:
            if x not in carrier.index:
                raise ValidationError(f"codensity key {x!r} is not in the carrier")
        cod = {x: chain.level(codensity.get(x, 1)) for x in carrier.elements}
        if min(cod.values()) != chain.zero:
            raise ValidationError("a necessity codensity must attain 0")
        self.carrier = carrier
        self.chain = chain
        self.codensity = cod

    def value(self, members: Subset) -> Level:
        members = frozenset(members)
        bad = members - self.carrier.universe
        if bad:
            raise ValidationError(f"{sorted(bad)} are not elements of the carrier")
        if not members:
            return self.chain.zero
        outside = self.carrier.universe - members
        if not outside:
            return self.chain.one
        return min(self.codensity[x] for x in outside)

    def __eq__(self, other):
        return (
            isinstance(other, NecessityCapacity)
            and other.carrier == self.carrier
            and other.chain == self.chain
            and other.codensity == self.codensity
        )

    def __hash__(self):
        return hash((self.carrier, self.chain, tuple(self.codensity[x] for x in self.carrier.elements)))

    def __repr__(self):
        parts = [f"{x}:{self.codensity[x]}" for x in self.carrier.elements]
        return f"NecessityCapacity({', '.join(parts)})"


class PushforwardView:
    """Lazy image capacity F -> c(f^{-1}(F)); for targets too large for tables."""

    __slots__ = ("carrier", "chain", "map", "source")

    def __init__(self, f: PointMap, c):
        if c.carrier != f.source:
            raise CarrierMismatchError("capacity carrier differs from the map source")
        self.carrier = f.target
        self.chain = c.chain
        self.map = f
        self.source = c

    def value(self, members: Subset) -> Level:
        return self.source.value(self.map.preimage(frozenset(members)))


class MultView:
    """Lazy monad multiplication value; for bases too large for tables."""

    __slots__ = ("carrier", "chain", "outer", "assignment")

    def __init__(self, base: FiniteSpace, outer, assignment):
        self.carrier = base
        self.chain = outer.chain
        self.outer = outer
        self.assignment = dict(assignment)

    def value(self, members: Subset) -> Level:
        members = frozenset(members)
        if not members:
            return self.chain.zero
        names = self.outer.carrier.elements
        inner_vals = {n: self.assignment[n].value(members) for n in names}
        for alpha in reversed(self.chain.levels[1:]):
            level_set = frozenset(n for n in names if inner_vals[n] >= alpha)
            if self.outer.value(level_set) >= alpha:
                return alpha
        return self.chain.zero


CapacityLike = (
    SetFunction | PossibilityCapacity | NecessityCapacity | PushforwardView | MultView
)


def validate(sf, require_normalized: bool = False) -> list[str]:
    """Diagnostics for the capacity invariants; empty list means valid.

    Monotonicity is checked along covering pairs F vs F + {x}, which
    suffices by transitivity.
    """
    problems: list[str] = []
    carrier, chain = sf.carrier, sf.chain
    empty_val = sf.value(frozenset())
    if empty_val != chain.zero:
        problems.append(f"empty-set-nonzero: value(∅)={empty_val}")
    for s in carrier.subsets(include_empty=True):
        v = sf.value(s)
        for extra in carrier.elements:
            if extra in s:
                continue
            bigger = s | {extra}
            w = sf.value(bigger)
            if v > w:
                a = "{" + ",".join(carrier.sorted_names(s)) + "}"
                b = "{" + ",".join(carrier.sorted_names(bigger)) + "}"
                problems.append(f"monotonicity violated at {a}⊆{b}: {v} > {w}")
    if require_normalized:
        top = sf.value(carrier.universe)
        if top != chain.one:
            problems.append(f"not-normalized: value(X)={top}")
    return problems


def as_capacity(c: CapacityLike) -> Capacity:
    """Materialize any capacity-like object as an explicit table."""
    if isinstance(c, Capacity):
        return c
    table = {s: c.value(s) for s in c.carrier.subsets(include_empty=True)}
    return Capacity(c.carrier, c.chain, table)


def capacity_equal(a: CapacityLike, b: CapacityLike) -> bool:
    """Value-wise equality across representations (small carriers only)."""
    if a.carrier != b.carrier or a.chain != b.chain:
        return False
    return all(
        a.value(s) == b.value(s) for s in a.carrier.subsets(include_empty=True)
    )


def canonical_key(c: CapacityLike) -> tuple:
    """Value tuple over subsets in canonical order; usable as a dict key."""
    return tuple(c.value(s).value for s in c.carrier.subsets())


def unit_dirac(space: FiniteSpace, chain: Chain, x: str) -> Capacity:
    """Dirac capacity of a point: 1 on subsets containing it, else 0."""
    if x not in space.index:
        raise ValidationError(f"{x!r} is not in the space")
    table = {
        s: (chain.one if x in s else chain.zero)
        for s in space.subsets(include_empty=True)
    }
    return Capacity(space, chain, table)


def dirac_density(space: FiniteSpace, chain: Chain, x: str) -> PossibilityCapacity:
    """Density form of the Dirac capacity; works on carriers of any size."""
    if x not in space.index:
        raise ValidationError(f"{x!r} is not in the space")
    return PossibilityCapacity(space, chain, {x: chain.one})


def pushforward(f: PointMap, c: CapacityLike) -> CapacityLike:
    """Image capacity F -> c(f^{-1}(F)); preserves the possibility/necessity classes.

    Density and codensity forms push to the same forms at any target
    size; other inputs materialize a table when the target is small
    enough and fall back to a lazy view otherwise.
    """
    if c.carrier != f.source:
        raise CarrierMismatchError("capacity carrier differs from the map source")
    chain = c.chain
    if isinstance(c, PossibilityCapacity):
        dens: dict[str, Level] = {}
        for y in f.target.elements:
            fiber = [x for x in f.source.elements if f(x) == y]
            dens[y] = max((c.density[x] for x in fiber), default=chain.zero)
        return PossibilityCapacity(f.target, chain, dens)
    if isinstance(c, NecessityCapacity):
        cod: dict[str, Level] = {}
        for y in f.target.elements:
            fiber = [x for x in f.source.elements if f(x) == y]
            cod[y] = min((c.codensity[x] for x in fiber), default=chain.one)
        return NecessityCapacity(f.target, chain, cod)
    if len(f.target) > _MAX_TABLE_CARRIER:
        return PushforwardView(f, c)
    table = {
        s: c.value(f.preimage(s))
        for s in f.target.subsets(include_empty=True)
    }
    return Capacity(f.target, chain, table)


def mult(
    outer: CapacityLike,
    assignment: Mapping[str, CapacityLike],
    max_carrier: int = DEFAULT_MULT_CARRIER_LIMIT,
) -> CapacityLike:
    """Monad multiplication.

    ``outer`` is a capacity over a carrier whose elements name capacities
    on a common base space (via ``assignment``).  For each subset F of
    the base space the result is the largest level a with
    outer({name : assignment[name](F) >= a}) >= a; the family of those
    level sets shrinks as a grows, so a descending scan returns at the
    first hit.

    Table-backed outers are rejected above ``max_carrier`` elements;
    density/codensity-backed outers evaluate lazily at any size.  The
    result is an explicit table when the base space is small enough and
    a lazy view otherwise.
    """
    if isinstance(outer, SetFunction) and len(outer.carrier) > max_carrier:
        raise BudgetExceededError(
            f"table-backed outer capacity over {len(outer.carrier)} elements "
            f"exceeds the limit of {max_carrier}"
        )
    chain = outer.chain
    base: FiniteSpace | None = None
    for name in outer.carrier.elements:
        inner = assignment.get(name)
        if inner is None:
            raise ValidationError(f"no capacity assigned to carrier element {name!r}")
        if inner.chain != chain:
            raise ValidationError("inner capacities must share the outer chain")
        if base is None:
            base = inner.carrier
        elif inner.carrier != base:
            raise CarrierMismatchError("assigned capacities live on different spaces")
    assert base is not None
    view = MultView(base, outer, assignment)
    if len(base) > _MAX_TABLE_CARRIER:
        return view
    table: dict[Subset, Level] = {
        s: view.value(s) for s in base.subsets(include_empty=True)
    }
    return Capacity(base, chain, table)


class ClassFlags(NamedTuple):
    is_union: bool
    is_intersection: bool


def classify(c: CapacityLike) -> ClassFlags:
    """Test the union (max) and intersection (min) laws over all subset pairs.

    Disjoint pairs are held to the intersection law literally: the empty
    intersection has value 0, so min(c(A), c(B)) must be 0.
    """
    subsets = list(c.carrier.subsets(include_empty=True))
    values = {s: c.value(s) for s in subsets}
    is_union = True
    is_intersection = True
    for a, b in itertools.combinations_with_replacement(subsets, 2):
        if is_union and values[a | b] != max(values[a], values[b]):
            is_union = False
        if is_intersection and values[a & b] != min(values[a], values[b]):
            is_intersection = False
        if not is_union and not is_intersection:
            break
    return ClassFlags(is_union, is_intersection)


def as_possibility(c: CapacityLike) -> PossibilityCapacity:
    """Density form of a capacity satisfying the union law."""
    if isinstance(c, PossibilityCapacity):
        return c
    dens = {x: c.value(frozenset([x])) for x in c.carrier.elements}
    cand = PossibilityCapacity(c.carrier, c.chain, dens)
    if not capacity_equal(cand, c):
        raise ValidationError("capacity does not satisfy the union law")
    return cand


def as_necessity(c: CapacityLike) -> NecessityCapacity:
    """Codensity form of a capacity satisfying the intersection law."""
    if isinstance(c, NecessityCapacity):
        return c
    universe = c.carrier.universe
    cod = {x: c.value(universe - {x}) for x in c.carrier.elements}
    cand = NecessityCapacity(c.carrier, c.chain, cod)
    if not capacity_equal(cand, c):
        raise ValidationError("capacity does not satisfy the intersection law")
    return cand


def kappa_dual(c: CapacityLike) -> CapacityLike:
    """Conjugate capacity F -> 1 - c(X \\ F); swaps the two classes.

    Density-backed inputs stay one-dimensional: the conjugate of a
    possibility density d is the necessity codensity 1 - d, and back.
    """
    chain = c.chain
    if isinstance(c, PossibilityCapacity):
        cod = {x: level_complement(v) for x, v in c.density.items()}
        return NecessityCapacity(c.carrier, chain, cod)
    if isinstance(c, NecessityCapacity):
        dens = {x: level_complement(v) for x, v in c.codensity.items()}
        return PossibilityCapacity(c.carrier, chain, dens)
    universe = c.carrier.universe
    table = {
        s: level_complement(c.value(universe - s))
        for s in c.carrier.subsets(include_empty=True)
    }
    return Capacity(c.carrier, chain, table)


def embed_inclusion_hyperspace(hs: InclusionHyperspace, chain: Chain) -> Capacity:
    """0/1 capacity of a hyperspace: 1 exactly on its members."""
    table = {
        s: (chain.one if s and s in hs else chain.zero)
        for s in hs.carrier.subsets(include_empty=True)
    }
    return Capacity(hs.carrier, chain, table)


def _binary_pointwise(a: CapacityLike, b: CapacityLike, op) -> SetFunction:
    if a.carrier != b.carrier:
        raise CarrierMismatchError("operands live on different spaces")
    if a.chain != b.chain:
        raise ValidationError("operands use different chains")
    table = {
        s: op(a.value(s), b.value(s))
        for s in a.carrier.subsets(include_empty=True)
    }
    return SetFunction(a.carrier, a.chain, table)


def pointwise_join(a: CapacityLike, b: CapacityLike) -> SetFunction:
    return _binary_pointwise(a, b, max)

def pointwise_meet(a: CapacityLike, b: CapacityLike) -> SetFunction:
    return _binary_pointwise(a, b, min)


def scale_meet(alpha: Level, c: CapacityLike) -> SetFunction:
    """Subset-wise min with a constant level."""
    alpha = c.chain.level(alpha)
    table = {
        s: min(alpha, c.value(s))
        for s in c.carrier.subsets(include_empty=True)
    }
    return SetFunction(c.carrier, c.chain, table)


def scale_join(alpha: Level, c: CapacityLike) -> SetFunction:
    """Subset-wise max with a constant level on nonempty subsets.

    The empty set is pinned at 0 so the result stays a set function;
    every use in the derived formulas meets the result with another
    capacity, which forces 0 there anyway.
    """
    alpha = c.chain.level(alpha)
    table: dict[Subset, Level] = {frozenset(): c.chain.zero}
    for s in c.carrier.subsets():
        table[s] = max(alpha, c.value(s))
    return SetFunction(c.carrier, c.chain, table)


def _check_enumeration_budget(space: FiniteSpace, chain: Chain, budget: int) -> None:
    cost = (2 ** len(space) - 1) * (chain.k + 1)
    if cost > budget:
        raise BudgetExceededError(
            f"enumeration size measure {cost} exceeds budget {budget} "
            f"(|X|={len(space)}, k={chain.k})"
        )


def enumerate_capacities(
    space: FiniteSpace,
    chain: Chain,
    kind: str = "all",
    budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> Iterator[CapacityLike]:
    """Enumerate capacities in a fixed order.

    kind="all" walks subsets by (size, position) and assigns each the
    smallest admissible levels first, so the stream is lexicographic in
    the value tuple.  kind="union" / "intersection" run over densities
    with max 1 / codensities with min 0 in lexicographic order.
    """
    _check_enumeration_budget(space, chain, budget)
    if kind == "all":
        yield from _enumerate_all(space, chain)
    elif kind == "union":
        for dens in _graded_tuples(len(space), chain, chain.one, need_max=True):
            yield PossibilityCapacity(
                space, chain, dict(zip(space.elements, dens))
            )
    elif kind == "intersection":
        for cod in _graded_tuples(len(space), chain, chain.zero, need_min=True):
            yield NecessityCapacity(
                space, chain, dict(zip(space.elements, cod))
            )
    else:
        raise ValidationError(f"unknown capacity class {kind!r}")


def _graded_tuples(n: int, chain: Chain, pin: Level, need_max=False, need_min=False):
    for combo in itertools.product(chain.levels, repeat=n):
        if need_max and max(combo) != pin:
            continue
        if need_min and min(combo) != pin:
            continue
        yield combo


def _enumerate_all(space: FiniteSpace, chain: Chain) -> Iterator[Capacity]:
    subsets = sorted(space.subsets(), key=space.subset_key)
    proper = subsets[:-1]
    universe = space.universe
    assignment: dict[Subset, Level] = {frozenset(): chain.zero, universe: chain.one}

    def floor_for(s: Subset) -> Level:
        lo = chain.zero
        for x in s:
            sub = s - {x}
            v = assignment[sub]
            if v > lo:
                lo = v
        return lo

    def rec(i: int) -> Iterator[Capacity]:
        if i == len(proper):
            yield Capacity(space, chain, dict(assignment))
            return
        s = proper[i]
        lo = floor_for(s)
        for lv in chain.levels:
            if lv < lo:
                continue
            assignment[s] = lv
            yield from rec(i + 1)
        del assignment[s]

    if not proper:  # one-point space: only the Dirac
        yield Capacity(space, chain, dict(assignment))
        return
    yield from rec(0)


def capacity_space(
    space: FiniteSpace, chain: Chain, budget: int = DEFAULT_ENUMERATION_BUDGET
) -> tuple[FiniteSpace, dict[str, Capacity]]:
    """Name every capacity on the space: c0, c1, ... in enumeration order."""
    caps = list(enumerate_capacities(space, chain, "all", budget))
    names = FiniteSpace([f"c{i}" for i in range(len(caps))])
    return names, {f"c{i}": c for i, c in enumerate(caps)}


def possibility_space(
    space: FiniteSpace, chain: Chain, budget: int = DEFAULT_ENUMERATION_BUDGET
) -> tuple[FiniteSpace, dict[str, PossibilityCapacity]]:
    caps = list(enumerate_capacities(space, chain, "union", budget))
    names = FiniteSpace([f"p{i}" for i in range(len(caps))])
    return names, {f"p{i}": c for i, c in enumerate(caps)}


def necessity_space(
    space: FiniteSpace, chain: Chain, budget: int = DEFAULT_ENUMERATION_BUDGET
) -> tuple[FiniteSpace, dict[str, NecessityCapacity]]:
    caps = list(enumerate_capacities(space, chain, "intersection", budget))
    names = FiniteSpace([f"n{i}" for i in range(len(caps))])
    return names, {f"n{i}": c for i, c in enumerate(caps)}


def random_capacity(space: FiniteSpace, chain: Chain, rng) -> Capacity:
    """Seeded random capacity.

    Walks subsets in (size, position) order and draws each value
    uniformly from the levels at or above the largest already-fixed
    value of an immediate subset; the whole space is pinned at 1.
    """
    table: dict[Subset, Level] = {frozenset(): chain.zero}
    subsets = sorted(space.subsets(), key=space.subset_key)
    for s in subsets[:-1]:
        lo = max(table[s - {x}] for x in s)
        choices = [lv for lv in chain.levels if lv >= lo]
        table[s] = rng.choice(choices)
    table[space.universe] = chain.one
    return Capacity(space, chain, table)
