"""Biconvex structures: algebras for the full capacity monad at chain scale.

A biconvex structure is a lattice (bjoin, bmeet) carrying two chain
actions: smeet (weight-limited membership, distributing over joins) and
sjoin (guarantee-raising, distributing over meets), tied together by
mixed associative and distributive laws.  An equivalent presentation
replaces the actions by two level maps p (scaled bottoms) and m (scaled
tops).

The structure map for a general capacity factors through the two
one-sided maps: pick any possibility-over-necessity mixture whose
multiplication is the capacity, push it along the necessity-side map,
and apply the possibility-side map to the image density.  The value is
independent of the chosen mixture, and both factorization orders agree;
the law suites verify this exhaustively at desk scale.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping

from .chain import Chain, Level
from .errors import (
    BudgetExceededError,
    CarrierMismatchError,
    LawViolationError,
    ValidationError,
)
from .capacity import (
    CapacityLike,
    NecessityCapacity,
    PossibilityCapacity,
    canonical_key,
    enumerate_capacities,
    necessity_space,
    possibility_space,
    pushforward,
)
from .spaces import FiniteSpace, PointMap, Subset

DEFAULT_SEARCH_BUDGET = 2_000_000


class BiconvexStructure:
    """Lattice tables plus the two chain actions, all explicit."""

    __slots__ = ("carrier", "chain", "bjoin", "bmeet", "smeet", "sjoin")

    def __init__(self, carrier, chain, bjoin, bmeet, smeet, sjoin):
        for table, label in ((bjoin, "bjoin"), (bmeet, "bmeet")):
            for x, y in itertools.product(carrier.elements, repeat=2):
                if (x, y) not in table:
                    raise ValidationError(f"{label} table missing {x}|{y}")
                if table[(x, y)] not in carrier.index:
                    raise ValidationError(f"{label} value {table[(x, y)]!r} not in carrier")
        for table, label in ((smeet, "smeet"), (sjoin, "sjoin")):
            for a in chain.levels:
                for x in carrier.elements:
                    if (a, x) not in table:
                        raise ValidationError(f"{label} table missing {a}|{x}")
                    if table[(a, x)] not in carrier.index:
                        raise ValidationError(f"{label} value {table[(a, x)]!r} not in carrier")
        self.carrier = carrier
        self.chain = chain
        self.bjoin = dict(bjoin)
        self.bmeet = dict(bmeet)
        self.smeet = dict(smeet)
        self.sjoin = dict(sjoin)

    def join_all(self, xs) -> str:
        it = iter(xs)
        acc = next(it)
        for x in it:
            acc = self.bjoin[(acc, x)]
        return acc

    def meet_all(self, xs) -> str:
        it = iter(xs)
        acc = next(it)
        for x in it:
            acc = self.bmeet[(acc, x)]
        return acc

    @property
    def bottom(self) -> str:
        return self.meet_all(self.carrier.elements)

    @property
    def top(self) -> str:
        return self.join_all(self.carrier.elements)

    def __eq__(self, other):
        return (
            isinstance(other, BiconvexStructure)
            and other.carrier == self.carrier
            and other.chain == self.chain
            and other.bjoin == self.bjoin
            and other.bmeet == self.bmeet
            and other.smeet == self.smeet
            and other.sjoin == self.sjoin
        )

    def __hash__(self):
        return hash((
            self.carrier,
            self.chain,
            tuple(sorted(self.bjoin.items())),
            tuple(sorted(self.bmeet.items())),
            tuple(sorted((a.value, x, z) for (a, x), z in self.smeet.items())),
            tuple(sorted((a.value, x, z) for (a, x), z in self.sjoin.items())),
        ))


def _lattice_diagnostics(carrier, bjoin, bmeet) -> list[str]:
    out: list[str] = []
    X = carrier.elements
    for x, y in itertools.product(X, repeat=2):
        if bjoin[(x, y)] != bjoin[(y, x)]:
            out.append(f"lattice: join({x},{y}) != join({y},{x})")
        if bmeet[(x, y)] != bmeet[(y, x)]:
            out.append(f"lattice: meet({x},{y}) != meet({y},{x})")
        if bmeet[(x, bjoin[(x, y)])] != x:
            out.append(f"lattice: absorption meet({x},join({x},{y})) != {x}")
        if bjoin[(x, bmeet[(x, y)])] != x:
            out.append(f"lattice: absorption join({x},meet({x},{y})) != {x}")
    for x in X:
        if bjoin[(x, x)] != x:
            out.append(f"lattice: join({x},{x}) != {x}")
        if bmeet[(x, x)] != x:
            out.append(f"lattice: meet({x},{x}) != {x}")
    for x, y, z in itertools.product(X, repeat=3):
        if bjoin[(bjoin[(x, y)], z)] != bjoin[(x, bjoin[(y, z)])]:
            out.append(f"lattice: join associativity fails at ({x},{y},{z})")
        if bmeet[(bmeet[(x, y)], z)] != bmeet[(x, bmeet[(y, z)])]:
            out.append(f"lattice: meet associativity fails at ({x},{y},{z})")
    return out


def check_biconvex(b: BiconvexStructure) -> list[str]:
    """All finite biconvex laws; topological conditions are vacuous here."""
    out = _lattice_diagnostics(b.carrier, b.bjoin, b.bmeet)
    if out:
        return out  # bounds below presuppose the lattice laws
    X = b.carrier.elements
    levels = b.chain.levels
    one, zero = b.chain.one, b.chain.zero
    bot, top = b.bottom, b.top
    bjoin, bmeet, smeet, sjoin = b.bjoin, b.bmeet, b.smeet, b.sjoin
    # (X, bjoin, smeet) over (chain, max, min); zero element is the bottom
    for x in X:
        if bjoin[(x, bot)] != x:
            out.append(f"join-module axiom-3: {x}+bottom != {x}")
        if smeet[(one, x)] != x:
            out.append(f"join-module axiom-6: 1*{x} != {x}")
        if smeet[(zero, x)] != bot:
            out.append(f"join-module axiom-7: 0*{x} != bottom")
    for a in levels:
        for x, y in itertools.product(X, repeat=2):
            if smeet[(a, bjoin[(x, y)])] != bjoin[(smeet[(a, x)], smeet[(a, y)])]:
                out.append(f"join-module axiom-4: {a}*join({x},{y}) mismatch")
    for a, c in itertools.product(levels, repeat=2):
        for x in X:
            if smeet[(max(a, c), x)] != bjoin[(smeet[(a, x)], smeet[(c, x)])]:
                out.append(f"join-module axiom-4: (max {a},{c})*{x} mismatch")
            if smeet[(min(a, c), x)] != smeet[(a, smeet[(c, x)])]:
                out.append(f"join-module axiom-5: (min {a},{c})*{x} mismatch")
    # (X, bmeet, sjoin) over (chain, min, max); zero element is the top
    for x in X:
        if bmeet[(x, top)] != x:
            out.append(f"meet-module axiom-3: meet({x},top) != {x}")
        if sjoin[(zero, x)] != x:
            out.append(f"meet-module axiom-6: 0+{x} != {x}")
        if sjoin[(one, x)] != top:
            out.append(f"meet-module axiom-7: 1+{x} != top")
    for a in levels:
        for x, y in itertools.product(X, repeat=2):
            if sjoin[(a, bmeet[(x, y)])] != bmeet[(sjoin[(a, x)], sjoin[(a, y)])]:
                out.append(f"meet-module axiom-4: {a}+meet({x},{y}) mismatch")
    for a, c in itertools.product(levels, repeat=2):
        for x in X:
            if sjoin[(min(a, c), x)] != bmeet[(sjoin[(a, x)], sjoin[(c, x)])]:
                out.append(f"meet-module axiom-4: (min {a},{c})+{x} mismatch")
            if sjoin[(max(a, c), x)] != sjoin[(a, sjoin[(c, x)])]:
                out.append(f"meet-module axiom-5: (max {a},{c})+{x} mismatch")
    # mixed associative laws
    for a in levels:
        for x, y in itertools.product(X, repeat=2):
            if bjoin[(sjoin[(a, x)], y)] != sjoin[(a, bjoin[(x, y)])]:
                out.append(f"mixed-assoc: join({a}+{x},{y}) mismatch")
            if bmeet[(smeet[(a, x)], y)] != smeet[(a, bmeet[(x, y)])]:
                out.append(f"mixed-assoc: meet({a}*{x},{y}) mismatch")
    # mixed distributive laws
    for a, c in itertools.product(levels, repeat=2):
        for x in X:
            if smeet[(a, sjoin[(c, x)])] != sjoin[(min(a, c), smeet[(a, x)])]:
                out.append(f"mixed-dist: {a}*({c}+{x}) mismatch")
            if sjoin[(a, smeet[(c, x)])] != smeet[(max(a, c), sjoin[(a, x)])]:
                out.append(f"mixed-dist: {a}+({c}*{x}) mismatch")
    return out


class TripleStructure:
    """Lattice tables plus level maps p (scaled bottoms) and m (scaled tops)."""

    __slots__ = ("carrier", "chain", "bjoin", "bmeet", "p", "m")

    def __init__(self, carrier, chain, bjoin, bmeet, p: Mapping[Level, str], m: Mapping[Level, str]):
        for table, label in ((bjoin, "bjoin"), (bmeet, "bmeet")):
            for x, y in itertools.product(carrier.elements, repeat=2):
                if (x, y) not in table:
                    raise ValidationError(f"{label} table missing {x}|{y}")
        for fn, label in ((p, "p"), (m, "m")):
            for a in chain.levels:
                if a not in fn:
                    raise ValidationError(f"{label} missing level {a}")
                if fn[a] not in carrier.index:
                    raise ValidationError(f"{label}({a}) = {fn[a]!r} not in carrier")
        self.carrier = carrier
        self.chain = chain
        self.bjoin = dict(bjoin)
        self.bmeet = dict(bmeet)
        self.p = dict(p)
        self.m = dict(m)


def check_triple(t: TripleStructure) -> list[str]:
    """Lattice laws plus the four conditions tying p and m to the lattice."""
    out = _lattice_diagnostics(t.carrier, t.bjoin, t.bmeet)
    if out:
        return out
    top = t.bjoin[(t.carrier.elements[0], t.carrier.elements[0])]
    for x in t.carrier.elements:
        top = t.bjoin[(top, x)]
    bot = t.carrier.elements[0]
    for x in t.carrier.elements:
        bot = t.bmeet[(bot, x)]
    if t.p[t.chain.one] != top:
        out.append(f"p-top: p(1) = {t.p[t.chain.one]} != top")
    if t.m[t.chain.zero] != bot:
        out.append(f"m-bottom: m(0) = {t.m[t.chain.zero]} != bottom")
    for a, c in itertools.product(t.chain.levels, repeat=2):
        if t.p[max(a, c)] != t.bjoin[(t.p[a], t.p[c])]:
            out.append(f"p-join: p(max({a},{c})) != p({a}) join p({c})")
        if t.m[min(a, c)] != t.bmeet[(t.m[a], t.m[c])]:
            out.append(f"m-meet: m(min({a},{c})) != m({a}) meet m({c})")
        if t.bmeet[(t.m[a], t.p[c])] != t.p[min(a, c)]:
            out.append(f"pm-meet: m({a}) meet p({c}) != p(min({a},{c}))")
        if t.bjoin[(t.m[a], t.p[c])] != t.m[max(a, c)]:
            out.append(f"pm-join: m({a}) join p({c}) != m(max({a},{c}))")
    return out


def triple_from_biconvex(b: BiconvexStructure) -> TripleStructure:
    """p(a) = a raised over the bottom, m(a) = a cut into the top."""
    bot, top = b.bottom, b.top
    p = {a: b.sjoin[(a, bot)] for a in b.chain.levels}
    m = {a: b.smeet[(a, top)] for a in b.chain.levels}
    return TripleStructure(b.carrier, b.chain, b.bjoin, b.bmeet, p, m)


def biconvex_from_triple(t: TripleStructure) -> BiconvexStructure:
    """Actions recovered against the level maps: a*x = m(a) meet x, a+x = p(a) join x."""
    smeet = {
        (a, x): t.bmeet[(t.m[a], x)]
        for a in t.chain.levels
        for x in t.carrier.elements
    }
    sjoin = {
        (a, x): t.bjoin[(t.p[a], x)]
        for a in t.chain.levels
        for x in t.carrier.elements
    }
    return BiconvexStructure(t.carrier, t.chain, t.bjoin, t.bmeet, smeet, sjoin)


def structure_map_possibility(b: BiconvexStructure, c: PossibilityCapacity) -> str:
    """Join over points of density(x) * x; checked against the meet-side form.

    The second form runs over nonempty subsets A: the meet of
    c(X minus A) + sup(A).  Disagreement means the carrier lattice lacks
    the distributivity this construction relies on and is raised as a
    law violation with the witness capacity.
    """
    if c.carrier != b.carrier or c.chain != b.chain:
        raise CarrierMismatchError("capacity and structure do not match")
    primary = b.join_all(
        b.smeet[(c.density[x], x)] for x in b.carrier.elements
    )
    universe = b.carrier.universe
    dual = b.meet_all(
        b.sjoin[(c.value(universe - a), b.join_all(sorted(a, key=b.carrier.index.__getitem__)))]
        for a in b.carrier.subsets()
    )
    if dual != primary:
        raise LawViolationError(
            f"possibility map forms disagree: {primary} vs {dual}",
            witness=canonical_key(c),
        )
    return primary


def structure_map_necessity(b: BiconvexStructure, c: NecessityCapacity) -> str:
    """Meet over points of codensity(x) + x; checked against the join-side form.

    The second form is the join over nonempty subsets F of
    c(F) * inf(F): each term is a lower bound for every codensity term
    (split on whether the point lies in F), and on the distributive
    carriers in scope the bound is attained.
    """
    if c.carrier != b.carrier or c.chain != b.chain:
        raise CarrierMismatchError("capacity and structure do not match")
    primary = b.meet_all(
        b.sjoin[(c.codensity[x], x)] for x in b.carrier.elements
    )
    dual = b.join_all(
        b.smeet[(c.value(a), b.meet_all(sorted(a, key=b.carrier.index.__getitem__)))]
        for a in b.carrier.subsets()
    )
    if dual != primary:
        raise LawViolationError(
            f"necessity map forms disagree: {primary} vs {dual}",
            witness=canonical_key(c),
        )
    return primary


@lru_cache(maxsize=None)
def _necessity_pool(space: FiniteSpace, chain: Chain):
    """Named necessity capacities with their value vectors over nonempty subsets."""
    names, assignment = necessity_space(space, chain)
    subsets = list(space.subsets())
    vectors = {
        n: tuple(assignment[n].value(s).value for s in subsets)
        for n in names.elements
    }
    return names, assignment, subsets, vectors


@lru_cache(maxsize=None)
def _possibility_pool(space: FiniteSpace, chain: Chain):
    names, assignment = possibility_space(space, chain)
    subsets = list(space.subsets())
    vectors = {
        n: tuple(assignment[n].value(s).value for s in subsets)
        for n in names.elements
    }
    return names, assignment, subsets, vectors


def union_over_intersection_preimages(
    c: CapacityLike,
    limit: int = 1,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> list[PossibilityCapacity]:
    """Possibility capacities over the named necessity capacities whose
    multiplication equals c, smallest support first.

    A possibility mixture with density D over necessity capacities n
    multiplies to F -> max over n of min(D(n), n(F)); the search scans
    supports by (size, position) and density values lexicographically,
    so the returned list is deterministic.  Stops after ``limit`` hits
    or ``budget`` candidates.
    """
    space, chain = c.carrier, c.chain
    names, assignment, subsets, vectors = _necessity_pool(space, chain)
    target = tuple(c.value(s).value for s in subsets)
    pool = list(names.elements)
    vecs = [vectors[n] for n in pool]
    nonzero = [lv.value for lv in chain.levels[1:]]
    one = chain.one.value
    hits: list[PossibilityCapacity] = []
    checked = 0
    nf = len(subsets)
    for size in range(1, len(pool) + 1):
        for support in itertools.combinations(range(len(pool)), size):
            sup_vecs = [vecs[i] for i in support]
            for values in itertools.product(nonzero, repeat=size):
                if max(values) != one:
                    continue
                checked += 1
                if checked > budget:
                    return hits
                ok = True
                for fi in range(nf):
                    best = max(min(v, sv[fi]) for v, sv in zip(values, sup_vecs))
                    if best != target[fi]:
                        ok = False
                        break
                if ok:
                    dens = {pool[i]: v for i, v in zip(support, values)}
                    hits.append(PossibilityCapacity(names, chain, dens))
                    if len(hits) >= limit:
                        return hits
    return hits


def intersection_over_union_preimages(
    c: CapacityLike,
    limit: int = 1,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> list[NecessityCapacity]:
    """Necessity capacities over the named possibility capacities whose
    multiplication equals c; the mirror of the union-side search.

    A necessity mixture with codensity E multiplies to
    F -> min over p of max(E(p), p(F)); elements with codensity 1 are
    neutral, so the support is the set of names held below 1.
    """
    space, chain = c.carrier, c.chain
    names, assignment, subsets, vectors = _possibility_pool(space, chain)
    target = tuple(c.value(s).value for s in subsets)
    pool = list(names.elements)
    vecs = [vectors[n] for n in pool]
    below_one = [lv.value for lv in chain.levels[:-1]]
    zero = chain.zero.value
    hits: list[NecessityCapacity] = []
    checked = 0
    nf = len(subsets)
    for size in range(1, len(pool) + 1):
        for support in itertools.combinations(range(len(pool)), size):
            sup_vecs = [vecs[i] for i in support]
            for values in itertools.product(below_one, repeat=size):
                if min(values) != zero:
                    continue
                checked += 1
                if checked > budget:
                    return hits
                ok = True
                for fi in range(nf):
                    best = min(max(v, sv[fi]) for v, sv in zip(values, sup_vecs))
                    if best != target[fi]:
                        ok = False
                        break
                if ok:
                    cod = {pool[i]: v for i, v in zip(support, values)}
                    hits.append(NecessityCapacity(names, chain, cod))
                    if len(hits) >= limit:
                        return hits
    return hits


_UNION_PREIMAGE_CACHE: dict[tuple, PossibilityCapacity] = {}
_INTERSECTION_PREIMAGE_CACHE: dict[tuple, NecessityCapacity] = {}


def structure_map_full(b: BiconvexStructure, c: CapacityLike) -> str:
    """Value through the union-over-intersection factorization.

    Finds a possibility mixture of necessity capacities multiplying to
    c, maps each support capacity through the necessity-side map, and
    applies the possibility-side map to the resulting density on the
    carrier.  The mixture depends only on the capacity, so it is cached
    across structures.
    """
    if c.carrier != b.carrier or c.chain != b.chain:
        raise CarrierMismatchError("capacity and structure do not match")
    cache_key = (b.carrier, b.chain, canonical_key(c))
    mixture = _UNION_PREIMAGE_CACHE.get(cache_key)
    if mixture is None:
        found = union_over_intersection_preimages(c, limit=1)
        if not found:
            raise LawViolationError(
                "no possibility-over-necessity factorization found within budget",
                witness=canonical_key(c),
            )
        mixture = found[0]
        _UNION_PREIMAGE_CACHE[cache_key] = mixture
    _, assignment, _, _ = _necessity_pool(b.carrier, b.chain)
    dens = {x: b.chain.zero for x in b.carrier.elements}
    for n, w in mixture.density.items():
        if w == b.chain.zero:
            continue
        target = structure_map_necessity(b, assignment[n])
        if w > dens[target]:
            dens[target] = w
    return structure_map_possibility(
        b, PossibilityCapacity(b.carrier, b.chain, dens)
    )


def structure_map_full_dual(b: BiconvexStructure, c: CapacityLike) -> str:
    """Value through the intersection-over-union factorization."""
    if c.carrier != b.carrier or c.chain != b.chain:
        raise CarrierMismatchError("capacity and structure do not match")
    cache_key = (b.carrier, b.chain, canonical_key(c))
    mixture = _INTERSECTION_PREIMAGE_CACHE.get(cache_key)
    if mixture is None:
        found = intersection_over_union_preimages(c, limit=1)
        if not found:
            raise LawViolationError(
                "no necessity-over-possibility factorization found within budget",
                witness=canonical_key(c),
            )
        mixture = found[0]
        _INTERSECTION_PREIMAGE_CACHE[cache_key] = mixture
    _, assignment, _, _ = _possibility_pool(b.carrier, b.chain)
    cod = {x: b.chain.one for x in b.carrier.elements}
    for p, w in mixture.codensity.items():
        if w == b.chain.one:
            continue
        target = structure_map_possibility(b, assignment[p])
        if w < cod[target]:
            cod[target] = w
    return structure_map_necessity(
        b, NecessityCapacity(b.carrier, b.chain, cod)
    )


def sugeno_form(b: BiconvexStructure, c: CapacityLike) -> str:
    """Join over nonempty subsets F of c(F) * meet(F); cross-check only."""
    if c.carrier != b.carrier or c.chain != b.chain:
        raise CarrierMismatchError("capacity and structure do not match")
    return b.join_all(
        b.smeet[(c.value(f), b.meet_all(sorted(f, key=b.carrier.index.__getitem__)))]
        for f in b.carrier.subsets()
    )


class CapacityStructureMap:
    """Assigns an element to every capacity: a table or a backing structure."""

    __slots__ = ("carrier", "chain", "_table", "_structure", "_cache")

    def __init__(self, carrier, chain, table=None, structure=None):
        self.carrier = carrier
        self.chain = chain
        self._table = dict(table) if table is not None else None
        self._structure = structure
        self._cache: dict[tuple, str] = {}

    @classmethod
    def from_biconvex(cls, b: BiconvexStructure) -> "CapacityStructureMap":
        return cls(b.carrier, b.chain, structure=b)

    @classmethod
    def from_table(cls, carrier, chain, table: Mapping[tuple, str]) -> "CapacityStructureMap":
        return cls(carrier, chain, table=table)

    @property
    def structure(self) -> BiconvexStructure | None:
        return self._structure

    def __call__(self, c: CapacityLike) -> str:
        key = canonical_key(c)
        got = self._cache.get(key)
        if got is not None:
            return got
        if self._table is not None:
            if key not in self._table:
                raise ValidationError("table has no entry for this capacity")
            value = self._table[key]
        else:
            value = structure_map_full(self._structure, c)
        self._cache[key] = value
        return value


def lattice_from_algebra(xi: CapacityStructureMap):
    """Recover (bjoin, bmeet): evaluate xi on two-point densities and
    two-point unanimity capacities; lattice laws are re-verified."""
    carrier, chain = xi.carrier, xi.chain
    bjoin: dict[tuple[str, str], str] = {}
    bmeet: dict[tuple[str, str], str] = {}
    for x, y in itertools.product(carrier.elements, repeat=2):
        bjoin[(x, y)] = xi(PossibilityCapacity(carrier, chain, {x: chain.one, y: chain.one}))
        cod = {z: (chain.zero if z in (x, y) else chain.one) for z in carrier.elements}
        bmeet[(x, y)] = xi(NecessityCapacity(carrier, chain, cod))
    problems = _lattice_diagnostics(carrier, bjoin, bmeet)
    if problems:
        raise LawViolationError(
            "recovered operations fail the lattice laws", witness=problems[0]
        )
    return bjoin, bmeet


def quadruple_from_algebra(xi: CapacityStructureMap) -> BiconvexStructure:
    """Full biconvex structure recovered from a structure map."""
    carrier, chain = xi.carrier, xi.chain
    bjoin, bmeet = lattice_from_algebra(xi)
    bot = carrier.elements[0]
    for x in carrier.elements:
        bot = bmeet[(bot, x)]
    top = carrier.elements[0]
    for x in carrier.elements:
        top = bjoin[(top, x)]
    smeet: dict[tuple[Level, str], str] = {}
    sjoin: dict[tuple[Level, str], str] = {}
    for a in chain.levels:
        for x in carrier.elements:
            dens = {bot: chain.one}
            if x != bot:
                dens[x] = a
            smeet[(a, x)] = xi(PossibilityCapacity(carrier, chain, dens))
            cod = {z: chain.one for z in carrier.elements}
            cod[top] = chain.zero
            if x != top:
                cod[x] = a
            sjoin[(a, x)] = xi(NecessityCapacity(carrier, chain, cod))
    return BiconvexStructure(carrier, chain, bjoin, bmeet, smeet, sjoin)


def is_biaffine(f: PointMap, b: BiconvexStructure, b2: BiconvexStructure) -> bool:
    """Does f preserve joins with scaled arguments and meets with raised ones?"""
    if f.source != b.carrier or f.target != b2.carrier:
        raise CarrierMismatchError("map endpoints do not match the structures")
    if b.chain != b2.chain:
        raise ValidationError("structures use different chains")
    for x, y in itertools.product(b.carrier.elements, repeat=2):
        for a in b.chain.levels:
            lhs = f(b.bjoin[(x, b.smeet[(a, y)])])
            rhs = b2.bjoin[(f(x), b2.smeet[(a, f(y))])]
            if lhs != rhs:
                return False
            lhs = f(b.bmeet[(x, b.sjoin[(a, y)])])
            rhs = b2.bmeet[(f(x), b2.sjoin[(a, f(y))])]
            if lhs != rhs:
                return False
    return True


def is_full_algebra_morphism(
    f: PointMap, xi: CapacityStructureMap, xi2: CapacityStructureMap
) -> bool:
    """Does f intertwine the two structure maps on every enumerated capacity?"""
    for c in enumerate_capacities(f.source, xi.chain, "all"):
        if f(xi(c)) != xi2(pushforward(f, c)):
            return False
    return True


def morphism_equivalence_full(
    f: PointMap, xi: CapacityStructureMap, xi2: CapacityStructureMap
) -> bool:
    """True when the morphism property and biaffineness agree for f."""
    morph = is_full_algebra_morphism(f, xi, xi2)
    biaff = is_biaffine(f, quadruple_from_algebra(xi), quadruple_from_algebra(xi2))
    return morph == biaff


@dataclass
class CubeStructure:
    """Coordinatewise biconvex structure on chain^arity with level maps phi."""

    structure: BiconvexStructure
    phis: list[dict[Level, Level]]
    coords: dict[str, tuple]  # element name -> level tuple


def _validate_phi(chain: Chain, phi: Mapping[Level, Level]) -> dict[Level, Level]:
    fixed = {}
    for a in chain.levels:
        if a not in phi:
            raise ValidationError(f"phi missing level {a}")
        fixed[a] = chain.level(phi[a])
    if fixed[chain.zero] != chain.zero or fixed[chain.one] != chain.one:
        raise ValidationError("phi must fix the endpoints 0 and 1")
    for a, c in zip(chain.levels, chain.levels[1:]):
        if fixed[a] > fixed[c]:
            raise ValidationError("phi must be non-decreasing")
    return fixed


def cube_structure(chain: Chain, phis: list[Mapping[Level, Level]]) -> CubeStructure:
    """Product of copies of the chain with per-coordinate weight maps.

    Joins and meets are coordinatewise; the actions apply phi_a to the
    weight in coordinate a before the coordinatewise min/max.
    """
    if not phis:
        raise ValidationError("a cube needs at least one coordinate")
    fixed = [_validate_phi(chain, phi) for phi in phis]
    arity = len(fixed)
    tuples = list(itertools.product(chain.levels, repeat=arity))
    names = {t: ",".join(str(v.value) for v in t) for t in tuples}
    carrier = FiniteSpace([names[t] for t in tuples])
    bjoin = {}
    bmeet = {}
    for t1, t2 in itertools.product(tuples, repeat=2):
        bjoin[(names[t1], names[t2])] = names[tuple(map(max, t1, t2))]
        bmeet[(names[t1], names[t2])] = names[tuple(map(min, t1, t2))]
    smeet = {}
    sjoin = {}
    for a in chain.levels:
        for t in tuples:
            smeet[(a, names[t])] = names[tuple(min(f[a], v) for f, v in zip(fixed, t))]
            sjoin[(a, names[t])] = names[tuple(max(f[a], v) for f, v in zip(fixed, t))]
    structure = BiconvexStructure(carrier, chain, bjoin, bmeet, smeet, sjoin)
    return CubeStructure(structure, fixed, {names[t]: t for t in tuples})


def chain_model(chain: Chain) -> BiconvexStructure:
    """The chain itself: joins are max, meets are min, both actions direct."""
    identity = {a: a for a in chain.levels}
    return cube_structure(chain, [identity]).structure


def diamond_structure(chain: Chain) -> BiconvexStructure:
    """2 x 2 diamond with coordinatewise actions; interior weights act as 0."""
    bits = ["00", "01", "10", "11"]
    carrier = FiniteSpace(bits)
    def pack(i, j):
        return f"{i}{j}"
    bjoin = {}
    bmeet = {}
    for x, y in itertools.product(bits, repeat=2):
        bjoin[(x, y)] = pack(max(int(x[0]), int(y[0])), max(int(x[1]), int(y[1])))
        bmeet[(x, y)] = pack(min(int(x[0]), int(y[0])), min(int(x[1]), int(y[1])))
    smeet = {}
    sjoin = {}
    for a in chain.levels:
        bit = 1 if a == chain.one else 0
        for x in bits:
            smeet[(a, x)] = pack(min(bit, int(x[0])), min(bit, int(x[1])))
            sjoin[(a, x)] = pack(max(bit, int(x[0])), max(bit, int(x[1])))
    return BiconvexStructure(carrier, chain, bjoin, bmeet, smeet, sjoin)


@dataclass
class EmbeddingSearchResult:
    """Outcome of the bounded coordinate-embedding search."""

    found: bool
    arity: int | None
    assignment: dict[str, tuple] | None   # element -> tuple of levels
    phis: list[dict[Level, Level]] | None
    max_arity: int
    candidates: int                        # coordinate pairs that satisfied the laws


def _coordinate_candidates(b: BiconvexStructure) -> list[tuple[dict, dict]]:
    """All (phi, g) pairs making g a single cube coordinate; lex ordered."""
    chain = b.chain
    X = b.carrier.elements
    interior = chain.levels[1:-1]
    out = []
    for phi_vals in itertools.product(chain.levels, repeat=len(interior)):
        phi = {chain.zero: chain.zero, chain.one: chain.one}
        for a, v in zip(interior, phi_vals):
            phi[a] = v
        ordered = [phi[a] for a in chain.levels]
        if any(u > v for u, v in zip(ordered, ordered[1:])):
            continue
        for g_vals in itertools.product(chain.levels, repeat=len(X)):
            g = dict(zip(X, g_vals))
            ok = True
            for x, y in itertools.product(X, repeat=2):
                if g[b.bjoin[(x, y)]] != max(g[x], g[y]):
                    ok = False
                    break
                if g[b.bmeet[(x, y)]] != min(g[x], g[y]):
                    ok = False
                    break
            if ok:
                for a in chain.levels:
                    for x in X:
                        if g[b.smeet[(a, x)]] != min(phi[a], g[x]):
                            ok = False
                            break
                        if g[b.sjoin[(a, x)]] != max(phi[a], g[x]):
                            ok = False
                            break
                    if not ok:
                        break
            if ok:
                out.append((phi, g))
    return out


def embedding_search(b: BiconvexStructure, max_arity: int = 2) -> EmbeddingSearchResult:
    """Bounded search for an operation-preserving injection into a cube.

    Coordinates are (phi, g) pairs where g turns joins, meets, and both
    actions into their coordinatewise forms; the search scans candidate
    tuples of up to max_arity coordinates in lexicographic order and
    returns the first whose combined map is injective.  A negative
    result only certifies exhaustion up to max_arity.
    """
    candidates = _coordinate_candidates(b)
    X = b.carrier.elements
    for arity in range(1, max_arity + 1):
        for combo in itertools.combinations(range(len(candidates)), arity):
            images = {
                x: tuple(candidates[i][1][x] for i in combo) for x in X
            }
            if len(set(images.values())) == len(X):
                return EmbeddingSearchResult(
                    found=True,
                    arity=arity,
                    assignment=images,
                    phis=[candidates[i][0] for i in combo],
                    max_arity=max_arity,
                    candidates=len(candidates),
                )
    return EmbeddingSearchResult(
        found=False,
        arity=None,
        assignment=None,
        phis=None,
        max_arity=max_arity,
        candidates=len(candidates),
    )


def enumerate_biconvex_structures(
    space: FiniteSpace, chain: Chain
) -> Iterator[BiconvexStructure]:
    """All valid biconvex structures on the carrier-order chain lattice.

    Carriers up to 3 elements are always chain lattices up to
    relabeling, so the lattice is pinned to the element order and only
    the interior action rows vary; every candidate pair is filtered
    through the full law check.
    """
    if len(space) > 3 or chain.k > 2:
        raise ValidationError("biconvex enumeration is limited to |X| <= 3, k <= 2")
    X = space.elements
    idx = space.index
    bjoin = {
        (x, y): (x if idx[x] >= idx[y] else y)
        for x, y in itertools.product(X, repeat=2)
    }
    bmeet = {
        (x, y): (x if idx[x] <= idx[y] else y)
        for x, y in itertools.product(X, repeat=2)
    }
    bot, top = X[0], X[-1]
    interior = chain.levels[1:-1]
    cells = [(a, x) for a in interior for x in X]
    for smeet_vals in itertools.product(X, repeat=len(cells)):
        smeet = {(chain.one, x): x for x in X}
        smeet.update({(chain.zero, x): bot for x in X})
        smeet.update(dict(zip(cells, smeet_vals)))
        for sjoin_vals in itertools.product(X, repeat=len(cells)):
            sjoin = {(chain.zero, x): x for x in X}
            sjoin.update({(chain.one, x): top for x in X})
            sjoin.update(dict(zip(cells, sjoin_vals)))
            b = BiconvexStructure(space, chain, bjoin, bmeet, smeet, sjoin)
            if not check_biconvex(b):
                yield b
