"""Idempotent convex combinations and algebras for the possibility submonad.

A convex structure gives a binary combination ic(x, a, y) ("keep x, add
y with weight a").  Its five finite axioms make the slice at weight 1 a
join semilattice, and the whole table equivalent to an algebra
structure for the possibility-capacity monad: the structure map sends a
density c to the join of the combinations ic(x0, a, x) over all points
x and weights a <= c(x), where x0 is any point of density 1.  The dual
structure ci(x, a, y) plays the same role for necessity capacities with
joins and meets, 0 and 1 exchanged.

The quotient construction turns a convex structure into a semimodule
over the chain: pairs (x, a) are identified when they act identically
on every base point, addition is the pointwise derived join, and
scaling re-weights each coordinate.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Iterator, Mapping

from .chain import Chain, Level
from .errors import CarrierMismatchError, ValidationError
from .capacity import (
    NecessityCapacity,
    PossibilityCapacity,
    as_possibility,
    mult,
    possibility_space,
)
from .spaces import FiniteSpace, PointMap


def _format_level(a: Level) -> str:
    return str(a.value)


class ConvexStructure:
    """Carrier + chain + total combination table ic(x, a, y)."""

    __slots__ = ("carrier", "chain", "ic")

    def __init__(
        self,
        carrier: FiniteSpace,
        chain: Chain,
        ic: Mapping[tuple[str, Level, str], str],
    ):
        table: dict[tuple[str, Level, str], str] = {}
        for x in carrier.elements:
            for a in chain.levels:
                for y in carrier.elements:
                    key = (x, a, y)
                    if key not in ic:
                        raise ValidationError(f"combination table missing {x}|{a}|{y}")
                    z = ic[key]
                    if z not in carrier.index:
                        raise ValidationError(f"table value {z!r} is not in the carrier")
                    table[key] = z
        self.carrier = carrier
        self.chain = chain
        self.ic = table

    def __call__(self, x: str, a: Level, y: str) -> str:
        return self.ic[(x, self.chain.level(a), y)]

    def join(self, x: str, y: str) -> str:
        """Derived semilattice join: the combination at weight 1."""
        return self.ic[(x, self.chain.one, y)]

    def join_all(self, xs) -> str:
        it = iter(xs)
        acc = next(it)
        for x in it:
            acc = self.join(acc, x)
        return acc

    def __eq__(self, other):
        return (
            isinstance(other, ConvexStructure)
            and other.carrier == self.carrier
            and other.chain == self.chain
            and other.ic == self.ic
        )

    def __hash__(self):
        items = tuple(sorted(
            ((x, a.value, y), z) for (x, a, y), z in self.ic.items()
        ))
        return hash((self.carrier, self.chain, items))


class DualConvexStructure:
    """Carrier + chain + total dual combination table ci(x, a, y)."""

    __slots__ = ("carrier", "chain", "ci")

    def __init__(
        self,
        carrier: FiniteSpace,
        chain: Chain,
        ci: Mapping[tuple[str, Level, str], str],
    ):
        table: dict[tuple[str, Level, str], str] = {}
        for x in carrier.elements:
            for a in chain.levels:
                for y in carrier.elements:
                    key = (x, a, y)
                    if key not in ci:
                        raise ValidationError(f"combination table missing {x}|{a}|{y}")
                    z = ci[key]
                    if z not in carrier.index:
                        raise ValidationError(f"table value {z!r} is not in the carrier")
                    table[key] = z
        self.carrier = carrier
        self.chain = chain
        self.ci = table

    def __call__(self, x: str, a: Level, y: str) -> str:
        return self.ci[(x, self.chain.level(a), y)]

    def meet(self, x: str, y: str) -> str:
        """Derived semilattice meet: the dual combination at weight 0."""
        return self.ci[(x, self.chain.zero, y)]

    def meet_all(self, xs) -> str:
        it = iter(xs)
        acc = next(it)
        for x in it:
            acc = self.meet(acc, x)
        return acc

    def __eq__(self, other):
        return (
            isinstance(other, DualConvexStructure)
            and other.carrier == self.carrier
            and other.chain == self.chain
            and other.ci == self.ci
        )

    def __hash__(self):
        items = tuple(sorted(
            ((x, a.value, y), z) for (x, a, y), z in self.ci.items()
        ))
        return hash((self.carrier, self.chain, items))


def check_ic_axioms(s: ConvexStructure) -> list[str]:
    """Diagnostics for the five combination axioms; empty means valid."""
    out: list[str] = []
    X = s.carrier.elements
    levels = s.chain.levels
    one, zero = s.chain.one, s.chain.zero
    ic = s.ic
    for x in X:
        for a in levels:
            if ic[(x, a, x)] != x:
                out.append(f"axiom-1: ic({x},{_format_level(a)},{x}) = {ic[(x, a, x)]} != {x}")
    for x, y in itertools.product(X, repeat=2):
        if ic[(x, one, y)] != ic[(y, one, x)]:
            out.append(f"axiom-4: ic({x},1,{y}) != ic({y},1,{x})")
        if ic[(x, zero, y)] != x:
            out.append(f"axiom-5: ic({x},0,{y}) = {ic[(x, zero, y)]} != {x}")
    for x, y, z in itertools.product(X, repeat=3):
        for a, b in itertools.product(levels, repeat=2):
            lhs = ic[(ic[(x, a, y)], b, z)]
            rhs = ic[(ic[(x, b, z)], a, y)]
            if lhs != rhs:
                out.append(
                    f"axiom-2: (({x},{_format_level(a)},{y}),{_format_level(b)},{z}) "
                    f"gives {lhs} vs {rhs}"
                )
            lhs3 = ic[(x, a, ic[(y, b, z)])]
            rhs3 = ic[(ic[(x, a, y)], min(a, b), z)]
            if lhs3 != rhs3:
                out.append(
                    f"axiom-3: ({x},{_format_level(a)},({y},{_format_level(b)},{z})) "
                    f"gives {lhs3} vs {rhs3}"
                )
    return out


def check_ci_axioms(s: DualConvexStructure) -> list[str]:
    """Dual axioms: joins and meets, 0 and 1 exchanged throughout."""
    out: list[str] = []
    X = s.carrier.elements
    levels = s.chain.levels
    one, zero = s.chain.one, s.chain.zero
    ci = s.ci
    for x in X:
        for a in levels:
            if ci[(x, a, x)] != x:
                out.append(f"axiom-1: ci({x},{_format_level(a)},{x}) = {ci[(x, a, x)]} != {x}")
    for x, y in itertools.product(X, repeat=2):
        if ci[(x, zero, y)] != ci[(y, zero, x)]:
            out.append(f"axiom-4: ci({x},0,{y}) != ci({y},0,{x})")
        if ci[(x, one, y)] != x:
            out.append(f"axiom-5: ci({x},1,{y}) = {ci[(x, one, y)]} != {x}")
    for x, y, z in itertools.product(X, repeat=3):
        for a, b in itertools.product(levels, repeat=2):
            lhs = ci[(ci[(x, a, y)], b, z)]
            rhs = ci[(ci[(x, b, z)], a, y)]
            if lhs != rhs:
                out.append(
                    f"axiom-2: (({x},{_format_level(a)},{y}),{_format_level(b)},{z}) "
                    f"gives {lhs} vs {rhs}"
                )
            lhs3 = ci[(x, a, ci[(y, b, z)])]
            rhs3 = ci[(ci[(x, a, y)], max(a, b), z)]
            if lhs3 != rhs3:
                out.append(
                    f"axiom-3: ({x},{_format_level(a)},({y},{_format_level(b)},{z})) "
                    f"gives {lhs3} vs {rhs3}"
                )
    return out


def nary_combination(s: ConvexStructure, coeffs, points) -> str:
    """Fold of binary combinations for a weight tuple with maximum 1.

    The base point is the first one carrying weight 1; the remaining
    points fold in order.  The combination axioms make the result
    independent of both choices, which the law suites verify.
    """
    coeffs = [s.chain.level(a) for a in coeffs]
    points = list(points)
    if len(coeffs) != len(points):
        raise ValidationError("weights and points differ in length")
    if not points:
        raise ValidationError("n-ary combination needs at least one point")
    for p in points:
        if p not in s.carrier.index:
            raise ValidationError(f"{p!r} is not in the carrier")
    if max(coeffs) != s.chain.one:
        raise ValidationError("weight tuple must attain 1")
    base = next(i for i, a in enumerate(coeffs) if a == s.chain.one)
    acc = points[base]
    for i, (a, p) in enumerate(zip(coeffs, points)):
        if i == base:
            continue
        acc = s.ic[(acc, a, p)]
    return acc


def density_key(p: PossibilityCapacity) -> tuple:
    return tuple(p.density[x].value for x in p.carrier.elements)


class UnionStructureMap:
    """Structure map for possibility capacities: a table or a backing structure."""

    __slots__ = ("carrier", "chain", "_table", "_structure")

    def __init__(self, carrier, chain, table=None, structure=None):
        self.carrier = carrier
        self.chain = chain
        self._table = dict(table) if table is not None else None
        self._structure = structure

    @classmethod
    def from_convex(cls, s: ConvexStructure) -> "UnionStructureMap":
        return cls(s.carrier, s.chain, structure=s)

    @classmethod
    def from_table(cls, carrier, chain, table: Mapping[tuple, str]) -> "UnionStructureMap":
        for key, z in table.items():
            if z not in carrier.index:
                raise ValidationError(f"table value {z!r} is not in the carrier")
        return cls(carrier, chain, table=table)

    def __call__(self, c: PossibilityCapacity) -> str:
        if c.carrier != self.carrier:
            raise CarrierMismatchError("capacity lives on a different carrier")
        if c.chain != self.chain:
            raise ValidationError("capacity uses a different chain")
        if self._table is not None:
            got = self._table.get(density_key(c))
            if got is None:
                raise ValidationError(f"table has no entry for density {density_key(c)}")
            return got
        return structure_map_from_ic(self._structure, c)

    def tabulate(self) -> dict[tuple, str]:
        """Explicit table over every possibility density on the carrier."""
        if self._table is not None:
            return dict(self._table)
        names, assignment = possibility_space(self.carrier, self.chain)
        return {
            density_key(assignment[n]): self(assignment[n]) for n in names.elements
        }


def structure_map_from_ic(
    s: ConvexStructure, c: PossibilityCapacity, base_point: str | None = None
) -> str:
    """Join of ic(x0, a, x) over points x and weights a <= density(x).

    x0 is a point of density 1 (the first such in carrier order unless
    given); the result does not depend on the choice.
    """
    if c.carrier != s.carrier or c.chain != s.chain:
        raise CarrierMismatchError("capacity and structure do not match")
    if base_point is None:
        base_point = next(
            x for x in s.carrier.elements if c.density[x] == s.chain.one
        )
    elif c.density.get(base_point) != s.chain.one:
        raise ValidationError(f"base point {base_point!r} does not have density 1")
    acc = base_point
    for x in s.carrier.elements:
        dx = c.density[x]
        for a in s.chain.levels:
            if a > dx:
                break
            acc = s.join(acc, s.ic[(base_point, a, x)])
    return acc


def ic_from_structure_map(xi: UnionStructureMap) -> ConvexStructure:
    """Recover the combination table: ic(x, a, y) = xi(density 1 at x, a at y)."""
    carrier, chain = xi.carrier, xi.chain
    table: dict[tuple[str, Level, str], str] = {}
    for x in carrier.elements:
        for a in chain.levels:
            for y in carrier.elements:
                dens = {x: chain.one}
                if y != x:
                    dens[y] = a
                table[(x, a, y)] = xi(PossibilityCapacity(carrier, chain, dens))
    return ConvexStructure(carrier, chain, table)


def pushforward_density(f: PointMap, c: PossibilityCapacity) -> PossibilityCapacity:
    dens: dict[str, Level] = {}
    for y in f.target.elements:
        vals = [c.density[x] for x in f.source.elements if f(x) == y]
        dens[y] = max(vals) if vals else c.chain.zero
    return PossibilityCapacity(f.target, c.chain, dens)


def _map_along(xi: UnionStructureMap, outer, assignment) -> PossibilityCapacity:
    """Pushforward of a possibility capacity on named densities along xi."""
    dens: dict[str, Level] = {x: xi.chain.zero for x in xi.carrier.elements}
    for name in outer.carrier.elements:
        target = xi(assignment[name])
        if outer.density[name] > dens[target]:
            dens[target] = outer.density[name]
    return PossibilityCapacity(xi.carrier, xi.chain, dens)


def check_algebra_laws(
    xi: UnionStructureMap,
    samples: int = 200,
    seed: int = 0,
    exhaustive_limit: int = 1024,
) -> list[str]:
    """Unit and multiplication laws for a possibility-monad algebra.

    The unit law runs over all points.  The multiplication law runs over
    outer densities on the enumerated set of possibility capacities:
    exhaustively when there are at most ``exhaustive_limit`` of them,
    otherwise over ``samples`` seeded random outer densities.
    """
    out: list[str] = []
    carrier, chain = xi.carrier, xi.chain
    for x in carrier.elements:
        got = xi(PossibilityCapacity(carrier, chain, {x: chain.one}))
        if got != x:
            out.append(f"unit-law: xi(dirac {x}) = {got}")
    names, assignment = possibility_space(carrier, chain)
    m = len(names)
    total = (chain.k + 1) ** m - chain.k ** m
    if total <= exhaustive_limit:
        outers = (
            PossibilityCapacity(names, chain, dict(zip(names.elements, combo)))
            for combo in itertools.product(chain.levels, repeat=m)
            if max(combo) == chain.one
        )
    else:
        rng = random.Random(seed)
        def _sampled():
            for _ in range(samples):
                dens = {n: rng.choice(chain.levels) for n in names.elements}
                dens[rng.choice(names.elements)] = chain.one
                yield PossibilityCapacity(names, chain, dens)
        outers = _sampled()
    for outer in outers:
        # multiplication of a possibility over possibilities stays one;
        # as_possibility re-validates that closure on every case
        flattened = as_possibility(mult(outer, assignment))
        lhs = xi(flattened)
        rhs = xi(_map_along(xi, outer, assignment))
        if lhs != rhs:
            dens_str = ",".join(str(outer.density[n]) for n in names.elements)
            out.append(
                f"mult-law: outer density ({dens_str}) gives xi(mult)={lhs} "
                f"but xi(map xi)={rhs}"
            )
    return out


def is_affine(f: PointMap, s: ConvexStructure, s2: ConvexStructure) -> bool:
    """Does f carry every combination of s to the same combination in s2?"""
    if f.source != s.carrier or f.target != s2.carrier:
        raise CarrierMismatchError("map endpoints do not match the structures")
    if s.chain != s2.chain:
        raise ValidationError("structures use different chains")
    for x, y in itertools.product(s.carrier.elements, repeat=2):
        for a in s.chain.levels:
            if f(s.ic[(x, a, y)]) != s2.ic[(f(x), a, f(y))]:
                return False
    return True


def is_algebra_morphism(f: PointMap, xi: UnionStructureMap, xi2: UnionStructureMap) -> bool:
    """Does f intertwine the two structure maps on every density?"""
    for p in possibility_space(xi.carrier, xi.chain)[1].values():
        if f(xi(p)) != xi2(pushforward_density(f, p)):
            return False
    return True


def morphism_equivalence_check(
    f: PointMap, xi: UnionStructureMap, xi2: UnionStructureMap
) -> bool:
    """True when the morphism property and affineness agree for f."""
    morph = is_algebra_morphism(f, xi, xi2)
    affine = is_affine(f, ic_from_structure_map(xi), ic_from_structure_map(xi2))
    return morph == affine


def dual_structure_map(
    s: DualConvexStructure, c: NecessityCapacity, base_point: str | None = None
) -> str:
    """Meet of ci(x0, a, x) over points x and weights a >= codensity(x).

    x0 is a point of codensity 0; independence from the choice mirrors
    the possibility side.
    """
    if c.carrier != s.carrier or c.chain != s.chain:
        raise CarrierMismatchError("capacity and structure do not match")
    if base_point is None:
        base_point = next(
            x for x in s.carrier.elements if c.codensity[x] == s.chain.zero
        )
    elif c.codensity.get(base_point) != s.chain.zero:
        raise ValidationError(f"base point {base_point!r} does not have codensity 0")
    acc = base_point
    for x in s.carrier.elements:
        cx = c.codensity[x]
        for a in s.chain.levels:
            if a < cx:
                continue
            acc = s.meet(acc, s.ci[(base_point, a, x)])
    return acc


class Semimodule:
    """Explicit (join, scale) tables over the chain with a designated zero."""

    __slots__ = ("carrier", "chain", "add", "scale", "zero")

    def __init__(self, carrier, chain, add, scale, zero):
        for x, y in itertools.product(carrier.elements, repeat=2):
            if (x, y) not in add:
                raise ValidationError(f"add table missing {x}|{y}")
            if add[(x, y)] not in carrier.index:
                raise ValidationError(f"add value {add[(x, y)]!r} not in carrier")
        for a in chain.levels:
            for x in carrier.elements:
                if (a, x) not in scale:
                    raise ValidationError(f"scale table missing {a}|{x}")
                if scale[(a, x)] not in carrier.index:
                    raise ValidationError(f"scale value {scale[(a, x)]!r} not in carrier")
        if zero not in carrier.index:
            raise ValidationError(f"zero {zero!r} not in carrier")
        self.carrier = carrier
        self.chain = chain
        self.add = dict(add)
        self.scale = dict(scale)
        self.zero = zero


def check_semimodule_axioms(m: Semimodule) -> list[str]:
    """The seven semimodule axioms over (chain, max, min)."""
    out: list[str] = []
    X = m.carrier.elements
    add, scale = m.add, m.scale
    for x, y in itertools.product(X, repeat=2):
        if add[(x, y)] != add[(y, x)]:
            out.append(f"axiom-1: {x}+{y} != {y}+{x}")
    for x, y, z in itertools.product(X, repeat=3):
        if add[(add[(x, y)], z)] != add[(x, add[(y, z)])]:
            out.append(f"axiom-2: ({x}+{y})+{z} != {x}+({y}+{z})")
    for x in X:
        if add[(x, m.zero)] != x:
            out.append(f"axiom-3: {x}+zero = {add[(x, m.zero)]} != {x}")
    for a in m.chain.levels:
        for x, y in itertools.product(X, repeat=2):
            if scale[(a, add[(x, y)])] != add[(scale[(a, x)], scale[(a, y)])]:
                out.append(f"axiom-4: {_format_level(a)}({x}+{y}) mismatch")
    for a, b in itertools.product(m.chain.levels, repeat=2):
        for x in X:
            if scale[(max(a, b), x)] != add[(scale[(a, x)], scale[(b, x)])]:
                out.append(
                    f"axiom-4: (max({_format_level(a)},{_format_level(b)})){x} mismatch"
                )
            if scale[(min(a, b), x)] != scale[(a, scale[(b, x)])]:
                out.append(
                    f"axiom-5: (min({_format_level(a)},{_format_level(b)})){x} mismatch"
                )
    for x in X:
        if scale[(m.chain.one, x)] != x:
            out.append(f"axiom-6: 1*{x} = {scale[(m.chain.one, x)]} != {x}")
        if scale[(m.chain.zero, x)] != m.zero:
            out.append(f"axiom-7: 0*{x} = {scale[(m.chain.zero, x)]} != zero")
    return out


@dataclass
class QuotientSemimodule:
    """Result of the quotient construction for a convex structure."""

    semimodule: Semimodule
    embedding: PointMap
    classes: dict[str, tuple]          # class name -> action tuple over base points
    fibers: dict[str, list[tuple]]     # class name -> [(x, a), ...] merged pairs


def quotient_semimodule(s: ConvexStructure) -> QuotientSemimodule:
    """Pairs (x, a) modulo equal action tuples (ic(t, a, x) for base points t).

    Addition is the pointwise derived join of action tuples and scaling
    by b rewrites each coordinate t to ic(t, b, value); both are closed
    on the quotient because of the combination axioms.  The zero class
    is the identity tuple (weight 0), and x embeds as its weight-1 pair.
    """
    X = s.carrier.elements
    tuples: dict[tuple, list[tuple]] = {}
    for x in X:
        for a in s.chain.levels:
            t = tuple(s.ic[(base, a, x)] for base in X)
            tuples.setdefault(t, []).append((x, a))
    order = sorted(tuples, key=lambda t: tuple(s.carrier.index[e] for e in t))
    names = {t: f"q{i}" for i, t in enumerate(order)}
    carrier = FiniteSpace([names[t] for t in order])

    add: dict[tuple[str, str], str] = {}
    for t1, t2 in itertools.product(order, repeat=2):
        joined = tuple(s.join(u, v) for u, v in zip(t1, t2))
        if joined not in names:
            raise ValidationError(
                "quotient addition escapes the class set; the input structure "
                "does not satisfy the combination axioms"
            )
        add[(names[t1], names[t2])] = names[joined]

    scale: dict[tuple[Level, str], str] = {}
    for b in s.chain.levels:
        for t in order:
            scaled = tuple(s.ic[(base, b, v)] for base, v in zip(X, t))
            if scaled not in names:
                raise ValidationError(
                    "quotient scaling escapes the class set; the input structure "
                    "does not satisfy the combination axioms"
                )
            scale[(b, names[t])] = names[scaled]

    zero_tuple = tuple(X)
    zero = names[zero_tuple]
    module = Semimodule(carrier, s.chain, add, scale, zero)

    embed_table = {
        x: names[tuple(s.ic[(base, s.chain.one, x)] for base in X)] for x in X
    }
    embedding = PointMap(s.carrier, carrier, embed_table)
    classes = {names[t]: t for t in order}
    fibers = {
        names[t]: [(x, a) for (x, a) in tuples[t]] for t in order
    }
    return QuotientSemimodule(module, embedding, classes, fibers)


def enumerate_join_tables(space: FiniteSpace) -> Iterator[dict[tuple[str, str], str]]:
    """All commutative idempotent associative binary tables on the space."""
    X = space.elements
    pairs = [(X[i], X[j]) for i in range(len(X)) for j in range(i + 1, len(X))]
    for combo in itertools.product(X, repeat=len(pairs)):
        table = {(x, x): x for x in X}
        for (x, y), z in zip(pairs, combo):
            table[(x, y)] = z
            table[(y, x)] = z
        if all(
            table[(table[(x, y)], z)] == table[(x, table[(y, z)])]
            for x, y, z in itertools.product(X, repeat=3)
        ):
            yield table


def enumerate_convex_structures(
    space: FiniteSpace, chain: Chain
) -> Iterator[ConvexStructure]:
    """All valid convex structures on small carriers, in a fixed order.

    The weight-0 and weight-1 slices and the diagonal are forced by
    axioms 1, 4, 5, so only interior off-diagonal cells vary; the
    remaining axioms are checked on each candidate.
    """
    if len(space) > 3 or chain.k > 2:
        raise ValidationError("convex-structure enumeration is limited to |X| <= 3, k <= 2")
    X = space.elements
    interior = chain.levels[1:-1]
    free_cells = [
        (x, a, y)
        for x in X
        for a in interior
        for y in X
        if x != y
    ]
    for join_table in enumerate_join_tables(space):
        base: dict[tuple[str, Level, str], str] = {}
        for x, y in itertools.product(X, repeat=2):
            base[(x, chain.zero, y)] = x
            base[(x, chain.one, y)] = join_table[(x, y)]
        for x in X:
            for a in chain.levels:
                base[(x, a, x)] = x
        for combo in itertools.product(X, repeat=len(free_cells)):
            table = dict(base)
            for cell, z in zip(free_cells, combo):
                table[cell] = z
            s = ConvexStructure(space, chain, table)
            if not check_ic_axioms(s):
                yield s


def enumerate_union_algebras(
    space: FiniteSpace, chain: Chain
) -> Iterator[UnionStructureMap]:
    """All lawful structure-map tables on carriers of up to 2 elements."""
    if len(space) > 2:
        raise ValidationError("algebra-table enumeration is limited to |X| <= 2")
    keys = [density_key(p) for p in possibility_space(space, chain)[1].values()]
    for combo in itertools.product(space.elements, repeat=len(keys)):
        xi = UnionStructureMap.from_table(space, chain, dict(zip(keys, combo)))
        if not check_algebra_laws(xi):
            yield xi
