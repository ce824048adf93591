"""Finite spaces, subsets, subset families, and the inclusion-hyperspace monad.

Every space is a finite list of distinct element names; its topology is
discrete, so every subset is closed and all semicontinuity conditions in
the source constructions hold vacuously.  An inclusion hyperspace is a
nonempty family of nonempty subsets that is closed upward under
inclusion.  Hyperspaces are stored as the antichain of their minimal
members; the full membership list is materialized only on demand, which
keeps the monad multiplication cheap on large carriers.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Mapping

from .errors import CarrierMismatchError, ValidationError

Subset = frozenset  # subsets are plain frozensets of element names


class FiniteSpace:
    """Ordered finite set of distinct element names."""

    __slots__ = ("elements", "index", "_universe")

    def __init__(self, elements: Iterable[str]):
        elems = tuple(elements)
        if not elems:
            raise ValidationError("a finite space needs at least one element")
        for e in elems:
            if not isinstance(e, str):
                raise ValidationError(f"element names must be strings, got {e!r}")
        if len(set(elems)) != len(elems):
            raise ValidationError("element names must be distinct")
        self.elements = elems
        self.index = {e: i for i, e in enumerate(elems)}
        self._universe = frozenset(elems)

    def __eq__(self, other):
        return isinstance(other, FiniteSpace) and other.elements == self.elements

    def __hash__(self):
        return hash(self.elements)

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"FiniteSpace({list(self.elements)!r})"

    @property
    def universe(self) -> Subset:
        return self._universe

    def subset(self, members: Iterable[str]) -> Subset:
        s = frozenset(members)
        bad = s - self._universe
        if bad:
            raise ValidationError(f"not elements of the space: {sorted(bad)}")
        return s

    def subset_key(self, s: Subset):
        """Canonical sort key: size first, then element positions."""
        return (len(s), sorted(self.index[e] for e in s))

    def subsets(self, include_empty: bool = False) -> Iterator[Subset]:
        """All subsets in canonical (size, position) order."""
        n = len(self.elements)
        for r in range(0 if include_empty else 1, n + 1):
            for combo in itertools.combinations(self.elements, r):
                yield frozenset(combo)

    def sorted_names(self, s: Subset) -> list[str]:
        return sorted(s, key=self.index.__getitem__)


class PointMap:
    """A function between finite spaces, given by a total mapping table."""

    __slots__ = ("source", "target", "table")

    def __init__(self, source: FiniteSpace, target: FiniteSpace, table: Mapping[str, str]):
        missing = set(source.elements) - set(table)
        if missing:
            raise ValidationError(f"map not total, missing {sorted(missing)}")
        for x, y in table.items():
            if x not in source.index:
                raise ValidationError(f"{x!r} is not in the source space")
            if y not in target.index:
                raise ValidationError(f"image {y!r} is not in the target space")
        self.source = source
        self.target = target
        self.table = {x: table[x] for x in source.elements}

    def __call__(self, x: str) -> str:
        return self.table[x]

    def image(self, s: Subset) -> Subset:
        return frozenset(self.table[x] for x in s)

    def preimage(self, s: Subset) -> Subset:
        return frozenset(x for x in self.source.elements if self.table[x] in s)


class SubsetFamily:
    """An explicit family of nonempty subsets of a carrier."""

    __slots__ = ("carrier", "sets")

    def __init__(self, carrier: FiniteSpace, sets: Iterable[Subset]):
        checked = []
        for s in sets:
            s = carrier.subset(s)
            if not s:
                raise ValidationError("families may not contain the empty set")
            checked.append(s)
        self.carrier = carrier
        self.sets = frozenset(checked)

    def __eq__(self, other):
        return (
            isinstance(other, SubsetFamily)
            and other.carrier == self.carrier
            and other.sets == self.sets
        )

    def __hash__(self):
        return hash((self.carrier, self.sets))

    def __len__(self):
        return len(self.sets)

    def __contains__(self, s) -> bool:
        return frozenset(s) in self.sets

    def __repr__(self):
        names = [self.carrier.sorted_names(s) for s in self.sets]
        return f"SubsetFamily({sorted(names)!r})"

    def sorted_sets(self) -> list[Subset]:
        return sorted(self.sets, key=self.carrier.subset_key)


def exp_space(space: FiniteSpace) -> SubsetFamily:
    """The hyperspace of all nonempty subsets (closed sets minus the empty one)."""
    return SubsetFamily(space, space.subsets())


def minimal_members(carrier: FiniteSpace, sets: Iterable[Subset]) -> frozenset:
    """Antichain of inclusion-minimal members of a family."""
    pool = sorted(set(sets), key=len)
    kept: list[Subset] = []
    for s in pool:
        if not any(m <= s for m in kept):
            kept.append(s)
    return frozenset(kept)


def is_inclusion_hyperspace(family: SubsetFamily) -> bool:
    """Nonempty, members nonempty, and closed upward under inclusion."""
    if not family.sets:
        return False
    universe = family.carrier.universe
    for s in family.sets:
        for extra in universe - s:
            if s | {extra} not in family.sets:
                return False
    return True


class InclusionHyperspace:
    """An inclusion hyperspace stored as the antichain of its minimal members."""

    __slots__ = ("carrier", "min_sets")

    def __init__(self, carrier: FiniteSpace, generators: Iterable[Subset]):
        gens = [carrier.subset(g) for g in generators]
        if not gens:
            raise ValidationError("an inclusion hyperspace must be nonempty")
        if any(not g for g in gens):
            raise ValidationError("members must be nonempty subsets")
        self.carrier = carrier
        self.min_sets = minimal_members(carrier, gens)

    @classmethod
    def from_family(cls, family: SubsetFamily) -> "InclusionHyperspace":
        if not is_inclusion_hyperspace(family):
            raise ValidationError("family is not closed upward under inclusion")
        return cls(family.carrier, family.sets)

    def __eq__(self, other):
        return (
            isinstance(other, InclusionHyperspace)
            and other.carrier == self.carrier
            and other.min_sets == self.min_sets
        )

    def __hash__(self):
        return hash((self.carrier, self.min_sets))

    def __contains__(self, s) -> bool:
        s = frozenset(s)
        return any(m <= s for m in self.min_sets)

    def __repr__(self):
        names = sorted(self.carrier.sorted_names(s) for s in self.min_sets)
        return f"InclusionHyperspace(min={names!r})"

    def sorted_min_sets(self) -> list[Subset]:
        return sorted(self.min_sets, key=self.carrier.subset_key)

    def members(self) -> Iterator[Subset]:
        """All members, materialized; only use on small carriers."""
        for s in self.carrier.subsets():
            if s in self:
                yield s

    def to_family(self) -> SubsetFamily:
        return SubsetFamily(self.carrier, self.members())


def g_unit(space: FiniteSpace, x: str) -> InclusionHyperspace:
    """All subsets containing x; the monad unit at x."""
    if x not in space.index:
        raise ValidationError(f"{x!r} is not in the space")
    return InclusionHyperspace(space, [frozenset([x])])


def g_map(f: PointMap, hs: InclusionHyperspace) -> InclusionHyperspace:
    """Functor action: the target sets that contain the image of some member.

    On antichains this is just the minimalized family of images of the
    minimal members.
    """
    if hs.carrier != f.source:
        raise CarrierMismatchError("hyperspace carrier differs from the map source")
    return InclusionHyperspace(f.target, [f.image(m) for m in hs.min_sets])


def g_mult(
    outer: InclusionHyperspace, assignment: Mapping[str, InclusionHyperspace]
) -> InclusionHyperspace:
    """Monad multiplication: union over outer members A of the intersection of A.

    ``outer`` lives on a carrier whose elements name inclusion hyperspaces
    on a common base space, supplied by ``assignment``.  Because members
    of the outer family only grow, and intersections shrink as members
    grow, the union over all members equals the union over the minimal
    ones; likewise each intersection is computed on antichains by
    minimalizing pairwise unions.
    """
    base: FiniteSpace | None = None
    for name in outer.carrier.elements:
        hs = assignment.get(name)
        if hs is None:
            raise ValidationError(f"no hyperspace assigned to carrier element {name!r}")
        if base is None:
            base = hs.carrier
        elif hs.carrier != base:
            raise CarrierMismatchError("assigned hyperspaces live on different spaces")
    assert base is not None
    result_gens: set[Subset] = set()
    for member in outer.min_sets:
        # intersection of the hyperspaces named by this member
        inter: frozenset | None = None
        for name in sorted(member, key=outer.carrier.index.__getitem__):
            mins = assignment[name].min_sets
            if inter is None:
                inter = mins
            else:
                inter = minimal_members(base, {a | b for a in inter for b in mins})
        assert inter is not None
        result_gens.update(inter)
    return InclusionHyperspace(base, result_gens)


def enumerate_hyperspaces(space: FiniteSpace) -> list[InclusionHyperspace]:
    """All inclusion hyperspaces on a small carrier, in a fixed order.

    Enumerates antichains of nonempty subsets; the count grows like the
    Dedekind numbers, so this is only usable for carriers of up to ~4
    elements.
    """
    if len(space) > 4:
        raise ValidationError("hyperspace enumeration is limited to carriers of size <= 4")
    subsets = sorted(space.subsets(), key=space.subset_key)
    found: list[InclusionHyperspace] = []
    seen: set[frozenset] = set()
    for r in range(1, len(subsets) + 1):
        for combo in itertools.combinations(subsets, r):
            anti = minimal_members(space, combo)
            if len(anti) == r and anti not in seen:
                seen.add(anti)
                found.append(InclusionHyperspace(space, anti))
    found.sort(key=lambda h: sorted(space.subset_key(m) for m in h.min_sets))
    return found


def hyperspace_space(space: FiniteSpace) -> tuple[FiniteSpace, dict[str, InclusionHyperspace]]:
    """Finite space naming every inclusion hyperspace on ``space``.

    Names are h0, h1, ... following the enumeration order.
    """
    all_hs = enumerate_hyperspaces(space)
    names = FiniteSpace([f"h{i}" for i in range(len(all_hs))])
    return names, {f"h{i}": hs for i, hs in enumerate(all_hs)}


def random_hyperspace(space: FiniteSpace, rng, max_generators: int = 3) -> InclusionHyperspace:
    """Seeded random hyperspace: up-closure of a few random nonempty subsets."""
    count = rng.randint(1, max_generators)
    gens = []
    for _ in range(count):
        size = rng.randint(1, len(space))
        gens.append(frozenset(rng.sample(space.elements, size)))
    return InclusionHyperspace(space, gens)
