"""Reusable law-check suites shared by the command line driver and the tests.

Each suite sweeps one family of properties at desk scale and returns a
SuiteReport: deterministic case counts, findings with witnesses, and
free-form notes.  Reports serialize to plain JSON values with no timing
data, so identical inputs produce identical bytes.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .biconvex import (
    BiconvexStructure,
    CapacityStructureMap,
    TripleStructure,
    _necessity_pool,
    _possibility_pool,
    biconvex_from_triple,
    chain_model,
    check_biconvex,
    check_triple,
    cube_structure,
    diamond_structure,
    embedding_search,
    enumerate_biconvex_structures,
    intersection_over_union_preimages,
    is_biaffine,
    quadruple_from_algebra,
    structure_map_full,
    structure_map_full_dual,
    structure_map_necessity,
    structure_map_possibility,
    sugeno_form,
    triple_from_biconvex,
    union_over_intersection_preimages,
)
from .capacity import (
    NecessityCapacity,
    PossibilityCapacity,
    canonical_key,
    capacity_equal,
    capacity_space,
    classify,
    as_capacity,
    as_necessity,
    as_possibility,
    dirac_density,
    kappa_dual,
    mult,
    necessity_space,
    possibility_space,
    pushforward,
    unit_dirac,
)
from .chain import Chain, complement, join, make_chain, meet
from .convexity import (
    ConvexStructure,
    UnionStructureMap,
    check_algebra_laws,
    check_ic_axioms,
    check_semimodule_axioms,
    density_key,
    enumerate_convex_structures,
    enumerate_union_algebras,
    ic_from_structure_map,
    is_affine,
    nary_combination,
    pushforward_density,
    quotient_semimodule,
    structure_map_from_ic,
)
from .errors import BudgetExceededError, LawViolationError
from .serial import biconvex_to_json, capacity_to_json, convex_to_json
from .spaces import (
    FiniteSpace,
    InclusionHyperspace,
    PointMap,
    SubsetFamily,
    enumerate_hyperspaces,
    g_map,
    g_mult,
    g_unit,
    hyperspace_space,
    random_hyperspace,
)

INDEPENDENCE_SEARCH_BUDGET = 100_000


@dataclass
class Finding:
    law: str
    witness: str

    def to_json(self) -> dict:
        return {"law": self.law, "witness": self.witness}


@dataclass
class SuiteReport:
    """Outcome of one suite: counts, findings, notes; no timing."""

    name: str
    mode: str = "exhaustive"
    cases: int = 0
    findings: list[Finding] = field(default_factory=list)
    counts: dict[str, int] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.findings

    def check(self, law: str, ok: bool, witness="") -> bool:
        # witness may be a zero-argument callable so passing sweeps never
        # pay for string building
        self.cases += 1
        if not ok:
            self.findings.append(Finding(law, witness() if callable(witness) else witness))
        return ok

    def bump(self, key: str, n: int = 1) -> None:
        self.counts[key] = self.counts.get(key, 0) + n

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "mode": self.mode,
            "cases": self.cases,
            "passed": self.passed,
            "findings": [
                f.to_json()
                for f in sorted(self.findings, key=lambda f: (f.law, f.witness))
            ],
            "counts": {k: self.counts[k] for k in sorted(self.counts)},
            "notes": list(self.notes),
        }


def desk_spaces(max_size: int = 3) -> tuple[FiniteSpace, ...]:
    """The standard small carriers: {a}, {a,b}, {a,b,c}, ..."""
    letters = "abcdefgh"
    return tuple(
        FiniteSpace(list(letters[: n + 1])) for n in range(min(max_size, 8))
    )


@lru_cache(maxsize=None)
def convex_structures(space: FiniteSpace, chain: Chain):
    return tuple(enumerate_convex_structures(space, chain))


@lru_cache(maxsize=None)
def biconvex_structures(space: FiniteSpace, chain: Chain):
    return tuple(enumerate_biconvex_structures(space, chain))


@lru_cache(maxsize=None)
def _capacity_pool(space: FiniteSpace, chain: Chain):
    return capacity_space(space, chain)


@lru_cache(maxsize=None)
def _poss_pool(space: FiniteSpace, chain: Chain):
    return possibility_space(space, chain)


@lru_cache(maxsize=None)
def _necc_pool(space: FiniteSpace, chain: Chain):
    return necessity_space(space, chain)


def _compact(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _cap_witness(c) -> str:
    return _compact(capacity_to_json(c))


def _hs_witness(h: InclusionHyperspace) -> str:
    return ";".join(
        ",".join(sorted(m)) for m in sorted(h.min_sets, key=h.carrier.subset_key)
    )


def _map_witness(f: PointMap) -> str:
    return ",".join(f"{x}->{f(x)}" for x in f.source.elements)


def _convex_witness(s: ConvexStructure) -> str:
    return _compact(convex_to_json(s))


def _biconvex_witness(b: BiconvexStructure) -> str:
    return _compact(biconvex_to_json(b))


# ---------------------------------------------------------------- chain laws


def chain_suite(max_k: int = 4) -> SuiteReport:
    """Idempotent-semiring, lattice, and complement laws for every chain."""
    rep = SuiteReport("chain-semiring")
    for k in range(1, max_k + 1):
        ch = make_chain(k)
        lv = ch.levels
        for a in lv:
            w = f"k={k} a={a}"
            rep.check("join-zero-identity", join(a, ch.zero) == a, w)
            rep.check("meet-one-identity", meet(a, ch.one) == a, w)
            rep.check("meet-zero-annihilates", meet(a, ch.zero) == ch.zero, w)
            rep.check("join-one-absorbs", join(a, ch.one) == ch.one, w)
            rep.check("join-idempotent", join(a, a) == a, w)
            rep.check("meet-idempotent", meet(a, a) == a, w)
            rep.check("complement-involution", complement(complement(a)) == a, w)
        for a, b in itertools.product(lv, repeat=2):
            w = f"k={k} a={a} b={b}"
            rep.check("join-commutative", join(a, b) == join(b, a), w)
            rep.check("meet-commutative", meet(a, b) == meet(b, a), w)
            rep.check(
                "absorption",
                join(a, meet(a, b)) == a and meet(a, join(a, b)) == a,
                w,
            )
            rep.check(
                "de-morgan",
                complement(join(a, b)) == meet(complement(a), complement(b))
                and complement(meet(a, b)) == join(complement(a), complement(b)),
                w,
            )
            rep.check("total-order", a <= b or b <= a, w)
            rep.check(
                "complement-antitone",
                (a <= b) == (complement(b) <= complement(a)),
                w,
            )
        for a, b, c in itertools.product(lv, repeat=3):
            w = f"k={k} a={a} b={b} c={c}"
            rep.check("join-associative", join(join(a, b), c) == join(a, join(b, c)), w)
            rep.check("meet-associative", meet(meet(a, b), c) == meet(a, meet(b, c)), w)
            rep.check(
                "meet-distributes-over-join",
                meet(a, join(b, c)) == join(meet(a, b), meet(a, c)),
                w,
            )
            rep.check(
                "join-distributes-over-meet",
                join(a, meet(b, c)) == meet(join(a, b), join(a, c)),
                w,
            )
    rep.counts["chains"] = max_k
    return rep


# --------------------------------------------------------- hyperspace monad


def _endomaps(space: FiniteSpace) -> list[PointMap]:
    els = space.elements
    return [
        PointMap(space, space, dict(zip(els, image)))
        for image in itertools.product(els, repeat=len(els))
    ]


def _random_endomap(space: FiniteSpace, rng) -> PointMap:
    return PointMap(
        space, space, {x: rng.choice(space.elements) for x in space.elements}
    )


def _mult_by_membership(outer: InclusionHyperspace, assignment) -> InclusionHyperspace:
    """Brute-force multiplication: keep B when the set of names containing
    B is itself a member of the outer hyperspace."""
    base = next(iter(assignment.values())).carrier
    hit = [
        s
        for s in base.subsets()
        if frozenset(
            n for n in outer.carrier.elements if s in assignment[n]
        )
        in outer
    ]
    return InclusionHyperspace.from_family(SubsetFamily(base, hit))


def _g_unit_and_functor(space, rep, hyperspaces, maps, names, assignment, key_to_name):
    els = space.elements
    ident = PointMap(space, space, {x: x for x in els})
    eta_hat = PointMap(
        space, names, {x: key_to_name[g_unit(space, x).min_sets] for x in els}
    )
    for x in els:
        for f in maps:
            rep.check(
                "unit-naturality",
                g_map(f, g_unit(space, x)) == g_unit(space, f(x)),
                f"x={x} f={_map_witness(f)}",
            )
    for hs in hyperspaces:
        w = _hs_witness(hs)
        rep.check("functor-identity", g_map(ident, hs) == hs, w)
        rep.check(
            "unit-law-outer",
            g_mult(g_unit(names, key_to_name[hs.min_sets]), assignment) == hs,
            w,
        )
        rep.check(
            "unit-law-inner",
            g_mult(g_map(eta_hat, hs), assignment) == hs,
            w,
        )
        for f, g in itertools.product(maps, repeat=2):
            comp = PointMap(space, space, {x: g(f(x)) for x in els})
            rep.check(
                "functor-composition",
                g_map(comp, hs) == g_map(g, g_map(f, hs)),
                f"{w} f={_map_witness(f)} g={_map_witness(g)}",
            )


def _g_lifted(f: PointMap, names, assignment, key_to_name) -> PointMap:
    return PointMap(
        names,
        names,
        {n: key_to_name[g_map(f, assignment[n]).min_sets] for n in names.elements},
    )


def _g_associativity(space, rep, trials, seed):
    rng = random.Random(seed)
    names, assignment = hyperspace_space(space)
    key_to_name = {hs.min_sets: n for n, hs in assignment.items()}
    for t in range(trials):
        m = rng.randint(1, 4)
        layer = [random_hyperspace(names, rng) for _ in range(m)]
        level2 = FiniteSpace([f"t{i}" for i in range(m)])
        assign2 = {f"t{i}": layer[i] for i in range(m)}
        theta = random_hyperspace(level2, rng)
        mu_hat = PointMap(
            level2,
            names,
            {
                f"t{i}": key_to_name[g_mult(layer[i], assignment).min_sets]
                for i in range(m)
            },
        )
        route_a = g_mult(g_map(mu_hat, theta), assignment)
        route_b = g_mult(g_mult(theta, assign2), assignment)
        rep.check("mult-associativity", route_a == route_b, f"seed-trial={t}")
    rep.bump("associativity-trials", trials)


def g_monad_suite(
    space: FiniteSpace,
    mode: str = "exhaustive",
    samples: int = 1000,
    seed: int = 0,
) -> SuiteReport:
    """Unit, functor, naturality, and multiplication laws for the
    inclusion-hyperspace monad, with a brute-force membership oracle for
    every multiplication."""
    rep = SuiteReport("hyperspace-monad", mode)
    names, assignment = hyperspace_space(space)
    key_to_name = {hs.min_sets: n for n, hs in assignment.items()}
    if mode == "exhaustive":
        if len(space) > 2:
            raise BudgetExceededError(
                "exhaustive hyperspace sweeps need at most 2 points; use random mode"
            )
        hyperspaces = enumerate_hyperspaces(space)
        maps = _endomaps(space)
        _g_unit_and_functor(
            space, rep, hyperspaces, maps, names, assignment, key_to_name
        )
        lifted = {id(f): _g_lifted(f, names, assignment, key_to_name) for f in maps}
        second = enumerate_hyperspaces(names)
        for outer in second:
            w = _hs_witness(outer)
            flat = g_mult(outer, assignment)
            rep.check(
                "mult-two-routes",
                flat == _mult_by_membership(outer, assignment),
                w,
            )
            for f in maps:
                rep.check(
                    "mult-naturality",
                    g_mult(g_map(lifted[id(f)], outer), assignment)
                    == g_map(f, flat),
                    f"{w} f={_map_witness(f)}",
                )
        rep.counts["hyperspaces"] = len(hyperspaces)
        rep.counts["second-level-hyperspaces"] = len(second)
        _g_associativity(space, rep, max(100, samples // 10), seed)
        rep.notes.append(
            "multiplication associativity is sampled: the third hyperspace "
            "level is beyond enumeration even over two points"
        )
    else:
        rng = random.Random(seed)
        els = space.elements
        eta_hat = PointMap(
            space, names, {x: key_to_name[g_unit(space, x).min_sets] for x in els}
        )
        n_each = max(1, samples // 5)
        for _ in range(n_each):
            f = _random_endomap(space, rng)
            x = rng.choice(els)
            rep.check(
                "unit-naturality",
                g_map(f, g_unit(space, x)) == g_unit(space, f(x)),
                f"x={x} f={_map_witness(f)}",
            )
        for _ in range(n_each):
            f = _random_endomap(space, rng)
            g = _random_endomap(space, rng)
            hs = random_hyperspace(space, rng)
            comp = PointMap(space, space, {x: g(f(x)) for x in els})
            rep.check(
                "functor-composition",
                g_map(comp, hs) == g_map(g, g_map(f, hs)),
                f"{_hs_witness(hs)} f={_map_witness(f)} g={_map_witness(g)}",
            )
        for _ in range(n_each):
            hs = random_hyperspace(space, rng)
            w = _hs_witness(hs)
            rep.check(
                "unit-law-outer",
                g_mult(g_unit(names, key_to_name[hs.min_sets]), assignment) == hs,
                w,
            )
            rep.check(
                "unit-law-inner",
                g_mult(g_map(eta_hat, hs), assignment) == hs,
                w,
            )
        for _ in range(n_each):
            outer = random_hyperspace(names, rng)
            w = _hs_witness(outer)
            flat = g_mult(outer, assignment)
            rep.check(
                "mult-two-routes", flat == _mult_by_membership(outer, assignment), w
            )
            f = _random_endomap(space, rng)
            rep.check(
                "mult-naturality",
                g_mult(
                    g_map(_g_lifted(f, names, assignment, key_to_name), outer),
                    assignment,
                )
                == g_map(f, flat),
                f"{w} f={_map_witness(f)}",
            )
        _g_associativity(space, rep, n_each, seed + 1)
    return rep


# ---------------------------------------------------------- capacity monad


def _random_density(carrier, chain, rng, max_support=4) -> PossibilityCapacity:
    size = rng.randint(1, min(max_support, len(carrier)))
    support = rng.sample(carrier.elements, size)
    dens = {n: rng.choice(chain.levels[1:]) for n in support}
    dens[rng.choice(support)] = chain.one
    return PossibilityCapacity(carrier, chain, dens)


def _random_codensity(carrier, chain, rng, max_support=4) -> NecessityCapacity:
    size = rng.randint(1, min(max_support, len(carrier)))
    support = rng.sample(carrier.elements, size)
    cod = {n: rng.choice(chain.levels[:-1]) for n in support}
    cod[rng.choice(support)] = chain.zero
    return NecessityCapacity(carrier, chain, cod)


def _random_mixed(carrier, chain, rng, max_support=4):
    if rng.random() < 0.5:
        return _random_density(carrier, chain, rng, max_support)
    return _random_codensity(carrier, chain, rng, max_support)


def capacity_monad_suite(
    space: FiniteSpace,
    chain: Chain,
    samples: int = 500,
    seed: int = 0,
) -> SuiteReport:
    """Unit laws exhaustively; associativity, naturality, submonad closure,
    and the conjugation isomorphism on seeded samples."""
    rep = SuiteReport("capacity-monad", "mixed")
    names, lookup = _capacity_pool(space, chain)
    rep.counts["capacities"] = len(names)
    name_of = {canonical_key(c): n for n, c in lookup.items()}

    for n, c in lookup.items():
        rep.check(
            "unit-law-outer",
            capacity_equal(mult(dirac_density(names, chain, n), lookup), c),
            lambda c=c: _cap_witness(c),
        )
    eta_hat = PointMap(
        space,
        names,
        {x: name_of[canonical_key(unit_dirac(space, chain, x))] for x in space.elements},
    )
    for n, c in lookup.items():
        rep.check(
            "unit-law-inner",
            capacity_equal(mult(pushforward(eta_hat, c), lookup), c),
            lambda c=c: _cap_witness(c),
        )
    rep.counts["unit-law-cases"] = 2 * len(names)

    # naturality under every endomap, sampled outers
    rng = random.Random(seed)
    lifted_cache: dict[tuple, PointMap] = {}
    for t in range(min(40, max(1, samples // 10))):
        f = _random_endomap(space, rng)
        x = rng.choice(space.elements)
        rep.check(
            "unit-naturality",
            capacity_equal(
                pushforward(f, unit_dirac(space, chain, x)),
                unit_dirac(space, chain, f(x)),
            ),
            f"x={x} f={_map_witness(f)}",
        )
        fkey = tuple(f(e) for e in space.elements)
        lifted = lifted_cache.get(fkey)
        if lifted is None:
            lifted = PointMap(
                names,
                names,
                {
                    n: name_of[canonical_key(pushforward(f, lookup[n]))]
                    for n in names.elements
                },
            )
            lifted_cache[fkey] = lifted
        outer = _random_mixed(names, chain, rng)
        lhs = pushforward(f, as_capacity(mult(outer, lookup)))
        rhs = mult(pushforward(lifted, outer), lookup)
        rep.check(
            "mult-naturality",
            capacity_equal(lhs, rhs),
            f"seed-trial={t} f={_map_witness(f)}",
        )

    # conjugation: unit fixed, multiplication intertwined, classes swapped
    poss_names, poss_lookup = _poss_pool(space, chain)
    necc_names, necc_lookup = _necc_pool(space, chain)
    necc_name_of = {canonical_key(c): n for n, c in necc_lookup.items()}
    kappa_hat = PointMap(
        poss_names,
        necc_names,
        {
            p: necc_name_of[canonical_key(kappa_dual(poss_lookup[p]))]
            for p in poss_names.elements
        },
    )
    for x in space.elements:
        rep.check(
            "conjugation-fixes-units",
            capacity_equal(
                kappa_dual(unit_dirac(space, chain, x)), unit_dirac(space, chain, x)
            ),
            f"x={x}",
        )
    m = len(poss_names)
    total = (chain.k + 1) ** m - chain.k ** m
    if total <= 1024:
        outers = [
            PossibilityCapacity(poss_names, chain, dict(zip(poss_names.elements, combo)))
            for combo in itertools.product(chain.levels, repeat=m)
            if max(combo) == chain.one
        ]
        rep.counts["conjugation-sweep"] = len(outers)
    else:
        rng2 = random.Random(seed + 1)
        outers = [_random_density(poss_names, chain, rng2) for _ in range(samples)]
        rep.counts["conjugation-sweep"] = samples
    for outer in outers:
        flat = as_capacity(mult(outer, poss_lookup))
        w = lambda outer=outer: _cap_witness(outer)
        rep.check("union-closure", classify(flat).is_union, w)
        mirrored = mult(pushforward(kappa_hat, kappa_dual(outer)), necc_lookup)
        rep.check("intersection-closure", classify(mirrored).is_intersection, w)
        rep.check(
            "conjugation-mult-intertwines",
            capacity_equal(kappa_dual(flat), mirrored),
            w,
        )

    # associativity over sampled two-level capacities
    rng3 = random.Random(seed + 2)
    for t in range(samples):
        m2 = rng3.randint(1, 4)
        picks = [_random_mixed(names, chain, rng3) for _ in range(m2)]
        level2 = FiniteSpace([f"t{i}" for i in range(m2)])
        assign2 = {f"t{i}": picks[i] for i in range(m2)}
        theta = _random_mixed(level2, chain, rng3, max_support=m2)
        mu_hat = PointMap(
            level2,
            names,
            {
                f"t{i}": name_of[canonical_key(as_capacity(mult(picks[i], lookup)))]
                for i in range(m2)
            },
        )
        route_a = mult(pushforward(mu_hat, theta), lookup)
        route_b = mult(mult(theta, assign2), lookup)
        rep.check(
            "mult-associativity",
            capacity_equal(route_a, route_b),
            f"seed-trial={t}",
        )
    rep.counts["associativity-trials"] = samples
    return rep


# ------------------------------------------------- convex structure round trips


def convex_roundtrip_suite(space: FiniteSpace, chain: Chain) -> SuiteReport:
    """Table -> map -> table and map -> table -> map round trips, base-point
    independence, and algebra laws for every enumerated convex structure."""
    rep = SuiteReport("convex-roundtrips")
    structs = convex_structures(space, chain)
    rep.counts["structures"] = len(structs)
    _, poss_lookup = _poss_pool(space, chain)
    densities = list(poss_lookup.values())
    for s in structs:
        wit = _convex_witness(s)
        rep.check("combination-axioms", not check_ic_axioms(s), wit)
        xi = UnionStructureMap.from_convex(s)
        rep.check("algebra-laws", not check_algebra_laws(xi), wit)
        rep.check("table-roundtrip", ic_from_structure_map(xi).ic == s.ic, wit)
        for c in densities:
            base_points = [x for x in space.elements if c.density[x] == chain.one]
            got = {structure_map_from_ic(s, c, x0) for x0 in base_points}
            rep.check(
                "base-point-independence",
                len(got) == 1,
                lambda wit=wit, c=c: f"{wit} density={_cap_witness(c)}",
            )
            coeffs = [c.density[x] for x in space.elements]
            folded = nary_combination(s, coeffs, space.elements)
            backward = nary_combination(
                s, list(reversed(coeffs)), list(reversed(space.elements))
            )
            value = xi(c)
            rep.check(
                "nary-fold-matches-map",
                folded == value and backward == value,
                lambda wit=wit, c=c: f"{wit} density={_cap_witness(c)}",
            )
    if len(space) <= 2:
        algebras = list(enumerate_union_algebras(space, chain))
        rep.counts["union-algebras"] = len(algebras)
        for xi0 in algebras:
            s0 = ic_from_structure_map(xi0)
            again = UnionStructureMap.from_convex(s0)
            rep.check(
                "map-roundtrip",
                again.tabulate() == xi0.tabulate(),
                _convex_witness(s0),
            )
    else:
        rep.notes.append(
            "raw structure-map enumeration is restricted to two-point carriers;"
            " larger carriers round-trip through tables only"
        )
    return rep


# ------------------------------------------------------ morphism equivalence


def _all_maps(source: FiniteSpace, target: FiniteSpace) -> list[PointMap]:
    return [
        PointMap(source, target, dict(zip(source.elements, image)))
        for image in itertools.product(target.elements, repeat=len(source))
    ]


def morphism_suite(chain: Chain, max_size: int = 3) -> SuiteReport:
    """Morphism <=> (bi)affine over every map between enumerated structures,
    plus the max(x, 1/2) witness on the chain model."""
    rep = SuiteReport("morphism-equivalence")
    spaces = desk_spaces(max_size)

    by_space = {
        sp: (
            list(convex_structures(sp, chain)),
            list(_poss_pool(sp, chain)[1].values()),
        )
        for sp in spaces
    }
    # structure maps tabulated once per structure; pushforwards once per map
    tabs = {
        id(s): UnionStructureMap.from_convex(s).tabulate()
        for structs, _ in by_space.values()
        for s in structs
    }
    for sp1, (structs1, densities) in by_space.items():
        keys = [density_key(p) for p in densities]
        for sp2, (structs2, _) in by_space.items():
            for f in _all_maps(sp1, sp2):
                pushed = [
                    density_key(pushforward_density(f, p)) for p in densities
                ]
                for s1 in structs1:
                    tab1 = tabs[id(s1)]
                    for s2 in structs2:
                        tab2 = tabs[id(s2)]
                        affine = is_affine(f, s1, s2)
                        morph = all(
                            f(tab1[k]) == tab2[pk]
                            for k, pk in zip(keys, pushed)
                        )
                        rep.check(
                            "affine-iff-morphism",
                            affine == morph,
                            lambda f=f, s1=s1, s2=s2: (
                                f"f={_map_witness(f)} s1={_convex_witness(s1)} "
                                f"s2={_convex_witness(s2)}"
                            ),
                        )
                        rep.bump("union-algebra-maps")

    bstructs = [b for sp in spaces for b in biconvex_structures(sp, chain)]
    full = [
        (b, CapacityStructureMap.from_biconvex(b), list(_capacity_pool(b.carrier, chain)[1].values()))
        for b in bstructs
    ]
    for b1, xi1, caps in full:
        levels = chain.levels
        for b2, xi2, _ in full:
            for f in _all_maps(b1.carrier, b2.carrier):
                biaff = is_biaffine(f, b1, b2)
                morph = all(
                    f(xi1(c)) == xi2(as_capacity(pushforward(f, c))) for c in caps
                )
                rep.check(
                    "biaffine-iff-full-morphism",
                    biaff == morph,
                    lambda f=f, b1=b1, b2=b2: (
                        f"f={_map_witness(f)} b1={_biconvex_witness(b1)} "
                        f"b2={_biconvex_witness(b2)}"
                    ),
                )
                rep.bump("full-algebra-maps")
                if not biaff:
                    continue
                keeps_meet = all(
                    f(b1.smeet[(a, x)]) == b2.smeet[(a, f(x))]
                    for a in levels
                    for x in b1.carrier.elements
                )
                keeps_join = all(
                    f(b1.sjoin[(a, x)]) == b2.sjoin[(a, f(x))]
                    for a in levels
                    for x in b1.carrier.elements
                )
                w = f"f={_map_witness(f)}"
                rep.check(
                    "meet-action-preserved-iff-bottom-fixed",
                    keeps_meet == (f(b1.bottom) == b2.bottom),
                    w,
                )
                rep.check(
                    "join-action-preserved-iff-top-fixed",
                    keeps_join == (f(b1.top) == b2.top),
                    w,
                )

    half = Fraction(1, 2)
    if any(l.value == half for l in chain.levels):
        b = chain_model(chain)
        hl = chain.level(half)
        f = PointMap(
            b.carrier,
            b.carrier,
            {str(l.value): str(max(l, hl).value) for l in chain.levels},
        )
        rep.check("witness-biaffine", is_biaffine(f, b, b), "max(x,1/2)")
        top = b.top
        rep.check(
            "witness-breaks-meet-action",
            f(b.smeet[(chain.zero, top)]) != b.smeet[(chain.zero, f(top))],
            "max(x,1/2) at weight 0",
        )
        rep.check(
            "witness-is-full-morphism",
            all(
                f(structure_map_full(b, c))
                == structure_map_full(b, as_capacity(pushforward(f, c)))
                for c in _capacity_pool(b.carrier, chain)[1].values()
            ),
            "max(x,1/2)",
        )
    return rep


# ------------------------------------------------------------- quotient


def quotient_suite(chain: Chain, max_size: int = 3) -> SuiteReport:
    """Quotient semimodule construction for every enumerated convex structure."""
    rep = SuiteReport("quotient-semimodule")
    for sp in desk_spaces(max_size):
        for s in convex_structures(sp, chain):
            wit = _convex_witness(s)
            q = quotient_semimodule(s)
            rep.check(
                "semimodule-axioms", not check_semimodule_axioms(q.semimodule), wit
            )
            images = [q.embedding(x) for x in sp.elements]
            rep.check("embedding-injective", len(set(images)) == len(images), wit)
            mod = q.semimodule
            ok = all(
                q.embedding(s.ic[(x, a, y)])
                == mod.add[(q.embedding(x), mod.scale[(a, q.embedding(y))])]
                for x in sp.elements
                for a in chain.levels
                for y in sp.elements
            )
            rep.check("embedding-translates-combinations", ok, wit)
            rep.bump("quotients")
    return rep


# ------------------------------------------------------- full structure maps


def _xi_via_union_mixture(b: BiconvexStructure, mixture: PossibilityCapacity) -> str:
    _, assignment, _, _ = _necessity_pool(b.carrier, b.chain)
    dens = {x: b.chain.zero for x in b.carrier.elements}
    for n, w in mixture.density.items():
        if w == b.chain.zero:
            continue
        target = structure_map_necessity(b, assignment[n])
        if w > dens[target]:
            dens[target] = w
    return structure_map_possibility(b, PossibilityCapacity(b.carrier, b.chain, dens))


def _xi_via_intersection_mixture(b: BiconvexStructure, mixture: NecessityCapacity) -> str:
    _, assignment, _, _ = _possibility_pool(b.carrier, b.chain)
    cod = {x: b.chain.one for x in b.carrier.elements}
    for p, w in mixture.codensity.items():
        if w == b.chain.one:
            continue
        target = structure_map_possibility(b, assignment[p])
        if w < cod[target]:
            cod[target] = w
    return structure_map_necessity(b, NecessityCapacity(b.carrier, b.chain, cod))


def _all_phis(chain: Chain) -> list[dict]:
    inner = chain.levels[1:-1]
    out = []
    for combo in itertools.product(chain.levels, repeat=len(inner)):
        if all(combo[i] <= combo[i + 1] for i in range(len(combo) - 1)):
            phi = {chain.zero: chain.zero, chain.one: chain.one}
            phi.update(dict(zip(inner, combo)))
            out.append(phi)
    return out


def full_map_suite(
    space: FiniteSpace,
    chain: Chain,
    samples: int = 150,
    seed: int = 0,
) -> SuiteReport:
    """Triple/quadruple round trips, closed-form agreement, the two
    factorization routes, preimage independence, restriction coherence,
    and the algebra laws of the full structure map."""
    rep = SuiteReport("biconvex-structure-maps", "mixed")
    structs = biconvex_structures(space, chain)
    rep.counts["structures"] = len(structs)
    _, poss_lookup = _poss_pool(space, chain)
    _, necc_lookup = _necc_pool(space, chain)
    necc_names = _necc_pool(space, chain)[0]
    poss_names = _poss_pool(space, chain)[0]
    _, caps = _capacity_pool(space, chain)

    union_hits = {
        n: union_over_intersection_preimages(
            c, limit=2, budget=INDEPENDENCE_SEARCH_BUDGET
        )
        for n, c in caps.items()
    }
    inter_hits = {
        n: intersection_over_union_preimages(
            c, limit=2, budget=INDEPENDENCE_SEARCH_BUDGET
        )
        for n, c in caps.items()
    }

    for b in structs:
        wit = _biconvex_witness(b)
        rep.check("biconvex-laws", not check_biconvex(b), wit)

        t = triple_from_biconvex(b)
        rep.check("triple-laws", not check_triple(t), wit)
        rep.check("quadruple-roundtrip", biconvex_from_triple(t) == b, wit)
        for p_img in itertools.product(b.carrier.elements, repeat=chain.k + 1):
            for m_img in itertools.product(b.carrier.elements, repeat=chain.k + 1):
                cand = TripleStructure(
                    b.carrier,
                    chain,
                    b.bjoin,
                    b.bmeet,
                    dict(zip(chain.levels, p_img)),
                    dict(zip(chain.levels, m_img)),
                )
                if check_triple(cand):
                    continue
                derived = biconvex_from_triple(cand)
                rep.check(
                    "triple-to-quadruple-laws",
                    not check_biconvex(derived),
                    f"{wit} p={p_img} m={m_img}",
                )
                back = triple_from_biconvex(derived)
                rep.check(
                    "triple-roundtrip",
                    back.p == cand.p and back.m == cand.m,
                    f"{wit} p={p_img} m={m_img}",
                )
                rep.bump("triples-on-lattice")

        for c in poss_lookup.values():
            try:
                structure_map_possibility(b, c)
                ok = True
            except LawViolationError:
                ok = False
            rep.check("possibility-closed-forms-agree", ok, lambda c=c: _cap_witness(c))
        for c in necc_lookup.values():
            try:
                structure_map_necessity(b, c)
                ok = True
            except LawViolationError:
                ok = False
            rep.check("necessity-closed-forms-agree", ok, lambda c=c: _cap_witness(c))

        xi = CapacityStructureMap.from_biconvex(b)
        for n, c in caps.items():
            value = xi(c)
            wc = lambda c=c: _cap_witness(c)
            rep.check(
                "factorizations-agree",
                value == structure_map_full_dual(b, c),
                wc,
            )
            flags = classify(c)
            if flags.is_union:
                rep.check(
                    "restricts-to-possibility-map",
                    value == structure_map_possibility(b, as_possibility(c)),
                    wc,
                )
            if flags.is_intersection:
                rep.check(
                    "restricts-to-necessity-map",
                    value == structure_map_necessity(b, as_necessity(c)),
                    wc,
                )
            hits = union_hits[n]
            if len(hits) >= 2:
                routed = {_xi_via_union_mixture(b, mix) for mix in hits}
                rep.check("preimage-independence", len(routed) == 1, wc)
                rep.bump("multiple-union-preimages")
            hits2 = inter_hits[n]
            if len(hits2) >= 2:
                routed = {_xi_via_intersection_mixture(b, mix) for mix in hits2}
                rep.check(
                    "preimage-independence-dual", len(routed) == 1, wc
                )
                rep.bump("multiple-intersection-preimages")

        for x in space.elements:
            rep.check(
                "algebra-unit-law",
                xi(unit_dirac(space, chain, x)) == x,
                f"x={x}",
            )
        rng = random.Random(seed)
        for trial in range(samples):
            outer = _random_density(necc_names, chain, rng, max_support=3)
            flat = mult(outer, necc_lookup)
            lhs = xi(as_capacity(flat))
            rhs = _xi_via_union_mixture(b, outer)
            rep.check(
                "algebra-multiplication-law", lhs == rhs, f"seed-trial={trial}"
            )
            outer2 = _random_codensity(poss_names, chain, rng, max_support=3)
            flat2 = mult(outer2, poss_lookup)
            lhs2 = xi(as_capacity(flat2))
            rhs2 = _xi_via_intersection_mixture(b, outer2)
            rep.check(
                "algebra-multiplication-law-dual",
                lhs2 == rhs2,
                f"seed-trial={trial}",
            )
        rep.check("quadruple-recovered-from-map", quadruple_from_algebra(xi) == b, wit)

    for arity in (1, 2):
        for phis in itertools.product(_all_phis(chain), repeat=arity):
            cube = cube_structure(chain, list(phis))
            w = f"arity={arity} phi=" + ";".join(
                ",".join(f"{a}->{phi[a]}" for a in chain.levels) for phi in phis
            )
            rep.check("cube-biconvex-laws", not check_biconvex(cube.structure), w)
            tc = triple_from_biconvex(cube.structure)
            rep.check(
                "cube-triple-roundtrip",
                not check_triple(tc)
                and biconvex_from_triple(tc) == cube.structure,
                w,
            )
            rep.bump("cube-instances")

    rep.notes.append(
        "continuity requirements hold vacuously on finite discrete carriers"
    )
    rep.notes.append(
        f"preimage searches for the independence sweep are bounded to "
        f"{INDEPENDENCE_SEARCH_BUDGET} candidates each"
    )
    return rep


# ------------------------------------------------------------ sugeno record


def sugeno_suite(chain: Chain, max_size: int = 2, with_chain_model: bool = True) -> SuiteReport:
    """Compare the factored structure map against the direct join of
    weighted meets on every capacity; both outcomes are recorded."""
    rep = SuiteReport("sugeno-crosscheck")
    targets = [b for sp in desk_spaces(max_size) for b in biconvex_structures(sp, chain)]
    if with_chain_model:
        targets.append(chain_model(chain))
    agreements = 0
    first_diff = None
    for b in targets:
        xi = CapacityStructureMap.from_biconvex(b)
        for c in _capacity_pool(b.carrier, chain)[1].values():
            rep.cases += 1
            factored = xi(c)
            direct = sugeno_form(b, c)
            if factored == direct:
                agreements += 1
            elif first_diff is None:
                first_diff = (b, c, factored, direct)
    rep.counts["comparisons"] = rep.cases
    rep.counts["agreements"] = agreements
    if first_diff is None:
        rep.notes.append(
            f"join-of-weighted-meets agrees with the factored structure map "
            f"on all {rep.cases} comparisons"
        )
    else:
        b, c, factored, direct = first_diff
        rep.notes.append(
            f"join-of-weighted-meets disagrees with the factored structure map: "
            f"capacity {_cap_witness(c)} gives {factored} (factored) vs {direct} "
            f"(direct) on {_biconvex_witness(b)}"
        )
    return rep


# ------------------------------------------------------------- embeddings


def embedding_suite(chain: Chain | None = None) -> SuiteReport:
    """Self-certificates for the chain model and all small cubes, plus the
    recorded result for the four-element diamond."""
    rep = SuiteReport("coordinate-embedding")
    base = chain or make_chain(2)

    res = embedding_search(chain_model(base), max_arity=1)
    rep.check(
        "chain-model-self-certificate",
        res.found and res.arity == 1,
        "chain-model",
    )
    rep.counts["chain-model-candidates"] = res.candidates

    for k in (1, 2):
        ch = make_chain(k)
        for arity in (1, 2):
            for phis in itertools.product(_all_phis(ch), repeat=arity):
                cube = cube_structure(ch, list(phis))
                got = embedding_search(cube.structure, max_arity=arity)
                w = f"k={k} arity={arity} phi=" + ";".join(
                    ",".join(f"{a}->{phi[a]}" for a in ch.levels) for phi in phis
                )
                rep.check(
                    "cube-self-certificate", got.found and got.arity <= arity, w
                )
                rep.bump("cube-instances")

    diamond = diamond_structure(base)
    got = embedding_search(diamond, max_arity=2)
    rep.counts["diamond-found"] = int(got.found)
    if got.found:
        rep.counts["diamond-arity"] = got.arity
        rep.notes.append(
            f"diamond embeds with {got.arity} coordinates out of "
            f"{got.candidates} lawful candidates"
        )
    else:
        rep.notes.append(
            f"diamond admits no coordinate embedding with at most "
            f"{got.max_arity} coordinates ({got.candidates} lawful candidates)"
        )
    return rep
