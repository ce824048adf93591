"""Convex combination structures, their algebras, duals, and quotients."""

import itertools
from fractions import Fraction
from functools import lru_cache

import pytest

from capalg.chain import Chain, complement
from capalg.errors import ValidationError
from capalg.spaces import FiniteSpace, PointMap
from capalg.capacity import (
    NecessityCapacity,
    PossibilityCapacity,
    enumerate_capacities,
    kappa_dual,
)
from capalg.convexity import (
    ConvexStructure,
    DualConvexStructure,
    Semimodule,
    UnionStructureMap,
    check_algebra_laws,
    check_ci_axioms,
    check_ic_axioms,
    check_semimodule_axioms,
    density_key,
    dual_structure_map,
    enumerate_convex_structures,
    enumerate_union_algebras,
    ic_from_structure_map,
    is_affine,
    is_algebra_morphism,
    nary_combination,
    quotient_semimodule,
    structure_map_from_ic,
)

K1 = Chain(1)
K2 = Chain(2)
X2 = FiniteSpace(["a", "b"])
X3 = FiniteSpace(["a", "b", "c"])


@lru_cache(maxsize=None)
def structures(space, chain):
    return tuple(enumerate_convex_structures(space, chain))


def brute_force_structures(space, chain):
    """Independent oracle: filter every total table by the five axioms inline."""
    X = space.elements
    levels = chain.levels
    cells = list(itertools.product(X, levels, X))
    found = []
    for combo in itertools.product(X, repeat=len(cells)):
        ic = dict(zip(cells, combo))
        if not all(ic[(x, a, x)] == x for x in X for a in levels):
            continue
        if not all(ic[(x, chain.zero, y)] == x for x in X for y in X):
            continue
        if not all(
            ic[(x, chain.one, y)] == ic[(y, chain.one, x)] for x in X for y in X
        ):
            continue
        if not all(
            ic[(ic[(x, a, y)], b, z)] == ic[(ic[(x, b, z)], a, y)]
            for x, y, z in itertools.product(X, repeat=3)
            for a, b in itertools.product(levels, repeat=2)
        ):
            continue
        if not all(
            ic[(x, a, ic[(y, b, z)])] == ic[(ic[(x, a, y)], min(a, b), z)]
            for x, y, z in itertools.product(X, repeat=3)
            for a, b in itertools.product(levels, repeat=2)
        ):
            continue
        found.append(ic)
    return found


def chain_model_convex(chain):
    """Combination x join (a meet y) on the chain's own levels."""
    carrier = FiniteSpace([str(lv.value) for lv in chain.levels])
    table = {}
    for x in carrier.elements:
        for a in chain.levels:
            for y in carrier.elements:
                table[(x, a, y)] = str(max(Fraction(x), min(a.value, Fraction(y))))
    return ConvexStructure(carrier, chain, table)


def mirror_dual(s):
    """Order dual: the same table read at complemented weights."""
    ci = {
        (x, complement(a), y): z for (x, a, y), z in s.ic.items()
    }
    return DualConvexStructure(s.carrier, s.chain, ci)


# frozen structure counts; the (|X|=2, k=2) entry is confirmed by brute force
STRUCTURE_COUNTS = {(1, 1): 1, (1, 2): 1, (2, 1): 2, (2, 2): 4, (3, 1): 9, (3, 2): 36}


def test_structure_count_matches_brute_force_on_two_points():
    oracle = brute_force_structures(X2, K2)
    assert len(oracle) == STRUCTURE_COUNTS[(2, 2)]
    enumerated = structures(X2, K2)
    assert {tuple(sorted(s.ic.items(), key=repr)) for s in enumerated} == {
        tuple(sorted(t.items(), key=repr)) for t in oracle
    }


def test_structure_counts_are_frozen():
    for (n, k), expected in STRUCTURE_COUNTS.items():
        space = FiniteSpace(["a", "b", "c"][:n])
        got = structures(space, Chain(k))
        assert len(got) == expected
        for s in got:
            assert check_ic_axioms(s) == []


def test_chain_model_satisfies_the_axioms():
    for k in (1, 2, 3):
        assert check_ic_axioms(chain_model_convex(Chain(k))) == []


def test_structure_map_worked_example_is_frozen():
    s = chain_model_convex(K2)
    d = PossibilityCapacity(
        s.carrier, K2, {"0": 1, "1/2": 0, "1": "1/2"}
    )
    # direct formula on the chain model: max over x of min(d(x), x)
    direct = max(
        min(d.density[x].value, Fraction(x)) for x in s.carrier.elements
    )
    assert direct == Fraction(1, 2)
    assert structure_map_from_ic(s, d) == "1/2"
    for p in enumerate_capacities(s.carrier, K2, "union"):
        expect = str(max(min(p.density[x].value, Fraction(x)) for x in s.carrier.elements))
        assert structure_map_from_ic(s, p) == expect


def test_structure_map_is_base_point_independent():
    for s in structures(X3, K2):
        for p in enumerate_capacities(X3, K2, "union"):
            tops = [x for x in X3.elements if p.density[x] == K2.one]
            results = {structure_map_from_ic(s, p, base_point=x) for x in tops}
            assert len(results) == 1
    with pytest.raises(ValidationError):
        structure_map_from_ic(
            chain_model_convex(K2),
            PossibilityCapacity(FiniteSpace(["0", "1/2", "1"]), K2, {"1": 1}),
            base_point="0",
        )


def test_table_roundtrip_recovers_every_structure():
    for space in (X2, X3):
        for k in (1, 2):
            for s in structures(space, Chain(k)):
                xi = UnionStructureMap.from_convex(s)
                assert ic_from_structure_map(xi).ic == s.ic


def test_map_roundtrip_recovers_every_algebra_table():
    for k in (1, 2):
        for xi in enumerate_union_algebras(X2, Chain(k)):
            back = UnionStructureMap.from_convex(ic_from_structure_map(xi))
            assert back.tabulate() == xi.tabulate()


def test_algebra_and_structure_enumerations_biject_on_two_points():
    # 2 algebras at k=1, 4 at k=2, matching the structure counts
    for k, expected in ((1, 2), (2, 4)):
        chain = Chain(k)
        tables = {
            tuple(sorted(xi.tabulate().items()))
            for xi in enumerate_union_algebras(X2, chain)
        }
        assert len(tables) == expected
        from_structures = {
            tuple(sorted(UnionStructureMap.from_convex(s).tabulate().items()))
            for s in structures(X2, chain)
        }
        assert tables == from_structures


def test_every_enumerated_structure_yields_a_lawful_algebra():
    for s in structures(X3, K2):
        assert check_algebra_laws(UnionStructureMap.from_convex(s)) == []


def test_broken_table_fails_the_algebra_laws():
    s = chain_model_convex(K2)
    table = UnionStructureMap.from_convex(s).tabulate()
    key = density_key(PossibilityCapacity(s.carrier, K2, {"0": 1}))
    table[key] = "1"  # xi(dirac at bottom) must be the bottom
    bad = UnionStructureMap.from_table(s.carrier, K2, table)
    problems = check_algebra_laws(bad)
    assert any(p.startswith("unit-law") for p in problems)


def test_nary_combination_is_the_structure_map_of_its_density():
    for s in structures(X3, K2):
        for coeffs in itertools.product(K2.levels, repeat=3):
            if max(coeffs) != K2.one:
                continue
            points = list(X3.elements)
            dens = {x: a for x, a in zip(points, coeffs)}
            expected = structure_map_from_ic(
                s, PossibilityCapacity(X3, K2, dens)
            )
            assert nary_combination(s, coeffs, points) == expected
            # order invariance, including which weight-1 entry comes first
            for perm in itertools.permutations(range(3)):
                shuffled = nary_combination(
                    s, [coeffs[i] for i in perm], [points[i] for i in perm]
                )
                assert shuffled == expected


def test_nary_combination_handles_repeats_and_rejects_bad_input():
    s = chain_model_convex(K2)
    # repeated points act through the max of their weights
    assert nary_combination(s, [1, "1/2", 1], ["0", "1", "0"]) == "1/2"
    with pytest.raises(ValidationError):
        nary_combination(s, [1, "1/2"], ["0"])
    with pytest.raises(ValidationError):
        nary_combination(s, ["1/2", "1/2"], ["0", "1"])
    with pytest.raises(ValidationError):
        nary_combination(s, [], [])


def test_affine_equivalence_on_all_self_maps_of_two_points():
    structures = list(enumerate_convex_structures(X2, K2))
    maps = [
        PointMap(X2, X2, dict(zip(X2.elements, images)))
        for images in itertools.product(X2.elements, repeat=2)
    ]
    for s1, s2 in itertools.product(structures, repeat=2):
        xi1 = UnionStructureMap.from_convex(s1)
        xi2 = UnionStructureMap.from_convex(s2)
        for f in maps:
            assert is_affine(f, s1, s2) == is_algebra_morphism(f, xi1, xi2)


def test_mirror_duals_satisfy_the_dual_axioms():
    count = 0
    for s in structures(X3, K2):
        assert check_ci_axioms(mirror_dual(s)) == []
        count += 1
    assert count == 36


def test_dual_map_recovers_the_dual_table():
    for s in structures(X3, K2):
        d = mirror_dual(s)
        for x in X3.elements:
            for a in K2.levels:
                for y in X3.elements:
                    cod = {e: K2.one for e in X3.elements}
                    cod[x] = K2.zero
                    if y != x:
                        cod[y] = min(cod[y], a)
                    got = dual_structure_map(
                        d, NecessityCapacity(X3, K2, cod), base_point=x
                    )
                    assert got == d.ci[(x, a, y)]


def test_dual_map_is_conjugate_to_the_structure_map():
    # evaluating the mirror on a necessity capacity is evaluating the
    # original on its conjugate possibility capacity
    for s in structures(X3, K2):
        d = mirror_dual(s)
        for n in enumerate_capacities(X3, K2, "intersection"):
            assert dual_structure_map(d, n) == structure_map_from_ic(s, kappa_dual(n))


def test_dual_map_is_base_point_independent():
    for s in structures(X3, K2):
        d = mirror_dual(s)
        for n in enumerate_capacities(X3, K2, "intersection"):
            bottoms = [x for x in X3.elements if n.codensity[x] == K2.zero]
            results = {dual_structure_map(d, n, base_point=x) for x in bottoms}
            assert len(results) == 1


def test_quotient_of_the_chain_model_has_three_classes():
    s = chain_model_convex(K2)
    q = quotient_semimodule(s)
    mod = q.semimodule
    assert check_semimodule_axioms(mod) == []
    assert len(mod.carrier) == 3
    i = q.embedding
    assert len({i(x) for x in s.carrier.elements}) == 3
    # the middle point is the top point scaled by 1/2
    assert mod.scale[(K2.level("1/2"), i("1"))] == i("1/2")
    assert mod.zero == i("0")
    # (x, 0) pairs all collapse into the zero class
    zero_fiber = q.fibers[mod.zero]
    assert all((x, K2.zero) in zero_fiber for x in s.carrier.elements)


def test_quotient_embedding_translates_combinations():
    for space in (X2, X3):
        for s in structures(space, K2):
            q = quotient_semimodule(s)
            mod, i = q.semimodule, q.embedding
            assert check_semimodule_axioms(mod) == []
            assert len({i(x) for x in space.elements}) == len(space)
            for x, y in itertools.product(space.elements, repeat=2):
                for a in K2.levels:
                    assert i(s.ic[(x, a, y)]) == mod.add[(i(x), mod.scale[(a, i(y))])]


def test_semimodule_validation():
    with pytest.raises(ValidationError):
        Semimodule(X2, K2, {}, {}, "a")
    add = {(x, y): "a" for x in X2.elements for y in X2.elements}
    scale = {(a, x): "a" for a in K2.levels for x in X2.elements}
    with pytest.raises(ValidationError):
        Semimodule(X2, K2, add, scale, "z")
    broken = Semimodule(X2, K2, add, scale, "b")  # b + zero = a, not b
    assert any(p.startswith("axiom-3") for p in check_semimodule_axioms(broken))


def test_structure_validation():
    with pytest.raises(ValidationError):
        ConvexStructure(X2, K2, {})
    s = chain_model_convex(K2)
    bad = dict(s.ic)
    bad[("0", K2.one, "1")] = "zzz"
    with pytest.raises(ValidationError):
        ConvexStructure(s.carrier, K2, bad)
    with pytest.raises(ValidationError):
        list(enumerate_convex_structures(FiniteSpace(list("abcd")), K2))
    with pytest.raises(ValidationError):
        list(enumerate_union_algebras(X3, K2))
