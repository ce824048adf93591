"""Capacities, their classes, and the capacity monad.

Counting and multiplication facts are frozen from independent oracles
defined at the top of this module: a brute-force enumeration of monotone
normalized set functions, and a literal descending-scan implementation
of the flattening formula.
"""

import itertools
import random
from fractions import Fraction

import pytest

from capalg.chain import Chain
from capalg.errors import (
    BudgetExceededError,
    CarrierMismatchError,
    ValidationError,
)
from capalg.spaces import (
    FiniteSpace,
    PointMap,
    enumerate_hyperspaces,
    g_map,
    g_mult,
    g_unit,
    hyperspace_space,
    random_hyperspace,
)
from capalg.capacity import (
    Capacity,
    MultView,
    NecessityCapacity,
    PossibilityCapacity,
    PushforwardView,
    SetFunction,
    as_capacity,
    as_necessity,
    as_possibility,
    canonical_key,
    capacity_equal,
    capacity_space,
    classify,
    dirac_density,
    embed_inclusion_hyperspace,
    enumerate_capacities,
    kappa_dual,
    mult,
    pushforward,
    random_capacity,
    unit_dirac,
    validate,
)

K2 = Chain(2)
X2 = FiniteSpace(["a", "b"])
X3 = FiniteSpace(["a", "b", "c"])


def brute_force_capacities(space, chain):
    """Independent oracle: every monotone subset assignment with c(X)=1."""
    subsets = [s for s in space.subsets()]
    found = []
    for values in itertools.product(chain.levels, repeat=len(subsets)):
        table = dict(zip(subsets, values))
        if table[space.universe] != chain.one:
            continue
        table[frozenset()] = chain.zero
        if all(
            table[s] <= table[t]
            for s in table
            for t in subsets
            if s <= t
        ):
            found.append(table)
    return found


def mult_oracle(outer, assignment, members):
    """Independent flattening oracle: descending first-hit scan at one subset."""
    chain = outer.chain
    members = frozenset(members)
    if not members:
        return chain.zero
    for alpha in reversed(chain.levels):
        if alpha == chain.zero:
            break
        hot = frozenset(
            n for n in outer.carrier.elements
            if assignment[n].value(members) >= alpha
        )
        if outer.value(hot) >= alpha:
            return alpha
    return chain.zero


# frozen counts, confirmed against brute_force_capacities below
CAPACITY_COUNTS = {(2, 2): 9, (3, 2): 129}
POSSIBILITY_COUNTS = {(2, 2): 5, (3, 2): 19}


def test_capacity_counts_match_brute_force_oracle():
    for space in (X2, X3):
        oracle = brute_force_capacities(space, K2)
        assert len(oracle) == CAPACITY_COUNTS[(len(space), 2)]
        enumerated = list(enumerate_capacities(space, K2))
        assert len(enumerated) == len(oracle)
        keys = {canonical_key(c) for c in enumerated}
        oracle_keys = {
            tuple(t[s].value for s in space.subsets()) for t in oracle
        }
        assert keys == oracle_keys


def test_class_counts_match_density_oracle():
    for space in (X2, X3):
        n, k = len(space), K2.k
        # densities with max 1: (k+1)^n - k^n; codensities dually
        expected = (k + 1) ** n - k ** n
        assert expected == POSSIBILITY_COUNTS[(n, k)]
        assert len(list(enumerate_capacities(space, K2, "union"))) == expected
        assert len(list(enumerate_capacities(space, K2, "intersection"))) == expected


def test_two_valued_capacities_are_exactly_the_hyperspaces():
    k1 = Chain(1)
    for space in (X2, X3):
        caps = list(enumerate_capacities(space, k1))
        hyper = enumerate_hyperspaces(space)
        assert len(caps) == len(hyper)
        embedded = {canonical_key(embed_inclusion_hyperspace(h, k1)) for h in hyper}
        assert embedded == {canonical_key(c) for c in caps}


def test_flattening_worked_example_is_frozen():
    inner_p = unit_dirac(X2, K2, "a")
    inner_q = Capacity(
        X2, K2,
        {frozenset(): 0, frozenset("a"): 0, frozenset("b"): "1/2", frozenset("ab"): 1},
    )
    names = FiniteSpace(["p", "q"])
    outer = Capacity(
        names, K2,
        {frozenset(): 0, frozenset("p"): 1, frozenset("q"): "1/2", frozenset("pq"): 1},
    )
    assignment = {"p": inner_p, "q": inner_q}
    flat = mult(outer, assignment)
    # frozen expected values, computed by mult_oracle
    assert flat.value(frozenset("a")).value == Fraction(1)
    assert flat.value(frozenset("b")).value == Fraction(1, 2)
    assert flat.value(frozenset("ab")).value == Fraction(1)
    for s in X2.subsets(include_empty=True):
        assert flat.value(s) == mult_oracle(outer, assignment, s)


def test_flattening_agrees_with_oracle_exhaustively():
    names = FiniteSpace(["p", "q"])
    outers = list(enumerate_capacities(names, K2))
    inners = list(enumerate_capacities(X2, K2))
    for outer in outers:
        for pair in itertools.product(inners, repeat=2):
            assignment = dict(zip(names.elements, pair))
            flat = mult(outer, assignment)
            for s in X2.subsets(include_empty=True):
                assert flat.value(s) == mult_oracle(outer, assignment, s)


def test_monad_unit_laws_exhaustively():
    names, lookup = capacity_space(X2, K2)
    for name, c in lookup.items():
        # flattening the Dirac at c gives c back
        assert capacity_equal(mult(unit_dirac(names, K2, name), lookup), c)
    eta = {x: unit_dirac(X2, K2, x) for x in X2.elements}
    for c in lookup.values():
        # assigning each point its Dirac gives c back
        assert capacity_equal(mult(c, eta), c)


def test_functor_identity_composition_and_class_preservation():
    ident = PointMap(X3, X3, {e: e for e in X3.elements})
    f = PointMap(X3, X2, {"a": "a", "b": "b", "c": "b"})
    g = PointMap(X2, X3, {"a": "c", "b": "a"})
    gf = PointMap(X3, X3, {x: g(f(x)) for x in X3.elements})
    for c in enumerate_capacities(X3, K2):
        assert capacity_equal(pushforward(ident, c), c)
        assert capacity_equal(
            pushforward(g, pushforward(f, c)), pushforward(gf, c)
        )
    for p in enumerate_capacities(X3, K2, "union"):
        pushed = pushforward(f, p)
        assert isinstance(pushed, PossibilityCapacity)
        assert capacity_equal(pushed, pushforward(f, as_capacity(p)))
    for n in enumerate_capacities(X3, K2, "intersection"):
        pushed = pushforward(f, n)
        assert isinstance(pushed, NecessityCapacity)
        assert capacity_equal(pushed, pushforward(f, as_capacity(n)))


def test_unit_is_natural():
    f = PointMap(X3, X2, {"a": "b", "b": "b", "c": "a"})
    for x in X3.elements:
        assert capacity_equal(
            pushforward(f, unit_dirac(X3, K2, x)), unit_dirac(X2, K2, f(x))
        )


def test_mult_is_natural_in_the_base():
    f = PointMap(X3, X2, {"a": "a", "b": "a", "c": "b"})
    rng = random.Random(5)
    for _ in range(60):
        m = rng.randint(1, 3)
        names = FiniteSpace([f"n{i}" for i in range(m)])
        assignment = {n: random_capacity(X3, K2, rng) for n in names.elements}
        outer = random_capacity(names, K2, rng)
        lifted = {n: pushforward(f, assignment[n]) for n in names.elements}
        assert capacity_equal(
            pushforward(f, mult(outer, assignment)), mult(outer, lifted)
        )


def test_classify_matches_all_pairs_oracle():
    for c in enumerate_capacities(X3, K2):
        subsets = list(X3.subsets(include_empty=True))
        union_ok = all(
            c.value(a | b) == max(c.value(a), c.value(b))
            for a, b in itertools.product(subsets, repeat=2)
        )
        inter_ok = all(
            c.value(a & b) == min(c.value(a), c.value(b))
            for a, b in itertools.product(subsets, repeat=2)
        )
        flags = classify(c)
        assert flags.is_union == union_ok
        assert flags.is_intersection == inter_ok


def test_class_conversions_round_trip_or_reject():
    for p in enumerate_capacities(X3, K2, "union"):
        again = as_possibility(as_capacity(p))
        assert again == p
    for n in enumerate_capacities(X3, K2, "intersection"):
        again = as_necessity(as_capacity(n))
        assert again == n
    lopsided = Capacity(
        X2, K2,
        {frozenset(): 0, frozenset("a"): 0, frozenset("b"): 0, frozenset("ab"): 1},
    )
    assert not classify(lopsided).is_union
    with pytest.raises(ValidationError):
        as_possibility(lopsided)


def test_conjugation_is_an_involution_swapping_classes():
    universe = X3.universe
    for c in enumerate_capacities(X3, K2):
        dual = kappa_dual(c)
        for s in X3.subsets(include_empty=True):
            assert dual.value(s).value == 1 - c.value(universe - s).value
        assert capacity_equal(kappa_dual(dual), c)
        flags, dual_flags = classify(c), classify(dual)
        assert flags.is_union == dual_flags.is_intersection
        assert flags.is_intersection == dual_flags.is_union
    for x in X3.elements:
        assert capacity_equal(kappa_dual(unit_dirac(X3, K2, x)), unit_dirac(X3, K2, x))


def test_conjugation_keeps_one_dimensional_forms():
    p = PossibilityCapacity(X3, K2, {"a": 1, "b": "1/2"})
    dual = kappa_dual(p)
    assert isinstance(dual, NecessityCapacity)
    assert dual.codensity == {
        "a": K2.zero, "b": K2.level("1/2"), "c": K2.one
    }
    assert capacity_equal(dual, kappa_dual(as_capacity(p)))
    back = kappa_dual(dual)
    assert isinstance(back, PossibilityCapacity)
    assert back == p


def test_partial_density_fills_zero_and_codensity_fills_one():
    p = PossibilityCapacity(X3, K2, {"b": 1})
    assert p.density["a"] == K2.zero and p.density["c"] == K2.zero
    n = NecessityCapacity(X3, K2, {"b": 0})
    assert n.codensity["a"] == K2.one and n.codensity["c"] == K2.one
    assert capacity_equal(p, unit_dirac(X3, K2, "b"))
    assert capacity_equal(n, unit_dirac(X3, K2, "b"))
    with pytest.raises(ValidationError):
        PossibilityCapacity(X3, K2, {"a": "1/2"})  # never attains 1
    with pytest.raises(ValidationError):
        NecessityCapacity(X3, K2, {"a": "1/2"})  # never attains 0


def test_validate_reports_defects():
    droop = SetFunction(
        X2, K2,
        {frozenset(): 0, frozenset("a"): 1, frozenset("b"): 0, frozenset("ab"): "1/2"},
    )
    problems = validate(droop, require_normalized=True)
    assert any("monotonicity" in p for p in problems)
    assert any("not-normalized" in p for p in problems)
    leaky = SetFunction(
        X2, K2,
        {frozenset(): "1/2", frozenset("a"): 1, frozenset("b"): 1, frozenset("ab"): 1},
    )
    assert any("empty-set" in p for p in validate(leaky))
    with pytest.raises(ValidationError):
        Capacity(X2, K2, dict(droop.table))
    assert validate(unit_dirac(X2, K2, "a"), require_normalized=True) == []


def test_pushforward_to_large_target_is_a_lazy_view():
    big = FiniteSpace([f"y{i}" for i in range(20)])
    f = PointMap(X3, big, {"a": "y0", "b": "y7", "c": "y7"})
    c = random_capacity(X3, K2, random.Random(3))
    view = pushforward(f, c)
    assert isinstance(view, PushforwardView)
    for s in (frozenset(["y0"]), frozenset(["y7"]), frozenset(["y0", "y7", "y12"])):
        assert view.value(s) == c.value(f.preimage(s))
    assert view.value(big.universe) == K2.one
    # density-backed inputs push to densities even at this size
    d = pushforward(f, dirac_density(X3, K2, "b"))
    assert isinstance(d, PossibilityCapacity)
    assert d.value(frozenset(["y7"])) == K2.one


def test_mult_on_large_base_is_a_lazy_view():
    big = FiniteSpace([f"y{i}" for i in range(18)])
    names = FiniteSpace(["p", "q"])
    assignment = {
        "p": PossibilityCapacity(big, K2, {"y0": 1, "y5": "1/2"}),
        "q": PossibilityCapacity(big, K2, {"y5": 1}),
    }
    outer = Capacity(
        names, K2,
        {frozenset(): 0, frozenset("p"): "1/2", frozenset("q"): "1/2", frozenset("pq"): 1},
    )
    view = mult(outer, assignment)
    assert isinstance(view, MultView)
    for s in (frozenset(["y0"]), frozenset(["y5"]), frozenset(["y0", "y5"]), frozenset(["y9"])):
        assert view.value(s) == mult_oracle(outer, assignment, s)


def test_mult_guard_applies_to_table_backed_outers_only():
    names, lookup = capacity_space(X2, K2)  # 9 names
    with pytest.raises(BudgetExceededError):
        mult(unit_dirac(names, K2, "c0"), lookup, max_carrier=4)
    # a density-backed outer over the same names is fine at any limit
    outer = dirac_density(names, K2, "c0")
    flat = mult(outer, lookup, max_carrier=4)
    assert capacity_equal(flat, lookup["c0"])


def test_mult_input_validation():
    names = FiniteSpace(["p", "q"])
    outer = unit_dirac(names, K2, "p")
    with pytest.raises(ValidationError):
        mult(outer, {"p": unit_dirac(X2, K2, "a")})  # q missing
    with pytest.raises(CarrierMismatchError):
        mult(outer, {"p": unit_dirac(X2, K2, "a"), "q": unit_dirac(X3, K2, "a")})
    with pytest.raises(ValidationError):
        mult(outer, {"p": unit_dirac(X2, K2, "a"), "q": unit_dirac(X2, Chain(3), "a")})


def test_hyperspace_embedding_is_injective_and_two_valued():
    seen = set()
    for h in enumerate_hyperspaces(X3):
        c = embed_inclusion_hyperspace(h, K2)
        assert validate(c, require_normalized=True) == []
        for s in X3.subsets():
            assert (c.value(s) == K2.one) == (s in h)
            assert c.value(s) in (K2.zero, K2.one)
        seen.add(canonical_key(c))
    assert len(seen) == 18


def test_hyperspace_embedding_commutes_with_unit_and_pushforward():
    f = PointMap(X3, X2, {"a": "b", "b": "a", "c": "b"})
    for x in X3.elements:
        assert capacity_equal(
            embed_inclusion_hyperspace(g_unit(X3, x), K2), unit_dirac(X3, K2, x)
        )
    for h in enumerate_hyperspaces(X3):
        assert capacity_equal(
            embed_inclusion_hyperspace(g_map(f, h), K2),
            pushforward(f, embed_inclusion_hyperspace(h, K2)),
        )


def test_hyperspace_embedding_commutes_with_flattening():
    names, lookup = hyperspace_space(X2)
    embedded = {n: embed_inclusion_hyperspace(h, K2) for n, h in lookup.items()}
    for outer in enumerate_hyperspaces(names):
        flat = g_mult(outer, lookup)
        flat_c = mult(embed_inclusion_hyperspace(outer, K2), embedded)
        assert capacity_equal(flat_c, embed_inclusion_hyperspace(flat, K2))
    rng = random.Random(17)
    for _ in range(50):
        m = rng.randint(1, 4)
        small = FiniteSpace([f"n{i}" for i in range(m)])
        assignment = {n: random_hyperspace(X3, rng) for n in small.elements}
        outer = random_hyperspace(small, rng)
        flat = g_mult(outer, assignment)
        flat_c = mult(
            embed_inclusion_hyperspace(outer, K2),
            {n: embed_inclusion_hyperspace(h, K2) for n, h in assignment.items()},
        )
        assert capacity_equal(flat_c, embed_inclusion_hyperspace(flat, K2))


def test_random_capacity_is_seeded_and_valid():
    a = random_capacity(X3, K2, random.Random(42))
    b = random_capacity(X3, K2, random.Random(42))
    assert capacity_equal(a, b)
    for seed in range(25):
        c = random_capacity(X3, K2, random.Random(seed))
        assert validate(c, require_normalized=True) == []


def test_enumeration_budget_guard():
    x5 = FiniteSpace(list("abcde"))
    with pytest.raises(BudgetExceededError):
        list(enumerate_capacities(x5, K2))
    # a raised budget admits the same space
    assert list(enumerate_capacities(x5, Chain(1), budget=256))
    with pytest.raises(ValidationError):
        list(enumerate_capacities(X2, K2, kind="weird"))
