"""JSON round-trips and canonical bytes for every serialized form."""

import itertools
import json
import random

import pytest

from capalg.chain import Chain
from capalg.errors import ValidationError
from capalg.spaces import FiniteSpace, enumerate_hyperspaces
from capalg.capacity import (
    NecessityCapacity,
    PossibilityCapacity,
    capacity_equal,
    enumerate_capacities,
    random_capacity,
)
from capalg.convexity import (
    UnionStructureMap,
    enumerate_convex_structures,
    quotient_semimodule,
)
from capalg.biconvex import (
    CapacityStructureMap,
    chain_model,
    cube_structure,
    diamond_structure,
    embedding_search,
    enumerate_biconvex_structures,
    triple_from_biconvex,
)
from capalg.serial import (
    biconvex_from_json,
    biconvex_to_json,
    capacity_from_json,
    capacity_to_json,
    convex_from_json,
    convex_to_json,
    cube_from_json,
    cube_to_json,
    dual_convex_from_json,
    dual_convex_to_json,
    dumps_canonical,
    embedding_result_to_json,
    full_map_from_json,
    full_map_to_json,
    hyperspace_from_json,
    hyperspace_to_json,
    semimodule_from_json,
    semimodule_to_json,
    space_from_json,
    space_to_json,
    structure_from_json,
    subset_from_key,
    subset_to_key,
    triple_from_json,
    triple_to_json,
    union_map_from_json,
    union_map_to_json,
)

K2 = Chain(2)
X2 = FiniteSpace(["a", "b"])
X3 = FiniteSpace(["a", "b", "c"])


def test_space_and_subset_round_trip():
    assert space_from_json(space_to_json(X3)) == X3
    for s in X3.subsets(include_empty=True):
        assert subset_from_key(X3, subset_to_key(X3, s)) == s
    with pytest.raises(ValidationError):
        space_from_json({})
    with pytest.raises(ValidationError):
        subset_from_key(X3, "a,z")


def test_hyperspace_round_trip():
    for h in enumerate_hyperspaces(X3):
        assert hyperspace_from_json(hyperspace_to_json(h)) == h


def test_capacity_round_trip_keeps_the_representation():
    for c in enumerate_capacities(X3, K2):
        back = capacity_from_json(capacity_to_json(c))
        assert capacity_equal(back, c)
    p = PossibilityCapacity(X3, K2, {"a": 1, "b": "1/2"})
    back = capacity_from_json(capacity_to_json(p))
    assert isinstance(back, PossibilityCapacity) and back == p
    n = NecessityCapacity(X3, K2, {"c": 0})
    back = capacity_from_json(capacity_to_json(n))
    assert isinstance(back, NecessityCapacity) and back == n
    with pytest.raises(ValidationError):
        capacity_from_json({"elements": ["a"], "chain_k": 2})


def test_convex_structure_round_trip():
    for s in enumerate_convex_structures(X2, K2):
        assert convex_from_json(convex_to_json(s)) == s
        loaded = structure_from_json(convex_to_json(s))
        assert loaded == s


def test_dual_and_triple_and_biconvex_round_trips():
    for b in list(enumerate_biconvex_structures(X3, K2)) + [
        chain_model(K2), diamond_structure(K2)
    ]:
        assert biconvex_from_json(biconvex_to_json(b)) == b
        t = triple_from_biconvex(b)
        t2 = triple_from_json(triple_to_json(t))
        assert t2.p == t.p and t2.m == t.m and t2.bjoin == t.bjoin
    from capalg.convexity import DualConvexStructure
    s = next(iter(enumerate_convex_structures(X2, K2)))
    d = DualConvexStructure(
        X2, K2, {(x, a, y): s.ic[(x, a, y)] for (x, a, y) in s.ic}
    )
    assert dual_convex_from_json(dual_convex_to_json(d)) == d


def test_union_map_round_trip():
    for s in enumerate_convex_structures(X2, K2):
        xi = UnionStructureMap.from_convex(s)
        back = union_map_from_json(union_map_to_json(xi))
        assert back.tabulate() == xi.tabulate()
    with pytest.raises(ValidationError):
        union_map_from_json(
            {"elements": ["a", "b"], "chain_k": 2, "xi": {"1": "a"}}
        )


def test_semimodule_round_trip():
    s = next(iter(enumerate_convex_structures(X2, K2)))
    mod = quotient_semimodule(s).semimodule
    back = semimodule_from_json(semimodule_to_json(mod))
    assert back.add == mod.add and back.scale == mod.scale and back.zero == mod.zero


def test_cube_round_trip():
    phi = {K2.zero: K2.zero, K2.level("1/2"): K2.one, K2.one: K2.one}
    cube = cube_structure(K2, [phi, {a: a for a in K2.levels}])
    back = cube_from_json(cube_to_json(cube))
    assert back.structure == cube.structure
    assert back.phis == cube.phis
    with pytest.raises(ValidationError):
        cube_from_json({"chain_k": 2, "A": 3, "phi": [ {"0": "0", "1/2": "0", "1": "1"} ]})


def test_full_map_round_trip():
    b = chain_model(Chain(1))
    xi = CapacityStructureMap.from_biconvex(b)
    from capalg.capacity import canonical_key
    table = {
        canonical_key(c): xi(c) for c in enumerate_capacities(b.carrier, b.chain)
    }
    back = full_map_from_json(full_map_to_json(xi, table))
    for c in enumerate_capacities(b.carrier, b.chain):
        assert back(c) == xi(c)


def test_embedding_result_serializes_both_outcomes():
    hit = embedding_result_to_json(embedding_search(chain_model(K2), max_arity=1))
    assert hit["found"] and hit["arity"] == 1 and "assignment" in hit
    miss = embedding_result_to_json(embedding_search(diamond_structure(K2), max_arity=1))
    assert not miss["found"] and "assignment" not in miss
    assert miss["max_arity"] == 1


def test_dispatch_rejects_unknown_payloads():
    with pytest.raises(ValidationError):
        structure_from_json({"kind": "mystery"})


def test_reserved_delimiters_in_names_are_rejected():
    bad = FiniteSpace(["a|b", "c"])
    c = random_capacity(bad, K2, random.Random(0))
    with pytest.raises(ValidationError):
        capacity_to_json(c)
    comma = FiniteSpace(["a,b", "c"])
    with pytest.raises(ValidationError):
        capacity_to_json(random_capacity(comma, K2, random.Random(0)))


def test_canonical_dumps_are_stable_bytes():
    for b in enumerate_biconvex_structures(X3, K2):
        one = dumps_canonical(biconvex_to_json(b))
        two = dumps_canonical(biconvex_to_json(biconvex_from_json(json.loads(one))))
        assert one == two
    # same content through a parse cycle stays byte-identical
    s = next(iter(enumerate_convex_structures(X2, K2)))
    blob = dumps_canonical(convex_to_json(s))
    again = dumps_canonical(convex_to_json(convex_from_json(json.loads(blob))))
    assert blob == again
    assert blob.endswith("\n")


def test_levels_serialize_as_exact_fraction_strings():
    p = PossibilityCapacity(X2, K2, {"a": 1, "b": "1/2"})
    blob = capacity_to_json(p)
    assert blob["density"] == {"a": "1", "b": "1/2"}
    assert json.dumps(blob)  # plain JSON, no custom types
