"""Batch driver: load JSON inputs, run law suites and searches, emit reports.

The JSON report written to --out contains no timing data, so identical
configurations produce byte-identical files; wall-clock times appear only
in the human summary on standard output.  Exit codes: 0 all checks pass,
1 at least one law failure, 2 malformed input or an unsatisfiable
configuration.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass

from .biconvex import (
    BiconvexStructure,
    CapacityStructureMap,
    CubeStructure,
    TripleStructure,
    biconvex_from_triple,
    check_biconvex,
    check_triple,
    embedding_search,
    structure_map_full_dual,
    structure_map_necessity,
    structure_map_possibility,
    sugeno_form,
    triple_from_biconvex,
)
from .capacity import (
    NecessityCapacity,
    as_necessity,
    as_possibility,
    canonical_key,
    capacity_space,
    classify,
    enumerate_capacities,
    possibility_space,
    unit_dirac,
)
from .chain import make_chain
from .convexity import (
    ConvexStructure,
    DualConvexStructure,
    Semimodule,
    UnionStructureMap,
    check_algebra_laws,
    check_ci_axioms,
    check_ic_axioms,
    check_semimodule_axioms,
    dual_structure_map,
    ic_from_structure_map,
    structure_map_from_ic,
)
from .errors import CapalgError, LawViolationError
from .serial import (
    capacity_to_json,
    dumps_canonical,
    embedding_result_to_json,
    full_map_to_json,
    space_from_json,
    structure_from_json,
)
from .spaces import FiniteSpace
from .suites import (
    SuiteReport,
    capacity_monad_suite,
    g_monad_suite,
    _cap_witness,
)

COMMANDS = (
    "monad-laws",
    "algebra-laws",
    "roundtrip",
    "biconvex-laws",
    "full-xi",
    "embed-search",
    "enumerate",
)


@dataclass
class RunConfig:
    command: str
    space_path: str | None
    structure_path: str | None
    chain_k: int
    mode: str
    samples: int
    seed: int
    max_arity: int
    capacity_class: str
    out: str | None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="capalg",
        description="Law suites and searches for chain-valued capacity algebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--space", dest="space_path", default=None,
                       help="JSON file with {\"elements\": [...]}")
        p.add_argument("--structure", dest="structure_path", default=None,
                       help="JSON file with a serialized structure")
        p.add_argument("--chain", dest="chain_k", type=int, default=2,
                       help="chain resolution k (levels i/k)")
        p.add_argument("--mode", choices=("exhaustive", "random"),
                       default="exhaustive")
        p.add_argument("--samples", type=int, default=500)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--max-a", dest="max_arity", type=int, default=2,
                       help="largest coordinate count for embedding searches")
        p.add_argument("--capacity-class",
                       choices=("all", "union", "intersection"), default="all")
        p.add_argument("--out", default=None, help="path for the JSON report")
    return parser


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _load_space(cfg: RunConfig) -> FiniteSpace:
    if cfg.space_path is None:
        return FiniteSpace(["a", "b"])
    return space_from_json(_load_json(cfg.space_path))


def _load_structure(cfg: RunConfig):
    if cfg.structure_path is None:
        raise CapalgError(f"{cfg.command} needs --structure")
    loaded = structure_from_json(_load_json(cfg.structure_path))
    chain = getattr(loaded, "chain", None)
    if chain is None and isinstance(loaded, CubeStructure):
        chain = loaded.structure.chain
    return loaded, chain


def _diag_report(name: str, diagnostics: list[str], cases: int) -> SuiteReport:
    rep = SuiteReport(name)
    rep.cases = cases
    for d in diagnostics:
        rep.check(d.split(":")[0], False, d)
        rep.cases -= 1
    return rep


def _as_biconvex(loaded) -> BiconvexStructure:
    if isinstance(loaded, BiconvexStructure):
        return loaded
    if isinstance(loaded, TripleStructure):
        return biconvex_from_triple(loaded)
    if isinstance(loaded, CubeStructure):
        return loaded.structure
    raise CapalgError(
        "expected a lattice-with-actions structure (bjoin/bmeet/smeet/sjoin, "
        "p/m, or phi form)"
    )


def _run_monad_laws(cfg: RunConfig):
    space = _load_space(cfg)
    chain = make_chain(cfg.chain_k)
    reports = [
        g_monad_suite(space, cfg.mode, cfg.samples, cfg.seed),
        capacity_monad_suite(space, chain, cfg.samples, cfg.seed),
    ]
    return reports, {}


def _run_algebra_laws(cfg: RunConfig):
    loaded, _ = _load_structure(cfg)
    if isinstance(loaded, ConvexStructure):
        rep = SuiteReport("combination-axioms")
        for d in check_ic_axioms(loaded):
            rep.check(d.split(":")[0], False, d)
        rep.cases += 1
        law = SuiteReport("algebra-laws")
        for d in check_algebra_laws(UnionStructureMap.from_convex(loaded),
                                    samples=cfg.samples, seed=cfg.seed):
            law.check(d.split(":")[0], False, d)
        law.cases += 1
        return [rep, law], {}
    if isinstance(loaded, DualConvexStructure):
        rep = SuiteReport("dual-combination-axioms")
        for d in check_ci_axioms(loaded):
            rep.check(d.split(":")[0], False, d)
        rep.cases += 1
        return [rep], {}
    if isinstance(loaded, Semimodule):
        rep = SuiteReport("semimodule-axioms")
        for d in check_semimodule_axioms(loaded):
            rep.check(d.split(":")[0], False, d)
        rep.cases += 1
        return [rep], {}
    if isinstance(loaded, UnionStructureMap):
        rep = SuiteReport("algebra-laws")
        for d in check_algebra_laws(loaded, samples=cfg.samples, seed=cfg.seed):
            rep.check(d.split(":")[0], False, d)
        rep.cases += 1
        return [rep], {}
    b = _as_biconvex(loaded)
    rep = SuiteReport("biconvex-laws")
    for d in check_biconvex(b):
        rep.check(d.split(":")[0], False, d)
    rep.cases += 1
    rep.notes.append(
        "continuity requirements hold vacuously on finite discrete carriers"
    )
    return [rep], {}


def _run_roundtrip(cfg: RunConfig):
    loaded, chain = _load_structure(cfg)
    rep = SuiteReport("roundtrip")
    if isinstance(loaded, ConvexStructure):
        xi = UnionStructureMap.from_convex(loaded)
        rep.check(
            "table-roundtrip",
            ic_from_structure_map(xi).ic == loaded.ic,
            "ic -> map -> ic",
        )
        for p in possibility_space(loaded.carrier, chain)[1].values():
            points = [x for x in loaded.carrier.elements
                      if p.density[x] == chain.one]
            got = {structure_map_from_ic(loaded, p, x0) for x0 in points}
            rep.check("base-point-independence", len(got) == 1, _cap_witness(p))
    elif isinstance(loaded, UnionStructureMap):
        back = UnionStructureMap.from_convex(ic_from_structure_map(loaded))
        rep.check(
            "map-roundtrip",
            back.tabulate() == loaded.tabulate(),
            "map -> ic -> map",
        )
    elif isinstance(loaded, DualConvexStructure):
        ok = True
        for x in loaded.carrier.elements:
            for a in chain.levels:
                for y in loaded.carrier.elements:
                    cod = {z: chain.one for z in loaded.carrier.elements}
                    cod[x] = chain.zero
                    cod[y] = min(cod[y], a)
                    c = NecessityCapacity(loaded.carrier, chain, cod)
                    if dual_structure_map(loaded, c) != loaded.ci[(x, a, y)]:
                        ok = False
            rep.check("dual-table-roundtrip", ok, f"x={x}")
    else:
        b = _as_biconvex(loaded)
        t = triple_from_biconvex(b)
        rep.check("triple-laws", not check_triple(t), "quadruple -> triple")
        rep.check(
            "quadruple-roundtrip",
            biconvex_from_triple(t) == b,
            "quadruple -> triple -> quadruple",
        )
        if isinstance(loaded, TripleStructure):
            again = triple_from_biconvex(b)
            rep.check(
                "triple-roundtrip",
                again.p == loaded.p and again.m == loaded.m,
                "triple -> quadruple -> triple",
            )
    return [rep], {}


def _run_biconvex_laws(cfg: RunConfig):
    loaded, _ = _load_structure(cfg)
    reports = []
    if isinstance(loaded, TripleStructure):
        rep = SuiteReport("triple-laws")
        for d in check_triple(loaded):
            rep.check(d.split(":")[0], False, d)
        rep.cases += 1
        reports.append(rep)
        b = biconvex_from_triple(loaded)
    else:
        b = _as_biconvex(loaded)
    rep = SuiteReport("biconvex-laws")
    for d in check_biconvex(b):
        rep.check(d.split(":")[0], False, d)
    rep.cases += 1
    rep.notes.append(
        "continuity requirements hold vacuously on finite discrete carriers"
    )
    reports.append(rep)
    return reports, {}


def _run_full_xi(cfg: RunConfig):
    loaded, _ = _load_structure(cfg)
    b = _as_biconvex(loaded)
    rep = SuiteReport("full-structure-map")
    xi = CapacityStructureMap.from_biconvex(b)
    table = {}
    agreements = 0
    for c in capacity_space(b.carrier, b.chain)[1].values():
        wit = _cap_witness(c)
        try:
            value = xi(c)
            table[canonical_key(c)] = value
            rep.check(
                "factorizations-agree",
                value == structure_map_full_dual(b, c),
                wit,
            )
            flags = classify(c)
            if flags.is_union:
                rep.check(
                    "restricts-to-possibility-map",
                    value == structure_map_possibility(b, as_possibility(c)),
                    wit,
                )
            if flags.is_intersection:
                rep.check(
                    "restricts-to-necessity-map",
                    value == structure_map_necessity(b, as_necessity(c)),
                    wit,
                )
            if sugeno_form(b, c) == value:
                agreements += 1
        except LawViolationError as exc:
            rep.check("factorization", False, f"{wit}: {exc}")
    for x in b.carrier.elements:
        rep.check(
            "algebra-unit-law",
            xi(unit_dirac(b.carrier, b.chain, x)) == x,
            f"x={x}",
        )
    rep.counts["capacities"] = len(table)
    rep.counts["sugeno-agreements"] = agreements
    rep.notes.append(
        f"join-of-weighted-meets agrees on {agreements} of {len(table)} capacities"
    )
    return [rep], {"xi_full": full_map_to_json(xi, table)}


def _run_embed_search(cfg: RunConfig):
    loaded, _ = _load_structure(cfg)
    b = _as_biconvex(loaded)
    res = embedding_search(b, max_arity=cfg.max_arity)
    rep = SuiteReport("embedding-search")
    rep.cases = 1
    rep.counts["found"] = int(res.found)
    rep.counts["lawful-candidates"] = res.candidates
    if res.found:
        rep.counts["arity"] = res.arity
        rep.notes.append(f"embedding found with {res.arity} coordinates")
    else:
        rep.notes.append(
            f"no embedding with at most {res.max_arity} coordinates"
        )
    return [rep], {"embedding": embedding_result_to_json(res)}


def _run_enumerate(cfg: RunConfig):
    space = _load_space(cfg)
    chain = make_chain(cfg.chain_k)
    caps = list(enumerate_capacities(space, chain, cfg.capacity_class))
    rep = SuiteReport("enumerate-capacities")
    rep.cases = len(caps)
    rep.counts["count"] = len(caps)
    unions = sum(1 for c in caps if classify(c).is_union)
    inters = sum(1 for c in caps if classify(c).is_intersection)
    rep.counts["union"] = unions
    rep.counts["intersection"] = inters
    items = [capacity_to_json(c) for c in caps]
    return [rep], {"items": items}


_HANDLERS = {
    "monad-laws": _run_monad_laws,
    "algebra-laws": _run_algebra_laws,
    "roundtrip": _run_roundtrip,
    "biconvex-laws": _run_biconvex_laws,
    "full-xi": _run_full_xi,
    "embed-search": _run_embed_search,
    "enumerate": _run_enumerate,
}


def run(cfg: RunConfig, argv: list[str]) -> tuple[int, dict]:
    """Execute one command; returns (exit_code, report_payload)."""
    t0 = time.perf_counter()
    try:
        reports, payload = _HANDLERS[cfg.command](cfg)
    except LawViolationError as exc:
        # a law broke somewhere no handler expected: still a failure, not
        # a configuration problem
        rep = SuiteReport(cfg.command)
        rep.check("law-violation", False, str(exc))
        reports, payload = [rep], {}
    elapsed = time.perf_counter() - t0

    failed = sum(len(r.findings) for r in reports)
    cases = sum(r.cases for r in reports)
    witnesses = sorted(
        (
            {"suite": r.name, "law": f.law, "witness": f.witness}
            for r in reports
            for f in r.findings
        ),
        key=lambda w: (w["suite"], w["law"], w["witness"]),
    )
    report = {
        "command": argv,
        "verdict": "pass" if failed == 0 else "fail",
        "counts": {"cases": cases, "passed": cases - failed, "failed": failed},
        "witnesses": witnesses,
        "suites": [r.to_json() for r in reports],
    }
    report.update(payload)

    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(dumps_canonical(report))

    print(f"capalg {cfg.command}")
    for r in reports:
        print(f"  {r.name}: {r.cases} cases, {len(r.findings)} failures")
        for note in r.notes:
            print(f"    note: {note}")
    for w in witnesses[:10]:
        print(f"  FAIL {w['suite']}/{w['law']}: {w['witness'][:160]}")
    where = f" (report written to {cfg.out})" if cfg.out else ""
    print(f"verdict: {report['verdict']} in {elapsed:.2f}s{where}")
    return (0 if failed == 0 else 1), report


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        space_path=args.space_path,
        structure_path=args.structure_path,
        chain_k=args.chain_k,
        mode=args.mode,
        samples=args.samples,
        seed=args.seed,
        max_arity=args.max_arity,
        capacity_class=args.capacity_class,
        out=args.out,
    )
    if cfg.chain_k < 1:
        print("error: --chain must be a positive integer", file=sys.stderr)
        return 2
    if cfg.samples < 1:
        print("error: --samples must be a positive integer", file=sys.stderr)
        return 2
    try:
        code, _ = run(cfg, [cfg.command] + argv[1:])
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read input: {exc}", file=sys.stderr)
        return 2
    except (CapalgError, KeyError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return code


if __name__ == "__main__":
    raise SystemExit(main())
