"""Command-line front end: ``posetassoc <subcommand> ...``.

Exit status is 0 iff every requested identity verified; 2 for usage or input
errors; 3 when a desk-scale guardrail refused the job.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import asdict, dataclass, field
from math import factorial

from . import acceptance, graphs, identities, perms, polyalg, tubings
from .cache import CensusCache
from .poset import Poset, PosetError, build_poset, chain_failure, is_connected, parse_poset_text

log = logging.getLogger("posetassoc")

MAX_POSET = 9
MAX_SUM_N = 8


class Refused(Exception):
    pass


@dataclass
class VerificationReport:
    name: str
    parameters: dict = field(default_factory=dict)
    lhs: str = ""
    rhs: str = ""
    equal: bool = False
    elapsed: float = 0.0

    def to_text(self) -> str:
        params = " ".join(f"{k}={v}" for k, v in self.parameters.items())
        return "\n".join(
            [
                f"identity: {self.name}",
                f"parameters: {params}",
                f"lhs: {self.lhs}",
                f"rhs: {self.rhs}",
                f"equal: {str(self.equal).lower()}",
                f"elapsed: {self.elapsed:.4f}s",
            ]
        )


def _report(name, params, lhs, rhs, t0) -> VerificationReport:
    render = lambda p: p.render() if isinstance(p, polyalg.BiPoly) else p.render("x")
    return VerificationReport(
        name, params, render(lhs), render(rhs), lhs == rhs, time.perf_counter() - t0
    )


def _emit_reports(reports: list[VerificationReport], as_json: bool) -> int:
    ok = all(r.equal for r in reports)
    if as_json:
        print(json.dumps({"reports": [asdict(r) for r in reports], "all_equal": ok}, indent=2))
    else:
        print("\n\n".join(r.to_text() for r in reports))
    return 0 if ok else 1


def _guard_poset(p: Poset, force: bool):
    if p.n > MAX_POSET and not force:
        raise Refused(
            f"poset has {p.n} elements (> {MAX_POSET}); enumeration cost grows roughly like "
            f"({p.n}-1)! = {factorial(p.n - 1)} tubings. Pass --force to run anyway."
        )


def _guard_n(n: int, force: bool, what: str = "n"):
    if n > MAX_SUM_N and not force:
        n_parts = sum(1 for _ in polyalg.partitions(n))
        raise Refused(
            f"{what} = {n} (> {MAX_SUM_N}); sums range over {factorial(n)} permutations "
            f"({n_parts} cycle types) and stack-sorting filters scan S_{n}. "
            f"Pass --force to run anyway."
        )


def _load_poset(args) -> Poset:
    if args.build and args.poset:
        raise PosetError("give either --build or --poset, not both")
    if args.build:
        return build_poset(args.build)
    if args.poset:
        with open(args.poset) as fh:
            return parse_poset_text(fh.read())
    raise PosetError("a poset is required (--build EXPR or --poset FILE)")


def _format_tubing(t) -> str:
    tubes = sorted((tuple(sorted(x)) for x in t), key=lambda x: (len(x), x))
    return ",".join("{" + ",".join(map(str, x)) + "}" for x in tubes) or "{}"


def _cache(args) -> CensusCache:
    return CensusCache(args.cache_dir, enabled=not args.no_cache)


# --- subcommands -------------------------------------------------------------

def cmd_hvector(args) -> int:
    p = _load_poset(args)
    _guard_poset(p, args.force)
    if p.n < 2 or not is_connected(p):
        raise PosetError("poset must be connected with at least two elements")
    census = _cache(args).poset_census(p)
    f = tubings.f_polynomial(p, census)
    h = polyalg.f_to_h(f)
    gamma = polyalg.gamma_polynomial(h, p.n - 2)
    if args.json:
        print(json.dumps({
            "n": p.n,
            "covers": [list(c) for c in p.covers],
            "census": {str(k): v for k, v in census.items()},
            "f": f.render("t"),
            "h": h.render("t"),
            "gamma": gamma.render("t"),
        }, indent=2))
    else:
        print(f"poset: n={p.n} covers=" + ",".join(f"{a}<{b}" for a, b in p.covers))
        for k, c in census.items():
            print(f"k {k} {c}")
        print(f"f: {f.render('t')}")
        print(f"h: {h.render('t')}")
        print(f"gamma: {gamma.render('t')}")
    if args.list:
        for t in tubings.iter_tubings(p):
            print(_format_tubing(t))
    return 0


def _parse_elements(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as e:
        raise PosetError(f"bad element list {text!r}") from e


def cmd_verify_theorem(args) -> int:
    p = _load_poset(args)
    _guard_poset(p, args.force)
    S = _parse_elements(args.chain)
    why = chain_failure(p, S)
    if why:
        raise PosetError(f"precondition failed: {why}")
    _guard_n(len(S), args.force, "|S|")
    cache = _cache(args)
    t0 = time.perf_counter()
    lhs, rhs = identities.substitution_sides(p, S, cache.poset_census)
    report = _report(
        "substitution-theorem",
        {"covers": ",".join(f"{a}<{b}" for a, b in p.covers), "n": p.n, "S": ",".join(map(str, sorted(S)))},
        lhs, rhs, t0,
    )
    return _emit_reports([report], args.json)


def cmd_verify_prop(args) -> int:
    _guard_n(args.n, args.force)
    if args.n < 1:
        raise ValueError("n must be >= 1")
    which = ["eq2", "eq3"] if args.which == "both" else [args.which]
    reports = []
    for w in which:
        t0 = time.perf_counter()
        if w == "eq2":
            lhs, rhs = polyalg.eq2_lhs(args.n), polyalg.eq2_rhs(args.n)
        else:
            lhs, rhs = polyalg.eq3_lhs(args.n), polyalg.eq3_rhs(args.n)
        reports.append(_report(w, {"n": args.n}, lhs, rhs, t0))
    return _emit_reports(reports, args.json)


def cmd_verify_corollary(args) -> int:
    n, k = args.n, args.k
    if n is None:
        raise ValueError("--n is required")
    _guard_n(n + (k or 0), args.force, "n + k")
    reports = []
    t0 = time.perf_counter()
    if args.name == "final-prop":
        if k is None:
            raise ValueError("--k is required for final-prop")
        _guard_poset(identities.two_leg_broom(n, k), args.force)
        formula, tubing, descents = identities.two_leg_broom_sides(n, k, _cache(args).poset_census)
        reports.append(_report("final-prop:tubing", {"n": n, "k": k}, formula, tubing, t0))
        reports.append(_report("final-prop:descents", {"n": n, "k": k}, formula, descents, t0))
    elif args.name == "5.1":
        lhs, rhs = identities.narayana_via_eulerian(n)
        reports.append(_report("corollary-5.1", {"n": n}, lhs, rhs, t0))
    else:
        if k is None:
            raise ValueError(f"--k is required for {args.name}")
        lhs, rhs = identities.COROLLARIES[args.name](n, k)
        reports.append(_report(f"corollary-{args.name}", {"n": n, "k": k}, lhs, rhs, t0))
    return _emit_reports(reports, args.json)


def _census_lines(census) -> list[str]:
    return [f"k {k} {c}" for k, c in census.items()]


def cmd_enumerate(args) -> int:
    g = graphs.parse_graph_spec(args.graph)
    if g.n > 12 and not args.force:
        raise Refused(f"graph has {g.n} vertices (> 12); pass --force to run anyway")
    results = []
    if args.bottom_excluding:
        if g.is_union_of_paths():
            hosts = [g]
        elif g.is_union_of_cycles():
            w = tuple(g.out_edges(v)[0] for v in range(1, g.n + 1))
            hosts = graphs.dp_set_of_permutation(w)
        else:
            raise graphs.GraphError("--bottom-excluding needs a union of paths or of cycles")
        for h in hosts:
            results.append((h, graphs.count_bottom_excluding(h)))
    else:
        results.append((g, _cache(args).graph_census(g)))
    if args.json:
        print(json.dumps([
            {"graph": h.spec(), "census": {str(k): c for k, c in census.items()}}
            for h, census in results
        ], indent=2))
    else:
        for i, (h, census) in enumerate(results):
            if i:
                print()
            print("graph: " + h.spec())
            print("\n".join(_census_lines(census)))
            if args.list:
                for t in graphs.iter_graph_tubings(h):
                    if not args.bottom_excluding or graphs.is_bottom_excluding(h, t):
                        print(_format_tubing(t))
    return 0


def cmd_selftest(args) -> int:
    results = acceptance.run_all(echo=None if args.json else print)
    ok = all(r.passed for r in results)
    if args.json:
        print(json.dumps({"criteria": [asdict(r) for r in results], "all_passed": ok}, indent=2))
    else:
        print(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
    return 0 if ok else 1


# --- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="structured output")
    common.add_argument("--no-cache", action="store_true", help="always recompute censuses")
    common.add_argument("--cache-dir", default=None, help="override the census cache directory")
    common.add_argument("--force", action="store_true", help="skip desk-scale guardrails")
    common.add_argument("-v", "--verbose", action="store_true")

    poset_src = argparse.ArgumentParser(add_help=False)
    poset_src.add_argument("--build", help="builder expression, e.g. 'osum(chain:2,antichain:2)'")
    poset_src.add_argument("--poset", help="poset file ('n <count>' then 'a < b' lines)")

    parser = argparse.ArgumentParser(prog="posetassoc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hvector", parents=[common, poset_src], help="f/h/gamma of a poset associahedron")
    p.add_argument("--list", action="store_true", help="also print every tubing")
    p.set_defaults(func=cmd_hvector)

    p = sub.add_parser("verify-theorem", parents=[common, poset_src], help="check the substitution theorem")
    p.add_argument("--chain", required=True, help="comma-separated elements of the autonomous chain S")
    p.set_defaults(func=cmd_verify_theorem)

    p = sub.add_parser("verify-prop", parents=[common], help="check the bivariate identities")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--which", choices=["eq2", "eq3", "both"], default="both")
    p.set_defaults(func=cmd_verify_prop)

    p = sub.add_parser("verify-corollary", parents=[common], help="check a Narayana/Eulerian corollary")
    p.add_argument("--name", required=True, choices=sorted(identities.COROLLARIES) + ["final-prop"])
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.set_defaults(func=cmd_verify_corollary)

    p = sub.add_parser("enumerate", parents=[common], help="tubing census of a graph")
    p.add_argument("--graph", required=True, help="cycle:k, path:k, perm-cycles:<perm>, union:<a>+<b>")
    p.add_argument("--bottom-excluding", action="store_true")
    p.add_argument("--list", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance criteria")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except Refused as e:
        print(f"refused: {e}", file=sys.stderr)
        return 3
    except (PosetError, graphs.GraphError, perms.PermutationError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
