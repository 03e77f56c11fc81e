"""Command-line driver: ``chainwarn <kind> [--config FILE | flags] [--out FILE]``.

Every run prints (or writes) a JSON report ``{kind, config, result, holds,
timing}``.  Exit status: 0 pass, 1 a bound was violated, 2 unknown kind,
3 bad parameters, 4 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import random
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Callable

from . import graphdiv, interp, mbound, sweeps, warning, zerosum
from .chainring import SubsetSpec, make_chain_ring
from .errors import BudgetExceeded, ConditionError, ConsistencyError
from .mpoly import parse_poly

EXIT_PASS, EXIT_VIOLATED, EXIT_BAD_KIND, EXIT_BAD_PARAMS, EXIT_BUDGET = 0, 1, 2, 3, 4


class BadParams(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_BAD_PARAMS)


# -- flag parsing helpers ------------------------------------------------------

def ints(text) -> list[int]:
    if isinstance(text, list):
        return [int(x) for x in text]
    return [int(x) for x in str(text).split(",") if x.strip()]


def int_sets(text) -> list[list[int]]:
    """``"0,1;0,1"`` -> [[0, 1], [0, 1]]."""
    if isinstance(text, list):
        return [ints(x) for x in text]
    return [ints(part) for part in str(text).split(";")]


def need(params: dict, *keys):
    missing = [k for k in keys if params.get(k) is None]
    if missing:
        raise BadParams(f"missing parameter(s): {', '.join(missing)}")


# -- kinds -------------------------------------------------------------------------

def run_mbound(params):
    need(params, "a")
    a = ints(params["a"])
    N = params.get("N")
    if N is None:
        return {"value": mbound.m_bound(a), "a": a}, None
    value, witness = mbound.m_bound_with_witness(a, int(N))
    return {"value": value, "witness": witness, "a": a, "N": int(N)}, None


def _system(params) -> warning.RestrictedSystem:
    need(params, "p", "A", "polys", "B")
    cfg = dict(params)
    for key in ("A", "B"):
        if isinstance(cfg[key], str):
            cfg[key] = int_sets(cfg[key])
    if isinstance(cfg["polys"], str):
        cfg["polys"] = cfg["polys"].split(";")
    if isinstance(cfg.get("vj"), str):
        cfg["vj"] = ints(cfg["vj"])
    return warning.RestrictedSystem.from_config(cfg)


def run_verify_main(params):
    sys_ = _system(params)
    budget = int(params.get("budget", warning.DEFAULT_BUDGET))
    report = warning.verify_main_theorem(sys_, budget)
    fat = warning.count_fat_target_nonvanishing(sys_, budget)
    result = report.as_dict()
    result["fat_target_count"] = fat
    result["bijection_holds"] = fat == report.count
    return result, report.holds and fat == report.count


def run_alon_furedi(params):
    need(params, "p", "A")
    ring = make_chain_ring(int(params["p"]), int(params.get("ell", 1)), int(params.get("v", 1)))
    grid = [SubsetSpec([ring.element(x) for x in A], ring) for A in int_sets(params["A"])]
    if params.get("y") is not None:
        y = ints(params["y"])
        f = warning.sharp_alon_furedi_instance(grid, y)
    else:
        need(params, "poly")
        f = parse_poly(params["poly"], ring, len(grid))
    report = warning.count_nonvanishing(f, grid, int(params.get("budget", warning.DEFAULT_BUDGET)))
    result = report.as_dict()
    result.update(poly=str(f), degree=f.total_degree())
    if params.get("y") is not None:
        expected = 1
        for yi in ints(params["y"]):
            expected *= yi
        result["expected_count"] = expected
        return result, report.holds and report.count == expected
    return result, report.holds


def run_afk_lemma(params):
    need(params, "p", "vj")
    res = warning.afk_lemma_sweep(int(params["p"]), int(params.get("ell", 1)), int(params["vj"]),
                                  int(params.get("max_t", 3)))
    return {"c": res.c, "checks": res.checks, "exceptions": [list(map(str, e)) for e in res.exceptions]}, \
        not res.exceptions


def _group(params) -> zerosum.PGroup:
    need(params, "group")
    return zerosum.PGroup.from_cyclic(ints(params["group"]))


def run_davenport(params):
    G = _group(params)
    D, witness = zerosum.davenport_with_witness(G)
    d = zerosum.little_d(G)
    return {"group": list(G.invariants), "D": D, "d": d, "witness": [list(w) for w in witness]}, D >= d


def _elements(G: zerosum.PGroup, text) -> list[tuple[int, ...]]:
    """Group elements separated by ``;``, coordinates by ``,``; a bare 0 is the identity."""
    out = []
    for x in int_sets(text):
        out.append(G.zero if x == [0] else G.reduce(x))
    return out


def run_fat_davenport(params):
    G = _group(params)
    A = ints(params.get("A", "0,1"))
    B = _elements(G, params.get("B", "0"))
    D = zerosum.fat_davenport(G, A, B)
    return {"group": list(G.invariants), "A": A, "B": [list(b) for b in B], "D": D}, None


def _sequence(params, G) -> zerosum.GSequence:
    need(params, "seq")
    return zerosum.GSequence(G, [tuple(x) for x in int_sets(params["seq"])])


def run_nweighted(params):
    G = _group(params)
    g = _sequence(params, G)
    A = ints(params.get("A", "0,1"))
    result = {}
    holds = None
    if params.get("Bj") is not None:
        report = zerosum.verify_fat_bound(g, A, int_sets(params["Bj"]))
        result.update(report.as_dict())
        holds = report.holds
    else:
        B = _elements(G, params.get("B", "0"))
        result["count"] = zerosum.count_weighted_sums(g, A, B, bool(params.get("exclude_empty")))
    return result, holds


def run_egz(params):
    G = _group(params)
    g = _sequence(params, G)
    A = ints(params.get("A", "0,1"))
    Bj = int_sets(params.get("Bj", ";".join("0" * G.rank)))
    report = zerosum.egz_count(g, A, Bj, int(params.get("k", 1)))
    return report.as_dict(), report.holds


def run_hypergraph(params):
    need(params, "sets", "m")
    H = graphdiv.Hypergraph(tuple(frozenset(s) for s in int_sets(params["sets"])))
    report = graphdiv.hypergraph_count(H, int(params["m"]), ints(params.get("B", "0")))
    out = report.as_dict()
    out.update(length=H.length, max_degree=H.max_degree())
    return out, report.holds


def run_schmitt(params):
    need(params, "b", "d", "m", "a")
    b, d, m, a = (int(params[k]) for k in ("b", "d", "m", "a"))
    H, B = graphdiv.schmitt_construction(b, d, m, a)
    report = graphdiv.hypergraph_count(H, m, B)
    out = report.as_dict()
    out.update(length=H.length, B=B, atomic=report.nonempty_count == 0)
    return out, report.nonempty_count == 0 and report.holds is not False


def run_divisible(params):
    need(params, "graph", "q")
    G = graphdiv.MultiGraph.parse(params["graph"], int(params["r"]) if params.get("r") else None,
                                  params.get("loops", graphdiv.TOPOLOGIST))
    q = ints(params["q"])
    if len(q) == 1:
        q = q * G.r
    spec = graphdiv.DivisibilitySpec(tuple(q), tuple(ints(params["g"])) if params.get("g") else None,
                                     ints(params["weights"]) if params.get("weights") else None,
                                     tuple(int_sets(params["targets"])) if params.get("targets") else None)
    count = graphdiv.count_divisible_subgraphs(G, spec)
    data = graphdiv.incidence_sequence(G, spec)
    return {"count": count, "edges": G.n, "parity_subgroup": data.parity_ok,
            "columns": [list(x) for x in data.sequence.terms]}, None


def run_atomic_search(params):
    need(params, "r", "q", "n")
    G = graphdiv.search_atomic_graph(int(params["r"]), int(params["q"]), int(params["n"]))
    return {"graph": None if G is None else str(G)}, None


def run_script_e(params):
    need(params, "r", "q")
    r, q = int(params["r"]), int(params["q"])
    return {"E": graphdiv.script_E(r, q), "d": zerosum.little_d(graphdiv.graph_group(r, q))}, None


def run_interp(params):
    P = interp.InterpolationProblem.from_config(params)
    report = interp.interp_count(P)
    out = report.as_dict()
    if all(P.ring.zero in a for a in P.coeff_sets) and all(P.ring.zero in b for b in P.targets):
        c = interp.find_nonzero_interpolant(P)
        out["nonzero_interpolant"] = None if c is None else [str(x) for x in c]
    return out, report.holds


def _tz_targets(text) -> dict:
    if isinstance(text, dict):
        return {int(k): ints(v) for k, v in text.items()}
    out = {}
    for part in str(text).split(";"):
        key, vals = part.split(":")
        out[int(key)] = ints(vals)
    return out


def run_troi_zannier(params):
    need(params, "q", "B")
    res = interp.troi_zannier(int(params["q"]), _tz_targets(params["B"]))
    return res.as_dict(), res.criterion_holds


def _main_instance(cfg):
    s = warning.RestrictedSystem.from_config(cfg)
    report = warning.verify_main_theorem(s)
    fat = warning.count_fat_target_nonvanishing(s)
    return report.holds and fat == report.count, {"count": report.count, "bound": report.bound,
                                                  "fat_target_count": fat}


def _mbound_instance(cfg):
    a, N = cfg["a"], cfg["N"]
    return mbound.m_bound(a, N) == mbound.m_bound_bruteforce(a, N), {}


SWEEP_SUITES: dict[str, Callable] = {"main": _main_instance, "mbound": _mbound_instance}


def _sweep_instances(params) -> list[dict]:
    suite = params.get("suite", "main")
    if suite == "mbound":
        max_n, max_a = int(params.get("max_n", 4)), int(params.get("max_a", 4))
        out = []
        for n in range(1, max_n + 1):
            for a in itertools.product(range(1, max_a + 1), repeat=n):
                out.extend({"a": list(a), "N": N} for N in range(1, sum(a) + 1))
        return out
    if suite == "main":
        rings = [tuple(r) for r in params.get("rings", sweeps.SWEEP_RINGS)]
        if "p" in params:
            ps = ints(params["p"])
            vs = ints(params.get("v", "1,2"))
            ells = ints(params.get("ell", "1"))
            rings = [r for r in rings if r[0] in ps and r[1] in ells and r[2] in vs]
        count = int(params.get("count", 100))
        if not rings or count <= 0:
            return []
        rng = random.Random(int(params.get("seed", 0)))
        return [sweeps.random_system(rng, rings=rings, max_n=int(params.get("max_n", 3)),
                                     max_r=int(params.get("max_r", 2)),
                                     max_deg=int(params.get("max_deg", 2))).to_config()
                for _ in range(count)]
    raise BadParams(f"unknown sweep suite {suite!r}")


def _run_one(args):
    suite, key, cfg = args
    ok, extra = SWEEP_SUITES[suite](cfg)
    return key, ok, extra


def run_sweep(params):
    suite = params.get("suite", "main")
    if suite not in SWEEP_SUITES:
        raise BadParams(f"unknown sweep suite {suite!r}")
    instances = _sweep_instances(params)
    jobs = [(suite, i, cfg) for i, cfg in enumerate(instances)]
    workers = int(params.get("workers", 1))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_run_one, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        results = [_run_one(j) for j in jobs]
    results.sort(key=lambda r: r[0])
    failures = [{"instance": key, "config": instances[key], **extra} for key, ok, extra in results if not ok]
    return {"suite": suite, "instances": len(instances), "passed": len(instances) - len(failures),
            "failed": len(failures), "failures": failures}, not failures


KINDS: dict[str, Callable] = {
    "mbound": run_mbound,
    "verify-main": run_verify_main,
    "alon-furedi": run_alon_furedi,
    "afk-lemma": run_afk_lemma,
    "davenport": run_davenport,
    "fat-davenport": run_fat_davenport,
    "nweighted": run_nweighted,
    "egz": run_egz,
    "hypergraph": run_hypergraph,
    "schmitt": run_schmitt,
    "divisible": run_divisible,
    "atomic-search": run_atomic_search,
    "script-e": run_script_e,
    "interp": run_interp,
    "troi-zannier": run_troi_zannier,
    "sweep": run_sweep,
}

# flag name -> params key; every kind accepts every flag and ignores the unused ones
FLAGS = ["a", "N", "p", "ell", "v", "A", "B", "Bj", "polys", "poly", "vj", "y", "max-t", "group",
         "seq", "k", "sets", "m", "b", "d", "graph", "q", "g", "r", "n", "loops", "weights",
         "targets", "suite", "count", "max-n", "max-a", "max-r", "max-deg", "rings"]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chainwarn", description=__doc__.splitlines()[0])
    parser.add_argument("kind")
    parser.add_argument("--config", help="JSON file with the parameters")
    parser.add_argument("--out", help="write the JSON report here instead of stdout")
    parser.add_argument("--csv", help="also write the result as a CSV table")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--budget", type=int)
    parser.add_argument("--exclude-empty", action="store_true")
    for flag in FLAGS:
        parser.add_argument(f"--{flag}", dest=flag.replace("-", "_"))
    return parser


def run(kind: str, params: dict) -> dict:
    """Dispatch one experiment and return the report (without timing)."""
    if kind not in KINDS:
        raise KeyError(kind)
    result, holds = KINDS[kind](params)
    return {"kind": kind, "config": params, "result": result, "holds": holds}


def _write_csv(path: str, report: dict):
    result = report["result"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        if report["kind"] == "sweep":
            w.writerow(["instance", "config"])
            for f in result["failures"]:
                w.writerow([f["instance"], json.dumps(f["config"], sort_keys=True)])
        else:
            w.writerow(["key", "value"])
            for k in sorted(result):
                v = result[k]
                w.writerow([k, v if isinstance(v, (int, str, type(None))) else json.dumps(v)])


def _glue_negative_values(argv: list[str]) -> list[str]:
    """``--A -1,0,1`` -> ``--A=-1,0,1`` so argparse does not take the value for a flag."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if (tok.startswith("--") and "=" not in tok and i + 1 < len(argv)
                and re.match(r"^-\d", argv[i + 1])):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    if argv and not argv[0].startswith("-") and argv[0] not in KINDS:
        print(f"chainwarn: unknown kind {argv[0]!r}; choose from {', '.join(KINDS)}", file=sys.stderr)
        return EXIT_BAD_KIND
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    params = {}
    if args.config:
        try:
            with open(args.config) as fh:
                params = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"chainwarn: cannot read config: {exc}", file=sys.stderr)
            return EXIT_BAD_PARAMS
        params.pop("kind", None)
    for flag in FLAGS:
        val = getattr(args, flag.replace("-", "_"))
        if val is not None:
            params[flag.replace("-", "_")] = val
    if args.seed is not None:
        params["seed"] = args.seed
    if args.budget is not None:
        params["budget"] = args.budget
    if args.exclude_empty:
        params["exclude_empty"] = True
    if args.workers > 1:
        params["workers"] = args.workers
    start = time.perf_counter()
    try:
        report = run(args.kind, params)
    except BudgetExceeded as exc:
        print(f"chainwarn: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ConsistencyError as exc:
        print(f"chainwarn: independent counts disagree: {exc}", file=sys.stderr)
        return EXIT_VIOLATED
    except (BadParams, ConditionError, ValueError, KeyError, TypeError) as exc:
        print(f"chainwarn: bad parameters: {exc}", file=sys.stderr)
        return EXIT_BAD_PARAMS
    # the worker count changes scheduling only, so it stays out of the echoed config
    report["config"] = {k: v for k, v in params.items() if k != "workers"}
    report["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    text = json.dumps(report, sort_keys=True, indent=2, default=str)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if args.csv:
        _write_csv(args.csv, report)
    return EXIT_VIOLATED if report["holds"] is False else EXIT_PASS


if __name__ == "__main__":
    raise SystemExit(main())
