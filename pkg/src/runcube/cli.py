"""Command-line entry point: ``runcube <subcommand> ...``.

Exit codes: 0 success, 1 a verification failed, 2 usage or capacity error.
``FINDING:`` lines report conjecture checks and never change the exit code;
``FAIL:`` lines do.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field

from . import analysis, graph, hamilton, series, strings, structure
from .errors import CapacityError, RuncubeError
from .strings import Family

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# per-subcommand capacity on n
CAPS = {
    "stats": graph.MAX_GRAPH_N,
    "diameter": graph.MAX_GRAPH_N,
    "degrees": 24,
    "cubes": structure.CENSUS_MAX_N,
    "hamilton": 16,
    "export": 20,
    "verify": 24,
}


class UsageError(Exception):
    pass


def parse_range(text: str) -> list[int]:
    """``"5"`` -> [5]; ``"1..6"`` -> [1, ..., 6]."""
    try:
        if ".." in text:
            lo, hi = (int(p) for p in text.split("..", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad n or range: {text!r}") from None
    if lo < 0 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad n or range: {text!r}")
    return list(range(lo, hi + 1))


def _check_cap(cmd: str, ns: list[int], low: int = 0) -> None:
    cap = CAPS[cmd]
    if ns[0] < low or ns[-1] > cap:
        raise UsageError(f"{cmd}: n must lie in [{low}, {cap}]")


@dataclass
class Report:
    """Collects PASS/FAIL/FINDING lines for one run."""

    out: io.TextIOBase
    failures: int = 0
    lines: list[str] = field(default_factory=list)

    def check(self, ok: bool, what: str) -> bool:
        self._emit(("PASS: " if ok else "FAIL: ") + what)
        if not ok:
            self.failures += 1
        return ok

    def finding(self, what: str) -> None:
        self._emit("FINDING: " + what)

    def info(self, what: str) -> None:
        self._emit(what)

    def _emit(self, line: str) -> None:
        self.lines.append(line)
        print(line, file=self.out)

    @property
    def status(self) -> int:
        return EXIT_FAIL if self.failures else EXIT_OK


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def cmd_stats(args) -> int:
    _check_cap("stats", args.n)
    fam = Family.parse(args.family)
    rows, bad = [], 0
    for n in args.n:
        g = graph.build_graph(fam, n)
        if fam is Family.RUN:
            closed = graph.edge_count_closed_form(n) if n else 0
        else:
            closed = graph.fibcube_edge_count(n)
        even = int((g.weights % 2 == 0).sum())
        nv = g.num_vertices
        adeg = 2 * g.edge_count / nv
        rows.append(
            {
                "n": n,
                "vertices": nv,
                "edges": g.edge_count,
                "closed_form_edges": closed,
                "avg_degree": round(adeg, 6),
                "delta": even - (nv - even),
            }
        )
        bad += g.edge_count != closed
    _write_rows(rows, args.format)
    for r in rows:
        if r["edges"] != r["closed_form_edges"]:
            print(f"FAIL: n={r['n']} edges {r['edges']} != closed form {r['closed_form_edges']}", file=sys.stderr)
    return EXIT_FAIL if bad else EXIT_OK


def _write_rows(rows: list[dict], fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(rows, indent=2))
        return
    if fmt == "csv":
        w = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return
    keys = list(rows[0])
    widths = [max(len(k), *(len(str(r[k])) for r in rows)) for k in keys]
    print("  ".join(k.rjust(w) for k, w in zip(keys, widths)))
    for r in rows:
        print("  ".join(str(r[k]).rjust(w) for k, w in zip(keys, widths)))


def _verify_strings(rep: Report, n_max: int) -> None:
    cap = min(n_max, 20)
    ok = all(
        (strings.enumerate_vertices(Family.RUN, n) == strings.enumerate_vertices_oracle(Family.RUN, n)).all()
        and len(strings.enumerate_vertices(Family.RUN, n)) == series.fib(n + 2)
        for n in range(cap + 1)
    )
    rep.check(ok, f"strings: recursive enumeration equals filter and |V(R_n)| = f(n+2), n <= {cap}")
    ok = True
    for n in range(1, cap + 1):
        w = graph.build_graph(Family.RUN, n).weights
        for k in range(n + 1):
            ok &= int((w == k).sum()) == strings.count_by_weight(n, k)
    rep.check(ok, f"strings: vertices of weight w number C(n-w+1, w), n <= {cap}")
    cap = min(n_max, 16)
    ok = True
    for n in range(cap + 1):
        fibs = strings.vertex_strings(Family.FIBCUBE, n)
        image = [strings.phi(s) for s in fibs]
        ok &= sorted(image) == strings.vertex_strings(Family.RUN, n)
        ok &= all(s.count("1") == t.count("1") for s, t in zip(fibs, image))
    rep.check(ok, f"strings: phi is a weight-preserving bijection, n <= {cap}")


def _verify_graph(rep: Report, n_max: int) -> None:
    cap = min(n_max, 20)
    counts = {n: graph.build_graph(Family.RUN, n).edge_count for n in range(1, cap + 1)}
    ok = all(counts[n] == graph.edge_count_closed_form(n) for n in counts)
    rep.check(ok, f"graph: brute-force edge counts equal the closed form, n <= {cap}")
    rep.check(graph.edge_recursion_check(cap, counts).ok, f"graph: edge recursion holds, n <= {cap}")
    cap = min(n_max, 16)
    ok = True
    for n in range(1, cap + 1):
        try:
            rep_n = graph.decompose(graph.build_graph(Family.RUN, n))
            ok &= rep_n.edge_count == counts.get(n, rep_n.edge_count)
        except RuncubeError as exc:
            rep.info(f"  decomposition n={n}: {exc}")
            ok = False
    rep.check(ok, f"graph: fundamental decomposition audits, n <= {cap}")
    cap = min(n_max, 4)
    ok = all(
        graph.is_isomorphic_small(graph.build_graph(Family.RUN, n), graph.build_graph(Family.FIBCUBE, n))
        for n in range(1, cap + 1)
    )
    rep.check(ok, f"graph: R_n isomorphic to Gamma_n for 1 <= n <= {cap}")


def _verify_series(rep: Report, n_max: int) -> None:
    cap = min(n_max, 20)
    down, up = series.gf_down_degree(cap), series.gf_up_degree(cap)
    ok_d = ok_u = True
    for n in range(1, cap + 1):
        prof = analysis.degree_profile(graph.build_graph(Family.RUN, n))
        ok_d &= prof.down_enumerator == down[n].specialize_second(1)
        ok_u &= prof.up_enumerator == up[n].specialize_second(1)
    rep.check(ok_d, f"series: down-degree enumerators equal their generating function, n <= {cap}")
    rep.check(ok_u, f"series: up-degree enumerators equal their generating function, n <= {cap}")


def _verify_structure(rep: Report, n_max: int) -> None:
    cap = min(n_max, 10)
    flags = {n: structure.is_partial_cube(graph.build_graph(Family.RUN, n)).is_partial_cube for n in range(1, cap + 1)}
    rep.check(all(flags[n] == (n <= 6) for n in flags), f"structure: partial cube exactly for n <= 6 (checked n <= {cap})")
    true_to = max((n for n in flags if flags[n]), default=0)
    rep.info(f"  partial cube: true for n <= {true_to}" + (f", false for {true_to + 1} <= n <= {cap}" if cap > true_to else ""))
    cap = min(n_max, 8)
    flags = {n: structure.is_median_graph(graph.build_graph(Family.RUN, n)).is_median for n in range(1, cap + 1)}
    rep.check(all(flags[n] == (n <= 4) for n in flags), f"structure: median graph exactly for n <= 4 (checked n <= {cap})")
    cap = min(n_max, 12)
    gf = series.gf_cube_census(cap)
    ok_dim = ok_slack = True
    mismatch = []
    for n in range(1, cap + 1):
        c = structure.cube_census(graph.build_graph(Family.RUN, n))
        ok_slack &= c.slack_polynomial() == gf[n]
        ok_dim &= c.polynomial().specialize_first(1) == gf[n].specialize_first(1)
        if c.polynomial() != gf[n]:
            mismatch.append(n)
    rep.check(ok_dim, f"structure: subcube counts per dimension match the census generating function, n <= {cap}")
    rep.check(ok_slack, f"structure: census keyed by down-degree slack matches the generating function, n <= {cap}")
    if mismatch:
        rep.finding(f"census keyed by distance to 0^n differs from the generating function at n = {mismatch}")
    cap = min(n_max, 14)
    ok, equal = True, []
    for n in range(1, cap + 1):
        g = graph.build_graph(Family.RUN, n)
        alpha = structure.independence_number(g)
        half = -(-g.num_vertices // 2)
        ok &= alpha >= half
        equal.append(alpha == half)
    rep.check(ok, f"structure: independence number >= ceil(|V|/2), n <= {cap}")
    rep.finding(f"independence number equals ceil(|V|/2) for all n <= {cap}: {all(equal)}")


def _verify_analysis(rep: Report, n_max: int) -> None:
    ok = all(analysis.parity_imbalance(n) == analysis.parity_imbalance_formula(n) for n in range(1, 1001))
    ok &= all(
        analysis.parity_imbalance_enumerated(n) == analysis.parity_imbalance_formula(n)
        for n in range(1, min(n_max, 20) + 1)
    )
    rep.check(ok, "analysis: parity imbalance case formula")
    cap = min(n_max, 16)
    ok, off = True, []
    for n in range(1, cap + 1):
        g = graph.build_graph(Family.RUN, n)
        d = analysis.exact_diameter(g).diameter
        pair = analysis.diameter_witness_pair(n)
        ok &= d > analysis.diameter_lower_bound(n) and analysis.check_witness(pair) and d >= pair.claimed_distance
        if d != analysis.conjectured_diameter(n):
            off.append(n)
    rep.check(ok, f"analysis: diameter exceeds n - sqrt(2n) and witness pairs hold, n <= {cap}")
    rep.finding(
        f"diameter conjecture agrees for all n <= {cap}" if not off else f"diameter conjecture disagrees at n = {off}"
    )


def cmd_verify(args) -> int:
    if args.n_max < 1 or args.n_max > CAPS["verify"]:
        raise UsageError(f"verify: --n-max must lie in [1, {CAPS['verify']}]")
    rep = Report(sys.stdout)
    for suite in (_verify_strings, _verify_graph, _verify_series, _verify_structure, _verify_analysis):
        suite(rep, args.n_max)
    rep.info(f"{rep.failures} failure(s)")
    return rep.status


def cmd_diameter(args) -> int:
    _check_cap("diameter", args.n, low=1)
    print("n,exact,conjectured,lower_bound")
    off = []
    for n in args.n:
        g = graph.build_graph(Family.RUN, n)
        res = analysis.exact_diameter(g, workers=args.workers)
        conj = analysis.conjectured_diameter(n)
        print(f"{n},{res.diameter},{conj},{analysis.diameter_lower_bound(n):.6f}", flush=True)
        if res.diameter != conj:
            off.append(n)
    msg = "conjectured diameter matches at every n in range" if not off else f"conjectured diameter differs at n = {off}"
    print("FINDING: " + msg, file=sys.stderr)
    return EXIT_OK


def cmd_degrees(args) -> int:
    _check_cap("degrees", args.n, low=1)
    fam = Family.parse(args.family)
    top = args.n[-1]
    down = series.gf_down_degree(top) if fam is Family.RUN else None
    up = series.gf_up_degree(top) if fam is Family.RUN else None
    rows, bad = [], 0
    for n in args.n:
        prof = analysis.degree_profile(graph.build_graph(fam, n))
        row = {
            "n": n,
            "down": _fmt_uni(prof.down_enumerator, "d"),
            "up": _fmt_uni(prof.up_enumerator, "u"),
            "degree": _fmt_uni(prof.degree_enumerator, "x"),
        }
        if down is not None:
            match = prof.down_enumerator == down[n].specialize_second(1) and prof.up_enumerator == up[n].specialize_second(1)
            row["matches_gf"] = match
            bad += not match
        rows.append(row)
    if args.format == "json":
        print(json.dumps(rows, indent=2))
    else:
        for r in rows:
            tail = "" if "matches_gf" not in r else ("  [gf ok]" if r["matches_gf"] else "  [gf MISMATCH]")
            print(f"n={r['n']}: down {r['down']} | up {r['up']} | degree {r['degree']}{tail}")
    return EXIT_FAIL if bad else EXIT_OK


def _fmt_uni(p: series.IntPoly, var: str) -> str:
    return series.BiPoly.from_intpoly(p).format((var, "_"))


def cmd_cubes(args) -> int:
    _check_cap("cubes", args.n, low=1)
    gf = series.gf_cube_census(args.n[-1])
    out, mismatch = [], []
    for n in args.n:
        c = structure.cube_census(graph.build_graph(Family.RUN, n))
        expected = gf[n] if n < len(gf.rows) else None
        if expected is not None and c.polynomial() != expected:
            mismatch.append(n)
        out.append((n, c))
    if args.format == "json":
        print(json.dumps([dict(c.to_dict(), slack_terms=[{"q": d, "x": k, "count": v} for (d, k), v in sorted(c.slack_counts.items())]) for _, c in out], indent=2))
    else:
        for n, c in out:
            print(f"n={n}: {c.format(slack=args.key == 'slack')}")
    if mismatch:
        print(f"FINDING: census keyed by distance to 0^n differs from the generating function at n = {mismatch}", file=sys.stderr)
    return EXIT_OK


def cmd_hamilton(args) -> int:
    _check_cap("hamilton", args.n, low=1)
    modes = ["cycle", "path"] if args.mode == "both" else [args.mode]
    results = []
    bad = 0
    for n in args.n:
        g = graph.build_graph(Family.RUN, n)
        for mode in modes:
            fn = hamilton.hamiltonian_cycle if mode == "cycle" else hamilton.hamiltonian_path
            res = fn(g, args.budget)
            d = res.to_dict()
            if res.answer == hamilton.YES:
                d["verified"] = hamilton.certificate_verify(g, res)
                bad += not d["verified"]
            results.append(d)
            expected = hamilton.YES if (mode == "path" or n % 3 == 1 and n > 1) else hamilton.NO
            if res.answer != expected:
                print(f"FINDING: n={n} {mode}: {res.answer}, conjecture predicts {expected}", file=sys.stderr)
    print(json.dumps(results if len(results) > 1 else results[0], indent=2))
    return EXIT_FAIL if bad else EXIT_OK


def cmd_export(args) -> int:
    _check_cap("export", [args.n])
    g = graph.build_graph(Family.parse(args.family), args.n)
    text = {"dot": g.to_dot, "json": g.to_json, "csv": g.to_csv}[args.format]()
    if args.format == "json":
        text += "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_ratios(args) -> int:
    try:
        table = analysis.asymptotic_ratios(args.n_max)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print("n,edge_ratio,fibcube_avg_degree_over_n,run_avg_degree_over_n")
    for r in table.rows:
        print(f"{r.n},{r.edge_ratio:.9f},{r.fibcube_avg_degree:.9f},{r.run_avg_degree:.9f}")
    gaps = table.gaps()
    print(
        f"# limits {analysis.EDGE_RATIO_LIMIT:.9f} {analysis.FIBCUBE_DEGREE_LIMIT:.9f} {analysis.RUN_DEGREE_LIMIT:.9f}; "
        + " ".join(f"gap_{k}={v:.6f}" for k, v in gaps.items()),
    )
    return EXIT_OK


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="runcube", description="Fibonacci-run graph toolkit")
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1, help="parallel BFS workers")
    sub = p.add_subparsers(dest="cmd", required=True)

    def fam(sp):
        sp.add_argument("--family", default="run", choices=["run", "fibcube"])

    sp = sub.add_parser("stats", help="vertex/edge counts against closed forms")
    sp.add_argument("--n", type=parse_range, required=True)
    sp.add_argument("--format", default="text", choices=["text", "csv", "json"])
    fam(sp)
    sp.set_defaults(func=cmd_stats)

    sp = sub.add_parser("verify", help="run every invariant suite")
    sp.add_argument("--n-max", type=int, default=10)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("diameter", help="exact diameter CSV")
    sp.add_argument("--n", type=parse_range, required=True)
    sp.set_defaults(func=cmd_diameter)

    sp = sub.add_parser("degrees", help="degree enumerator polynomials")
    sp.add_argument("--n", type=parse_range, required=True)
    sp.add_argument("--format", default="text", choices=["text", "json"])
    fam(sp)
    sp.set_defaults(func=cmd_degrees)

    sp = sub.add_parser("cubes", help="induced subcube census")
    sp.add_argument("--n", type=parse_range, required=True)
    sp.add_argument("--format", default="text", choices=["text", "json"])
    sp.add_argument("--key", default="distance", choices=["distance", "slack"])
    sp.set_defaults(func=cmd_cubes)

    sp = sub.add_parser("hamilton", help="Hamiltonian cycle/path search")
    sp.add_argument("--n", type=parse_range, required=True)
    sp.add_argument("--mode", default="both", choices=["cycle", "path", "both"])
    sp.add_argument("--budget", type=int, default=None, help="node expansions (default $RUNCUBE_BUDGET or 1e9)")
    sp.set_defaults(func=cmd_hamilton)

    sp = sub.add_parser("export", help="write the graph as dot/json/csv")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--format", default="csv", choices=["dot", "json", "csv"])
    sp.add_argument("--output", "-o", default=None)
    fam(sp)
    sp.set_defaults(func=cmd_export)

    sp = sub.add_parser("ratios", help="edge and degree ratios against their limits")
    sp.add_argument("--n-max", type=int, default=30)
    sp.set_defaults(func=cmd_ratios)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
