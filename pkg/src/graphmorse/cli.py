"""Command-line interface.

    graphmorse hodge GRAPH
    graphmorse morse GRAPH MORSE [--witten] [--flatten] [--s-grid 0,1,2] [--cutoff A]
    graphmorse tree GRAPH [--root ID]
    graphmorse walks GRAPH --k K [--odd] [--oracle]
    graphmorse fuzz [--graphs N] [--seed S] [--max-vertices M]

Every command accepts ``--json PATH`` (``-`` for stdout). Exit codes: 0 ok,
1 input/parse error, 2 invalid Morse function, 3 invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import ContractError, InvariantViolation
from .fuzz import FAULTS, fuzz
from .graph import DisconnectedGraphError, GraphParseError, read_graph
from .morse import MorseInputError, read_morse_function
from .report import hodge_report, morse_report, tree_report, walks_report

EXIT_OK, EXIT_INPUT, EXIT_INVALID_MORSE, EXIT_INVARIANT = 0, 1, 2, 3


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)


def _matrix_lines(name: str, m) -> list[str]:
    if not m:
        return [f"{name}: (empty)"]
    width = max(len(str(x)) for row in m for x in row) if m[0] else 1
    lines = [f"{name}:"]
    lines += ["  [" + " ".join(str(x).rjust(width) for x in row) + "]" for row in m]
    return lines


def render_text(report: dict) -> str:
    cmd = report["command"]
    g = report["graph"]
    lines = [f"graph: |V|={g['vertices']} |E|={g['edges']} components={g['components']} cycle_rank={g['cycle_rank']}"]
    if cmd == "hodge":
        for name in ("incidence", "even_laplacian", "odd_laplacian"):
            lines += _matrix_lines(name, report["matrices"][name])
        if not report["laplacian_forms_agree"]:
            lines.append("note: val - A differs from I I^T (multigraph); Betti numbers use I I^T")
        lines.append("betti (h0, h1): ({}, {})".format(*report["betti"]))
    elif cmd == "morse":
        lines.append(f"valid Morse function: {report['valid']}")
        for v in report["violations"]:
            lines.append(f"  {v['condition']} violated at {v['cell']}: {', '.join(v['offending'])}")
        if report["valid"]:
            crit = report["critical"]
            lines.append(f"critical vertices: {crit['vertices']}  (c0={crit['c0']})")
            lines.append(f"critical edges (index): {crit['edges']}  (c1={crit['c1']})")
            lines.append("gradient pairs (vertex, edge): " + ", ".join(f"({v}, e{e})" for v, e in report["gradient_field"]))
            lines += _matrix_lines("morse differential", report["morse_differential"])
            lines.append("morse homology: ({}, {})  betti: ({}, {})".format(*report["morse_homology"], *report["betti"]))
            ineq = report["inequalities"]
            lines.append(f"Morse inequalities: h0<=c0 {ineq['h0<=c0']}, h1<=c1 {ineq['h1<=c1']}, tight {ineq['tight']}")
            w = report.get("witten")
            if w:
                if w["divergences"]:
                    lines.append("s -> oo limit diverges at: " + ", ".join(f"{d['operator']}({d['row']},{d['col']})" for d in w["divergences"]))
                    lines.append("  (rerun with --flatten to analyse the flattened function)")
                else:
                    lines += _matrix_lines("limit even Laplacian", w["limit_even"])
                    lines += _matrix_lines("limit odd Laplacian", w["limit_odd"])
                    lines.append("limit kernel dims: ({}, {})".format(*w["limit_kernel_dims"]))
            flow = report.get("spectral_flow")
            if flow:
                lines.append("spectral flow (s: even | odd eigenvalues):")
                for row in flow["rows"]:
                    ev = " ".join(f"{x:.6g}" for x in row["even"])
                    od = " ".join(f"{x:.6g}" for x in row["odd"])
                    lines.append(f"  s={row['s']:<8g} {ev} | {od}")
                lines.append(f"  low/high separated at last s: {flow['separated']}")
            cut = report.get("cutoff")
            if cut:
                lines.append("cutoff a={}: dims ({}, {}) cohomology ({}, {})".format(cut["a"], *cut["dims"], *cut["cohomology"]))
                for d in cut.get("deformed", []):
                    lines.append("  deformed s={}: cohomology ({}, {})".format(d["s"], *d["cohomology"]))
    elif cmd == "tree":
        lines.append(f"root: {report['root']}  tree edges: {report['tree_edges']}")
        lines.append("height function:")
        lines += ["  " + ln for ln in report["morse_file"].splitlines()]
        crit = report["critical"]
        lines.append(f"critical vertices: {crit['vertices']}  critical edges: {crit['edges']}  (c0={crit['c0']}, c1={crit['c1']})")
        lines.append(f"boundary map zero on critical edges: {report['boundary_zero']}")
        lines.append("morse homology: ({}, {})  betti: ({}, {})".format(*report["morse_homology"], *report["betti"]))
    elif cmd == "walks":
        label = "(Delta_-)^k" if report["odd"] else "(-Delta_+)^k"
        lines += _matrix_lines(f"{label}, k={report['k']}", report["matrix"])
        if "verdict" in report:
            lines.append(f"oracle: {report['verdict']}")
    return "\n".join(lines)


def _parse_grid(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad s grid {text!r}; expected comma-separated numbers")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphmorse", description="Graph Hodge theory, discrete Morse theory and Witten deformation.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_json(p):
        p.add_argument("--json", metavar="PATH", help="write the JSON report to PATH ('-' for stdout)")

    p = sub.add_parser("hodge", help="Laplacians and Betti numbers")
    p.add_argument("graph")
    add_json(p)

    p = sub.add_parser("morse", help="analyse a discrete Morse function")
    p.add_argument("graph")
    p.add_argument("morse")
    p.add_argument("--witten", action="store_true", help="deformed Laplacians and their s -> oo limits")
    p.add_argument("--flatten", action="store_true", help="flatten the function before the limit analysis")
    p.add_argument("--s-grid", type=_parse_grid, help="comma-separated s values for the spectral flow table")
    p.add_argument("--cutoff", type=float, metavar="A", help="energy cut-off cohomology at level A")
    add_json(p)

    p = sub.add_parser("tree", help="height function of a BFS spanning tree")
    p.add_argument("graph")
    p.add_argument("--root", type=int, help="root vertex id (default: first vertex)")
    add_json(p)

    p = sub.add_parser("walks", help="signed walk counts")
    p.add_argument("graph")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--odd", action="store_true", help="edge walks, (Delta_-)^k")
    p.add_argument("--oracle", action="store_true", help="compare with brute-force enumeration")
    add_json(p)

    p = sub.add_parser("fuzz", help="run the invariant suite on random instances")
    p.add_argument("--graphs", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-vertices", type=int, default=8)
    p.add_argument("--max-edges", type=int, default=15)
    p.add_argument("--out", default="fuzz-failures", help="directory for reproducer files")
    p.add_argument("--inject-fault", choices=FAULTS, help=argparse.SUPPRESS)
    add_json(p)
    return parser


def _emit(report: dict, json_path: str | None, text: str | None = None) -> None:
    if json_path == "-":
        print(dumps(report))
        return
    print(text if text is not None else render_text(report))
    if json_path:
        with open(json_path, "w", encoding="utf-8") as fh:
            fh.write(dumps(report) + "\n")


def _run(args) -> int:
    if args.command == "fuzz":
        if args.graphs < 0:
            raise SystemExit("--graphs must be non-negative")
        res = fuzz(args.graphs, args.seed, args.max_vertices, args.max_edges, args.inject_fault, args.out)
        report = {"schema": "graphmorse.report/1", "command": "fuzz", "instances": res.instances, "failures": res.failures}
        text = f"fuzz: {res.instances} instances, {len(res.failures)} violations"
        for fail in res.failures:
            text += f"\n  instance {fail['instance']} [{fail['check']}]: {fail['message']}"
            if "files" in fail:
                text += f"\n    reproducer: {' '.join(fail['files'])}"
        _emit(report, args.json, text)
        return EXIT_OK if res.ok else EXIT_INVARIANT

    g = read_graph(args.graph)
    if args.command == "hodge":
        report = hodge_report(g)
    elif args.command == "morse":
        f = read_morse_function(args.morse, g)
        report = morse_report(g, f, witten=args.witten, flatten_first=args.flatten, s_grid=args.s_grid, cutoff=args.cutoff)
        if not report["valid"]:
            _emit(report, args.json)
            return EXIT_INVALID_MORSE
    elif args.command == "tree":
        if args.root is None:
            root = 0
        elif args.root in g.labels:
            root = g.labels.index(args.root)
        else:
            print(f"error: unknown root vertex {args.root}", file=sys.stderr)
            return EXIT_INPUT
        report = tree_report(g, root)
    else:
        if args.k < 0:
            print("error: --k must be non-negative", file=sys.stderr)
            return EXIT_INPUT
        report = walks_report(g, args.k, odd=args.odd, oracle=args.oracle)
    _emit(report, args.json)
    if args.command == "walks" and report.get("verdict") == "MISMATCH":
        return EXIT_INVARIANT
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except (OSError, GraphParseError, MorseInputError, DisconnectedGraphError, ContractError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
