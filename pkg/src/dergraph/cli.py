"""Command-line entry point: ``dergraph analyze|batch|construct|corpus``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from dergraph.constructions import (
    FAMILIES,
    builtin_corpus,
    group_to_dict,
    load_corpus,
    read_group_file,
    standard_family,
    write_corpus,
)
from dergraph.errors import (
    DergraphError,
    GroupError,
    OrderCapExceeded,
    VertexCapExceeded,
)
from dergraph.extremal import DEFAULT_BUDGET
from dergraph.graph import DEFAULT_VERTEX_CAP
from dergraph.perms import DEFAULT_MAX_ORDER, is_transitive
from dergraph.properties import Violation, check_properties
from dergraph.report import analyze_group

log = logging.getLogger("dergraph")

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_CAP = 2
EXIT_INTRANSITIVE = 3
EXIT_VIOLATION = 4

CSV_COLUMNS = (
    "name",
    "degree",
    "order",
    "transitive",
    "primitive",
    "derangement_count",
    "h_g_order",
    "h_g_index",
    "join_kind",
    "multipartite_parts",
    "bipartite",
    "triangle_witness",
    "alpha",
    "omega",
    "rho",
    "ekr",
    "strict_ekr",
    "ekr_module",
    "violations",
)


def dump_report(d: dict) -> str:
    return json.dumps(d, indent=2) + "\n"


def cmd_analyze(args) -> int:
    try:
        G = read_group_file(args.file, args.max_order)
    except OrderCapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    except (DergraphError, OSError) as e:
        print(f"error: {args.file}: {e}", file=sys.stderr)
        return EXIT_PARSE
    if args.require_transitive and not is_transitive(G):
        print(f"error: {G.name} is not transitive", file=sys.stderr)
        return EXIT_INTRANSITIVE
    try:
        a = analyze_group(G, budget=args.budget, vertex_cap=args.vertex_cap)
    except VertexCapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    for e in a.errors:
        log.error("%s: %s", G.name, e)
    text = dump_report(a.report.to_dict(timings=not args.no_timings))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _analyze_entry(job):
    name, group, expected, budget, vertex_cap = job
    try:
        a = analyze_group(group, name=name, budget=budget, vertex_cap=vertex_cap)
    except DergraphError as e:
        return name, None, [Violation(name, "analysis-error", str(e))]
    return name, a.report.to_dict(), check_properties(a, expected)


def run_batch(entries, jobs=1, budget=DEFAULT_BUDGET, vertex_cap=DEFAULT_VERTEX_CAP):
    """Analyse corpus entries; returns ``(reports, violations, file_errors)`` sorted by name."""
    file_errors = sorted(e.error for e in entries if e.group is None)
    work = [(e.name, e.group, e.expected, budget, vertex_cap) for e in entries if e.group is not None]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_analyze_entry, work))
    else:
        results = [_analyze_entry(w) for w in work]
    results.sort(key=lambda r: r[0])
    reports = [r[1] for r in results if r[1] is not None]
    violations = sorted(v for r in results for v in r[2])
    return reports, violations, file_errors


def batch_csv(reports, violations) -> str:
    per_group: dict[str, list[str]] = {}
    for v in violations:
        per_group.setdefault(v.group, []).append(v.prop)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        row = dict(r)
        row["triangle_witness"] = " ".join(map(str, r["triangle_witness"] or []))
        row["violations"] = ";".join(sorted(set(per_group.get(r["name"], []))))
        w.writerow([_csv_value(row[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def _csv_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    return v


def cmd_batch(args) -> int:
    entries = []
    if args.builtin:
        entries += builtin_corpus(args.max_order)
    if args.dir:
        if not Path(args.dir).is_dir():
            print(f"error: {args.dir} is not a directory", file=sys.stderr)
            return EXIT_PARSE
        entries += load_corpus(args.dir, args.max_order)
    if not args.builtin and not args.dir:
        print("error: give a corpus directory or --builtin", file=sys.stderr)
        return EXIT_PARSE
    reports, violations, file_errors = run_batch(entries, args.jobs, args.budget, args.vertex_cap)

    text = batch_csv(reports, violations)
    if args.csv:
        Path(args.csv).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.json_dir:
        out = Path(args.json_dir)
        out.mkdir(parents=True, exist_ok=True)
        for r in reports:
            if args.no_timings:
                r = {k: v for k, v in r.items() if k != "timings"}
            (out / f"{r['name']}.json").write_text(dump_report(r), encoding="utf-8")

    for e in file_errors:
        print(f"file error: {e}", file=sys.stderr)
    for v in violations:
        print(f"VIOLATION {v}", file=sys.stderr)
    verdict = "PASS" if not violations else "FAIL"
    print(
        f"property suite: {verdict} ({len(reports)} groups, {len(violations)} violations, "
        f"{len(file_errors)} file errors)",
        file=sys.stderr,
    )
    if violations:
        return EXIT_VIOLATION
    return EXIT_PARSE if file_errors else EXIT_OK


def cmd_construct(args) -> int:
    try:
        G = standard_family(args.family, args.n, args.max_order)
    except OrderCapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    except GroupError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    text = json.dumps(group_to_dict(G), indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_corpus(args) -> int:
    paths = write_corpus(builtin_corpus(args.max_order), args.dir)
    print(f"wrote {len(paths)} group files to {args.dir}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dergraph", description="Derangement graphs of permutation groups.")
    p.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER, help="group enumeration cap")
    p.add_argument("--vertex-cap", type=int, default=DEFAULT_VERTEX_CAP, help="adjacency bitmap cap")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="analyse one group file and print a JSON report")
    a.add_argument("file")
    a.add_argument("--out")
    a.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="branch-and-bound node budget")
    a.add_argument("--require-transitive", action="store_true")
    a.add_argument("--no-timings", action="store_true", help="omit timings for byte-stable output")
    a.set_defaults(func=cmd_analyze)

    b = sub.add_parser("batch", help="analyse a corpus and run the property suite")
    b.add_argument("dir", nargs="?")
    b.add_argument("--builtin", action="store_true", help="include the built-in corpus")
    b.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    b.add_argument("--csv", help="write the summary table here instead of stdout")
    b.add_argument("--json-dir", help="write one JSON report per group into this directory")
    b.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    b.add_argument("--no-timings", action="store_true")
    b.set_defaults(func=cmd_batch)

    c = sub.add_parser("construct", help="write a group file for a family member")
    c.add_argument("family", choices=FAMILIES)
    c.add_argument("n", type=int)
    c.add_argument("--out")
    c.set_defaults(func=cmd_construct)

    w = sub.add_parser("corpus", help="write the built-in corpus as group files")
    w.add_argument("dir")
    w.set_defaults(func=cmd_corpus)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
