"""Command-line interface: ``shaperec validate|oracle|translate|analyze``.

Exit codes are 0 for a valid graph (or any successful non-validation
command), 1 for an invalid graph and 2 for any error. Errors are printed on
stderr as a single ``ERROR <code>: <message>`` line.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from .errors import ShapeRecError
from .evaluation import T
from .parsing import load_graph
from .rdf import term_key
from .reader import read_document
from .scl import render, translate
from .semantics import (
    DEFAULT_MAX_PAIRS,
    DEFAULT_ORACLE_PAIRS,
    Mode,
    ValidationResult,
    brute_force_validate,
    validate,
)
from .shapes import (
    FRAGMENT_ORDER,
    Document,
    dependency_graph,
    fragment_letters,
    fragment_name,
    is_recursive,
    recursive_shapes,
)

EXIT_VALID, EXIT_INVALID, EXIT_ERROR = 0, 1, 2
REPORT_SCHEMA = 1
MAX_PAIRS_ENV = "SHAPEREC_MAX_PAIRS"


def _load_document(path: str) -> tuple[Document, dict[str, str]]:
    graph, prefixes = load_graph(path)
    return read_document(graph), prefixes


def report(result: ValidationResult) -> dict:
    """The JSON report for a validation result, with a fixed key order."""
    out: dict = {
        "schema": REPORT_SCHEMA,
        "mode": result.mode.value,
        "valid": result.valid,
        "violations": [
            {"focus": str(v.focus), "shape": str(v.shape), "detail": v.detail}
            for v in result.violations
        ],
    }
    if result.witness is not None:
        rows = sorted(result.witness.items(), key=lambda kv: (term_key(kv[0][0]), term_key(kv[0][1])))
        out["witness"] = [
            {"node": str(n), "shape": str(s), "sign": "Pos" if v is T else "Neg"} for (n, s), v in rows
        ]
    st = result.stats
    out["stats"] = {
        "nodes": st.nodes,
        "shapes": st.shapes,
        "guessablePairs": st.guessable_pairs,
        "assignmentsTried": st.assignments_tried,
        "elapsedMs": round(st.elapsed_ms, 3),
    }
    if st.oracle:
        out["stats"]["oracle"] = True
    return out


def dump_json(obj: dict) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)


def format_text(rep: dict) -> str:
    lines = [f"mode: {rep['mode']}", f"valid: {'yes' if rep['valid'] else 'no'}"]
    for v in rep["violations"]:
        lines.append(f"violation: {v['focus']} {v['shape']}: {v['detail']}")
    for w in rep.get("witness", []):
        lines.append(f"witness: {w['node']} {w['shape']} {w['sign']}")
    stats = " ".join(f"{k}={v}" for k, v in rep["stats"].items())
    lines.append(f"stats: {stats}")
    return "\n".join(lines)


def _emit(text: str, out: str | None = None) -> None:
    if out and out != "-":
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _run_validation(args: argparse.Namespace, oracle: bool) -> int:
    data, _ = load_graph(args.data)
    doc, _ = _load_document(args.shapes)
    mode = Mode(args.semantics)
    if oracle:
        limit = args.max_pairs if args.max_pairs is not None else DEFAULT_ORACLE_PAIRS
        result = brute_force_validate(data, doc, mode, max_pairs=limit)
    else:
        limit = args.max_pairs if args.max_pairs is not None else _env_max_pairs()
        result = validate(data, doc, mode, max_pairs=limit)
    rep = report(result)
    _emit(dump_json(rep) if args.format == "json" else format_text(rep), args.out)
    return EXIT_VALID if result.valid else EXIT_INVALID


def _env_max_pairs() -> int:
    raw = os.environ.get(MAX_PAIRS_ENV)
    if raw is None:
        return DEFAULT_MAX_PAIRS
    try:
        return int(raw)
    except ValueError:
        raise ShapeRecError(f"{MAX_PAIRS_ENV} must be an integer, got {raw!r}") from None


def cmd_validate(args: argparse.Namespace) -> int:
    return _run_validation(args, oracle=False)


def cmd_oracle(args: argparse.Namespace) -> int:
    return _run_validation(args, oracle=True)


def cmd_translate(args: argparse.Namespace) -> int:
    doc, prefixes = _load_document(args.shapes)
    _emit(render(translate(doc), prefixes if args.compact else None), args.out)
    return EXIT_VALID


def analysis(doc: Document) -> dict:
    letters = fragment_letters(doc)
    return {
        "recursive": is_recursive(doc),
        "shapes": {str(name): flag for name, flag in recursive_shapes(doc).items()},
        "fragment": [c for c in FRAGMENT_ORDER if c in letters],
        "dependencies": [
            [str(src), str(dst)] for src, targets in dependency_graph(doc).items() for dst in targets
        ],
    }


def cmd_analyze(args: argparse.Namespace) -> int:
    doc, _ = _load_document(args.shapes)
    info = analysis(doc)
    if args.format == "json":
        text = dump_json(info)
    else:
        lines = [f"document: {'recursive' if info['recursive'] else 'non-recursive'}"]
        lines += [f"shape: {name} {'recursive' if flag else 'non-recursive'}" for name, flag in info["shapes"].items()]
        lines.append(f"fragment: {fragment_name(info['fragment'])}")
        lines += [f"depends: {src} -> {dst}" for src, dst in info["dependencies"]]
        text = "\n".join(lines)
    _emit(text, args.out)
    return EXIT_VALID


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shaperec", description="SHACL validation with recursive shapes.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, data: bool) -> None:
        if data:
            p.add_argument("--data", required=True, help="data graph (.ttl or .nt)")
        p.add_argument("--shapes", required=True, help="shapes graph (.ttl or .nt)")
        p.add_argument("--out", default=None, help="output file, or - for stdout")

    for name, func, help_text in (
        ("validate", cmd_validate, "validate a data graph"),
        ("oracle", cmd_oracle, "validate by brute-force enumeration"),
    ):
        p = sub.add_parser(name, help=help_text)
        common(p, data=True)
        p.add_argument("--semantics", default=Mode.STANDARD.value, choices=[m.value for m in Mode])
        p.add_argument("--format", default="text", choices=("text", "json"))
        p.add_argument("--max-pairs", type=int, default=None, help="search or enumeration cap")
        p.set_defaults(func=func)

    p = sub.add_parser("translate", help="translate shapes into an SCL sentence")
    common(p, data=False)
    p.add_argument("--compact", action="store_true", help="abbreviate IRIs with the file's prefixes")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("analyze", help="recursion and fragment analysis")
    common(p, data=False)
    p.add_argument("--format", default="text", choices=("text", "json"))
    p.set_defaults(func=cmd_analyze)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ShapeRecError as exc:
        print(f"ERROR {exc.code}: {exc}", file=sys.stderr)
    except OSError as exc:
        print(f"ERROR io: {exc.strerror or exc}: {exc.filename}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
