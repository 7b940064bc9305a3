"""Command-line front end: script runner, REPL and CSV export.

Exit codes: 0 success, 1 query/type error, 2 parse or lex error.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from typing import Optional

from .errors import CoqlError, LexError, ParseError
from .parser import parse
from .schema import ComplexIdentity
from .session import ResultTable, Session


def _cell_text(value) -> str:
    if isinstance(value, ComplexIdentity):
        return value.text
    if isinstance(value, tuple):
        return "(" + ", ".join(_cell_text(v) for v in value) + ")"
    if isinstance(value, float) and value.is_integer():
        return f"{value:.1f}"
    return str(value)


def render_table(table: ResultTable) -> str:
    headers = list(table.column_names)
    rows = [[_cell_text(v) for v in row] for row in table.rows]
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip(),
        "  ".join("-" * w for w in widths),
    ]
    for row in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    lines.append(f"({len(rows)} row{'s' if len(rows) != 1 else ''})")
    return "\n".join(lines)


def render_csv(table: ResultTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.column_names)
    for row in table.rows:
        writer.writerow([_cell_text(v) for v in row])
    return buf.getvalue()


def _print_result(table: Optional[ResultTable], fmt: str, out) -> None:
    if table is None:
        return
    if fmt == "csv":
        out.write(render_csv(table))
    else:
        out.write(render_table(table) + "\n")


def _span_text(exc: CoqlError) -> str:
    return str(exc)


def run_script(path: str, session: Session, fmt: str, trace: bool,
               out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        err.write(f"cannot read script {path!r}: {exc}\n")
        return 2
    try:
        statements = parse(text)
    except (LexError, ParseError) as exc:
        err.write(f"error: {exc}\n")
        return 2
    for stmt in statements:
        if trace:
            from .printer import statement_text

            err.write(f"-- {statement_text(stmt)}\n")
        try:
            result = session.execute(stmt)
        except CoqlError as exc:
            span = getattr(stmt, "span", None)
            where = f" (statement at {span.line}:{span.col})" if span else ""
            err.write(f"error: {exc}{where}\n")
            return 1
        _print_result(result, fmt, out)
    return 0


def export_primitive(session: Session, path: str, err=None) -> int:
    err = err or sys.stderr
    table = session.db.model.primitive_semantics()
    text = table.to_csv(session.db.display_name)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        err.write(f"cannot write {path!r}: {exc}\n")
        return 1
    return 0


def repl(session: Session, fmt: str, inp=None, out=None, err=None) -> int:
    inp = inp or sys.stdin
    out = out or sys.stdout
    err = err or sys.stderr
    interactive = hasattr(inp, "isatty") and inp.isatty()
    buffer: list[str] = []

    def prompt() -> None:
        if interactive:
            out.write("coql> " if not buffer else "  ... ")
            out.flush()

    prompt()
    for line in inp:
        stripped = line.strip()
        if not buffer and not stripped:
            prompt()
            continue
        if not buffer and stripped.startswith(":"):
            cmd, _, arg = stripped.partition(" ")
            if cmd == ":quit":
                return 0
            if cmd == ":schema":
                _print_schema(session, out)
            elif cmd == ":primitive":
                if not arg:
                    err.write("usage: :primitive <csv-path>\n")
                elif export_primitive(session, arg.strip(), err) == 0:
                    out.write(f"wrote {arg.strip()}\n")
            else:
                err.write(f"unknown command {cmd!r}\n")
            prompt()
            continue
        buffer.append(line)
        joined = "".join(buffer)
        if joined.count("(") > joined.count(")"):
            prompt()
            continue
        buffer.clear()
        try:
            for stmt in parse(joined):
                result = session.execute(stmt)
                _print_result(result, fmt, out)
        except CoqlError as exc:
            err.write(f"error: {exc}\n")
        prompt()
    return 0


def _print_schema(session: Session, out) -> None:
    db = session.db
    out.write(f"{len(db.concepts)} concept(s), {len(db.collections)} collection(s)\n")
    for name, concept in db.concepts.items():
        parent = f" IN {concept.parent}" if concept.parent else ""
        fields = ", ".join(f"{f.type_name} {f.name}" for f in concept.fields)
        out.write(f"  CONCEPT {name}{parent}: {fields}\n")
    for name, collection in db.collections.items():
        parent = f" IN {collection.parent.name}" if collection.parent else ""
        out.write(
            f"  TABLE {name} CONCEPT {collection.concept.name}{parent} "
            f"({len(collection.items)} items)\n"
        )


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coql", description="Concept-oriented data engine and CoQL interpreter"
    )
    parser.add_argument("--run", metavar="FILE", help="execute a CoQL script")
    parser.add_argument("--repl", action="store_true", help="interactive session")
    parser.add_argument(
        "--export-primitive",
        metavar="FILE",
        help="write the canonical primitive table as CSV (after --run, if given)",
    )
    parser.add_argument("--format", choices=["table", "csv"], default="table")
    parser.add_argument(
        "--budget",
        type=int,
        default=None,
        help="cap on intermediate collection sizes (env: COQL_BUDGET)",
    )
    parser.add_argument("--trace", action="store_true", help="echo statements to stderr")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_arg_parser().parse_args(argv)
    if not (args.run or args.repl or args.export_primitive):
        build_arg_parser().print_usage(sys.stderr)
        return 2
    if args.repl and args.run:
        sys.stderr.write("choose one of --run or --repl\n")
        return 2
    budget = args.budget
    if budget is None:
        env = os.environ.get("COQL_BUDGET")
        budget = int(env) if env else 1_000_000
    session = Session(budget=budget)
    if args.run:
        code = run_script(args.run, session, args.format, args.trace)
        if code != 0:
            return code
        if args.export_primitive:
            return export_primitive(session, args.export_primitive)
        return 0
    if args.repl:
        return repl(session, args.format)
    return export_primitive(session, args.export_primitive)


if __name__ == "__main__":
    sys.exit(main())
