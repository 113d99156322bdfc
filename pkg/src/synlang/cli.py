"""``synlang`` command-line front end.

Exit codes: 0 success, 1 error-severity diagnostics (or ``fmt --check`` found
non-canonical input), 2 usage or I/O error. Results go to stdout and
diagnostics to stderr. Output is never styled, so ``NO_COLOR`` needs no
special handling.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import sys
from enum import IntEnum
from pathlib import Path
from typing import Sequence, TextIO

from synlang.calculus import AuthorityContext, AuthorityWeights, authority
from synlang.coordination import Manifest, SimulationError, Simulator
from synlang.errors import ConfigError, EmptyDocumentError, SynLangError
from synlang.syntax.export import export_document_json
from synlang.syntax.formatter import format_document
from synlang.syntax.model import Block, Diagnostic
from synlang.syntax.parser import Mode, ParsedBlock, parse_document
from synlang.validate import RuleSet, has_errors, sort_diagnostics, validate_document


class ExitStatus(IntEnum):
    OK = 0
    DIAGNOSTICS = 1
    USAGE = 2


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise _UsageError(f"{self.prog}: error: {message}")


def _read(path: str) -> str:
    try:
        return Path(path).read_bytes().decode("utf-8")
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
    except UnicodeDecodeError as exc:
        raise _UsageError(f"{path}: invalid UTF-8 at byte offset {exc.start}") from None


class _Session:
    def __init__(self, out: TextIO, err: TextIO) -> None:
        self.out = out
        self.err = err

    def report(self, diagnostics: Sequence[Diagnostic], filename: str) -> None:
        for d in sort_diagnostics(diagnostics):
            print(d.render(filename), file=self.err)

    def load(self, path: str, lenient: bool) -> tuple[list[ParsedBlock], list[Diagnostic]]:
        """Parse a file; the second value collects every syntax diagnostic."""
        mode = Mode.LENIENT if lenient else Mode.STRICT
        try:
            parsed = parse_document(_read(path), mode)
        except EmptyDocumentError as exc:
            raise _UsageError(f"{path}: {exc}") from None
        return parsed, [d for p in parsed for d in p.diagnostics]

    def blocks_or_report(self, path: str, lenient: bool) -> list[Block] | None:
        parsed, diagnostics = self.load(path, lenient)
        self.report(diagnostics, path)
        if has_errors(diagnostics) or any(p.block is None for p in parsed):
            return None
        return [p.block for p in parsed if p.block is not None]

    # ---- subcommands

    def cmd_parse(self, args: argparse.Namespace) -> ExitStatus:
        blocks = self.blocks_or_report(args.file, args.lenient)
        if blocks is None:
            return ExitStatus.DIAGNOSTICS
        for index, block in enumerate(blocks, start=1):
            coord = block.coordination
            link = "none" if coord is None else f"{coord.cot_id} -> @{coord.target_agent} ({len(coord.ctx_items)} items)"
            print(f"block {index}: #{block.task} @{block.agent}", file=self.out)
            print(f"  context: {block.context}", file=self.out)
            print(f"  query: {block.query}", file=self.out)
            print(f"  factors: {len(block.factors)}", file=self.out)
            print(f"  feel: {block.feel or '-'}", file=self.out)
            print(f"  trace: {', '.join(block.trace) or '-'}", file=self.out)
            print(f"  trace_fe: {len(block.trace_fe)}", file=self.out)
            print(f"  response_format: {block.response_format or '-'}", file=self.out)
            print(f"  controls: {len(block.controls)}", file=self.out)
            print(f"  coordination: {link}", file=self.out)
        return ExitStatus.OK

    def cmd_lint(self, args: argparse.Namespace) -> ExitStatus:
        rules = RuleSet.from_file(args.rules)
        parsed, diagnostics = self.load(args.file, args.lenient)
        blocks = [p.block for p in parsed if p.block is not None]
        diagnostics = diagnostics + validate_document(blocks, rules)
        self.report(diagnostics, args.file)
        return ExitStatus.DIAGNOSTICS if has_errors(diagnostics) else ExitStatus.OK

    def cmd_fmt(self, args: argparse.Namespace) -> ExitStatus:
        original = _read(args.file)
        blocks = self.blocks_or_report(args.file, args.lenient)
        if blocks is None:
            return ExitStatus.DIAGNOSTICS
        canonical = format_document(blocks)
        if args.check:
            if canonical != original:
                print(f"{args.file}: not in canonical form", file=self.err)
                return ExitStatus.DIAGNOSTICS
            return ExitStatus.OK
        if canonical != original:
            try:
                Path(args.file).write_text(canonical, encoding="utf-8")
            except OSError as exc:
                raise _UsageError(f"cannot write {args.file}: {exc.strerror or exc}") from None
        return ExitStatus.OK

    def cmd_export(self, args: argparse.Namespace) -> ExitStatus:
        blocks = self.blocks_or_report(args.file, args.lenient)
        if blocks is None:
            return ExitStatus.DIAGNOSTICS
        self.out.write(export_document_json(blocks))
        return ExitStatus.OK

    def cmd_simulate(self, args: argparse.Namespace) -> ExitStatus:
        blocks = self.blocks_or_report(args.scenario, lenient=True)
        if blocks is None:
            return ExitStatus.DIAGNOSTICS
        manifest = Manifest.from_text(_read(args.manifest), args.manifest)
        scenario = manifest.scenario(blocks)
        try:
            log = Simulator(manifest.registry).run(scenario)
        except SimulationError as exc:
            details = getattr(exc.cause, "diagnostics", [])
            self.report(details, args.scenario)
            print(f"{args.scenario}: {exc}", file=self.err)
            self.out.write(exc.partial_log.to_json())
            return ExitStatus.DIAGNOSTICS
        self.out.write(log.to_json())
        return ExitStatus.OK

    def cmd_authority(self, args: argparse.Namespace) -> ExitStatus:
        context = AuthorityContext.from_file(args.profile)
        weights = AuthorityWeights.from_file(args.weights)
        print(f"{authority(context, weights):.3f}", file=self.out)
        return ExitStatus.OK


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="synlang", description="Parse, lint, format and simulate SynLang documents.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_ArgumentParser)
    sub.required = True

    p = sub.add_parser("parse", help="print a structural summary of each block")
    p.add_argument("file")
    p.add_argument("--lenient", action="store_true", help="accept common deviations from the grammar")

    p = sub.add_parser("lint", help="report syntax and semantic diagnostics")
    p.add_argument("file")
    p.add_argument("--rules", metavar="CFG", help="rule severity overrides (CODE = error|warning|off)")
    p.add_argument("--lenient", action="store_true")

    p = sub.add_parser("fmt", help="rewrite a file in canonical form")
    p.add_argument("file")
    p.add_argument("--check", action="store_true", help="exit 1 if the file is not canonical; never write")
    p.add_argument("--lenient", action="store_true")

    p = sub.add_parser("export", help="emit the JSON tree of every block")
    p.add_argument("file")
    p.add_argument("--format", choices=["json"], default="json")
    p.add_argument("--lenient", action="store_true")

    p = sub.add_parser("simulate", help="run a coordination scenario and emit its audit log")
    p.add_argument("scenario", help=".syn document, one event per block")
    p.add_argument("manifest", help="sender and agent manifest")

    p = sub.add_parser("authority", help="evaluate the cognitive authority for a context profile")
    p.add_argument("--profile", required=True, metavar="FILE")
    p.add_argument("--weights", metavar="FILE")
    return parser


def run(argv: Sequence[str]) -> tuple[int, str, str]:
    """Execute one command in-process; returns ``(exit code, stdout, stderr)``."""
    out, err = io.StringIO(), io.StringIO()
    session = _Session(out, err)
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = build_parser().parse_args(list(argv))
        code = getattr(session, f"cmd_{args.command}")(args)
    except _UsageError as exc:
        print(str(exc), file=err)
        code = ExitStatus.USAGE
    except SystemExit as exc:  # --help / --version
        code = ExitStatus.OK if not exc.code else ExitStatus.USAGE
    except (ConfigError, SynLangError) as exc:
        print(f"synlang: error: {exc}", file=err)
        code = ExitStatus.USAGE
    return int(code), out.getvalue(), err.getvalue()


def main(argv: Sequence[str] | None = None) -> int:
    code, out, err = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
