"""Block and document parser.

Strict mode follows the block grammar line by line: the four header lines
in order, then factors, meta lines, control lines and an optional COT/CTX
pair, with every TRACE_FE/CTX item carrying a ``(confidence=<float>)``
clause. Horizontal whitespace and blank lines between body lines are not
significant.

Lenient mode additionally

* joins continuation lines (lines that start with no recognized marker) onto
  the preceding text-bearing line, which is how hand-wrapped examples split
  long explanations;
* accepts items without a confidence clause (confidence stays ``None``);
* accepts body sections in any order and blank lines inside the header;
* accepts confidence numbers outside the grammar's float form (``1``,
  ``-0.2``, ``1e-3``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from synlang.errors import EmptyDocumentError, ParseError
from synlang.syntax.lexer import Token, TokenKind, tokenize
from synlang.syntax.model import (
    Block,
    ControlDirective,
    ControlKind,
    Coordination,
    Diagnostic,
    Factor,
    Severity,
    Span,
    TraceItem,
)

K = TokenKind


class Mode(str, Enum):
    STRICT = "strict"
    LENIENT = "lenient"


@dataclass(frozen=True)
class ParsedBlock:
    """Parse outcome for one block: ``block`` is None when errors occurred."""

    block: Block | None
    diagnostics: tuple[Diagnostic, ...] = ()
    span: Span | None = None

    @property
    def ok(self) -> bool:
        return self.block is not None and not any(d.is_error for d in self.diagnostics)


# --------------------------------------------------------------------------
# line grouping


@dataclass
class _Line:
    number: int
    tokens: list[Token]
    width: int
    raw: str = ""

    @property
    def kind(self) -> TokenKind | None:
        if not self.tokens:
            return None
        return self.tokens[0].kind

    @property
    def is_blank(self) -> bool:
        return not self.tokens

    @property
    def is_continuation(self) -> bool:
        return self.kind in (K.TEXT, K.LPAREN)

    @property
    def span(self) -> Span:
        return Span(self.number, 1, self.number, self.width + 1)

    def kinds(self) -> list[TokenKind]:
        return [t.kind for t in self.tokens]


def _group_lines(tokens: Iterable[Token]) -> list[_Line]:
    lines: list[_Line] = []
    current = _Line(1, [], 0)
    for tok in tokens:
        if tok.kind is K.NEWLINE:
            current.width = tok.col - 1
            lines.append(current)
            current = _Line(tok.line + 1, [], 0)
            continue
        current.width = tok.end_col - 1
        current.raw += tok.lexeme
        if not tok.kind.is_trivia:
            current.tokens.append(tok)
    if current.tokens or current.width:
        lines.append(current)
    return lines


# --------------------------------------------------------------------------
# mutable builders used while a block is being assembled


@dataclass
class _Text:
    parts: list[str] = field(default_factory=list)

    def add(self, text: str) -> None:
        text = text.strip()
        if text:
            self.parts.append(text)

    @property
    def value(self) -> str:
        return " ".join(self.parts)


@dataclass
class _ItemBuilder:
    label: str
    text: _Text
    span: Span
    confidence: float | None = None
    has_clause: bool = False

    def build(self) -> TraceItem:
        return TraceItem(self.label, self.text.value, self.confidence, span=self.span)


@dataclass
class _CotBuilder:
    cot_id: str
    target: str
    description: _Text
    span: Span


_HEADER = (
    (K.TASK_MARKER, "task", "task line ('#IDENTIFIER')"),
    (K.AGENT_MARKER, "agent", "agent line ('@IDENTIFIER')"),
    (K.CONTEXT_DELIM, "context", "context line ('=== text ===')"),
    (K.QUERY_MARKER, "query", "query line ('> text')"),
)

_CONTROL_KINDS = {
    K.MOD_KEYWORD: ControlKind.MOD,
    K.ONLY_KEYWORD: ControlKind.ONLY,
    K.PREFER_KEYWORD: ControlKind.PREFER,
    K.SOFT_EXCLUDE: ControlKind.SOFT_EXCLUDE,
    K.HARD_EXCLUDE: ControlKind.HARD_EXCLUDE,
    K.COMMENT_MARKER: ControlKind.COMMENT,
}

_META_KINDS = (K.FEEL_KEYWORD, K.TRACE_KEYWORD, K.TRACE_FE_KEYWORD, K.RESPONSE_KEYWORD)

# Body section ranks for strict ordering.
_FACTORS, _META, _CONTROL, _COORD = 1, 2, 3, 4
_SECTION_NAMES = {_FACTORS: "factor", _META: "meta", _CONTROL: "control", _COORD: "coordination"}


def _unquote(text: str) -> str:
    if len(text) >= 2 and text[0] == '"' and text[-1] == '"':
        return text[1:-1]
    return text


class _BlockParser:
    def __init__(self, lines: Sequence[_Line], mode: Mode) -> None:
        self.lines = lines
        self.mode = mode
        self.lenient = mode is Mode.LENIENT
        self.diagnostics: list[Diagnostic] = []

        self.header: dict[str, str] = {}
        self.line_spans: dict[str, Span] = {}
        self.query = _Text()
        self.factors: list[tuple[int, _Text, Span]] = []
        self.feel: str | None = None
        self.trace: tuple[str, ...] = ()
        self.trace_fe: list[_ItemBuilder] = []
        self.response: str | None = None
        self.controls: list[tuple[ControlKind, _Text, Span]] = []
        self.cot: _CotBuilder | None = None
        self.pending_cot: _CotBuilder | None = None
        self.ctx_id: str | None = None
        self.ctx_items: list[_ItemBuilder] = []
        self.ctx_span: Span | None = None

        self.item_target: list[_ItemBuilder] | None = None
        self.in_ctx = False
        self.continuation: _Text | _ItemBuilder | None = None
        self.max_section = 0
        self.last_line: _Line | None = None

    # -- diagnostics -----------------------------------------------------

    def error(self, code: str, message: str, span: Span) -> None:
        self.diagnostics.append(Diagnostic(Severity.ERROR, code, message, span))

    @staticmethod
    def tok_span(tok: Token) -> Span:
        return Span(tok.line, tok.col, tok.line, tok.end_col)

    # -- entry -----------------------------------------------------------

    def parse(self) -> Block | None:
        idx = 0
        while idx < len(self.lines) and self.lines[idx].is_blank:
            idx += 1
        first_line = self.lines[idx] if idx < len(self.lines) else None
        for kind, key, description in _HEADER:
            if self.lenient or key == "task":
                while idx < len(self.lines) and self.lines[idx].is_blank:
                    idx += 1
            line = self.lines[idx] if idx < len(self.lines) else None
            if line is None or line.kind is not kind:
                found = "end of input" if line is None else ("blank line" if line.is_blank else f"line {line.number}")
                span = line.span if line is not None else self._end_span()
                self.error("E-SYN-001", f"missing {description}; found {found}", span)
                return None
            getattr(self, f"_header_{key}")(line)
            self.line_spans[key] = line.span
            self.last_line = line
            idx += 1
        self.continuation = self.query
        for line in self.lines[idx:]:
            self._body_line(line)
        self._finish()
        if any(d.is_error for d in self.diagnostics):
            return None
        assert first_line is not None and self.last_line is not None
        span = Span(first_line.number, 1, self.last_line.number, self.last_line.width + 1)
        try:
            return self._build(span)
        except ValueError as exc:
            self.error("E-SYN-006", str(exc), span)
            return None

    def _end_span(self) -> Span:
        if self.lines:
            last = self.lines[-1]
            return Span(last.number, last.width + 1, last.number, last.width + 1)
        return Span.point()

    # -- header ----------------------------------------------------------

    def _ident_line(self, line: _Line, key: str, what: str) -> None:
        if line.kinds() == [line.kind, K.IDENTIFIER]:
            self.header[key] = line.tokens[1].lexeme
        else:
            self.error("E-SYN-006", f"{what} must be followed by a single identifier", line.span)
            self.header[key] = "_"

    def _header_task(self, line: _Line) -> None:
        self._ident_line(line, "task", "'#'")

    def _header_agent(self, line: _Line) -> None:
        self._ident_line(line, "agent", "'@'")

    def _header_context(self, line: _Line) -> None:
        kinds = line.kinds()
        if kinds == [K.CONTEXT_DELIM, K.CONTEXT_DELIM]:
            self.header["context"] = ""
        elif kinds == [K.CONTEXT_DELIM, K.TEXT, K.CONTEXT_DELIM]:
            self.header["context"] = _unquote(line.tokens[1].lexeme.strip())
        else:
            self.error("E-SYN-006", "context line must be '=== text ==='", line.span)
            self.header["context"] = ""

    def _header_query(self, line: _Line) -> None:
        if len(line.tokens) > 1:
            self.query.add(line.tokens[1].lexeme)

    # -- body ------------------------------------------------------------

    def _enter_section(self, rank: int, line: _Line) -> None:
        if not self.lenient and rank < self.max_section:
            self.error(
                "E-SYN-004",
                f"{_SECTION_NAMES[rank]} line not allowed after {_SECTION_NAMES[self.max_section]} lines",
                line.span,
            )
        self.max_section = max(self.max_section, rank)

    def _body_line(self, line: _Line) -> None:
        if line.is_blank:
            self.continuation = None
            return
        self.last_line = line
        kind = line.kind

        if self.pending_cot is not None and kind is not K.CTX_KEYWORD and not (
            self.lenient and line.is_continuation
        ):
            self.error("E-SYN-007", "COT line must be immediately followed by a CTX line", line.span)
            self.pending_cot = None

        if self.in_ctx and kind not in (K.DASH, K.RBRACE) and not line.is_continuation:
            self.error("E-SYN-007", "expected CTX item or '}'", line.span)
            self._close_ctx()

        if line.is_continuation:
            self._continuation(line)
            return
        self.continuation = None
        if kind is not K.DASH:
            self.item_target = None

        if kind in (K.FACTOR_MARKER, K.SUBFACTOR_MARKER):
            self._factor(line)
        elif kind in _META_KINDS:
            self._enter_section(_META, line)
            self._meta(line)
        elif kind in _CONTROL_KINDS:
            self._enter_section(_CONTROL, line)
            self._control(line)
        elif kind is K.COT_KEYWORD:
            self._enter_section(_COORD, line)
            self._cot(line)
        elif kind is K.CTX_KEYWORD:
            self._enter_section(_COORD, line)
            self._ctx_open(line)
        elif kind is K.DASH:
            self._item(line)
        elif kind is K.RBRACE:
            if self.in_ctx:
                if len(line.tokens) > 1:
                    self.error("E-SYN-006", "unexpected text after '}'", line.span)
                self._close_ctx()
            else:
                self.error("E-SYN-004", "'}' without an open CTX block", line.span)
        elif kind is K.TASK_MARKER:
            self.error("E-SYN-004", "unexpected task line; a block holds exactly one task", line.span)
        else:
            assert kind is not None
            self.error("E-SYN-004", f"unexpected {kind.value!r} line in block body", line.span)

    def _continuation(self, line: _Line) -> None:
        if not self.lenient:
            self.error("E-SYN-004", "line does not start with a SynLang marker", line.span)
            return
        target = self.continuation
        if target is None:
            self.error("E-SYN-004", "continuation line has nothing to continue", line.span)
            return
        tokens = line.tokens
        if isinstance(target, _ItemBuilder):
            if target.has_clause:
                self.error("E-SYN-004", "continuation line after a completed item", line.span)
                return
            rest = self._item_tail(tokens, target)
            target.span = target.span.cover(line.span)
            if rest:
                self.error("E-SYN-006", "unexpected tokens in continuation line", line.span)
            return
        # Only items carry confidences; elsewhere a trailing clause is text.
        target.add(line.raw)

    def _factor(self, line: _Line) -> None:
        self._enter_section(_FACTORS, line)
        depth = 2 if line.kind is K.FACTOR_MARKER else 3
        text = _Text()
        if len(line.tokens) > 1:
            text.add(line.tokens[1].lexeme)
        if not text.parts:
            self.error("E-SYN-006", "factor text must be nonempty", line.span)
        if depth == 3 and not any(d == 2 for d, _, _ in self.factors):
            self.error("E-SYN-002", "sub-factor '>>>' before any factor '>>'", line.span)
        self.factors.append((depth, text, line.span))
        self.continuation = text

    def _meta(self, line: _Line) -> None:
        kind = line.kind
        kinds = line.kinds()
        if kind is K.TRACE_FE_KEYWORD:
            if "trace_fe" in self.line_spans:
                self.error("E-SYN-005", "duplicate TRACE_FE line", line.span)
            self.line_spans["trace_fe"] = line.span
            if len(kinds) > 1:
                self.error("E-SYN-006", "TRACE_FE: must be alone on its line", line.span)
            self.item_target = self.trace_fe
            return
        key = {K.FEEL_KEYWORD: "feel", K.TRACE_KEYWORD: "trace", K.RESPONSE_KEYWORD: "response_format"}[kind]
        if key in self.line_spans:
            self.error("E-SYN-005", f"duplicate {kind.value} line", line.span)
        self.line_spans[key] = line.span
        if kind is K.TRACE_KEYWORD:
            idents = kinds[1::2]
            commas = kinds[2::2]
            if len(kinds) < 2 or any(k is not K.IDENTIFIER for k in idents) or any(k is not K.COMMA for k in commas) or kinds[-1] is not K.IDENTIFIER:
                self.error("E-SYN-006", "TRACE: expects a comma-separated identifier list", line.span)
                return
            self.trace = tuple(t.lexeme for t in line.tokens[1::2])
            return
        if kinds != [kind, K.IDENTIFIER]:
            self.error("E-SYN-006", f"{kind.value} expects a single identifier", line.span)
            return
        if kind is K.FEEL_KEYWORD:
            self.feel = line.tokens[1].lexeme
        else:
            self.response = line.tokens[1].lexeme

    def _control(self, line: _Line) -> None:
        text = _Text()
        if len(line.tokens) > 1:
            text.add(line.tokens[1].lexeme)
        self.controls.append((_CONTROL_KINDS[line.kind], text, line.span))
        self.continuation = text

    def _cot(self, line: _Line) -> None:
        kinds = line.kinds()
        expected = [K.COT_KEYWORD, K.IDENTIFIER, K.ARROW, K.AGENT_MARKER, K.IDENTIFIER, K.COLON]
        if kinds[:6] != expected or len(kinds) > 7:
            self.error("E-SYN-006", "COT line must be 'COT: ID -> @AGENT: text'", line.span)
            return
        if self.cot is not None or self.pending_cot is not None:
            self.error("E-SYN-005", "only one COT/CTX pair is supported per block", line.span)
            return
        desc = _Text()
        if len(kinds) == 7:
            desc.add(line.tokens[6].lexeme)
        self.pending_cot = _CotBuilder(line.tokens[1].lexeme, line.tokens[4].lexeme, desc, line.span)
        self.continuation = desc

    def _ctx_open(self, line: _Line) -> None:
        kinds = line.kinds()
        if kinds[:3] != [K.CTX_KEYWORD, K.IDENTIFIER, K.LBRACE] or kinds[3:] not in ([], [K.RBRACE]):
            self.error("E-SYN-006", "CTX line must be 'CTX: ID {'", line.span)
            self.pending_cot = None
            return
        if self.pending_cot is None:
            self.error("E-SYN-007", "CTX line without a preceding COT line", line.span)
            return
        self.cot, self.pending_cot = self.pending_cot, None
        self.ctx_id = line.tokens[1].lexeme
        self.ctx_span = line.span
        if kinds[3:] == [K.RBRACE]:
            return
        self.in_ctx = True
        self.item_target = self.ctx_items

    def _close_ctx(self) -> None:
        self.in_ctx = False
        self.item_target = None
        if self.ctx_span is not None and self.last_line is not None:
            self.ctx_span = self.ctx_span.cover(self.last_line.span)

    def _item(self, line: _Line) -> None:
        if self.item_target is None:
            self.error("E-SYN-004", "'-' item outside TRACE_FE or CTX", line.span)
            return
        kinds = line.kinds()
        if kinds[:3] != [K.DASH, K.IDENTIFIER, K.COLON]:
            self.error("E-SYN-006", "item must be '- label: text (confidence=N)'", line.span)
            return
        item = _ItemBuilder(line.tokens[1].lexeme, _Text(), line.span)
        rest = self._item_tail(line.tokens[3:], item)
        if rest:
            self.error("E-SYN-006", "unexpected tokens in item", line.span)
        self.item_target.append(item)
        if not item.has_clause and not self.lenient:
            self.error("E-SYN-008", f"item {item.label!r} lacks a '(confidence=N)' clause", line.span)
        self.continuation = item

    def _item_tail(self, tokens: Sequence[Token], item: _ItemBuilder) -> list[Token]:
        """Consume ``[TEXT] [(confidence=N)]``; returns leftover tokens."""
        i = 0
        if i < len(tokens) and tokens[i].kind is K.TEXT:
            item.text.add(tokens[i].lexeme)
            i += 1
        if i < len(tokens) and tokens[i].kind is K.LPAREN:
            clause = tokens[i : i + 5]
            item.has_clause = True
            value = clause[3] if len(clause) == 5 and clause[4].kind is K.RPAREN else None
            if value is None:
                # "(confidence=)" with no value: RPAREN sits where the value would.
                self.error("E-SYN-003", "empty confidence value", self.tok_span(tokens[i]))
                return list(tokens[i + 4 :])
            item.confidence = self._confidence(value)
            i += 5
        return list(tokens[i:])

    def _confidence(self, tok: Token) -> float | None:
        span = self.tok_span(tok)
        if tok.kind is K.FLOAT or (tok.kind is K.NUMBER and self.lenient):
            value = float(tok.lexeme)
            if not math.isfinite(value):
                self.error("E-SYN-003", f"confidence {tok.lexeme!r} is not finite", span)
                return None
            return value
        if tok.kind is K.NUMBER:
            self.error("E-SYN-003", f"confidence {tok.lexeme!r} does not match [0-9]*.[0-9]+", span)
        else:
            self.error("E-SYN-003", f"malformed confidence value {tok.lexeme!r}", span)
        return None

    # -- finish ----------------------------------------------------------

    def _finish(self) -> None:
        if self.pending_cot is not None:
            self.error("E-SYN-007", "COT line without a following CTX line", self.pending_cot.span)
        if self.in_ctx:
            assert self.ctx_span is not None
            self.error("E-SYN-007", "unterminated CTX block (missing '}')", self.ctx_span)
        if "trace_fe" in self.line_spans and not self.trace_fe and not self.lenient:
            self.error("E-SYN-006", "TRACE_FE: requires at least one item", self.line_spans["trace_fe"])

    def _build(self, span: Span) -> Block:
        coordination = None
        if self.cot is not None:
            assert self.ctx_id is not None
            coordination = Coordination(
                cot_id=self.cot.cot_id,
                target_agent=self.cot.target,
                task_description=_unquote(self.cot.description.value),
                ctx_id=self.ctx_id,
                ctx_items=tuple(i.build() for i in self.ctx_items),
                cot_span=self.cot.span,
                ctx_span=self.ctx_span,
            )
        return Block(
            task=self.header["task"],
            agent=self.header["agent"],
            context=self.header["context"],
            query=self.query.value,
            factors=tuple(Factor(d, t.value, span=s) for d, t, s in self.factors),
            feel=self.feel,
            trace=self.trace,
            trace_fe=tuple(i.build() for i in self.trace_fe),
            response_format=self.response,
            controls=tuple(ControlDirective(k, t.value, span=s) for k, t, s in self.controls),
            coordination=coordination,
            source_span=span,
            line_spans=self.line_spans,
        )


# --------------------------------------------------------------------------
# public API


def _as_mode(mode: Mode | str) -> Mode:
    return mode if isinstance(mode, Mode) else Mode(mode)


def _parse_lines(lines: Sequence[_Line], mode: Mode) -> ParsedBlock:
    parser = _BlockParser(lines, mode)
    block = parser.parse()
    nonblank = [ln for ln in lines if not ln.is_blank]
    span = None
    if nonblank:
        span = Span(nonblank[0].number, 1, nonblank[-1].number, nonblank[-1].width + 1)
    return ParsedBlock(block, tuple(parser.diagnostics), span)


def try_parse_block(source: str | bytes, mode: Mode | str = Mode.STRICT) -> ParsedBlock:
    """Parse one block, returning the block (if any) with its diagnostics."""
    return _parse_lines(_group_lines(tokenize(source)), _as_mode(mode))


def parse_block(source: str | bytes, mode: Mode | str = Mode.STRICT) -> Block:
    """Parse one block; raises :class:`ParseError` listing every error."""
    result = try_parse_block(source, mode)
    if result.block is None:
        raise ParseError(result.diagnostics)
    return result.block


def parse_document(source: str | bytes, mode: Mode | str = Mode.STRICT) -> list[ParsedBlock]:
    """Split ``source`` at column-0 ``#`` lines and parse each block.

    Errors in one block never prevent the others from parsing. Raises
    :class:`EmptyDocumentError` if no task line is present.
    """
    mode = _as_mode(mode)
    lines = _group_lines(tokenize(source))
    starts = [
        i
        for i, ln in enumerate(lines)
        if ln.kind is K.TASK_MARKER and ln.tokens[0].col == 1
    ]
    if not starts:
        raise EmptyDocumentError("document contains no SynLang block (no line starts with '#')")
    results = []
    bounds = starts + [len(lines)]
    for lo, hi in zip(bounds, bounds[1:]):
        results.append(_parse_lines(lines[lo:hi], mode))
    preamble = [ln for ln in lines[: starts[0]] if not ln.is_blank]
    if preamble:
        stray = Diagnostic(
            Severity.ERROR,
            "E-SYN-004",
            "text before the first task line",
            preamble[0].span.cover(preamble[-1].span),
        )
        first = results[0]
        results[0] = ParsedBlock(first.block, (stray,) + first.diagnostics, first.span)
    return results
