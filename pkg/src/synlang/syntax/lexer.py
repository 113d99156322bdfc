"""Lossless, line-oriented tokenizer for SynLang.

``<text>`` runs to end of line, so each physical line is classified by its
leading marker and the remainder is lexed according to that line type.
Whitespace is kept as WHITESPACE trivia tokens, so joining every token's
lexeme reproduces the input exactly. Anything that does not fit the expected
shape of its line is emitted as TEXT and left for the parser to report.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from synlang.errors import SynLangEncodingError
from synlang.syntax.model import IDENTIFIER_RE


class TokenKind(Enum):
    TASK_MARKER = "#"
    AGENT_MARKER = "@"
    CONTEXT_DELIM = "==="
    QUERY_MARKER = ">"
    FACTOR_MARKER = ">>"
    SUBFACTOR_MARKER = ">>>"
    TRACE_KEYWORD = "TRACE:"
    TRACE_FE_KEYWORD = "TRACE_FE:"
    FEEL_KEYWORD = "FEEL:"
    RESPONSE_KEYWORD = "R:"
    MOD_KEYWORD = "MOD:"
    ONLY_KEYWORD = "ONLY:"
    PREFER_KEYWORD = "PREFER:"
    SOFT_EXCLUDE = "-!"
    HARD_EXCLUDE = "-!!"
    COMMENT_MARKER = "//"
    COT_KEYWORD = "COT:"
    CTX_KEYWORD = "CTX:"
    ARROW = "->"
    DASH = "-"
    COLON = ":"
    COMMA = ","
    LBRACE = "{"
    RBRACE = "}"
    LPAREN = "("
    CONFIDENCE_KEYWORD = "confidence"
    EQUALS = "="
    RPAREN = ")"
    FLOAT = "float"
    NUMBER = "number"
    IDENTIFIER = "identifier"
    TEXT = "text"
    NEWLINE = "newline"
    WHITESPACE = "whitespace"

    @property
    def is_trivia(self) -> bool:
        return self is TokenKind.WHITESPACE


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    lexeme: str
    line: int
    col: int
    offset: int

    @property
    def value(self) -> str | float:
        if self.kind in (TokenKind.FLOAT, TokenKind.NUMBER):
            return float(self.lexeme)
        return self.lexeme

    @property
    def end_col(self) -> int:
        return self.col + len(self.lexeme)


# Longest markers first: ">>>" before ">>", "-!!" before "-!", "TRACE_FE:" is
# not a prefix clash with "TRACE:" but is listed first for clarity.
_LINE_STARTS: tuple[tuple[str, TokenKind], ...] = (
    ("TRACE_FE:", TokenKind.TRACE_FE_KEYWORD),
    ("TRACE:", TokenKind.TRACE_KEYWORD),
    ("FEEL:", TokenKind.FEEL_KEYWORD),
    ("R:", TokenKind.RESPONSE_KEYWORD),
    ("MOD:", TokenKind.MOD_KEYWORD),
    ("ONLY:", TokenKind.ONLY_KEYWORD),
    ("PREFER:", TokenKind.PREFER_KEYWORD),
    ("COT:", TokenKind.COT_KEYWORD),
    ("CTX:", TokenKind.CTX_KEYWORD),
    ("===", TokenKind.CONTEXT_DELIM),
    (">>>", TokenKind.SUBFACTOR_MARKER),
    (">>", TokenKind.FACTOR_MARKER),
    (">", TokenKind.QUERY_MARKER),
    ("-!!", TokenKind.HARD_EXCLUDE),
    ("-!", TokenKind.SOFT_EXCLUDE),
    ("//", TokenKind.COMMENT_MARKER),
    ("#", TokenKind.TASK_MARKER),
    ("@", TokenKind.AGENT_MARKER),
    ("}", TokenKind.RBRACE),
    ("-", TokenKind.DASH),
)

_WS_RE = re.compile(r"[ \t]+")
_CONFIDENCE_RE = re.compile(r"\(confidence=([^()\s]*)\)[ \t]*$")
_FLOAT_RE = re.compile(r"[0-9]*\.[0-9]+")
_NUMBER_RE = re.compile(r"[+-]?(?:[0-9]+\.?[0-9]*|\.[0-9]+)(?:[eE][+-]?[0-9]+)?")


def decode_source(data: bytes) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise SynLangEncodingError(exc.start) from None


def tokenize(source: str | bytes) -> list[Token]:
    """Split ``source`` into tokens, trivia included.

    ``bytes`` input is decoded as UTF-8; invalid input raises
    :class:`SynLangEncodingError` carrying the offending byte offset.
    """
    if isinstance(source, bytes):
        source = decode_source(source)
    tokens: list[Token] = []
    pos = 0
    lineno = 1
    while pos < len(source):
        nl = source.find("\n", pos)
        end = len(source) if nl == -1 else nl
        body_end = end - 1 if nl != -1 and end > pos and source[end - 1] == "\r" else end
        _LineLexer(source, pos, body_end, lineno, tokens).run()
        if nl == -1:
            break
        tokens.append(Token(TokenKind.NEWLINE, source[body_end : nl + 1], lineno, body_end - pos + 1, body_end))
        pos = nl + 1
        lineno += 1
    return tokens


def significant(tokens: list[Token]) -> list[Token]:
    return [tok for tok in tokens if not tok.kind.is_trivia]


class _LineLexer:
    def __init__(self, source: str, start: int, end: int, lineno: int, out: list[Token]) -> None:
        self.src = source
        self.start = start
        self.pos = start
        self.end = end
        self.lineno = lineno
        self.out = out

    def emit(self, kind: TokenKind, length: int) -> None:
        if length <= 0:
            return
        lexeme = self.src[self.pos : self.pos + length]
        self.out.append(Token(kind, lexeme, self.lineno, self.pos - self.start + 1, self.pos))
        self.pos += length

    def ws(self) -> None:
        m = _WS_RE.match(self.src, self.pos, self.end)
        if m:
            self.emit(TokenKind.WHITESPACE, m.end() - m.start())

    def lit(self, text: str, kind: TokenKind) -> bool:
        if self.src.startswith(text, self.pos, self.end):
            self.emit(kind, len(text))
            return True
        return False

    def ident(self) -> bool:
        m = IDENTIFIER_RE.match(self.src, self.pos, self.end)
        if m:
            self.emit(TokenKind.IDENTIFIER, m.end() - m.start())
            return True
        return False

    def text(self, end: int | None = None) -> None:
        """Emit ``[pos, end)`` as TEXT with trailing whitespace split off."""
        end = self.end if end is None else end
        stripped = self.src[self.pos : end].rstrip(" \t")
        self.emit(TokenKind.TEXT, len(stripped))
        self.emit(TokenKind.WHITESPACE, end - self.pos)

    def rest(self) -> None:
        self.ws()
        self.text()

    def text_with_confidence(self) -> None:
        segment = self.src[self.pos : self.end]
        m = _CONFIDENCE_RE.search(segment)
        if m is None:
            self.text()
            return
        self.text(self.pos + m.start())
        self.emit(TokenKind.LPAREN, 1)
        self.emit(TokenKind.CONFIDENCE_KEYWORD, len("confidence"))
        self.emit(TokenKind.EQUALS, 1)
        value = m.group(1)
        if _FLOAT_RE.fullmatch(value):
            kind = TokenKind.FLOAT
        elif _NUMBER_RE.fullmatch(value):
            kind = TokenKind.NUMBER
        else:
            kind = TokenKind.TEXT
        self.emit(kind, len(value))
        self.emit(TokenKind.RPAREN, 1)
        self.ws()

    def run(self) -> None:
        self.ws()
        if self.pos >= self.end:
            return
        for marker, kind in _LINE_STARTS:
            if self.src.startswith(marker, self.pos, self.end):
                self.emit(kind, len(marker))
                getattr(self, f"_after_{kind.name.lower()}", self._after_text_line)(kind)
                return
        self.text_with_confidence()

    def _after_text_line(self, kind: TokenKind) -> None:
        self.rest()

    def _after_task_marker(self, kind: TokenKind) -> None:
        self.ident()
        self.rest()

    _after_agent_marker = _after_task_marker

    def _after_feel_keyword(self, kind: TokenKind) -> None:
        self.ws()
        self.ident()
        self.rest()

    _after_response_keyword = _after_feel_keyword

    def _after_trace_keyword(self, kind: TokenKind) -> None:
        self.ws()
        while self.ident():
            self.ws()
            if not self.lit(",", TokenKind.COMMA):
                break
            self.ws()
        self.rest()

    def _after_context_delim(self, kind: TokenKind) -> None:
        close = self.src.rfind("===", self.pos, self.end)
        if close == -1:
            self.rest()
            return
        self.ws()
        self.text(close)
        self.emit(TokenKind.CONTEXT_DELIM, 3)
        self.rest()

    def _after_cot_keyword(self, kind: TokenKind) -> None:
        self.ws()
        if not self.ident():
            return self.rest()
        self.ws()
        if not self.lit("->", TokenKind.ARROW):
            return self.rest()
        self.ws()
        if not self.lit("@", TokenKind.AGENT_MARKER) or not self.ident():
            return self.rest()
        self.ws()
        if not self.lit(":", TokenKind.COLON):
            return self.rest()
        self.rest()

    def _after_ctx_keyword(self, kind: TokenKind) -> None:
        self.ws()
        if not self.ident():
            return self.rest()
        self.ws()
        if self.lit("{", TokenKind.LBRACE):
            self.ws()
            self.lit("}", TokenKind.RBRACE)
        self.rest()

    def _after_rbrace(self, kind: TokenKind) -> None:
        self.rest()

    def _after_trace_fe_keyword(self, kind: TokenKind) -> None:
        self.rest()

    def _after_dash(self, kind: TokenKind) -> None:
        self.ws()
        if not self.ident():
            return self.text_with_confidence()
        self.ws()
        if not self.lit(":", TokenKind.COLON):
            return self.rest()
        self.ws()
        self.text_with_confidence()
