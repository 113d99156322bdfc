"""Lexing, parsing, canonical formatting and JSON export of SynLang blocks."""

from synlang.syntax.export import export_document_json, export_json, import_json
from synlang.syntax.formatter import format_canonical, format_confidence, format_document
from synlang.syntax.lexer import Token, TokenKind, significant, tokenize
from synlang.syntax.model import (
    Block,
    ControlDirective,
    ControlKind,
    Coordination,
    Diagnostic,
    Factor,
    ResponseFormat,
    Severity,
    Span,
    TraceItem,
)
from synlang.syntax.parser import Mode, ParsedBlock, parse_block, parse_document, try_parse_block

__all__ = [
    "Block",
    "ControlDirective",
    "ControlKind",
    "Coordination",
    "Diagnostic",
    "Factor",
    "Mode",
    "ParsedBlock",
    "ResponseFormat",
    "Severity",
    "Span",
    "Token",
    "TokenKind",
    "TraceItem",
    "export_document_json",
    "export_json",
    "format_canonical",
    "format_confidence",
    "format_document",
    "import_json",
    "parse_block",
    "parse_document",
    "significant",
    "tokenize",
    "try_parse_block",
]
