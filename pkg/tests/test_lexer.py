from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import CORPUS
from synlang.errors import SynLangEncodingError
from synlang.syntax.lexer import TokenKind as K
from synlang.syntax.lexer import decode_source, significant, tokenize


def kinds(source: str) -> list[K]:
    return [t.kind for t in significant(tokenize(source))]


def test_task_line_tokens() -> None:
    tokens = significant(tokenize("#EVALUATE\n"))
    assert [t.kind for t in tokens] == [K.TASK_MARKER, K.IDENTIFIER, K.NEWLINE]
    assert tokens[1].lexeme == "EVALUATE"


def test_trace_line_tokens() -> None:
    assert kinds("TRACE: lip_sync, background_artifacts") == [K.TRACE_KEYWORD, K.IDENTIFIER, K.COMMA, K.IDENTIFIER]


def test_confidence_clause_tokens() -> None:
    tokens = significant(tokenize("  - lip_sync: 120ms delay (confidence=0.94)"))
    tail = tokens[-5:]
    assert [t.kind for t in tail] == [K.LPAREN, K.CONFIDENCE_KEYWORD, K.EQUALS, K.FLOAT, K.RPAREN]
    assert tail[3].value == pytest.approx(0.94)


def test_leading_dot_float_is_float() -> None:
    value = [t for t in tokenize("  - a: b (confidence=.5)") if t.kind is K.FLOAT]
    assert value[0].value == 0.5


def test_integer_confidence_is_number_token() -> None:
    assert K.NUMBER in kinds("  - a: b (confidence=1)")


def test_parenthesis_inside_text_is_not_a_clause() -> None:
    ks = kinds("  - a: see (confidence=0.5) later")
    assert K.CONFIDENCE_KEYWORD not in ks


def test_positions_are_one_based() -> None:
    tokens = significant(tokenize("#T\n@A\n"))
    agent = next(t for t in tokens if t.kind is K.AGENT_MARKER)
    assert (agent.line, agent.col) == (2, 1)


def test_invalid_utf8_reports_offset() -> None:
    with pytest.raises(SynLangEncodingError) as info:
        tokenize(b"#T\n@A\xff\n")
    assert info.value.offset == 5


def test_decode_strips_nothing() -> None:
    assert decode_source("é".encode()) == "é"


def test_fixture_lexemes_reconstruct_source() -> None:
    for path in CORPUS.glob("*.syn"):
        text = path.read_text(encoding="utf-8")
        assert "".join(t.lexeme for t in tokenize(text)) == text


@given(st.text())
def test_token_coverage_is_lossless(source: str) -> None:
    assert "".join(t.lexeme for t in tokenize(source)) == source


@given(st.text(alphabet=st.sampled_from(list("#@=>-!/:(){},. \t\nTRACE_FEOCXcnfide0123456789"))))
def test_token_coverage_on_marker_heavy_input(source: str) -> None:
    tokens = tokenize(source)
    assert "".join(t.lexeme for t in tokens) == source
    assert all(t.lexeme for t in tokens)
