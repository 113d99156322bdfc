from __future__ import annotations

import pytest

from conftest import CORPUS
from synlang.errors import EmptyDocumentError
from synlang.syntax import parse_block, parse_document

DIALOGUE = ("dialogue_initial_inquiry.syn", "dialogue_modify_reasoning.syn", "dialogue_refined_response.syn")
MINIMAL = "#T\n@A\n=== c ===\n> q\n"


def dialogue_text() -> str:
    return "\n".join((CORPUS / name).read_text(encoding="utf-8") for name in DIALOGUE)


def test_dialogue_blocks_in_order() -> None:
    parsed = parse_document(dialogue_text(), "lenient")
    assert [p.block.task for p in parsed] == ["PHILOSOPHY_ANALYSIS", "MODIFY_REASONING", "RESPONSE"]
    assert all(p.ok and not p.diagnostics for p in parsed)


def test_dialogue_spans_are_document_relative() -> None:
    parsed = parse_document(dialogue_text(), "lenient")
    starts = [p.span.line for p in parsed]
    assert starts[0] == 1 and starts == sorted(starts)
    second_len = (CORPUS / DIALOGUE[0]).read_text().count("\n") + 2
    assert starts[1] == second_len


def test_single_block_document_matches_parse_block() -> None:
    parsed = parse_document(MINIMAL)
    assert len(parsed) == 1 and parsed[0].block == parse_block(MINIMAL)


def test_error_in_second_block_does_not_abort_first() -> None:
    parsed = parse_document(MINIMAL + "\n#U\n@B\n> q\n")
    assert len(parsed) == 2
    assert parsed[0].ok and not parsed[0].diagnostics
    assert not parsed[1].ok
    assert parsed[1].diagnostics[0].code == "E-SYN-001"
    assert parsed[1].diagnostics[0].span.line == 8  # the query line found in its place


def test_hash_inside_text_does_not_split() -> None:
    parsed = parse_document("#T\n@A\n=== c ===\n> issue #42 and\n>> #hashtag in factor\n")
    assert len(parsed) == 1 and parsed[0].block.query == "issue #42 and"


@pytest.mark.parametrize("source", ["", "\n\n", "   \n"])
def test_empty_document(source: str) -> None:
    with pytest.raises(EmptyDocumentError):
        parse_document(source)


def test_preamble_is_reported() -> None:
    parsed = parse_document("stray text\n" + MINIMAL)
    assert parsed[0].block is not None
    assert "E-SYN-004" in [d.code for d in parsed[0].diagnostics]


def test_crlf_line_endings() -> None:
    parsed = parse_document(MINIMAL.replace("\n", "\r\n") * 2)
    assert [p.block for p in parsed] == [parse_block(MINIMAL)] * 2
