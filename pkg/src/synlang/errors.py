"""Exception hierarchy shared across the package."""

from __future__ import annotations

from typing import TYPE_CHECKING, Sequence

if TYPE_CHECKING:
    from synlang.syntax.model import Diagnostic


class SynLangError(Exception):
    """Base class for every error raised by synlang."""


class SynLangEncodingError(SynLangError, ValueError):
    """Input bytes are not valid UTF-8."""

    def __init__(self, offset: int, reason: str = "invalid UTF-8") -> None:
        self.offset = offset
        super().__init__(f"{reason} at byte offset {offset}")


class ParseError(SynLangError):
    """A block failed to parse; ``diagnostics`` holds every error found."""

    def __init__(self, diagnostics: Sequence[Diagnostic]) -> None:
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0] if self.diagnostics else None
        summary = f"{first.code}: {first.message}" if first else "parse failed"
        extra = len(self.diagnostics) - 1
        if extra > 0:
            summary += f" (+{extra} more)"
        super().__init__(summary)


class EmptyDocumentError(SynLangError):
    """A document contained no SynLang block at all."""


class ConfigError(SynLangError, ValueError):
    """Malformed configuration, manifest, profile or weights file."""


class RegistrationError(SynLangError):
    """An agent name was registered twice."""


class RoutingError(SynLangError):
    """A handoff could not be delivered (``code`` is E-ROUTE-00x)."""

    def __init__(self, code: str, message: str) -> None:
        self.code = code
        super().__init__(f"{code}: {message}")


class HandoffRefused(SynLangError):
    """A coordination block carried error-severity diagnostics."""

    def __init__(self, diagnostics: Sequence[Diagnostic]) -> None:
        self.diagnostics = list(diagnostics)
        codes = ", ".join(d.code for d in self.diagnostics)
        super().__init__(f"handoff refused: {codes}")
