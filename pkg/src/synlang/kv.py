"""Reader for the flat ``key = value`` text files used for configuration.

Rule configs, authority weights/profiles and simulation manifests all share
this format::

    # comment
    E-CONF-001 = warning
    agent.AI_FORENSICS.trust = 0.9

Blank lines and lines starting with ``#`` or ``;`` are ignored.
"""

from __future__ import annotations

import math
from pathlib import Path

from synlang.errors import ConfigError


def parse_kv(text: str, source: str = "<string>") -> dict[str, str]:
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(("#", ";")):
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        if key in entries:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        entries[key] = value
    return entries


def read_kv(path: str | Path) -> dict[str, str]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ConfigError(f"{path}: invalid UTF-8 at byte offset {exc.start}") from exc
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return parse_kv(text, source=str(path))


def parse_float(value: str, key: str, source: str = "<string>") -> float:
    try:
        number = float(value)
    except ValueError:
        raise ConfigError(f"{source}: {key} must be a number, got {value!r}") from None
    if not math.isfinite(number):
        raise ConfigError(f"{source}: {key} must be finite, got {value!r}")
    return number
