"""Seeded random generator of grammar-valid (strict) SynLang blocks.

The generator works on source text rather than on model objects so that the
lexer and parser are exercised on varied surface forms: optional blank
lines, leading-dot floats, trailing zeros, extra spacing, empty sections.
"""

from __future__ import annotations

import random
import string

WORDS = (
    "signal noise frame audio pixel source vendor risk audit patient dose trial "
    "cohort ledger budget claim latency model drift review priority policy 42 3.5 "
    "v2 x-ray over/under a&b 50% e.g. well-known naïve café"
).split()

PUNCT_TAILS = ("", "", "", "?", ".", "!", ";")
FEELINGS = ("urgent", "calm", "curious", "focused", "cautious")
FORMATS = ("Structured", "Bulletpoint", "Table", "Plain", "JSON", "Code")
CONTROL_PREFIXES = ("MOD:", "ONLY:", "PREFER:", "-!", "-!!", "//")


def identifier(rng: random.Random, upper: bool = False) -> str:
    first = rng.choice(string.ascii_uppercase if upper else string.ascii_letters + "_")
    tail_chars = (string.ascii_uppercase if upper else string.ascii_lowercase) + string.digits + "_"
    return first + "".join(rng.choice(tail_chars) for _ in range(rng.randint(0, 10)))


def phrase(rng: random.Random, lo: int = 1, hi: int = 6) -> str:
    return " ".join(rng.choice(WORDS) for _ in range(rng.randint(lo, hi))) + rng.choice(PUNCT_TAILS)


def confidence(rng: random.Random) -> str:
    value = rng.random()
    style = rng.randrange(4)
    if style == 0:
        return f"{value:.2f}"
    if style == 1:
        return f"{value:.4f}".lstrip("0") or ".0"
    if style == 2:
        return rng.choice(("0.0", "1.0", "0.5", ".25", "0.100"))
    return repr(round(value, 6)) if "e" not in repr(round(value, 6)) else "0.000001"


def item(rng: random.Random, label: str | None = None) -> str:
    label = label or identifier(rng)
    gap = rng.choice((" ", "  "))
    explanation = phrase(rng) if rng.random() < 0.9 else ""
    body = f"{label}:{gap}{explanation}".rstrip()
    return f"{rng.choice(('  ', '    ', ''))}- {body} (confidence={confidence(rng)})"


def block(rng: random.Random) -> str:
    lines = [f"#{identifier(rng, upper=True)}", f"@{identifier(rng, upper=True)}"]
    lines.append(f"=== {phrase(rng)} ===")
    lines.append(f"> {phrase(rng, 2, 8)}")
    body: list[str] = []
    depth_two_allowed = False
    for _ in range(rng.randint(0, 4)):
        if depth_two_allowed and rng.random() < 0.4:
            body.append(f">>> {phrase(rng)}")
        else:
            body.append(f">> {phrase(rng)}")
            depth_two_allowed = True
    if rng.random() < 0.5:
        body.append(f"FEEL: {rng.choice(FEELINGS)}")
    labels = list(dict.fromkeys(identifier(rng) for _ in range(rng.randint(0, 4))))
    if labels and rng.random() < 0.8:
        body.append("TRACE: " + rng.choice((", ", ",")).join(labels))
    if rng.random() < 0.6:
        body.append("TRACE_FE:")
        for _ in range(rng.randint(1, 4)):
            body.append(item(rng, rng.choice(labels) if labels and rng.random() < 0.7 else None))
    if rng.random() < 0.5:
        body.append(f"R: {rng.choice(FORMATS)}")
    for _ in range(rng.randint(0, 3)):
        body.append(f"{rng.choice(CONTROL_PREFIXES)} {phrase(rng)}")
    if rng.random() < 0.4:
        cot = "COT_" + identifier(rng)
        body.append(f'COT: {cot} -> @{identifier(rng, upper=True)}: "{phrase(rng)}"')
        body.append(f"CTX: {cot} {{")
        for _ in range(rng.randint(1, 3)):
            body.append(item(rng))
        body.append("}")
    out: list[str] = []
    for line in body:
        if rng.random() < 0.05:
            out.append("")
        out.append(line)
    return "\n".join(lines + out) + "\n"


def blocks(seed: int, count: int) -> list[str]:
    rng = random.Random(seed)
    return [block(rng) for _ in range(count)]
