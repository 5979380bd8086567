"""Whitespace tokenization with optional sentence-final period stripping.

The legacy behaviour keeps a period glued to the word it follows
("honor." stays one token). Setting ``strip_trailing_period`` removes a
single trailing dot from every token longer than one character.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

_NON_SPACE = re.compile(r"\S+")


@dataclass(frozen=True)
class TokenizerConfig:
    strip_trailing_period: bool = False
    lowercase: bool = True


@dataclass(frozen=True)
class TokenSequence:
    """Tokens plus their ``(start, end)`` character offsets in the source text."""

    tokens: list[str] = field(default_factory=list)
    spans: list[tuple[int, int]] = field(default_factory=list)

    def __len__(self):
        return len(self.tokens)


def strip_trailing_period(token: str) -> str:
    if len(token) > 1 and token.endswith("."):
        return token[:-1]
    return token


def tokenize(text: str, config: TokenizerConfig | None = None) -> TokenSequence:
    config = config or TokenizerConfig()
    tokens = []
    spans = []
    for m in _NON_SPACE.finditer(text):
        start, end = m.span()
        tok = m.group()
        if config.strip_trailing_period:
            stripped = strip_trailing_period(tok)
            end -= len(tok) - len(stripped)
            tok = stripped
        if config.lowercase:
            tok = tok.lower()
        tokens.append(tok)
        spans.append((start, end))
    return TokenSequence(tokens, spans)


def tokenize_words(text: str, config: TokenizerConfig | None = None) -> list[str]:
    return tokenize(text, config).tokens
