"""Small-talk engine in the AIML tradition: pattern/template categories.

A pattern is a word sequence where a single ``*`` matches one or more
words. Templates may reference the matched words through ``{star}``. The
engine is deliberately tiny: no recursion, no topics, no context - enough
to greet users and answer questions about the bot itself.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from importlib import resources

from .grammar import Utterance

DEFAULT_FALLBACK = (
    "I did not catch that. I can chat a little, but my real talent is "
    "searching the ChEMBL database - try a keyword query like msy/aspirin, "
    "or send /start for the menu."
)


class LoadError(Exception):
    """Pattern document is malformed; message carries line/position."""


class DuplicatePatternError(LoadError):
    def __init__(self, pattern: str):
        self.pattern = pattern
        super().__init__(f"duplicate pattern: {pattern!r}")


@dataclass(frozen=True)
class Category:
    pattern: tuple[str, ...]  # uppercased tokens, at most one "*"
    template: str

    def __post_init__(self):
        if not self.pattern:
            raise ValueError("pattern must not be empty")
        if self.pattern.count("*") > 1:
            raise ValueError("at most one wildcard per pattern")
        if not self.template.strip():
            raise ValueError("template must not be empty")

    @property
    def literal_words(self) -> int:
        return len(self.pattern) - self.pattern.count("*")


@dataclass
class PatternBook:
    categories: list[Category] = field(default_factory=list)
    fallback: str = DEFAULT_FALLBACK


_WORD_RE = re.compile(r"[a-z0-9']+")


def tokenize(text: str) -> tuple[str, ...]:
    """Lowercase words, punctuation stripped. Matching operates on these."""
    return tuple(_WORD_RE.findall(text.lower()))


def parse_pattern(text: str) -> tuple[str, ...]:
    tokens = tuple(
        tok if tok == "*" else tok.upper() for tok in text.split()
    )
    return tokens


def load_patterns(document: str) -> PatternBook:
    """Parse a pattern document into a PatternBook, preserving order.

    The document is XML: a ``<patterns>`` root holding ``<category>``
    elements (each with ``<pattern>`` and ``<template>`` children) and an
    optional ``<fallback>``. See docs/patterns.md for the schema.
    """
    try:
        root = ET.fromstring(document)
    except ET.ParseError as exc:
        line, col = exc.position
        raise LoadError(f"malformed pattern document at line {line}, column {col}: {exc}") from exc

    book = PatternBook()
    seen: set[tuple[str, ...]] = set()
    for index, element in enumerate(root, start=1):
        if element.tag == "fallback":
            text = (element.text or "").strip()
            if not text:
                raise LoadError(f"entry {index}: empty <fallback>")
            book.fallback = text
            continue
        if element.tag != "category":
            raise LoadError(f"entry {index}: unexpected element <{element.tag}>")
        pattern_el = element.find("pattern")
        template_el = element.find("template")
        if pattern_el is None or not (pattern_el.text or "").strip():
            raise LoadError(f"category {index}: missing or empty <pattern>")
        if template_el is None or not (template_el.text or "").strip():
            raise LoadError(f"category {index}: missing or empty <template>")
        try:
            category = Category(
                pattern=parse_pattern(pattern_el.text.strip()),
                template=template_el.text.strip(),
            )
        except ValueError as exc:
            raise LoadError(f"category {index}: {exc}") from exc
        key = tuple(tok.lower() for tok in category.pattern)
        if key in seen:
            raise DuplicatePatternError(pattern_el.text.strip())
        seen.add(key)
        book.categories.append(category)
    return book


def load_pattern_file(path) -> PatternBook:
    with open(path, encoding="utf-8") as handle:
        return load_patterns(handle.read())


def load_default_book() -> PatternBook:
    document = resources.files("atreya").joinpath("patterns/default.xml").read_text("utf-8")
    return load_patterns(document)


def _match(pattern: tuple[str, ...], words: tuple[str, ...]) -> tuple[str, ...] | None:
    """Match words against a pattern; returns the wildcard binding.

    Exact patterns return () on success, wildcard patterns return the one
    or more words bound to ``*``. None means no match.
    """
    lowered = tuple(tok.lower() for tok in pattern)
    if "*" not in lowered:
        return () if lowered == words else None
    star = lowered.index("*")
    head, tail = lowered[:star], lowered[star + 1:]
    if len(words) < len(head) + len(tail) + 1:
        return None
    if words[:len(head)] != head:
        return None
    if tail and words[-len(tail):] != tail:
        return None
    bound = words[len(head):len(words) - len(tail)]
    return bound if bound else None


def respond(book: PatternBook, u: Utterance) -> str:
    """Pick the best-matching template for an utterance.

    Exact patterns beat wildcard patterns; among wildcard matches the one
    with the most literal words wins, document order breaking ties. Always
    returns non-empty text (the fallback if nothing matches).
    """
    words = tokenize(u.normalized)
    best_rank: tuple[int, int, int] | None = None
    best_template = ""
    best_bound: tuple[str, ...] = ()
    for order, category in enumerate(book.categories):
        bound = _match(category.pattern, words)
        if bound is None:
            continue
        exact = "*" not in category.pattern
        rank = (1 if exact else 0, category.literal_words, -order)
        if best_rank is None or rank > best_rank:
            best_rank = rank
            best_template = category.template
            best_bound = bound
    if best_rank is None:
        return book.fallback
    return best_template.replace("{star}", " ".join(best_bound))
