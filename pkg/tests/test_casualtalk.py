"""Pattern book loading and AIML-style matching semantics."""

import pytest
from hypothesis import given, strategies as st

from atreya import casualtalk
from atreya.casualtalk import (
    Category,
    DuplicatePatternError,
    LoadError,
    PatternBook,
    load_default_book,
    load_patterns,
    respond,
    tokenize,
)
from atreya.grammar import Utterance


def book_of(*entries: tuple[str, str], fallback: str | None = None) -> PatternBook:
    body = "".join(
        f"<category><pattern>{p}</pattern><template>{t}</template></category>"
        for p, t in entries
    )
    if fallback:
        body += f"<fallback>{fallback}</fallback>"
    return load_patterns(f"<patterns>{body}</patterns>")


def ask(book: PatternBook, text: str) -> str:
    return respond(book, Utterance.of(text))


class TestTokenize:
    def test_punctuation_stripped(self):
        assert tokenize("Hello, friend!") == ("hello", "friend")

    def test_apostrophes_kept(self):
        assert tokenize("what's up") == ("what's", "up")

    def test_empty(self):
        assert tokenize("...") == ()


class TestMatching:
    def test_exact_match(self):
        book = book_of(("HELLO", "Hi!"))
        assert ask(book, "hello") == "Hi!"
        assert ask(book, "Hello!!") == "Hi!"

    def test_no_match_falls_back(self):
        book = book_of(("HELLO", "Hi!"), fallback="Beats me.")
        assert ask(book, "bonjour") == "Beats me."

    def test_wildcard_binds_one_or_more_words(self):
        book = book_of(("WHAT IS *", "I looked up {star}."))
        assert ask(book, "what is aspirin") == "I looked up aspirin."
        assert ask(book, "what is a beta blocker") == "I looked up a beta blocker."

    def test_wildcard_requires_at_least_one_word(self):
        book = book_of(("WHAT IS *", "Got {star}."), fallback="nope")
        assert ask(book, "what is") == "nope"

    def test_trailing_literals_after_wildcard(self):
        book = book_of(("IS * GOOD", "Verdict on {star}: yes."))
        assert ask(book, "is coffee good") == "Verdict on coffee: yes."
        assert ask(book, "is strong coffee good") == "Verdict on strong coffee: yes."

    def test_exact_beats_wildcard(self):
        book = book_of(("HELLO *", "wild"), ("HELLO THERE", "exact"))
        assert ask(book, "hello there") == "exact"

    def test_more_literal_words_win(self):
        book = book_of(("TELL *", "short"), ("TELL ME ABOUT *", "long"))
        assert ask(book, "tell me about aspirin") == "long"

    def test_document_order_breaks_ties(self):
        book = book_of(("SAY * NOW", "first"), ("SAY IT *", "second"))
        assert ask(book, "say it now") == "first"

    def test_fallback_is_always_non_empty(self):
        book = book_of(("HELLO", "Hi!"))
        assert ask(book, "xyzzy") == casualtalk.DEFAULT_FALLBACK

    @given(st.text(max_size=40))
    def test_respond_total_and_non_empty(self, text):
        book = load_default_book()
        assert respond(book, Utterance.of(text)).strip()


class TestLoading:
    def test_default_book_loads(self):
        book = load_default_book()
        assert len(book.categories) >= 10
        assert ask(book, "hello")
        assert "Atreya" in ask(book, "who are you")

    def test_malformed_xml_reports_position(self):
        with pytest.raises(LoadError) as exc:
            load_patterns("<patterns><category>")
        assert "line" in str(exc.value)

    def test_duplicate_pattern_rejected(self):
        with pytest.raises(DuplicatePatternError):
            book_of(("HELLO", "a"), ("hello", "b"))

    def test_empty_pattern_rejected(self):
        with pytest.raises(LoadError):
            load_patterns(
                "<patterns><category><pattern> </pattern>"
                "<template>x</template></category></patterns>"
            )

    def test_missing_template_rejected(self):
        with pytest.raises(LoadError):
            load_patterns("<patterns><category><pattern>HI</pattern></category></patterns>")

    def test_two_wildcards_rejected(self):
        with pytest.raises(LoadError):
            book_of(("A * B *", "x"))

    def test_unexpected_element_rejected(self):
        with pytest.raises(LoadError):
            load_patterns("<patterns><chapter/></patterns>")

    def test_custom_fallback(self):
        book = book_of(("HELLO", "Hi!"), fallback="Custom answer.")
        assert ask(book, "qwerty") == "Custom answer."

    def test_load_pattern_file(self, tmp_path):
        path = tmp_path / "book.xml"
        path.write_text(
            "<patterns><category><pattern>PING</pattern>"
            "<template>pong</template></category></patterns>",
            encoding="utf-8",
        )
        book = casualtalk.load_pattern_file(path)
        assert ask(book, "ping") == "pong"


class TestCategory:
    def test_empty_pattern_invalid(self):
        with pytest.raises(ValueError):
            Category(pattern=(), template="x")

    def test_literal_word_count(self):
        assert Category(pattern=("A", "*", "B"), template="x").literal_words == 2
