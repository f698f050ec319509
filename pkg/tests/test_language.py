from __future__ import annotations

import pytest
from odogibbs import Containment, Side, WorkerPool, Word, build_language, contains, count_words, maximal_decompose
from odogibbs.exceptions import InsufficientDepth, WordLengthOverflow
from odogibbs.language import centered, subword_violations, two_sided_radius, word_stats

TABLE = build_language(32)


def test_word():
    word = Word.parse("abbab")

    assert str(word) == "abbab"
    assert word.mask == 0b10110
    assert len(word) == 5
    assert word.beta_count == 3
    assert word.longest_beta_run == 2
    assert str(word[1:3]) == "bb"
    assert str(word + Word.alpha(2)) == "abbabaa"
    assert Word.beta(4).longest_beta_run == 4
    assert Word.alpha(3).beta_count == 0
    assert word_stats(word) == (3, 2)
    assert [letter.bit for letter in Word.parse("ab")] == [0, 1]

    for text in ("", "abc", "ab ba"):
        with pytest.raises(ValueError):
            Word.parse(text)

    with pytest.raises(ValueError):
        Word(2, 4)


@pytest.mark.parametrize(
    "text,expected",
    [
        ("a" * 27, Containment.CERTAIN_IN),
        ("a" * 28, Containment.CERTAIN_OUT),
        ("aba", Containment.CERTAIN_OUT),
        ("b" * 20, Containment.CERTAIN_IN),
        ("abbbbb", Containment.CERTAIN_IN),
        ("abbbba", Containment.CERTAIN_OUT),
    ],
)
def test_contains(text: str, expected: Containment):
    assert contains(TABLE, Word.parse(text)) is expected


@pytest.mark.parametrize("length", (1, 2, 5, 11, 20, 32))
def test_under_inside_over(length: int):
    under = TABLE.masks(length, Side.UNDER)
    over = TABLE.masks(length, Side.OVER)

    assert under <= over
    assert count_words(TABLE, length) == (len(under), len(over))
    assert len(under) <= 2 * (length + 1) ** 3
    assert subword_violations(TABLE, length) == 0


def test_single_letters():
    assert TABLE.count(1) == (2, 2)
    assert [str(w) for w in TABLE.words(1, Side.UNDER)] == ["a", "b"]


def test_build_errors():
    with pytest.raises(InsufficientDepth):
        build_language(10, depth=12)

    with pytest.raises(ValueError):
        build_language(0)

    with pytest.raises(WordLengthOverflow):
        TABLE.masks(33, Side.OVER)


def test_pool_does_not_change_table():
    serial = build_language(16)
    parallel = build_language(16, pool=WorkerPool(3))

    for length in (1, 8, 16):
        for side in Side:
            assert serial.masks(length, side) == parallel.masks(length, side)


def test_radius():
    assert two_sided_radius(Word.beta(11), TABLE) == (6, float("inf"))
    assert two_sided_radius(Word.parse("aabaa"), TABLE) == (1, 1.0)
    assert centered(Word.parse("abbba"), 2) == (3, 0b111)

    with pytest.raises(ValueError):
        two_sided_radius(Word.beta(4), TABLE)


def test_maximal_decompose():
    word = Word.alpha(30)
    decomposition = maximal_decompose(word, TABLE)

    assert decomposition.lengths == [27, 3]
    assert decomposition.cuts == [27]
    assert decomposition.joined() == word
    assert len(decomposition) == 2

    whole = maximal_decompose(Word.beta(9), TABLE)
    assert whole.lengths == [9]
