import pytest
from hypothesis import given, settings, strategies as st

from lmshift.words import *


@pytest.fixture
def abc():
    return Alphabet.from_names("abc")


class TestAlphabet:
    def test_from_names_string(self, abc):
        assert abc.names == ("a", "b", "c")
        assert len(abc) == 3
        assert list(abc) == [0, 1, 2]

    def test_from_names_spaced(self):
        alphabet = Alphabet.from_names("a1 a2 b c")
        assert alphabet.names == ("a1", "a2", "b", "c")
        assert alphabet.parse("a1 b c a2") == (0, 2, 3, 1)
        assert alphabet.render((0, 2)) == "a1 b"

    @pytest.mark.parametrize(
        "names, match",
        [((), "at least one"), (("a", "a"), "Duplicate"), (("a", ""), "non-empty")],
    )
    def test_invalid(self, names, match):
        with pytest.raises(ValueError, match=match):
            Alphabet(names)

    @pytest.mark.parametrize(
        "text, expected",
        [("abca", (0, 1, 2, 0)), ("a b", (0, 1)), ("", ()), ("ε", ())],
    )
    def test_parse(self, abc, text, expected):
        assert abc.parse(text) == expected

    def test_parse_unknown(self, abc):
        with pytest.raises(SymbolError, match="Cannot read"):
            abc.parse("abd")

    def test_render(self, abc):
        assert abc.render((0, 1, 2)) == "abc"
        assert abc.render(()) == "ε"

    def test_check_rejects_foreign_symbol(self, abc):
        with pytest.raises(SymbolError, match="position 1"):
            abc.check((0, 3))

    def test_block_names(self, abc):
        blocks = Alphabet.full_blocks(abc, 2)
        assert len(blocks) == 9
        assert blocks.names[1] == "(ab)"
        assert blocks.block_length == 2
        assert blocks.parse("(ab)(bc)") == (1, 5)
        assert blocks.render((1, 5)) == "(ab)(bc)"


class TestFactors:
    @pytest.mark.parametrize(
        "text, k, expected",
        [("abca", 2, ["ab", "bc", "ca"]), ("aaa", 1, ["a"]), ("ab", 3, [])],
    )
    def test_factors(self, abc, text, k, expected):
        got = factors(abc.parse(text), k)
        assert [abc.render(f) for f in got] == expected

    def test_zero_length(self, abc):
        with pytest.raises(ValueError, match="positive"):
            factors(abc.parse("ab"), 0)


class TestNBlock:
    @pytest.mark.parametrize(
        "text, n, expected",
        [
            ("abca", 2, "(ab)(bc)(ca)"),
            ("abc", 1, "(a)(b)(c)"),
            ("abbcc", 3, "(abb)(bbc)(bcc)"),
        ],
    )
    def test_to_nblock(self, abc, text, n, expected):
        blocks = Alphabet.full_blocks(abc, n)
        assert blocks.render(to_nblock(abc.parse(text), n, blocks)) == expected

    def test_too_short(self, abc):
        blocks = Alphabet.full_blocks(abc, 3)
        with pytest.raises(ValueError, match="shorter"):
            to_nblock(abc.parse("ab"), 3, blocks)

    def test_wrong_block_alphabet(self, abc):
        with pytest.raises(ValueError, match="2-blocks"):
            to_nblock(abc.parse("abc"), 3, Alphabet.full_blocks(abc, 2))

    def test_from_nblock_overlap(self, abc):
        blocks = Alphabet.full_blocks(abc, 2)
        assert from_nblock(blocks.parse("(ab)(bc)(ca)"), blocks) == abc.parse("abca")
        with pytest.raises(OverlapError, match="do not overlap"):
            from_nblock(blocks.parse("(ab)(ca)"), blocks)
        assert overlap_break(blocks.parse("(ab)(bb)(ca)"), blocks) == 2
        assert overlap_break(blocks.parse("(ab)(bb)"), blocks) is None

    @settings(max_examples=200)
    @given(
        st.lists(st.integers(min_value=0, max_value=2), min_size=3, max_size=10),
        st.integers(min_value=1, max_value=3),
    )
    def test_block_round_trip_properties(self, word, n):
        abc = Alphabet.from_names("abc")
        blocks = Alphabet.full_blocks(abc, n)
        word = tuple(word)
        recoded = to_nblock(word, n, blocks)
        assert len(recoded) == len(word) - n + 1
        assert from_nblock(recoded, blocks) == word
        for left, right in zip(recoded, recoded[1:]):
            assert blocks.blocks[left][1:] == blocks.blocks[right][:-1]
        single = {blocks.blocks[s[0]] for s in factors(recoded, 1)}
        assert single == set(factors(word, n))


class TestEnumerate:
    def test_two(self):
        ab = Alphabet.from_names("ab")
        assert [ab.render(w) for w in enumerate_words(ab, 2)] == [
            "aa",
            "ab",
            "ba",
            "bb",
        ]

    def test_empty_length(self, abc):
        assert enumerate_words(abc, 0) == [()]

    def test_count(self, abc):
        assert len(enumerate_words(abc, 5)) == 243

    def test_cap(self, abc):
        with pytest.raises(EnumerationBoundError, match="cap"):
            enumerate_words(abc, 15)


def test_reverse_and_order():
    assert reverse((0, 1, 2)) == (2, 1, 0)
    assert sorted([(1, 0), (2,), (0, 1)], key=word_order) == [(2,), (0, 1), (1, 0)]
