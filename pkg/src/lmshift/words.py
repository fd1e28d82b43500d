"""
Words

Alphabets, words and n-block recoding. Symbols are interned integers; an
:class:`Alphabet` attaches a display name to each one. A word is a plain
tuple of symbols, so the empty word is simply ``()``.
"""

import dataclasses
import functools
import itertools
from typing import Iterable, Iterator, Sequence

import logging

_logger = logging.getLogger(__name__)

Word = tuple[int, ...]

EMPTY_WORD_NAME = "ε"
ENUMERATION_CAP = 10**7


class SymbolError(ValueError):
    """A symbol or symbol name that is not part of the alphabet."""


class OverlapError(ValueError):
    """Consecutive block symbols that do not overlap consistently."""


class EnumerationBoundError(Exception):
    """Raised instead of silently truncating an enumeration."""


@dataclasses.dataclass(frozen=True)
class Alphabet:
    """A finite, ordered alphabet of named symbols.

    Parameters
    ----------
    names : tuple[str, ...]
        Display names; symbol ``i`` is named ``names[i]``.
    blocks : tuple[Word, ...] | None
        For block alphabets, the base word housed by each symbol.
    base : Alphabet | None
        For block alphabets, the alphabet of the base words.
    """

    names: tuple[str, ...]
    blocks: tuple[Word, ...] | None = None
    base: "Alphabet | None" = None

    def __post_init__(self):
        if not self.names:
            raise ValueError("An alphabet needs at least one symbol")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"Duplicate symbol names in {self.names}")
        if any(not name or name.isspace() for name in self.names):
            raise ValueError("Symbol names must be non-empty")
        if (self.blocks is None) != (self.base is None):
            raise ValueError("Block alphabets need both blocks and base")
        if self.blocks is not None and len(self.blocks) != len(self.names):
            raise ValueError("One block per symbol is required")

    @classmethod
    def from_names(cls, names: str | Iterable[str]) -> "Alphabet":
        """Build an alphabet; a plain string gives one symbol per character."""
        if isinstance(names, str):
            names = names.split() if " " in names else list(names)
        return cls(tuple(names))

    @classmethod
    def of_blocks(cls, base: "Alphabet", blocks: Iterable[Word]) -> "Alphabet":
        """Block alphabet whose symbols house the given base words."""
        blocks = tuple(tuple(block) for block in blocks)
        names = tuple(f"({base.render(block, empty='')})" for block in blocks)
        return cls(names, blocks=blocks, base=base)

    @classmethod
    def full_blocks(cls, base: "Alphabet", n: int) -> "Alphabet":
        """Block alphabet of all ``|base|**n`` tuples, in lexicographic order."""
        return cls.of_blocks(base, enumerate_words(base, n))

    def __len__(self):
        return len(self.names)

    def __iter__(self) -> Iterator[int]:
        return iter(range(len(self.names)))

    @property
    def block_length(self) -> int | None:
        if self.blocks is None:
            return None
        return len(self.blocks[0]) if self.blocks else 0

    @functools.cached_property
    def _name_index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    @functools.cached_property
    def _block_index(self) -> dict[Word, int]:
        return {block: i for i, block in enumerate(self.blocks or ())}

    @functools.cached_property
    def _tokens(self) -> tuple[str, ...]:
        return tuple(sorted(self.names, key=len, reverse=True))

    def index(self, name: str) -> int:
        try:
            return self._name_index[name]
        except KeyError:
            raise SymbolError(f"Unknown symbol name '{name}'") from None

    def name(self, symbol: int) -> str:
        self.check((symbol,))
        return self.names[symbol]

    def block_index(self, block: Sequence[int]) -> int:
        """Symbol of a block alphabet that houses ``block``."""
        try:
            return self._block_index[tuple(block)]
        except KeyError:
            shown = self.base.render(tuple(block)) if self.base else block
            raise SymbolError(f"No block symbol for {shown}") from None

    def check(self, word: Sequence[int]) -> Word:
        """Return ``word`` as a tuple, rejecting symbols outside the alphabet."""
        word = tuple(word)
        size = len(self.names)
        for pos, symbol in enumerate(word):
            if not isinstance(symbol, int) or not 0 <= symbol < size:
                raise SymbolError(
                    f"Symbol {symbol!r} at position {pos} is not in the alphabet"
                )
        return word

    def parse(self, text: str) -> Word:
        """Parse text into a word by greedy longest-name matching.

        Whitespace separates symbols but is otherwise ignored; ``ε`` and the
        empty string both denote the empty word.
        """
        text = text.strip()
        if text in ("", EMPTY_WORD_NAME):
            return ()
        word = []
        pos = 0
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            for token in self._tokens:
                if text.startswith(token, pos):
                    word.append(self._name_index[token])
                    pos += len(token)
                    break
            else:
                raise SymbolError(f"Cannot read a symbol at '{text[pos:]}'")
        return tuple(word)

    def render(self, word: Sequence[int], empty: str = EMPTY_WORD_NAME) -> str:
        if not word:
            return empty
        names = [self.name(symbol) for symbol in word]
        compact = self.blocks is not None or all(len(n) == 1 for n in self.names)
        return ("" if compact else " ").join(names)


def factors(word: Sequence[int], k: int) -> tuple[Word, ...]:
    """Distinct length-``k`` factors of ``word`` in order of first occurrence."""
    if k < 1:
        raise ValueError(f"Factor length must be positive, got {k}")
    word = tuple(word)
    windows = (word[i : i + k] for i in range(len(word) - k + 1))
    return tuple(dict.fromkeys(windows))


def block_windows(word: Sequence[int], n: int) -> tuple[Word, ...]:
    """The length-``n`` windows of ``word``, one per position."""
    if n < 1:
        raise ValueError(f"Block length must be positive, got {n}")
    word = tuple(word)
    if len(word) < n:
        raise ValueError(f"Word of length {len(word)} is shorter than n={n}")
    return tuple(word[i : i + n] for i in range(len(word) - n + 1))


def to_nblock(word: Sequence[int], n: int, blocks: Alphabet) -> Word:
    """Recode ``word`` over the n-block alphabet ``blocks``.

    Parameters
    ----------
    word : Sequence[int]
        Word over ``blocks.base``.
    n : int
        Block length; must match ``blocks.block_length``.
    blocks : Alphabet
        Target block alphabet, e.g. :meth:`Alphabet.full_blocks` or the
        alphabet of an n-block system.
    """
    if blocks.block_length != n:
        raise ValueError(f"Alphabet houses {blocks.block_length}-blocks, not {n}")
    return tuple(blocks.block_index(w) for w in block_windows(word, n))


def from_nblock(word: Sequence[int], blocks: Alphabet) -> Word:
    """Left inverse of :func:`to_nblock`: rebuild the base word.

    Raises :class:`OverlapError` when consecutive blocks disagree on their
    common ``n - 1`` base symbols.
    """
    word = blocks.check(word)
    if blocks.blocks is None:
        raise ValueError("from_nblock needs a block alphabet")
    if not word:
        return ()
    base = list(blocks.blocks[word[0]])
    previous = blocks.blocks[word[0]]
    for pos, symbol in enumerate(word[1:], start=1):
        block = blocks.blocks[symbol]
        if block[:-1] != previous[1:]:
            raise OverlapError(
                f"Blocks {blocks.names[word[pos - 1]]} and {blocks.names[symbol]} "
                f"at positions {pos - 1} and {pos} do not overlap"
            )
        base.append(block[-1])
        previous = block
    return tuple(base)


def overlap_break(word: Sequence[int], blocks: Alphabet) -> int | None:
    """Position of the first inconsistent overlap, or None."""
    for pos in range(1, len(word)):
        if blocks.blocks[word[pos]][:-1] != blocks.blocks[word[pos - 1]][1:]:
            return pos
    return None


def iter_words(alphabet: Alphabet, n: int) -> Iterator[Word]:
    """Lazily yield all words of length ``n`` in lexicographic order."""
    if n < 0:
        raise ValueError(f"Word length must be non-negative, got {n}")
    if len(alphabet) ** n > ENUMERATION_CAP:
        raise EnumerationBoundError(
            f"{len(alphabet)}^{n} words exceed the enumeration cap {ENUMERATION_CAP}"
        )
    return itertools.product(range(len(alphabet)), repeat=n)


def enumerate_words(alphabet: Alphabet, n: int) -> list[Word]:
    """All ``|alphabet|**n`` words of length ``n``, lexicographically."""
    return list(iter_words(alphabet, n))


def reverse(word: Sequence[int]) -> Word:
    return tuple(reversed(tuple(word)))


def word_order(word: Word) -> tuple[int, Word]:
    """Sort key: shorter words first, then lexicographic."""
    return (len(word), word)
