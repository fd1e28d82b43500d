"""
Synchronization

Depth-bounded certificates that a word is synchronizing, the synchronizing
symbols, the word set 𝓑(X) of words that begin and end with a
synchronizing symbol and have none in between, strong synchronization, and
the Markov codes obtained from 𝓑(X) by cutting off the last (minus side)
or first (plus side) symbol.

A word ``w`` is synchronizing if ``uw`` and ``wv`` admissible imply ``uwv``
admissible. The bounded check tries ``u`` and ``v`` of equal length up to
the depth; by factor closure, unequal lengths add nothing.

For subshifts that reduce to a Lind-Marcus spec through n-block and
reversal wrappers the answer is exact: a non-empty base word is
synchronizing iff it contains an a-type symbol or the factor ``cb``. Such
a word cuts every ``σ b^k c^l σ'`` pattern, while a word ``b^k c^l`` is
refuted by contexts of length two.
"""

import dataclasses
import functools
from typing import Sequence

from .shiftspaces import (
    InadmissibleWord,
    LindMarcus,
    MarkovCode,
    CodeSpec,
    NBlock,
    Reversed,
    SubshiftSpec,
    extend,
)
from .words import Word, reverse, word_order

import logging

_logger = logging.getLogger(__name__)

DEFAULT_DEPTH = 6
DEFAULT_MAXLEN = 16
DEFAULT_Q_MAX = 3
WITNESS_LIMIT = 10
# certificates kept across calls; keys hold the spec alive
CERTIFICATE_CACHE = 4096


class SynchroError(Exception):
    """Raised when there is no word set to build a code from."""


@dataclasses.dataclass(frozen=True)
class SynchroCertificate:
    """Synchronizing to ``depth``, or refuted by ``witness = (u, v)``.

    ``exact`` marks verdicts from the Lind-Marcus structural test, which
    hold at every depth.
    """

    word: Word
    depth: int
    synchronizing: bool
    witness: tuple[Word, Word] | None = None
    exact: bool = False


def lind_marcus_base(spec: SubshiftSpec, word: Word) -> tuple[LindMarcus, Word] | None:
    """Peel n-block and reversal wrappers down to a Lind-Marcus spec."""
    while True:
        if isinstance(spec, LindMarcus):
            return spec, word
        if isinstance(spec, NBlock):
            word = spec.base_word(word)
        elif isinstance(spec, Reversed):
            word = reverse(word)
        else:
            return None
        spec = spec.inner


def lind_marcus_synchronizing(lm: LindMarcus, word: Word) -> bool:
    if any(symbol in lm.a_symbols for symbol in word):
        return True
    return any(pair == (lm.c, lm.b) for pair in zip(word, word[1:]))


def find_witness(spec: SubshiftSpec, word: Word, depth: int) -> tuple[Word, Word] | None:
    for m in range(1, depth + 1):
        lefts = sorted(extend(spec, word, m, "left"))
        rights = sorted(extend(spec, word, m, "right"))
        _logger.debug(f"Depth {m}: {len(lefts)} x {len(rights)} contexts")
        for u in lefts:
            for v in rights:
                if not spec.admits(u + word + v):
                    return u, v
    return None


@functools.lru_cache(maxsize=CERTIFICATE_CACHE)
def _certify(spec: SubshiftSpec, word: Word, depth: int) -> SynchroCertificate:
    reduced = lind_marcus_base(spec, word) if word else None
    if reduced is not None:
        lm, base = reduced
        if lind_marcus_synchronizing(lm, base):
            return SynchroCertificate(word, depth, True, exact=True)
        witness = find_witness(spec, word, depth + 2)
        if witness is None:
            _logger.warning(f"No refuting context found for {word} up to {depth + 2}")
        return SynchroCertificate(word, depth, False, witness=witness, exact=True)
    witness = find_witness(spec, word, depth)
    return SynchroCertificate(word, depth, witness is None, witness=witness)


def synchro_certificate(
    spec: SubshiftSpec, word: Sequence[int], depth: int = DEFAULT_DEPTH
) -> SynchroCertificate:
    """Certify ``word`` as synchronizing up to ``depth`` or refute it.

    Parameters
    ----------
    spec : SubshiftSpec
        The subshift.
    word : Sequence[int]
        An admissible word.
    depth : int
        Largest context length tried on each side.
    """
    word = spec.alphabet.check(word)
    if depth < 1:
        raise ValueError(f"Depth must be positive, got {depth}")
    if not spec.admits(word):
        raise InadmissibleWord(f"{spec.alphabet.render(word)} is not admissible")
    return _certify(spec, word, depth)


def is_synchronizing(spec: SubshiftSpec, word: Word, depth: int) -> bool:
    return _certify(spec, word, depth).synchronizing


def synchro_symbols(spec: SubshiftSpec, depth: int = DEFAULT_DEPTH) -> frozenset[int]:
    if depth < 1:
        raise ValueError(f"Depth must be positive, got {depth}")
    return frozenset(
        symbol
        for symbol in spec.alphabet
        if spec.admits((symbol,)) and is_synchronizing(spec, (symbol,), depth)
    )


def b_words(
    spec: SubshiftSpec, maxlen: int = DEFAULT_MAXLEN, depth: int = DEFAULT_DEPTH
) -> tuple[Word, ...]:
    """Words of 𝓑(X) with length in ``[2, maxlen]``, shortest first."""
    sync = synchro_symbols(spec, depth)
    found = []
    stack = [(symbol,) for symbol in sorted(sync)]
    while stack:
        word = stack.pop()
        if len(word) >= maxlen:
            continue
        for symbol in spec.alphabet:
            longer = word + (symbol,)
            if not spec.admits(longer):
                continue
            if symbol in sync:
                found.append(longer)
            else:
                stack.append(longer)
    return tuple(sorted(found, key=word_order))


@dataclasses.dataclass
class StrongSyncReport:
    """Result of a strong synchronization check at margin ``q``.

    Each violation is a synchro-free context word together with the
    1-based span of the synchronizing word it surrounds.
    """

    passed: bool
    q: int
    maxlen: int
    depth: int
    violations: list[tuple[Word, tuple[int, int]]] = dataclasses.field(
        default_factory=list
    )


def strong_sync_check(
    spec: SubshiftSpec,
    q: int,
    maxlen: int = DEFAULT_MAXLEN,
    depth: int = DEFAULT_DEPTH,
) -> StrongSyncReport:
    """Look for a synchronizing word with no synchronizing symbol within ``q``.

    Every admissible word ``z`` of length ``l + 2q`` (``1 <= l <= maxlen``)
    free of synchronizing symbols is checked; ``z`` is a violation when its
    middle ``l`` symbols are certified synchronizing. The search stops after
    ``WITNESS_LIMIT`` violations.
    """
    if q < 0:
        raise ValueError(f"Margin must be non-negative, got {q}")
    sync = synchro_symbols(spec, depth)
    free_symbols = [s for s in spec.alphabet if s not in sync]
    violations = []
    layer = [()]
    for length in range(1, maxlen + 2 * q + 1):
        layer = [
            word + (symbol,)
            for word in layer
            for symbol in free_symbols
            if spec.admits(word + (symbol,))
        ]
        middle_length = length - 2 * q
        if middle_length < 1:
            continue
        for word in layer:
            middle = word[q : q + middle_length]
            if is_synchronizing(spec, middle, depth):
                violations.append((word, (q + 1, q + middle_length)))
                if len(violations) >= WITNESS_LIMIT:
                    break
        if len(violations) >= WITNESS_LIMIT or not layer:
            break
    _logger.debug(f"Margin {q}: {len(violations)} violations")
    return StrongSyncReport(not violations, q, maxlen, depth, violations)


def sync_margin(
    spec: SubshiftSpec,
    maxlen: int = DEFAULT_MAXLEN,
    depth: int = DEFAULT_DEPTH,
    q_max: int = DEFAULT_Q_MAX,
) -> int | None:
    """Smallest margin ``q <= q_max`` that passes, or None."""
    for q in range(q_max + 1):
        if strong_sync_check(spec, q, maxlen, depth).passed:
            return q
    return None


@dataclasses.dataclass(frozen=True)
class SynchroProfile:
    spec: SubshiftSpec
    depth: int
    maxlen: int
    synchro_symbols: frozenset[int]
    b_words: tuple[Word, ...]
    q: int | None


def synchro_profile(
    spec: SubshiftSpec,
    maxlen: int = DEFAULT_MAXLEN,
    depth: int = DEFAULT_DEPTH,
    q_max: int = DEFAULT_Q_MAX,
) -> SynchroProfile:
    return SynchroProfile(
        spec=spec,
        depth=depth,
        maxlen=maxlen,
        synchro_symbols=synchro_symbols(spec, depth),
        b_words=b_words(spec, maxlen, depth),
        q=sync_margin(spec, maxlen, depth, q_max),
    )


def _index_key(index: frozenset[int]) -> tuple[int, tuple[int, ...]]:
    return (len(index), tuple(sorted(index)))


def extract_markov_code(
    spec: SubshiftSpec,
    side: str,
    maxlen: int = DEFAULT_MAXLEN,
    depth: int = DEFAULT_DEPTH,
) -> MarkovCode:
    """The code C⁻(X) (``side="minus"``) or C⁺(X) (``side="plus"``).

    Minus: code words are 𝓑-words without their last symbol; ``t(c)`` is
    the set of synchronizing symbols that may end ``c`` into a 𝓑-word and
    ``s(c)`` the singleton of the first symbol. Plus is the mirror image.
    Code words are enumerated up to ``maxlen - 1``.
    """
    if side not in ("minus", "plus"):
        raise ValueError(f"Side must be 'minus' or 'plus', got {side!r}")
    words = b_words(spec, maxlen, depth)
    if not words:
        raise SynchroError(f"No words begin and end with a synchronizing symbol in {spec}")
    sync = synchro_symbols(spec, depth)
    sets: dict[Word, set[int]] = {}
    for b in words:
        if side == "minus":
            sets.setdefault(b[:-1], set()).add(b[-1])
        else:
            sets.setdefault(b[1:], set()).add(b[0])
    code_words = tuple(sorted(sets, key=word_order))
    joined = {c: frozenset(sets[c]) for c in code_words}
    if side == "minus":
        edge = {c: frozenset({c[0]}) for c in code_words}
        s, t = edge, joined
    else:
        edge = {c: frozenset({c[-1]}) for c in code_words}
        s, t = joined, edge
    gamma = set(joined.values()) | {frozenset({symbol}) for symbol in sync}
    gamma = tuple(sorted(gamma, key=_index_key))
    allowed = set()
    for index in gamma:
        for symbol in index:
            single = frozenset({symbol})
            allowed.add((index, single) if side == "minus" else (single, index))
    code = CodeSpec(spec.alphabet, explicit=code_words, bound=maxlen - 1)
    _logger.debug(f"C{'-' if side == 'minus' else '+'} has {len(code_words)} words")
    return MarkovCode(code, gamma, s, t, frozenset(allowed))
