"""
Shift spaces

A subshift spec is a finite description of a subshift together with an
admissibility oracle for finite words. Every variant answers
:meth:`SubshiftSpec.member` with a :class:`MembershipVerdict`; graph-backed
variants essentialize their graph first, so a word passes exactly when it
labels a path that extends to a bi-infinite one.

The Lind-Marcus decider is exact: a word without a factor
``σ b^k c^l σ'`` (``k != l``) extends by ``b`` on both sides forever
without creating one, since a run of ``b`` never closes a bridge.
Code-backed variants are decided through a finite presentation of a
(possibly truncated) code and are reported as bounded.
"""

import dataclasses
import enum
import functools
from typing import Hashable, Iterable, Mapping, Sequence

import networkx as nx
import numpy as np

from .words import (
    ENUMERATION_CAP,
    Alphabet,
    EnumerationBoundError,
    Word,
    from_nblock,
    iter_words,
    overlap_break,
    reverse,
    to_nblock,
)
from .onecounter import OneCounterAutomaton, oca_language
from .utils.graphs import follow_word, label_successors, make_essential, step

import logging

_logger = logging.getLogger(__name__)

Span = tuple[int, int]
Violation = tuple[Span, str]


class SpecError(ValueError):
    """A subshift description that does not define a valid subshift."""


class InadmissibleWord(ValueError):
    """An operation that needs an admissible word got an inadmissible one."""


class Verdict(enum.StrEnum):
    YES = "yes"
    NO = "no"
    BOUNDED_YES = "bounded-yes"


@dataclasses.dataclass(frozen=True)
class MembershipVerdict:
    """Answer of a membership oracle.

    ``witness`` is a 1-based inclusive span of the offending factor when the
    word is rejected; ``depth`` is the code bound behind a bounded answer.
    """

    admissible: Verdict
    witness: Span | None = None
    reason: str | None = None
    depth: int | None = None

    def __bool__(self):
        return self.admissible is not Verdict.NO


class SubshiftSpec:
    """ABC for subshift descriptions.

    Subclasses implement :meth:`_violation`, returning ``None`` for
    admissible words and ``(span, reason)`` otherwise.
    """

    kind = ""
    exact = True

    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet
        self._languages: dict[int, tuple[Word, ...]] = {}

    @property
    def bound(self) -> int | None:
        return None

    def _violation(self, word: Word) -> Violation | None:
        raise NotImplementedError()

    def admits(self, word: Word) -> bool:
        """Fast boolean membership for words already known to be valid."""
        return self._violation(word) is None

    def member(self, word: Sequence[int]) -> MembershipVerdict:
        word = self.alphabet.check(word)
        found = self._violation(word)
        if found is not None:
            span, reason = found
            return MembershipVerdict(Verdict.NO, witness=span, reason=reason)
        if self.exact:
            return MembershipVerdict(Verdict.YES)
        return MembershipVerdict(Verdict.BOUNDED_YES, depth=self.bound)

    def _language(self, n: int) -> tuple[Word, ...]:
        words = [()]
        for _ in range(n):
            words = [
                word + (symbol,)
                for word in words
                for symbol in self.alphabet
                if self.admits(word + (symbol,))
            ]
            if len(words) > ENUMERATION_CAP:
                raise EnumerationBoundError(
                    f"More than {ENUMERATION_CAP} admissible words of length {n}"
                )
        return tuple(words)

    def language(self, n: int) -> tuple[Word, ...]:
        """Admissible words of length ``n`` in lexicographic order."""
        if n < 0:
            raise ValueError(f"Word length must be non-negative, got {n}")
        if n not in self._languages:
            self._languages[n] = self._language(n)
        return self._languages[n]

    def __repr__(self):
        return f"{type(self).__name__}({'/'.join(self.alphabet.names)})"


def _first_factor(word: Word, factors: frozenset[Word]) -> Span | None:
    for length in sorted({len(f) for f in factors}):
        for i in range(len(word) - length + 1):
            if word[i : i + length] in factors:
                return (i + 1, i + length)
    return None


class FiniteType(SubshiftSpec):
    """Shift of finite type ``X_F`` given by forbidden words.

    Membership is decided in the essential part of the de Bruijn graph
    whose vertices are the allowed ``(m-1)``-words, ``m`` being the longest
    forbidden length.
    """

    kind = "finite-type"

    def __init__(self, alphabet: Alphabet, forbidden: Iterable[Sequence[int]]):
        super().__init__(alphabet)
        forbidden = frozenset(alphabet.check(word) for word in forbidden)
        short = [alphabet.render(w) for w in forbidden if len(w) < 2]
        if short:
            raise SpecError(f"Forbidden words must have length >= 2: {short}")
        self.forbidden = forbidden
        self.memory = max((len(w) for w in forbidden), default=1) - 1
        if self.forbidden and not self._edges:
            raise SpecError("The forbidden words leave an empty subshift")

    @functools.cached_property
    def _graph(self) -> nx.MultiDiGraph:
        k = self.memory
        graph = nx.MultiDiGraph()
        for vertex in iter_words(self.alphabet, k):
            if _first_factor(vertex, self.forbidden) is None:
                graph.add_node(vertex)
        for vertex in list(graph.nodes):
            for symbol in self.alphabet:
                window = vertex + (symbol,)
                if window[1:] in graph and _first_factor(window, self.forbidden) is None:
                    graph.add_edge(vertex, window[1:], label=symbol)
        return make_essential(graph)

    @functools.cached_property
    def _edges(self) -> frozenset[Word]:
        return frozenset(u + (label,) for u, _, label in self._graph.edges(data="label"))

    @functools.cached_property
    def _short_words(self) -> frozenset[Word]:
        return frozenset(
            vertex[i : i + length]
            for vertex in self._graph
            for length in range(self.memory)
            for i in range(self.memory - length + 1)
        )

    def _violation(self, word: Word) -> Violation | None:
        span = _first_factor(word, self.forbidden)
        if span is not None:
            return span, "forbidden factor"
        if not self.forbidden:
            return None
        k = self.memory
        if len(word) < k:
            if word in self._short_words:
                return None
            return (1, len(word)), "no extension in the essential graph"
        if len(word) == k:
            if word in self._graph:
                return None
            return (1, k), "vertex removed by essentialization"
        for i in range(len(word) - k):
            if word[i : i + k + 1] not in self._edges:
                return (i + 1, i + k + 1), "edge removed by essentialization"
        return None


class MarkovShift(SubshiftSpec):
    """Topological Markov shift ``X_A`` of a 0/1 matrix on the alphabet."""

    kind = "markov"

    def __init__(self, alphabet: Alphabet, transition):
        super().__init__(alphabet)
        matrix = np.asarray(transition, dtype=int)
        size = len(alphabet)
        if matrix.shape != (size, size):
            raise SpecError(f"Transition matrix must be {size}x{size}, got {matrix.shape}")
        if not np.isin(matrix, (0, 1)).all():
            raise SpecError("Transition matrix entries must be 0 or 1")
        self.transition = matrix
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(alphabet)
        for i, j in zip(*np.nonzero(matrix)):
            graph.add_edge(int(i), int(j), label=int(j))
        essential = make_essential(graph)
        if not essential:
            raise SpecError("The transition matrix admits no bi-infinite path")
        self._alive = frozenset(essential.nodes)
        self._allowed = frozenset(essential.edges())

    def _violation(self, word: Word) -> Violation | None:
        for i, symbol in enumerate(word):
            if symbol not in self._alive:
                return (i + 1, i + 1), "symbol removed by essentialization"
        for i in range(len(word) - 1):
            if (word[i], word[i + 1]) not in self._allowed:
                return (i + 1, i + 2), "transition not allowed"
        return None


class PresentedSpec(SubshiftSpec):
    """ABC for subshifts read off an essential labeled graph.

    Subclasses provide ``_successors`` (see
    :func:`lmshift.utils.graphs.label_successors`).
    """

    dead_path_reason = "no labeled path"

    def _violation(self, word: Word) -> Violation | None:
        _, dead = follow_word(self._successors, word)
        if dead is not None:
            return (1, dead + 1), self.dead_path_reason
        return None

    def _language(self, n: int) -> tuple[Word, ...]:
        layer = [((), frozenset(self._successors))]
        for _ in range(n):
            layer = [
                (word + (symbol,), following)
                for word, current in layer
                for symbol in self.alphabet
                if (following := step(self._successors, current, symbol))
            ]
            if len(layer) > ENUMERATION_CAP:
                raise EnumerationBoundError(
                    f"More than {ENUMERATION_CAP} admissible words of length {n}"
                )
        return tuple(word for word, _ in layer)


class SoficGraph(PresentedSpec):
    """Sofic shift: labels of bi-infinite paths in a labeled graph."""

    kind = "sofic"

    def __init__(self, alphabet: Alphabet, graph: nx.MultiDiGraph):
        super().__init__(alphabet)
        for source, target, label in graph.edges(data="label"):
            if label is None:
                raise SpecError(f"Edge {source}->{target} has no label")
            alphabet.check((label,))
        self.graph = graph
        essential = make_essential(graph)
        if not essential:
            raise SpecError("The graph has no bi-infinite path")
        self._successors = label_successors(essential)


@dataclasses.dataclass(frozen=True)
class CodeSpec:
    """A code: an explicit word list or the language of a one-counter machine.

    ``bound`` caps the length of enumerated code words. An explicit code
    without a bound is complete; with a bound it is a truncation.
    """

    alphabet: Alphabet
    explicit: tuple[Word, ...] | None = None
    machine: OneCounterAutomaton | None = None
    bound: int | None = None

    def __post_init__(self):
        if (self.explicit is None) == (self.machine is None):
            raise SpecError("A code needs exactly one of explicit words or a machine")
        if self.machine is not None and self.bound is None:
            raise SpecError("A machine-generated code needs an enumeration bound")
        if self.explicit is not None:
            words = tuple(self.alphabet.check(w) for w in self.explicit)
            if not words or any(not w for w in words):
                raise SpecError("Code words must be non-empty")
            object.__setattr__(self, "explicit", words)

    @property
    def truncated(self) -> bool:
        return self.bound is not None

    @functools.cached_property
    def words(self) -> tuple[Word, ...]:
        if self.explicit is not None:
            return self.explicit
        words = tuple(
            word
            for length in range(1, self.bound + 1)
            for word in sorted(oca_language(self.machine, length))
        )
        if not words:
            raise SpecError(f"The machine generates no code word up to {self.bound}")
        return words

    @property
    def max_length(self) -> int:
        return max(len(w) for w in self.words)


@dataclasses.dataclass(frozen=True)
class MarkovCode:
    """Code with index maps ``s``, ``t`` and allowed index transitions.

    Code word ``c2`` may follow ``c1`` iff ``(t[c1], s[c2])`` is in
    ``allowed``.
    """

    code: CodeSpec
    gamma: tuple[Hashable, ...]
    s: Mapping[Word, Hashable]
    t: Mapping[Word, Hashable]
    allowed: frozenset[tuple[Hashable, Hashable]]

    def __post_init__(self):
        words = self.code.words
        index = set(self.gamma)
        for name, mapping in (("s", self.s), ("t", self.t)):
            missing = [w for w in words if w not in mapping]
            if missing:
                raise SpecError(f"{name} is not defined on {len(missing)} code words")
            if not set(mapping[w] for w in words) <= index:
                raise SpecError(f"{name} maps outside the index set")
        starts = {self.s[w] for w in words}
        ends = {self.t[w] for w in words}
        for end in ends:
            if not any((end, start) in self.allowed for start in starts):
                raise SpecError(f"Index {end!r} has no allowed successor")
        for start in starts:
            if not any((end, start) in self.allowed for end in ends):
                raise SpecError(f"Index {start!r} has no allowed predecessor")

    @classmethod
    def trivial(cls, code: CodeSpec) -> "MarkovCode":
        """Plain coded system: one index, every concatenation allowed."""
        words = code.words
        return cls(
            code=code,
            gamma=(0,),
            s={w: 0 for w in words},
            t={w: 0 for w in words},
            allowed=frozenset({(0, 0)}),
        )

    @classmethod
    def from_matrix(cls, code, gamma, s, t, matrix) -> "MarkovCode":
        matrix = np.asarray(matrix, dtype=int)
        if matrix.shape != (len(gamma), len(gamma)):
            raise SpecError("Index matrix does not match the index set")
        allowed = frozenset(
            (gamma[int(i)], gamma[int(j)]) for i, j in zip(*np.nonzero(matrix))
        )
        return cls(code, tuple(gamma), dict(s), dict(t), allowed)

    def matrix(self) -> np.ndarray:
        """The 0/1 matrix ``A`` on ``gamma``."""
        position = {g: i for i, g in enumerate(self.gamma)}
        matrix = np.zeros((len(self.gamma), len(self.gamma)), dtype=int)
        for first, second in self.allowed:
            matrix[position[first], position[second]] = 1
        return matrix

    def reversed(self) -> "MarkovCode":
        """Code of the time-reversed system: words reversed, ``s``/``t`` swapped."""
        words = self.code.words
        code = CodeSpec(
            self.code.alphabet,
            explicit=tuple(reverse(w) for w in words),
            bound=self.code.bound,
        )
        return MarkovCode(
            code=code,
            gamma=self.gamma,
            s={reverse(w): self.t[w] for w in words},
            t={reverse(w): self.s[w] for w in words},
            allowed=frozenset((b, a) for a, b in self.allowed),
        )


def markov_code_graph(code: MarkovCode) -> nx.MultiDiGraph:
    """Labeled graph presenting the Markov coded system of ``code``.

    Hub vertices ``("hub", γ)`` stand for "a code word with ``s = γ`` starts
    here"; the interior of code word ``j`` is the chain ``("word", j, p)``.
    """
    graph = nx.MultiDiGraph()
    for gamma in code.gamma:
        graph.add_node(("hub", gamma))
    for j, word in enumerate(code.code.words):
        start = ("hub", code.s[word])
        exits = [("hub", g) for g in code.gamma if (code.t[word], g) in code.allowed]
        previous = start
        for p, symbol in enumerate(word[:-1], start=1):
            node = ("word", j, p)
            graph.add_edge(previous, node, label=symbol)
            previous = node
        for hub in exits:
            graph.add_edge(previous, hub, label=word[-1])
    return graph


class MarkovCoded(PresentedSpec):
    """Markov coded system of a :class:`MarkovCode` (bounded answers)."""

    kind = "markov-coded"
    exact = False
    dead_path_reason = "not a factor of an allowed concatenation"

    def __init__(self, code: MarkovCode):
        super().__init__(code.code.alphabet)
        self.code = code

    @property
    def bound(self) -> int:
        return self.code.code.bound or self.code.code.max_length

    @functools.cached_property
    def _successors(self):
        essential = make_essential(markov_code_graph(self.code))
        if not essential:
            raise SpecError("The code admits no bi-infinite concatenation")
        _logger.debug(f"Code presentation has {essential.number_of_nodes()} vertices")
        return label_successors(essential)


class Coded(MarkovCoded):
    """Coded system: all concatenations of code words."""

    kind = "coded"

    def __init__(self, code: CodeSpec):
        super().__init__(MarkovCode.trivial(code))
        self.code_spec = code


def lind_marcus_scan(
    word: Sequence[int], a_symbols: frozenset[int], b: int, c: int, offset: int = 0
) -> Span | None:
    """Single left-to-right counter scan for ``σ b^k c^l σ'`` with ``l != k + offset``."""
    start = None
    n_b = n_c = 0
    in_c = False
    for i, symbol in enumerate(word):
        if symbol in a_symbols:
            if start is not None and n_c - n_b != offset:
                return (start + 1, i + 1)
            start, n_b, n_c, in_c = i, 0, 0, False
        elif start is None:
            continue
        elif symbol == b:
            if in_c:
                start = None
            else:
                n_b += 1
        elif symbol == c:
            in_c = True
            n_c += 1
        else:
            start = None
    return None


def naive_lind_marcus_scan(
    word: Sequence[int], a_symbols: frozenset[int], b: int, c: int, offset: int = 0
) -> Span | None:
    """Quadratic scan of every factor span; independent of the counter scan."""
    word = tuple(word)
    for i in range(len(word)):
        if word[i] not in a_symbols:
            continue
        for j in range(i + 1, len(word)):
            if word[j] not in a_symbols:
                continue
            middle = word[i + 1 : j]
            k = 0
            while k < len(middle) and middle[k] == b:
                k += 1
            rest = middle[k:]
            if all(symbol == c for symbol in rest) and len(rest) != k + offset:
                return (i + 1, j + 1)
    return None


class LindMarcus(SubshiftSpec):
    """Lind-Marcus shift and its N-symbol family.

    Forbids ``σ b^k c^l σ'`` for a-type ``σ, σ'`` and ``l != k + offset``
    (``k, l >= 0``). The classical shifts have ``offset = 0``.
    """

    kind = "lind-marcus"

    def __init__(
        self,
        alphabet: Alphabet,
        a_symbols: Iterable[int],
        b: int,
        c: int,
        offset: int = 0,
    ):
        super().__init__(alphabet)
        a_symbols = frozenset(a_symbols)
        alphabet.check(tuple(a_symbols) + (b, c))
        if not a_symbols:
            raise SpecError("At least one a-type symbol is required")
        if b == c or b in a_symbols or c in a_symbols:
            raise SpecError("a-type symbols, b and c must be pairwise distinct")
        self.a_symbols = a_symbols
        self.b = b
        self.c = c
        self.offset = offset

    def _violation(self, word: Word) -> Violation | None:
        span = lind_marcus_scan(word, self.a_symbols, self.b, self.c, self.offset)
        if span is None:
            return None
        return span, "a-type bridge with unbalanced b and c counts"

    def admits(self, word: Word) -> bool:
        return lind_marcus_scan(word, self.a_symbols, self.b, self.c, self.offset) is None


class NBlock(SubshiftSpec):
    """n-block system of ``inner``; symbols are the admissible n-words."""

    kind = "nblock"

    def __init__(self, inner: SubshiftSpec, n: int):
        if n < 1:
            raise SpecError(f"Block length must be positive, got {n}")
        super().__init__(Alphabet.of_blocks(inner.alphabet, inner.language(n)))
        self.inner = inner
        self.n = n
        self.exact = inner.exact

    @property
    def bound(self) -> int | None:
        return self.inner.bound

    def base_word(self, word: Sequence[int]) -> Word:
        return from_nblock(word, self.alphabet)

    def to_blocks(self, base: Sequence[int]) -> Word:
        return to_nblock(base, self.n, self.alphabet)

    def _violation(self, word: Word) -> Violation | None:
        pos = overlap_break(word, self.alphabet)
        if pos is not None:
            return (pos, pos + 1), "blocks do not overlap"
        if not word:
            return None
        found = self.inner._violation(self.base_word(word))
        if found is None:
            return None
        (first, last), reason = found
        first = min(first, len(word))
        return (first, min(max(last - self.n + 1, first), len(word))), reason

    def _language(self, m: int) -> tuple[Word, ...]:
        if m == 0:
            return ((),)
        base = self.inner.language(m + self.n - 1)
        return tuple(sorted(self.to_blocks(w) for w in base))


class Reversed(SubshiftSpec):
    """Time reversal of ``inner``: a word is admissible iff its reverse is."""

    kind = "reversed"

    def __init__(self, inner: SubshiftSpec):
        super().__init__(inner.alphabet)
        self.inner = inner
        self.exact = inner.exact

    @property
    def bound(self) -> int | None:
        return self.inner.bound

    def _violation(self, word: Word) -> Violation | None:
        found = self.inner._violation(reverse(word))
        if found is None:
            return None
        (first, last), reason = found
        size = len(word)
        return (size - last + 1, size - first + 1), reason

    def admits(self, word: Word) -> bool:
        return self.inner.admits(reverse(word))


def member(spec: SubshiftSpec, word: Sequence[int]) -> MembershipVerdict:
    return spec.member(word)


def language(spec: SubshiftSpec, n: int) -> tuple[Word, ...]:
    return spec.language(n)


def nblock_system(spec: SubshiftSpec, n: int) -> NBlock:
    return NBlock(spec, n)


def reversed_spec(spec: SubshiftSpec) -> SubshiftSpec:
    """Word-reversed subshift; reversing twice gives back ``spec``."""
    if isinstance(spec, Reversed):
        return spec.inner
    return Reversed(spec)


def extend(spec: SubshiftSpec, word: Word, n: int, side: str) -> frozenset[Word]:
    """Words ``u`` (left) or ``v`` (right) of length ``n`` that extend ``word``."""
    found = [()]
    for _ in range(n):
        if side == "left":
            found = [
                (s,) + u
                for u in found
                for s in spec.alphabet
                if spec.admits((s,) + u + word)
            ]
        elif side == "right":
            found = [
                v + (s,)
                for v in found
                for s in spec.alphabet
                if spec.admits(word + v + (s,))
            ]
        else:
            raise ValueError(f"Side must be 'left' or 'right', got {side!r}")
    return frozenset(found)


def gamma(spec: SubshiftSpec, word: Sequence[int], n: int, side: str) -> frozenset[Word]:
    """Predecessor (``left``) or follower (``right``) set of length ``n``.

    Parameters
    ----------
    spec : SubshiftSpec
        The subshift.
    word : Sequence[int]
        An admissible word.
    n : int
        Length of the extensions.
    side : str
        ``"left"`` for Γ⁻ₙ, ``"right"`` for Γ⁺ₙ.
    """
    word = spec.alphabet.check(word)
    if not spec.admits(word):
        raise InadmissibleWord(f"{spec.alphabet.render(word)} is not admissible")
    return extend(spec, word, n, side)


def markov_coded_language(code: MarkovCode, n: int) -> tuple[Word, ...]:
    """Length-``n`` factors of allowed concatenations of code words.

    A truncated code only supports ``n`` up to two below its bound: a
    window must fit in an enumerated word together with one symbol of each
    neighbour, or the concatenations straddling the cut are lost.
    """
    if code.code.truncated and n + 2 > code.code.bound:
        raise EnumerationBoundError(
            f"Length {n} needs a code enumeration bound of at least {n + 2}, "
            f"got {code.code.bound}"
        )
    return MarkovCoded(code).language(n)


def lind_marcus(n_a: int = 1, offset: int = 0) -> LindMarcus:
    """The Lind-Marcus shift (``n_a = 1``) or its N-symbol family.

    A non-zero ``offset`` admits ``σ b^k c^(k + offset) σ'`` instead of the
    balanced bridges.
    """
    if n_a < 1:
        raise SpecError("At least one a-type symbol is required")
    if n_a == 1:
        alphabet = Alphabet.from_names("abc")
    else:
        alphabet = Alphabet(tuple(f"a{i}" for i in range(1, n_a + 1)) + ("b", "c"))
    return LindMarcus(alphabet, range(n_a), b=n_a, c=n_a + 1, offset=offset)


def golden_mean() -> MarkovShift:
    return MarkovShift(Alphabet.from_names("01"), [[1, 1], [1, 0]])


def full_shift(names: str | Iterable[str] = "ab") -> FiniteType:
    return FiniteType(Alphabet.from_names(names), ())


def abcd_example(bound: int = 8) -> MarkovCoded:
    """Markov coded system on ``{a, b, c, d}`` patterned after the 2-block Y.

    Code words are ``a b^k c^l`` and ``d b^k c^l`` (``k, l >= 0``) up to
    length ``bound``; ``a b^k c^k`` may only be followed by ``a``, every
    other word by ``a`` or ``d``.
    """
    alphabet = Alphabet.from_names("abcd")
    a, b, c, d = range(4)
    words = []
    t = {}
    for head in (a, d):
        for k in range(bound):
            for m in range(bound - k):
                word = (head,) + (b,) * k + (c,) * m
                words.append(word)
                t[word] = frozenset({a}) if head == a and k == m else frozenset({a, d})
    code = CodeSpec(alphabet, explicit=tuple(words), bound=bound)
    starts = (frozenset({a}), frozenset({d}))
    ends = (frozenset({a}), frozenset({a, d}))
    gamma = tuple(dict.fromkeys(ends + starts))
    allowed = frozenset((end, start) for end in ends for start in starts if start <= end)
    s = {w: frozenset({w[0]}) for w in words}
    return MarkovCoded(MarkovCode(code, gamma, s, t, allowed))
