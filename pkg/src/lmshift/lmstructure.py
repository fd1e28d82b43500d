"""
Lind-Marcus structure

The characteristic pair of fixed points of a strongly synchronizing
subshift, the bridge sets 𝓓 between synchronizing symbols and the two
fixed-point runs, the Σ and Ξ sets built from them, the K and R constants,
the seven boundary families of 𝓑(X) and the decision whether a subshift is
a Lind-Marcus one-counter shift with given parameters.

Every condition quantifies over infinitely many words. Here each one is
checked over words within a :class:`ProfileBounds`, and every constant is
the smallest value consistent with the words inside the bound.

Naming: the minus run is ``α₋^k`` and the plus run ``α₊^k``. A pair
``(σ, d)`` *enters* a run (``σ d α^k`` admissible) and a pair ``(d, σ)``
*exits* one (``α^k d σ`` admissible).

================  =====================================
attribute          set
================  =====================================
``d_minus``        𝓓(σ, α₋), σ ∈ Σ₋(X)
``d_minus_plus``   𝓓(σ, α₊), σ ∈ Σ₋⁺(X)
``d_plus``         𝓓(α₊, σ), σ ∈ Σ₊(X)
``d_plus_minus``   𝓓(α₋, σ), σ ∈ Σ₊⁻(X)
================  =====================================
"""

import dataclasses
import functools
import itertools
from typing import Callable, ClassVar, Iterable, Iterator, Mapping, Sequence

from .shiftspaces import SubshiftSpec
from .synchronization import (
    DEFAULT_DEPTH,
    DEFAULT_MAXLEN,
    WITNESS_LIMIT,
    b_words,
    is_synchronizing,
    sync_margin,
    synchro_symbols,
)
from .utils.periodic import UltimatelyPeriodicSet
from .words import Word, reverse, word_order

import logging

_logger = logging.getLogger(__name__)

EntryPair = tuple[int, Word]
ExitPair = tuple[Word, int]

MAX_J = 4
PROFILE_CACHE = 16

FAMILY_NAMES = (
    "xi|minus|plus",
    "minus|plus|xi",
    "xi|minus",
    "minus|xi",
    "xi|plus",
    "plus|xi",
    "counter",
)


class CharacteristicPairError(Exception):
    """No unique characteristic pair of fixed points.

    ``reason`` is ``"no-pair"``, ``"ambiguous"`` or
    ``"not-strongly-synchronizing"``; ``candidates`` lists the surviving
    ordered pairs.
    """

    def __init__(self, message: str, reason: str, candidates=()):
        super().__init__(message)
        self.reason = reason
        self.candidates = tuple(candidates)


class OutsideClass(Exception):
    """A structural condition is refuted within the bound."""

    def __init__(self, message: str, witness: Word = ()):
        super().__init__(message)
        self.witness = witness


class ParameterError(ValueError):
    pass


class NoParameters(Exception):
    """Parameter inference gave up; ``closest`` is the best failed check."""

    def __init__(self, message: str, closest: "LmCheckReport | None" = None):
        super().__init__(message)
        self.closest = closest


@dataclasses.dataclass(frozen=True)
class ProfileBounds:
    """``d`` bounds bridge-word lengths, ``k`` bounds run lengths."""

    MIN_D: ClassVar[int] = 3
    MIN_K: ClassVar[int] = 2

    d: int = 8
    k: int = 8

    def __post_init__(self):
        if self.d < self.MIN_D or self.k < self.MIN_K:
            raise ValueError(f"Bounds too small: d={self.d}, k={self.k}")


DEFAULT_BOUNDS = ProfileBounds()


@dataclasses.dataclass(frozen=True)
class FixedPairCertificate:
    """The characteristic pair ``(α₋, α₊)`` with its connecting word.

    ``orbit`` is ``α₋^D c α₊^D`` (no synchronizing word) and ``connector``
    a synchronizing ``α₊^D c' α₋^D``, for ``D = depth``.
    """

    alpha_minus: int
    alpha_plus: int
    c_word: Word
    k_minus: int
    k_plus: int
    depth: int
    orbit: Word = dataclasses.field(default=(), compare=False)
    connector: Word = dataclasses.field(default=(), compare=False)

    def swapped(self) -> "FixedPairCertificate":
        """The certificate of the time-reversed subshift."""
        return FixedPairCertificate(
            alpha_minus=self.alpha_plus,
            alpha_plus=self.alpha_minus,
            c_word=reverse(self.c_word),
            k_minus=self.k_plus,
            k_plus=self.k_minus,
            depth=self.depth,
            orbit=reverse(self.orbit),
            connector=reverse(self.connector),
        )


def _connecting_words(
    spec: SubshiftSpec, left: int, right: int, depth: int, synchronizing: bool
) -> list[Word]:
    """Words ``c`` with ``left^D c right^D`` admissible and of the given kind.

    ``c`` does not start with ``left`` and does not end with ``right``.
    Without ``synchronizing`` every prefix must stay non-synchronizing, so
    the search is pruned; with it the first layer holding a word wins.
    """
    head, tail = (left,) * depth, (right,) * depth
    if not synchronizing and is_synchronizing(spec, head, depth):
        return []
    found = []
    layer = [()]
    for length in range(depth + 1):
        for c in layer:
            if c and (c[0] == left or c[-1] == right):
                continue
            word = head + c + tail
            if spec.admits(word) and is_synchronizing(spec, word, depth) == synchronizing:
                found.append(c)
        if synchronizing and found:
            break
        if length == depth:
            break
        layer = [
            c + (s,)
            for c in layer
            for s in spec.alphabet
            if (c or s != left)
            and spec.admits(head + c + (s,))
            and (synchronizing or not is_synchronizing(spec, head + c + (s,), depth))
        ]
    return found


def _tail_length(spec: SubshiftSpec, alpha: int, depth: int, side: str) -> int | None:
    """Longest non-synchronizing approach ``t`` to an ``alpha`` run.

    For ``side="minus"`` the approach sits to the left (``t α^D``), for
    ``"plus"`` to the right. None when approaches grow past ``depth - 2``.
    """
    run = (alpha,) * depth

    def glue(t: Word) -> Word:
        return t + run if side == "minus" else run + t

    def grow(t: Word, s: int) -> Word:
        return (s,) + t if side == "minus" else t + (s,)

    longest = 0
    layer = [(s,) for s in spec.alphabet if s != alpha]
    for length in range(1, depth + 1):
        layer = [
            t
            for t in layer
            if spec.admits(glue(t)) and not is_synchronizing(spec, glue(t), depth)
        ]
        if not layer:
            break
        if length > depth - 2:
            return None
        longest = length
        layer = [grow(t, s) for t in layer for s in spec.alphabet]
    return longest


def characteristic_pair(
    spec: SubshiftSpec, depth: int = DEFAULT_DEPTH
) -> FixedPairCertificate:
    """Find the unique characteristic pair of fixed points.

    A candidate ``(α₋, α₊)`` of distinct fixed symbols survives when

    * exactly one connecting word ``c`` joins ``α₋^D`` to ``α₊^D``
      without a synchronizing word,
    * some word joins ``α₊^D`` back to ``α₋^D`` through a synchronizing
      word,
    * non-synchronizing approaches to either run have bounded length,
      which gives the constants K.

    Raises
    ------
    CharacteristicPairError
        If the subshift is not strongly synchronizing within the bound, or
        if no pair or several pairs survive.
    """
    if sync_margin(spec, depth, depth) is None:
        raise CharacteristicPairError(
            f"{spec} is not strongly synchronizing to depth {depth}",
            reason="not-strongly-synchronizing",
        )
    fixed = [s for s in spec.alphabet if spec.admits((s,) * depth)]
    _logger.debug(f"Fixed symbols: {[spec.alphabet.name(s) for s in fixed]}")
    survivors = []
    for alpha_minus, alpha_plus in itertools.permutations(fixed, 2):
        orbit = _connecting_words(spec, alpha_minus, alpha_plus, depth, False)
        if len(orbit) != 1:
            continue
        back = _connecting_words(spec, alpha_plus, alpha_minus, depth, True)
        if not back:
            continue
        k_minus = _tail_length(spec, alpha_minus, depth, "minus")
        k_plus = _tail_length(spec, alpha_plus, depth, "plus")
        if k_minus is None or k_plus is None:
            continue
        c = orbit[0]
        survivors.append(
            FixedPairCertificate(
                alpha_minus=alpha_minus,
                alpha_plus=alpha_plus,
                c_word=c,
                k_minus=k_minus + 1,
                k_plus=k_plus + 1,
                depth=depth,
                orbit=(alpha_minus,) * depth + c + (alpha_plus,) * depth,
                connector=(alpha_plus,) * depth + back[0] + (alpha_minus,) * depth,
            )
        )
    if not survivors:
        raise CharacteristicPairError(
            f"No characteristic pair of fixed points for {spec}", reason="no-pair"
        )
    if len(survivors) > 1:
        candidates = [(p.alpha_minus, p.alpha_plus) for p in survivors]
        raise CharacteristicPairError(
            f"Several candidate pairs for {spec}: {candidates}",
            reason="ambiguous",
            candidates=candidates,
        )
    return survivors[0]


def _entry_bridges(
    spec: SubshiftSpec, sigma: int, alpha: int, sync: frozenset[int], bounds: ProfileBounds
) -> frozenset[Word]:
    """𝓓(σ, α): words ``d`` with ``σ d α^k`` admissible."""
    run = (alpha,) * bounds.k
    found = set()
    stack = [()]
    while stack:
        d = stack.pop()
        if (not d or d[-1] != alpha) and spec.admits((sigma,) + d + run):
            found.add(d)
        if len(d) < bounds.d:
            stack.extend(
                d + (s,)
                for s in spec.alphabet
                if s not in sync and spec.admits((sigma,) + d + (s,))
            )
    return frozenset(found)


def _exit_bridges(
    spec: SubshiftSpec, alpha: int, sigma: int, sync: frozenset[int], bounds: ProfileBounds
) -> frozenset[Word]:
    """𝓓(α, σ): words ``d`` with ``α^k d σ`` admissible."""
    run = (alpha,) * bounds.k
    found = set()
    stack = [()]
    while stack:
        d = stack.pop()
        if (not d or d[0] != alpha) and spec.admits(run + d + (sigma,)):
            found.add(d)
        if len(d) < bounds.d:
            stack.extend(
                (s,) + d
                for s in spec.alphabet
                if s not in sync and spec.admits((s,) + d + (sigma,))
            )
    return frozenset(found)


def _splice_threshold(
    spec: SubshiftSpec,
    alpha: int,
    bounds: ProfileBounds,
    splice: Callable[[Word], bool],
) -> int | None:
    """Smallest K with every splice over ``α^k``, ``K < k <= bounds.k``, admissible.

    K is a positive integer, so 1 is returned even when the splices already
    hold at ``k = 1``. None unless the splices hold over at least the upper
    half of the range.
    """
    start = None
    for k in range(bounds.k, 0, -1):
        if not splice((alpha,) * k):
            break
        start = k
    if start is None or start > bounds.k // 2:
        return None
    return max(1, start - 1)


def _run_xi(
    spec: SubshiftSpec,
    alpha: int,
    entering: list[EntryPair],
    exiting: list[ExitPair],
    bounds: ProfileBounds,
) -> tuple[dict[EntryPair, int], dict[ExitPair, int]]:
    """Pairs on either side of an ``α`` run that splice with every partner."""
    xi_in = {}
    for sigma, d in entering:
        left = (sigma,) + d
        k = _splice_threshold(
            spec,
            alpha,
            bounds,
            lambda run: all(spec.admits(left + run + e + (s,)) for e, s in exiting),
        )
        if k is not None:
            xi_in[(sigma, d)] = k
    xi_out = {}
    for d, sigma in exiting:
        right = d + (sigma,)
        k = _splice_threshold(
            spec,
            alpha,
            bounds,
            lambda run: all(spec.admits((s,) + e + run + right) for s, e in entering),
        )
        if k is not None:
            xi_out[(d, sigma)] = k
    return xi_in, xi_out


def _entry_pairs(bridges: Mapping[int, frozenset[Word]]) -> list[EntryPair]:
    return sorted(
        ((sigma, d) for sigma, ds in bridges.items() for d in ds),
        key=lambda p: (p[0], word_order(p[1])),
    )


def _exit_pairs(bridges: Mapping[int, frozenset[Word]]) -> list[ExitPair]:
    return sorted(
        ((d, sigma) for sigma, ds in bridges.items() for d in ds),
        key=lambda p: (p[1], word_order(p[0])),
    )


@dataclasses.dataclass(frozen=True)
class LmProfile:
    """Bridge sets, Ξ sets with their K thresholds, and R constants."""

    pair: FixedPairCertificate
    bounds: ProfileBounds
    synchro_symbols: frozenset[int]
    d_minus: Mapping[int, frozenset[Word]]
    d_minus_plus: Mapping[int, frozenset[Word]]
    d_plus: Mapping[int, frozenset[Word]]
    d_plus_minus: Mapping[int, frozenset[Word]]
    xi_minus: Mapping[EntryPair, int]
    xi_minus_plus: Mapping[EntryPair, int]
    xi_plus: Mapping[ExitPair, int]
    xi_plus_minus: Mapping[ExitPair, int]
    r_minus: int
    r_plus: int
    r_xi_minus: int
    r_xi_plus: int

    @property
    def alpha_minus(self) -> int:
        return self.pair.alpha_minus

    @property
    def alpha_plus(self) -> int:
        return self.pair.alpha_plus

    @property
    def c_word(self) -> Word:
        return self.pair.c_word

    @property
    def sigma_minus(self) -> frozenset[int]:
        return frozenset(self.d_minus)

    @property
    def sigma_minus_plus(self) -> frozenset[int]:
        return frozenset(self.d_minus_plus)

    @property
    def sigma_plus(self) -> frozenset[int]:
        return frozenset(self.d_plus)

    @property
    def sigma_plus_minus(self) -> frozenset[int]:
        return frozenset(self.d_plus_minus)

    @property
    def k_minus(self) -> int:
        return max(self.xi_minus.values(), default=0)

    @property
    def k_minus_plus(self) -> int:
        return max(self.xi_minus_plus.values(), default=0)

    @property
    def k_plus(self) -> int:
        return max(self.xi_plus.values(), default=0)

    @property
    def k_plus_minus(self) -> int:
        return max(self.xi_plus_minus.values(), default=0)

    @property
    def mu_minus(self) -> int:
        return max(len(d) for ds in self.d_minus.values() for d in ds)

    @property
    def mu_plus(self) -> int:
        return max(len(d) for ds in self.d_plus.values() for d in ds)

    @property
    def minus_pairs(self) -> list[EntryPair]:
        return _entry_pairs(self.d_minus)

    @property
    def plus_pairs(self) -> list[ExitPair]:
        return _exit_pairs(self.d_plus)

    @property
    def counter_minus(self) -> list[EntryPair]:
        """Minus pairs outside Ξ₋(X), the domain of Δ⁻."""
        return [p for p in self.minus_pairs if p not in self.xi_minus]

    @property
    def counter_plus(self) -> list[ExitPair]:
        return [p for p in self.plus_pairs if p not in self.xi_plus]

    def swapped(self) -> "LmProfile":
        """The profile of the time-reversed subshift."""

        def flip(bridges):
            return {s: frozenset(reverse(d) for d in ds) for s, ds in bridges.items()}

        def turn_in(xi):
            return {(s, reverse(d)): k for (d, s), k in xi.items()}

        def turn_out(xi):
            return {(reverse(d), s): k for (s, d), k in xi.items()}

        return LmProfile(
            pair=self.pair.swapped(),
            bounds=self.bounds,
            synchro_symbols=self.synchro_symbols,
            d_minus=flip(self.d_plus),
            d_minus_plus=flip(self.d_plus_minus),
            d_plus=flip(self.d_minus),
            d_plus_minus=flip(self.d_minus_plus),
            xi_minus=turn_in(self.xi_plus),
            xi_minus_plus=turn_in(self.xi_plus_minus),
            xi_plus=turn_out(self.xi_minus),
            xi_plus_minus=turn_out(self.xi_minus_plus),
            r_minus=self.r_plus,
            r_plus=self.r_minus,
            r_xi_minus=self.r_xi_plus,
            r_xi_plus=self.r_xi_minus,
        )


def _through_c(
    d: Word,
    c: Word,
    alpha: int,
    bridges: frozenset[Word] | None,
    accept: Callable[[Word], bool] = lambda head: True,
) -> bool:
    """Is ``d = d' α^m c`` with ``d'`` one of ``bridges``?"""
    if bridges is None or len(d) < len(c) or d[len(d) - len(c) :] != c:
        return False
    head = d[: len(d) - len(c)]
    end = len(head)
    while end and head[end - 1] == alpha:
        end -= 1
    return head[:end] in bridges and accept(head[:end])


def _r_constant(
    floor: int, candidates: Iterable[tuple[Word, Word]], bounds: ProfileBounds, label: str
) -> int:
    """Smallest ``R >= floor`` above which every candidate has the form.

    ``candidates`` yields ``(witness, d)`` for the words that do not.
    """
    r = floor
    for witness, d in candidates:
        if len(d) > bounds.d - 2:
            raise OutsideClass(f"Condition {label} fails near the bound", witness=witness)
        r = max(r, len(d))
    return r


def compute_profile(
    spec: SubshiftSpec,
    pair: FixedPairCertificate,
    bounds: ProfileBounds = DEFAULT_BOUNDS,
) -> LmProfile:
    """Compute the bridge sets, Ξ sets and constants of ``spec``.

    Raises
    ------
    OutsideClass
        If Σ₋(X) or Σ₊(X) is empty, if an own-side bridge set does not
        saturate within ``bounds.d``, or if an R condition fails for words
        close to the bound.
    """
    sync = synchro_symbols(spec, pair.depth)
    am, ap, c = pair.alpha_minus, pair.alpha_plus, pair.c_word

    def collect(make):
        found = {sigma: make(sigma) for sigma in sorted(sync)}
        return {sigma: ds for sigma, ds in found.items() if ds}

    d_minus = collect(lambda s: _entry_bridges(spec, s, am, sync, bounds))
    d_minus_plus = collect(lambda s: _entry_bridges(spec, s, ap, sync, bounds))
    d_plus = collect(lambda s: _exit_bridges(spec, ap, s, sync, bounds))
    d_plus_minus = collect(lambda s: _exit_bridges(spec, am, s, sync, bounds))
    if not d_minus or not d_plus:
        raise OutsideClass(f"{spec} has no synchronizing symbol bridging to a fixed point")
    for sigma, ds in d_minus.items():
        for d in ds:
            if len(d) > bounds.d - 2:
                raise OutsideClass("Minus bridges do not saturate", witness=(sigma,) + d)
    for sigma, ds in d_plus.items():
        for d in ds:
            if len(d) > bounds.d - 2:
                raise OutsideClass("Plus bridges do not saturate", witness=d + (sigma,))

    xi_minus, xi_plus_minus = _run_xi(
        spec, am, _entry_pairs(d_minus), _exit_pairs(d_plus_minus), bounds
    )
    xi_minus_plus, xi_plus = _run_xi(
        spec, ap, _entry_pairs(d_minus_plus), _exit_pairs(d_plus), bounds
    )
    _logger.debug(f"Ξ sizes: {len(xi_minus)} {len(xi_minus_plus)} {len(xi_plus)} {len(xi_plus_minus)}")

    def minus_form(sigma, d, accept=lambda head: True):
        return _through_c(d, c, am, d_minus.get(sigma), accept)

    def plus_form(d, sigma, accept=lambda head: True):
        return _through_c(reverse(d), reverse(c), ap, _reversed(d_plus.get(sigma)), accept)

    r_minus = _r_constant(
        len(c),
        (
            ((s,) + d, d)
            for s, d in _entry_pairs(d_minus_plus)
            if not minus_form(s, d)
        ),
        bounds,
        "R-",
    )
    r_plus = _r_constant(
        len(c),
        (
            (d + (s,), d)
            for d, s in _exit_pairs(d_plus_minus)
            if not plus_form(d, s)
        ),
        bounds,
        "R+",
    )
    r_xi_minus = _r_constant(
        r_minus,
        (
            ((s,) + d, d)
            for s, d in sorted(xi_minus_plus)
            if not minus_form(s, d, lambda head, s=s: (s, head) in xi_minus)
        ),
        bounds,
        "R_Xi-",
    )
    r_xi_plus = _r_constant(
        r_plus,
        (
            (d + (s,), d)
            for d, s in sorted(xi_plus_minus)
            if not plus_form(d, s, lambda head, s=s: (reverse(head), s) in xi_plus)
        ),
        bounds,
        "R_Xi+",
    )
    return LmProfile(
        pair=pair,
        bounds=bounds,
        synchro_symbols=sync,
        d_minus=d_minus,
        d_minus_plus=d_minus_plus,
        d_plus=d_plus,
        d_plus_minus=d_plus_minus,
        xi_minus=xi_minus,
        xi_minus_plus=xi_minus_plus,
        xi_plus=xi_plus,
        xi_plus_minus=xi_plus_minus,
        r_minus=r_minus,
        r_plus=r_plus,
        r_xi_minus=r_xi_minus,
        r_xi_plus=r_xi_plus,
    )


def _reversed(words: frozenset[Word] | None) -> frozenset[Word] | None:
    if words is None:
        return None
    return frozenset(reverse(w) for w in words)


@functools.lru_cache(maxsize=PROFILE_CACHE)
def lm_profile(
    spec: SubshiftSpec, depth: int = DEFAULT_DEPTH, bounds: ProfileBounds = DEFAULT_BOUNDS
) -> LmProfile:
    """Characteristic pair and profile of ``spec`` in one call."""
    return compute_profile(spec, characteristic_pair(spec, depth), bounds)


@dataclasses.dataclass(frozen=True)
class LmParameters:
    """Parameters ``(I, J₋, J₊, Δ⁻, Δ⁺)`` of a Lind-Marcus one-counter shift."""

    i: int
    j_minus: int
    j_plus: int
    delta_minus: Mapping[EntryPair, UltimatelyPeriodicSet]
    delta_plus: Mapping[ExitPair, UltimatelyPeriodicSet]

    def __post_init__(self):
        if self.i < 0 or self.j_minus < 0 or self.j_plus < 0:
            raise ParameterError(
                f"I and J must be non-negative, got {self.i}, {self.j_minus}, {self.j_plus}"
            )

    def with_i(self, i: int) -> "LmParameters":
        return dataclasses.replace(self, i=i)


def _two_runs(
    profile: LmProfile,
    lefts: Iterable[EntryPair],
    rights: Iterable[ExitPair],
    left_floor: int,
    right_floor: int,
    maxlen: int,
    accept: Callable[[EntryPair, ExitPair, int, int], bool] | None = None,
) -> set[Word]:
    c, lc = profile.c_word, len(profile.c_word)
    am, ap = profile.alpha_minus, profile.alpha_plus
    rights = list(rights)
    words = set()
    for left in lefts:
        sigma_m, d_m = left
        for right in rights:
            d_p, sigma_p = right
            room = maxlen - 2 - len(d_m) - lc - len(d_p)
            for k_m in range(1, room):
                if len(d_m) + k_m + lc <= left_floor:
                    continue
                for k_p in range(1, room - k_m + 1):
                    if lc + k_p + len(d_p) <= right_floor:
                        continue
                    if accept is not None and not accept(left, right, k_m, k_p):
                        continue
                    words.add(
                        (sigma_m,) + d_m + (am,) * k_m + c + (ap,) * k_p + d_p + (sigma_p,)
                    )
    return words


def _one_run(
    alpha: int,
    lefts: Iterable[EntryPair],
    rights: Iterable[ExitPair],
    floor: Callable[[Word, Word], int],
    maxlen: int,
) -> set[Word]:
    """Words ``σ d α^k d' σ'`` whose run satisfies ``k > floor(d, d')``."""
    rights = list(rights)
    words = set()
    for sigma_m, d_m in lefts:
        for d_p, sigma_p in rights:
            room = maxlen - 2 - len(d_m) - len(d_p)
            for k in range(max(1, floor(d_m, d_p) + 1), room + 1):
                words.add((sigma_m,) + d_m + (alpha,) * k + d_p + (sigma_p,))
    return words


def build_b_families(
    profile: LmProfile, params: LmParameters, maxlen: int = DEFAULT_MAXLEN
) -> dict[str, frozenset[Word]]:
    """The seven families of the (LM) decomposition, up to ``maxlen``.

    Keys follow :data:`FAMILY_NAMES`; ``xi`` marks the end taken from a Ξ
    set and ``minus``/``plus`` the runs the words pass through.

    Raises
    ------
    ParameterError
        If the Δ maps are not defined exactly on the counter pairs.
    """
    if set(params.delta_minus) != set(profile.counter_minus):
        raise ParameterError("Δ⁻ must be defined exactly on the minus pairs outside Ξ₋")
    if set(params.delta_plus) != set(profile.counter_plus):
        raise ParameterError("Δ⁺ must be defined exactly on the plus pairs outside Ξ₊")
    lc = len(profile.c_word)
    am, ap = profile.alpha_minus, profile.alpha_plus
    minus_exits = [
        p for p in _exit_pairs(profile.d_plus_minus) if len(p[0]) <= profile.r_plus
    ]
    plus_entries = [
        p for p in _entry_pairs(profile.d_minus_plus) if len(p[1]) <= profile.r_minus
    ]
    short_xi_minus_plus = [
        p for p in sorted(profile.xi_minus_plus) if len(p[1]) <= profile.r_xi_minus
    ]
    short_xi_plus_minus = [
        p for p in sorted(profile.xi_plus_minus) if len(p[0]) <= profile.r_xi_plus
    ]

    def counter(left, right, k_m, k_p):
        lower = params.delta_minus[left].shifted(k_m + params.j_minus)
        upper = params.delta_plus[right].shifted(params.j_plus + k_p)
        return lower.intersects(upper)

    families = {
        "xi|minus|plus": _two_runs(
            profile, sorted(profile.xi_minus), profile.plus_pairs,
            profile.r_xi_minus, profile.r_xi_plus, maxlen,
        ),
        "minus|plus|xi": _two_runs(
            profile, profile.minus_pairs, sorted(profile.xi_plus),
            profile.r_xi_minus, profile.r_xi_plus, maxlen,
        ),
        "xi|minus": _one_run(
            am, sorted(profile.xi_minus), minus_exits,
            lambda d, e: profile.r_xi_minus - len(d) - lc, maxlen,
        ),
        "minus|xi": _one_run(
            am, profile.minus_pairs, short_xi_plus_minus,
            lambda d, e: profile.r_minus - len(d) - lc, maxlen,
        ),
        "xi|plus": _one_run(
            ap, short_xi_minus_plus, profile.plus_pairs,
            lambda d, e: profile.r_plus - len(e) - lc, maxlen,
        ),
        "plus|xi": _one_run(
            ap, plus_entries, sorted(profile.xi_plus),
            lambda d, e: profile.r_xi_plus - len(e) - lc, maxlen,
        ),
        "counter": _two_runs(
            profile, profile.counter_minus, profile.counter_plus,
            profile.r_minus, profile.r_plus, maxlen, counter,
        ),
    }
    return {name: frozenset(words) for name, words in families.items()}


def family_overlaps(
    families: Mapping[str, frozenset[Word]]
) -> dict[tuple[str, str], frozenset[Word]]:
    """Non-empty pairwise intersections of the families."""
    overlaps = {}
    for first, second in itertools.combinations(families, 2):
        shared = families[first] & families[second]
        if shared:
            overlaps[(first, second)] = shared
    return overlaps


def lm_conditions(profile: LmProfile) -> dict[str, bool]:
    """The non-emptiness conditions that precede the (LM) decomposition."""
    return {
        "xi-minus-nonempty": bool(profile.xi_minus),
        "minus-pairs-outside-xi": bool(profile.counter_minus),
        "xi-plus-nonempty": bool(profile.xi_plus),
        "plus-pairs-outside-xi": bool(profile.counter_plus),
    }


@dataclasses.dataclass
class LmCheckReport:
    """Outcome of comparing 𝓑(X) with the seven families above ``i``.

    ``missing`` words are in 𝓑(X) but in no family, ``extra`` words are in
    a family but not in 𝓑(X). Both are capped at ``WITNESS_LIMIT``.
    """

    passed: bool
    i: int
    maxlen: int
    depth: int
    missing: tuple[Word, ...] = ()
    extra: tuple[Word, ...] = ()
    conditions: dict[str, bool] = dataclasses.field(default_factory=dict)
    reason: str = ""


def lm_check(
    spec: SubshiftSpec,
    params: LmParameters,
    maxlen: int = DEFAULT_MAXLEN,
    depth: int = DEFAULT_DEPTH,
    bounds: ProfileBounds = DEFAULT_BOUNDS,
    profile: LmProfile | None = None,
) -> LmCheckReport:
    """Check the (LM) decomposition of ``spec`` with ``params`` up to ``maxlen``."""
    report = LmCheckReport(False, params.i, maxlen, depth)
    try:
        if profile is None:
            profile = lm_profile(spec, depth, bounds)
        families = build_b_families(profile, params, maxlen)
    except (CharacteristicPairError, OutsideClass, ParameterError) as exc:
        report.reason = str(exc)
        return report
    report.conditions = lm_conditions(profile)
    long_b = {w for w in b_words(spec, maxlen, depth) if len(w) > params.i}
    union = {w for words in families.values() for w in words if len(w) > params.i}
    report.missing = tuple(sorted(long_b - union, key=word_order)[:WITNESS_LIMIT])
    report.extra = tuple(sorted(union - long_b, key=word_order)[:WITNESS_LIMIT])
    failed = [name for name, holds in report.conditions.items() if not holds]
    if failed:
        report.reason = f"Conditions fail: {', '.join(failed)}"
    elif report.missing or report.extra:
        report.reason = "Families and 𝓑(X) differ"
    report.passed = not report.reason
    _logger.debug(f"lm_check I={params.i}: {report.reason or 'pass'}")
    return report


def _counter_observations(
    spec: SubshiftSpec, profile: LmProfile, left: EntryPair, right: ExitPair, maxlen: int
) -> tuple[frozenset[int], tuple[int, int]]:
    """Run-length differences ``k₋ - k₊`` joining ``left`` to ``right``.

    Returns the admissible differences and the window of differences
    observed. Raises NoParameters if admissibility is not a function of
    the difference.
    """
    seen: dict[int, bool] = {}
    words = _two_runs(profile, [left], [right], profile.r_minus, profile.r_plus, maxlen)
    head = 1 + len(left[1])
    for word in words:
        k_m = sum(1 for _ in itertools.takewhile(lambda s: s == profile.alpha_minus, word[head:]))
        k_p = len(word) - 2 - len(left[1]) - len(right[0]) - len(profile.c_word) - k_m
        e = k_m - k_p
        ok = spec.admits(word)
        if seen.setdefault(e, ok) != ok:
            raise NoParameters(
                f"Admissibility of {spec.alphabet.render(word)} is not a function of k₋ - k₊"
            )
    if not seen:
        raise NoParameters(f"maxlen {maxlen} leaves no room for counter words")
    return frozenset(e for e, ok in seen.items() if ok), (min(seen), max(seen))


Observations = Mapping[tuple[EntryPair, ExitPair], frozenset[int]]
Windows = Mapping[tuple[EntryPair, ExitPair], tuple[int, int]]


def _reproduces(
    observed: frozenset[int],
    window: tuple[int, int],
    lower: UltimatelyPeriodicSet,
    upper: UltimatelyPeriodicSet,
    shift: int,
    limit: int,
) -> bool:
    xs = lower.expand(limit)
    return all(
        (e in observed) == any(e + x - shift in upper for x in xs)
        for e in range(window[0], window[1] + 1)
    )


def _minus_offsets(
    observed: Observations,
    windows: Windows,
    left: EntryPair,
    delta_plus: Mapping[ExitPair, UltimatelyPeriodicSet],
    shift: int,
    limit: int,
) -> set[int]:
    """Offsets ``x`` whose differences ``y - x + shift`` are all admissible.

    Only differences inside the observation windows count, and each offset
    must explain at least one admissible difference.
    """
    offsets = set()
    for x in range(limit + 1):
        consistent, matched = True, False
        for right, upper in delta_plus.items():
            lo, hi = windows[(left, right)]
            for y in upper.expand(hi + x - shift):
                e = y - x + shift
                if e < lo:
                    continue
                if e not in observed[(left, right)]:
                    consistent = False
                    break
                matched = True
            if not consistent:
                break
        if consistent and matched:
            offsets.add(x)
    return offsets


def fit_counter_sets(
    observed: Observations,
    windows: Windows,
    lefts: Sequence[EntryPair],
    rights: Sequence[ExitPair],
    j_minus: int,
    j_plus: int,
    limit: int,
) -> LmParameters | None:
    """Δ⁻ and Δ⁺ reproducing the observed counter laws for fixed J∓.

    ``observed[(l, r)]`` holds the admissible differences ``k₋ - k₊``
    seen inside ``windows[(l, r)]``. The first left pair gets ``Δ⁻ = {0}``
    and each Δ⁺ is fitted from its differences; every other Δ⁻ is the
    largest set of offsets in ``[0, limit]`` the windows allow. Returns
    None if no such sets reproduce every window. ``I`` is left at 0.
    """
    shift = j_plus - j_minus
    reference = lefts[0]
    delta_plus = {}
    for right in rights:
        values = {e - shift for e in observed[(reference, right)]}
        if any(v < 0 for v in values):
            return None
        delta_plus[right] = UltimatelyPeriodicSet.fit(
            values, windows[(reference, right)][1] - shift
        )
    delta_minus = {reference: UltimatelyPeriodicSet.finite({0})}
    for left in lefts[1:]:
        offsets = _minus_offsets(observed, windows, left, delta_plus, shift, limit)
        if not offsets:
            return None
        delta_minus[left] = UltimatelyPeriodicSet.fit(offsets, limit)
    for left in lefts:
        for right in rights:
            if not _reproduces(
                observed[(left, right)],
                windows[(left, right)],
                delta_minus[left],
                delta_plus[right],
                shift,
                limit,
            ):
                return None
    return LmParameters(0, j_minus, j_plus, delta_minus, delta_plus)


def candidate_parameters(
    observed: Observations,
    windows: Windows,
    lefts: Sequence[EntryPair],
    rights: Sequence[ExitPair],
    limit: int,
) -> Iterator[LmParameters]:
    """Fitted parameters for every ``J₋, J₊`` in ``[0, MAX_J]``.

    The smallest admissible difference of the first left pair fixes the
    preferred ``J₊ - J₋``, so the tight pairs come first and the smallest
    Δ⁺ element is 0. Pairs further from it follow in order of distance.
    """
    present = [min(observed[(lefts[0], r)]) for r in rights if observed[(lefts[0], r)]]
    if not present:
        raise NoParameters("No admissible counter words were observed")
    floor = min(present)
    grid = [(jm, jp) for jm in range(MAX_J + 1) for jp in range(MAX_J + 1)]
    grid.sort(key=lambda j: (abs(j[1] - j[0] - floor), j))
    for j_minus, j_plus in grid:
        params = fit_counter_sets(
            observed, windows, lefts, rights, j_minus, j_plus, limit
        )
        if params is not None:
            yield params


def _mismatch(report: LmCheckReport) -> tuple[int, int]:
    failed = sum(1 for holds in report.conditions.values() if not holds)
    return failed, len(report.missing) + len(report.extra)


def infer_parameters(
    spec: SubshiftSpec,
    maxlen: int = DEFAULT_MAXLEN,
    depth: int = DEFAULT_DEPTH,
    bounds: ProfileBounds = DEFAULT_BOUNDS,
) -> LmParameters:
    """Search Lind-Marcus parameters for ``spec`` and verify them.

    Every ``J₋, J₊`` in ``[0, MAX_J]`` is tried in the order of
    :func:`candidate_parameters`. For each, Δ∓ are fitted as ultimately
    periodic sets, ``I`` is the smallest value above which the families
    and 𝓑(X) agree up to ``maxlen``, and the first tuple that passes
    :func:`lm_check` is returned. Parameters are normalized so that the
    first counter pair has ``Δ⁻ = {0}`` and J carries the common offset.

    Raises
    ------
    NoParameters
        If no tuple passes; ``closest`` holds the check that came nearest.
    """
    try:
        profile = lm_profile(spec, depth, bounds)
    except (CharacteristicPairError, OutsideClass) as exc:
        raise NoParameters(f"No Lind-Marcus structure: {exc}") from exc
    lefts, rights = profile.counter_minus, profile.counter_plus
    if not lefts or not rights:
        raise NoParameters("No counter pairs outside the Ξ sets")
    observed = {}
    windows = {}
    for left in lefts:
        for right in rights:
            admissible, window = _counter_observations(spec, profile, left, right, maxlen)
            observed[(left, right)] = admissible
            windows[(left, right)] = window
    b_set = set(b_words(spec, maxlen, depth))
    closest = None
    for params in candidate_parameters(observed, windows, lefts, rights, maxlen):
        families = build_b_families(profile, params, maxlen)
        union = {w for words in families.values() for w in words}
        i = max((len(w) for w in union.symmetric_difference(b_set)), default=1)
        params = params.with_i(i)
        report = lm_check(spec, params, maxlen, depth, bounds, profile)
        if report.passed and i < maxlen - 1:
            _logger.info(f"Inferred I={i}, J-={params.j_minus}, J+={params.j_plus}")
            return params
        if report.passed:
            report.passed = False
            report.reason = f"I = {i} leaves no words to check below {maxlen}"
        _logger.debug(
            f"J-={params.j_minus}, J+={params.j_plus} rejected: {report.reason}"
        )
        if closest is None or _mismatch(report) < _mismatch(closest):
            closest = report
    if closest is None:
        raise NoParameters(f"No Δ sets reproduce the counter law up to {maxlen}")
    raise NoParameters(
        f"No parameters verified up to {maxlen}: {closest.reason}", closest=closest
    )
