"""
Conjugacy

Sliding block codes between subshifts, the exact conjugacies between the
n-block systems of one subshift, and the transfer of Lind-Marcus parameters
along a conjugacy whose forward map is one-block and pulls synchronizing
symbols back to synchronizing symbols.

A conjugacy pair has a one-block ``forward`` map from the source X̃ onto
the target X and an ``inverse`` map of radius L from X back to X̃.
Parameters known for X are carried over to X̃.
"""

import dataclasses
from typing import Mapping, Sequence

from .lmstructure import (
    DEFAULT_BOUNDS,
    LmCheckReport,
    LmParameters,
    LmProfile,
    NoParameters,
    ProfileBounds,
    infer_parameters,
    lm_check,
    lm_profile,
)
from .shiftspaces import NBlock, SubshiftSpec, extend, nblock_system
from .synchronization import (
    DEFAULT_DEPTH,
    DEFAULT_MAXLEN,
    sync_margin,
    synchro_symbols,
)
from .utils.periodic import UltimatelyPeriodicSet
from .words import Alphabet, Word, block_windows

import logging

_logger = logging.getLogger(__name__)


class BlockMapError(ValueError):
    pass


class HypothesisError(Exception):
    """The forward map sends a non-synchronizing symbol to a synchronizing one."""

    def __init__(self, message: str, violators: Sequence[int] = ()):
        super().__init__(message)
        self.violators = tuple(violators)


class DecompositionError(Exception):
    pass


class TransferError(Exception):
    pass


class LmTypeRefusal(NoParameters):
    """No n-block system up to the limit passed; ``failures`` maps n to a cause."""

    def __init__(self, message: str, failures: Mapping[int, str]):
        super().__init__(message)
        self.failures = dict(failures)


@dataclasses.dataclass(frozen=True)
class BlockMap:
    """Sliding block code of radius ``radius``.

    ``table`` maps each admissible source window of length ``2 * radius + 1``
    to a target symbol.
    """

    source: Alphabet
    target: Alphabet
    radius: int
    table: Mapping[Word, int]

    def __post_init__(self):
        if self.radius < 0:
            raise BlockMapError(f"Radius must be non-negative, got {self.radius}")
        width = 2 * self.radius + 1
        for window, symbol in self.table.items():
            if len(window) != width:
                raise BlockMapError(f"Window {window} does not have length {width}")
            self.source.check(window)
            self.target.check((symbol,))

    @property
    def width(self) -> int:
        return 2 * self.radius + 1

    @classmethod
    def one_block(
        cls, source: Alphabet, target: Alphabet, rule: Mapping[int, int]
    ) -> "BlockMap":
        return cls(source, target, 0, {(s,): t for s, t in rule.items()})

    def __call__(self, word: Sequence[int]) -> Word:
        return apply_block_map(self, word)


def apply_block_map(m: BlockMap, word: Sequence[int]) -> Word:
    """Image of ``word``; it is ``2 * radius`` symbols shorter."""
    word = m.source.check(word)
    if len(word) < m.width:
        raise BlockMapError(
            f"Word of length {len(word)} is shorter than the window {m.width}"
        )
    image = []
    for window in block_windows(word, m.width):
        try:
            image.append(m.table[window])
        except KeyError:
            raise BlockMapError(
                f"No table entry for window {m.source.render(window)}"
            ) from None
    return tuple(image)


@dataclasses.dataclass(frozen=True)
class ConjugacyPair:
    source: SubshiftSpec
    target: SubshiftSpec
    forward: BlockMap
    inverse: BlockMap

    def __post_init__(self):
        if self.forward.radius != 0:
            raise BlockMapError("The forward map must be one-block")

    @property
    def radius(self) -> int:
        return self.inverse.radius


def identity_conjugacy(spec: SubshiftSpec) -> ConjugacyPair:
    rule = {s: s for s in spec.alphabet}
    same = BlockMap.one_block(spec.alphabet, spec.alphabet, rule)
    return ConjugacyPair(spec, spec, same, same)


def _block_system(spec: SubshiftSpec, n: int) -> SubshiftSpec:
    return spec if n == 1 else nblock_system(spec, n)


def _base_of(system: SubshiftSpec, word: Word) -> Word:
    return system.base_word(word) if isinstance(system, NBlock) else word


def _symbol_of(system: SubshiftSpec, base: Word) -> int:
    if isinstance(system, NBlock):
        return system.alphabet.block_index(base)
    (symbol,) = base
    return symbol


def nblock_conjugacy(spec: SubshiftSpec, n: int, m: int = 1) -> ConjugacyPair:
    """Conjugacy from the n-block system onto the m-block system, ``m <= n``.

    The forward map keeps the first ``m`` coordinates of each block; the
    inverse reads an ``n``-block off ``2(n - m) + 1`` overlapping m-blocks.
    """
    if not 1 <= m <= n:
        raise ValueError(f"Need 1 <= m <= n, got m={m}, n={n}")
    source, target = _block_system(spec, n), _block_system(spec, m)
    forward = BlockMap.one_block(
        source.alphabet,
        target.alphabet,
        {s: _symbol_of(target, _base_of(source, (s,))[:m]) for s in source.alphabet},
    )
    radius = n - m
    table = {}
    for window in target.language(2 * radius + 1):
        base = _base_of(target, window)
        table[window] = _symbol_of(source, base[radius : radius + n])
    inverse = BlockMap(target.alphabet, source.alphabet, radius, table)
    return ConjugacyPair(source, target, forward, inverse)


@dataclasses.dataclass
class TransportReport:
    """Lengths at which the maps fail to carry one language onto the other."""

    maxlen: int
    failures: list[tuple[int, str]] = dataclasses.field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def verify_round_trip(pair: ConjugacyPair, maxlen: int = 10) -> TransportReport:
    """``inverse(forward(w))`` is ``w`` trimmed by the radius on both sides."""
    report = TransportReport(maxlen)
    r = pair.radius
    for n in range(2 * r + 1, maxlen + 1):
        for word in pair.source.language(n):
            back = apply_block_map(pair.inverse, apply_block_map(pair.forward, word))
            if back != word[r : len(word) - r]:
                report.failures.append((n, pair.source.alphabet.render(word)))
                break
    return report


def membership_transport(pair: ConjugacyPair, maxlen: int = 10) -> TransportReport:
    """Both maps send admissible words onto exactly the admissible words."""
    report = TransportReport(maxlen)
    r = pair.radius
    for n in range(1, maxlen + 1):
        image = {apply_block_map(pair.forward, w) for w in pair.source.language(n)}
        if image != set(pair.target.language(n)):
            report.failures.append((n, "forward"))
        back = {apply_block_map(pair.inverse, w) for w in pair.target.language(n + 2 * r)}
        if back != set(pair.source.language(n)):
            report.failures.append((n, "inverse"))
    return report


@dataclasses.dataclass
class HypothesisReport:
    passed: bool
    depth: int
    violators: tuple[int, ...] = ()


def one_block_synchro_check(
    pair: ConjugacyPair, depth: int = DEFAULT_DEPTH
) -> HypothesisReport:
    """Every source symbol mapped to a synchronizing symbol is synchronizing."""
    target_sync = synchro_symbols(pair.target, depth)
    source_sync = synchro_symbols(pair.source, depth)
    violators = tuple(
        s
        for s in pair.source.alphabet
        if pair.forward.table.get((s,)) in target_sync and s not in source_sync
    )
    if violators:
        names = [pair.source.alphabet.name(s) for s in violators]
        _logger.debug(f"Synchronizing images of non-synchronizing symbols: {names}")
    return HypothesisReport(not violators, depth, violators)


@dataclasses.dataclass(frozen=True)
class Decomposition:
    """Split of ``Φ̃(b̃ σ̃)`` (minus) or ``Φ̃(σ̃ b̃)`` (plus) at a synchronizing symbol.

    On the minus side ``image = outer + (sigma,) + inner`` with ``sigma``
    the last synchronizing symbol; on the plus side ``image = inner +
    (sigma,) + outer`` with ``sigma`` the first. ``inner`` has no
    synchronizing symbol and its length is ``I₋`` or ``I₊``.
    """

    side: str
    prefix: Word
    outer: Word
    sigma: int
    inner: Word

    @property
    def offset(self) -> int:
        return len(self.inner)


def decompose(
    pair: ConjugacyPair, prefix: Sequence[int], side: str = "minus", depth: int = DEFAULT_DEPTH
) -> Decomposition:
    """Split the image of ``prefix`` at its last (minus) or first (plus) synchronizing symbol.

    Raises
    ------
    DecompositionError
        If the image holds no synchronizing symbol.
    """
    if side not in ("minus", "plus"):
        raise ValueError(f"Side must be 'minus' or 'plus', got {side!r}")
    prefix = pair.source.alphabet.check(prefix)
    image = apply_block_map(pair.forward, prefix)
    sync = synchro_symbols(pair.target, depth)
    positions = [i for i, s in enumerate(image) if s in sync]
    if not positions:
        raise DecompositionError(
            f"The image {pair.target.alphabet.render(image)} has no synchronizing symbol"
        )
    if side == "minus":
        i = positions[-1]
        return Decomposition(side, prefix, image[:i], image[i], image[i + 1 :])
    i = positions[0]
    return Decomposition(side, prefix, image[i + 1 :], image[i], image[:i])


def resolve_bridge(
    pair: ConjugacyPair, decomposition: Decomposition, d_tilde: Word, profile: LmProfile
) -> Word:
    """Bridge word of the target that a source bridge ``d̃`` resolves to.

    Minus side: the longest prefix of ``inner Φ̃(d̃) α₋`` in 𝓓(σ₋, α₋).
    Plus side: the longest suffix of ``α₊ Φ̃(d̃) inner`` in 𝓓(α₊, σ₊).
    """
    mapped = apply_block_map(pair.forward, d_tilde) if d_tilde else ()
    if decomposition.side == "minus":
        bridges = profile.d_minus.get(decomposition.sigma, frozenset())
        word = decomposition.inner + mapped + (profile.alpha_minus,)
        cuts = (word[:n] for n in range(len(word), -1, -1))
    else:
        bridges = profile.d_plus.get(decomposition.sigma, frozenset())
        word = (profile.alpha_plus,) + mapped + decomposition.inner
        cuts = (word[len(word) - n :] for n in range(len(word), -1, -1))
    for cut in cuts:
        if cut in bridges:
            return cut
    raise DecompositionError(
        f"No bridge of {pair.target.alphabet.name(decomposition.sigma)} "
        f"inside {pair.target.alphabet.render(word)}"
    )


@dataclasses.dataclass
class TransferResult:
    h_minus: int
    h_plus: int
    params: LmParameters
    q: int
    radius: int
    decomposition_log: list[tuple[Word, Word, int, Word, Word]] = dataclasses.field(
        default_factory=list
    )
    report: LmCheckReport | None = None

    @property
    def validated(self) -> bool:
        return self.report is not None and self.report.passed


def padding_exponents(pair: ConjugacyPair, source: LmProfile, target: LmProfile) -> tuple[int, int]:
    """``(H₋, H₊)`` with ``Φ̃(c̃) = α₋^H₋ c α₊^H₊``."""
    image = apply_block_map(pair.forward, source.c_word) if source.c_word else ()
    h_minus = 0
    while h_minus < len(image) and image[h_minus] == target.alpha_minus:
        h_minus += 1
    rest = image[h_minus:]
    c = target.c_word
    tail = rest[len(c) :]
    if rest[: len(c)] != c or any(s != target.alpha_plus for s in tail):
        raise TransferError(
            f"Image {pair.target.alphabet.render(image)} of the connecting word "
            f"is not of the form α₋^H c α₊^H"
        )
    return h_minus, len(tail)


def transfer_parameters(
    pair: ConjugacyPair,
    target_params: LmParameters,
    depth: int = DEFAULT_DEPTH,
    maxlen: int = DEFAULT_MAXLEN,
    bounds: ProfileBounds = DEFAULT_BOUNDS,
) -> TransferResult:
    """Carry Lind-Marcus parameters of the target over to the source.

    Δ̃₋ of a source counter pair ``σ̃ d̃`` is the union over left margins
    ``b̃`` of length ``Q + L`` of ``Δ₋(σ₋ d⁻) + ℓ(d̃) - ℓ(d⁻) + I₋``; Δ̃₊ is
    symmetric. ``J̃ = J + H`` and Ĩ is the lower bound built from μ, ℓ(c),
    L, Q and R_Ξ. The result is validated with :func:`lm_check` on the
    source.

    Raises
    ------
    HypothesisError
        If :func:`one_block_synchro_check` fails.
    TransferError
        If the connecting word does not map to a padded connecting word, or
        a source counter pair resolves to a target pair without Δ.
    """
    hypothesis = one_block_synchro_check(pair, depth)
    if not hypothesis.passed:
        raise HypothesisError(
            f"{len(hypothesis.violators)} symbols break the synchronization hypothesis",
            hypothesis.violators,
        )
    target = lm_profile(pair.target, depth, bounds)
    source = lm_profile(pair.source, depth, bounds)
    h_minus, h_plus = padding_exponents(pair, source, target)
    q = sync_margin(pair.target, depth, depth) or 0
    radius = pair.radius
    margin = q + radius
    log = []

    delta_minus = {}
    for sigma_t, d_t in source.counter_minus:
        found = UltimatelyPeriodicSet()
        for b_t in sorted(extend(pair.source, (sigma_t,), margin, "left")):
            split = decompose(pair, b_t + (sigma_t,), "minus", depth)
            d = resolve_bridge(pair, split, d_t, target)
            key = (split.sigma, d)
            if key not in target_params.delta_minus:
                raise TransferError(f"Minus pair {key} has no Δ in the target parameters")
            shift = len(d_t) - len(d) + split.offset
            found = found | target_params.delta_minus[key].shifted(shift)
            log.append((split.prefix, split.outer, split.sigma, split.inner, d))
        delta_minus[(sigma_t, d_t)] = found

    delta_plus = {}
    for d_t, sigma_t in source.counter_plus:
        found = UltimatelyPeriodicSet()
        for b_t in sorted(extend(pair.source, (sigma_t,), margin, "right")):
            split = decompose(pair, (sigma_t,) + b_t, "plus", depth)
            d = resolve_bridge(pair, split, d_t, target)
            key = (d, split.sigma)
            if key not in target_params.delta_plus:
                raise TransferError(f"Plus pair {key} has no Δ in the target parameters")
            shift = split.offset - len(d) + len(d_t)
            found = found | target_params.delta_plus[key].shifted(shift)
            log.append((split.prefix, split.outer, split.sigma, split.inner, d))
        delta_plus[(d_t, sigma_t)] = found

    i_tilde = max(
        target_params.i,
        target.mu_minus + target.mu_plus + len(target.c_word) + 4 * radius + 2,
        target.r_xi_minus + target.r_xi_plus + 2 * q + 2 * radius,
    )
    params = LmParameters(
        i_tilde,
        target_params.j_minus + h_minus,
        target_params.j_plus + h_plus,
        delta_minus,
        delta_plus,
    )
    result = TransferResult(h_minus, h_plus, params, q, radius, log)
    result.report = lm_check(pair.source, params, maxlen, depth, bounds, source)
    _logger.info(
        f"Transferred H=({h_minus}, {h_plus}), I={i_tilde}: "
        f"{'valid' if result.validated else result.report.reason}"
    )
    return result


@dataclasses.dataclass
class LmTypeResult:
    n: int
    spec: SubshiftSpec
    params: LmParameters


def lm_type_search(
    spec: SubshiftSpec,
    n_max: int = 3,
    maxlen: int = DEFAULT_MAXLEN,
    depth: int = DEFAULT_DEPTH,
    bounds: ProfileBounds = DEFAULT_BOUNDS,
) -> LmTypeResult:
    """First n whose n-block system is a verified Lind-Marcus one-counter shift.

    Raises
    ------
    LmTypeRefusal
        With the failure cause for every n tried.
    """
    failures = {}
    for n in range(1, n_max + 1):
        system = _block_system(spec, n)
        try:
            params = infer_parameters(system, maxlen, depth, bounds)
        except NoParameters as exc:
            _logger.debug(f"n={n}: {exc}")
            failures[n] = str(exc)
            continue
        _logger.info(f"{spec} has a Lind-Marcus {n}-block system")
        return LmTypeResult(n, system, params)
    raise LmTypeRefusal(f"No n-block system of {spec} up to n={n_max} passed", failures)
