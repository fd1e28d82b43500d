"""
Pipelines

The computations behind the command line. Each pipeline returns a report
dict with keys ``command``, ``subject``, ``verdict`` and ``records``;
every record is a flat dict with a ``check`` name, usually a ``verdict``,
and the numbers and witnesses needed to re-run the check by hand. The
report verdict is ``"fail"`` iff some record failed.

The ``lemma21``, ``lemma22`` and ``profile`` suites run on the 2-block
system Y when handed a Lind-Marcus shift, and compare the computed sets
with the families printed for Y where those apply.
"""

import functools
import re
import time
import warnings
from typing import Callable, Iterable, Iterator, Mapping

from .conjugacy import (
    ConjugacyPair,
    DecompositionError,
    LmTypeRefusal,
    TransferError,
    TransportReport,
    lm_type_search,
    membership_transport,
    one_block_synchro_check,
    transfer_parameters,
    verify_round_trip,
)
from .definitions import delta_entries
from .lmstructure import (
    DEFAULT_BOUNDS,
    CharacteristicPairError,
    LmCheckReport,
    LmParameters,
    LmProfile,
    OutsideClass,
    ParameterError,
    ProfileBounds,
    build_b_families,
    family_overlaps,
    lm_profile,
    lm_check,
)
from .onecounter import AgreementReport, builtin_oca, oca_agrees
from .shiftspaces import (
    LindMarcus,
    NBlock,
    SubshiftSpec,
    markov_coded_language,
    nblock_system,
    reversed_spec,
)
from .synchronization import (
    DEFAULT_DEPTH,
    DEFAULT_MAXLEN,
    DEFAULT_Q_MAX,
    WITNESS_LIMIT,
    SynchroError,
    b_words,
    extract_markov_code,
    strong_sync_check,
    sync_margin,
    synchro_symbols,
)
from .words import Alphabet, Word, word_order

import logging

_logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
SKIP = "skip"

RECONCILIATION_CLASSES = (
    "adjacent-synchronizing",
    "duplicated-family",
    "degenerate-member",
    "zero-exponent-boundary",
    "unexplained",
)
OWN_SIDE = {"sigma-minus-plus": "sigma-minus", "sigma-plus-minus": "sigma-plus"}
MARKOV_CHECK_LENGTH = 8
TRANSPORT_MAXLEN = 8
OCA_LENGTHS = {
    "reset-code": 20,
    "counter-code": 20,
    "lm-admissible": 12,
    "b-of-Y": 14,
}


class SuiteError(ValueError):
    """Raised for an unknown verification suite."""


def _render(spec: SubshiftSpec, words: Iterable[Word]) -> list[str]:
    return [spec.alphabet.render(w) for w in sorted(words, key=word_order)]


def _names(spec: SubshiftSpec, symbols: Iterable[int]) -> list[str]:
    return [spec.alphabet.name(s) for s in sorted(symbols)]


def _verdict(records: list[dict]) -> str:
    return FAIL if any(r.get("verdict") == FAIL for r in records) else PASS


def _report(command: str, spec: SubshiftSpec, records: list[dict], **fields) -> dict:
    result = {
        "command": command,
        **fields,
        "subject": repr(spec),
        "verdict": _verdict(records),
        "records": records,
    }
    _logger.info(result)
    return result


def _timing_record(start: float) -> dict:
    return {"check": "timing", "seconds": round(time.perf_counter() - start, 3)}


def lind_marcus_pair(spec: SubshiftSpec) -> tuple[LindMarcus, NBlock] | None:
    """The Lind-Marcus shift and its 2-block system, if ``spec`` is either."""
    if isinstance(spec, LindMarcus):
        return spec, nblock_system(spec, 2)
    if isinstance(spec, NBlock) and spec.n == 2 and isinstance(spec.inner, LindMarcus):
        return spec.inner, spec
    return None


def _suite_subject(
    spec: SubshiftSpec, what: str
) -> tuple[SubshiftSpec, tuple[LindMarcus, NBlock] | None]:
    """The subshift a suite runs on, and the pair the printed sets apply to."""
    found = lind_marcus_pair(spec)
    if found is None:
        return spec, None
    if len(found[0].a_symbols) != 1:
        warnings.warn(
            f"Skipping the printed {what}: {found[0]} has "
            f"{len(found[0].a_symbols)} a-type symbols",
            UserWarning,
        )
        return found[1], None
    if found[0].offset:
        warnings.warn(
            f"Skipping the printed {what}: {found[0]} has counter offset {found[0].offset}",
            UserWarning,
        )
        return found[1], None
    return found[1], found


# Printed families of 𝓑(Y) ##################################################


def _bridges(
    y: NBlock,
    maxbase: int,
    head: int,
    tail: int,
    ks: range,
    ms: range,
    equal: bool = False,
) -> frozenset[Word]:
    b, c = y.inner.b, y.inner.c
    words = set()
    for k in ks:
        for m in ms:
            if equal and k != m:
                continue
            base = (head,) + (b,) * k + (c,) * m + (tail,)
            if len(base) <= maxbase:
                words.add(y.to_blocks(base))
    return frozenset(words)


def printed_lemma21_words(lm: LindMarcus, maxbase: int) -> dict[str, frozenset[Word]]:
    """The six printed families of 𝓑(Y) as 2-block words.

    Exponents marked ``>=0`` run over ℤ₊ and those marked ``>=1`` over ℕ.
    Only base words of length at most ``maxbase`` are generated. The
    family ``c b^k c^l b`` is printed twice and is kept twice.
    """
    (a,) = lm.a_symbols
    b, c = lm.b, lm.c
    y = nblock_system(lm, 2)
    up = range(0, maxbase)
    positive = range(1, maxbase)
    only_zero = range(0, 1)
    return {
        "a b^k c^k a, k>=0": _bridges(y, maxbase, a, a, up, up, equal=True),
        "c b^k c^l b, k,l>=0": _bridges(y, maxbase, c, b, up, up),
        "c b^k c^l a, k,l>=1": _bridges(y, maxbase, c, a, positive, positive),
        "c b^k c^l b, k>=1": _bridges(y, maxbase, c, b, positive, up),
        "a c^l b, l>=0": _bridges(y, maxbase, a, b, only_zero, up),
        "c b^k a, k>=0": _bridges(y, maxbase, c, a, up, only_zero),
    }


def printed_synchro_symbols(lm: LindMarcus) -> frozenset[int]:
    """The printed synchronizing symbols ``aa, ab, ac, ba, ca, cb`` of Y."""
    (a,) = lm.a_symbols
    b, c = lm.b, lm.c
    y = nblock_system(lm, 2)
    pairs = [(a, a), (a, b), (a, c), (b, a), (c, a), (c, b)]
    return frozenset(y.to_blocks(p)[0] for p in pairs)


def _letters(lm: LindMarcus, base: Word) -> str:
    def letter(symbol):
        if symbol in lm.a_symbols:
            return "a"
        return {lm.b: "b", lm.c: "c"}[symbol]

    return "".join(letter(s) for s in base)


def reconcile_lemma21(
    lm: LindMarcus,
    y: NBlock,
    maxlen: int = DEFAULT_MAXLEN,
    depth: int = DEFAULT_DEPTH,
) -> dict[str, tuple[Word, ...]]:
    """Sort the differences between computed 𝓑(Y) and the printed families.

    Computed-only words of length 2 join two synchronizing symbols; longer
    ones of the shape ``a b^k c^l b`` are the reading of the doubled
    family with a leading ``a``. Printed-only words are single symbols or
    start or end outside the synchronizing symbols because an exponent is
    zero. Anything else is ``unexplained``.
    """
    computed = set(b_words(y, maxlen, depth))
    printed = set().union(*printed_lemma21_words(lm, maxlen + 1).values())
    sync = synchro_symbols(y, depth)
    classes = {name: [] for name in RECONCILIATION_CLASSES}
    for word in computed - printed:
        if len(word) == 2:
            classes["adjacent-synchronizing"].append(word)
        elif re.fullmatch("ab+c+b", _letters(lm, y.base_word(word))):
            classes["duplicated-family"].append(word)
        else:
            classes["unexplained"].append(word)
    for word in printed - computed:
        if len(word) == 1:
            classes["degenerate-member"].append(word)
        elif word[0] not in sync or word[-1] not in sync:
            classes["zero-exponent-boundary"].append(word)
        else:
            classes["unexplained"].append(word)
    return {name: tuple(sorted(w, key=word_order)) for name, w in classes.items()}


def _synchro_free_words(spec: SubshiftSpec, sync: frozenset[int], maxlen: int) -> set[Word]:
    free = [s for s in spec.alphabet if s not in sync]
    found = set()
    layer = [()]
    for _ in range(maxlen):
        layer = [w + (s,) for w in layer for s in free if spec.admits(w + (s,))]
        found.update(layer)
    return found


def _lemma21_records(
    spec: SubshiftSpec, maxlen: int, depth: int, bounds: ProfileBounds
) -> list[dict]:
    subject, found = _suite_subject(spec, "families of 𝓑(Y)")
    sync = synchro_symbols(subject, depth)
    records = []
    if found is None:
        records.append(
            {
                "check": "synchro-symbols",
                "verdict": SKIP,
                "computed": _names(subject, sync),
            }
        )
    else:
        lm, y = found
        printed = printed_synchro_symbols(lm)
        records.append(
            {
                "check": "synchro-symbols",
                "verdict": PASS if sync == printed else FAIL,
                "depth": depth,
                "computed": _names(y, sync),
                "printed": _names(y, printed),
            }
        )
        classes = reconcile_lemma21(lm, y, maxlen, depth)
        for name, words in classes.items():
            failed = name == "unexplained" and bool(words)
            records.append(
                {
                    "check": f"reconcile:{name}",
                    "verdict": FAIL if failed else PASS,
                    "maxlen": maxlen,
                    "count": len(words),
                    "witnesses": _render(y, words[:WITNESS_LIMIT]),
                }
            )
        free = _synchro_free_words(y, sync, maxlen)
        expected = {
            y.to_blocks((lm.b,) * k + (lm.c,) * (n + 1 - k))
            for n in range(1, maxlen + 1)
            for k in range(n + 2)
        }
        differing = free.symmetric_difference(expected)
        records.append(
            {
                "check": "synchro-free-words",
                "verdict": FAIL if differing else PASS,
                "maxlen": maxlen,
                "count": len(free),
                "witnesses": _render(y, sorted(differing, key=word_order)[:WITNESS_LIMIT]),
            }
        )
    records.extend(_markov_code_records(subject, maxlen, depth))
    return records


def _markov_code_records(spec: SubshiftSpec, maxlen: int, depth: int) -> list[dict]:
    records = []
    # the extracted code is enumerated up to maxlen - 1
    top = min(MARKOV_CHECK_LENGTH, maxlen // 2, maxlen - 3)
    for side in ("minus", "plus"):
        record = {"check": f"markov-code:{side}", "maxlen": top}
        try:
            code = extract_markov_code(spec, side, maxlen, depth)
        except SynchroError as exc:
            records.append({**record, "verdict": FAIL, "reason": str(exc)})
            continue
        mismatch = next(
            (
                n
                for n in range(1, top + 1)
                if markov_coded_language(code, n) != spec.language(n)
            ),
            None,
        )
        record["verdict"] = PASS if mismatch is None else FAIL
        record["code-words"] = len(code.code.words)
        record["first-mismatch"] = mismatch
        records.append(record)
    return records


# Strong synchronization ####################################################


def _lemma22_records(
    spec: SubshiftSpec, maxlen: int, depth: int, bounds: ProfileBounds
) -> list[dict]:
    found = lind_marcus_pair(spec)
    subject = spec if found is None else found[1]
    q = sync_margin(subject, maxlen, depth)
    record = {
        "check": "strong-sync",
        "verdict": PASS if q is not None else FAIL,
        "q": q,
        "maxlen": maxlen,
        "depth": depth,
    }
    if q is None:
        report = strong_sync_check(subject, DEFAULT_Q_MAX, maxlen, depth)
        record["q-max"] = DEFAULT_Q_MAX
        record["witnesses"] = [
            f"{subject.alphabet.render(word)}@{first}-{last}"
            for word, (first, last) in report.violations
        ]
    return [record]


# Profile ###################################################################


def _as_words(symbols: Iterable[int]) -> frozenset[Word]:
    return frozenset((s,) for s in symbols)


def computed_profile_sets(profile: LmProfile) -> dict[str, frozenset[Word]]:
    """The Σ and Ξ sets of ``profile`` with every entry as a word."""
    return {
        "sigma-minus": _as_words(profile.sigma_minus),
        "sigma-minus-plus": _as_words(profile.sigma_minus_plus),
        "sigma-plus": _as_words(profile.sigma_plus),
        "sigma-plus-minus": _as_words(profile.sigma_plus_minus),
        "xi-minus": frozenset((s,) + d for s, d in profile.xi_minus),
        "xi-plus": frozenset(d + (s,) for d, s in profile.xi_plus),
        "xi-minus-plus": frozenset((s,) + d for s, d in profile.xi_minus_plus),
        "xi-plus-minus": frozenset(d + (s,) for d, s in profile.xi_plus_minus),
    }


def printed_y_profile(lm: LindMarcus, horizon: int) -> dict[str, frozenset[Word]]:
    """The profile of Y as printed, with Ξ words up to length ``horizon``."""
    (a,) = lm.a_symbols
    b, c = lm.b, lm.c
    y = nblock_system(lm, 2)

    def symbols(*pairs):
        return frozenset(y.to_blocks(p) for p in pairs)

    def runs(head, middle, tail):
        return frozenset(
            y.to_blocks((head,) + (middle,) * k + (tail,)) for k in range(horizon)
        )

    empty = frozenset({()})
    return {
        "sigma-minus": symbols((a, b), (c, b)),
        "sigma-minus-plus": symbols((a, c)),
        "sigma-plus": symbols((c, a), (c, b)),
        "sigma-plus-minus": symbols((b, a)),
        "xi-minus": symbols((c, b)),
        "xi-plus": symbols((c, b)),
        "xi-minus-plus": runs(a, b, c),
        "xi-plus-minus": runs(b, c, a),
        "d-minus:(ab)": empty,
        "d-minus:(cb)": empty,
        "d-minus-plus:(ac)": empty,
        "d-plus:(ca)": empty,
        "d-plus:(cb)": empty,
        "d-plus-minus:(ba)": empty,
    }


def _computed_bridges(profile: LmProfile, y: NBlock, item: str) -> frozenset[Word]:
    attribute, _, name = item.partition(":")
    table = getattr(profile, attribute.replace("-", "_"))
    return table.get(y.alphabet.index(name), frozenset())


def classify_profile_item(
    item: str,
    printed: frozenset[Word],
    computed: frozenset[Word],
    own: frozenset[Word] = frozenset(),
) -> str:
    """``match``, ``own-side-omitted``, ``family-variant`` or ``unexplained``.

    ``own`` is the own-side Σ set for the cross Σ sets. For the cross Ξ
    sets the printed and computed words must agree after dropping the
    outer symbol (first on the minus side, last on the plus side);
    printed single symbols are degenerate members of the printed run.
    """
    if printed == computed:
        return "match"
    if item in ("sigma-minus-plus", "sigma-plus-minus"):
        if printed < computed and computed - printed <= own and not printed & own:
            return "own-side-omitted"
    if item in ("xi-minus-plus", "xi-plus-minus"):
        cut = slice(1, None) if item == "xi-minus-plus" else slice(None, -1)
        if {w[cut] for w in printed if len(w) > 1} == {w[cut] for w in computed}:
            return "family-variant"
    return "unexplained"


def _profile_records(
    spec: SubshiftSpec, maxlen: int, depth: int, bounds: ProfileBounds
) -> list[dict]:
    subject, found = _suite_subject(spec, "profile of Y")
    try:
        profile = lm_profile(subject, depth, bounds)
    except CharacteristicPairError as exc:
        return [
            {
                "check": "profile",
                "verdict": FAIL,
                "reason": str(exc),
                "candidates": [
                    f"{subject.alphabet.name(m)},{subject.alphabet.name(p)}"
                    for m, p in exc.candidates
                ],
            }
        ]
    except OutsideClass as exc:
        return [
            {
                "check": "profile",
                "verdict": FAIL,
                "reason": str(exc),
                "witness": subject.alphabet.render(exc.witness),
            }
        ]
    computed = computed_profile_sets(profile)
    records = [_constants_record(subject, profile)]
    if found is None:
        for item, words in computed.items():
            records.append({"check": f"profile:{item}", "computed": _render(subject, words)})
    else:
        lm, y = found
        cross = computed["xi-minus-plus"] | computed["xi-plus-minus"]
        horizon = max((len(w) for w in cross), default=1)
        printed = printed_y_profile(lm, horizon)
        for item, expected in printed.items():
            if item in computed:
                actual = computed[item]
            else:
                actual = _computed_bridges(profile, y, item)
            own = computed.get(OWN_SIDE.get(item, ""), frozenset())
            kind = classify_profile_item(item, expected, actual, own)
            records.append(
                {
                    "check": f"profile:{item}",
                    "verdict": FAIL if kind == "unexplained" else PASS,
                    "class": kind,
                    "computed": _render(y, actual),
                    "printed": _render(y, expected),
                }
            )
    records.append(_reversal_record(subject, profile, depth, bounds))
    return records


def _constants_record(spec: SubshiftSpec, profile: LmProfile) -> dict:
    return {
        "check": "constants",
        "alpha-minus": spec.alphabet.name(profile.alpha_minus),
        "alpha-plus": spec.alphabet.name(profile.alpha_plus),
        "c": spec.alphabet.render(profile.c_word),
        "K-minus": profile.k_minus,
        "K-minus-plus": profile.k_minus_plus,
        "K-plus": profile.k_plus,
        "K-plus-minus": profile.k_plus_minus,
        "R-minus": profile.r_minus,
        "R-plus": profile.r_plus,
        "R-xi-minus": profile.r_xi_minus,
        "R-xi-plus": profile.r_xi_plus,
        "mu-minus": profile.mu_minus,
        "mu-plus": profile.mu_plus,
    }


def _reversal_record(
    spec: SubshiftSpec, profile: LmProfile, depth: int, bounds: ProfileBounds
) -> dict:
    record = {"check": "time-reversal"}
    try:
        mirrored = lm_profile(reversed_spec(spec), depth, bounds)
    except (CharacteristicPairError, OutsideClass) as exc:
        return {**record, "verdict": FAIL, "reason": str(exc)}
    record["verdict"] = PASS if mirrored == profile.swapped() else FAIL
    return record


# Lind-Marcus parameters ####################################################


def params_record(check: str, params: LmParameters, alphabet: Alphabet) -> dict:
    minus, plus = delta_entries(params, alphabet)
    return {
        "check": check,
        "I": params.i,
        "J-minus": params.j_minus,
        "J-plus": params.j_plus,
        "delta-minus": minus,
        "delta-plus": plus,
    }


def check_record(spec: SubshiftSpec, report: LmCheckReport) -> dict:
    return {
        "check": "lm-check",
        "verdict": PASS if report.passed else FAIL,
        "I": report.i,
        "maxlen": report.maxlen,
        "depth": report.depth,
        **report.conditions,
        "missing": _render(spec, report.missing),
        "extra": _render(spec, report.extra),
        "reason": report.reason,
    }


def _lm_records(
    spec: SubshiftSpec, maxlen: int, depth: int, bounds: ProfileBounds
) -> list[dict]:
    try:
        found = lm_type_search(spec, maxlen=maxlen, depth=depth, bounds=bounds)
    except LmTypeRefusal as exc:
        return [
            {"check": "lm-type", "verdict": FAIL, "n": n, "reason": reason}
            for n, reason in exc.failures.items()
        ]
    system = found.spec
    record = params_record("lm-type", found.params, system.alphabet)
    records = [{**record, "verdict": PASS, "n": found.n}]
    records.append(
        check_record(system, lm_check(system, found.params, maxlen, depth, bounds))
    )
    try:
        families = build_b_families(lm_profile(system, depth, bounds), found.params, maxlen)
    except ParameterError as exc:
        records.append({"check": "families", "verdict": FAIL, "reason": str(exc)})
        return records
    for (first, second), shared in family_overlaps(families).items():
        records.append(
            {
                "check": "overlap",
                "families": [first, second],
                "count": len(shared),
                "witnesses": _render(system, sorted(shared, key=word_order)[:WITNESS_LIMIT]),
            }
        )
    return records


# One-counter machines ######################################################


def _reset_words(alphabet: Alphabet, n: int) -> Iterator[Word]:
    a, b, c = (alphabet.index(name) for name in "abc")
    for k in range(1, n):
        m = n - 1 - k
        if 1 <= m <= k:
            yield (a,) + (b,) * k + (c,) * m


def _counter_words(alphabet: Alphabet, n: int) -> Iterator[Word]:
    a, b, c = (alphabet.index(name) for name in "abc")
    if n >= 3 and n % 2 == 1:
        k = (n - 1) // 2
        yield (a,) + (b,) * k + (c,) * k


def _agreement_record(kind: str, alphabet: Alphabet, report: AgreementReport) -> dict:
    machine_only = [w for n in sorted(report.differences) for w in report.differences[n][0]]
    reference_only = [w for n in sorted(report.differences) for w in report.differences[n][1]]
    return {
        "check": f"oca:{kind}",
        "verdict": PASS if report.agrees else FAIL,
        "maxlen": report.maxlen,
        "machine-only": [alphabet.render(w) for w in machine_only[:WITNESS_LIMIT]],
        "reference-only": [alphabet.render(w) for w in reference_only[:WITNESS_LIMIT]],
    }


def _oca_records(
    spec: SubshiftSpec, maxlen: int, depth: int, bounds: ProfileBounds
) -> list[dict]:
    records = []
    references: dict[str, Callable[[int], Iterable[Word]]] = {}
    for kind, words in (("reset-code", _reset_words), ("counter-code", _counter_words)):
        references[kind] = functools.partial(words, builtin_oca(kind).alphabet)
    _, found = _suite_subject(spec, "machines for the Lind-Marcus shift")
    if found is not None:
        lm, y = found
        if lm.alphabet == builtin_oca("lm-admissible").alphabet:
            references["lm-admissible"] = lm.language
        if y.alphabet == builtin_oca("b-of-Y").alphabet:
            words = b_words(y, min(maxlen, OCA_LENGTHS["b-of-Y"]), depth)
            references["b-of-Y"] = lambda n: [w for w in words if len(w) == n]
    for kind in OCA_LENGTHS:
        if kind not in references:
            records.append({"check": f"oca:{kind}", "verdict": SKIP})
            continue
        machine = builtin_oca(kind)
        report = oca_agrees(machine, references[kind], min(maxlen, OCA_LENGTHS[kind]))
        records.append(_agreement_record(kind, machine.alphabet, report))
    return records


SUITES: Mapping[str, Callable[..., list[dict]]] = {
    "lemma21": _lemma21_records,
    "lemma22": _lemma22_records,
    "profile": _profile_records,
    "lm": _lm_records,
    "oca": _oca_records,
}


# Pipelines #################################################################


def language_pipeline(spec: SubshiftSpec, n: int, timing: bool = False) -> dict:
    """List the admissible words of length ``n``.

    Parameters
    ----------
    spec : SubshiftSpec
        The subshift to enumerate.
    n : int
        Word length.
    timing : bool
        If True, append a record with the elapsed time.

    Returns
    -------
    report : dict
        A report with one ``language`` record carrying ``length``,
        ``count`` and the rendered ``words``.
    """
    start = time.perf_counter()
    words = spec.language(n)
    records = [
        {
            "check": "language",
            "verdict": PASS,
            "length": n,
            "count": len(words),
            "words": _render(spec, words),
        }
    ]
    if timing:
        records.append(_timing_record(start))
    return _report("language", spec, records)


def verify_pipeline(
    spec: SubshiftSpec,
    suite: str,
    maxlen: int = DEFAULT_MAXLEN,
    depth: int = DEFAULT_DEPTH,
    bounds: ProfileBounds = DEFAULT_BOUNDS,
    timing: bool = False,
) -> dict:
    """Run one verification suite on ``spec``.

    Suites are ``lemma21`` (synchronizing symbols, 𝓑(Y) and Markov code
    reconstruction), ``lemma22`` (strong synchronization), ``profile``
    (bridge, Σ and Ξ sets), ``lm`` (parameter search and the (LM) check)
    and ``oca`` (the bundled one-counter machines against their word
    sets).

    Raises
    ------
    SuiteError
        If ``suite`` is not one of :data:`SUITES`.
    """
    if suite not in SUITES:
        raise SuiteError(f"Unknown suite '{suite}'; choose from {', '.join(SUITES)}")
    start = time.perf_counter()
    _logger.debug(f"Running suite {suite} on {spec}")
    records = SUITES[suite](spec, maxlen, depth, bounds)
    if timing:
        records.append(_timing_record(start))
    return _report("verify", spec, records, suite=suite)


def _transport_record(check: str, report: TransportReport) -> dict:
    return {
        "check": check,
        "verdict": PASS if report.passed else FAIL,
        "maxlen": report.maxlen,
        "failures": [f"{n}:{what}" for n, what in report.failures],
    }


def transfer_pipeline(
    pair: ConjugacyPair,
    target_params: LmParameters,
    maxlen: int = DEFAULT_MAXLEN,
    depth: int = DEFAULT_DEPTH,
    bounds: ProfileBounds = DEFAULT_BOUNDS,
    timing: bool = False,
) -> dict:
    """Check a conjugacy and carry the target's parameters to the source.

    The maps are checked on words up to ``TRANSPORT_MAXLEN``; the
    synchronization hypothesis is checked before the transfer, and the
    transfer is skipped when it fails.
    """
    start = time.perf_counter()
    source, target = pair.source, pair.target
    top = min(maxlen, TRANSPORT_MAXLEN)
    records = [
        _transport_record("round-trip", verify_round_trip(pair, top)),
        _transport_record("membership-transport", membership_transport(pair, top)),
    ]
    hypothesis = one_block_synchro_check(pair, depth)
    records.append(
        {
            "check": "hypothesis",
            "verdict": PASS if hypothesis.passed else FAIL,
            "depth": depth,
            "violators": _names(source, hypothesis.violators),
        }
    )
    if hypothesis.passed:
        try:
            result = transfer_parameters(pair, target_params, depth, maxlen, bounds)
        except (
            TransferError,
            DecompositionError,
            CharacteristicPairError,
            OutsideClass,
        ) as exc:
            records.append({"check": "transfer", "verdict": FAIL, "reason": str(exc)})
        else:
            record = params_record("transfer", result.params, source.alphabet)
            records.append(
                {
                    **record,
                    "verdict": PASS if result.validated else FAIL,
                    "q": result.q,
                    "radius": result.radius,
                    "H-minus": result.h_minus,
                    "H-plus": result.h_plus,
                }
            )
            for prefix, outer, sigma, inner, d in result.decomposition_log:
                records.append(
                    {
                        "check": "decomposition",
                        "prefix": source.alphabet.render(prefix),
                        "outer": target.alphabet.render(outer),
                        "sigma": target.alphabet.name(sigma),
                        "inner": target.alphabet.render(inner),
                        "bridge": target.alphabet.render(d),
                    }
                )
            records.append(check_record(source, result.report))
    else:
        records.append({"check": "transfer", "verdict": SKIP})
    if timing:
        records.append(_timing_record(start))
    return _report("transfer", source, records, target=repr(target))
