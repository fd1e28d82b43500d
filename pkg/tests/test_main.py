import pytest

from lmshift.main import *
from lmshift.conjugacy import BlockMap, ConjugacyPair, identity_conjugacy, nblock_conjugacy
from lmshift.lmstructure import LmParameters
from lmshift.shiftspaces import (
    FiniteType,
    golden_mean,
    lind_marcus,
    naive_lind_marcus_scan,
    nblock_system,
)
from lmshift.utils.periodic import UltimatelyPeriodicSet
from lmshift.words import Alphabet, enumerate_words

from exhaustive import exhaustive

ZERO = UltimatelyPeriodicSet.finite({0})


class DummySpec:
    """
    A dummy subshift with a fixed list of words. Only what the language
    pipeline touches is implemented.
    """

    def __init__(self, alphabet, words):
        self.alphabet = alphabet
        self._words = words

    def language(self, n):
        return tuple(w for w in self._words if len(w) == n)

    def __repr__(self):
        return "DummySpec"


@pytest.fixture(scope="module")
def lm():
    return lind_marcus()


@pytest.fixture(scope="module")
def y(lm):
    return nblock_system(lm, 2)


@pytest.fixture
def y_params(y):
    w = y.alphabet.parse
    return LmParameters(3, 0, 0, {(w("(ab)")[0], ()): ZERO}, {((), w("(ca)")[0]): ZERO})


def by_check(report):
    return {record["check"]: record for record in report["records"]}


def rendered(spec, words):
    return {spec.alphabet.render(w) for w in words}


class TestLanguage:
    def test_dummy(self):
        spec = DummySpec(Alphabet.from_names("ab"), [(0, 1), (1, 0), (0,)])
        result = language_pipeline(spec, 2)
        assert result["command"] == "language"
        assert result["subject"] == "DummySpec"
        assert result["verdict"] == "pass"
        (record,) = result["records"]
        assert record["count"] == 2
        assert record["words"] == ["ab", "ba"]

    def test_lind_marcus(self, lm):
        record = language_pipeline(lm, 1)["records"][0]
        assert record["words"] == ["a", "b", "c"]

    def test_lind_marcus_against_naive_scan(self, lm):
        expected = sum(
            1
            for w in enumerate_words(lm.alphabet, 6)
            if naive_lind_marcus_scan(w, lm.a_symbols, lm.b, lm.c) is None
        )
        assert language_pipeline(lm, 6)["records"][0]["count"] == expected

    def test_golden_mean(self):
        record = language_pipeline(golden_mean(), 3)["records"][0]
        assert record["count"] == 5
        assert "11" not in "".join(record["words"])

    def test_timing(self, lm):
        result = language_pipeline(lm, 2, timing=True)
        timing = result["records"][-1]
        assert timing["check"] == "timing"
        assert timing["seconds"] >= 0
        assert "verdict" not in timing


class TestPrintedFamilies:
    def test_counter_family(self, lm, y):
        families = printed_lemma21_words(lm, 6)
        assert len(families) == 6
        assert rendered(y, families["a b^k c^k a, k>=0"]) == {"(aa)", "(ab)(bc)(ca)"}

    def test_zero_exponents(self, lm, y):
        families = printed_lemma21_words(lm, 4)
        assert rendered(y, families["c b^k a, k>=0"]) == {
            "(ca)",
            "(cb)(ba)",
            "(cb)(bb)(ba)",
        }
        assert rendered(y, families["a c^l b, l>=0"]) == {
            "(ab)",
            "(ac)(cb)",
            "(ac)(cc)(cb)",
        }

    def test_synchro_symbols(self, lm, y):
        assert {y.alphabet.name(s) for s in printed_synchro_symbols(lm)} == {
            "(aa)",
            "(ab)",
            "(ac)",
            "(ba)",
            "(ca)",
            "(cb)",
        }


class TestReconcile:
    @pytest.fixture(scope="class")
    def classes(self, lm, y):
        return reconcile_lemma21(lm, y, 10, 6)

    def test_nothing_unexplained(self, classes):
        assert tuple(classes) == RECONCILIATION_CLASSES
        assert classes["unexplained"] == ()

    @pytest.mark.parametrize(
        "name, word",
        [
            ("adjacent-synchronizing", "(aa)(ab)"),
            ("adjacent-synchronizing", "(ba)(ac)"),
            ("duplicated-family", "(ab)(bc)(cb)"),
            ("duplicated-family", "(ab)(bb)(bc)(cc)(cc)(cb)"),
            ("degenerate-member", "(aa)"),
            ("degenerate-member", "(cb)"),
            ("zero-exponent-boundary", "(cc)(cb)"),
            ("zero-exponent-boundary", "(cb)(bb)"),
        ],
    )
    def test_classes(self, y, classes, name, word):
        assert y.alphabet.parse(word) in classes[name]

    def test_adjacent_words_are_short(self, classes):
        assert all(len(w) == 2 for w in classes["adjacent-synchronizing"])

    def test_printed_words_that_agree_are_not_listed(self, y, classes):
        listed = {w for words in classes.values() for w in words}
        assert y.alphabet.parse("(ab)(bb)(bc)(cc)(ca)") not in listed
        assert y.alphabet.parse("(cb)(ba)") not in listed


class TestLemma21Suite:
    def test_lind_marcus(self, lm):
        result = verify_pipeline(lm, "lemma21", maxlen=10, depth=6)
        assert result["suite"] == "lemma21"
        assert result["verdict"] == "pass"
        records = by_check(result)
        assert records["synchro-symbols"]["computed"] == records["synchro-symbols"]["printed"]
        assert records["reconcile:unexplained"]["count"] == 0
        assert records["reconcile:adjacent-synchronizing"]["count"] > 0
        assert records["synchro-free-words"]["verdict"] == "pass"
        assert records["markov-code:minus"]["maxlen"] == 5
        assert records["markov-code:plus"]["first-mismatch"] is None

    def test_multiple_a_symbols_skip_printed_families(self):
        with pytest.warns(UserWarning, match="a-type symbols"):
            result = verify_pipeline(lind_marcus(2), "lemma21", maxlen=6, depth=4)
        records = by_check(result)
        assert records["synchro-symbols"]["verdict"] == "skip"
        assert "reconcile:unexplained" not in records

    def test_counter_offset_skips_printed_families(self):
        with pytest.warns(UserWarning, match="counter offset 1"):
            result = verify_pipeline(lind_marcus(offset=1), "lemma21", maxlen=6, depth=4)
        assert by_check(result)["synchro-symbols"]["verdict"] == "skip"


class TestLemma22Suite:
    def test_y(self, y):
        result = verify_pipeline(y, "lemma22", maxlen=12, depth=6)
        (record,) = result["records"]
        assert record["verdict"] == "pass"
        assert record["q"] == 0

    def test_lind_marcus_runs_on_y(self, lm):
        result = verify_pipeline(lm, "lemma22", maxlen=8, depth=6)
        assert result["records"][0]["q"] == 0

    def test_no_synchronizing_symbols(self):
        ab = Alphabet.from_names("ab")
        spec = FiniteType(ab, [ab.parse("aba"), ab.parse("bab")])
        result = verify_pipeline(spec, "lemma22", maxlen=4, depth=3)
        (record,) = result["records"]
        assert result["verdict"] == "fail"
        assert record["q"] is None
        assert record["witnesses"]


class TestProfileSuite:
    @pytest.fixture(scope="class")
    def records(self, y):
        result = verify_pipeline(y, "profile", maxlen=16, depth=6)
        assert result["verdict"] == "pass"
        return by_check(result)

    @pytest.mark.parametrize(
        "item, kind",
        [
            ("sigma-minus", "match"),
            ("sigma-minus-plus", "own-side-omitted"),
            ("sigma-plus", "match"),
            ("sigma-plus-minus", "own-side-omitted"),
            ("xi-minus", "match"),
            ("xi-plus", "match"),
            ("xi-minus-plus", "family-variant"),
            ("xi-plus-minus", "family-variant"),
            ("d-minus:(ab)", "match"),
            ("d-minus-plus:(ac)", "match"),
            ("d-plus-minus:(ba)", "match"),
        ],
    )
    def test_classes(self, records, item, kind):
        assert records[f"profile:{item}"]["class"] == kind

    def test_sigma_sets(self, records):
        assert records["profile:sigma-minus"]["computed"] == ["(ab)", "(cb)"]
        assert records["profile:sigma-minus-plus"]["printed"] == ["(ac)"]
        assert records["profile:sigma-plus"]["computed"] == ["(ca)", "(cb)"]
        assert records["profile:sigma-plus-minus"]["printed"] == ["(ba)"]

    def test_constants(self, records):
        constants = records["constants"]
        assert (constants["alpha-minus"], constants["alpha-plus"]) == ("(bb)", "(cc)")
        assert constants["c"] == "(bc)"
        assert constants["mu-minus"] == constants["mu-plus"] == 0

    def test_time_reversal(self, records):
        assert records["time-reversal"]["verdict"] == "pass"

    def test_golden_mean(self):
        result = verify_pipeline(golden_mean(), "profile", maxlen=8, depth=4)
        (record,) = result["records"]
        assert result["verdict"] == "fail"
        assert "No characteristic pair" in record["reason"]


class TestClassifyProfileItem:
    def test_match(self):
        assert classify_profile_item("xi-minus", {(1,)}, {(1,)}) == "match"

    def test_own_side_omitted(self):
        printed = frozenset({(2,)})
        computed = frozenset({(1,), (2,)})
        kind = classify_profile_item("sigma-minus-plus", printed, computed, {(1,)})
        assert kind == "own-side-omitted"
        assert classify_profile_item("sigma-minus", printed, computed) == "unexplained"

    def test_family_variant(self):
        printed = frozenset({(0,), (1, 5, 6), (1, 6)})
        computed = frozenset({(2, 5, 6), (2, 6)})
        assert classify_profile_item("xi-minus-plus", printed, computed) == "family-variant"
        assert classify_profile_item("xi-plus-minus", printed, computed) == "unexplained"


class TestLmSuite:
    def test_y(self, y):
        result = verify_pipeline(y, "lm", maxlen=14, depth=6)
        assert result["verdict"] == "pass"
        records = by_check(result)
        lm_type = records["lm-type"]
        assert (lm_type["n"], lm_type["I"]) == (1, 3)
        assert lm_type["delta-minus"] == ["(ab) | ε -> {0}"]
        assert lm_type["delta-plus"] == ["ε | (ca) -> {0}"]
        assert records["lm-check"]["missing"] == records["lm-check"]["extra"] == []
        overlaps = [r for r in result["records"] if r["check"] == "overlap"]
        assert ["xi|minus", "minus|xi"] in [r["families"] for r in overlaps]

    def test_golden_mean(self):
        result = verify_pipeline(golden_mean(), "lm", maxlen=10, depth=4)
        assert result["verdict"] == "fail"
        assert [r["n"] for r in result["records"]] == [1, 2, 3]


class TestOcaSuite:
    def test_lind_marcus(self, lm):
        result = verify_pipeline(lm, "oca", maxlen=8, depth=6)
        assert result["verdict"] == "pass"
        records = by_check(result)
        assert set(records) == {f"oca:{kind}" for kind in OCA_LENGTHS}
        assert records["oca:reset-code"]["maxlen"] == 8
        assert records["oca:b-of-Y"]["machine-only"] == []

    def test_golden_mean_skips_lind_marcus_machines(self):
        records = by_check(verify_pipeline(golden_mean(), "oca", maxlen=6, depth=4))
        assert records["oca:lm-admissible"]["verdict"] == "skip"
        assert records["oca:b-of-Y"]["verdict"] == "skip"
        assert records["oca:counter-code"]["verdict"] == "pass"


def test_unknown_suite(y):
    with pytest.raises(SuiteError, match="Unknown suite"):
        verify_pipeline(y, "lemma23")


class TestTransfer:
    def test_identity(self, y, y_params):
        result = transfer_pipeline(identity_conjugacy(y), y_params, maxlen=12)
        assert result["verdict"] == "pass"
        records = by_check(result)
        transfer = records["transfer"]
        assert (transfer["H-minus"], transfer["H-plus"]) == (0, 0)
        assert (transfer["J-minus"], transfer["J-plus"]) == (0, 0)
        assert transfer["I"] == 3
        assert records["round-trip"]["failures"] == []
        assert records["lm-check"]["verdict"] == "pass"

    def test_scrambled_map(self, y, y_params):
        rule = {s: s for s in y.alphabet}
        rule[y.alphabet.index("(bb)")] = y.alphabet.index("(ab)")
        scrambled = BlockMap.one_block(y.alphabet, y.alphabet, rule)
        pair = ConjugacyPair(y, y, scrambled, scrambled)
        result = transfer_pipeline(pair, y_params, maxlen=8, depth=6)
        records = by_check(result)
        assert result["verdict"] == "fail"
        assert records["hypothesis"]["violators"] == ["(bb)"]
        assert records["transfer"]["verdict"] == "skip"
        assert records["membership-transport"]["verdict"] == "fail"


@exhaustive
def test_three_blocks_onto_y(lm, y_params):
    result = transfer_pipeline(nblock_conjugacy(lm, 3, 2), y_params)
    assert result["verdict"] == "pass"
    records = by_check(result)
    assert (records["transfer"]["H-minus"], records["transfer"]["I"]) == (1, 7)
    assert records["transfer"]["delta-plus"] == ["ε | (cca) -> {1}"]
    assert any(r["check"] == "decomposition" for r in result["records"])
