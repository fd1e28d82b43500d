import dataclasses

import pytest

from lmshift.lmstructure import *
from lmshift.lmstructure import _splice_threshold
from lmshift.shiftspaces import (
    full_shift,
    golden_mean,
    lind_marcus,
    nblock_system,
    reversed_spec,
)
from lmshift.synchronization import b_words, is_synchronizing, synchro_symbols
from lmshift.utils.periodic import UltimatelyPeriodicSet

from exhaustive import exhaustive

ZERO = UltimatelyPeriodicSet.finite({0})


@pytest.fixture(scope="module")
def y():
    return nblock_system(lind_marcus(), 2)


@pytest.fixture(scope="module")
def profile(y):
    return lm_profile(y)


@pytest.fixture
def params(y):
    w = y.alphabet.parse
    return LmParameters(
        3, 0, 0, {(w("(ab)")[0], ()): ZERO}, {((), w("(ca)")[0]): ZERO}
    )


def names(spec, symbols):
    return {spec.alphabet.name(s) for s in symbols}


def runs(y, left, middle, j):
    return y.alphabet.parse(left * j + middle)


class TestCharacteristicPair:
    def test_y(self, y, profile):
        pair = profile.pair
        assert y.alphabet.name(pair.alpha_minus) == "(bb)"
        assert y.alphabet.name(pair.alpha_plus) == "(cc)"
        assert y.alphabet.render(pair.c_word) == "(bc)"
        assert (pair.k_minus, pair.k_plus) == (1, 1)

    def test_witnesses(self, y, profile):
        pair = profile.pair
        assert y.admits(pair.orbit)
        assert not is_synchronizing(y, pair.orbit, pair.depth)
        assert y.admits(pair.connector)
        assert is_synchronizing(y, pair.connector, pair.depth)

    def test_full_shift(self):
        with pytest.raises(CharacteristicPairError) as info:
            characteristic_pair(full_shift("ab"), 6)
        assert info.value.reason == "no-pair"

    def test_golden_mean(self):
        with pytest.raises(CharacteristicPairError, match="No characteristic pair"):
            characteristic_pair(golden_mean(), 4)

    def test_lind_marcus(self):
        with pytest.raises(CharacteristicPairError) as info:
            characteristic_pair(lind_marcus(), 4)
        assert info.value.reason == "not-strongly-synchronizing"

    def test_swapped_twice(self, profile):
        assert profile.pair.swapped().swapped() == profile.pair


class TestProfile:
    def test_sigma_sets(self, y, profile):
        assert names(y, profile.sigma_minus) == {"(ab)", "(cb)"}
        assert names(y, profile.sigma_minus_plus) == {"(ab)", "(ac)", "(cb)"}
        assert names(y, profile.sigma_plus) == {"(ca)", "(cb)"}
        assert names(y, profile.sigma_plus_minus) == {"(ba)", "(ca)", "(cb)"}

    def test_cross_sets_beyond_own_side(self, y, profile):
        # the symbols not already on their own side
        assert names(y, profile.sigma_minus_plus - profile.sigma_minus) == {"(ac)"}
        assert names(y, profile.sigma_plus_minus - profile.sigma_plus) == {"(ba)"}

    @pytest.mark.parametrize(
        "attribute, symbol",
        [
            ("d_minus", "(ab)"),
            ("d_minus", "(cb)"),
            ("d_minus_plus", "(ac)"),
            ("d_plus", "(ca)"),
            ("d_plus", "(cb)"),
            ("d_plus_minus", "(ba)"),
        ],
    )
    def test_empty_word_bridges(self, y, profile, attribute, symbol):
        bridges = getattr(profile, attribute)
        assert bridges[y.alphabet.index(symbol)] == {()}

    def test_cross_bridges(self, y, profile):
        ab = y.alphabet.index("(ab)")
        ca = y.alphabet.index("(ca)")
        assert profile.d_minus_plus[ab] == {runs(y, "(bb)", "(bc)", j) for j in range(8)}
        expected = {y.alphabet.parse("(bc)" + "(cc)" * j) for j in range(8)}
        assert profile.d_plus_minus[ca] == expected

    def test_xi_sets(self, y, profile):
        cb = y.alphabet.index("(cb)")
        assert set(profile.xi_minus) == {(cb, ())}
        assert set(profile.xi_plus) == {((), cb)}
        assert set(profile.xi_minus_plus) == {
            (cb, runs(y, "(bb)", "(bc)", j)) for j in range(8)
        }
        assert set(profile.xi_plus_minus) == {
            (y.alphabet.parse("(bc)" + "(cc)" * j), cb) for j in range(8)
        }

    def test_constants(self, profile):
        assert (profile.k_minus, profile.k_minus_plus) == (1, 1)
        assert (profile.k_plus, profile.k_plus_minus) == (1, 1)
        assert (profile.r_minus, profile.r_plus) == (1, 1)
        assert (profile.r_xi_minus, profile.r_xi_plus) == (1, 1)
        assert (profile.mu_minus, profile.mu_plus) == (0, 0)

    def test_counter_pairs(self, y, profile):
        assert profile.counter_minus == [(y.alphabet.index("(ab)"), ())]
        assert profile.counter_plus == [((), y.alphabet.index("(ca)"))]

    @pytest.mark.parametrize("k", range(2, 7))
    def test_long_minus_runs_reach_xi(self, y, profile, k):
        # σ₋ d⁻ α₋^k c lies in Ξ₋⁺ once k passes K₋
        assert (y.alphabet.index("(cb)"), runs(y, "(bb)", "(bc)", k)) in profile.xi_minus_plus

    def test_time_symmetry(self, y, profile):
        mirrored = lm_profile(reversed_spec(y))
        assert mirrored == profile.swapped()
        assert profile.swapped().swapped() == profile

    def test_small_bounds_are_refused(self):
        with pytest.raises(ValueError, match="too small"):
            ProfileBounds(d=2)

    def test_minus_bridges_must_saturate(self, y):
        # entering the c-run from (ab) takes (bb)^j (bc) for every j
        pair = characteristic_pair(y)
        swapped = dataclasses.replace(
            pair, alpha_minus=pair.alpha_plus, alpha_plus=pair.alpha_minus
        )
        with pytest.raises(OutsideClass, match="Minus bridges do not saturate") as info:
            compute_profile(y, swapped)
        assert len(info.value.witness) > DEFAULT_BOUNDS.d - 1
        assert y.admits(info.value.witness)

    def test_plus_bridges_must_saturate(self, y):
        pair = characteristic_pair(y)
        looped = dataclasses.replace(pair, alpha_plus=pair.alpha_minus)
        with pytest.raises(OutsideClass, match="Plus bridges do not saturate") as info:
            compute_profile(y, looped)
        assert len(info.value.witness) > DEFAULT_BOUNDS.d - 1
        assert info.value.witness[-1] in synchro_symbols(y)

    def test_splice_threshold_is_positive(self, y, profile):
        assert _splice_threshold(y, profile.alpha_minus, DEFAULT_BOUNDS, lambda run: True) == 1
        assert _splice_threshold(y, profile.alpha_minus, DEFAULT_BOUNDS, lambda run: False) is None

    def test_profile_cache_is_bounded(self):
        assert lm_profile.cache_info().maxsize == PROFILE_CACHE


class TestFamilies:
    @pytest.fixture
    def families(self, profile, params):
        return build_b_families(profile, params, 16)

    def test_names(self, families):
        assert tuple(families) == FAMILY_NAMES

    def test_counter(self, y, families):
        expected = {
            y.alphabet.parse("(ab)" + "(bb)" * k + "(bc)" + "(cc)" * k + "(ca)")
            for k in range(1, 7)
        }
        assert families["counter"] == expected

    def test_two_run_member(self, y, families):
        word = y.alphabet.parse("(cb)(bb)(bb)(bb)(bc)(cc)(cc)(ca)")
        assert word in families["xi|minus|plus"]

    def test_members_are_b_words(self, y, families):
        words = set(b_words(y, 16, 6))
        for family in families.values():
            assert family <= words

    def test_overlaps(self, y, families):
        overlaps = family_overlaps(families)
        assert set(overlaps) == {
            ("xi|minus|plus", "minus|plus|xi"),
            ("xi|minus", "minus|xi"),
            ("xi|plus", "plus|xi"),
        }
        assert overlaps[("xi|minus", "minus|xi")] == {
            y.alphabet.parse("(cb)" + "(bb)" * k + "(bc)(cb)") for k in range(1, 14)
        }

    def test_missing_pairs(self, profile, params):
        bad = dataclasses.replace(params, delta_minus={})
        with pytest.raises(ParameterError, match="Δ⁻"):
            build_b_families(profile, bad, 10)


class TestLmCheck:
    def test_y(self, y, params):
        report = lm_check(y, params, 16, 6)
        assert report.passed, report.reason
        assert report.missing == report.extra == ()
        assert all(report.conditions.values())

    def test_i_too_small(self, y, params):
        report = lm_check(y, params.with_i(1), 16, 6)
        assert not report.passed
        assert y.alphabet.parse("(aa)(ab)") in report.missing
        assert all(len(w) <= 3 for w in report.missing)
        assert report.extra == ()

    def test_wrong_offset(self, y, params):
        shifted = dataclasses.replace(params, j_minus=1)
        report = lm_check(y, shifted, 16, 6)
        assert not report.passed
        assert y.alphabet.parse("(ab)(bb)(bc)(cc)(ca)") in report.missing
        assert y.alphabet.parse("(ab)(bb)(bc)(cc)(cc)(ca)") in report.extra

    def test_full_shift(self, params):
        report = lm_check(full_shift("ab"), params, 8, 4)
        assert not report.passed
        assert "characteristic pair" in report.reason


class TestInferParameters:
    def test_y(self, y):
        params = infer_parameters(y, 16, 6)
        assert params.i == 3
        assert (params.j_minus, params.j_plus) == (0, 0)
        assert set(params.delta_minus.values()) == {ZERO}
        assert set(params.delta_plus.values()) == {ZERO}
        assert lm_check(y, params, 16, 6).passed

    @pytest.mark.parametrize("spec", [golden_mean(), lind_marcus()])
    def test_refusal(self, spec):
        with pytest.raises(NoParameters, match="No Lind-Marcus structure"):
            infer_parameters(spec, 10, 4)

    @pytest.mark.parametrize("offset, j", [(1, (1, 0)), (-1, (0, 1))])
    def test_counter_offset(self, offset, j):
        # b^k c^(k + offset) between a's moves the balance into J
        spec = nblock_system(lind_marcus(offset=offset), 2)
        params = infer_parameters(spec, 16, 6)
        assert (params.j_minus, params.j_plus) == j
        assert set(params.delta_minus.values()) == {ZERO}
        assert set(params.delta_plus.values()) == {ZERO}
        # the one unbalanced bridge too short for the counter family
        assert params.i == 4
        assert lm_check(spec, params, 16, 6).passed

    def test_negative_parameters(self):
        with pytest.raises(ParameterError):
            LmParameters(-1, 0, 0, {}, {})


@exhaustive
def test_n_symbol_family():
    spec = nblock_system(lind_marcus(2), 2)
    params = infer_parameters(spec, 14, 6)
    assert params.i == 3
    assert len(params.delta_minus) == len(params.delta_plus) == 2
    assert set(params.delta_minus.values()) == {ZERO}
    assert set(params.delta_plus.values()) == {ZERO}


class TestCandidateParameters:
    def first(self, laws, window=(-6, 6), lefts=("l0",)):
        observed = {key: frozenset(values) for key, values in laws.items()}
        windows = {key: window for key in laws}
        return next(candidate_parameters(observed, windows, list(lefts), ["r0"], 12))

    def test_balanced(self):
        params = self.first({("l0", "r0"): {0}})
        assert (params.j_minus, params.j_plus) == (0, 0)
        assert params.delta_minus == {"l0": ZERO}
        assert params.delta_plus == {"r0": ZERO}

    def test_plus_offset(self):
        params = self.first({("l0", "r0"): {1}})
        assert (params.j_minus, params.j_plus) == (0, 1)
        assert params.delta_plus == {"r0": ZERO}

    def test_minus_offset(self):
        params = self.first({("l0", "r0"): {-2}})
        assert (params.j_minus, params.j_plus) == (2, 0)
        assert params.delta_plus == {"r0": ZERO}

    def test_several_minus_offsets(self):
        laws = {("l0", "r0"): {0}, ("l1", "r0"): {-1, -3}}
        params = self.first(laws, lefts=("l0", "l1"))
        assert (params.j_minus, params.j_plus) == (0, 0)
        assert params.delta_minus["l1"] == UltimatelyPeriodicSet.finite({1, 3})

    def test_periodic_plus(self):
        params = self.first({("l0", "r0"): set(range(0, 21, 2))}, window=(-10, 20))
        upper = params.delta_plus["r0"]
        assert upper.period == 2
        assert 40 in upper
        assert 41 not in upper

    def test_periodic_with_offset(self):
        params = self.first({("l0", "r0"): set(range(-3, 19, 3))}, window=(-10, 18))
        assert (params.j_minus, params.j_plus) == (3, 0)
        upper = params.delta_plus["r0"]
        assert upper.period == 3
        assert upper.expand(9) == [0, 3, 6, 9]

    def test_offset_beyond_range(self):
        observed = {("l0", "r0"): frozenset({-MAX_J - 2})}
        windows = {("l0", "r0"): (-10, 10)}
        assert list(candidate_parameters(observed, windows, ["l0"], ["r0"], 12)) == []

    def test_nothing_observed(self):
        with pytest.raises(NoParameters, match="No admissible counter words"):
            self.first({("l0", "r0"): set()})

    def test_fit_rejects_negative_plus_sets(self):
        observed = {("l0", "r0"): frozenset({-1})}
        windows = {("l0", "r0"): (-6, 6)}
        assert fit_counter_sets(observed, windows, ["l0"], ["r0"], 0, 0, 12) is None
