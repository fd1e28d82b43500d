"""
One-counter automata

Pushdown automata with a single stack symbol, i.e. a finite control plus a
non-negative counter that can be tested for zero. Transitions are keyed on
``(state, symbol, counter_is_zero)`` and have no ε-moves; a run accepts
when it ends in an accepting state.
"""

import dataclasses
import functools
from collections import defaultdict
from typing import Callable, Iterable, Mapping, Sequence

from .words import Alphabet, Word, word_order

import logging

_logger = logging.getLogger(__name__)

State = str
Key = tuple[State, int, bool]
Move = tuple[State, int]
Config = tuple[State, int]

WITNESS_LIMIT = 10


class MachineError(ValueError):
    """Malformed one-counter automaton."""


@dataclasses.dataclass(frozen=True)
class OneCounterAutomaton:
    alphabet: Alphabet
    states: frozenset[State]
    initial: State
    accepting: frozenset[State]
    transitions: Mapping[Key, frozenset[Move]]
    name: str = ""

    def __post_init__(self):
        if self.initial not in self.states:
            raise MachineError(f"Initial state '{self.initial}' is not a state")
        unknown = set(self.accepting) - set(self.states)
        if unknown:
            raise MachineError(f"Accepting states {sorted(unknown)} are not states")
        for (state, symbol, zero), moves in self.transitions.items():
            if state not in self.states:
                raise MachineError(f"Transition from unknown state '{state}'")
            self.alphabet.check((symbol,))
            for target, delta in moves:
                if target not in self.states:
                    raise MachineError(f"Transition to unknown state '{target}'")
                if delta not in (-1, 0, 1):
                    raise MachineError(f"Counter delta must be -1, 0 or +1, got {delta}")
                if zero and delta == -1:
                    raise MachineError(
                        f"Transition {state} --{self.alphabet.name(symbol)}--> "
                        f"{target} would drive the counter below zero"
                    )

    @property
    def deterministic(self) -> bool:
        return all(len(moves) <= 1 for moves in self.transitions.values())

    def step(self, configs: Iterable[Config], symbol: int) -> frozenset[Config]:
        found = set()
        for state, count in configs:
            for target, delta in self.transitions.get((state, symbol, count == 0), ()):
                assert count + delta >= 0
                found.add((target, count + delta))
        return frozenset(found)

    def accepts_any(self, configs: Iterable[Config]) -> bool:
        return any(state in self.accepting for state, _ in configs)


class MachineBuilder:
    """Collects transitions by symbol name, then builds the automaton.

    ``zero=None`` adds the transition for both counter tests.
    """

    def __init__(self, alphabet: Alphabet, initial: State, name: str = ""):
        self.alphabet = alphabet
        self.initial = initial
        self.name = name
        self.states = {initial}
        self.accepting = set()
        self.transitions = defaultdict(set)

    def add(
        self,
        state: State,
        symbols: str | Sequence[str],
        target: State,
        delta: int = 0,
        zero: bool | None = None,
    ) -> "MachineBuilder":
        if isinstance(symbols, str):
            symbols = [symbols]
        tests = (True, False) if zero is None else (zero,)
        for symbol_name in symbols:
            symbol = self.alphabet.index(symbol_name)
            for test in tests:
                self.transitions[(state, symbol, test)].add((target, delta))
        self.states |= {state, target}
        return self

    def accept(self, *states: State) -> "MachineBuilder":
        self.accepting.update(states)
        self.states.update(states)
        return self

    def build(self) -> OneCounterAutomaton:
        return OneCounterAutomaton(
            alphabet=self.alphabet,
            states=frozenset(self.states),
            initial=self.initial,
            accepting=frozenset(self.accepting),
            transitions={k: frozenset(v) for k, v in self.transitions.items()},
            name=self.name,
        )


def oca_run(machine: OneCounterAutomaton, word: Sequence[int]) -> bool:
    """Whether some run over ``word`` from ``(initial, 0)`` accepts.

    Nondeterminism is handled by breadth-first search over configurations;
    the counter never exceeds ``len(word)``.
    """
    word = machine.alphabet.check(word)
    configs = frozenset({(machine.initial, 0)})
    for symbol in word:
        configs = machine.step(configs, symbol)
        if not configs:
            return False
    return machine.accepts_any(configs)


def oca_language(machine: OneCounterAutomaton, n: int) -> frozenset[Word]:
    """All accepted words of length ``n``; prefixes with no live run are pruned."""
    if n < 0:
        raise ValueError(f"Word length must be non-negative, got {n}")
    found = set()
    stack = [((), frozenset({(machine.initial, 0)}))]
    while stack:
        prefix, configs = stack.pop()
        if len(prefix) == n:
            if machine.accepts_any(configs):
                found.add(prefix)
            continue
        for symbol in machine.alphabet:
            following = machine.step(configs, symbol)
            if following:
                stack.append((prefix + (symbol,), following))
    return frozenset(found)


@dataclasses.dataclass
class AgreementReport:
    """Bounded comparison of a machine against a reference word set.

    ``differences`` maps a length to ``(machine_only, reference_only)``
    witness tuples, each cut at ``WITNESS_LIMIT``; ``counts`` keeps the
    full sizes.
    """

    maxlen: int
    differences: dict[int, tuple[tuple[Word, ...], tuple[Word, ...]]]
    counts: dict[int, tuple[int, int]]

    @property
    def agrees(self) -> bool:
        return not self.differences


def oca_agrees(
    machine: OneCounterAutomaton,
    reference: Callable[[int], Iterable[Word]],
    maxlen: int,
) -> AgreementReport:
    """Compare ``oca_language(machine, n)`` with ``reference(n)`` for ``n <= maxlen``."""
    differences = {}
    counts = {}
    for n in range(maxlen + 1):
        accepted = oca_language(machine, n)
        expected = frozenset(tuple(w) for w in reference(n))
        machine_only = sorted(accepted - expected, key=word_order)
        reference_only = sorted(expected - accepted, key=word_order)
        if machine_only or reference_only:
            counts[n] = (len(machine_only), len(reference_only))
            differences[n] = (
                tuple(machine_only[:WITNESS_LIMIT]),
                tuple(reference_only[:WITNESS_LIMIT]),
            )
            _logger.debug(f"Length {n}: {counts[n]} words differ")
    return AgreementReport(maxlen=maxlen, differences=differences, counts=counts)


def _reset_code() -> OneCounterAutomaton:
    abc = Alphabet.from_names("abc")
    return (
        MachineBuilder(abc, "s0", name="reset-code")
        .add("s0", "a", "s1")
        .add("s1", "b", "s2", +1)
        .add("s2", "b", "s2", +1)
        .add("s2", "c", "s3", -1, zero=False)
        .add("s3", "c", "s3", -1, zero=False)
        .accept("s3")
        .build()
    )


def _counter_code() -> OneCounterAutomaton:
    abc = Alphabet.from_names("abc")
    return (
        MachineBuilder(abc, "s0", name="counter-code")
        .add("s0", "a", "s1")
        .add("s1", "b", "s2")
        .add("s2", "b", "s2", +1)
        .add("s2", "c", "s4", zero=True)
        .add("s3", "c", "s4", zero=True)
        .add("s2", "c", "s3", -1, zero=False)
        .add("s3", "c", "s3", -1, zero=False)
        .accept("s4")
        .build()
    )


def _lm_admissible() -> OneCounterAutomaton:
    # cnt_* commits to the current a-bridge being closed by another a-type
    # symbol; un_* commits to it being broken by "cb" or the end of the word
    abc = Alphabet.from_names("abc")
    return (
        MachineBuilder(abc, "free", name="lm-admissible")
        .add("free", ["b", "c"], "free")
        .add("free", "a", "cnt_b")
        .add("free", "a", "un_b")
        .add("cnt_b", "b", "cnt_b", +1)
        .add("cnt_b", "c", "cnt_c", -1, zero=False)
        .add("cnt_b", "a", "cnt_b", zero=True)
        .add("cnt_b", "a", "un_b", zero=True)
        .add("cnt_c", "c", "cnt_c", -1, zero=False)
        .add("cnt_c", "a", "cnt_b", zero=True)
        .add("cnt_c", "a", "un_b", zero=True)
        .add("cnt_c", "b", "free", zero=True)
        .add("un_b", "b", "un_b")
        .add("un_b", "c", "un_c")
        .add("un_c", "c", "un_c")
        .add("un_c", "b", "free")
        .accept("free", "cnt_b", "cnt_c", "un_b", "un_c")
        .build()
    )


def _b_of_y() -> OneCounterAutomaton:
    # counter holds k - l while reading (ab)(bb)^(k-1)(bc)(cc)^(l-1)
    y = Alphabet.full_blocks(Alphabet.from_names("abc"), 2)
    return (
        MachineBuilder(y, "start", name="b-of-Y")
        .add("start", ["(aa)", "(ba)", "(ca)"], "A1")
        .add("A1", ["(aa)", "(ab)", "(ac)"], "ACC")
        .add("start", "(cb)", "CB1")
        .add("CB1", "(ba)", "ACC")
        .add("CB1", "(bb)", "CBb")
        .add("CBb", "(bb)", "CBb")
        .add("CBb", "(ba)", "ACC")
        .add("CB1", "(bc)", "Cc")
        .add("CBb", "(bc)", "Cc")
        .add("Cc", "(cc)", "Cc")
        .add("Cc", ["(ca)", "(cb)"], "ACC")
        .add("start", "(ac)", "AC1")
        .add("AC1", "(cb)", "ACC")
        .add("AC1", "(cc)", "ACc")
        .add("ACc", "(cc)", "ACc")
        .add("ACc", "(cb)", "ACC")
        .add("start", "(ab)", "AB1")
        .add("AB1", "(bb)", "ABb", +1)
        .add("ABb", "(bb)", "ABb", +1)
        .add("AB1", "(bc)", "ABc")
        .add("ABb", "(bc)", "ABc")
        .add("ABc", "(cc)", "ABc", -1, zero=False)
        .add("ABc", "(cc)", "ABover", zero=True)
        .add("ABc", "(ca)", "ACC", zero=True)
        .add("ABc", "(cb)", "ACC")
        .add("ABover", "(cc)", "ABover")
        .add("ABover", "(cb)", "ACC")
        .accept("ACC")
        .build()
    )


BUILTIN_MACHINES = {
    "reset-code": _reset_code,
    "counter-code": _counter_code,
    "lm-admissible": _lm_admissible,
    "b-of-Y": _b_of_y,
}


@functools.cache
def builtin_oca(kind: str) -> OneCounterAutomaton:
    """One of the bundled machines, by name.

    ``reset-code`` accepts ``a b^k c^l`` with ``1 <= l <= k``;
    ``counter-code`` accepts ``a b^k c^k`` with ``k >= 1``;
    ``lm-admissible`` accepts the Lind-Marcus language;
    ``b-of-Y`` accepts the words of the 2-block Lind-Marcus system that
    begin and end with a synchronizing symbol and have no synchronizing
    symbol in between.
    """
    try:
        factory = BUILTIN_MACHINES[kind]
    except KeyError:
        raise MachineError(
            f"Unknown machine '{kind}'; choose from {', '.join(BUILTIN_MACHINES)}"
        ) from None
    return factory()
