"""
Definition files

Plain-text formats for subshift definitions, one-counter machines, block
maps and Lind-Marcus parameters. Every format is a sequence of ``key:
value`` lines at column 0; a key may own a body of indented lines below
it. Blank lines and lines starting with ``#`` are skipped. Parse errors
are prefixed with the line number they refer to.

Shift definitions::

    alphabet: a b c
    kind: lind-marcus
    a-symbols: a
    b: b
    c: c

Kinds and their stanzas:

================  =====================================================
``finite-type``   ``forbidden:`` body of words
``markov``        ``matrix:`` body of 0/1 rows
``sofic``         ``edges:`` body of ``source target label`` lines
``coded``         ``code:`` body of words, or ``code: <machine ref>``;
                  optional ``bound:``
``markov-coded``  ``code:``, ``gamma:``, ``s:`` and ``t:`` bodies of
                  ``word -> index``, ``A:`` matrix; optional ``bound:``
``lind-marcus``   ``a-symbols:``, ``b:``, ``c:``; optional ``offset:``
``nblock``        ``n:`` and ``inner:``, either a reference or an
                  indented definition; no ``alphabet:`` line
================  =====================================================

References are file paths or ``builtin:<name>``. Builtin shifts are the
``*.shift`` files shipped in :mod:`lmshift.data`; builtin machines are
those of :func:`lmshift.onecounter.builtin_oca`.
"""

import dataclasses
import importlib.resources
import pathlib
import re
from typing import Callable, Hashable, Mapping

import networkx as nx
import numpy as np

from .conjugacy import BlockMap
from .lmstructure import LmParameters, ParameterError
from .onecounter import BUILTIN_MACHINES, MachineError, OneCounterAutomaton, builtin_oca
from .shiftspaces import (
    CodeSpec,
    Coded,
    FiniteType,
    LindMarcus,
    MarkovCode,
    MarkovCoded,
    MarkovShift,
    NBlock,
    SoficGraph,
    SpecError,
    SubshiftSpec,
)
from .utils.periodic import UltimatelyPeriodicSet
from .words import Alphabet, SymbolError, Word, word_order

import logging

_logger = logging.getLogger(__name__)

BUILTIN_PREFIX = "builtin:"
INDENT = "  "

_KEY_RE = re.compile(r"^(?P<key>[A-Za-z][\w-]*):\s*(?P<value>.*?)\s*$")
_TRANSITION_RE = re.compile(
    r"^(?P<state>\S+)\s+(?P<symbol>\S+)\s+(?P<test>zero|pos)\s*->\s*"
    r"(?P<target>\S+)\s+(?P<delta>[+-]?\d+)$"
)


class DefinitionError(ValueError):
    """Malformed definition text; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


Line = tuple[int, str]


@dataclasses.dataclass
class Field:
    line: int
    value: str
    body: list[Line] = dataclasses.field(default_factory=list)

    def body_lines(self) -> list[Line]:
        """Body lines with one indentation level removed."""
        return [(n, text.removeprefix(INDENT)) for n, text in self.body]


def _numbered(text: str) -> list[Line]:
    return list(enumerate(text.splitlines(), start=1))


def read_fields(lines: list[Line]) -> dict[str, Field]:
    """Group numbered lines into fields.

    Raises
    ------
    DefinitionError
        On indented text before the first key, malformed keys or
        duplicate keys.
    """
    fields: dict[str, Field] = {}
    current = None
    for number, text in lines:
        if not text.strip() or text.lstrip().startswith("#"):
            continue
        if text[0].isspace():
            if current is None:
                raise DefinitionError("Indented line outside of any field", number)
            current.body.append((number, text.rstrip()))
            continue
        match = _KEY_RE.match(text)
        if match is None:
            raise DefinitionError(f"Expected 'key: value', got '{text.strip()}'", number)
        key = match["key"]
        if key in fields:
            raise DefinitionError(f"Duplicate field '{key}'", number)
        current = fields[key] = Field(number, match["value"])
    return fields


def _require(fields: Mapping[str, Field], key: str, last_line: int) -> Field:
    try:
        return fields[key]
    except KeyError:
        raise DefinitionError(f"Missing field '{key}'", last_line) from None


def _last_line(lines: list[Line]) -> int:
    return lines[-1][0] if lines else 1


def _body(field: Field) -> list[Line]:
    return [(n, text.strip()) for n, text in field.body_lines() if text.strip()]


def _word(alphabet: Alphabet, text: str, line: int) -> Word:
    try:
        return alphabet.parse(text)
    except SymbolError as exc:
        raise DefinitionError(str(exc), line) from None


def _symbol(alphabet: Alphabet, name: str, line: int) -> int:
    try:
        return alphabet.index(name)
    except SymbolError as exc:
        raise DefinitionError(str(exc), line) from None


def _int(field: Field, name: str) -> int:
    try:
        return int(field.value)
    except ValueError:
        raise DefinitionError(f"{name} must be an integer, got '{field.value}'", field.line) from None


def _matrix(field: Field) -> np.ndarray:
    rows = []
    for number, text in _body(field):
        try:
            rows.append([int(entry) for entry in text.split()])
        except ValueError:
            raise DefinitionError(f"Matrix rows hold integers, got '{text}'", number) from None
    if not rows or len({len(row) for row in rows}) != 1:
        raise DefinitionError("Matrix rows must be non-empty and of equal length", field.line)
    return np.array(rows, dtype=int)


def _emit_matrix(matrix) -> list[str]:
    return [INDENT + " ".join(str(int(v)) for v in row) for row in np.asarray(matrix)]


def _read_reference(ref: str, suffix: str) -> str:
    if ref.startswith(BUILTIN_PREFIX):
        name = ref.removeprefix(BUILTIN_PREFIX)
        resource = importlib.resources.files("lmshift").joinpath(f"data/{name}{suffix}")
        if not resource.is_file():
            raise DefinitionError(f"Unknown builtin '{name}'")
        return resource.read_text()
    path = pathlib.Path(ref)
    if not path.is_file():
        raise DefinitionError(f"No such file '{ref}'")
    return path.read_text()


# Shift definitions ##########################################################


def _alphabet(fields: Mapping[str, Field], last: int) -> Alphabet:
    field = _require(fields, "alphabet", last)
    names = field.value.split()
    if not names:
        raise DefinitionError("The alphabet is empty", field.line)
    try:
        return Alphabet(tuple(names))
    except ValueError as exc:
        raise DefinitionError(str(exc), field.line) from None


def _finite_type(fields, alphabet, last) -> SubshiftSpec:
    field = _require(fields, "forbidden", last)
    words = [_word(alphabet, text, n) for n, text in _body(field)]
    return FiniteType(alphabet, words)


def _markov(fields, alphabet, last) -> SubshiftSpec:
    return MarkovShift(alphabet, _matrix(_require(fields, "matrix", last)))


def _sofic(fields, alphabet, last) -> SubshiftSpec:
    graph = nx.MultiDiGraph()
    for number, text in _body(_require(fields, "edges", last)):
        parts = text.split()
        if len(parts) != 3:
            raise DefinitionError(f"Edges read 'source target label', got '{text}'", number)
        source, target, label = parts
        graph.add_edge(source, target, label=_symbol(alphabet, label, number))
    return SoficGraph(alphabet, graph)


def resolve_machine(ref: str) -> OneCounterAutomaton:
    """A builtin machine or a machine file."""
    if ref.startswith(BUILTIN_PREFIX):
        try:
            return builtin_oca(ref.removeprefix(BUILTIN_PREFIX))
        except MachineError as exc:
            raise DefinitionError(str(exc)) from None
    return parse_machine(_read_reference(ref, ""))


def _code(fields, alphabet, last) -> CodeSpec:
    field = _require(fields, "code", last)
    bound = _int(fields["bound"], "bound") if "bound" in fields else None
    if field.value:
        try:
            machine = resolve_machine(field.value)
        except DefinitionError as exc:
            if exc.line is not None:
                raise
            raise DefinitionError(str(exc), field.line) from None
        if machine.alphabet != alphabet:
            raise DefinitionError("The machine alphabet differs from the shift", field.line)
        return CodeSpec(alphabet, machine=machine, bound=bound)
    words = tuple(_word(alphabet, text, n) for n, text in _body(field))
    return CodeSpec(alphabet, explicit=words, bound=bound)


def _coded(fields, alphabet, last) -> SubshiftSpec:
    return Coded(_code(fields, alphabet, last))


def _index_map(field: Field, alphabet: Alphabet, gamma) -> dict[Word, str]:
    found = {}
    for number, text in _body(field):
        word, sep, index = text.rpartition("->")
        index = index.strip()
        if not sep or index not in gamma:
            raise DefinitionError(f"Expected 'word -> index' with a gamma index, got '{text}'", number)
        found[_word(alphabet, word, number)] = index
    return found


def _markov_coded(fields, alphabet, last) -> SubshiftSpec:
    code = _code(fields, alphabet, last)
    gamma = tuple(_require(fields, "gamma", last).value.split())
    s = _index_map(_require(fields, "s", last), alphabet, gamma)
    t = _index_map(_require(fields, "t", last), alphabet, gamma)
    matrix = _matrix(_require(fields, "A", last))
    return MarkovCoded(MarkovCode.from_matrix(code, gamma, s, t, matrix))


def _lind_marcus(fields, alphabet, last) -> SubshiftSpec:
    a_field = _require(fields, "a-symbols", last)
    a_symbols = [_symbol(alphabet, name, a_field.line) for name in a_field.value.split()]
    b_field = _require(fields, "b", last)
    c_field = _require(fields, "c", last)
    b = _symbol(alphabet, b_field.value, b_field.line)
    c = _symbol(alphabet, c_field.value, c_field.line)
    offset = _int(fields["offset"], "offset") if "offset" in fields else 0
    return LindMarcus(alphabet, a_symbols, b, c, offset)


_BUILDERS: dict[str, Callable] = {
    "finite-type": _finite_type,
    "markov": _markov,
    "sofic": _sofic,
    "coded": _coded,
    "markov-coded": _markov_coded,
    "lind-marcus": _lind_marcus,
}


def _nblock(fields, last) -> SubshiftSpec:
    n = _int(_require(fields, "n", last), "n")
    inner = _require(fields, "inner", last)
    if inner.value:
        try:
            spec = load_shift(inner.value)
        except DefinitionError as exc:
            if exc.line is not None:
                raise
            raise DefinitionError(str(exc), inner.line) from None
    else:
        spec = _parse_shift_lines(inner.body_lines())
    return NBlock(spec, n)


def _parse_shift_lines(lines: list[Line]) -> SubshiftSpec:
    fields = read_fields(lines)
    last = _last_line(lines)
    kind_field = _require(fields, "kind", last)
    kind = kind_field.value
    try:
        if kind == "nblock":
            if "alphabet" in fields:
                raise DefinitionError(
                    "An nblock definition takes its alphabet from the inner shift",
                    fields["alphabet"].line,
                )
            return _nblock(fields, last)
        if kind not in _BUILDERS:
            known = ", ".join(list(_BUILDERS) + ["nblock"])
            raise DefinitionError(f"Unknown kind '{kind}'; choose from {known}", kind_field.line)
        alphabet = _alphabet(fields, last)
        return _BUILDERS[kind](fields, alphabet, last)
    except (SpecError, MachineError) as exc:
        raise DefinitionError(str(exc), kind_field.line) from None


def parse_shift(text: str) -> SubshiftSpec:
    """Build a subshift from definition text.

    Raises
    ------
    DefinitionError
        With the offending line number; errors raised while constructing
        the subshift point at the ``kind:`` line.
    """
    return _parse_shift_lines(_numbered(text))


def load_shift(ref: str) -> SubshiftSpec:
    """Load ``builtin:<name>`` or a definition file."""
    spec = parse_shift(_read_reference(ref, ".shift"))
    _logger.debug(f"Loaded {spec} from {ref}")
    return spec


def _emit_words(alphabet: Alphabet, words) -> list[str]:
    return [INDENT + alphabet.render(w) for w in sorted(words, key=word_order)]


def _index_names(gamma) -> dict[Hashable, str]:
    if all(isinstance(g, str) and g and not g.split()[1:] for g in gamma):
        return {g: g for g in gamma}
    return {g: f"g{i}" for i, g in enumerate(gamma)}


def _emit_code(code: CodeSpec) -> list[str]:
    lines = []
    if code.machine is not None:
        if code.machine.name not in BUILTIN_MACHINES:
            raise DefinitionError("Only builtin machines can be referenced from a shift")
        lines.append(f"code: {BUILTIN_PREFIX}{code.machine.name}")
    else:
        lines.append("code:")
        lines += [INDENT + code.alphabet.render(w) for w in code.explicit]
    if code.bound is not None:
        lines.append(f"bound: {code.bound}")
    return lines


def emit_shift(spec: SubshiftSpec) -> str:
    """Definition text for ``spec``; :func:`parse_shift` reads it back.

    Raises
    ------
    DefinitionError
        For specs without a text form, e.g. reversed shifts.
    """
    if isinstance(spec, NBlock):
        inner = emit_shift(spec.inner).splitlines()
        lines = ["kind: nblock", f"n: {spec.n}", "inner:"]
        lines += [INDENT + line if line else line for line in inner]
        return "\n".join(lines) + "\n"
    if spec.kind not in _BUILDERS:
        raise DefinitionError(f"No text form for {type(spec).__name__} specs")
    alphabet = spec.alphabet
    lines = [f"alphabet: {' '.join(alphabet.names)}", f"kind: {spec.kind}"]
    if isinstance(spec, FiniteType):
        lines.append("forbidden:")
        lines += _emit_words(alphabet, spec.forbidden)
    elif isinstance(spec, MarkovShift):
        lines.append("matrix:")
        lines += _emit_matrix(spec.transition)
    elif isinstance(spec, SoficGraph):
        lines.append("edges:")
        edges = sorted(
            (str(u), str(v), alphabet.name(label))
            for u, v, label in spec.graph.edges(data="label")
        )
        lines += [INDENT + " ".join(edge) for edge in edges]
    elif isinstance(spec, Coded):
        lines += _emit_code(spec.code_spec)
    elif isinstance(spec, MarkovCoded):
        code = spec.code
        names = _index_names(code.gamma)
        lines += _emit_code(code.code)
        lines.append(f"gamma: {' '.join(names[g] for g in code.gamma)}")
        for key, mapping in (("s", code.s), ("t", code.t)):
            lines.append(f"{key}:")
            lines += [
                f"{INDENT}{alphabet.render(w)} -> {names[mapping[w]]}"
                for w in code.code.words
            ]
        lines.append("A:")
        lines += _emit_matrix(code.matrix())
    elif isinstance(spec, LindMarcus):
        a_names = " ".join(alphabet.name(s) for s in sorted(spec.a_symbols))
        lines += [
            f"a-symbols: {a_names}",
            f"b: {alphabet.name(spec.b)}",
            f"c: {alphabet.name(spec.c)}",
        ]
        if spec.offset:
            lines.append(f"offset: {spec.offset}")
    return "\n".join(lines) + "\n"


# One-counter machines #######################################################


def parse_machine(text: str) -> OneCounterAutomaton:
    """Read a machine: ``alphabet``, ``initial``, ``accepting``, ``transitions``.

    Transition lines read ``state symbol zero|pos -> state delta``.
    """
    lines = _numbered(text)
    fields = read_fields(lines)
    last = _last_line(lines)
    alphabet = _alphabet(fields, last)
    initial = _require(fields, "initial", last).value
    accepting = frozenset(_require(fields, "accepting", last).value.split())
    name = fields["name"].value if "name" in fields else ""
    transitions: dict[tuple[str, int, bool], set[tuple[str, int]]] = {}
    states = {initial} | set(accepting)
    for number, line in _body(_require(fields, "transitions", last)):
        match = _TRANSITION_RE.match(line)
        if match is None:
            raise DefinitionError(
                f"Expected 'state symbol zero|pos -> state delta', got '{line}'", number
            )
        symbol = _symbol(alphabet, match["symbol"], number)
        key = (match["state"], symbol, match["test"] == "zero")
        transitions.setdefault(key, set()).add((match["target"], int(match["delta"])))
        states |= {match["state"], match["target"]}
    try:
        return OneCounterAutomaton(
            alphabet=alphabet,
            states=frozenset(states),
            initial=initial,
            accepting=accepting,
            transitions={k: frozenset(v) for k, v in transitions.items()},
            name=name,
        )
    except MachineError as exc:
        raise DefinitionError(str(exc), _require(fields, "transitions", last).line) from None


def emit_machine(machine: OneCounterAutomaton) -> str:
    alphabet = machine.alphabet
    lines = [f"alphabet: {' '.join(alphabet.names)}"]
    if machine.name:
        lines.append(f"name: {machine.name}")
    lines += [
        f"initial: {machine.initial}",
        f"accepting: {' '.join(sorted(machine.accepting))}",
        "transitions:",
    ]
    rows = sorted(
        (state, symbol, not zero, target, delta)
        for (state, symbol, zero), moves in machine.transitions.items()
        for target, delta in moves
    )
    for state, symbol, positive, target, delta in rows:
        test = "pos" if positive else "zero"
        lines.append(
            f"{INDENT}{state} {alphabet.name(symbol)} {test} -> {target} {delta:+d}"
        )
    return "\n".join(lines) + "\n"


# Block maps #################################################################


def parse_block_map(text: str, source: Alphabet, target: Alphabet) -> BlockMap:
    """Read ``radius:`` and a ``map:`` body of ``window -> symbol`` lines."""
    lines = _numbered(text)
    fields = read_fields(lines)
    last = _last_line(lines)
    radius = _int(_require(fields, "radius", last), "radius")
    table = {}
    for number, line in _body(_require(fields, "map", last)):
        window, sep, symbol = line.rpartition("->")
        if not sep:
            raise DefinitionError(f"Expected 'window -> symbol', got '{line}'", number)
        key = _word(source, window, number)
        if len(key) != 2 * radius + 1:
            raise DefinitionError(f"Window of length {len(key)} for radius {radius}", number)
        if key in table:
            raise DefinitionError(f"Window '{window.strip()}' is mapped twice", number)
        table[key] = _symbol(target, symbol.strip(), number)
    return BlockMap(source, target, radius, table)


def emit_block_map(m: BlockMap) -> str:
    lines = [f"radius: {m.radius}", "map:"]
    lines += [
        f"{INDENT}{m.source.render(w)} -> {m.target.name(m.table[w])}"
        for w in sorted(m.table, key=word_order)
    ]
    return "\n".join(lines) + "\n"


def load_block_map(ref: str, source: Alphabet, target: Alphabet) -> BlockMap:
    return parse_block_map(_read_reference(ref, ".map"), source, target)


# Parameters #################################################################


def _pair_entries(field: Field, parse_key) -> dict:
    found = {}
    for number, line in _body(field):
        key_text, sep, set_text = line.partition("->")
        if not sep:
            raise DefinitionError(f"Expected 'pair -> set', got '{line}'", number)
        try:
            values = UltimatelyPeriodicSet.parse(set_text)
        except ValueError as exc:
            raise DefinitionError(str(exc), number) from None
        key = parse_key(key_text, number)
        if key in found:
            raise DefinitionError("Pair is given twice", number)
        found[key] = values
    return found


def parse_params(text: str, alphabet: Alphabet) -> LmParameters:
    """Read ``I``, ``J-minus``, ``J-plus`` and the Δ bodies.

    Minus entries read ``σ | d -> set``, plus entries ``d | σ -> set``,
    with ``ε`` for an empty bridge.
    """
    lines = _numbered(text)
    fields = read_fields(lines)
    last = _last_line(lines)

    def halves(text, number):
        left, sep, right = text.partition("|")
        if not sep:
            raise DefinitionError(f"Expected a '|' between symbol and bridge, got '{text}'", number)
        return left.strip(), right.strip()

    def minus_key(text, number):
        sigma, bridge = halves(text, number)
        return _symbol(alphabet, sigma, number), _word(alphabet, bridge, number)

    def plus_key(text, number):
        bridge, sigma = halves(text, number)
        return _word(alphabet, bridge, number), _symbol(alphabet, sigma, number)

    try:
        return LmParameters(
            i=_int(_require(fields, "I", last), "I"),
            j_minus=_int(_require(fields, "J-minus", last), "J-minus"),
            j_plus=_int(_require(fields, "J-plus", last), "J-plus"),
            delta_minus=_pair_entries(_require(fields, "delta-minus", last), minus_key),
            delta_plus=_pair_entries(_require(fields, "delta-plus", last), plus_key),
        )
    except ParameterError as exc:
        raise DefinitionError(str(exc), _require(fields, "I", last).line) from None


def delta_entries(params: LmParameters, alphabet: Alphabet) -> tuple[list[str], list[str]]:
    """The Δ⁻ and Δ⁺ entries as ``σ | d -> set`` and ``d | σ -> set`` lines."""
    minus = [
        f"{alphabet.name(sigma)} | {alphabet.render(d)} -> {values}"
        for (sigma, d), values in sorted(
            params.delta_minus.items(),
            key=lambda item: (item[0][0], word_order(item[0][1])),
        )
    ]
    plus = [
        f"{alphabet.render(d)} | {alphabet.name(sigma)} -> {values}"
        for (d, sigma), values in sorted(
            params.delta_plus.items(),
            key=lambda item: (item[0][1], word_order(item[0][0])),
        )
    ]
    return minus, plus


def emit_params(params: LmParameters, alphabet: Alphabet) -> str:
    minus, plus = delta_entries(params, alphabet)
    lines = [
        f"I: {params.i}",
        f"J-minus: {params.j_minus}",
        f"J-plus: {params.j_plus}",
        "delta-minus:",
        *(INDENT + entry for entry in minus),
        "delta-plus:",
        *(INDENT + entry for entry in plus),
    ]
    return "\n".join(lines) + "\n"


def load_params(ref: str, alphabet: Alphabet) -> LmParameters:
    return parse_params(_read_reference(ref, ".params"), alphabet)
