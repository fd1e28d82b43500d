"""
Ultimately periodic sets of non-negative integers.

A set is given by a finite part below a threshold and, from the threshold
on, a set of residues modulo a period. Period 0 means the set is finite.
The text form used in reports and parameter files is ``{0,2}`` for finite
sets and ``{0,2}|n>=4,n%3 in {1}`` for periodic ones.
"""

import dataclasses
import logging
import math
import re
from typing import Iterable

_logger = logging.getLogger(__name__)

_TEXT_RE = re.compile(
    r"^\{(?P<base>[0-9,\s]*)\}"
    r"(?:\s*\|\s*n\s*>=\s*(?P<threshold>\d+)\s*,\s*n\s*%\s*(?P<period>\d+)"
    r"\s+in\s+\{(?P<residues>[0-9,\s]*)\})?$"
)


def _int_set(text: str) -> frozenset[int]:
    return frozenset(int(part) for part in text.split(",") if part.strip())


def _show(values: Iterable[int]) -> str:
    return "{" + ",".join(str(v) for v in sorted(values)) + "}"


@dataclasses.dataclass(frozen=True)
class UltimatelyPeriodicSet:
    """Subset of ℤ₊: ``base`` below ``threshold``, then ``residues`` mod ``period``."""

    base: frozenset[int] = frozenset()
    threshold: int = 0
    period: int = 0
    residues: frozenset[int] = frozenset()

    def __post_init__(self):
        if any(n < 0 for n in self.base):
            raise ValueError(f"Negative element in {sorted(self.base)}")
        if self.period < 0 or self.threshold < 0:
            raise ValueError("Period and threshold must be non-negative")
        if self.period == 0:
            if self.residues:
                raise ValueError("A finite set carries no residues")
            object.__setattr__(self, "threshold", 0)
        else:
            if any(not 0 <= r < self.period for r in self.residues):
                raise ValueError(f"Residues must lie in [0, {self.period})")
            if any(n >= self.threshold for n in self.base):
                raise ValueError("Base elements must lie below the threshold")
        object.__setattr__(self, "base", frozenset(self.base))
        object.__setattr__(self, "residues", frozenset(self.residues))

    @classmethod
    def finite(cls, values: Iterable[int]) -> "UltimatelyPeriodicSet":
        return cls(base=frozenset(values))

    @classmethod
    def parse(cls, text: str) -> "UltimatelyPeriodicSet":
        match = _TEXT_RE.match(text.strip())
        if match is None:
            raise ValueError(f"Cannot read an ultimately periodic set from '{text}'")
        base = _int_set(match["base"])
        if match["period"] is None:
            return cls.finite(base)
        return cls(
            base=base,
            threshold=int(match["threshold"]),
            period=int(match["period"]),
            residues=_int_set(match["residues"]),
        )

    def __str__(self):
        text = _show(self.base)
        if self.period:
            text += (
                f"|n>={self.threshold},n%{self.period} in {_show(self.residues)}"
            )
        return text

    def __contains__(self, n: int) -> bool:
        if n < 0:
            return False
        if self.period and n >= self.threshold:
            return n % self.period in self.residues
        return n in self.base

    @property
    def is_finite(self) -> bool:
        return self.period == 0 or not self.residues

    @property
    def horizon(self) -> int:
        """Every element at or beyond the horizon is governed by the period."""
        if self.period:
            return self.threshold
        return max(self.base) + 1 if self.base else 0

    def expand(self, upto: int) -> list[int]:
        """Sorted elements ``n <= upto``."""
        return [n for n in range(upto + 1) if n in self]

    def min(self) -> int | None:
        found = self.expand(self.horizon + max(self.period, 1))
        return found[0] if found else None

    def shifted(self, offset: int) -> "UltimatelyPeriodicSet":
        """``{n + offset}``, dropping anything that would become negative."""
        base = {n + offset for n in self.base if n + offset >= 0}
        if not self.period:
            return UltimatelyPeriodicSet.finite(base)
        threshold = self.threshold + offset
        if threshold < 0:
            # elements of the periodic part that fall below zero are dropped
            threshold = 0
        residues = {(r + offset) % self.period for r in self.residues}
        base = {n for n in base if n < threshold}
        return UltimatelyPeriodicSet(base, threshold, self.period, residues)

    def _common_period(self, other: "UltimatelyPeriodicSet") -> int:
        return math.lcm(self.period or 1, other.period or 1)

    def union(self, other: "UltimatelyPeriodicSet") -> "UltimatelyPeriodicSet":
        if not self.period and not other.period:
            return UltimatelyPeriodicSet.finite(self.base | other.base)
        period = self._common_period(other)
        threshold = max(self.horizon, other.horizon)
        base = {n for n in range(threshold) if n in self or n in other}
        residues = {
            r
            for r in range(period)
            if (rep := threshold + (r - threshold) % period) in self
            or rep in other
        }
        return UltimatelyPeriodicSet(base, threshold, period, residues)

    def __or__(self, other):
        return self.union(other)

    def intersects(self, other: "UltimatelyPeriodicSet") -> bool:
        """True if the two sets share an element."""
        limit = max(self.horizon, other.horizon) + self._common_period(other)
        return any(n in self and n in other for n in range(limit))

    @classmethod
    def fit(cls, values: Iterable[int], upto: int) -> "UltimatelyPeriodicSet":
        """Guess an ultimately periodic set from its elements up to ``upto``.

        Finite sets whose largest element sits in the lower half of the
        observation window are kept finite. Otherwise the smallest period,
        then the smallest threshold, that explains the window with at least
        two full periods is used; failing that the finite reading is kept.
        """
        values = frozenset(n for n in values if 0 <= n <= upto)
        if not values or max(values) <= upto // 2:
            return cls.finite(values)
        for period in range(1, upto // 2 + 1):
            for threshold in range(0, upto - 2 * period + 2):
                if all(
                    (n in values) == (n + period in values)
                    for n in range(threshold, upto - period + 1)
                ):
                    residues = {n % period for n in values if n >= threshold}
                    base = {n for n in values if n < threshold}
                    _logger.debug(
                        f"Fitted period {period} from threshold {threshold}"
                    )
                    return cls(base, threshold, period, residues)
        return cls.finite(values)
