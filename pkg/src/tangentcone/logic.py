"""Three-valued verdicts used wherever truncation can leave a sign undecided."""
from __future__ import annotations

from dataclasses import dataclass

__all__ = ["Verdict3", "TRUE", "FALSE", "unknown", "Indeterminate"]


class Indeterminate(ArithmeticError):
    """A sign or valuation depends on coefficients beyond the known truncation."""


@dataclass(frozen=True)
class Verdict3:
    value: bool | None
    reason: str = ""

    @property
    def is_true(self) -> bool:
        return self.value is True

    @property
    def is_false(self) -> bool:
        return self.value is False

    @property
    def is_unknown(self) -> bool:
        return self.value is None

    def __and__(self, other: "Verdict3") -> "Verdict3":
        if self.is_false:
            return self
        if other.is_false:
            return other
        if self.is_unknown:
            return self
        return other

    def __or__(self, other: "Verdict3") -> "Verdict3":
        if self.is_true:
            return self
        if other.is_true:
            return other
        if self.is_unknown:
            return self
        return other

    def __invert__(self) -> "Verdict3":
        if self.value is None:
            return self
        return TRUE if self.value is False else FALSE

    def __bool__(self):
        raise TypeError("use .is_true / .is_false on a Verdict3")

    def label(self) -> str:
        return {True: "true", False: "false", None: "indeterminate"}[self.value]


TRUE = Verdict3(True)
FALSE = Verdict3(False)


def unknown(reason: str) -> Verdict3:
    return Verdict3(None, reason)
