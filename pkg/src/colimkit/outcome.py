from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any


class Verdict(str, enum.Enum):
    """Outcome of a bounded equality question.

    Path questions answer EQUAL / NOT_EQUAL_WITHIN_BOUND / INCONCLUSIVE;
    grid questions answer EQUAL / BOUNDARY_MISMATCH / NOT_PROVEN.
    """

    EQUAL = "Equal"
    NOT_EQUAL_WITHIN_BOUND = "NotEqualWithinBound"
    INCONCLUSIVE = "Inconclusive"
    BOUNDARY_MISMATCH = "BoundaryMismatch"
    NOT_PROVEN = "NotProven"

    @property
    def exit_code(self) -> int:
        if self is Verdict.EQUAL:
            return 0
        if self in (Verdict.NOT_EQUAL_WITHIN_BOUND, Verdict.BOUNDARY_MISMATCH):
            return 1
        return 2


@dataclass
class Report:
    """A list of violations; an empty list means the check passed."""

    check: str
    violations: list[dict[str, Any]] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, **witness: Any) -> None:
        self.violations.append(witness)
